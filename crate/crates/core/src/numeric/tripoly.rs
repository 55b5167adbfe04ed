//! Homogeneous polynomials in three variables.

use nalgebra::Matrix3;

use super::{Complex, UniPoly};

/// Homogeneous polynomial of degree `d` in `x, y, z`.
///
/// Coefficients are stored densely, one per exponent triple `(i, j, k)` with
/// `i + j + k = d`, ordered by descending `i` and then descending `j`
/// (for cubics: 300, 210, 201, 120, 111, 102, 030, 021, 012, 003).
#[derive(Debug, Clone, PartialEq)]
pub struct TriPoly {
    degree: u32,
    coeffs: Vec<Complex>,
}

/// Exponent triples of degree `d` in storage order.
pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

fn index_of(d: u32, e: [u32; 3]) -> usize {
    // Number of monomials with first exponent > e[0], plus offset within the block.
    let i = e[0];
    let before: u32 = ((i + 1)..=d).map(|ii| d - ii + 1).sum();
    (before + (d - i - e[1])) as usize
}

impl TriPoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: vec![Complex::new(0.0, 0.0); ((degree + 1) * (degree + 2) / 2) as usize],
        }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate. Panics if an exponent has the wrong total degree.
    pub fn from_terms(degree: u32, terms: &[([u32; 3], Complex)]) -> Self {
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            assert_eq!(e.iter().sum::<u32>(), degree, "exponent {e:?} not of degree {degree}");
            p.coeffs[index_of(degree, *e)] += c;
        }
        p
    }

    pub fn from_dense(degree: u32, coeffs: Vec<Complex>) -> Self {
        assert_eq!(coeffs.len(), ((degree + 1) * (degree + 2) / 2) as usize);
        Self { degree, coeffs }
    }

    /// The linear form `l0 x + l1 y + l2 z`.
    pub fn linear(l: [Complex; 3]) -> Self {
        Self::from_terms(1, &[([1, 0, 0], l[0]), ([0, 1, 0], l[1]), ([0, 0, 1], l[2])])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [u32; 3]) -> Complex {
        if e.iter().sum::<u32>() != self.degree {
            return Complex::new(0.0, 0.0);
        }
        self.coeffs[index_of(self.degree, e)]
    }

    pub fn set_coeff(&mut self, e: [u32; 3], c: Complex) {
        let d = self.degree;
        self.coeffs[index_of(d, e)] = c;
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], Complex)> + '_ {
        monomials(self.degree).into_iter().zip(self.coeffs.iter().copied())
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, v: &[Complex; 3]) -> Complex {
        let d = self.degree as usize;
        let mut pows = [[Complex::new(1.0, 0.0); 8]; 3];
        for (var, p) in pows.iter_mut().enumerate() {
            for e in 1..=d.min(7) {
                p[e] = p[e - 1] * v[var];
            }
        }
        if d > 7 {
            return self
                .terms()
                .map(|(e, c)| c * v[0].powu(e[0]) * v[1].powu(e[1]) * v[2].powu(e[2]))
                .sum();
        }
        self.terms()
            .map(|(e, c)| c * pows[0][e[0] as usize] * pows[1][e[1] as usize] * pows[2][e[2] as usize])
            .sum()
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, var: usize) -> TriPoly {
        if self.degree == 0 {
            return TriPoly::zero(0);
        }
        let mut out = TriPoly::zero(self.degree - 1);
        for (e, c) in self.terms() {
            if e[var] > 0 {
                let mut f = e;
                f[var] -= 1;
                out.coeffs[index_of(self.degree - 1, f)] += c * e[var] as f64;
            }
        }
        out
    }

    pub fn scale(&self, s: Complex) -> TriPoly {
        TriPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &TriPoly) -> TriPoly {
        assert_eq!(self.degree, other.degree);
        TriPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &TriPoly) -> TriPoly {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero(self.degree + other.degree);
        for (ea, a) in self.terms() {
            if a.norm() == 0.0 {
                continue;
            }
            for (eb, b) in other.terms() {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.coeffs[index_of(out.degree, e)] += a * b;
            }
        }
        out
    }

    /// The polynomial `v -> self(m v)`.
    pub fn substitute(&self, m: &Matrix3<Complex>) -> TriPoly {
        let forms: Vec<TriPoly> = (0..3)
            .map(|r| TriPoly::linear([m[(r, 0)], m[(r, 1)], m[(r, 2)]]))
            .collect();
        let one = TriPoly::from_terms(0, &[([0, 0, 0], Complex::new(1.0, 0.0))]);
        let powers: Vec<Vec<TriPoly>> = forms
            .iter()
            .map(|l| {
                let mut p = vec![one.clone()];
                for _ in 0..self.degree {
                    let next = p.last().unwrap().mul(l);
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = TriPoly::zero(self.degree);
        for (e, c) in self.terms() {
            if c.norm() == 0.0 {
                continue;
            }
            let term = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize]);
            out = out.add(&term.scale(c));
        }
        out
    }

    /// Restriction to the line `s p + t q`: entry `k` is the coefficient of
    /// `s^(d-k) t^k` in the binary form.
    pub fn restrict_to_line(&self, p: &[Complex; 3], q: &[Complex; 3]) -> Vec<Complex> {
        let d = self.degree as usize;
        let lines: Vec<UniPoly> = (0..3).map(|i| UniPoly::new(vec![p[i], q[i]])).collect();
        let mut out = vec![Complex::new(0.0, 0.0); d + 1];
        for (e, c) in self.terms() {
            if c.norm() == 0.0 {
                continue;
            }
            let prod = lines[0]
                .pow(e[0])
                .mul(&lines[1].pow(e[1]))
                .mul(&lines[2].pow(e[2]));
            for (k, v) in prod.coeffs().iter().enumerate() {
                out[k] += c * v;
            }
        }
        out
    }

    /// Coefficients in `y` (lowest first, formal length `d + 1`) of
    /// `self(x, y, 1)` at a fixed value of `x`.
    pub fn coefficients_in_y(&self, x: Complex) -> Vec<Complex> {
        let d = self.degree as usize;
        let mut out = vec![Complex::new(0.0, 0.0); d + 1];
        for (e, c) in self.terms() {
            out[e[1] as usize] += c * x.powu(e[0]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn storage_order_for_cubics() {
        let m = monomials(3);
        let expected = [
            [3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 2, 0], [1, 1, 1],
            [1, 0, 2], [0, 3, 0], [0, 2, 1], [0, 1, 2], [0, 0, 3],
        ];
        assert_eq!(m, expected);
        for (i, e) in m.iter().enumerate() {
            assert_eq!(index_of(3, *e), i);
        }
    }

    #[test]
    fn substitution_agrees_with_evaluation() {
        let f = TriPoly::from_dense(3, (0..10).map(|i| c(i as f64 * 0.3 - 1.0, 0.1 * i as f64)).collect());
        let m = Matrix3::new(
            c(1.0, 0.5), c(0.0, 1.0), c(2.0, 0.0),
            c(-1.0, 0.0), c(0.3, 0.3), c(0.0, 0.0),
            c(0.5, 0.0), c(1.0, -1.0), c(1.0, 0.0),
        );
        let g = f.substitute(&m);
        let v = [c(0.2, 0.1), c(-0.7, 0.4), c(1.1, -0.3)];
        let mv = [0, 1, 2].map(|r| m[(r, 0)] * v[0] + m[(r, 1)] * v[1] + m[(r, 2)] * v[2]);
        assert!((g.eval(&v) - f.eval(&mv)).norm() < 1e-12);
    }

    #[test]
    fn line_restriction() {
        let f = TriPoly::from_terms(3, &[([3, 0, 0], c(1.0, 0.0)), ([0, 3, 0], c(1.0, 0.0)), ([0, 0, 3], c(1.0, 0.0))]);
        let p = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let q = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        // f(p + t q) = 1 + 2 t^3
        let r = f.restrict_to_line(&p, &q);
        assert_eq!(r, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
    }
}
