//! Dense univariate polynomials over the complex numbers, root solving and resultants.

use nalgebra::DMatrix;

use super::Complex;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex>,
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex,
    pub multiplicity: usize,
}

impl UniPoly {
    /// Builds a polynomial from coefficients (lowest degree first); exact zero
    /// leading coefficients are trimmed.
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `x - r`.
    pub fn linear_root(r: Complex) -> Self {
        Self::new(vec![-r, Complex::new(1.0, 0.0)])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::new(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == Complex::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, x: Complex) -> (Complex, Complex) {
        let zero = Complex::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// Evaluation scale `sum |c_i| |x|^i`, the natural yardstick for residuals.
    pub fn eval_scale(&self, x: Complex) -> f64 {
        let r = x.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(0.0, 0.0);
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        + other.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Complex::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Polynomial long division; returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut quot = vec![Complex::new(0.0, 0.0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Drops leading coefficients that are negligible relative to the largest one.
    pub fn trim_relative(&self, tol: f64) -> Self {
        let cut = tol * self.norm_inf();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }
}

/// Roots of `p` with multiplicities summing to its degree.
///
/// Eigenvalues of the balanced companion matrix give first approximations,
/// which are then polished by Newton's method on `p` and merged when they lie
/// within the clustering tolerance of each other.
pub fn solve_univariate(p: &UniPoly, tol: &Tolerances) -> Result<Vec<Root>> {
    if p.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    // Zero roots are split off exactly.
    let zeros = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = UniPoly::new(p.coeffs[zeros..].to_vec());
    let mut approx: Vec<Complex> = vec![Complex::new(0.0, 0.0); zeros];
    if reduced.degree() > 0 {
        approx.extend(companion_eigenvalues(&reduced)?);
    }
    let polished: Vec<Complex> = approx.into_iter().map(|r| polish_root(p, r)).collect();
    for r in &polished {
        let resid = p.eval(*r).norm();
        let scale = p.eval_scale(*r);
        if !(resid <= tol.root.max(1e-6) * scale) || !r.re.is_finite() || !r.im.is_finite() {
            return Err(Error::Numerical(format!(
                "root {r} has residual {resid:.3e} at scale {scale:.3e}"
            )));
        }
    }
    Ok(cluster_roots(polished, tol.cluster))
}

fn polish_root(p: &UniPoly, mut r: Complex) -> Complex {
    let mut best = p.eval(r).norm();
    for _ in 0..60 {
        let (v, dv) = p.eval_with_derivative(r);
        if v.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        let next = r - v / dv;
        let nv = p.eval(next).norm();
        if !(nv < best) {
            break;
        }
        let moved = (next - r).norm();
        r = next;
        best = nv;
        if moved <= 1e-16 * r.norm() {
            break;
        }
    }
    r
}

fn cluster_roots(roots: Vec<Complex>, cluster_tol: f64) -> Vec<Root> {
    let n = roots.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while g[i] != i {
            g[i] = g[g[i]];
            i = g[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= cluster_tol * scale {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[b] = a;
                }
            }
        }
    }
    let mut out: Vec<(usize, Complex, usize)> = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        let g = find(&mut group, i);
        match out.iter_mut().find(|(gg, _, _)| *gg == g) {
            Some(entry) => {
                entry.1 += r;
                entry.2 += 1;
            }
            None => out.push((g, *r, 1)),
        }
    }
    out.into_iter()
        .map(|(_, sum, m)| Root {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

fn companion_eigenvalues(p: &UniPoly) -> Result<Vec<Complex>> {
    let n = p.degree();
    let lead = p.leading();
    if n == 1 {
        return Ok(vec![-p.coeffs[0] / lead]);
    }
    let mut c = DMatrix::<Complex>::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..n {
        c[(i, n - 1)] = -p.coeffs[i] / lead;
    }
    balance(&mut c);
    let schur = nalgebra::linalg::Schur::try_new(c, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("companion eigenvalues did not converge".into()))?;
    let eig = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("companion eigenvalues unavailable".into()))?;
    Ok(eig.iter().copied().collect())
}

/// Diagonal similarity scaling (Parlett–Reinsch) to equalize row and column norms.
fn balance(m: &mut DMatrix<Complex>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    for _ in 0..100 {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Resultant via the Sylvester determinant, with the convention
/// `res(p, q) = lead(p)^deg(q) * prod q(alpha)` over the roots `alpha` of `p`.
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<Complex> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 || q.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    Ok(sylvester_determinant(&p.coeffs, &q.coeffs))
}

/// Sylvester determinant of two coefficient vectors (lowest degree first) with
/// formal degrees `len - 1`; leading coefficients are not required to be nonzero.
pub(crate) fn sylvester_determinant(p: &[Complex], q: &[Complex]) -> Complex {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut s = DMatrix::<Complex>::zeros(size, size);
    for row in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s[(row, row + k)] = *c;
        }
    }
    for row in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s[(n + row, row + k)] = *c;
        }
    }
    s.determinant()
}
