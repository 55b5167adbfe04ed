//! Division polynomials of a short Weierstrass curve `y^2 = x^3 + A x + B`.

use std::collections::BTreeMap;

use crate::numeric::{cr, Complex, UniPoly};

/// Division polynomials with the factor `y` removed from even indices:
/// `psi_n = h_n` for odd `n` and `psi_n = y h_n` for even `n`, so every
/// `h_n` is a polynomial in `x` alone.
#[derive(Debug, Clone)]
pub struct DivisionPolynomials {
    a: Complex,
    b: Complex,
    cubic: UniPoly,
    cache: BTreeMap<u32, UniPoly>,
}

impl DivisionPolynomials {
    pub fn new(a: Complex, b: Complex) -> Self {
        let cubic = UniPoly::new(vec![b, a, cr(0.0), cr(1.0)]);
        let mut cache = BTreeMap::new();
        cache.insert(0, UniPoly::zero());
        cache.insert(1, UniPoly::constant(cr(1.0)));
        cache.insert(2, UniPoly::constant(cr(2.0)));
        cache.insert(
            3,
            UniPoly::new(vec![-a * a, b * 12.0, a * 6.0, cr(0.0), cr(3.0)]),
        );
        cache.insert(
            4,
            UniPoly::new(vec![
                -(b * b * 8.0 + a.powu(3)),
                -(a * b * 4.0),
                -(a * a * 5.0),
                b * 20.0,
                a * 5.0,
                cr(0.0),
                cr(1.0),
            ])
            .scale(cr(4.0)),
        );
        Self { a, b, cubic, cache }
    }

    pub fn coefficients(&self) -> (Complex, Complex) {
        (self.a, self.b)
    }

    /// `x^3 + A x + B`.
    pub fn cubic(&self) -> &UniPoly {
        &self.cubic
    }

    /// `h_n` (see the type documentation).
    pub fn h(&mut self, n: u32) -> UniPoly {
        if let Some(p) = self.cache.get(&n) {
            return p.clone();
        }
        let m = n / 2;
        let value = if n % 2 == 1 {
            // psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m-1} psi_{m+1}^3
            let (h0, h1, h2, h3) = (self.h(m - 1), self.h(m), self.h(m + 1), self.h(m + 2));
            let f2 = self.cubic.mul(&self.cubic);
            let a = h3.mul(&h1.pow(3));
            let b = h0.mul(&h2.pow(3));
            if m % 2 == 0 {
                f2.mul(&a).sub(&b)
            } else {
                a.sub(&f2.mul(&b))
            }
        } else {
            // psi_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / (2y)
            let (hm2, hm1, h, hp1, hp2) = (
                self.h(m - 2),
                self.h(m - 1),
                self.h(m),
                self.h(m + 1),
                self.h(m + 2),
            );
            h.mul(&hp2.mul(&hm1.pow(2)).sub(&hm2.mul(&hp1.pow(2))))
                .scale(cr(0.5))
        };
        self.cache.insert(n, value.clone());
        value
    }

    /// `psi_n^2` as a polynomial in `x`.
    pub fn psi_squared(&mut self, n: u32) -> UniPoly {
        let h = self.h(n);
        let sq = h.mul(&h);
        if n % 2 == 0 {
            sq.mul(&self.cubic)
        } else {
            sq
        }
    }

    /// `phi_n = x psi_n^2 - psi_{n+1} psi_{n-1}`, so that `x(nP) = phi_n / psi_n^2`.
    pub fn phi(&mut self, n: u32) -> UniPoly {
        assert!(n >= 1);
        let x = UniPoly::x();
        let neighbours = self.h(n + 1).mul(&self.h(n - 1));
        let neighbours = if n % 2 == 1 {
            neighbours.mul(&self.cubic)
        } else {
            neighbours
        };
        x.mul(&self.psi_squared(n)).sub(&neighbours)
    }

    /// `phi_n - x_t psi_n^2`, whose roots are the `x`-coordinates of the
    /// points `P` with `x(nP) = x_t`.
    pub fn preimage_polynomial(&mut self, n: u32, x_t: Complex) -> UniPoly {
        self.phi(n).sub(&self.psi_squared(n).scale(x_t))
    }
}
