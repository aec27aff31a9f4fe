//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial lives in a fixed ambient variable set determined by its
//! construction site: the calculus on `R^m` uses `2m` variables, the base
//! block `x_0 .. x_{m-1}` followed by the fiber block `xi_0 .. xi_{m-1}`.
//! Terms are keyed by dense exponent vectors of length `2m`; the `BTreeMap`
//! key order (lexicographic on the exponent vector) fixes a deterministic
//! iteration order for serialization and linear algebra.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::{format_rational, Rational};

/// Dense exponent vector; length is `2m` for polynomials on `R^m`.
pub type Exponents = Vec<u32>;

/// Sparse polynomial in `x_0..x_{m-1}, xi_0..xi_{m-1}` with rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    /// Number of base variables `m`; the variable count is `2m`.
    m: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    /// The zero polynomial on `R^m`.
    pub fn zero(m: usize) -> Self {
        MultiPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial `c`.
    pub fn constant(m: usize, c: Rational) -> Self {
        let mut p = Self::zero(m);
        p.add_term(vec![0; 2 * m], c);
        p
    }

    /// The constant polynomial `1`.
    pub fn one(m: usize) -> Self {
        Self::constant(m, Rational::from_integer(1.into()))
    }

    /// Monomial `c * x^a xi^b` where `a` and `b` each have length `m`.
    pub fn monomial(m: usize, a: &[u32], b: &[u32], c: Rational) -> Self {
        assert_eq!(a.len(), m, "base exponent block must have length m");
        assert_eq!(b.len(), m, "fiber exponent block must have length m");
        let mut e = Vec::with_capacity(2 * m);
        e.extend_from_slice(a);
        e.extend_from_slice(b);
        let mut p = Self::zero(m);
        p.add_term(e, c);
        p
    }

    /// The base variable `x_i`.
    pub fn var_x(m: usize, i: usize) -> Self {
        assert!(i < m);
        let mut e = vec![0; 2 * m];
        e[i] = 1;
        let mut p = Self::zero(m);
        p.add_term(e, Rational::from_integer(1.into()));
        p
    }

    /// The fiber variable `xi_i`.
    pub fn var_xi(m: usize, i: usize) -> Self {
        assert!(i < m);
        let mut e = vec![0; 2 * m];
        e[m + i] = 1;
        let mut p = Self::zero(m);
        p.add_term(e, Rational::from_integer(1.into()));
        p
    }

    /// Number of base variables `m`.
    pub fn base_vars(&self) -> usize {
        self.m
    }

    /// True if this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term iterator in the canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Add `c * x^e` into this polynomial, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        assert_eq!(e.len(), 2 * self.m, "exponent vector must have length 2m");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient of the monomial with exponent vector `e` (zero if absent).
    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Scale by a rational constant.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        let mut out = Self::zero(self.m);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    /// Partial derivative with respect to base variable `x_i`.
    pub fn d_x(&self, i: usize) -> Self {
        assert!(i < self.m);
        self.derivative(i)
    }

    /// Partial derivative with respect to fiber variable `xi_i`.
    pub fn d_xi(&self, i: usize) -> Self {
        assert!(i < self.m);
        self.derivative(self.m + i)
    }

    fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            out.add_term(e2, c * Rational::from_integer(e[v].into()));
        }
        out
    }

    /// Total degree in the base block (max over terms), or `None` for zero.
    pub fn degree_x(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e[..self.m].iter().sum())
            .max()
    }

    /// Total degree in the fiber block (max over terms), or `None` for zero.
    pub fn degree_xi(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e[self.m..].iter().sum())
            .max()
    }

    /// True if every term has fiber degree exactly `k`.
    pub fn is_xi_homogeneous(&self, k: u32) -> bool {
        self.terms
            .keys()
            .all(|e| e[self.m..].iter().sum::<u32>() == k)
    }

    /// Canonical text form: terms in key order, each `c * x0^a .. xi0^b ..`.
    ///
    /// This is the serialization format used by reports and golden files; it
    /// is total-order deterministic because the term map is ordered.
    pub fn canonical_text(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format_rational(c));
            for (v, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if v < self.m {
                    out.push_str(&alloc::format!("*x{}", v));
                } else {
                    out.push_str(&alloc::format!("*xi{}", v - self.m));
                }
                if p > 1 {
                    out.push_str(&alloc::format!("^{}", p));
                }
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.m, rhs.m, "mixed ambient variable sets");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.m, rhs.m, "mixed ambient variable sets");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.m);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.m, rhs.m, "mixed ambient variable sets");
        let mut out = MultiPoly::zero(self.m);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var_x(2, i)
    }

    fn xi(i: usize) -> MultiPoly {
        MultiPoly::var_xi(2, i)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = &(&x(0) * &x(0)) + &x(1);
        let q = &MultiPoly::zero(2) - &x(1);
        let s = &p + &q;
        assert_eq!(s, &x(0) * &x(0));
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn derivatives() {
        // d/dx0 (x0^2 xi1) = 2 x0 xi1, d/dxi1 (x0^2 xi1) = x0^2.
        let p = &(&x(0) * &x(0)) * &xi(1);
        assert_eq!(p.d_x(0), (&x(0) * &xi(1)).scale(&rat(2)));
        assert_eq!(p.d_xi(1), &x(0) * &x(0));
        assert!(p.d_x(1).is_zero());
    }

    #[test]
    fn degrees_and_homogeneity() {
        let p = &(&x(0) * &xi(0)) + &(&xi(1) * &xi(1));
        assert_eq!(p.degree_x(), Some(1));
        assert_eq!(p.degree_xi(), Some(2));
        assert!(!p.is_xi_homogeneous(1));
        assert!((&xi(0) * &xi(1)).is_xi_homogeneous(2));
    }

    #[test]
    fn canonical_text_is_sorted_and_exact() {
        let p = &(&x(1) * &xi(0)).scale(&rat(-3)) + &MultiPoly::constant(2, crate::rational::ratio(1, 2));
        assert_eq!(p.canonical_text(), "1/2 + -3*x1*xi0");
        assert_eq!(MultiPoly::zero(2).canonical_text(), "0");
    }
}
