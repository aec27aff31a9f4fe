//! Symmetric tensor fields valued in densities, modeled as polynomials.
//!
//! A degree-`p` symmetric contravariant tensor field on R^m valued in
//! `w`-densities is encoded as a polynomial `P(x, xi)` that is homogeneous of
//! degree `p` in the fiber block `xi`. The Lie derivative along a polynomial
//! vector field `X` is
//!
//! ```text
//! L_X P = X^j d_j P - (d_j X^i) xi_i D_{xi_j} P + w (div X) P,
//! ```
//!
//! which restricts to the sl(m+1, R) action through the projective embedding.
//! The grading element acts diagonally on monomials: `x^a xi^b` has weight
//! `-|a| + |b| - m w`, which pins the base degree of any weight eigenvector
//! and is what makes the weight-zero cochain spaces finite dimensional.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::lie::{PolyVectorField, SlElement};
use crate::poly::MultiPoly;
use crate::rational::{rat, Rational};

/// Ambient data of a field module: base dimension, density weight, and
/// fiber degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpaceCtx {
    /// Base dimension m.
    pub m: usize,
    /// Density weight.
    pub weight: Rational,
    /// Fiber (xi) homogeneity degree.
    pub xi_degree: u32,
}

impl SpaceCtx {
    /// Convenience constructor.
    pub fn new(m: usize, weight: Rational, xi_degree: u32) -> Self {
        SpaceCtx {
            m,
            weight,
            xi_degree,
        }
    }
}

/// A polynomial field in a fixed [`SpaceCtx`]; the polynomial is homogeneous
/// of degree `ctx.xi_degree` in the fiber block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolField {
    /// Ambient module data.
    pub ctx: SpaceCtx,
    /// Polynomial representative.
    pub poly: MultiPoly,
}

impl SymbolField {
    /// Wrap a polynomial, checking fiber homogeneity.
    pub fn new(ctx: SpaceCtx, poly: MultiPoly) -> Self {
        assert_eq!(poly.base_vars(), ctx.m);
        assert!(
            poly.is_xi_homogeneous(ctx.xi_degree),
            "field polynomial must be fiber-homogeneous of the declared degree"
        );
        SymbolField { ctx, poly }
    }

    /// The zero field.
    pub fn zero(ctx: SpaceCtx) -> Self {
        let m = ctx.m;
        SymbolField {
            ctx,
            poly: MultiPoly::zero(m),
        }
    }

    /// True if the polynomial vanishes.
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Sum of two fields in the same context.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx);
        SymbolField {
            ctx: self.ctx.clone(),
            poly: &self.poly + &other.poly,
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        SymbolField {
            ctx: self.ctx.clone(),
            poly: self.poly.scale(c),
        }
    }

    /// Weight of the grading element action if this is an eigenvector:
    /// every monomial `x^a xi^b` has weight `-|a| + |b| - m w`; returns
    /// `None` for non-eigenvectors, and `Some(0)`-consistent value for zero.
    pub fn euler_weight(&self) -> Option<Rational> {
        let mut seen: Option<Rational> = None;
        for (e, _) in self.poly.terms() {
            let m = self.ctx.m;
            let xa: u32 = e[..m].iter().sum();
            let xb: u32 = e[m..].iter().sum();
            let w = rat(xb as i64 - xa as i64)
                - &self.ctx.weight * &rat(m as i64);
            match &seen {
                None => seen = Some(w),
                Some(prev) => {
                    if *prev != w {
                        return None;
                    }
                }
            }
        }
        seen.or_else(|| Some(Rational::zero()))
    }
}

/// Lie derivative of a field along a polynomial vector field.
pub fn lie_field_vf(x: &PolyVectorField, f: &SymbolField) -> SymbolField {
    let m = f.ctx.m;
    assert_eq!(x.m, m);
    let w = &f.ctx.weight;
    let mut out = MultiPoly::zero(m);
    for j in 0..m {
        if x.comps[j].is_zero() {
            continue;
        }
        out = &out + &(&x.comps[j] * &f.poly.d_x(j));
    }
    for j in 0..m {
        for i in 0..m {
            let dxi = x.comps[i].d_x(j);
            if dxi.is_zero() {
                continue;
            }
            let xi_i = MultiPoly::var_xi(m, i);
            let contrib = &(&dxi * &xi_i) * &f.poly.d_xi(j);
            out = &out - &contrib;
        }
    }
    if !w.is_zero() {
        let div = x.divergence();
        if !div.is_zero() {
            out = &out + &(&div * &f.poly).scale(w);
        }
    }
    SymbolField {
        ctx: f.ctx.clone(),
        poly: out,
    }
}

/// Lie derivative along the projective embedding of an sl(m+1, R) element.
pub fn lie_field(x: &SlElement, f: &SymbolField) -> SymbolField {
    lie_field_vf(&x.embed(), f)
}

/// All exponent vectors of length `len` with entries summing to `total`,
/// in lexicographic order.
pub fn compositions(total: u32, len: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    rec(0, total, &mut cur, &mut out);
    out
}

/// Monomial basis of the fields in `ctx` with base degree exactly `xdeg`.
pub fn field_basis_of_xdegree(ctx: &SpaceCtx, xdeg: u32) -> Vec<SymbolField> {
    let m = ctx.m;
    let mut out = Vec::new();
    for a in compositions(xdeg, m) {
        for b in compositions(ctx.xi_degree, m) {
            out.push(SymbolField {
                ctx: ctx.clone(),
                poly: MultiPoly::monomial(m, &a, &b, rat(1)),
            });
        }
    }
    out
}

/// Monomial basis of the fields in `ctx` with base degree at most `xdeg`.
pub fn field_basis_up_to_xdegree(ctx: &SpaceCtx, xdeg: u32) -> Vec<SymbolField> {
    let mut out = Vec::new();
    for d in 0..=xdeg {
        out.extend(field_basis_of_xdegree(ctx, d));
    }
    out
}
