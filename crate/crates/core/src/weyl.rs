//! Differential operators between density-valued symmetric tensor fields,
//! in a normal-ordered Weyl form with exact rational coefficients.
//!
//! An operator from fields of fiber degree `p` to fields of fiber degree `q`
//! is a finite sum of terms
//!
//! ```text
//! c * x^a xi^beta d_x^alpha D_xi^gamma          (normal ordered)
//! ```
//!
//! acting by "differentiate first, multiply second". Stored terms are kept in
//! a *canonical* normal form in which every term carries a full fiber
//! contraction, `|gamma| = p` (and hence `|beta| = q`). Any term with
//! `|gamma| < p` is expanded through the homogeneous Taylor identity
//!
//! ```text
//! xi^beta D^gamma  =  sum_{|nu| = p - |gamma|} (1/nu!) xi^(beta+nu) D^(gamma+nu)
//! ```
//!
//! valid on fiber-degree-`p` polynomials, and any term with `|gamma| > p`
//! acts by zero and is dropped. In this form the fiber part of a term is a
//! scaled matrix unit between the fiber monomial bases, so two operators are
//! equal as maps if and only if they have identical term maps; this gives
//! unique coordinates for linear algebra and a canonical serialization.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::field::{compositions, SpaceCtx, SymbolField};
use crate::lie::{PolyVectorField, SlElement};
use crate::poly::MultiPoly;
use crate::rational::{binomial, falling, rat, Rational};

/// Source and target module data of an operator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorCtx {
    /// Domain of the operator.
    pub src: SpaceCtx,
    /// Codomain of the operator.
    pub tgt: SpaceCtx,
}

impl OperatorCtx {
    /// Convenience constructor; both contexts must share the base dimension.
    pub fn new(src: SpaceCtx, tgt: SpaceCtx) -> Self {
        assert_eq!(src.m, tgt.m, "operator endpoints must share the base R^m");
        OperatorCtx { src, tgt }
    }

    /// Base dimension m.
    pub fn m(&self) -> usize {
        self.src.m
    }
}

/// Exponent data of a normal-ordered term `x^a xi^beta d_x^alpha D_xi^gamma`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TermKey {
    /// Base multiplication exponents.
    pub a: Vec<u32>,
    /// Fiber multiplication exponents.
    pub beta: Vec<u32>,
    /// Base derivative exponents.
    pub alpha: Vec<u32>,
    /// Fiber derivative exponents.
    pub gamma: Vec<u32>,
}

impl TermKey {
    /// Total base derivative order `|alpha|`.
    pub fn order(&self) -> u32 {
        self.alpha.iter().sum()
    }

    /// Total base multiplication degree `|a|`.
    pub fn xdeg(&self) -> u32 {
        self.a.iter().sum()
    }
}

fn vec_sum(v: &[u32]) -> u32 {
    v.iter().sum()
}

fn vec_add(u: &[u32], v: &[u32]) -> Vec<u32> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

/// A differential operator in canonical normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylOperator {
    /// Endpoint data.
    pub ctx: OperatorCtx,
    terms: BTreeMap<TermKey, Rational>,
}

impl WeylOperator {
    /// The zero operator.
    pub fn zero(ctx: OperatorCtx) -> Self {
        WeylOperator {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator on a space (source and target coincide).
    pub fn identity(ctx: SpaceCtx) -> Self {
        let m = ctx.m;
        let mut op = Self::zero(OperatorCtx::new(ctx.clone(), ctx));
        let zero = alloc::vec![0u32; m];
        op.add_raw_term(&zero, &zero, &zero, &zero, Rational::one());
        op
    }

    /// Term iterator in the canonical (lexicographic key) order.
    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    /// Number of stored canonical terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True if the operator is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Build an operator from one canonical term (used by the complex
    /// machinery to realize basis vectors).
    pub fn from_term(ctx: OperatorCtx, key: TermKey, c: Rational) -> Self {
        let mut op = Self::zero(ctx);
        op.add_raw_term(&key.a, &key.beta, &key.alpha, &key.gamma, c);
        op
    }

    /// Add a normal-ordered term `c x^a xi^beta d^alpha D^gamma`, expanding
    /// it into the canonical full-contraction form.
    ///
    /// The degree budget `|beta| - |gamma| = tgt.xi_degree - src.xi_degree`
    /// must hold; it guarantees the term maps fiber-degree-p polynomials to
    /// fiber-degree-q polynomials.
    pub fn add_raw_term(&mut self, a: &[u32], beta: &[u32], alpha: &[u32], gamma: &[u32], c: Rational) {
        if c.is_zero() {
            return;
        }
        let m = self.ctx.m();
        let p = self.ctx.src.xi_degree;
        let q = self.ctx.tgt.xi_degree;
        assert_eq!(a.len(), m);
        assert_eq!(beta.len(), m);
        assert_eq!(alpha.len(), m);
        assert_eq!(gamma.len(), m);
        debug_assert_eq!(
            vec_sum(beta) as i64 - vec_sum(gamma) as i64,
            q as i64 - p as i64,
            "term degree budget must match the operator endpoints"
        );
        let g = vec_sum(gamma);
        if g > p {
            return; // over-differentiation in the fiber: acts by zero
        }
        let deficit = p - g;
        if deficit == 0 {
            self.insert(
                TermKey {
                    a: a.to_vec(),
                    beta: beta.to_vec(),
                    alpha: alpha.to_vec(),
                    gamma: gamma.to_vec(),
                },
                c,
            );
            return;
        }
        for nu in compositions(deficit, m) {
            let mut fact = Rational::one();
            for &n in &nu {
                fact = fact * crate::rational::factorial(n);
            }
            let coeff = &c / &fact;
            self.insert(
                TermKey {
                    a: a.to_vec(),
                    beta: vec_add(beta, &nu),
                    alpha: alpha.to_vec(),
                    gamma: vec_add(gamma, &nu),
                },
                coeff,
            );
        }
    }

    fn insert(&mut self, key: TermKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    /// Sum of two operators with identical endpoints.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    /// Difference of two operators with identical endpoints.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.ctx.clone());
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    /// Apply to a field in the source context.
    pub fn apply(&self, f: &SymbolField) -> SymbolField {
        assert_eq!(f.ctx, self.ctx.src, "operand must live in the source space");
        let m = self.ctx.m();
        let mut out = MultiPoly::zero(m);
        for (k, c) in &self.terms {
            let mut g = f.poly.clone();
            for (j, &e) in k.gamma.iter().enumerate() {
                for _ in 0..e {
                    g = g.d_xi(j);
                }
            }
            if g.is_zero() {
                continue;
            }
            for (j, &e) in k.alpha.iter().enumerate() {
                for _ in 0..e {
                    g = g.d_x(j);
                }
            }
            if g.is_zero() {
                continue;
            }
            let mono = MultiPoly::monomial(m, &k.a, &k.beta, c.clone());
            out = &out + &(&mono * &g);
        }
        SymbolField::new(self.ctx.tgt.clone(), out)
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(
            inner.ctx.tgt, self.ctx.src,
            "inner target must match outer source"
        );
        let m = self.ctx.m();
        let ctx = OperatorCtx::new(inner.ctx.src.clone(), self.ctx.tgt.clone());
        let mut out = Self::zero(ctx);
        for (k2, c2) in &self.terms {
            for (k1, c1) in &inner.terms {
                // Move d^alpha2 D^gamma2 across x^a1 xi^beta1 by Leibniz.
                let base_moves = leibniz_moves(&k2.alpha, &k1.a);
                let fiber_moves = leibniz_moves(&k2.gamma, &k1.beta);
                for (sigma, cb) in &base_moves {
                    for (tau, cf) in &fiber_moves {
                        let c = &(&(c2 * c1) * cb) * cf;
                        let a: Vec<u32> = (0..m).map(|i| k2.a[i] + k1.a[i] - sigma[i]).collect();
                        let beta: Vec<u32> =
                            (0..m).map(|i| k2.beta[i] + k1.beta[i] - tau[i]).collect();
                        let alpha: Vec<u32> =
                            (0..m).map(|i| k2.alpha[i] - sigma[i] + k1.alpha[i]).collect();
                        let gamma: Vec<u32> =
                            (0..m).map(|i| k2.gamma[i] - tau[i] + k1.gamma[i]).collect();
                        out.add_raw_term(&a, &beta, &alpha, &gamma, c);
                    }
                }
            }
        }
        out
    }

    /// Largest base derivative order among the stored terms.
    pub fn max_order(&self) -> Option<u32> {
        self.terms.keys().map(TermKey::order).max()
    }

    /// Largest base multiplication degree among the stored terms.
    pub fn max_xdeg(&self) -> Option<u32> {
        self.terms.keys().map(TermKey::xdeg).max()
    }

    /// The sub-sum of terms with base derivative order exactly `k`.
    pub fn order_slice(&self, k: u32) -> Self {
        let mut out = Self::zero(self.ctx.clone());
        for (key, c) in &self.terms {
            if key.order() == k {
                out.terms.insert(key.clone(), c.clone());
            }
        }
        out
    }

    /// Grading weight of the operator when it is an eigenvector of the
    /// grading action (commutator with the Lie derivative along the grading
    /// field); `None` if terms carry different weights.
    pub fn euler_weight(&self) -> Option<Rational> {
        let mut seen: Option<Rational> = None;
        for key in self.terms.keys() {
            let w = term_weight(&self.ctx, key);
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

    /// Canonical text form: terms in key order, exact rational coefficients.
    pub fn canonical_text(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                out.push_str(" + ");
            }
            first = false;
            let _ = write!(out, "{}", crate::rational::format_rational(c));
            let blocks: [(&str, &Vec<u32>); 4] = [
                ("x", &k.a),
                ("xi", &k.beta),
                ("Dx", &k.alpha),
                ("Dxi", &k.gamma),
            ];
            for (name, v) in blocks {
                if v.iter().any(|&e| e > 0) {
                    let _ = write!(out, " {}^{:?}", name, v);
                }
            }
        }
        out
    }
}

/// Grading weight carried by a single canonical term.
pub fn term_weight(ctx: &OperatorCtx, key: &TermKey) -> Rational {
    let m = ctx.m() as i64;
    let da = vec_sum(&key.a) as i64;
    let dal = vec_sum(&key.alpha) as i64;
    let db = vec_sum(&key.beta) as i64;
    let dg = vec_sum(&key.gamma) as i64;
    rat(-da + dal + db - dg) - (&ctx.tgt.weight - &ctx.src.weight) * rat(m)
}

/// All ways to move `d^alpha` across `x^a`: pairs `(sigma, coeff)` with
/// `sigma <= min(alpha, a)` componentwise and
/// `coeff = prod_i C(alpha_i, sigma_i) * falling(a_i, sigma_i)`.
fn leibniz_moves(alpha: &[u32], a: &[u32]) -> Vec<(Vec<u32>, Rational)> {
    let mut out: Vec<(Vec<u32>, Rational)> = alloc::vec![(Vec::new(), Rational::one())];
    for i in 0..alpha.len() {
        let cap = alpha[i].min(a[i]);
        let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
        for (prefix, c) in &out {
            for s in 0..=cap {
                let mut key = prefix.clone();
                key.push(s);
                let coeff = c * &(binomial(alpha[i], s) * falling(a[i], s));
                next.push((key, coeff));
            }
        }
        out = next;
    }
    out
}

/// The Lie derivative on a field space as a first-order operator.
pub fn lie_operator_vf(x: &PolyVectorField, ctx: &SpaceCtx) -> WeylOperator {
    let m = ctx.m;
    assert_eq!(x.m, m);
    let mut op = WeylOperator::zero(OperatorCtx::new(ctx.clone(), ctx.clone()));
    let zero = alloc::vec![0u32; m];
    // X^j d_j
    for j in 0..m {
        let mut alpha = zero.clone();
        alpha[j] = 1;
        for (e, c) in x.comps[j].terms() {
            op.add_raw_term(&e[..m], &zero, &alpha, &zero, c.clone());
        }
    }
    // -(d_j X^i) xi_i D_{xi_j}
    for i in 0..m {
        for j in 0..m {
            let d = x.comps[i].d_x(j);
            if d.is_zero() {
                continue;
            }
            let mut beta = zero.clone();
            beta[i] = 1;
            let mut gamma = zero.clone();
            gamma[j] = 1;
            for (e, c) in d.terms() {
                op.add_raw_term(&e[..m], &beta, &zero, &gamma, -c);
            }
        }
    }
    // weight * div X
    if !ctx.weight.is_zero() {
        let div = x.divergence();
        for (e, c) in div.terms() {
            op.add_raw_term(&e[..m], &zero, &zero, &zero, c * &ctx.weight);
        }
    }
    op
}

/// The Lie derivative along the projective embedding of an sl element.
pub fn lie_operator(x: &SlElement, ctx: &SpaceCtx) -> WeylOperator {
    lie_operator_vf(&x.embed(), ctx)
}

/// Lie derivative of an operator: `L^tgt_X . D - D . L^src_X`.
pub fn lie_op(x: &SlElement, d: &WeylOperator) -> WeylOperator {
    let xf = x.embed();
    lie_op_vf(&xf, d)
}

/// Lie derivative of an operator along a polynomial vector field.
pub fn lie_op_vf(x: &PolyVectorField, d: &WeylOperator) -> WeylOperator {
    let l_tgt = lie_operator_vf(x, &d.ctx.tgt);
    let l_src = lie_operator_vf(x, &d.ctx.src);
    l_tgt.compose(d).sub(&d.compose(&l_src))
}

/// Literal five-term transcription of the coefficient-wise formula for the
/// Lie derivative of an operator (the module's anti-sign-error cross-check).
///
/// Requires equal density weights on both endpoints, the setting in which
/// the formula is stated. The five contributions are, in order:
/// the derivative of the coefficients along X; the multiplication by
/// `<X, eta>`; the density term `delta <X, zeta>`; the fiber rotation
/// `-X (zeta D_xi)` on the output fiber block; and the substitution term
/// `-T_D(eta + zeta, <X,eta>P + delta <X,zeta>P - X(zeta D_xi)P)` expanded
/// by Leibniz over how many of the operator's derivatives hit X.
pub fn lie_op_coefficientwise(x: &PolyVectorField, d: &WeylOperator) -> WeylOperator {
    let m = d.ctx.m();
    assert_eq!(x.m, m);
    assert_eq!(
        d.ctx.src.weight, d.ctx.tgt.weight,
        "coefficient-wise formula is stated for equal weights"
    );
    let delta = d.ctx.src.weight.clone();
    let mut out = WeylOperator::zero(d.ctx.clone());
    let div = x.divergence();
    for (k, c) in d.terms() {
        // 1. (X . T_D): X differentiates the base coefficients x^a.
        for j in 0..m {
            if k.a[j] == 0 {
                continue;
            }
            let mut a = k.a.clone();
            a[j] -= 1;
            for (e, cx) in x.comps[j].terms() {
                out.add_raw_term(
                    &vec_add(&a, &e[..m]),
                    &k.beta,
                    &k.alpha,
                    &k.gamma,
                    &(c * cx) * &rat(k.a[j] as i64),
                );
            }
        }
        // 2. <X, eta> T_D.
        for j in 0..m {
            let mut alpha = k.alpha.clone();
            alpha[j] += 1;
            for (e, cx) in x.comps[j].terms() {
                out.add_raw_term(&vec_add(&k.a, &e[..m]), &k.beta, &alpha, &k.gamma, c * cx);
            }
        }
        // 3. delta <X, zeta> T_D.
        if !delta.is_zero() {
            for (e, cx) in div.terms() {
                out.add_raw_term(
                    &vec_add(&k.a, &e[..m]),
                    &k.beta,
                    &k.alpha,
                    &k.gamma,
                    &(c * cx) * &delta,
                );
            }
        }
        // 4. -X (zeta D_xi) T_D on the output fiber factor xi^beta.
        for i in 0..m {
            for j in 0..m {
                let dji = x.comps[i].d_x(j);
                if dji.is_zero() || k.beta[j] == 0 {
                    continue;
                }
                let mut beta = k.beta.clone();
                beta[j] -= 1;
                beta[i] += 1;
                for (e, cx) in dji.terms() {
                    out.add_raw_term(
                        &vec_add(&k.a, &e[..m]),
                        &beta,
                        &k.alpha,
                        &k.gamma,
                        -&(&(c * cx) * &rat(k.beta[j] as i64)),
                    );
                }
            }
        }
        // 5. The substitution term, minus sign overall. rho counts how many
        // operator derivatives hit the X-dependent coefficient.
        let rhos = sub_multi_indices(&k.alpha);
        for rho in &rhos {
            let mut binom = Rational::one();
            for i in 0..m {
                binom = binom * binomial(k.alpha[i], rho[i]);
            }
            let alpha_rem: Vec<u32> = (0..m).map(|i| k.alpha[i] - rho[i]).collect();
            // (i) <X, eta> P: one extra derivative lands on P.
            for j in 0..m {
                let dx = derive_multi(&x.comps[j], rho);
                if dx.is_zero() {
                    continue;
                }
                let mut alpha = alpha_rem.clone();
                alpha[j] += 1;
                for (e, cx) in dx.terms() {
                    out.add_raw_term(
                        &vec_add(&k.a, &e[..m]),
                        &k.beta,
                        &alpha,
                        &k.gamma,
                        -&(&(c * cx) * &binom),
                    );
                }
            }
            // (ii) delta <X, zeta> P.
            if !delta.is_zero() {
                let dd = derive_multi(&div, rho);
                if !dd.is_zero() {
                    for (e, cx) in dd.terms() {
                        out.add_raw_term(
                            &vec_add(&k.a, &e[..m]),
                            &k.beta,
                            &alpha_rem,
                            &k.gamma,
                            -&(&(&(c * cx) * &binom) * &delta),
                        );
                    }
                }
            }
            // (iii) -X (zeta D_xi) P, with
            // D^gamma (xi_i D_{xi_j} P) = xi_i D^(gamma+e_j) P
            //                             + gamma_i D^(gamma+e_j-e_i) P.
            for i in 0..m {
                for j in 0..m {
                    let dji = derive_multi(&x.comps[i].d_x(j), rho);
                    if dji.is_zero() {
                        continue;
                    }
                    let mut beta1 = k.beta.clone();
                    beta1[i] += 1;
                    let mut gamma1 = k.gamma.clone();
                    gamma1[j] += 1;
                    for (e, cx) in dji.terms() {
                        out.add_raw_term(
                            &vec_add(&k.a, &e[..m]),
                            &beta1,
                            &alpha_rem,
                            &gamma1,
                            &(c * cx) * &binom,
                        );
                    }
                    if k.gamma[i] > 0 {
                        let mut gamma2 = k.gamma.clone();
                        gamma2[j] += 1;
                        gamma2[i] -= 1;
                        for (e, cx) in dji.terms() {
                            out.add_raw_term(
                                &vec_add(&k.a, &e[..m]),
                                &k.beta,
                                &alpha_rem,
                                &gamma2,
                                &(&(c * cx) * &binom) * &rat(k.gamma[i] as i64),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

/// All multi-indices `rho <= alpha` componentwise.
fn sub_multi_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = alloc::vec![Vec::new()];
    for &cap in alpha {
        let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
        for prefix in &out {
            for s in 0..=cap {
                let mut key = prefix.clone();
                key.push(s);
                next.push(key);
            }
        }
        out = next;
    }
    out
}

/// Iterated base derivative `d^rho f`.
fn derive_multi(f: &MultiPoly, rho: &[u32]) -> MultiPoly {
    let mut g = f.clone();
    for (i, &e) in rho.iter().enumerate() {
        for _ in 0..e {
            g = g.d_x(i);
            if g.is_zero() {
                return g;
            }
        }
    }
    g
}

/// The canonical order-`k` lift of a degree-`k` symbol: each monomial
/// `c x^a xi^b` becomes the operator term `c x^a d_x^b` between densities of
/// weights `lambda` and `lambda + P.weight`.
pub fn lift_phi(p: &SymbolField, lambda: &Rational) -> WeylOperator {
    let m = p.ctx.m;
    let src = SpaceCtx::new(m, lambda.clone(), 0);
    let tgt = SpaceCtx::new(m, lambda + &p.ctx.weight, 0);
    let mut op = WeylOperator::zero(OperatorCtx::new(src, tgt));
    let zero = alloc::vec![0u32; m];
    for (e, c) in p.poly.terms() {
        op.add_raw_term(&e[..m], &zero, &e[m..], &zero, c.clone());
    }
    op
}

/// Principal symbol of an order-`<= k` operator between density spaces:
/// the `|alpha| = k` slice read as a degree-`k` symbol, an element of the
/// fiber-degree-`k` space of weight `tgt.weight - src.weight`.
pub fn symbol_top(d: &WeylOperator, k: u32) -> SymbolField {
    assert_eq!(d.ctx.src.xi_degree, 0, "symbols are taken of density operators");
    assert_eq!(d.ctx.tgt.xi_degree, 0, "symbols are taken of density operators");
    assert!(d.max_order().unwrap_or(0) <= k, "operator order exceeds k");
    let m = d.ctx.m();
    let delta = &d.ctx.tgt.weight - &d.ctx.src.weight;
    let ctx = SpaceCtx::new(m, delta, k);
    let mut poly = MultiPoly::zero(m);
    for (key, c) in d.terms() {
        if key.order() == k {
            poly = &poly + &MultiPoly::monomial(m, &key.a, &key.alpha, c.clone());
        }
    }
    SymbolField::new(ctx, poly)
}

/// The line-case module identification: an operator between fiber-degree
/// `p` and `q` spaces of common weight `delta` on R becomes an operator
/// between `(delta - p)`- and `(delta - q)`-densities. A canonical term
/// `c x^a xi^q d^alpha D_xi^p` maps to `c p! x^a d^alpha`.
pub fn iso_m1(d: &WeylOperator) -> WeylOperator {
    assert_eq!(d.ctx.m(), 1, "the identification is specific to m = 1");
    assert_eq!(
        d.ctx.src.weight, d.ctx.tgt.weight,
        "the identification applies to equal-weight operator modules"
    );
    let delta = d.ctx.src.weight.clone();
    let p = d.ctx.src.xi_degree;
    let q = d.ctx.tgt.xi_degree;
    let src = SpaceCtx::new(1, &delta - &rat(p as i64), 0);
    let tgt = SpaceCtx::new(1, &delta - &rat(q as i64), 0);
    let mut out = WeylOperator::zero(OperatorCtx::new(src, tgt));
    let pfact = crate::rational::factorial(p);
    for (key, c) in d.terms() {
        debug_assert_eq!(key.gamma[0], p);
        debug_assert_eq!(key.beta[0], q);
        out.add_raw_term(&key.a, &[0], &key.alpha, &[0], c * &pfact);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_basis_up_to_xdegree, lie_field};
    use crate::rational::ratio;

    fn dctx(m: usize, w: Rational, p: u32, q: u32) -> OperatorCtx {
        OperatorCtx::new(SpaceCtx::new(m, w.clone(), p), SpaceCtx::new(m, w, q))
    }

    /// Monomial operator basis of bounded base degree and order.
    fn op_basis(ctx: &OperatorCtx, xdeg: u32, ord: u32) -> Vec<WeylOperator> {
        let m = ctx.m();
        let p = ctx.src.xi_degree;
        let q = ctx.tgt.xi_degree;
        let mut out = Vec::new();
        for da in 0..=xdeg {
            for a in compositions(da, m) {
                for dal in 0..=ord {
                    for alpha in compositions(dal, m) {
                        for beta in compositions(q, m) {
                            for gamma in compositions(p, m) {
                                let mut op = WeylOperator::zero(ctx.clone());
                                op.add_raw_term(&a, &beta, &alpha, &gamma, rat(1));
                                if !op.is_zero() {
                                    out.push(op);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn canonical_form_contracts_the_fiber_fully() {
        // On fiber degree 1 over R, the raw identity term expands to
        // xi D_xi (since id = xi D_xi on degree-1 polynomials).
        let ctx = dctx(1, rat(0), 1, 1);
        let mut op = WeylOperator::zero(ctx);
        op.add_raw_term(&[0], &[0], &[0], &[0], rat(1));
        assert_eq!(op.term_count(), 1);
        let (k, c) = op.terms().next().unwrap();
        assert_eq!((k.beta[0], k.gamma[0]), (1, 1));
        assert_eq!(c, &rat(1));
    }

    #[test]
    fn equal_maps_have_equal_canonical_forms() {
        // xi D_xi and the identity agree on degree-1 fiber polynomials.
        let ctx = dctx(2, rat(0), 1, 1);
        let mut a = WeylOperator::zero(ctx.clone());
        a.add_raw_term(&[0, 0], &[0, 0], &[0, 0], &[0, 0], rat(1));
        let mut b = WeylOperator::zero(ctx);
        b.add_raw_term(&[0, 0], &[1, 0], &[0, 0], &[1, 0], rat(1));
        b.add_raw_term(&[0, 0], &[0, 1], &[0, 0], &[0, 1], rat(1));
        assert_eq!(a, b);
    }

    #[test]
    fn apply_matches_direct_differentiation() {
        // D = d_x D_xi from fiber degree 2 to 1 over R: t^2 xi^2 -> 4 t xi.
        let ctx = dctx(1, rat(0), 2, 1);
        let mut d = WeylOperator::zero(ctx.clone());
        d.add_raw_term(&[0], &[0], &[1], &[1], rat(1));
        let p = SymbolField::new(
            ctx.src.clone(),
            MultiPoly::monomial(1, &[2], &[2], rat(1)),
        );
        let out = d.apply(&p);
        assert_eq!(out.poly, MultiPoly::monomial(1, &[1], &[1], rat(4)));
    }

    #[test]
    fn identity_applies_as_identity() {
        for m in 1..=2 {
            for p in 0..=2 {
                let ctx = SpaceCtx::new(m, ratio(1, 3), p);
                let id = WeylOperator::identity(ctx.clone());
                for f in field_basis_up_to_xdegree(&ctx, 2) {
                    assert_eq!(id.apply(&f).poly, f.poly);
                }
            }
        }
    }

    #[test]
    fn weyl_relation_on_the_line() {
        // compose(d_x, x .) = x d_x + 1 as maps on functions.
        let ctx = dctx(1, rat(0), 0, 0);
        let mut dx = WeylOperator::zero(ctx.clone());
        dx.add_raw_term(&[0], &[0], &[1], &[0], rat(1));
        let mut mx = WeylOperator::zero(ctx.clone());
        mx.add_raw_term(&[1], &[0], &[0], &[0], rat(1));
        let comp = dx.compose(&mx);
        let mut expected = WeylOperator::zero(ctx);
        expected.add_raw_term(&[1], &[0], &[1], &[0], rat(1));
        expected.add_raw_term(&[0], &[0], &[0], &[0], rat(1));
        assert_eq!(comp, expected);
    }

    #[test]
    fn composition_agrees_with_sequential_application() {
        // Across mixed fiber degrees and a nontrivial weight.
        let w = ratio(1, 2);
        let c21 = dctx(2, w.clone(), 2, 1);
        let c10 = dctx(2, w.clone(), 1, 0);
        let inner = op_basis(&c21, 1, 1);
        let outer = op_basis(&c10, 1, 1);
        let fields = field_basis_up_to_xdegree(&c21.src, 2);
        for d1 in inner.iter().step_by(3) {
            for d2 in outer.iter().step_by(3) {
                let comp = d2.compose(d1);
                for f in &fields {
                    assert_eq!(comp.apply(f).poly, d2.apply(&d1.apply(f)).poly);
                }
            }
        }
    }

    #[test]
    fn lie_operator_route_matches_lie_field() {
        for m in 1..=2 {
            let basis = SlElement::basis(m);
            let ctx = SpaceCtx::new(m, ratio(2, 5), 1);
            let fields = field_basis_up_to_xdegree(&ctx, 2);
            for x in &basis {
                let lop = lie_operator(x, &ctx);
                for f in &fields {
                    assert_eq!(lop.apply(f).poly, lie_field(x, f).poly);
                }
            }
        }
    }

    #[test]
    fn lie_op_kills_the_identity() {
        for m in 1..=2 {
            let ctx = SpaceCtx::new(m, ratio(3, 4), 2);
            let id = WeylOperator::identity(ctx);
            for x in &SlElement::basis(m) {
                assert!(lie_op(x, &id).is_zero());
            }
        }
    }

    #[test]
    fn lie_op_is_a_representation_on_operators() {
        let ctx = dctx(1, ratio(1, 3), 1, 0);
        let ops = op_basis(&ctx, 1, 1);
        let basis = SlElement::basis(1);
        for x in &basis {
            for y in &basis {
                let xy = x.bracket(y);
                for d in &ops {
                    let lhs = lie_op(&xy, d);
                    let rhs = lie_op(x, &lie_op(y, d)).sub(&lie_op(y, &lie_op(x, d)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn lie_op_is_a_derivation_of_composition() {
        let w = ratio(1, 2);
        let c21 = dctx(1, w.clone(), 2, 1);
        let c10 = dctx(1, w.clone(), 1, 0);
        let inner = op_basis(&c21, 1, 1);
        let outer = op_basis(&c10, 1, 1);
        let basis = SlElement::basis(1);
        for x in &basis {
            for d1 in inner.iter().step_by(4) {
                for d2 in outer.iter().step_by(4) {
                    let lhs = lie_op(x, &d2.compose(d1));
                    let rhs = lie_op(x, d2)
                        .compose(d1)
                        .add(&d2.compose(&lie_op(x, d1)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn lie_op_preserves_order() {
        let ctx = dctx(2, ratio(1, 7), 1, 1);
        let ops = op_basis(&ctx, 1, 2);
        for x in &SlElement::basis(2) {
            for d in ops.iter().step_by(5) {
                let ld = lie_op(x, d);
                if let (Some(a), Some(b)) = (ld.max_order(), d.max_order()) {
                    assert!(a <= b);
                }
            }
        }
    }

    #[test]
    fn coefficientwise_formula_reproduces_the_compositional_lie_op() {
        // The anti-sign-error test: the literal five-term transcription
        // agrees with L^tgt_X . D - D . L^src_X on monomial operators.
        for (m, p, q) in [(1usize, 1u32, 0u32), (1, 2, 1), (2, 1, 0), (2, 1, 1)] {
            let ctx = dctx(m, ratio(2, 3), p, q);
            let ops = op_basis(&ctx, 1, 1);
            for x in &SlElement::basis(m) {
                let xf = x.embed();
                for d in &ops {
                    assert_eq!(lie_op_vf(&xf, d), lie_op_coefficientwise(&xf, d));
                }
            }
        }
    }

    #[test]
    fn euler_weight_matches_grading_commutator() {
        let ctx = dctx(2, ratio(1, 2), 1, 0);
        let e = SlElement::euler(2);
        for d in op_basis(&ctx, 2, 1).iter().step_by(3) {
            let w = d.euler_weight().unwrap();
            assert_eq!(lie_op(&e, d), d.scale(&w));
        }
    }

    #[test]
    fn lift_and_symbol_are_mutually_inverse_at_top_order() {
        for m in 1..=2 {
            for k in 0..=3u32 {
                let ctx = SpaceCtx::new(m, ratio(5, 7), k);
                let lambda = ratio(1, 3);
                for s in field_basis_up_to_xdegree(&ctx, 2) {
                    let op = lift_phi(&s, &lambda);
                    assert_eq!(op.ctx.src.weight, lambda);
                    assert_eq!(
                        &op.ctx.tgt.weight - &op.ctx.src.weight,
                        ctx.weight
                    );
                    let back = symbol_top(&op, k);
                    assert_eq!(back.poly, s.poly);
                }
            }
        }
    }

    #[test]
    fn symbol_intertwines_lie_actions_at_top_order() {
        let lambda = ratio(1, 4);
        let delta = ratio(2, 3);
        let k = 2u32;
        let sctx = SpaceCtx::new(1, delta, k);
        let basis = SlElement::basis(1);
        for s in field_basis_up_to_xdegree(&sctx, 2) {
            let op = lift_phi(&s, &lambda);
            for x in &basis {
                let ld = lie_op(x, &op);
                let top = symbol_top(&ld.order_slice(k), k);
                let lf = lie_field(x, &s);
                assert_eq!(top.poly, lf.poly);
            }
        }
    }

    #[test]
    fn iso_m1_intertwines_the_module_actions() {
        let delta = ratio(7, 5);
        let ctx = dctx(1, delta, 2, 1);
        let basis = SlElement::basis(1);
        for d in op_basis(&ctx, 2, 2).iter().step_by(3) {
            let iso_d = iso_m1(d);
            for x in &basis {
                assert_eq!(iso_m1(&lie_op(x, d)), lie_op(x, &iso_d));
            }
        }
    }

    #[test]
    fn iso_m1_sends_fiber_contraction_to_plain_derivative() {
        // The full-contraction term xi^0 D_xi on S^1 with weight delta is
        // g xi -> g', i.e. the first derivative between densities.
        let ctx = dctx(1, rat(2), 1, 0);
        let mut d = WeylOperator::zero(ctx);
        d.add_raw_term(&[0], &[0], &[1], &[1], rat(1));
        let dd = iso_m1(&d);
        assert_eq!(dd.ctx.src.weight, rat(1));
        assert_eq!(dd.ctx.tgt.weight, rat(2));
        let mut expected = WeylOperator::zero(dd.ctx.clone());
        expected.add_raw_term(&[0], &[0], &[1], &[0], rat(1));
        assert_eq!(dd, expected);
    }

    #[test]
    fn canonical_text_is_deterministic() {
        let ctx = dctx(1, rat(0), 1, 0);
        let mut d = WeylOperator::zero(ctx);
        d.add_raw_term(&[1], &[0], &[2], &[1], ratio(-3, 2));
        d.add_raw_term(&[0], &[0], &[1], &[1], rat(1));
        assert_eq!(
            d.canonical_text(),
            "1 Dx^[1] Dxi^[1] + -3/2 x^[1] Dx^[2] Dxi^[1]"
        );
    }
}
