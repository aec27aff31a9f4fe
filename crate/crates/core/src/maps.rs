//! The named operators of the projective calculus: the fiber contractions
//! `T_n`, the divergence cocycles `tau_n` and `gamma_n`, the Casimir
//! operator, the scalars `u_k` and `v_n`, the lift-defect cocycles `E_k`,
//! the splitting decision for the symbol sequence, the order-by-order
//! equivariant quantization map, and an exact enumerator of equivariant
//! homomorphisms between bounded operator spaces.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::field::{compositions, field_basis_up_to_xdegree, lie_field, SpaceCtx, SymbolField};
use crate::lie::SlElement;
use crate::linalg::QMatrix;
use crate::poly::MultiPoly;
use crate::rational::{factorial, rat, Rational};
use crate::weyl::{lie_op, lift_phi, term_weight, OperatorCtx, TermKey, WeylOperator};

/// Endpoints of a map from fiber degree `p + n` to fiber degree `p` at a
/// common density weight.
fn contraction_ctx(m: usize, delta: &Rational, p: u32, n: u32) -> OperatorCtx {
    OperatorCtx::new(
        SpaceCtx::new(m, delta.clone(), p + n),
        SpaceCtx::new(m, delta.clone(), p),
    )
}

/// The full fiber contraction `T_n = sum d_{i_1}..d_{i_n} D_{xi_{i_1}}..D_{xi_{i_n}}`
/// from fiber degree `p + n` to `p` at weight `delta`.
pub fn t_map(m: usize, delta: &Rational, p: u32, n: u32) -> WeylOperator {
    let mut op = WeylOperator::zero(contraction_ctx(m, delta, p, n));
    let zero = vec![0u32; m];
    let nfact = factorial(n);
    for nu in compositions(n, m) {
        let mut denom = Rational::one();
        for &e in &nu {
            denom = denom * factorial(e);
        }
        op.add_raw_term(&zero, &zero, &nu, &nu, &nfact / &denom);
    }
    op
}

/// Multiply an operator on the left by a polynomial in the base variables.
fn premultiply(op: &WeylOperator, f: &MultiPoly) -> WeylOperator {
    let m = op.ctx.m();
    let mut out = WeylOperator::zero(op.ctx.clone());
    for (key, c) in op.terms() {
        for (e, cf) in f.terms() {
            let a: Vec<u32> = (0..m).map(|i| key.a[i] + e[i]).collect();
            out.add_raw_term(&a, &key.beta, &key.alpha, &key.gamma, c * cf);
        }
    }
    out
}

/// `tau_n(X) = -(div X*) . T_n`, the divergence-weighted contraction.
pub fn tau_map(x: &SlElement, delta: &Rational, p: u32, n: u32) -> WeylOperator {
    let m = x.m;
    let div = x.embed().divergence();
    premultiply(&t_map(m, delta, p, n), &div.scale(&rat(-1)))
}

/// `gamma_n(X)`: the second-derivative-of-divergence contraction,
/// `(1/(m+1)) sum_i d_i(div X*) D_{xi_i} . T_{n-1}`-type; requires `n >= 1`.
pub fn gamma_map(x: &SlElement, delta: &Rational, p: u32, n: u32) -> WeylOperator {
    assert!(n >= 1, "gamma_n is defined for n >= 1");
    let m = x.m;
    let mut op = WeylOperator::zero(contraction_ctx(m, delta, p, n));
    let div = x.embed().divergence();
    let zero = vec![0u32; m];
    let scale = crate::rational::ratio(1, m as i64 + 1);
    let nm1fact = factorial(n - 1);
    for i in 0..m {
        let di = div.d_x(i);
        if di.is_zero() {
            continue;
        }
        for nu in compositions(n - 1, m) {
            let mut denom = Rational::one();
            for &e in &nu {
                denom = denom * factorial(e);
            }
            let mut gamma = nu.clone();
            gamma[i] += 1;
            let c0 = &(&nm1fact / &denom) * &scale;
            for (e, cf) in di.terms() {
                op.add_raw_term(&e[..m], &zero, &nu, &gamma, &c0 * cf);
            }
        }
    }
    op
}

/// Verify the 1-cocycle identity for a family of operator values on the
/// canonical sl basis: for all pairs,
/// `lie_op(X_i, c(X_j)) - lie_op(X_j, c(X_i)) = c([X_i, X_j])`.
pub fn cocycle_check(m: usize, values: &[WeylOperator]) -> bool {
    let basis = SlElement::basis(m);
    assert_eq!(values.len(), basis.len());
    let eval_on = |coords: &[Rational]| -> WeylOperator {
        let mut acc = WeylOperator::zero(values[0].ctx.clone());
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&values[k].scale(c));
            }
        }
        acc
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let lhs = lie_op(&basis[i], &values[j]).sub(&lie_op(&basis[j], &values[i]));
            let rhs = eval_on(&basis[i].bracket(&basis[j]).coords());
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Find the scalar `s` with `lie_op(X, T_n) = s * gamma_n(X)` for every
/// basis element, and return it. Returns an error if the proportionality
/// fails or the scalars disagree across the basis.
pub fn commutator_defect(
    m: usize,
    delta: &Rational,
    p: u32,
    n: u32,
) -> Result<Rational, alloc::string::String> {
    use alloc::string::String;
    if n == 0 {
        // T_0 is the identity; its Lie derivative vanishes.
        let t0 = t_map(m, delta, p, 0);
        for x in SlElement::basis(m) {
            if !lie_op(&x, &t0).is_zero() {
                return Err(String::from("T_0 is not equivariant"));
            }
        }
        return Ok(Rational::zero());
    }
    let tn = t_map(m, delta, p, n);
    let mut found: Option<Rational> = None;
    for x in SlElement::basis(m) {
        let lhs = lie_op(&x, &tn);
        let rhs = gamma_map(&x, delta, p, n);
        if rhs.is_zero() {
            if !lhs.is_zero() {
                return Err(String::from(
                    "commutator is nonzero where gamma_n vanishes",
                ));
            }
            continue;
        }
        let (k0, c0) = rhs.terms().next().unwrap();
        let l0 = lhs
            .terms()
            .find(|(k, _)| *k == k0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        let s = &l0 / c0;
        if lhs != rhs.scale(&s) {
            return Err(String::from("commutator is not proportional to gamma_n"));
        }
        match &found {
            None => found = Some(s),
            Some(prev) => {
                if *prev != s {
                    return Err(String::from("proportionality constant varies over the basis"));
                }
            }
        }
    }
    Ok(found.unwrap_or_else(Rational::zero))
}

/// The proportionality constant predicted for `lie_op(X, T_n)`:
/// `-n((m+1) delta - (m + 2p + n))` for `T_n` into fiber degree `p`.
pub fn commutator_constant(m: usize, delta: &Rational, p: u32, n: u32) -> Rational {
    let mp1 = rat(m as i64 + 1);
    rat(-(n as i64)) * (&mp1 * delta - rat(m as i64 + 2 * p as i64 + n as i64))
}

/// Casimir operator of the field module from the canonical basis, together
/// with the scalar by which it acts if it is a multiple of the identity.
pub fn casimir(m: usize, delta: &Rational, p: u32) -> (WeylOperator, Option<Rational>) {
    casimir_from_basis(&SlElement::basis(m), delta, p)
}

/// Casimir operator computed from an arbitrary basis and its Killing dual.
pub fn casimir_from_basis(
    basis: &[SlElement],
    delta: &Rational,
    p: u32,
) -> (WeylOperator, Option<Rational>) {
    let m = basis[0].m;
    let dual = SlElement::killing_dual_of(basis);
    let ctx = SpaceCtx::new(m, delta.clone(), p);
    let mut acc = WeylOperator::zero(OperatorCtx::new(ctx.clone(), ctx.clone()));
    for (x, y) in basis.iter().zip(&dual) {
        let lx = crate::weyl::lie_operator(x, &ctx);
        let ly = crate::weyl::lie_operator(y, &ctx);
        acc = acc.add(&lx.compose(&ly));
    }
    let id = WeylOperator::identity(ctx);
    let scalar = if acc.is_zero() {
        Some(Rational::zero())
    } else {
        let (k0, c0) = id.terms().next().unwrap();
        let c = acc
            .terms()
            .find(|(k, _)| *k == k0)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero);
        if acc == id.scale(&(&c / c0)) {
            Some(&c / c0)
        } else {
            None
        }
    };
    (acc, scalar)
}

/// Closed form for the Casimir scalar:
/// `2(m+1) c = m(m+1) delta^2 - (m+2p)(m+1) delta + 2p(m+p)`.
pub fn casimir_scalar(m: usize, delta: &Rational, p: u32) -> Rational {
    let mi = m as i64;
    let pi = p as i64;
    let mp1 = rat(mi + 1);
    let num = rat(mi) * &mp1 * delta * delta - rat(mi + 2 * pi) * &mp1 * delta
        + rat(2 * pi * (mi + pi));
    num / (rat(2) * mp1)
}

/// `u_k = (m+1) lambda + k - 1`.
pub fn u_scalar(m: usize, lambda: &Rational, k: u32) -> Rational {
    rat(m as i64 + 1) * lambda + rat(k as i64 - 1)
}

/// `v_n = -n((m+1) delta - (m + 2k - n))` for source fiber degree `k`.
pub fn v_scalar(m: usize, delta: &Rational, k: u32, n: u32) -> Rational {
    rat(-(n as i64)) * (rat(m as i64 + 1) * delta - rat(m as i64 + 2 * k as i64 - n as i64))
}

/// The defect of the canonical order-`k` lift on one symbol:
/// `E_k(X)(P) = lie_op(X, phi(P)) - phi(L_X P)`, an operator of order
/// `<= k - 1` between the densities of weights `lambda` and `lambda + delta`.
pub fn ek_defect(x: &SlElement, p: &SymbolField, lambda: &Rational) -> WeylOperator {
    let lifted = lift_phi(p, lambda);
    let moved = lift_phi(&lie_field(x, p), lambda);
    lie_op(x, &lifted).sub(&moved)
}

/// Splitting analysis of the order-`k` symbol sequence for the operator
/// module with weights `(lambda, mu)`.
#[derive(Clone, Debug)]
pub struct SplitReport {
    /// Base dimension.
    pub m: usize,
    /// Operator order of the sequence.
    pub k: u32,
    /// Source density weight.
    pub lambda: Rational,
    /// Target density weight.
    pub mu: Rational,
    /// Weight shift `mu - lambda`.
    pub delta: Rational,
    /// Verdict of the closed-form criterion.
    pub predicate_split: bool,
    /// When `delta` lies in the critical band: the integer `n` with
    /// `delta = (m + 2k - n)/(m+1)`.
    pub critical_n: Option<u32>,
    /// When critical: whether `lambda = (i-k)/(m+1)` for some admissible `i`.
    pub resonance_split: Option<bool>,
    /// Whether the linear equivariance system for a contraction-form
    /// splitting map is solvable.
    pub solver_split: bool,
    /// Witness coefficients `c_0..c_k` (with `c_0 = 1`) when solvable.
    pub coefficients: Option<Vec<Rational>>,
    /// Dimension of the homogeneous solution kernel (0 means unique).
    pub solution_kernel_dim: usize,
}

/// The contraction-ansatz equivariance system for a degree-`k` splitting
/// map `P -> sum_n c_n phi(T_n P)`: returns `(solution, kernel_dim)` for
/// the affine system with `c_0 = 1`, certified on symbols of base degree
/// `<= cert_xdeg`, or `None` if inconsistent.
fn splitting_solver(
    m: usize,
    lambda: &Rational,
    mu: &Rational,
    k: u32,
    cert_xdeg: u32,
) -> (Option<Vec<Rational>>, usize) {
    let delta = mu - lambda;
    // F_n(X, P) = lie_op(X, phi(T_n P)) - phi(T_n (L_X P)); equivariance of
    // the ansatz reads sum_n c_n F_n(X, P) = 0 with c_0 = 1.
    let sctx = SpaceCtx::new(m, delta.clone(), k);
    let symbols = field_basis_up_to_xdegree(&sctx, cert_xdeg);
    let basis = SlElement::basis(m);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for x in &basis {
        for s in &symbols {
            // Collect the operator coordinates of each F_n(X, s).
            let mut per_n: Vec<alloc::collections::BTreeMap<TermKey, Rational>> = Vec::new();
            for n in 0..=k {
                let tn = t_map(m, &delta, k - n, n);
                let tns = tn.apply(s);
                let lifted = lift_phi(&tns, lambda);
                let moved = lift_phi(&tn.apply(&lie_field(x, s)), lambda);
                let f = lie_op(x, &lifted).sub(&moved);
                per_n.push(f.terms().map(|(key, c)| (key.clone(), c.clone())).collect());
            }
            let mut all_keys: alloc::collections::BTreeSet<TermKey> =
                alloc::collections::BTreeSet::new();
            for map in &per_n {
                all_keys.extend(map.keys().cloned());
            }
            for key in all_keys {
                let mut row = Vec::with_capacity(k as usize);
                for map in per_n.iter().skip(1) {
                    row.push(map.get(&key).cloned().unwrap_or_else(Rational::zero));
                }
                let b = per_n[0]
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(Rational::zero);
                if row.iter().all(Rational::is_zero) && b.is_zero() {
                    continue;
                }
                rows.push(row);
                rhs.push(-b);
            }
        }
    }
    if k == 0 {
        return (Some(vec![Rational::one()]), 0);
    }
    let mut mat = QMatrix::zero(rows.len(), k as usize);
    for (i, row) in rows.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                mat.set(i, j, c.clone());
            }
        }
    }
    let kernel_dim = mat.kernel_basis().len();
    match mat.solve(&rhs) {
        Some(c_tail) => {
            let mut coeffs = Vec::with_capacity(k as usize + 1);
            coeffs.push(Rational::one());
            coeffs.extend(c_tail);
            (Some(coeffs), kernel_dim)
        }
        None => (None, kernel_dim),
    }
}

/// Evaluate the closed-form splitting criterion and cross-validate it with
/// the linear solver.
pub fn split_decision(
    m: usize,
    lambda: &Rational,
    mu: &Rational,
    k: u32,
    cert_xdeg: u32,
) -> SplitReport {
    assert!(k >= 1);
    let delta = mu - lambda;
    let mp1 = rat(m as i64 + 1);
    // delta in the critical band iff (m+1) delta = m + 2k - n, n in 1..=k.
    let mut critical_n = None;
    for n in 1..=k {
        if &mp1 * &delta == rat(m as i64 + 2 * k as i64 - n as i64) {
            critical_n = Some(n);
            break;
        }
    }
    let (predicate_split, resonance_split) = match critical_n {
        None => (true, None),
        Some(n) => {
            let mut found = false;
            for i in 1..=n {
                if &mp1 * lambda == rat(i as i64 - k as i64) {
                    found = true;
                    break;
                }
            }
            (found, Some(found))
        }
    };
    let (coefficients, solution_kernel_dim) = splitting_solver(m, lambda, mu, k, cert_xdeg);
    SplitReport {
        m,
        k,
        lambda: lambda.clone(),
        mu: mu.clone(),
        delta,
        predicate_split,
        critical_n,
        resonance_split,
        solver_split: coefficients.is_some(),
        coefficients,
        solution_kernel_dim,
    }
}

/// Per-order data of the quantization map.
#[derive(Clone, Debug)]
pub struct QuantOrder {
    /// Symbol degree.
    pub k: u32,
    /// Contraction coefficients `c_0..c_k` of the splitting at this degree.
    pub coefficients: Vec<Rational>,
    /// Whether the solution is unique.
    pub unique: bool,
    /// Whether `|c_n v_n| = |c_{n-1} u_{k-n+1}|` holds for every `n` with
    /// `c_{n-1}` nonzero.
    pub ratio_magnitudes_ok: bool,
    /// Observed signs of `c_n v_n / (c_{n-1} u_{k-n+1})` where defined.
    pub ratio_signs: Vec<i8>,
}

/// The order-by-order equivariant quantization data up to symbol degree
/// `max_k`; `None` if some degree fails to split uniquely.
pub fn quantization_map(
    m: usize,
    lambda: &Rational,
    mu: &Rational,
    max_k: u32,
    cert_xdeg: u32,
) -> Option<Vec<QuantOrder>> {
    let delta = mu - lambda;
    let mut out = Vec::new();
    for k in 0..=max_k {
        let (coeffs, kernel_dim) = splitting_solver(m, lambda, mu, k, cert_xdeg);
        let coeffs = coeffs?;
        let mut ratio_ok = true;
        let mut signs = Vec::new();
        for n in 1..=k {
            let u = u_scalar(m, lambda, k - n + 1);
            let v = v_scalar(m, &delta, k, n);
            let lhs = &coeffs[n as usize] * &v;
            let rhs = &coeffs[n as usize - 1] * &u;
            if lhs == rhs {
                signs.push(1);
            } else if lhs == -&rhs {
                signs.push(-1);
            } else {
                ratio_ok = false;
            }
        }
        out.push(QuantOrder {
            k,
            coefficients: coeffs,
            unique: kernel_dim == 0,
            ratio_magnitudes_ok: ratio_ok,
            ratio_signs: signs,
        });
    }
    Some(out)
}

/// Exact basis of the operators commuting with the whole sl action, within
/// the bounded canonical term space (base degree `<= xdeg_bound`, order
/// `<= order_bound`).
///
/// The grading constraint forces every solution to have grading weight
/// zero (the weight components of a solution are solutions, and the
/// grading element's own constraint scales each component by its weight),
/// so the enumeration is restricted to the weight-zero block; this is an
/// exact reduction, not a truncation.
pub fn equivariant_homs(
    src: &SpaceCtx,
    tgt: &SpaceCtx,
    order_bound: u32,
    xdeg_bound: u32,
) -> Vec<WeylOperator> {
    assert_eq!(src.m, tgt.m);
    let m = src.m;
    let ctx = OperatorCtx::new(src.clone(), tgt.clone());
    // Enumerate weight-zero canonical keys within the bounds.
    let mut keys: Vec<TermKey> = Vec::new();
    for ord in 0..=order_bound {
        for alpha in compositions(ord, m) {
            for xd in 0..=xdeg_bound {
                for a in compositions(xd, m) {
                    for beta in compositions(tgt.xi_degree, m) {
                        for gamma in compositions(src.xi_degree, m) {
                            let key = TermKey {
                                a: a.clone(),
                                beta: beta.clone(),
                                alpha: alpha.clone(),
                                gamma: gamma.clone(),
                            };
                            if term_weight(&ctx, &key).is_zero() {
                                keys.push(key);
                            }
                        }
                    }
                }
            }
        }
    }
    keys.sort();
    if keys.is_empty() {
        return Vec::new();
    }
    let basis = SlElement::basis(m);
    // Images of each candidate key under each basis constraint.
    let mut row_index: alloc::collections::BTreeMap<(usize, TermKey), usize> =
        alloc::collections::BTreeMap::new();
    let mut cols: Vec<Vec<(usize, Rational)>> = Vec::new();
    for key in &keys {
        let op = WeylOperator::from_term(ctx.clone(), key.clone(), Rational::one());
        let mut col = Vec::new();
        for (bi, x) in basis.iter().enumerate() {
            let image = lie_op(x, &op);
            for (ik, c) in image.terms() {
                let next = row_index.len();
                let idx = *row_index.entry((bi, ik.clone())).or_insert(next);
                col.push((idx, c.clone()));
            }
        }
        cols.push(col);
    }
    let mut mat = QMatrix::zero(row_index.len(), keys.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            mat.add_to(*i, j, c);
        }
    }
    mat.kernel_basis()
        .into_iter()
        .map(|coords| {
            let mut op = WeylOperator::zero(ctx.clone());
            for (j, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    let t = WeylOperator::from_term(ctx.clone(), keys[j].clone(), c.clone());
                    op = op.add(&t);
                }
            }
            op
        })
        .collect()
}
