//! Reduction of projective cochains to finite gl(m) data.
//!
//! A function-valued cochain on sl(m+1, R) that is killed by the constant
//! fields (both contraction and Lie derivative) is determined by finitely
//! many constants. This module realizes that correspondence explicitly: a
//! gl(m)-cochain `gamma` valued in alternating forms on covectors, with
//! values in a finite-dimensional gl(m)-module V, is sent to the
//! sl(m+1)-cochain
//!
//! ```text
//! chi(gamma)(X_0, .., X_{t+u-1}) =
//!   (-1)^t / (t! u! (m+1)^u) *
//!   sum over permutations nu, sign(nu) *
//!     gamma(DX_{nu(0)}, .., DX_{nu(t-1)})(dtr(DX_{nu(t)}), .., dtr(DX_{nu(t+u-1)}))
//! ```
//!
//! where `DX` is the Jacobian matrix of the embedded vector field of `X`
//! and `dtr(DX)` is the (constant) differential of its trace. The image is
//! a cochain valued in V-valued polynomial functions, and the construction
//! is a chain map when the form side carries the coboundary of the natural
//! gl(m)-action on forms-on-covectors with values in V.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cohomology::{CeModule, Cochain};
use crate::finite::{finite_ce_complex, increasing_tuples, FiniteLieAlgebra, FiniteRep};
use crate::lie::SlElement;
use crate::linalg::QMatrix;
use crate::poly::MultiPoly;
use crate::rational::{factorial, rat, Rational};

/// A finite-dimensional gl(m)-module serving as cochain coefficients: the
/// value of a cochain at a point of the base is a coordinate vector in the
/// module, so cochain values are vectors of polynomial functions. The
/// action of an embedded field is `X.f - rho(DX) f` with `DX` the Jacobian
/// of the field.
#[derive(Clone, Debug)]
pub struct VRepModule {
    pub m: usize,
    pub rep: FiniteRep,
}

impl VRepModule {
    /// Wrap a gl(m)-representation; the algebra of `rep` must be gl(m).
    pub fn new(m: usize, rep: FiniteRep) -> Self {
        assert_eq!(rep.algebra.dim, m * m, "expected a gl(m) representation");
        VRepModule { m, rep }
    }

    /// Dimension of the coefficient module.
    pub fn dim(&self) -> usize {
        self.rep.space_dim
    }
}

impl CeModule for VRepModule {
    type Value = Vec<MultiPoly>;

    fn m(&self) -> usize {
        self.m
    }
    fn zero_value(&self) -> Vec<MultiPoly> {
        vec![MultiPoly::zero(self.m); self.rep.space_dim]
    }
    fn add_values(&self, a: &Vec<MultiPoly>, b: &Vec<MultiPoly>) -> Vec<MultiPoly> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn scale_value(&self, a: &Vec<MultiPoly>, c: &Rational) -> Vec<MultiPoly> {
        a.iter().map(|x| x.scale(c)).collect()
    }
    fn value_is_zero(&self, a: &Vec<MultiPoly>) -> bool {
        a.iter().all(MultiPoly::is_zero)
    }
    fn act(&self, x: &SlElement, v: &Vec<MultiPoly>) -> Vec<MultiPoly> {
        let m = self.m;
        let vf = x.embed();
        let mut out: Vec<MultiPoly> = v
            .iter()
            .map(|f| {
                let mut o = MultiPoly::zero(m);
                for i in 0..m {
                    o = &o + &(&vf.comps[i] * &f.d_x(i));
                }
                o
            })
            .collect();
        for a in 0..m {
            for b in 0..m {
                // Jacobian entry (DX)_{ab} = d_b X^a.
                let entry = vf.comps[a].d_x(b);
                if entry.is_zero() {
                    continue;
                }
                let mat = &self.rep.mats[a * m + b];
                for (r, o) in out.iter_mut().enumerate() {
                    for (s, f) in v.iter().enumerate() {
                        let c = mat.get(r, s);
                        if !c.is_zero() {
                            *o = &*o - &(&entry.scale(&c) * f);
                        }
                    }
                }
            }
        }
        out
    }
}

/// The gl(m)-representation on symbols of fiber degree `k` twisted by the
/// density weight `lambda`: on the monomial basis of degree-`k` fiber
/// monomials (exponent vectors in lexicographic order), the matrix unit
/// `E_{ab}` acts as `xi_a D_{xi_b} - lambda delta_{ab}`.
pub fn symbol_rep(m: usize, lambda: &Rational, k: u32) -> FiniteRep {
    let basis = crate::field::compositions(k, m);
    let index: BTreeMap<Vec<u32>, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();
    let n = basis.len();
    let mut mats = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let mut mat = QMatrix::zero(n, n);
            for (j, exps) in basis.iter().enumerate() {
                if exps[b] > 0 {
                    let mut tgt = exps.clone();
                    tgt[b] -= 1;
                    tgt[a] += 1;
                    mat.add_to(index[&tgt], j, &rat(exps[b] as i64));
                }
                if a == b {
                    mat.add_to(j, j, &(-lambda));
                }
            }
            mats.push(mat);
        }
    }
    FiniteRep::new(FiniteLieAlgebra::gl(m), mats)
}

/// A gl(m)-cochain of degree `t` valued in alternating `u`-forms on
/// covectors with values in a `dim`-dimensional module. Values are stored
/// on pairs of strictly increasing tuples: matrix-unit indices (row-major,
/// in `0..m*m`) and covector indices (in `0..m`). Absent pairs are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GlFormCochain {
    pub t: usize,
    pub u: usize,
    pub dim: usize,
    pub values: BTreeMap<(Vec<usize>, Vec<usize>), Vec<Rational>>,
}

/// Sort an index tuple, tracking the permutation sign; `None` on repeats.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1i32;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl GlFormCochain {
    pub fn zero(t: usize, u: usize, dim: usize) -> Self {
        GlFormCochain {
            t,
            u,
            dim,
            values: BTreeMap::new(),
        }
    }

    /// Set the value on a pair of strictly increasing index tuples.
    pub fn set(&mut self, gl_tuple: Vec<usize>, cov_tuple: Vec<usize>, v: Vec<Rational>) {
        assert_eq!(gl_tuple.len(), self.t);
        assert_eq!(cov_tuple.len(), self.u);
        assert_eq!(v.len(), self.dim);
        assert!(gl_tuple.windows(2).all(|w| w[0] < w[1]));
        assert!(cov_tuple.windows(2).all(|w| w[0] < w[1]));
        self.values.insert((gl_tuple, cov_tuple), v);
    }

    pub fn is_zero(&self) -> bool {
        self.values
            .values()
            .all(|v| v.iter().all(Rational::is_zero))
    }

    /// Evaluate on arbitrary (possibly unsorted) index tuples, resolving
    /// both alternating signs; `None` means the value is zero.
    pub fn eval_signed(&self, gl_idx: &[usize], cov_idx: &[usize]) -> Option<(i32, &Vec<Rational>)> {
        let (gt, gs) = sort_with_sign(gl_idx)?;
        let (ct, cs) = sort_with_sign(cov_idx)?;
        let v = self.values.get(&(gt, ct))?;
        Some((gs * cs, v))
    }

    /// All coordinate cochains for the given shape: one for each pair of
    /// increasing tuples and module coordinate, in lexicographic order.
    pub fn basis(m: usize, dim: usize, t: usize, u: usize) -> Vec<GlFormCochain> {
        let mut out = Vec::new();
        for gt in increasing_tuples(m * m, t) {
            for ct in increasing_tuples(m, u) {
                for r in 0..dim {
                    let mut c = GlFormCochain::zero(t, u, dim);
                    let mut v = vec![Rational::zero(); dim];
                    v[r] = Rational::one();
                    c.set(gt.clone(), ct.clone(), v);
                    out.push(c);
                }
            }
        }
        out
    }
}

/// All permutations of `0..s` with their signs.
fn permutations_signed(s: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; s];
    fn rec(
        s: usize,
        cur: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, i32)>,
    ) {
        if cur.len() == s {
            let sign = sort_with_sign(cur).map_or(0, |(_, sg)| sg);
            out.push((cur.clone(), sign));
            return;
        }
        for k in 0..s {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(s, cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    rec(s, &mut cur, &mut used, &mut out);
    out
}

/// The correspondence itself: expand `gamma` into a cochain on sl(m+1)
/// valued in V-valued polynomial functions. The result has degree
/// `gamma.t + gamma.u`.
pub fn chi(m: usize, gamma: &GlFormCochain) -> Cochain<Vec<MultiPoly>> {
    let t = gamma.t;
    let u = gamma.u;
    let dim = gamma.dim;
    let s = t + u;
    let basis = SlElement::basis(m);
    let n = basis.len();

    // Jacobians of the embedded basis fields, as sparse entry lists, and
    // the constant coordinates of the differential of their traces.
    let mut jac: Vec<Vec<(usize, usize, MultiPoly)>> = Vec::with_capacity(n);
    let mut dtr: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for x in &basis {
        let vf = x.embed();
        let mut entries = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let e = vf.comps[a].d_x(b);
                if !e.is_zero() {
                    entries.push((a, b, e));
                }
            }
        }
        let div = vf.divergence();
        let mut coords = Vec::with_capacity(m);
        for j in 0..m {
            let dj = div.d_x(j);
            assert!(
                dj.degree_x().unwrap_or(0) == 0,
                "trace differential must be constant"
            );
            coords.push(dj.coeff(&vec![0; 2 * m]));
        }
        jac.push(entries);
        dtr.push(coords);
    }

    let perms = permutations_signed(s);
    let mut norm_den = factorial(t as u32) * factorial(u as u32);
    for _ in 0..u {
        norm_den = norm_den * rat((m + 1) as i64);
    }
    let norm = rat(if t % 2 == 0 { 1 } else { -1 }) / norm_den;

    let mut out = Cochain::zero(s);
    for tuple in increasing_tuples(n, s) {
        let mut acc = vec![MultiPoly::zero(m); dim];
        for (perm, psign) in &perms {
            // Covector block: products of trace-differential coordinates.
            let mut covs: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
            let mut dead = false;
            for j in 0..u {
                let bi = tuple[perm[t + j]];
                let mut next = Vec::new();
                for (idxs, coeff) in &covs {
                    for (cj, c) in dtr[bi].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut idxs2 = idxs.clone();
                        idxs2.push(cj);
                        next.push((idxs2, coeff * c));
                    }
                }
                covs = next;
                if covs.is_empty() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            // Matrix block: products of Jacobian entries.
            let mut gls: Vec<(Vec<usize>, MultiPoly)> = vec![(Vec::new(), MultiPoly::one(m))];
            for k in 0..t {
                let bi = tuple[perm[k]];
                let mut next = Vec::new();
                for (idxs, p) in &gls {
                    for (a, b, entry) in &jac[bi] {
                        let mut idxs2 = idxs.clone();
                        idxs2.push(a * m + b);
                        next.push((idxs2, p * entry));
                    }
                }
                gls = next;
                if gls.is_empty() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            for (gidx, p) in &gls {
                for (cidx, coeff) in &covs {
                    if let Some((sg, val)) = gamma.eval_signed(gidx, cidx) {
                        let scale = rat((*psign * sg) as i64) * coeff;
                        for (r, vr) in val.iter().enumerate() {
                            let c = &scale * vr;
                            if !c.is_zero() {
                                acc[r] = &acc[r] + &p.scale(&c);
                            }
                        }
                    }
                }
            }
        }
        let acc: Vec<MultiPoly> = acc.iter().map(|p| p.scale(&norm)).collect();
        if acc.iter().any(|p| !p.is_zero()) {
            out.values.insert(tuple, acc);
        }
    }
    out
}

/// The gl(m)-representation on alternating `u`-forms on covectors valued
/// in the module of `rep`: the argument covectors carry the dual of the
/// natural action, the values carry `rep`. The space is coordinatized by
/// (covector tuple, module coordinate) pairs in lexicographic order.
pub fn form_rep(m: usize, rep: &FiniteRep, u: usize) -> FiniteRep {
    assert_eq!(rep.algebra.dim, m * m, "expected a gl(m) representation");
    let d = rep.space_dim;
    let tuples = increasing_tuples(m, u);
    let index: BTreeMap<Vec<usize>, usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let w = tuples.len() * d;
    let mut mats = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let mut mat = QMatrix::zero(w, w);
            let vm = &rep.mats[a * m + b];
            for (ti, tup) in tuples.iter().enumerate() {
                for r in 0..d {
                    for s in 0..d {
                        let c = vm.get(r, s);
                        if !c.is_zero() {
                            mat.add_to(ti * d + r, ti * d + s, &c);
                        }
                    }
                }
                // Dual action on an argument slot: the covector eps^a in a
                // slot is replaced by eps^b with a plus sign, since
                // (A.gamma)(alpha) = rho(A) gamma(alpha) + gamma(alpha o A).
                for (pos, &ia) in tup.iter().enumerate() {
                    if ia != a {
                        continue;
                    }
                    let mut rest = tup.clone();
                    rest.remove(pos);
                    if let Some((sorted, s2)) = crate::finite::insert_signed(b, &rest) {
                        let front = if pos % 2 == 0 { 1 } else { -1 };
                        let sgn = rat((front * s2) as i64);
                        let tj = index[&sorted];
                        for r in 0..d {
                            mat.add_to(ti * d + r, tj * d + r, &sgn);
                        }
                    }
                }
            }
            mats.push(mat);
        }
    }
    FiniteRep::new(FiniteLieAlgebra::gl(m), mats)
}

/// Chevalley–Eilenberg coboundary on the gl(m) side, using the form
/// representation that makes `chi` a chain map.
pub fn gl_form_coboundary(m: usize, rep: &FiniteRep, gamma: &GlFormCochain) -> GlFormCochain {
    let t = gamma.t;
    let u = gamma.u;
    let d = rep.space_dim;
    assert_eq!(d, gamma.dim);
    let mut out = GlFormCochain::zero(t + 1, u, d);
    if t >= m * m {
        return out;
    }
    let w_rep = form_rep(m, rep, u);
    let complex = finite_ce_complex(&w_rep);
    let cov = increasing_tuples(m, u);
    let dom = increasing_tuples(m * m, t);
    let cod = increasing_tuples(m * m, t + 1);
    let wdim = w_rep.space_dim;
    let mut x = vec![Rational::zero(); dom.len() * wdim];
    for (ti, tup) in dom.iter().enumerate() {
        for (ci, ctup) in cov.iter().enumerate() {
            if let Some(val) = gamma.values.get(&(tup.clone(), ctup.clone())) {
                for (r, c) in val.iter().enumerate() {
                    x[ti * wdim + ci * d + r] = c.clone();
                }
            }
        }
    }
    let y = complex.d[t].mul_vec(&x);
    for (ti, tup) in cod.iter().enumerate() {
        for (ci, ctup) in cov.iter().enumerate() {
            let val: Vec<Rational> = (0..d).map(|r| y[ti * wdim + ci * d + r].clone()).collect();
            if val.iter().any(|c| !c.is_zero()) {
                out.set(tup.clone(), ctup.clone(), val);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{ce_coboundary, ce_contract, ce_lie};
    use crate::field::{compositions, lie_field, SpaceCtx, SymbolField};
    use crate::finite::Lcg;
    use crate::rational::ratio;

    fn trivial_module(m: usize) -> VRepModule {
        VRepModule::new(m, FiniteRep::trivial(FiniteLieAlgebra::gl(m), 1))
    }

    fn random_gl_cochain(m: usize, dim: usize, t: usize, u: usize, rng: &mut Lcg) -> GlFormCochain {
        let mut c = GlFormCochain::zero(t, u, dim);
        for gt in increasing_tuples(m * m, t) {
            for ct in increasing_tuples(m, u) {
                let v: Vec<Rational> = (0..dim).map(|_| rng.small_rational()).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    c.set(gt.clone(), ct.clone(), v);
                }
            }
        }
        c
    }

    /// Split a symbol field into coefficient polynomials per fiber
    /// monomial, in the basis order of `symbol_rep`.
    fn field_to_value(f: &SymbolField) -> Vec<MultiPoly> {
        let m = f.ctx.m;
        let basis = compositions(f.ctx.xi_degree, m);
        let index: BTreeMap<Vec<u32>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        let mut out = vec![MultiPoly::zero(m); basis.len()];
        for (e, c) in f.poly.terms() {
            let b = e[m..].to_vec();
            let mut xe = e.clone();
            for v in xe[m..].iter_mut() {
                *v = 0;
            }
            out[index[&b]].add_term(xe, c.clone());
        }
        out
    }

    fn value_to_field(ctx: &SpaceCtx, v: &[MultiPoly]) -> SymbolField {
        let m = ctx.m;
        let basis = compositions(ctx.xi_degree, m);
        let mut poly = MultiPoly::zero(m);
        let zeros = vec![0u32; m];
        for (vb, b) in v.iter().zip(&basis) {
            let mono = MultiPoly::monomial(m, &zeros, b, rat(1));
            poly = &poly + &(vb * &mono);
        }
        SymbolField::new(ctx.clone(), poly)
    }

    #[test]
    fn symbol_action_matches_the_field_lie_derivative() {
        for m in 1..=2usize {
            for k in 0..=2u32 {
                for lam in [rat(0), ratio(1, 2)] {
                    let rep = symbol_rep(m, &lam, k);
                    assert!(rep.is_homomorphism());
                    let md = VRepModule::new(m, rep);
                    let ctx = SpaceCtx::new(m, lam.clone(), k);
                    let mut rng = Lcg::new(11 + k as u64 + m as u64);
                    for x in SlElement::basis(m) {
                        // A random polynomial section.
                        let mut poly = MultiPoly::zero(m);
                        for a in compositions(2, m) {
                            for b in compositions(k, m) {
                                let mut e = a.clone();
                                e.extend_from_slice(&b);
                                poly.add_term(e, rng.small_rational());
                            }
                        }
                        let f = SymbolField::new(ctx.clone(), poly);
                        let lhs = md.act(&x, &field_to_value(&f));
                        let rhs = field_to_value(&lie_field(&x, &f));
                        assert_eq!(lhs, rhs);
                        assert_eq!(value_to_field(&ctx, &lhs), lie_field(&x, &f));
                    }
                }
            }
        }
    }

    #[test]
    fn module_action_respects_the_bracket() {
        let m = 2usize;
        let md = VRepModule::new(m, symbol_rep(m, &ratio(1, 3), 1));
        let mut rng = Lcg::new(7);
        let v: Vec<MultiPoly> = (0..md.dim())
            .map(|_| {
                let mut p = MultiPoly::zero(m);
                for a in compositions(2, m) {
                    let mut e = a.clone();
                    e.extend_from_slice(&[0, 0]);
                    p.add_term(e, rng.small_rational());
                }
                p
            })
            .collect();
        let basis = SlElement::basis(m);
        for x in &basis {
            for y in &basis {
                let lhs = md.add_values(
                    &md.act(x, &md.act(y, &v)),
                    &md.scale_value(&md.act(y, &md.act(x, &v)), &rat(-1)),
                );
                let rhs = md.act(&x.bracket(y), &v);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn values_on_matrix_arguments_are_the_given_constants() {
        // With no form slot, the image cochain restricted to tuples from
        // the linear block returns the input constants on the nose.
        for m in 1..=2usize {
            let dim = 3;
            let mut rng = Lcg::new(21);
            for t in 1..=2usize {
                let gamma = random_gl_cochain(m, dim, t, 0, &mut rng);
                let c = chi(m, &gamma);
                for gt in increasing_tuples(m * m, t) {
                    let tuple: Vec<usize> = gt.iter().map(|g| m + g).collect();
                    let expected = gamma.values.get(&(gt, Vec::new()));
                    match c.values.get(&tuple) {
                        Some(v) => {
                            let want = expected.expect("value should be present");
                            for (p, w) in v.iter().zip(want) {
                                assert_eq!(p, &MultiPoly::constant(m, w.clone()));
                            }
                        }
                        None => {
                            assert!(expected
                                .map_or(true, |v| v.iter().all(Rational::is_zero)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn values_on_matrix_then_covector_arguments_are_the_given_constants() {
        // One form slot: on a tuple of linear-block elements followed by a
        // covector, the value is the constant the input assigns to that
        // matrix tuple and covector index.
        for m in 1..=2usize {
            let dim = 2;
            let mut rng = Lcg::new(33);
            for t in 0..=1usize {
                let gamma = random_gl_cochain(m, dim, t, 1, &mut rng);
                let c = chi(m, &gamma);
                for gt in increasing_tuples(m * m, t) {
                    for j in 0..m {
                        let mut tuple: Vec<usize> = gt.iter().map(|g| m + g).collect();
                        tuple.push(m + m * m + j);
                        let expected = gamma.values.get(&(gt.clone(), vec![j]));
                        match c.values.get(&tuple) {
                            Some(v) => {
                                let want = expected.expect("value should be present");
                                for (p, w) in v.iter().zip(want) {
                                    assert_eq!(p, &MultiPoly::constant(m, w.clone()));
                                }
                            }
                            None => {
                                assert!(expected
                                    .map_or(true, |v| v.iter().all(Rational::is_zero)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn single_quadratic_argument_reproduces_the_jacobian_pairing() {
        // m = 1, one matrix slot, no form slot: the embedded quadratic
        // field has Jacobian 2x, so the value at that argument is -2x
        // times the constant on the linear generator.
        let m = 1usize;
        let mut gamma = GlFormCochain::zero(1, 0, 1);
        gamma.set(vec![0], Vec::new(), vec![ratio(5, 3)]);
        let c = chi(m, &gamma);
        let v = c.values.get(&vec![2]).expect("quadratic slot");
        let mut want = MultiPoly::zero(1);
        want.add_term(vec![1, 0], ratio(-10, 3));
        assert_eq!(v[0], want);
        // The constant field has zero Jacobian, so its slot is empty.
        assert!(c.values.get(&vec![0]).is_none());
    }

    #[test]
    fn image_cochains_are_killed_by_constant_fields() {
        for m in 1..=2usize {
            let md = trivial_module(m);
            let mut rng = Lcg::new(5);
            for (t, u) in [(1usize, 0usize), (0, 1), (1, 1)] {
                let gamma = random_gl_cochain(m, 1, t, u, &mut rng);
                let c = chi(m, &gamma);
                for i in 0..m {
                    let h = &SlElement::basis(m)[i];
                    assert!(ce_contract(&md, h, &c).is_empty());
                    assert!(ce_lie(&md, h, &c).is_empty());
                }
            }
        }
    }

    #[test]
    fn image_values_are_homogeneous_of_the_predicted_degree() {
        // Degree bookkeeping: constant fields count -1, linear 0,
        // quadratic +1, and each form slot subtracts one.
        fn block_degree(m: usize, idx: usize) -> i64 {
            if idx < m {
                -1
            } else if idx < m + m * m {
                0
            } else {
                1
            }
        }
        for m in 1..=2usize {
            let mut rng = Lcg::new(99);
            for (t, u) in [(1usize, 0usize), (0, 1), (1, 1), (2, 0)] {
                let gamma = random_gl_cochain(m, 2, t, u, &mut rng);
                let c = chi(m, &gamma);
                for (tuple, vals) in &c.values {
                    let deg: i64 = tuple.iter().map(|&i| block_degree(m, i)).sum::<i64>()
                        - u as i64;
                    assert!(deg >= 0, "nonzero value must have nonnegative degree");
                    for p in vals {
                        for (e, _) in p.terms() {
                            let xdeg: u32 = e[..m].iter().sum();
                            assert_eq!(xdeg as i64, deg);
                            assert!(e[m..].iter().all(|&v| v == 0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn the_correspondence_intertwines_the_coboundaries() {
        for m in 1..=2usize {
            let mut reps = vec![FiniteRep::trivial(FiniteLieAlgebra::gl(m), 1)];
            reps.push(symbol_rep(m, &ratio(1, 2), 1));
            let mut rng = Lcg::new(417);
            for rep in reps {
                assert!(form_rep(m, &rep, 1).is_homomorphism());
                let md = VRepModule::new(m, rep.clone());
                for (t, u) in [(0usize, 0usize), (1, 0), (0, 1), (1, 1)] {
                    let gamma = random_gl_cochain(m, rep.space_dim, t, u, &mut rng);
                    let lhs = ce_coboundary(&md, &chi(m, &gamma));
                    let rhs = chi(m, &gl_form_coboundary(m, &rep, &gamma));
                    assert_eq!(lhs, rhs, "m={m} t={t} u={u}");
                }
            }
        }
    }

    #[test]
    fn the_correspondence_is_injective_on_coordinate_cochains() {
        use crate::linalg::SpanBuilder;
        for m in 1..=2usize {
            for (t, u) in [(1usize, 0usize), (0, 1), (1, 1)] {
                let basis = GlFormCochain::basis(m, 2, t, u);
                // Flatten each image to a shared coordinate vector.
                let mut keys: alloc::collections::BTreeSet<(Vec<usize>, usize, Vec<u32>)> =
                    alloc::collections::BTreeSet::new();
                let images: Vec<_> = basis.iter().map(|g| chi(m, g)).collect();
                for c in &images {
                    for (tuple, vals) in &c.values {
                        for (r, p) in vals.iter().enumerate() {
                            for (e, _) in p.terms() {
                                keys.insert((tuple.clone(), r, e.clone()));
                            }
                        }
                    }
                }
                let keys: Vec<_> = keys.into_iter().collect();
                let mut span = SpanBuilder::new();
                for c in &images {
                    let mut coords = vec![Rational::zero(); keys.len()];
                    for (i, (tuple, r, e)) in keys.iter().enumerate() {
                        if let Some(vals) = c.values.get(tuple) {
                            coords[i] = vals[*r].coeff(e);
                        }
                    }
                    assert!(span.insert(&coords), "images must stay independent");
                }
                assert_eq!(span.dim(), basis.len());
            }
        }
    }
}
