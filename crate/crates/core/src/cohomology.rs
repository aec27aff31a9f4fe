//! Chevalley–Eilenberg cohomology of sl(m+1) with coefficients in the
//! field and operator modules of the projective calculus.
//!
//! Cochains are stored on strictly increasing tuples of basis indices;
//! alternation is recovered by permutation parity at evaluation time. The
//! main computation runs on the grading-weight-zero subcomplex, which is
//! finite in each degree once the operator order is bounded; a bounded
//! brute-force computation over all weights is provided as an independent
//! cross-check on the line.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::field::{compositions, lie_field, SpaceCtx, SymbolField};
use crate::finite::{increasing_tuples, insert_signed, FiniteComplex};
use crate::lie::SlElement;
use crate::linalg::{QMatrix, SpanBuilder};
use crate::poly::MultiPoly;
use crate::rational::{is_nonneg_integer, rat, Rational};
use crate::weyl::{lie_op, term_weight, OperatorCtx, TermKey, WeylOperator};

/// Coefficients for Chevalley–Eilenberg cochains: an sl(m+1)-module with
/// exact value arithmetic.
pub trait CeModule {
    type Value: Clone + PartialEq + core::fmt::Debug;

    /// Base dimension `m` (the algebra is sl(m+1)).
    fn m(&self) -> usize;
    fn zero_value(&self) -> Self::Value;
    fn add_values(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale_value(&self, a: &Self::Value, c: &Rational) -> Self::Value;
    fn value_is_zero(&self, a: &Self::Value) -> bool;
    /// The module action of an algebra element.
    fn act(&self, x: &SlElement, v: &Self::Value) -> Self::Value;
}

/// A module with a canonical graded basis (`Key`), finite in each grading
/// weight, supporting exact linear algebra on cochain spaces.
pub trait CeGradedModule: CeModule {
    type Key: Ord + Clone + core::fmt::Debug;

    /// Canonical coordinates of a value.
    fn decompose(&self, v: &Self::Value) -> Vec<(Self::Key, Rational)>;
    /// Rebuild a value from canonical coordinates.
    fn compose_value(&self, parts: &[(Self::Key, Rational)]) -> Self::Value;
    /// Grading weight of a basis key (the eigenvalue of the action of the
    /// grading element on that basis direction).
    fn key_weight(&self, k: &Self::Key) -> Rational;
    /// Base-variable degree of a key, used by the brute-force bound.
    fn key_xdegree(&self, k: &Self::Key) -> u32;
    /// All keys of the given grading weight, or an error naming the
    /// direction in which the enumeration fails to be finite.
    fn keys_with_weight(&self, w: &Rational) -> Result<Vec<Self::Key>, String>;
    /// All keys with base degree at most `bound`, any weight.
    fn keys_with_xdegree_up_to(&self, bound: u32) -> Result<Vec<Self::Key>, String>;
}

/// The field module: smooth sections of weighted symmetric tensors, with
/// polynomial coefficients.
#[derive(Clone, Debug)]
pub struct FieldModule {
    pub ctx: SpaceCtx,
}

impl CeModule for FieldModule {
    type Value = SymbolField;

    fn m(&self) -> usize {
        self.ctx.m
    }
    fn zero_value(&self) -> SymbolField {
        SymbolField::zero(self.ctx.clone())
    }
    fn add_values(&self, a: &SymbolField, b: &SymbolField) -> SymbolField {
        a.add(b)
    }
    fn scale_value(&self, a: &SymbolField, c: &Rational) -> SymbolField {
        a.scale(c)
    }
    fn value_is_zero(&self, a: &SymbolField) -> bool {
        a.is_zero()
    }
    fn act(&self, x: &SlElement, v: &SymbolField) -> SymbolField {
        lie_field(x, v)
    }
}

impl CeGradedModule for FieldModule {
    type Key = Vec<u32>;

    fn decompose(&self, v: &SymbolField) -> Vec<(Vec<u32>, Rational)> {
        v.poly
            .terms()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }
    fn compose_value(&self, parts: &[(Vec<u32>, Rational)]) -> SymbolField {
        let mut p = MultiPoly::zero(self.ctx.m);
        for (e, c) in parts {
            p.add_term(e.clone(), c.clone());
        }
        SymbolField::new(self.ctx.clone(), p)
    }
    fn key_weight(&self, k: &Vec<u32>) -> Rational {
        let m = self.ctx.m;
        let xa: u32 = k[..m].iter().sum();
        let xb: u32 = k[m..].iter().sum();
        rat(xb as i64 - xa as i64) - rat(m as i64) * &self.ctx.weight
    }
    fn key_xdegree(&self, k: &Vec<u32>) -> u32 {
        k[..self.ctx.m].iter().sum()
    }
    fn keys_with_weight(&self, w: &Rational) -> Result<Vec<Vec<u32>>, String> {
        let m = self.ctx.m;
        let k = self.ctx.xi_degree;
        // |b| - |a| - m*weight = w pins |a|.
        let a_deg = rat(k as i64) - rat(m as i64) * &self.ctx.weight - w;
        if !is_nonneg_integer(&a_deg) {
            return Ok(Vec::new());
        }
        let a_deg = a_deg.to_integer();
        let a_deg: u32 = u32::try_from(a_deg.clone())
            .map_err(|_| format!("base degree {a_deg} out of range"))?;
        let mut out = Vec::new();
        for a in compositions(a_deg, m) {
            for b in compositions(k, m) {
                let mut e = a.clone();
                e.extend_from_slice(&b);
                out.push(e);
            }
        }
        out.sort();
        Ok(out)
    }
    fn keys_with_xdegree_up_to(&self, bound: u32) -> Result<Vec<Vec<u32>>, String> {
        let m = self.ctx.m;
        let k = self.ctx.xi_degree;
        let mut out = Vec::new();
        for d in 0..=bound {
            for a in compositions(d, m) {
                for b in compositions(k, m) {
                    let mut e = a.clone();
                    e.extend_from_slice(&b);
                    out.push(e);
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// The operator module: differential operators between two weighted symbol
/// spaces, in canonical form, with the operator order capped so that each
/// grading weight is finite-dimensional.
#[derive(Clone, Debug)]
pub struct OperatorModule {
    pub ctx: OperatorCtx,
    pub order_bound: Option<u32>,
}

impl OperatorModule {
    pub fn new(src: SpaceCtx, tgt: SpaceCtx, order_bound: u32) -> Self {
        OperatorModule {
            ctx: OperatorCtx::new(src, tgt),
            order_bound: Some(order_bound),
        }
    }

    fn bound(&self) -> Result<u32, String> {
        self.order_bound
            .ok_or_else(|| String::from("weight spaces are unbounded in the order direction"))
    }
}

impl CeModule for OperatorModule {
    type Value = WeylOperator;

    fn m(&self) -> usize {
        self.ctx.m()
    }
    fn zero_value(&self) -> WeylOperator {
        WeylOperator::zero(self.ctx.clone())
    }
    fn add_values(&self, a: &WeylOperator, b: &WeylOperator) -> WeylOperator {
        a.add(b)
    }
    fn scale_value(&self, a: &WeylOperator, c: &Rational) -> WeylOperator {
        a.scale(c)
    }
    fn value_is_zero(&self, a: &WeylOperator) -> bool {
        a.is_zero()
    }
    fn act(&self, x: &SlElement, v: &WeylOperator) -> WeylOperator {
        lie_op(x, v)
    }
}

impl CeGradedModule for OperatorModule {
    type Key = TermKey;

    fn decompose(&self, v: &WeylOperator) -> Vec<(TermKey, Rational)> {
        v.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
    fn compose_value(&self, parts: &[(TermKey, Rational)]) -> WeylOperator {
        let mut op = WeylOperator::zero(self.ctx.clone());
        for (k, c) in parts {
            op.add_raw_term(&k.a, &k.beta, &k.alpha, &k.gamma, c.clone());
        }
        op
    }
    fn key_weight(&self, k: &TermKey) -> Rational {
        term_weight(&self.ctx, k)
    }
    fn key_xdegree(&self, k: &TermKey) -> u32 {
        k.a.iter().sum()
    }
    fn keys_with_weight(&self, w: &Rational) -> Result<Vec<TermKey>, String> {
        let bound = self.bound()?;
        let m = self.ctx.m();
        let q = self.ctx.tgt.xi_degree;
        let p = self.ctx.src.xi_degree;
        let delta = &self.ctx.tgt.weight - &self.ctx.src.weight;
        let mut out = Vec::new();
        for ord in 0..=bound {
            // -|a| + ord + q - p - m*delta = w pins |a|.
            let a_deg =
                rat(ord as i64 + q as i64 - p as i64) - rat(m as i64) * &delta - w;
            if !is_nonneg_integer(&a_deg) {
                continue;
            }
            let a_deg = match u32::try_from(a_deg.to_integer()) {
                Ok(v) => v,
                Err(_) => return Err(String::from("base degree out of range")),
            };
            for alpha in compositions(ord, m) {
                for a in compositions(a_deg, m) {
                    for beta in compositions(q, m) {
                        for gamma in compositions(p, m) {
                            out.push(TermKey {
                                a: a.clone(),
                                beta: beta.clone(),
                                alpha: alpha.clone(),
                                gamma: gamma.clone(),
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
    fn keys_with_xdegree_up_to(&self, bound_x: u32) -> Result<Vec<TermKey>, String> {
        let bound = self.bound()?;
        let m = self.ctx.m();
        let q = self.ctx.tgt.xi_degree;
        let p = self.ctx.src.xi_degree;
        let mut out = Vec::new();
        for ord in 0..=bound {
            for alpha in compositions(ord, m) {
                for d in 0..=bound_x {
                    for a in compositions(d, m) {
                        for beta in compositions(q, m) {
                            for gamma in compositions(p, m) {
                                out.push(TermKey {
                                    a: a.clone(),
                                    beta: beta.clone(),
                                    alpha: alpha.clone(),
                                    gamma: gamma.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// An alternating cochain on sl(m+1), stored on strictly increasing tuples
/// of basis indices. Absent tuples mean zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<V> {
    pub degree: usize,
    pub values: BTreeMap<Vec<usize>, V>,
}

impl<V> Cochain<V> {
    pub fn zero(degree: usize) -> Self {
        Cochain {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, tuple: Vec<usize>, v: V) {
        assert_eq!(tuple.len(), self.degree);
        assert!(tuple.windows(2).all(|w| w[0] < w[1]), "tuple must increase");
        self.values.insert(tuple, v);
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Drop explicit zero values.
fn normalized<M: CeModule>(md: &M, mut c: Cochain<M::Value>) -> Cochain<M::Value> {
    c.values.retain(|_, v| !md.value_is_zero(v));
    c
}

/// Evaluate `c(first ^ rest)` where `first` is a general algebra element
/// given by coordinates and `rest` is an increasing tuple of basis indices.
fn eval_with_first<M: CeModule>(
    md: &M,
    c: &Cochain<M::Value>,
    first: &[Rational],
    rest: &[usize],
) -> M::Value {
    let mut acc = md.zero_value();
    for (k, ck) in first.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        if let Some((tuple, sgn)) = insert_signed(k, rest) {
            if let Some(v) = c.values.get(&tuple) {
                let coeff = rat(sgn as i64) * ck;
                acc = md.add_values(&acc, &md.scale_value(v, &coeff));
            }
        }
    }
    acc
}

/// The Chevalley–Eilenberg coboundary.
pub fn ce_coboundary<M: CeModule>(md: &M, c: &Cochain<M::Value>) -> Cochain<M::Value> {
    let m = md.m();
    let n = m * (m + 2);
    let basis = SlElement::basis(m);
    let s = c.degree;
    let mut out = Cochain::zero(s + 1);
    for u in increasing_tuples(n, s + 1) {
        let mut acc = md.zero_value();
        for i in 0..=s {
            let mut rest = u.clone();
            let xi = rest.remove(i);
            if let Some(v) = c.values.get(&rest) {
                let image = md.act(&basis[xi], v);
                let signed = if i % 2 == 0 {
                    image
                } else {
                    md.scale_value(&image, &rat(-1))
                };
                acc = md.add_values(&acc, &signed);
            }
        }
        for i in 0..s {
            for j in (i + 1)..=s {
                let mut rest = u.clone();
                rest.remove(j);
                rest.remove(i);
                let br = basis[u[i]].bracket(&basis[u[j]]);
                let inner = eval_with_first(md, c, &br.coords(), &rest);
                let sgn = if (i + j) % 2 == 0 { 1 } else { -1 };
                acc = md.add_values(&acc, &md.scale_value(&inner, &rat(sgn)));
            }
        }
        if !md.value_is_zero(&acc) {
            out.values.insert(u, acc);
        }
    }
    out
}

/// Contraction `i_X c` with an algebra element in the first slot.
pub fn ce_contract<M: CeModule>(
    md: &M,
    x: &SlElement,
    c: &Cochain<M::Value>,
) -> Cochain<M::Value> {
    assert!(c.degree >= 1, "cannot contract a 0-cochain");
    let m = md.m();
    let n = m * (m + 2);
    let coords = x.coords();
    let mut out = Cochain::zero(c.degree - 1);
    for t in increasing_tuples(n, c.degree - 1) {
        let v = eval_with_first(md, c, &coords, &t);
        if !md.value_is_zero(&v) {
            out.values.insert(t, v);
        }
    }
    out
}

/// The Lie derivative of a cochain along an algebra element, by its
/// defining formula: act on the value, subtract the sum over slots of the
/// cochain with the bracket substituted into that slot.
pub fn ce_lie<M: CeModule>(md: &M, x: &SlElement, c: &Cochain<M::Value>) -> Cochain<M::Value> {
    let m = md.m();
    let n = m * (m + 2);
    let basis = SlElement::basis(m);
    let mut out = Cochain::zero(c.degree);
    for t in increasing_tuples(n, c.degree) {
        let mut acc = match c.values.get(&t) {
            Some(v) => md.act(x, v),
            None => md.zero_value(),
        };
        for i in 0..c.degree {
            let mut rest = t.clone();
            let ti = rest.remove(i);
            let br = x.bracket(&basis[ti]);
            let inner = eval_with_first(md, c, &br.coords(), &rest);
            // Moving the substituted slot to the front costs (-1)^i; the
            // whole slot sum enters with a minus sign.
            let sgn = if i % 2 == 0 { -1 } else { 1 };
            acc = md.add_values(&acc, &md.scale_value(&inner, &rat(sgn)));
        }
        if !md.value_is_zero(&acc) {
            out.values.insert(t, acc);
        }
    }
    out
}

/// An indexed basis of a cochain space: pairs of (tuple, value key).
pub struct CeBasis<K: Ord + Clone> {
    pub elems: Vec<(Vec<usize>, K)>,
    index: BTreeMap<(Vec<usize>, K), usize>,
}

impl<K: Ord + Clone> CeBasis<K> {
    fn from_elems(elems: Vec<(Vec<usize>, K)>) -> Self {
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        CeBasis { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn position(&self, tuple: &[usize], key: &K) -> Option<usize> {
        self.index.get(&(tuple.to_vec(), key.clone())).copied()
    }
}

/// Basis of the grading-weight-zero cochain space in one degree: on each
/// tuple, the value must carry weight equal to the sum of the grading
/// weights of the tuple's directions.
pub fn weight_zero_basis<M: CeGradedModule>(md: &M, degree: usize) -> Result<CeBasis<M::Key>, String> {
    let m = md.m();
    let n = m * (m + 2);
    let mut elems = Vec::new();
    for t in increasing_tuples(n, degree) {
        let w: i64 = t.iter().map(|&i| SlElement::basis_weight(m, i)).sum();
        for key in md.keys_with_weight(&rat(w))? {
            elems.push((t.clone(), key));
        }
    }
    Ok(CeBasis::from_elems(elems))
}

/// Basis of the bounded full cochain space (all weights, base degree of the
/// values at most `xdeg`).
fn bounded_basis<M: CeGradedModule>(
    md: &M,
    degree: usize,
    xdeg: u32,
) -> Result<CeBasis<M::Key>, String> {
    let m = md.m();
    let n = m * (m + 2);
    let keys = md.keys_with_xdegree_up_to(xdeg)?;
    let mut elems = Vec::new();
    for t in increasing_tuples(n, degree) {
        for key in &keys {
            elems.push((t.clone(), key.clone()));
        }
    }
    Ok(CeBasis::from_elems(elems))
}

/// Coordinates of a cochain in an indexed basis; errors if any component
/// falls outside the basis.
pub fn cochain_coordinates<M: CeGradedModule>(
    md: &M,
    basis: &CeBasis<M::Key>,
    c: &Cochain<M::Value>,
) -> Result<Vec<Rational>, String> {
    let mut out = vec![Rational::zero(); basis.len()];
    for (t, v) in &c.values {
        for (key, coeff) in md.decompose(v) {
            if coeff.is_zero() {
                continue;
            }
            match basis.position(t, &key) {
                Some(i) => out[i] = coeff,
                None => {
                    return Err(format!(
                        "component {key:?} on tuple {t:?} is outside the basis"
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// Rebuild a cochain from coordinates in an indexed basis.
pub fn cochain_from_coordinates<M: CeGradedModule>(
    md: &M,
    degree: usize,
    basis: &CeBasis<M::Key>,
    coords: &[Rational],
) -> Cochain<M::Value> {
    assert_eq!(coords.len(), basis.len());
    let mut per_tuple: BTreeMap<Vec<usize>, Vec<(M::Key, Rational)>> = BTreeMap::new();
    for ((t, key), c) in basis.elems.iter().zip(coords) {
        if !c.is_zero() {
            per_tuple
                .entry(t.clone())
                .or_default()
                .push((key.clone(), c.clone()));
        }
    }
    let mut out = Cochain::zero(degree);
    for (t, parts) in per_tuple {
        let v = md.compose_value(&parts);
        if !md.value_is_zero(&v) {
            out.values.insert(t, v);
        }
    }
    out
}

/// Matrix of the coboundary from one indexed basis to another; errors if
/// the coboundary of a basis element leaves the codomain basis.
pub fn coboundary_matrix<M: CeGradedModule>(
    md: &M,
    degree: usize,
    dom: &CeBasis<M::Key>,
    cod: &CeBasis<M::Key>,
) -> Result<QMatrix, String> {
    let mut mat = QMatrix::zero(cod.len(), dom.len());
    for (j, (t, key)) in dom.elems.iter().enumerate() {
        let mut c = Cochain::zero(degree);
        c.values
            .insert(t.clone(), md.compose_value(&[(key.clone(), rat(1))]));
        let dc = ce_coboundary(md, &c);
        let coords = cochain_coordinates(md, cod, &dc)?;
        for (i, v) in coords.into_iter().enumerate() {
            if !v.is_zero() {
                mat.set(i, j, v);
            }
        }
    }
    Ok(mat)
}

/// The weight-zero subcomplex through degree `max_degree`, with its bases.
pub struct WeightZeroComplex<K: Ord + Clone> {
    pub bases: Vec<CeBasis<K>>,
    pub complex: FiniteComplex,
}

pub fn weight_zero_complex<M: CeGradedModule>(
    md: &M,
    max_degree: usize,
) -> Result<WeightZeroComplex<M::Key>, String> {
    let mut bases = Vec::new();
    for s in 0..=(max_degree + 1) {
        bases.push(weight_zero_basis(md, s)?);
    }
    let mut mats = Vec::new();
    for s in 0..=max_degree {
        mats.push(coboundary_matrix(md, s, &bases[s], &bases[s + 1])?);
    }
    let dims: Vec<usize> = bases.iter().map(CeBasis::len).collect();
    let complex = FiniteComplex::new(dims, mats)?;
    Ok(WeightZeroComplex { bases, complex })
}

/// Betti numbers with representative cocycles.
pub struct BettiData<V> {
    /// Cohomology dimensions in degrees `0..=max_degree`.
    pub dims: Vec<usize>,
    /// For each degree, one representative cocycle per cohomology class.
    pub representatives: Vec<Vec<Cochain<V>>>,
}

/// Betti numbers of the weight-zero subcomplex in degrees `0..=max_degree`,
/// with representatives picked from the cocycle space modulo coboundaries.
pub fn weight_zero_betti<M: CeGradedModule>(
    md: &M,
    max_degree: usize,
) -> Result<BettiData<M::Value>, String> {
    let wz = weight_zero_complex(md, max_degree)?;
    let betti_all = wz.complex.betti();
    let mut dims = Vec::new();
    let mut representatives = Vec::new();
    for s in 0..=max_degree {
        dims.push(betti_all[s]);
        let mut span = SpanBuilder::new();
        if s > 0 {
            let d_prev = &wz.complex.d[s - 1];
            for j in 0..d_prev.cols() {
                let col: Vec<Rational> = (0..d_prev.rows()).map(|i| d_prev.get(i, j)).collect();
                span.insert(&col);
            }
        }
        let mut reps = Vec::new();
        for z in wz.complex.d[s].kernel_basis() {
            if span.insert(&z) {
                reps.push(cochain_from_coordinates(md, s, &wz.bases[s], &z));
            }
        }
        if reps.len() != betti_all[s] {
            return Err(format!(
                "representative count {} disagrees with dimension {} in degree {s}",
                reps.len(),
                betti_all[s]
            ));
        }
        representatives.push(reps);
    }
    Ok(BettiData {
        dims,
        representatives,
    })
}

/// Independence of cochain classes modulo coboundaries: given cocycles of a
/// common degree, report how many of them successively enlarge the span of
/// the coboundary space (so the result equals the dimension of the span of
/// their classes). Errors if an input is not a weight-zero cocycle.
pub fn class_span_dim<M: CeGradedModule>(
    md: &M,
    degree: usize,
    cochains: &[Cochain<M::Value>],
) -> Result<usize, String> {
    let wz = weight_zero_complex(md, degree)?;
    let mut span = SpanBuilder::new();
    if degree > 0 {
        let d_prev = &wz.complex.d[degree - 1];
        for j in 0..d_prev.cols() {
            let col: Vec<Rational> = (0..d_prev.rows()).map(|i| d_prev.get(i, j)).collect();
            span.insert(&col);
        }
    }
    let mut extra = 0usize;
    for c in cochains {
        if !normalized(md, ce_coboundary(md, c)).is_empty() {
            return Err(String::from("input cochain is not a cocycle"));
        }
        let coords = cochain_coordinates(md, &wz.bases[degree], c)?;
        if span.insert(&coords) {
            extra += 1;
        }
    }
    Ok(extra)
}

/// Brute-force Betti numbers of the bounded full complex (all grading
/// weights, value base degree capped), used as an independent oracle for
/// the weight-zero reduction on small instances.
///
/// Cocycles at degree `s` are exact kernels (the codomain cap exceeds the
/// domain cap by one, and the coboundary raises base degree by at most
/// one); the coboundary space inside the cap is measured by the difference
/// of two kernels of the uncapped matrix.
pub fn bounded_betti_oracle<M: CeGradedModule>(
    md: &M,
    max_degree: usize,
    xdeg: u32,
) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for s in 0..=max_degree {
        let dom = bounded_basis(md, s, xdeg)?;
        let cod = bounded_basis(md, s + 1, xdeg + 1)?;
        let z = dom.len() - coboundary_matrix(md, s, &dom, &cod)?.rank();
        if s == 0 {
            out.push(z);
            continue;
        }
        // Coboundaries landing inside the cap: rank(L) - rank(L without the
        // in-cap rows), with the domain cap padded so that no preimage of an
        // in-cap coboundary is cut off by weight bookkeeping.
        let pad = 2 * (s as u32 + 1);
        let dom2 = bounded_basis(md, s - 1, xdeg + pad)?;
        let cod2 = bounded_basis(md, s, xdeg + pad + 1)?;
        let l = coboundary_matrix(md, s - 1, &dom2, &cod2)?;
        let keep_out: Vec<bool> = cod2
            .elems
            .iter()
            .map(|(_, key)| md.key_xdegree(key) > xdeg)
            .collect();
        let l_out = l.row_submatrix(&keep_out);
        let boundaries_in_cap = l.rank() - l_out.rank();
        out.push(z - boundaries_in_cap);
    }
    Ok(out)
}

/// Find the single scalar `s` with `lhs_i = s * rhs_i` across parallel
/// families of operators; errors when no such scalar exists.
fn proportionality_scalar(
    pairs: &[(WeylOperator, WeylOperator)],
) -> Result<Rational, String> {
    let mut found: Option<Rational> = None;
    for (lhs, rhs) in pairs {
        if rhs.is_zero() {
            if !lhs.is_zero() {
                return Err(String::from("left side nonzero where right side vanishes"));
            }
            continue;
        }
        let (k0, c0) = rhs.terms().next().expect("nonzero operator has a term");
        let l0 = lhs
            .terms()
            .find(|(k, _)| *k == k0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        let s = &l0 / c0;
        if *lhs != rhs.scale(&s) {
            return Err(String::from("sides are not proportional"));
        }
        match &found {
            None => found = Some(s),
            Some(prev) if *prev != s => {
                return Err(String::from("proportionality scalar varies"))
            }
            _ => {}
        }
    }
    Ok(found.unwrap_or_else(Rational::zero))
}

/// The connecting scalar of the contraction cocycles: builds the degree-`t`
/// cochain whose values contract `n` fiber directions (the 0-cochain `T_n`
/// for `t = 0`, the 1-cochain `tau_n` for `t = 1`), applies the coboundary,
/// and verifies that the result is a scalar multiple of the corresponding
/// divergence–contraction reference cochain; returns the scalar.
pub fn theta_check(
    m: usize,
    q: u32,
    n: u32,
    delta: &Rational,
    t: usize,
) -> Result<Rational, String> {
    assert!(n >= 1, "the contraction count must be positive");
    let basis = SlElement::basis(m);
    let dim = basis.len();
    match t {
        0 => {
            let tn = crate::maps::t_map(m, delta, q, n);
            let mut pairs = Vec::new();
            for x in &basis {
                let lhs = lie_op(x, &tn);
                let rhs = crate::maps::gamma_map(x, delta, q, n);
                pairs.push((lhs, rhs));
            }
            proportionality_scalar(&pairs)
        }
        1 => {
            let md = OperatorModule {
                ctx: OperatorCtx::new(
                    SpaceCtx::new(m, delta.clone(), q + n),
                    SpaceCtx::new(m, delta.clone(), q),
                ),
                order_bound: None,
            };
            let mut c = Cochain::zero(1);
            for (i, x) in basis.iter().enumerate() {
                let v = crate::maps::tau_map(x, delta, q, n);
                if !v.is_zero() {
                    c.values.insert(vec![i], v);
                }
            }
            let dc = ce_coboundary(&md, &c);
            let mut pairs = Vec::new();
            for i in 0..dim {
                for j in (i + 1)..dim {
                    let lhs = dc
                        .values
                        .get(&vec![i, j])
                        .cloned()
                        .unwrap_or_else(|| md.zero_value());
                    // Reference: (X, Y) -> div(Y*) gamma_n(X) - div(X*) gamma_n(Y).
                    let gx = crate::maps::gamma_map(&basis[i], delta, q, n);
                    let gy = crate::maps::gamma_map(&basis[j], delta, q, n);
                    let div_x = basis[i].embed().divergence();
                    let div_y = basis[j].embed().divergence();
                    let rhs = premultiply_poly(&gx, &div_y).sub(&premultiply_poly(&gy, &div_x));
                    pairs.push((lhs, rhs));
                }
            }
            proportionality_scalar(&pairs)
        }
        _ => Err(String::from("only cochain degrees 0 and 1 are supported")),
    }
}

/// Multiply an operator on the left by a base polynomial.
fn premultiply_poly(op: &WeylOperator, f: &MultiPoly) -> WeylOperator {
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
