//! Finite-dimensional homological algebra: cochain complexes of rational
//! vector spaces, Betti numbers, mapping cones with the kernel/cokernel
//! dimension identity, Lie algebras given by structure constants, their
//! Chevalley–Eilenberg cohomology with finite coefficients, and the
//! invariants of the exterior coadjoint representation of gl(m).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::QMatrix;
use crate::rational::{rat, Rational};

/// A bounded cochain complex `V^0 -> V^1 -> ... -> V^L` of finite-dimensional
/// rational spaces; `d[s]` maps degree `s` to degree `s + 1`.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    pub dims: Vec<usize>,
    pub d: Vec<QMatrix>,
}

impl FiniteComplex {
    /// Validate shapes and `d . d = 0`, then wrap.
    pub fn new(dims: Vec<usize>, d: Vec<QMatrix>) -> Result<Self, String> {
        if d.len() + 1 != dims.len() {
            return Err(format!(
                "expected {} differentials for {} degrees",
                dims.len().saturating_sub(1),
                dims.len()
            ));
        }
        for (s, m) in d.iter().enumerate() {
            if m.cols() != dims[s] || m.rows() != dims[s + 1] {
                return Err(format!("differential {s} has the wrong shape"));
            }
        }
        for s in 0..d.len().saturating_sub(1) {
            let dd = d[s + 1].matmul(&d[s]);
            if dd != QMatrix::zero(dd.rows(), dd.cols()) {
                return Err(format!("d.d is nonzero in degree {s}"));
            }
        }
        Ok(FiniteComplex { dims, d })
    }

    /// Number of graded degrees.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Rank of the outgoing differential at degree `s` (zero past the end).
    fn out_rank(&self, s: usize) -> usize {
        self.d.get(s).map_or(0, QMatrix::rank)
    }

    /// Cohomology dimensions in every degree:
    /// `dim ker d_s - rank d_{s-1}`.
    pub fn betti(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|s| {
                let ker = self.dims[s] - self.out_rank(s);
                let prev = if s == 0 { 0 } else { self.out_rank(s - 1) };
                ker - prev
            })
            .collect()
    }

    /// A basis of the cocycles at degree `s` as coordinate vectors.
    pub fn cocycle_basis(&self, s: usize) -> Vec<Vec<Rational>> {
        match self.d.get(s) {
            Some(m) => m.kernel_basis(),
            None => (0..self.dims[s])
                .map(|i| {
                    let mut v = vec![Rational::zero(); self.dims[s]];
                    v[i] = Rational::one();
                    v
                })
                .collect(),
        }
    }
}

/// Verify that `phi` is a degree-preserving chain map between complexes of
/// equal length, then form the cone complex whose degree-`s` space is
/// `A^s (+) B^{s-1}` with differential `(a, b) -> (d a, phi(a) - d b)`.
pub fn cone(
    phi: &[QMatrix],
    a: &FiniteComplex,
    b: &FiniteComplex,
) -> Result<FiniteComplex, String> {
    if a.len() != b.len() || phi.len() != a.len() {
        return Err(String::from("cone inputs must share one degree range"));
    }
    for (s, p) in phi.iter().enumerate() {
        if p.cols() != a.dims[s] || p.rows() != b.dims[s] {
            return Err(format!("component {s} of the map has the wrong shape"));
        }
    }
    for s in 0..a.d.len() {
        if phi[s + 1].matmul(&a.d[s]) != b.d[s].matmul(&phi[s]) {
            return Err(format!("not a chain map at degree {s}"));
        }
    }
    let len = a.len();
    let dims: Vec<usize> = (0..=len)
        .map(|s| {
            a.dims.get(s).copied().unwrap_or(0) + if s == 0 { 0 } else { b.dims[s - 1] }
        })
        .collect();
    let mut d = Vec::new();
    for s in 0..len {
        let a_s = a.dims.get(s).copied().unwrap_or(0);
        let b_sm1 = if s == 0 { 0 } else { b.dims[s - 1] };
        let a_s1 = a.dims.get(s + 1).copied().unwrap_or(0);
        let b_s = b.dims[s];
        let mut m = QMatrix::zero(a_s1 + b_s, a_s + b_sm1);
        if let Some(da) = a.d.get(s) {
            for i in 0..da.rows() {
                for j in 0..da.cols() {
                    let v = da.get(i, j);
                    if !v.is_zero() {
                        m.set(i, j, v);
                    }
                }
            }
        }
        for i in 0..b.dims[s] {
            for j in 0..a_s {
                let v = phi[s].get(i, j);
                if !v.is_zero() {
                    m.set(a_s1 + i, j, v);
                }
            }
        }
        if s > 0 {
            let db = &b.d[s - 1];
            for i in 0..db.rows() {
                for j in 0..db.cols() {
                    let v = db.get(i, j);
                    if !v.is_zero() {
                        m.set(a_s1 + i, a_s + j, -v);
                    }
                }
            }
        }
        d.push(m);
    }
    FiniteComplex::new(dims, d)
}

/// Rank of the map induced by `phi` on degree-`s` cohomology.
fn induced_rank(phi: &[QMatrix], a: &FiniteComplex, b: &FiniteComplex, s: usize) -> usize {
    let cocycles = a.cocycle_basis(s);
    // Image of the previous differential of B, as columns.
    let mut img = QMatrix::zero(b.dims[s], 0);
    if s > 0 {
        let db = &b.d[s - 1];
        for j in 0..db.cols() {
            let col: Vec<Rational> = (0..db.rows()).map(|i| db.get(i, j)).collect();
            img = img.with_column(&col);
        }
    }
    let base_rank = img.rank();
    let mut ext = img;
    for z in &cocycles {
        ext = ext.with_column(&phi[s].mul_vec(z));
    }
    ext.rank() - base_rank
}

/// Betti numbers of the cone computed two ways: directly, and as
/// `dim ker(phi_# at s) + dim coker(phi_# at s-1)` on cohomology.
pub struct ConeReport {
    pub cone_betti: Vec<usize>,
    pub predicted: Vec<usize>,
}

impl ConeReport {
    pub fn matches(&self) -> bool {
        self.cone_betti == self.predicted
    }
}

pub fn cone_dimension_identity(
    phi: &[QMatrix],
    a: &FiniteComplex,
    b: &FiniteComplex,
) -> Result<ConeReport, String> {
    let c = cone(phi, a, b)?;
    let ha = a.betti();
    let hb = b.betti();
    let ranks: Vec<usize> = (0..a.len()).map(|s| induced_rank(phi, a, b, s)).collect();
    let predicted: Vec<usize> = (0..=a.len())
        .map(|s| {
            let ker = if s < a.len() { ha[s] - ranks[s] } else { 0 };
            let coker = if s == 0 { 0 } else { hb[s - 1] - ranks[s - 1] };
            ker + coker
        })
        .collect();
    Ok(ConeReport {
        cone_betti: c.betti(),
        predicted,
    })
}

/// A Lie algebra presented by structure constants on a fixed basis:
/// `bracket[i][j]` holds the coordinates of `[e_i, e_j]`.
#[derive(Clone, Debug)]
pub struct FiniteLieAlgebra {
    pub dim: usize,
    pub bracket: Vec<Vec<Vec<Rational>>>,
}

impl FiniteLieAlgebra {
    /// gl(m) on the matrix-unit basis `E_{ab}` in row-major order:
    /// `[E_ab, E_cd] = delta_bc E_ad - delta_da E_cb`.
    pub fn gl(m: usize) -> Self {
        let n = m * m;
        let idx = |a: usize, b: usize| a * m + b;
        let mut bracket = vec![vec![vec![Rational::zero(); n]; n]; n];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let (i, j) = (idx(a, b), idx(c, d));
                        if b == c {
                            bracket[i][j][idx(a, d)] += Rational::one();
                        }
                        if d == a {
                            bracket[i][j][idx(c, b)] -= Rational::one();
                        }
                    }
                }
            }
        }
        FiniteLieAlgebra { dim: n, bracket }
    }

    /// Check antisymmetry and the Jacobi identity on all basis triples.
    pub fn is_lie_algebra(&self) -> bool {
        let n = self.dim;
        let br = |i: usize, j: usize| -> Vec<Rational> { self.bracket[i][j].clone() };
        let br_vec = |v: &[Rational], j: usize| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); n];
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    for (k, w) in self.bracket[i][j].iter().enumerate() {
                        out[k] += c * w;
                    }
                }
            }
            out
        };
        for i in 0..n {
            for j in 0..n {
                let anti: Vec<Rational> = br(i, j)
                    .iter()
                    .zip(&br(j, i))
                    .map(|(x, y)| x + y)
                    .collect();
                if !anti.iter().all(Rational::is_zero) {
                    return false;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // [[i,j],k] + [[j,k],i] + [[k,i],j] = 0.
                    let mut acc = br_vec(&br(i, j), k);
                    for (t, v) in br_vec(&br(j, k), i).into_iter().enumerate() {
                        acc[t] += v;
                    }
                    for (t, v) in br_vec(&br(k, i), j).into_iter().enumerate() {
                        acc[t] += v;
                    }
                    if !acc.iter().all(Rational::is_zero) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A finite-dimensional representation: one square matrix per basis element.
#[derive(Clone, Debug)]
pub struct FiniteRep {
    pub algebra: FiniteLieAlgebra,
    pub mats: Vec<QMatrix>,
    pub space_dim: usize,
}

impl FiniteRep {
    pub fn new(algebra: FiniteLieAlgebra, mats: Vec<QMatrix>) -> Self {
        assert_eq!(mats.len(), algebra.dim);
        let space_dim = mats.first().map_or(0, QMatrix::rows);
        for m in &mats {
            assert_eq!(m.rows(), space_dim);
            assert_eq!(m.cols(), space_dim);
        }
        FiniteRep {
            algebra,
            mats,
            space_dim,
        }
    }

    /// The trivial action on an `n`-dimensional space.
    pub fn trivial(algebra: FiniteLieAlgebra, n: usize) -> Self {
        let mats = vec![QMatrix::zero(n, n); algebra.dim];
        FiniteRep {
            algebra,
            mats,
            space_dim: n,
        }
    }

    /// The adjoint representation of the algebra on itself.
    pub fn adjoint(algebra: FiniteLieAlgebra) -> Self {
        let n = algebra.dim;
        let mats: Vec<QMatrix> = (0..n)
            .map(|i| {
                let mut m = QMatrix::zero(n, n);
                for j in 0..n {
                    for (k, c) in algebra.bracket[i][j].iter().enumerate() {
                        if !c.is_zero() {
                            m.set(k, j, c.clone());
                        }
                    }
                }
                m
            })
            .collect();
        FiniteRep {
            algebra,
            mats,
            space_dim: n,
        }
    }

    /// Check `[rho(e_i), rho(e_j)] = rho([e_i, e_j])` on all basis pairs.
    pub fn is_homomorphism(&self) -> bool {
        let n = self.algebra.dim;
        for i in 0..n {
            for j in 0..n {
                let mut rhs = QMatrix::zero(self.space_dim, self.space_dim);
                for (k, c) in self.algebra.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        for r in 0..self.space_dim {
                            for s in 0..self.space_dim {
                                let v = self.mats[k].get(r, s);
                                if !v.is_zero() {
                                    rhs.add_to(r, s, &(c * &v));
                                }
                            }
                        }
                    }
                }
                let lhs2 = self.mats[j].matmul(&self.mats[i]);
                let mut comm = self.mats[i].matmul(&self.mats[j]);
                for r in 0..self.space_dim {
                    for s in 0..self.space_dim {
                        let v = lhs2.get(r, s);
                        if !v.is_zero() {
                            comm.add_to(r, s, &-v);
                        }
                    }
                }
                if comm != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// All strictly increasing `s`-tuples from `0..n` in lexicographic order.
pub fn increasing_tuples(n: usize, s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    if s > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t: Vec<usize> = (0..s).collect();
    loop {
        out.push(t.clone());
        // Advance to the next combination.
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if t[i] != i + n - s {
                break;
            }
        }
        t[i] += 1;
        for j in (i + 1)..s {
            t[j] = t[j - 1] + 1;
        }
    }
}

/// Sort `k` into the increasing tuple `rest`; `None` if `k` already occurs,
/// otherwise the sorted tuple and the sign of the sorting permutation.
pub(crate) fn insert_signed(k: usize, rest: &[usize]) -> Option<(Vec<usize>, i32)> {
    if rest.contains(&k) {
        return None;
    }
    let pos = rest.iter().take_while(|&&r| r < k).count();
    let mut t = Vec::with_capacity(rest.len() + 1);
    t.extend_from_slice(&rest[..pos]);
    t.push(k);
    t.extend_from_slice(&rest[pos..]);
    let sign = if pos % 2 == 0 { 1 } else { -1 };
    Some((t, sign))
}

/// The full Chevalley–Eilenberg complex of a finite representation, with
/// degree-`s` space `Lambda^s g* (x) V` coordinatized by (tuple, vector)
/// pairs in lexicographic order.
pub fn finite_ce_complex(rep: &FiniteRep) -> FiniteComplex {
    let n = rep.algebra.dim;
    let v = rep.space_dim;
    let dims: Vec<usize> = (0..=n)
        .map(|s| increasing_tuples(n, s).len() * v)
        .collect();
    let mut d = Vec::new();
    for s in 0..n {
        let dom = increasing_tuples(n, s);
        let cod = increasing_tuples(n, s + 1);
        let dom_index: alloc::collections::BTreeMap<Vec<usize>, usize> = dom
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let mut m = QMatrix::zero(cod.len() * v, dom.len() * v);
        for (ui, u) in cod.iter().enumerate() {
            // Action terms: sum_i (-1)^i rho(e_{u_i}) c(u with i removed).
            for (i, &xi) in u.iter().enumerate() {
                let mut rest = u.clone();
                rest.remove(i);
                if let Some(&ti) = dom_index.get(&rest) {
                    let sgn = if i % 2 == 0 { 1 } else { -1 };
                    for r in 0..v {
                        for col in 0..v {
                            let val = rep.mats[xi].get(r, col);
                            if !val.is_zero() {
                                m.add_to(ui * v + r, ti * v + col, &(rat(sgn) * val));
                            }
                        }
                    }
                }
            }
            // Bracket terms: sum_{i<j} (-1)^{i+j} c([e_{u_i}, e_{u_j}] ^ rest).
            for i in 0..u.len() {
                for j in (i + 1)..u.len() {
                    let mut rest = u.clone();
                    rest.remove(j);
                    rest.remove(i);
                    let sgn0 = if (i + j) % 2 == 0 { 1 } else { -1 };
                    for (k, c) in rep.algebra.bracket[u[i]][u[j]].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        if let Some((t, sgn1)) = insert_signed(k, &rest) {
                            if let Some(&ti) = dom_index.get(&t) {
                                let coeff = rat((sgn0 * sgn1) as i64) * c;
                                for r in 0..v {
                                    m.add_to(ui * v + r, ti * v + r, &coeff);
                                }
                            }
                        }
                    }
                }
            }
        }
        d.push(m);
    }
    FiniteComplex::new(dims, d).expect("Chevalley-Eilenberg differential must square to zero")
}

/// Betti numbers of the Chevalley–Eilenberg cohomology of a finite
/// representation, in degrees `0..=dim(algebra)`.
pub fn finite_ce_betti(rep: &FiniteRep) -> Vec<usize> {
    finite_ce_complex(rep).betti()
}

/// Dimensions of the invariants of the coadjoint action of gl(m) on each
/// exterior power `Lambda^s gl(m)*`, in degrees `0..=m^2`. Computed as the
/// joint kernel of the derivation action of every basis element.
pub fn glinv_dims(m: usize) -> Vec<usize> {
    let alg = FiniteLieAlgebra::gl(m);
    let n = alg.dim;
    // Action on the dual basis: e_a . e^j = -sum_k c[a][k][j] e^k.
    let dual_action = |a: usize, j: usize| -> Vec<(usize, Rational)> {
        (0..n)
            .filter_map(|k| {
                let c = &alg.bracket[a][k][j];
                if c.is_zero() {
                    None
                } else {
                    Some((k, -c))
                }
            })
            .collect()
    };
    (0..=n)
        .map(|s| {
            let basis = increasing_tuples(n, s);
            if basis.is_empty() {
                return 0;
            }
            let index: alloc::collections::BTreeMap<Vec<usize>, usize> = basis
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i))
                .collect();
            let mut stacked = QMatrix::zero(0, basis.len());
            for a in 0..n {
                let mut mat = QMatrix::zero(basis.len(), basis.len());
                for (ti, t) in basis.iter().enumerate() {
                    for (pos, &tj) in t.iter().enumerate() {
                        let mut rest = t.clone();
                        rest.remove(pos);
                        // Moving the replaced factor to the front costs
                        // (-1)^pos before the front-insertion sign applies.
                        let front = if pos % 2 == 0 { 1 } else { -1 };
                        for (k, c) in dual_action(a, tj) {
                            if let Some((sorted, sgn)) = insert_signed(k, &rest) {
                                let row = index[&sorted];
                                mat.add_to(row, ti, &(rat((front * sgn) as i64) * &c));
                            }
                        }
                    }
                }
                stacked = stacked.vstack(&mat);
            }
            basis.len() - stacked.rank()
        })
        .collect()
}

/// Deterministic pseudo-random stream for reproducible randomized tests.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        // xorshift64*.
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform draw from `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// A small rational with numerator in `-3..=3` and denominator 1 or 2.
    pub fn small_rational(&mut self) -> Rational {
        let num = self.below(7) as i64 - 3;
        let den = 1 + self.below(2) as i64;
        crate::rational::ratio(num, den)
    }
}

/// Build a random complex in canonical form (explicit homology and pair
/// blocks) together with the block data needed to write chain maps against
/// it: per degree, the list of (block kind, index) descriptors.
struct CanonicalComplex {
    complex: FiniteComplex,
    /// Per degree: (homology block size, outgoing pair block size,
    /// incoming image block size). dims = h + r_out + r_in.
    blocks: Vec<(usize, usize, usize)>,
}

fn random_canonical(rng: &mut Lcg, len: usize, max_block: usize) -> CanonicalComplex {
    let h: Vec<usize> = (0..len).map(|_| rng.below(max_block + 1)).collect();
    // r[s] = rank of d_s: pairs degree s with degree s+1.
    let mut r: Vec<usize> = (0..len).map(|_| rng.below(max_block + 1)).collect();
    if len > 0 {
        r[len - 1] = 0;
    }
    let dims: Vec<usize> = (0..len)
        .map(|s| h[s] + r[s] + if s == 0 { 0 } else { r[s - 1] })
        .collect();
    // Coordinates in degree s: [homology | outgoing pairs | incoming images].
    let mut d = Vec::new();
    for s in 0..len.saturating_sub(1) {
        let mut m = QMatrix::zero(dims[s + 1], dims[s]);
        for t in 0..r[s] {
            let row = h[s + 1] + r[s + 1] + t;
            let col = h[s] + t;
            m.set(row, col, Rational::one());
        }
        d.push(m);
    }
    CanonicalComplex {
        complex: FiniteComplex::new(dims, d).expect("canonical complex is exact by construction"),
        blocks: (0..len)
            .map(|s| (h[s], r[s], if s == 0 { 0 } else { r[s - 1] }))
            .collect(),
    }
}

/// A random invertible change of basis and its inverse, as a product of
/// elementary shears.
fn random_basis_change(rng: &mut Lcg, n: usize, steps: usize) -> (QMatrix, QMatrix) {
    let mut p = QMatrix::identity(n);
    let mut p_inv = QMatrix::identity(n);
    if n < 2 {
        return (p, p_inv);
    }
    for _ in 0..steps {
        let i = rng.below(n);
        let mut j = rng.below(n);
        if i == j {
            j = (j + 1) % n;
        }
        let c = rng.small_rational();
        let mut shear = QMatrix::identity(n);
        shear.add_to(i, j, &c);
        let mut unshear = QMatrix::identity(n);
        unshear.add_to(i, j, &-&c);
        p = shear.matmul(&p);
        p_inv = p_inv.matmul(&unshear);
    }
    (p, p_inv)
}

/// A reproducible random test instance for the cone identity: two complexes
/// of the given length and a verified chain map between them, all expressed
/// in scrambled bases.
pub fn random_cone_instance(
    seed: u64,
    len: usize,
    max_block: usize,
) -> (Vec<QMatrix>, FiniteComplex, FiniteComplex) {
    let mut rng = Lcg::new(seed);
    let a = random_canonical(&mut rng, len, max_block);
    let b = random_canonical(&mut rng, len, max_block);
    // A chain map in canonical coordinates: arbitrary on homology blocks,
    // coupled on pair blocks, plus an arbitrary null-homotopic part.
    let mut phi: Vec<QMatrix> = (0..len)
        .map(|s| QMatrix::zero(b.complex.dims[s], a.complex.dims[s]))
        .collect();
    for s in 0..len {
        let (ha, _ra_out, _) = a.blocks[s];
        let (hb, _rb_out, _) = b.blocks[s];
        for i in 0..hb {
            for j in 0..ha {
                phi[s].add_to(i, j, &rng.small_rational());
            }
        }
    }
    // Pair-block coupling: kappa_s maps A's outgoing pairs at s to B's, and
    // the same matrix connects the image blocks at s+1.
    for s in 0..len.saturating_sub(1) {
        let (ha, ra, _) = a.blocks[s];
        let (hb, rb, _) = b.blocks[s];
        let mut kappa = Vec::new();
        for _ in 0..rb {
            let mut row = Vec::new();
            for _ in 0..ra {
                row.push(rng.small_rational());
            }
            kappa.push(row);
        }
        for (i, row) in kappa.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                phi[s].add_to(hb + i, ha + j, c);
                let (ha1, ra1, _) = a.blocks[s + 1];
                let (hb1, rb1, _) = b.blocks[s + 1];
                phi[s + 1].add_to(hb1 + rb1 + i, ha1 + ra1 + j, c);
            }
        }
    }
    // Null-homotopic part: d_B K + K d_A for random K_s : A^s -> B^{s-1}.
    let mut k_mats: Vec<QMatrix> = Vec::new();
    k_mats.push(QMatrix::zero(0, a.complex.dims[0]));
    for s in 1..len {
        let mut k = QMatrix::zero(b.complex.dims[s - 1], a.complex.dims[s]);
        for i in 0..k.rows() {
            for j in 0..k.cols() {
                if rng.below(3) == 0 {
                    k.add_to(i, j, &rng.small_rational());
                }
            }
        }
        k_mats.push(k);
    }
    for s in 0..len {
        let mut extra = QMatrix::zero(b.complex.dims[s], a.complex.dims[s]);
        if s > 0 {
            let dk = b.complex.d[s - 1].matmul(&k_mats[s]);
            for i in 0..dk.rows() {
                for j in 0..dk.cols() {
                    let v = dk.get(i, j);
                    if !v.is_zero() {
                        extra.add_to(i, j, &v);
                    }
                }
            }
        }
        if s + 1 < len {
            let kd = k_mats[s + 1].matmul(&a.complex.d[s]);
            for i in 0..kd.rows() {
                for j in 0..kd.cols() {
                    let v = kd.get(i, j);
                    if !v.is_zero() {
                        extra.add_to(i, j, &v);
                    }
                }
            }
        }
        for i in 0..extra.rows() {
            for j in 0..extra.cols() {
                let v = extra.get(i, j);
                if !v.is_zero() {
                    phi[s].add_to(i, j, &v);
                }
            }
        }
    }
    // Scramble both complexes by basis changes and conjugate the map.
    let pa: Vec<(QMatrix, QMatrix)> = (0..len)
        .map(|s| random_basis_change(&mut rng, a.complex.dims[s], 4))
        .collect();
    let pb: Vec<(QMatrix, QMatrix)> = (0..len)
        .map(|s| random_basis_change(&mut rng, b.complex.dims[s], 4))
        .collect();
    let mut da = Vec::new();
    for s in 0..len.saturating_sub(1) {
        da.push(pa[s + 1].0.matmul(&a.complex.d[s]).matmul(&pa[s].1));
    }
    let mut db = Vec::new();
    for s in 0..len.saturating_sub(1) {
        db.push(pb[s + 1].0.matmul(&b.complex.d[s]).matmul(&pb[s].1));
    }
    let phi: Vec<QMatrix> = (0..len)
        .map(|s| pb[s].0.matmul(&phi[s]).matmul(&pa[s].1))
        .collect();
    let a = FiniteComplex::new(a.complex.dims.clone(), da)
        .expect("conjugated complex still squares to zero");
    let b = FiniteComplex::new(b.complex.dims.clone(), db)
        .expect("conjugated complex still squares to zero");
    (phi, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_structure_constants_form_a_lie_algebra() {
        for m in 1..=2 {
            assert!(FiniteLieAlgebra::gl(m).is_lie_algebra());
        }
    }

    #[test]
    fn adjoint_is_a_homomorphism() {
        let rep = FiniteRep::adjoint(FiniteLieAlgebra::gl(2));
        assert!(rep.is_homomorphism());
    }

    #[test]
    fn ce_of_the_trivial_line_over_gl1() {
        let rep = FiniteRep::trivial(FiniteLieAlgebra::gl(1), 1);
        assert_eq!(finite_ce_betti(&rep), vec![1, 1]);
    }

    #[test]
    fn ce_of_a_nontrivial_character_over_gl1_vanishes() {
        let alg = FiniteLieAlgebra::gl(1);
        let mut m = QMatrix::zero(1, 1);
        m.set(0, 0, rat(3));
        let rep = FiniteRep::new(alg, vec![m]);
        assert_eq!(finite_ce_betti(&rep), vec![0, 0]);
    }

    #[test]
    fn gl_invariants_match_known_dimensions() {
        assert_eq!(glinv_dims(1), vec![1, 1]);
        assert_eq!(glinv_dims(2), vec![1, 1, 0, 1, 1]);
    }

    #[test]
    fn trivial_coefficients_reproduce_the_invariants() {
        // Two independent computations of the same graded dimensions.
        for m in 1..=2 {
            let rep = FiniteRep::trivial(FiniteLieAlgebra::gl(m), 1);
            assert_eq!(finite_ce_betti(&rep), glinv_dims(m));
        }
    }

    #[test]
    fn cone_of_zero_sums_bettis_with_a_shift() {
        let (_, a, b) = random_cone_instance(11, 4, 3);
        let zero: Vec<QMatrix> = (0..a.len())
            .map(|s| QMatrix::zero(b.dims[s], a.dims[s]))
            .collect();
        let c = cone(&zero, &a, &b).unwrap();
        let (ha, hb, hc) = (a.betti(), b.betti(), c.betti());
        for s in 0..=a.len() {
            let expect = ha.get(s).copied().unwrap_or(0)
                + if s == 0 { 0 } else { hb[s - 1] };
            assert_eq!(hc[s], expect);
        }
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let (_, a, _) = random_cone_instance(7, 4, 3);
        let id: Vec<QMatrix> = (0..a.len()).map(|s| QMatrix::identity(a.dims[s])).collect();
        let c = cone(&id, &a, &a).unwrap();
        assert!(c.betti().iter().all(|&x| x == 0));
    }

    #[test]
    fn cone_rejects_non_chain_maps() {
        // A = B = (R --id--> R); phi = (0, id) fails phi.d = d.phi.
        let a = FiniteComplex::new(vec![1, 1], vec![QMatrix::identity(1)]).unwrap();
        let bad = vec![QMatrix::zero(1, 1), QMatrix::identity(1)];
        assert!(cone(&bad, &a, &a).is_err());
        let good = vec![QMatrix::identity(1), QMatrix::identity(1)];
        assert!(cone(&good, &a, &a).is_ok());
    }

    #[test]
    fn cone_identity_on_random_instances() {
        for seed in 1..=10u64 {
            let (phi, a, b) = random_cone_instance(seed * 97, 4, 3);
            let report = cone_dimension_identity(&phi, &a, &b).unwrap();
            assert!(
                report.matches(),
                "cone betti {:?} != predicted {:?} at seed {}",
                report.cone_betti,
                report.predicted,
                seed
            );
        }
    }

    #[test]
    fn increasing_tuples_count_binomially() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(5, 0).len(), 1);
        assert_eq!(increasing_tuples(3, 4).len(), 0);
    }
}
