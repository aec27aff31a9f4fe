//! The Lie algebra sl(m+1, R) in its graded presentation and its projective
//! embedding into polynomial vector fields on R^m.
//!
//! An element is stored as a triple `(h, A, alpha)` with `h` a vector in R^m,
//! `A` an m-by-m matrix (a plain gl(m) coordinate, no trace condition), and
//! `alpha` a covector. The triple corresponds to the traceless matrix
//!
//! ```text
//! [ A - (tr A / (m+1)) I    h ]
//! [ alpha                   -tr A / (m+1) ]
//! ```
//!
//! in sl(m+1, R); the bracket is computed through this matrix realization so
//! the Jacobi identity holds by construction. The embedding sends a triple to
//! the vector field
//!
//! ```text
//! -h^i d_i  -  A^i_j x^j d_i  +  alpha(x) x^i d_i,
//! ```
//!
//! the infinitesimal linear fractional transformations of R^m. The grading
//! element is `A = I`; its adjoint action has eigenvalue +1 on the `h` block,
//! 0 on the `A` block and -1 on the `alpha` block.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::MultiPoly;
use crate::rational::{rat, ratio, Rational};

/// Element of sl(m+1, R) as a graded triple `(h, A, alpha)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlElement {
    /// Base dimension m (the algebra is sl(m+1, R)).
    pub m: usize,
    /// Translation block, length m.
    pub h: Vec<Rational>,
    /// Linear block, m*m entries in row-major order.
    pub a: Vec<Rational>,
    /// Quadratic block (a covector), length m.
    pub alpha: Vec<Rational>,
}

/// Dense square matrix of rationals, used internally for the realization.
type Matrix = Vec<Vec<Rational>>;

fn mat_zero(n: usize) -> Matrix {
    vec![vec![Rational::zero(); n]; n]
}

fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let n = x.len();
    let mut out = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[k][j].is_zero() {
                    continue;
                }
                let prod = &x[i][k] * &y[k][j];
                out[i][j] = &out[i][j] + &prod;
            }
        }
    }
    out
}

fn mat_trace(x: &Matrix) -> Rational {
    let mut t = Rational::zero();
    for (i, row) in x.iter().enumerate() {
        t = &t + &row[i];
    }
    t
}

impl SlElement {
    /// The zero element.
    pub fn zero(m: usize) -> Self {
        SlElement {
            m,
            h: vec![Rational::zero(); m],
            a: vec![Rational::zero(); m * m],
            alpha: vec![Rational::zero(); m],
        }
    }

    /// Dimension of sl(m+1, R), namely `m(m+2)`.
    pub fn dim(m: usize) -> usize {
        m * (m + 2)
    }

    /// True if all coordinates vanish.
    pub fn is_zero(&self) -> bool {
        self.h.iter().all(Rational::is_zero)
            && self.a.iter().all(Rational::is_zero)
            && self.alpha.iter().all(Rational::is_zero)
    }

    /// Canonical ordered basis: `h = e_1..e_m`, then the matrix units
    /// `E_{ij}` in row-major order, then the covectors `eps^1..eps^m`.
    pub fn basis(m: usize) -> Vec<SlElement> {
        let mut out = Vec::with_capacity(Self::dim(m));
        for i in 0..m {
            let mut x = Self::zero(m);
            x.h[i] = rat(1);
            out.push(x);
        }
        for i in 0..m {
            for j in 0..m {
                let mut x = Self::zero(m);
                x.a[i * m + j] = rat(1);
                out.push(x);
            }
        }
        for i in 0..m {
            let mut x = Self::zero(m);
            x.alpha[i] = rat(1);
            out.push(x);
        }
        out
    }

    /// Eigenvalue of `ad(euler)` on the `idx`-th canonical basis element:
    /// +1 on the translation block, 0 on the linear block, -1 on the
    /// quadratic block.
    pub fn basis_weight(m: usize, idx: usize) -> i64 {
        if idx < m {
            1
        } else if idx < m + m * m {
            0
        } else {
            -1
        }
    }

    /// The grading element: the identity matrix in the linear block.
    pub fn euler(m: usize) -> Self {
        let mut x = Self::zero(m);
        for i in 0..m {
            x.a[i * m + i] = rat(1);
        }
        x
    }

    /// Coordinates in the canonical basis (length `m(m+2)`).
    pub fn coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(Self::dim(self.m));
        out.extend(self.h.iter().cloned());
        out.extend(self.a.iter().cloned());
        out.extend(self.alpha.iter().cloned());
        out
    }

    /// Rebuild an element from canonical coordinates.
    pub fn from_coords(m: usize, c: &[Rational]) -> Self {
        assert_eq!(c.len(), Self::dim(m));
        SlElement {
            m,
            h: c[..m].to_vec(),
            a: c[m..m + m * m].to_vec(),
            alpha: c[m + m * m..].to_vec(),
        }
    }

    /// Sum of two elements.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let pair = |u: &[Rational], v: &[Rational]| -> Vec<Rational> {
            u.iter().zip(v).map(|(a, b)| a + b).collect()
        };
        SlElement {
            m: self.m,
            h: pair(&self.h, &other.h),
            a: pair(&self.a, &other.a),
            alpha: pair(&self.alpha, &other.alpha),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> Self {
        let sc = |u: &[Rational]| -> Vec<Rational> { u.iter().map(|a| a * c).collect() };
        SlElement {
            m: self.m,
            h: sc(&self.h),
            a: sc(&self.a),
            alpha: sc(&self.alpha),
        }
    }

    /// The traceless (m+1)-by-(m+1) matrix realizing this element.
    pub fn matrix(&self) -> Matrix {
        let m = self.m;
        let mut out = mat_zero(m + 1);
        let mut tra = Rational::zero();
        for i in 0..m {
            tra = &tra + &self.a[i * m + i];
        }
        let shift = &tra / ratio(m as i64 + 1, 1);
        for i in 0..m {
            for j in 0..m {
                out[i][j] = self.a[i * m + j].clone();
            }
            out[i][i] = &out[i][i] - &shift;
            out[i][m] = self.h[i].clone();
            out[m][i] = self.alpha[i].clone();
        }
        out[m][m] = -&shift;
        out
    }

    /// Inverse of [`SlElement::matrix`]; fails unless the input is a
    /// traceless (m+1)-by-(m+1) matrix.
    pub fn from_matrix(m: usize, mat: &Matrix) -> Result<Self, String> {
        if mat.len() != m + 1 || mat.iter().any(|r| r.len() != m + 1) {
            return Err(String::from("matrix must be (m+1) x (m+1)"));
        }
        if !mat_trace(mat).is_zero() {
            return Err(String::from("matrix must be traceless"));
        }
        let mut out = Self::zero(m);
        let e = mat[m][m].clone();
        for i in 0..m {
            out.h[i] = mat[i][m].clone();
            out.alpha[i] = mat[m][i].clone();
            for j in 0..m {
                out.a[i * m + j] = mat[i][j].clone();
            }
            out.a[i * m + i] = &out.a[i * m + i] - &e;
        }
        Ok(out)
    }

    /// Lie bracket, computed as the matrix commutator in the realization.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let x = self.matrix();
        let y = other.matrix();
        let xy = mat_mul(&x, &y);
        let yx = mat_mul(&y, &x);
        let mut comm = mat_zero(self.m + 1);
        for i in 0..=self.m {
            for j in 0..=self.m {
                comm[i][j] = &xy[i][j] - &yx[i][j];
            }
        }
        Self::from_matrix(self.m, &comm).expect("commutator of traceless matrices is traceless")
    }

    /// Killing form of sl(m+1, R): `K(X, Y) = 2(m+1) tr(XY)` in the matrix
    /// realization.
    pub fn killing(&self, other: &Self) -> Rational {
        assert_eq!(self.m, other.m);
        let prod = mat_mul(&self.matrix(), &other.matrix());
        &mat_trace(&prod) * &ratio(2 * (self.m as i64 + 1), 1)
    }

    /// Basis `Y_1..Y_dim` dual to the canonical basis under the Killing
    /// form: `K(X_i, Y_j) = delta_ij`.
    pub fn killing_dual_basis(m: usize) -> Vec<SlElement> {
        Self::killing_dual_of(&Self::basis(m))
    }

    /// Basis dual to an arbitrary basis under the Killing form. The input
    /// must be linearly independent and spanning; the Gram solve fails
    /// otherwise.
    pub fn killing_dual_of(basis: &[SlElement]) -> Vec<SlElement> {
        use crate::linalg::QMatrix;
        let dim = basis.len();
        let m = basis[0].m;
        assert_eq!(dim, Self::dim(m), "need a full basis of sl(m+1)");
        let mut gram = QMatrix::zero(dim, dim);
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let k = x.killing(y);
                if !k.is_zero() {
                    gram.set(i, j, k);
                }
            }
        }
        let mut out = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut rhs = vec![Rational::zero(); dim];
            rhs[j] = rat(1);
            let col = gram
                .solve(&rhs)
                .expect("Killing Gram matrix of a basis is invertible");
            let mut y = Self::zero(m);
            for (k, c) in col.iter().enumerate() {
                y = y.add(&basis[k].scale(c));
            }
            out.push(y);
        }
        out
    }

    /// The projective embedding into polynomial vector fields on R^m.
    pub fn embed(&self) -> PolyVectorField {
        let m = self.m;
        let mut comps = Vec::with_capacity(m);
        // alpha(x) = sum_j alpha_j x^j, shared by all components.
        let mut alpha_poly = MultiPoly::zero(m);
        for j in 0..m {
            if !self.alpha[j].is_zero() {
                let mut e = vec![0u32; 2 * m];
                e[j] = 1;
                alpha_poly.add_term(e, self.alpha[j].clone());
            }
        }
        for i in 0..m {
            let mut c = MultiPoly::constant(m, -&self.h[i]);
            for j in 0..m {
                if !self.a[i * m + j].is_zero() {
                    let mut e = vec![0u32; 2 * m];
                    e[j] = 1;
                    c.add_term(e, -&self.a[i * m + j]);
                }
            }
            let xi = MultiPoly::var_x(m, i);
            c = &c + &(&alpha_poly * &xi);
            comps.push(c);
        }
        PolyVectorField { m, comps }
    }
}

/// A vector field on R^m with polynomial components (polynomials in the
/// base block only).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVectorField {
    /// Base dimension.
    pub m: usize,
    /// Components `X^0 .. X^{m-1}`.
    pub comps: Vec<MultiPoly>,
}

impl PolyVectorField {
    /// The zero field.
    pub fn zero(m: usize) -> Self {
        PolyVectorField {
            m,
            comps: vec![MultiPoly::zero(m); m],
        }
    }

    /// True if every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MultiPoly::is_zero)
    }

    /// Apply the field to a function: `X . f = sum_j X^j d_j f`.
    pub fn apply_to(&self, f: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.m);
        for j in 0..self.m {
            if self.comps[j].is_zero() {
                continue;
            }
            out = &out + &(&self.comps[j] * &f.d_x(j));
        }
        out
    }

    /// Commutator of vector fields: `[X, Y]^i = X . Y^i - Y . X^i`.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut comps = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let xy = self.apply_to(&other.comps[i]);
            let yx = other.apply_to(&self.comps[i]);
            comps.push(&xy - &yx);
        }
        PolyVectorField { m: self.m, comps }
    }

    /// Divergence `sum_i d_i X^i`.
    pub fn divergence(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.m);
        for i in 0..self.m {
            out = &out + &self.comps[i].d_x(i);
        }
        out
    }

    /// Jacobian matrix: entry `(i, j)` is the polynomial `d_j X^i`.
    pub fn jacobian(&self) -> Vec<Vec<MultiPoly>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.comps[i].d_x(j)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abstract_bracket(x: &SlElement, y: &SlElement) -> SlElement {
        // Independent route: the block formulas
        //   [h, h'] = 0, [alpha, alpha'] = 0,
        //   [A, h] = A h, [A, alpha] = -alpha . A, [A, B] = AB - BA,
        //   [h, alpha] = alpha(h) I + h (x) alpha.
        let m = x.m;
        let mut out = SlElement::zero(m);
        // h block of the result: A_x h_y - A_y h_x.
        for i in 0..m {
            let mut v = Rational::zero();
            for j in 0..m {
                v = &v + &(&x.a[i * m + j] * &y.h[j]);
                v = &v - &(&y.a[i * m + j] * &x.h[j]);
            }
            out.h[i] = v;
        }
        // alpha block: -alpha_y . A_x + alpha_x . A_y.
        for j in 0..m {
            let mut v = Rational::zero();
            for i in 0..m {
                v = &v - &(&y.alpha[i] * &x.a[i * m + j]);
                v = &v + &(&x.alpha[i] * &y.a[i * m + j]);
            }
            out.alpha[j] = v;
        }
        // A block: [A_x, A_y] + (alpha_y(h_x) I + h_x (x) alpha_y)
        //                      - (alpha_x(h_y) I + h_y (x) alpha_x).
        for i in 0..m {
            for j in 0..m {
                let mut v = Rational::zero();
                for k in 0..m {
                    v = &v + &(&x.a[i * m + k] * &y.a[k * m + j]);
                    v = &v - &(&y.a[i * m + k] * &x.a[k * m + j]);
                }
                v = &v + &(&x.h[i] * &y.alpha[j]);
                v = &v - &(&y.h[i] * &x.alpha[j]);
                out.a[i * m + j] = v;
            }
        }
        let mut pairing = Rational::zero();
        for k in 0..m {
            pairing = &pairing + &(&y.alpha[k] * &x.h[k]);
            pairing = &pairing - &(&x.alpha[k] * &y.h[k]);
        }
        for i in 0..m {
            out.a[i * m + i] = &out.a[i * m + i] + &pairing;
        }
        out
    }

    #[test]
    fn matrix_round_trip_and_tracelessness() {
        for m in 1..=3 {
            for x in SlElement::basis(m) {
                let mat = x.matrix();
                let mut tr = Rational::zero();
                for i in 0..=m {
                    tr = &tr + &mat[i][i];
                }
                assert!(tr.is_zero());
                assert_eq!(SlElement::from_matrix(m, &mat).unwrap(), x);
            }
        }
    }

    #[test]
    fn bracket_matches_block_formulas() {
        for m in 1..=2 {
            let basis = SlElement::basis(m);
            for x in &basis {
                for y in &basis {
                    assert_eq!(x.bracket(y), abstract_bracket(x, y));
                }
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi() {
        for m in 1..=2 {
            let basis = SlElement::basis(m);
            for x in &basis {
                for y in &basis {
                    let xy = x.bracket(y);
                    let yx = y.bracket(x);
                    assert!(xy.add(&yx).is_zero());
                    for z in &basis {
                        let t1 = x.bracket(&y.bracket(z));
                        let t2 = y.bracket(&z.bracket(x));
                        let t3 = z.bracket(&x.bracket(y));
                        assert!(t1.add(&t2).add(&t3).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_sends_basis_to_expected_fields() {
        // m = 1: h = 1 -> -d/dt, A = 1 -> -t d/dt, alpha = 1 -> t^2 d/dt.
        let basis = SlElement::basis(1);
        let t = MultiPoly::var_x(1, 0);
        assert_eq!(
            basis[0].embed().comps[0],
            MultiPoly::constant(1, ratio(-1, 1))
        );
        assert_eq!(basis[1].embed().comps[0], t.scale(&ratio(-1, 1)));
        assert_eq!(basis[2].embed().comps[0], &t * &t);
    }

    #[test]
    fn embedding_is_a_lie_homomorphism() {
        for m in 1..=2 {
            let basis = SlElement::basis(m);
            for x in &basis {
                for y in &basis {
                    let lhs = x.bracket(y).embed();
                    let rhs = x.embed().bracket(&y.embed());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn embedding_is_injective_on_a_generic_combination() {
        for m in 1..=2 {
            let basis = SlElement::basis(m);
            let mut x = SlElement::zero(m);
            for (i, b) in basis.iter().enumerate() {
                x = x.add(&b.scale(&rat(i as i64 + 1)));
            }
            assert!(!x.embed().is_zero());
        }
    }

    #[test]
    fn divergence_of_quadratic_field_is_m_plus_one_alpha() {
        for m in 1..=3 {
            for j in 0..m {
                let mut x = SlElement::zero(m);
                x.alpha[j] = rat(1);
                let div = x.embed().divergence();
                let expected =
                    MultiPoly::var_x(m, j).scale(&rat(m as i64 + 1));
                assert_eq!(div, expected);
            }
        }
    }

    #[test]
    fn killing_values_on_sl2() {
        let basis = SlElement::basis(1);
        let (h, a, al) = (&basis[0], &basis[1], &basis[2]);
        assert_eq!(h.killing(h), rat(0));
        assert_eq!(a.killing(a), rat(2));
        assert_eq!(h.killing(al), rat(4));
        assert_eq!(al.killing(h), rat(4));
        assert_eq!(h.killing(a), rat(0));
        assert_eq!(a.killing(al), rat(0));
    }

    #[test]
    fn killing_vanishes_between_different_grading_blocks_except_h_alpha() {
        for m in 1..=2 {
            let basis = SlElement::basis(m);
            for (i, x) in basis.iter().enumerate() {
                for (j, y) in basis.iter().enumerate() {
                    let wi = SlElement::basis_weight(m, i);
                    let wj = SlElement::basis_weight(m, j);
                    if wi + wj != 0 {
                        assert!(x.killing(y).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn killing_dual_basis_pairs_to_identity() {
        for m in 1..=3 {
            let basis = SlElement::basis(m);
            let dual = SlElement::killing_dual_basis(m);
            for (i, x) in basis.iter().enumerate() {
                for (j, y) in dual.iter().enumerate() {
                    let k = x.killing(y);
                    if i == j {
                        assert_eq!(k, rat(1));
                    } else {
                        assert!(k.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn grading_element_acts_diagonally_on_the_basis() {
        for m in 1..=2 {
            let e = SlElement::euler(m);
            for (i, x) in SlElement::basis(m).iter().enumerate() {
                let w = SlElement::basis_weight(m, i);
                let expected = x.scale(&rat(w));
                assert_eq!(e.bracket(x), expected);
            }
        }
    }
}
