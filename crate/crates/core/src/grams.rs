//! Gram matrices of forms: evaluation, congruence transformation, the
//! canonical Gram matrix, and an exact positive-semidefiniteness test
//! whose negative verdicts carry a checkable witness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::{basis_size, Form, MultiIndex, Rational};
use crate::lifting::induced_matrix;
use crate::mat::RatMat;

/// Symmetric rational matrix whose rows and columns are indexed by the
/// degree-`d` monomial basis in `n` variables (unscaled, global order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    d: usize,
    mat: RatMat,
}

impl SymMatrix {
    /// Validates squareness, the side against the basis size, and exact
    /// symmetry.
    pub fn new(n: usize, d: usize, mat: RatMat) -> Result<Self> {
        let side = basis_size(n, d);
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() != side {
            return Err(Error::SideMismatch {
                expected: side,
                got: mat.nrows(),
            });
        }
        if let Some((i, j)) = mat.symmetry_defect() {
            return Err(Error::NotSymmetric { row: i, col: j });
        }
        Ok(SymMatrix { n, d, mat })
    }

    pub fn from_rows(n: usize, d: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(n, d, RatMat::from_rows(rows)?)
    }

    pub fn zero(n: usize, d: usize) -> Self {
        let side = basis_size(n, d);
        SymMatrix {
            n,
            d,
            mat: RatMat::zeros(side, side),
        }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        let side = basis_size(n, d);
        SymMatrix {
            n,
            d,
            mat: RatMat::identity(side),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree of the monomial index set (the represented form has twice
    /// this degree).
    pub fn index_degree(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.mat[(i, j)]
    }

    pub fn mat(&self) -> &RatMat {
        &self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.d != other.d {
            return Err(Error::DegreeMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(SymMatrix {
            n: self.n,
            d: self.d,
            mat: self.mat.add(&other.mat),
        })
    }

    pub fn scale(&self, s: &Rational) -> SymMatrix {
        SymMatrix {
            n: self.n,
            d: self.d,
            mat: self.mat.scale(s),
        }
    }

    /// The monomial index of each row/column, in order.
    pub fn index_set(&self) -> Vec<MultiIndex> {
        MultiIndex::basis(self.n, self.d)
    }
}

/// Outcome of the exact psd test. A negative verdict carries a rational
/// vector w with w^T Q w < 0 that can be re-checked independently.
#[derive(Debug, Clone, PartialEq)]
pub enum PsdVerdict {
    Psd { rank: usize },
    NotPsd { witness: Vec<Rational> },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            PsdVerdict::Psd { rank } => Some(*rank),
            PsdVerdict::NotPsd { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            PsdVerdict::Psd { .. } => None,
            PsdVerdict::NotPsd { witness } => Some(witness),
        }
    }
}

/// The form `x^[d]^T Q x^[d]`: the coefficient on x^gamma is the sum of the
/// entries Q_{alpha,beta} over alpha + beta = gamma.
pub fn gram_eval(q: &SymMatrix) -> Form {
    let basis = q.index_set();
    let mut terms: Vec<(MultiIndex, Rational)> = Vec::new();
    for (i, alpha) in basis.iter().enumerate() {
        for (j, beta) in basis.iter().enumerate() {
            let e = q.entry(i, j);
            if !e.is_zero() {
                terms.push((alpha.add(beta), e.clone()));
            }
        }
    }
    Form::from_terms(q.n(), 2 * q.index_degree(), terms).expect("homogeneous by construction")
}

/// Congruence by the induced matrix: `transpose(A^[d]) * Q * A^[d]`. The
/// result is a Gram matrix of the substituted form gram_eval(Q)(Ax).
pub fn gram_transform(q: &SymMatrix, a: &RatMat) -> Result<SymMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() != q.n() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: q.n(),
        });
    }
    let lifted = induced_matrix(a, q.index_degree())?;
    let transformed = lifted.transpose().matmul(&q.mat().matmul(&lifted));
    SymMatrix::new(q.n(), q.index_degree(), transformed)
}

/// The canonical Gram matrix in the unscaled monomial basis:
/// entry (alpha, beta) = c_{alpha+beta} * m(alpha) * m(beta) / m(alpha+beta),
/// where m is the multinomial coefficient and c the coefficient of the form.
/// It is the unique equivariant linear right-inverse of [`gram_eval`].
pub fn canonical_gram(p: &Form) -> Result<SymMatrix> {
    if !p.degree().is_multiple_of(2) {
        return Err(Error::OddDegree { degree: p.degree() });
    }
    let d = p.degree() / 2;
    let basis = MultiIndex::basis(p.n(), d);
    let mults: Vec<BigInt> = basis.iter().map(|idx| idx.multinomial()).collect();
    let side = basis.len();
    let mut mat = RatMat::zeros(side, side);
    for i in 0..side {
        for j in i..side {
            let gamma = basis[i].add(&basis[j]);
            let c = p.coeff(&gamma);
            if c.is_zero() {
                continue;
            }
            let scale = BigRational::new(&mults[i] * &mults[j], gamma.multinomial());
            let value = c * scale;
            mat[(i, j)] = value.clone();
            if i != j {
                mat[(j, i)] = value;
            }
        }
    }
    SymMatrix::new(p.n(), d, mat)
}

/// w^T Q w, for verifying witnesses.
pub fn quadratic_form(q: &SymMatrix, w: &[Rational]) -> Rational {
    assert_eq!(w.len(), q.side());
    let mut total = Rational::zero();
    for i in 0..q.side() {
        for j in 0..q.side() {
            if !q.entry(i, j).is_zero() {
                total += q.entry(i, j) * &w[i] * &w[j];
            }
        }
    }
    total
}

/// Exact psd test by symmetric elimination with diagonal pivoting.
///
/// A congruence tracker E with S = E Q E^T is carried along, so when a
/// negative diagonal entry or a zero diagonal with a nonzero row shows up,
/// the corresponding rows of E assemble a witness w with w^T Q w < 0.
/// For a symmetric matrix this pivoting strategy is decisive: a psd matrix
/// with a zero diagonal entry must have a zero row.
pub fn psd_check(q: &SymMatrix) -> PsdVerdict {
    psd_check_mat(q.mat())
}

pub(crate) fn psd_check_mat(q: &RatMat) -> PsdVerdict {
    debug_assert!(q.is_symmetric());
    let side = q.nrows();
    let mut s = q.clone();
    let mut tracker = RatMat::identity(side);
    let mut active: Vec<usize> = (0..side).collect();
    let mut rank = 0usize;

    loop {
        // any strictly negative diagonal entry refutes psd-ness outright
        if let Some(&i) = active.iter().find(|&&i| s[(i, i)].is_negative()) {
            return PsdVerdict::NotPsd {
                witness: tracker.row(i).to_vec(),
            };
        }
        // pick a positive diagonal pivot and eliminate its row and column
        if let Some(&p) = active.iter().find(|&&i| s[(i, i)].is_positive()) {
            let pivot = s[(p, p)].clone();
            let others: Vec<usize> = active.iter().copied().filter(|&i| i != p).collect();
            // row/column p drop out of `active`, so their entries can stay
            // stale; only the active block is ever consulted again
            for &i in &others {
                if s[(i, p)].is_zero() {
                    continue;
                }
                let factor = &s[(i, p)] / &pivot;
                for &j in &others {
                    let delta = &factor * &s[(p, j)];
                    s[(i, j)] -= delta;
                }
                for c in 0..side {
                    let delta = &factor * &tracker[(p, c)];
                    tracker[(i, c)] -= delta;
                }
            }
            active.retain(|&i| i != p);
            rank += 1;
            continue;
        }
        // all remaining diagonal entries are zero: psd iff the remaining
        // block is identically zero
        for &i in &active {
            if let Some(&j) = active.iter().find(|&&j| !s[(i, j)].is_zero()) {
                // 2x2 block [[0, b],[b, t]] with b != 0: pick a so that
                // a^2*0 + 2ab + t = -1
                let b = s[(i, j)].clone();
                let t = s[(j, j)].clone();
                let a = -(t + BigRational::one()) / (BigRational::from(BigInt::from(2)) * &b);
                let witness: Vec<Rational> = (0..side)
                    .map(|c| &a * &tracker[(i, c)] + &tracker[(j, c)])
                    .collect();
                return PsdVerdict::NotPsd { witness };
            }
        }
        return PsdVerdict::Psd { rank };
    }
}
