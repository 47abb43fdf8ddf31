//! Monomial lifts, induced matrices on lifted space, and the action of a
//! linear substitution on form coefficients.
//!
//! Internally everything lives in the unscaled monomial basis. The scaled
//! basis would introduce square roots, so it is only exposed through the
//! integer radicands of [`scaled_lift_weights`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{Form, MultiIndex, Rational};
use crate::mat::RatMat;

/// Which monomial basis a vector is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    Unscaled,
    Scaled,
}

/// A point pushed through the degree-d monomial map, with its basis tag.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedVector {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<Rational>,
    pub basis: BasisTag,
}

/// Evaluate every degree-`d` monomial at `point`, in the global order.
pub fn monomial_lift(point: &[Rational], d: usize) -> LiftedVector {
    let n = point.len();
    let entries = MultiIndex::basis(n, d)
        .into_iter()
        .map(|idx| {
            let mut value = Rational::from(BigInt::from(1));
            for (v, &e) in point.iter().zip(idx.exps()) {
                for _ in 0..e {
                    value *= v;
                }
            }
            value
        })
        .collect();
    LiftedVector {
        n,
        d,
        entries,
        basis: BasisTag::Unscaled,
    }
}

/// The squared scale factors of the scaled monomial basis: the multinomial
/// coefficient of each basis index. Exact square roots are never taken.
pub fn scaled_lift_weights(n: usize, d: usize) -> Vec<BigInt> {
    MultiIndex::basis(n, d)
        .into_iter()
        .map(|idx| idx.multinomial())
        .collect()
}

/// The monomial basis of degree `d` as forms, in the global order.
pub fn monomial_basis_forms(n: usize, d: usize) -> Vec<Form> {
    MultiIndex::basis(n, d)
        .into_iter()
        .map(|idx| Form::monomial(n, idx.exps(), Rational::from(BigInt::from(1))))
        .collect()
}

/// The unique matrix M with M * lift(x) = lift(A * x) for all x, built by
/// expanding each entry of `(Ax)^[d]` symbolically: row alpha, column beta
/// holds the coefficient of x^beta in (Ax)^alpha.
pub fn induced_matrix(a: &RatMat, d: usize) -> Result<RatMat> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    let rows_of_ax: Vec<Form> = (0..n).map(|i| Form::linear(a.row(i))).collect();
    let basis = MultiIndex::basis(n, d);
    let size = basis.len();
    let mut out = RatMat::zeros(size, size);
    for (r, alpha) in basis.iter().enumerate() {
        let mut expanded = Form::constant(n, Rational::from(BigInt::from(1)));
        for (i, row_form) in rows_of_ax.iter().enumerate() {
            expanded = expanded
                .mul(&row_form.pow(alpha.exp(i) as usize))
                .expect("same n");
        }
        for (c, beta) in basis.iter().enumerate() {
            let coeff = expanded.coeff(beta);
            if !coeff.is_zero() {
                out[(r, c)] = coeff;
            }
        }
    }
    Ok(out)
}

/// The substitution p(x) -> p(Ax), computed by expanding each monomial.
/// The contract is the evaluation identity: the returned form agrees with
/// p at A*v for every point v.
pub fn act_on_coefficients(a: &RatMat, p: &Form) -> Result<Form> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() != p.n() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: p.n(),
        });
    }
    let n = p.n();
    let rows_of_ax: Vec<Form> = (0..n).map(|i| Form::linear(a.row(i))).collect();
    let mut out = Form::zero(n, p.degree());
    for (idx, c) in p.terms() {
        let mut term = Form::constant(n, c.clone());
        for (i, row_form) in rows_of_ax.iter().enumerate() {
            term = term
                .mul(&row_form.pow(idx.exp(i) as usize))
                .expect("same n");
        }
        out = out.add(&term).expect("degrees agree");
    }
    Ok(out)
}

/// Convenience: the shear-type matrices used to build random unimodular
/// test transforms: `lower(a) = [[1,0],[a,1]]`, `upper(a) = [[1,a],[0,1]]`.
pub fn shear_upper(a: Rational) -> RatMat {
    let one = || Rational::from(BigInt::from(1));
    RatMat::from_rows(vec![vec![one(), a], vec![BigRational::zero(), one()]]).expect("rectangular")
}

pub fn shear_lower(a: Rational) -> RatMat {
    let one = || Rational::from(BigInt::from(1));
    RatMat::from_rows(vec![vec![one(), BigRational::zero()], vec![a, one()]]).expect("rectangular")
}
