//! Shared helpers for the unit tests.

use num_bigint::BigInt;
use rand::Rng;

use crate::forms::{Form, MultiIndex, Rational};
use crate::lifting::{shear_lower, shear_upper};
use crate::mat::RatMat;

pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn rand_rational(rng: &mut impl Rng) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub(crate) fn rand_form(rng: &mut impl Rng, n: usize, degree: usize) -> Form {
    let basis = MultiIndex::basis(n, degree);
    Form::from_terms(
        n,
        degree,
        basis.into_iter().filter_map(|idx| {
            if rng.gen_bool(0.7) {
                Some((idx, rand_rational(rng)))
            } else {
                None
            }
        }),
    )
    .unwrap()
}

/// Product of random rational shears, determinant exactly one.
pub(crate) fn rand_unimodular(rng: &mut impl Rng, steps: usize) -> RatMat {
    let mut a = RatMat::identity(2);
    for _ in 0..steps {
        let t = q(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let s = if rng.gen_bool(0.5) {
            shear_upper(t)
        } else {
            shear_lower(t)
        };
        a = a.matmul(&s);
    }
    a
}
