//! Structured psd Gram certificates: products of a factor with a psd
//! canonical Gram matrix and a factor with any psd Gram matrix yield a
//! certificate whose matrix transvectant chain is provably short.
//!
//! The root-pairing Gram search for nonnegative binary forms lives in the
//! `root_pairing` submodule; it is the only floating-point code in the
//! crate and everything it returns is rationalized and re-verified
//! exactly.

mod root_pairing;

pub use root_pairing::DEFAULT_PAIRING_TOL;

use num_traits::Zero;

use crate::cgtools::{
    harmonic_decompose, support_profile, transvectant_power_vanishes, SupportProfile,
};
use crate::error::{Error, Result};
use crate::forms::{Form, MultiIndex, Rational};
use crate::grams::{canonical_gram, gram_eval, psd_check, PsdVerdict, SymMatrix};
use crate::symprod::sym_tensor_product;

/// Where the psd Gram matrix of the non-canonical factor came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSource {
    Supplied,
    RootPairing,
    ZeroForm,
}

/// How a certificate's Gram matrix was assembled.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Factor that went through the canonical Gram construction.
    pub canonical_factor: Form,
    /// Factor represented by the supplied or derived psd Gram matrix.
    pub other_factor: Form,
    pub gram_source: GramSource,
    /// Half-degree of the canonical factor.
    pub d1: usize,
    /// Index degree of the other factor's Gram matrix.
    pub d2: usize,
    /// ceil(d2/2) + 1, the sharper component count claim.
    pub theorem_claim: usize,
    /// d2 + 1, the component count actually guaranteed by the vanishing
    /// of the transvectant power; this is what gets asserted.
    pub lemma_bound: usize,
}

/// A form together with an exactly verified psd Gram matrix for it, its
/// support profile, and a record of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub target: Form,
    pub gram: SymMatrix,
    pub psd: PsdVerdict,
    pub profile: SupportProfile,
    pub provenance: Provenance,
}

impl Certificate {
    pub fn observed_components(&self) -> usize {
        self.profile.observed_components()
    }
}

/// How to obtain a psd Gram matrix for a nonnegative binary form.
#[derive(Debug, Clone, Copy)]
pub enum SosGramMode<'a> {
    /// Validate a caller-supplied exact matrix: round trip and psd check.
    ExactInput(&'a SymMatrix),
    /// Factor over the complex numbers in floating point, pair conjugate
    /// roots, rationalize, and repair exactly.
    RootPairing { pairing_tol: f64 },
}

/// Certificate for sopl_factor * gram_eval(other_gram), built as
/// canonical_gram(sopl_factor) (.) other_gram.
///
/// The factor precondition is operational: its canonical Gram matrix must
/// pass the exact psd check (true for any sum of even powers of linear
/// forms). The returned certificate re-verifies the round trip, psd-ness,
/// and the vanishing of the (d2+1)-th matrix transvectant power.
pub fn structured_gram(sopl_factor: &Form, other_gram: &SymMatrix) -> Result<Certificate> {
    structured_gram_from(sopl_factor, other_gram, GramSource::Supplied)
}

pub(crate) fn structured_gram_from(
    sopl_factor: &Form,
    other_gram: &SymMatrix,
    gram_source: GramSource,
) -> Result<Certificate> {
    if sopl_factor.n() != 2 {
        return Err(Error::UnsupportedDimension { n: sopl_factor.n() });
    }
    if other_gram.n() != sopl_factor.n() {
        return Err(Error::DimensionMismatch {
            left: sopl_factor.n(),
            right: other_gram.n(),
        });
    }
    if !sopl_factor.degree().is_multiple_of(2) {
        return Err(Error::OddDegree {
            degree: sopl_factor.degree(),
        });
    }
    let d1 = sopl_factor.degree() / 2;
    let d2 = other_gram.index_degree();

    let canonical = canonical_gram(sopl_factor)?;
    if let PsdVerdict::NotPsd { witness } = psd_check(&canonical) {
        return Err(Error::FactorGramNotPsd {
            factor: sopl_factor.to_string(),
            witness,
        });
    }
    if let PsdVerdict::NotPsd { witness } = psd_check(other_gram) {
        return Err(Error::NotPsd { witness });
    }

    let gram = sym_tensor_product(&canonical, other_gram)?;
    let other_factor = gram_eval(other_gram);
    let target = sopl_factor.mul(&other_factor)?;

    if gram_eval(&gram) != target {
        return Err(Error::Internal(
            "product Gram matrix does not represent the product form".into(),
        ));
    }
    let psd = psd_check(&gram);
    if !psd.is_psd() {
        return Err(Error::Internal(
            "product of psd matrices failed the psd check".into(),
        ));
    }
    if !transvectant_power_vanishes(&gram, d2 + 1)? {
        return Err(Error::Internal(format!(
            "transvectant power {} of the certificate did not vanish",
            d2 + 1
        )));
    }
    let profile = support_profile(&gram)?;

    Ok(Certificate {
        target,
        gram,
        psd,
        profile,
        provenance: Provenance {
            canonical_factor: sopl_factor.clone(),
            other_factor,
            gram_source,
            d1,
            d2,
            theorem_claim: d2.div_ceil(2) + 1,
            lemma_bound: d2 + 1,
        },
    })
}

/// Full pipeline for an SOS binary form p of degree 2d whose harmonic
/// decomposition stops at part k: factor p = (x^2+y^2)^(d-k) * q by exact
/// division, obtain a psd Gram matrix for the quotient (supplied or by
/// root pairing), and build the structured certificate. The certificate's
/// transvectant power k+1 vanishes exactly.
pub fn corollary_pipeline(
    p: &Form,
    quotient_gram: Option<&SymMatrix>,
    pairing_tol: f64,
) -> Result<Certificate> {
    if p.n() != 2 {
        return Err(Error::UnsupportedDimension { n: p.n() });
    }
    if !p.degree().is_multiple_of(2) {
        return Err(Error::OddDegree { degree: p.degree() });
    }
    let d = p.degree() / 2;
    if p.is_zero() {
        let gram = SymMatrix::zero(2, d);
        let psd = psd_check(&gram);
        let profile = support_profile(&gram)?;
        return Ok(Certificate {
            target: p.clone(),
            gram,
            psd,
            profile,
            provenance: Provenance {
                canonical_factor: p.clone(),
                other_factor: Form::zero(2, 0),
                gram_source: GramSource::ZeroForm,
                d1: d,
                d2: 0,
                theorem_claim: 1,
                lemma_bound: 1,
            },
        });
    }

    let k = harmonic_decompose(p)?.support_bound();
    let quotient = divide_norm_power(p, d - k)?;
    debug_assert_eq!(quotient.degree(), 2 * k);

    let (gram_for_quotient, source) = match quotient_gram {
        Some(m) => (
            sos_gram_binary(&quotient, SosGramMode::ExactInput(m))?,
            GramSource::Supplied,
        ),
        None => (
            sos_gram_binary(&quotient, SosGramMode::RootPairing { pairing_tol })?,
            GramSource::RootPairing,
        ),
    };

    let shell = Form::norm_squared(2).pow(d - k);
    structured_gram_from(&shell, &gram_for_quotient, source)
}

/// Obtain an exactly verified psd Gram matrix for a nonnegative binary
/// form, either by validating a supplied one or by the root-pairing
/// construction.
pub fn sos_gram_binary(q: &Form, mode: SosGramMode<'_>) -> Result<SymMatrix> {
    if q.n() != 2 {
        return Err(Error::UnsupportedDimension { n: q.n() });
    }
    if !q.degree().is_multiple_of(2) {
        return Err(Error::OddDegree { degree: q.degree() });
    }
    match mode {
        SosGramMode::ExactInput(m) => {
            if m.n() != 2 {
                return Err(Error::UnsupportedDimension { n: m.n() });
            }
            if m.index_degree() != q.degree() / 2 {
                return Err(Error::SideMismatch {
                    expected: q.degree() / 2 + 1,
                    got: m.side(),
                });
            }
            if gram_eval(m) != *q {
                return Err(Error::GramMismatch);
            }
            if let PsdVerdict::NotPsd { witness } = psd_check(m) {
                return Err(Error::NotPsd { witness });
            }
            Ok(m.clone())
        }
        SosGramMode::RootPairing { pairing_tol } => {
            root_pairing::sos_gram_root_pairing(q, pairing_tol)
        }
    }
}

/// Exact division of a binary form by (x^2 + y^2)^power. The quotient is
/// forced coefficientwise from the x-leading term; failure of the final
/// verification means the input was not divisible.
pub fn divide_norm_power(p: &Form, power: usize) -> Result<Form> {
    if p.n() != 2 {
        return Err(Error::UnsupportedDimension { n: p.n() });
    }
    let mut current = p.clone();
    for _ in 0..power {
        current = divide_norm_squared_once(&current)?;
    }
    Ok(current)
}

fn divide_norm_squared_once(f: &Form) -> Result<Form> {
    if f.degree() < 2 {
        return Err(Error::Internal(
            "cannot divide a form of degree < 2 by a quadratic".into(),
        ));
    }
    let dq = f.degree() - 2;
    let mut quotient = Form::zero(2, dq);
    for a in (0..=dq).rev() {
        let b = dq - a;
        let above = f.coeff(&MultiIndex::new(vec![(a + 2) as u32, b as u32]));
        let carried = if b >= 2 {
            quotient.coeff(&MultiIndex::new(vec![(a + 2) as u32, (b - 2) as u32]))
        } else {
            Rational::zero()
        };
        let value = above - carried;
        if !value.is_zero() {
            quotient = quotient.add(&Form::monomial(2, &[a as u32, b as u32], value))?;
        }
    }
    let product = quotient.mul(&Form::norm_squared(2))?;
    if product != *f {
        return Err(Error::Internal(
            "exact division by x^2 + y^2 left a remainder".into(),
        ));
    }
    Ok(quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use crate::cgtools::matrix_transvectant;
    use crate::grams::quadratic_form;
    use crate::mat::RatMat;
    use crate::testutil::{q, rand_form};

    fn sym(d: usize, rows: &[&[(i64, i64)]]) -> SymMatrix {
        SymMatrix::from_rows(
            2,
            d,
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| q(a, b)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn quadratic(c20: (i64, i64), c11: (i64, i64), c02: (i64, i64)) -> Form {
        Form::from_terms(
            2,
            2,
            [
                (MultiIndex::new(vec![2, 0]), q(c20.0, c20.1)),
                (MultiIndex::new(vec![1, 1]), q(c11.0, c11.1)),
                (MultiIndex::new(vec![0, 2]), q(c02.0, c02.1)),
            ],
        )
        .unwrap()
    }

    fn rand_sopl(rng: &mut impl Rng, d1: usize, terms: usize) -> Form {
        let mut acc = Form::zero(2, 2 * d1);
        for _ in 0..terms {
            let a = q(rng.gen_range(-4..=4), 1);
            let b = q(rng.gen_range(-4..=4), 1);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            acc = acc.add(&Form::linear(&[a, b]).pow(2 * d1)).unwrap();
        }
        acc
    }

    fn rand_psd(rng: &mut impl Rng, d: usize) -> SymMatrix {
        let side = d + 1;
        let w = RatMat::from_fn(side, side, |_, _| q(rng.gen_range(-3..=3), 1));
        SymMatrix::new(2, d, w.transpose().matmul(&w)).unwrap()
    }

    #[test]
    fn worked_example_certificate() {
        let sopl = Form::norm_squared(2).pow(3);
        let other = sym(1, &[&[(2, 1), (-1, 1)], &[(-1, 1), (5, 1)]]);
        let cert = structured_gram(&sopl, &other).unwrap();
        let expected = sym(
            4,
            &[
                &[(2, 1), (-1, 1), (6, 5), (-3, 5), (0, 1)],
                &[(-1, 1), (43, 5), (-12, 5), (21, 5), (-3, 5)],
                &[(6, 5), (-12, 5), (63, 5), (-12, 5), (3, 1)],
                &[(-3, 5), (21, 5), (-12, 5), (11, 1), (-1, 1)],
                &[(0, 1), (-3, 5), (3, 1), (-1, 1), (5, 1)],
            ],
        );
        assert_eq!(cert.gram, expected);
        assert!(cert.psd.is_psd());
        assert_eq!(cert.observed_components(), 2);
        assert_eq!(cert.provenance.theorem_claim, 2);
        assert_eq!(cert.provenance.lemma_bound, 2);
        // independent re-verification of the three certificate claims
        assert_eq!(gram_eval(&cert.gram), cert.target);
        assert!(psd_check(&cert.gram).is_psd());
        let t = matrix_transvectant(&cert.gram).unwrap();
        assert!(!t.is_zero());
        assert!(matrix_transvectant(&t).unwrap().is_zero());
    }

    #[test]
    fn constant_gram_factor_reduces_to_canonical() {
        let sopl = Form::norm_squared(2).pow(2);
        let unit = sym(0, &[&[(1, 1)]]);
        let cert = structured_gram(&sopl, &unit).unwrap();
        assert_eq!(cert.gram, canonical_gram(&sopl).unwrap());
        assert_eq!(cert.observed_components(), 1);
    }

    #[test]
    fn sopl_sum_with_general_psd_gram() {
        let mut rng = StdRng::seed_from_u64(71);
        let sopl = Form::linear(&[q(1, 1), q(1, 1)])
            .pow(4)
            .add(&Form::monomial(2, &[4, 0], q(1, 1)))
            .unwrap();
        let other = rand_psd(&mut rng, 2);
        let cert = structured_gram(&sopl, &other).unwrap();
        assert!(transvectant_power_vanishes(&cert.gram, 3).unwrap());
        assert!(cert.observed_components() <= cert.provenance.lemma_bound);
    }

    #[test]
    fn vanishing_is_nonvacuous_for_long_chains() {
        // degree-6 sopl factor with a side-2 gram: the chain reaches T^2
        // as an honest 1x1 matrix, which must be exactly zero
        let mut rng = StdRng::seed_from_u64(74);
        let sopl = rand_sopl(&mut rng, 3, 2);
        let other = rand_psd(&mut rng, 1);
        let cert = structured_gram(&sopl, &other).unwrap();
        let t1 = matrix_transvectant(&cert.gram).unwrap();
        let t2 = matrix_transvectant(&t1).unwrap();
        assert_eq!(t2.side(), 1);
        assert!(t2.is_zero());
        // ...while T^1 is generically nonzero
        assert!(!t1.is_zero());
    }

    #[test]
    fn rejects_factor_without_psd_canonical_gram() {
        let bad = Form::monomial(2, &[2, 2], q(1, 1));
        let unit = sym(0, &[&[(1, 1)]]);
        match structured_gram(&bad, &unit) {
            Err(Error::FactorGramNotPsd { factor, witness }) => {
                assert!(factor.contains("x1^2"));
                let g = canonical_gram(&bad).unwrap();
                assert!(quadratic_form(&g, &witness) < Rational::zero());
            }
            other => panic!("expected factor rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_psd_other_gram() {
        let sopl = Form::norm_squared(2);
        let indefinite = sym(1, &[&[(1, 1), (2, 1)], &[(2, 1), (1, 1)]]);
        match structured_gram(&sopl, &indefinite) {
            Err(Error::NotPsd { witness }) => {
                assert!(quadratic_form(&indefinite, &witness) < Rational::zero());
            }
            other => panic!("expected psd rejection, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_power_on_random_pipeline_instances() {
        let mut rng = StdRng::seed_from_u64(72);
        for _ in 0..25 {
            let d1 = rng.gen_range(1..=3);
            let d2 = rng.gen_range(0..=3);
            let terms = rng.gen_range(1..=3);
            let sopl = rand_sopl(&mut rng, d1, terms);
            if sopl.is_zero() {
                continue;
            }
            let other = rand_psd(&mut rng, d2);
            let cert = structured_gram(&sopl, &other).unwrap();
            assert!(transvectant_power_vanishes(&cert.gram, d2 + 1).unwrap());
            assert!(cert.observed_components() <= d2 + 1);
        }
    }

    #[test]
    fn corollary_on_worked_example() {
        let p = Form::norm_squared(2)
            .pow(3)
            .mul(&quadratic((2, 1), (-2, 1), (5, 1)))
            .unwrap();
        let supplied = sym(1, &[&[(2, 1), (-1, 1)], &[(-1, 1), (5, 1)]]);
        let cert = corollary_pipeline(&p, Some(&supplied), DEFAULT_PAIRING_TOL).unwrap();
        assert_eq!(cert.observed_components(), 2);
        assert_eq!(cert.provenance.d2, 1);
        assert_eq!(
            cert.provenance.other_factor,
            quadratic((2, 1), (-2, 1), (5, 1))
        );
        assert_eq!(cert.target, p);
        assert_eq!(gram_eval(&cert.gram), p);
        assert_eq!(cert.provenance.gram_source, GramSource::Supplied);
    }

    #[test]
    fn corollary_on_norm_power() {
        let p = Form::norm_squared(2).pow(4);
        let cert = corollary_pipeline(&p, None, DEFAULT_PAIRING_TOL).unwrap();
        assert_eq!(cert.observed_components(), 1);
        assert_eq!(cert.provenance.d2, 0);
        assert_eq!(cert.gram, canonical_gram(&p).unwrap());
    }

    #[test]
    fn corollary_with_degree_two_quotient_support() {
        // quotient x^4 + y^4 at k = 2: supplied corner Gram matrix
        let p = Form::norm_squared(2)
            .pow(2)
            .mul(
                &Form::monomial(2, &[4, 0], q(1, 1))
                    .add(&Form::monomial(2, &[0, 4], q(1, 1)))
                    .unwrap(),
            )
            .unwrap();
        let corner = sym(
            2,
            &[
                &[(1, 1), (0, 1), (0, 1)],
                &[(0, 1), (0, 1), (0, 1)],
                &[(0, 1), (0, 1), (1, 1)],
            ],
        );
        let cert = corollary_pipeline(&p, Some(&corner), DEFAULT_PAIRING_TOL).unwrap();
        assert_eq!(cert.provenance.d2, 2);
        assert_eq!(cert.provenance.theorem_claim, 2);
        assert_eq!(cert.provenance.lemma_bound, 3);
        assert!(cert.observed_components() <= 3);
        assert!(transvectant_power_vanishes(&cert.gram, 3).unwrap());
    }

    #[test]
    fn corollary_zero_form() {
        let cert = corollary_pipeline(&Form::zero(2, 6), None, DEFAULT_PAIRING_TOL).unwrap();
        assert!(cert.gram.is_zero());
        assert_eq!(cert.psd, PsdVerdict::Psd { rank: 0 });
        assert_eq!(cert.observed_components(), 0);
        assert_eq!(cert.provenance.gram_source, GramSource::ZeroForm);
    }

    #[test]
    fn corollary_with_root_pairing_quotient() {
        let p = Form::norm_squared(2)
            .pow(3)
            .mul(&quadratic((2, 1), (-2, 1), (5, 1)))
            .unwrap();
        let cert = corollary_pipeline(&p, None, DEFAULT_PAIRING_TOL).unwrap();
        assert_eq!(cert.target, p);
        assert_eq!(gram_eval(&cert.gram), p);
        assert!(cert.psd.is_psd());
        assert!(cert.observed_components() <= 2);
        assert_eq!(cert.provenance.gram_source, GramSource::RootPairing);
    }

    #[test]
    fn exact_input_mode_validates() {
        let quotient = quadratic((2, 1), (-2, 1), (5, 1));
        let good = sym(1, &[&[(2, 1), (-1, 1)], &[(-1, 1), (5, 1)]]);
        assert_eq!(
            sos_gram_binary(&quotient, SosGramMode::ExactInput(&good)).unwrap(),
            good
        );
        // wrong form
        let other = quadratic((1, 1), (0, 1), (1, 1));
        assert!(matches!(
            sos_gram_binary(&other, SosGramMode::ExactInput(&good)),
            Err(Error::GramMismatch)
        ));
        // right form, not psd
        let indefinite = quadratic((1, 1), (4, 1), (1, 1));
        let bad = sym(1, &[&[(1, 1), (2, 1)], &[(2, 1), (1, 1)]]);
        assert!(matches!(
            sos_gram_binary(&indefinite, SosGramMode::ExactInput(&bad)),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn divide_norm_power_examples() {
        let s = Form::norm_squared(2);
        let quartic = Form::monomial(2, &[4, 0], q(1, 1))
            .add(&Form::monomial(2, &[0, 4], q(1, 1)))
            .unwrap();
        let p = s.pow(2).mul(&quartic).unwrap();
        assert_eq!(divide_norm_power(&p, 2).unwrap(), quartic);
        assert_eq!(divide_norm_power(&p, 0).unwrap(), p);
        // x^4 is not divisible by x^2 + y^2
        assert!(matches!(
            divide_norm_power(&Form::monomial(2, &[4, 0], q(1, 1)), 1),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn divide_norm_power_random_round_trip() {
        let mut rng = StdRng::seed_from_u64(73);
        let s = Form::norm_squared(2);
        for _ in 0..30 {
            let m = rng.gen_range(0..=3);
            let dg = rng.gen_range(0..=4);
            let g = rand_form(&mut rng, 2, dg);
            let p = g.mul(&s.pow(m)).unwrap();
            assert_eq!(divide_norm_power(&p, m).unwrap(), g);
        }
    }
}
