//! Floating-point Gram search for nonnegative binary forms.
//!
//! The form is factored over the complex numbers (Durand-Kerner), the
//! roots are paired into conjugates (real roots must pair among
//! themselves with even multiplicity), and the product of one
//! representative per pair gives f with q = c * (Re f)^2 + c * (Im f)^2.
//! The coefficient vectors of Re f and Im f are rationalized, so the
//! assembled rank-<=2 matrix is psd by construction; the small rational
//! residual against q is folded into the central diagonal band and the
//! final matrix is re-verified exactly before it leaves this module.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forms::{Form, MultiIndex, Rational};
use crate::grams::{gram_eval, psd_check, SymMatrix};
use crate::mat::RatMat;

/// Default tolerance for conjugate pairing of floating-point roots.
pub const DEFAULT_PAIRING_TOL: f64 = 1e-10;

/// Denominator caps tried in order when rationalizing the paired
/// coefficient vectors. Small caps snap simple rational decompositions
/// exactly (zero residual, no repair needed); larger caps shrink the
/// residual when the true coefficients are irrational.
const RATIONALIZE_CAPS: [u64; 5] = [10, 1_000, 1_000_000, 1_000_000_000, 1_000_000_000_000];

pub(crate) fn sos_gram_root_pairing(q: &Form, pairing_tol: f64) -> Result<SymMatrix> {
    debug_assert_eq!(q.n(), 2);
    debug_assert_eq!(q.degree() % 2, 0);
    let two_k = q.degree();
    let k = two_k / 2;
    if q.is_zero() {
        return Ok(SymMatrix::zero(2, k));
    }

    // coefficient of x^i y^(2k-i)
    let coeff_x = |i: usize| q.coeff(&MultiIndex::new(vec![i as u32, (two_k - i) as u32]));
    let x_degree = (0..=two_k)
        .rev()
        .find(|&i| !coeff_x(i).is_zero())
        .expect("nonzero form");
    let y_multiplicity = two_k - x_degree;
    let leading = coeff_x(x_degree);

    if !y_multiplicity.is_multiple_of(2) {
        return Err(not_nonnegative(
            q,
            "the factor y divides the form an odd number of times",
            &[],
        ));
    }
    if leading.is_negative() {
        return Err(not_nonnegative(q, "negative leading coefficient", &[]));
    }

    // dehomogenize: u(t) = q(t, 1), degree x_degree
    let poly: Vec<f64> = (0..=x_degree)
        .map(|i| {
            (coeff_x(i) / &leading)
                .to_f64()
                .ok_or_else(|| Error::NumericFailure("coefficient overflows f64".into()))
        })
        .collect::<Result<_>>()?;
    let roots = durand_kerner(&poly)?;
    let representatives = pair_roots(q, &roots, pairing_tol)?;

    // rank-<=2 candidate from the chosen representatives: rationalizing
    // the factor vectors keeps c (u u^T + v v^T) psd by construction, and
    // small caps snap simple rational decompositions to a zero residual
    let monic = poly_from_roots(&representatives);
    for cap in RATIONALIZE_CAPS {
        let mut re = vec![BigRational::zero(); k + 1];
        let mut im = vec![BigRational::zero(); k + 1];
        for (a, c) in monic.iter().enumerate() {
            // position p holds the x^(k-p) y^p coefficient
            let p = k - a;
            re[p] = rationalize(c.re, cap)?;
            im[p] = rationalize(c.im, cap)?;
        }
        let mat = RatMat::from_fn(k + 1, k + 1, |i, j| {
            (&re[i] * &re[j] + &im[i] * &im[j]) * &leading
        });
        if let Some(gram) = band_repair_and_check(q, k, mat)? {
            return Ok(gram);
        }
    }

    // the rank-<=2 candidate is singular for k >= 2, so the band repair
    // can tip it indefinite; averaging the rank-two grams over the
    // single-flip conjugate pairings is generically positive definite for
    // strictly positive forms, which makes the repair perturbation harmless
    let flippable: Vec<usize> = representatives
        .iter()
        .enumerate()
        .filter(|(_, z)| z.im != 0.0)
        .map(|(i, _)| i)
        .collect();
    if !flippable.is_empty() {
        let mut variants: Vec<Vec<Complex64>> = vec![representatives.clone()];
        for &i in &flippable {
            let mut flipped = representatives.clone();
            flipped[i] = flipped[i].conj();
            variants.push(flipped);
        }
        let mut averaged = vec![vec![0f64; k + 1]; k + 1];
        for variant in &variants {
            let coeffs = poly_from_roots(variant);
            let mut re = vec![0f64; k + 1];
            let mut im = vec![0f64; k + 1];
            for (a, c) in coeffs.iter().enumerate() {
                re[k - a] = c.re;
                im[k - a] = c.im;
            }
            for i in 0..=k {
                for j in 0..=k {
                    averaged[i][j] += re[i] * re[j] + im[i] * im[j];
                }
            }
        }
        let count = variants.len() as f64;
        for cap in RATIONALIZE_CAPS.iter().rev() {
            let mut mat = RatMat::zeros(k + 1, k + 1);
            for i in 0..=k {
                for j in i..=k {
                    let entry = rationalize(averaged[i][j] / count, *cap)? * &leading;
                    mat[(i, j)] = entry.clone();
                    if i != j {
                        mat[(j, i)] = entry;
                    }
                }
            }
            if let Some(gram) = band_repair_and_check(q, k, mat)? {
                return Ok(gram);
            }
        }
    }
    Err(Error::NumericFailure(
        "no rationalization of the paired factors yields a psd Gram matrix".into(),
    ))
}

/// Monic complex polynomial with the given roots, ascending coefficients.
fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for z in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (a, c) in coeffs.iter().enumerate() {
            next[a + 1] += c;
            next[a] -= c * z;
        }
        coeffs = next;
    }
    coeffs
}

/// Fold the residual q - gram_eval(mat) into the central diagonal band,
/// then verify the round trip and the psd check exactly. Returns the
/// repaired matrix only when it passes.
fn band_repair_and_check(q: &Form, k: usize, mut mat: RatMat) -> Result<Option<SymMatrix>> {
    let approx = SymMatrix::new(2, k, mat.clone()).expect("symmetric by construction");
    let residual = q.sub(&gram_eval(&approx))?;
    for (idx, value) in residual.terms() {
        let s = idx.exp(1) as usize;
        if s.is_multiple_of(2) {
            mat[(s / 2, s / 2)] += value;
        } else {
            let half = value / BigRational::from(BigInt::from(2));
            mat[(s / 2, s / 2 + 1)] += half.clone();
            mat[(s / 2 + 1, s / 2)] += half;
        }
    }
    let repaired = SymMatrix::new(2, k, mat)?;
    if gram_eval(&repaired) != *q {
        return Err(Error::Internal(
            "band repair failed to restore the target form".into(),
        ));
    }
    Ok(psd_check(&repaired).is_psd().then_some(repaired))
}

/// Split roots into conjugate pairs and evenly multiple real roots,
/// returning one representative per pair.
fn pair_roots(q: &Form, roots: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let mut upper: Vec<Complex64> = Vec::new();
    let mut lower: Vec<Complex64> = Vec::new();
    let mut real: Vec<f64> = Vec::new();
    for &z in roots {
        let near_real = z.im.abs() <= tol * (1.0 + z.norm());
        if near_real {
            real.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    // complex roots of a real polynomial come in conjugate pairs; greedily
    // match each upper root to the nearest lower root
    let mut representatives = Vec::new();
    for &z in &upper {
        let conj = z.conj();
        let Some((best, _)) = lower
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - conj).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        else {
            return Err(Error::NumericFailure(
                "complex root without a conjugate partner".into(),
            ));
        };
        lower.swap_remove(best);
        representatives.push(z);
    }
    if !lower.is_empty() {
        return Err(Error::NumericFailure(
            "complex root without a conjugate partner".into(),
        ));
    }

    // real roots must pair up with even multiplicity
    real.sort_by(f64::total_cmp);
    let pair_tol = tol.sqrt();
    let mut i = 0;
    while i < real.len() {
        if i + 1 < real.len() && (real[i + 1] - real[i]).abs() <= pair_tol * (1.0 + real[i].abs()) {
            let mid = (real[i] + real[i + 1]) / 2.0;
            representatives.push(Complex64::new(mid, 0.0));
            i += 2;
        } else {
            return Err(not_nonnegative(
                q,
                "real root of odd multiplicity",
                &[real[i]],
            ));
        }
    }
    Ok(representatives)
}

/// All-roots iteration on a monic-normalized real polynomial given by
/// ascending coefficients (poly[i] is the t^i coefficient, poly.last() the
/// leading one).
fn durand_kerner(poly: &[f64]) -> Result<Vec<Complex64>> {
    let degree = poly.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = *poly.last().expect("nonempty");
    let monic: Vec<f64> = poly.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..degree].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|j| seed.powu(j as u32 + 1) * radius)
        .collect();
    let eval = |z: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for j in 0..degree {
            let zj = roots[j];
            let mut den = Complex64::new(1.0, 0.0);
            for (l, &zl) in roots.iter().enumerate() {
                if l != j {
                    den *= zj - zl;
                }
            }
            if den.norm() == 0.0 {
                // coincident iterates: nudge apart instead of dividing by zero
                roots[j] += Complex64::new(1e-6, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(zj) / den;
            roots[j] = zj - step;
            max_step = max_step.max(step.norm());
        }
        let scale = 1.0 + roots.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if max_step < 1e-13 * scale {
            return Ok(roots);
        }
    }
    Err(Error::NumericFailure(
        "root iteration did not converge".into(),
    ))
}

/// Best rational approximation with bounded denominator, by continued
/// fractions.
fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::NumericFailure("non-finite value".into()));
    }
    if x == 0.0 {
        return Ok(Rational::zero());
    }
    let negative = x < 0.0;
    let mut value = x.abs();
    let mut h_prev = BigInt::one();
    let mut h = BigInt::from(value.floor() as i64);
    let mut k_prev = BigInt::zero();
    let mut k = BigInt::one();
    let max_den = BigInt::from(max_den);
    let mut frac = value - value.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        value = 1.0 / frac;
        let a = value.floor();
        if !a.is_finite() {
            break;
        }
        let a_int = BigInt::from(a as i64);
        let h_next = &a_int * &h + &h_prev;
        let k_next = &a_int * &k + &k_prev;
        if k_next > max_den {
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        frac = value - a;
    }
    let mut result = BigRational::new(h, k);
    if negative {
        result = -result;
    }
    Ok(result)
}

/// Build a not-nonnegative error, probing for an exact rational point with
/// a strictly negative value near the suspected sign changes.
fn not_nonnegative(q: &Form, detail: &str, suspect_roots: &[f64]) -> Error {
    Error::NotNonnegative {
        detail: detail.to_string(),
        witness_point: find_negative_point(q, suspect_roots).map(Box::new),
    }
}

fn find_negative_point(q: &Form, suspect_roots: &[f64]) -> Option<(Rational, Rational)> {
    let one = Rational::one();
    let mut candidates: Vec<(Rational, Rational)> = vec![
        (one.clone(), Rational::zero()),
        (Rational::zero(), one.clone()),
        (one.clone(), one.clone()),
        (one.clone(), -one.clone()),
    ];
    // near each suspected real root of q(t, 1), and straddling y = 0
    for &r in suspect_roots {
        if let Ok(center) = rationalize(r, 1_000_000_000) {
            for j in 1..=60u32 {
                let offset = Rational::new(BigInt::one(), BigInt::from(2u64).pow(j));
                candidates.push((&center + &offset, one.clone()));
                candidates.push((&center - &offset, one.clone()));
            }
        }
    }
    for j in 0..=60u32 {
        let eps = Rational::new(BigInt::one(), BigInt::from(2u64).pow(j));
        candidates.push((one.clone(), eps.clone()));
        candidates.push((one.clone(), -eps.clone()));
        candidates.push((-one.clone(), eps.clone()));
        candidates.push((-one.clone(), -eps.clone()));
    }
    candidates.into_iter().find(|(a, b)| {
        q.eval(&[a.clone(), b.clone()])
            .map(|v| v.is_negative())
            .unwrap_or(false)
    })
}
