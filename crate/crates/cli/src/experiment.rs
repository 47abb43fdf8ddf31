//! Batch experiment driver: random structured certificates, with the
//! observed component count tabulated against the two predicted bounds.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sosgram::structured::structured_gram;
use sosgram::{BigRational, Form, RatMat, SymMatrix};

use crate::{CliError, CliResult};

/// Deterministic per-trial seed derivation (splitmix64 of base ^ index).
fn trial_seed(base: u64, trial: u64) -> u64 {
    let mut z = base ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn int(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

fn random_sopl(rng: &mut impl Rng, d1: usize) -> Form {
    loop {
        let mut acc = Form::zero(2, 2 * d1);
        for _ in 0..rng.gen_range(2..=3) {
            let a = int(rng.gen_range(-4..=4));
            let b = int(rng.gen_range(-4..=4));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            acc = acc
                .add(&Form::linear(&[a, b]).pow(2 * d1))
                .expect("same degree");
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

fn random_psd(rng: &mut impl Rng, d2: usize) -> SymMatrix {
    let side = d2 + 1;
    let w = RatMat::from_fn(side, side, |_, _| int(rng.gen_range(-4..=4)));
    SymMatrix::new(2, d2, w.transpose().matmul(&w)).expect("gramian is symmetric")
}

/// Run `trials` random certificate constructions and emit CSV rows. The
/// lemma bound observed_components <= d2 + 1 is asserted per trial; the
/// relation to the sharper claimed count is only reported.
pub fn run_theorem(d1: usize, d2: usize, trials: usize, seed: u64) -> CliResult<String> {
    let mut csv = String::from("seed,d1,d2,observed_components,theorem_claim,lemma_bound\n");
    for trial in 0..trials {
        let ts = trial_seed(seed, trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let sopl = random_sopl(&mut rng, d1);
        let gram = random_psd(&mut rng, d2);
        let cert = structured_gram(&sopl, &gram)?;
        let observed = cert.observed_components();
        if observed > cert.provenance.lemma_bound {
            return Err(CliError::Core(sosgram::Error::Internal(format!(
                "trial {ts}: observed {observed} components, above the bound {}",
                cert.provenance.lemma_bound
            ))));
        }
        writeln!(
            csv,
            "{ts},{d1},{d2},{observed},{},{}",
            cert.provenance.theorem_claim, cert.provenance.lemma_bound
        )
        .expect("writing to a String");
    }
    Ok(csv)
}
