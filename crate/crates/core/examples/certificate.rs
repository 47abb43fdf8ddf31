//! Build the structured certificate for (x^2+y^2)^3 (2x^2 - 2xy + 5y^2).

use sosgram::{structured, BigInt, BigRational, Form, SymMatrix};

fn q(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

fn main() -> Result<(), sosgram::Error> {
    let shell = Form::norm_squared(2).pow(3); // (x^2 + y^2)^3
    let quotient_gram = SymMatrix::from_rows(2, 1, vec![vec![q(2), q(-1)], vec![q(-1), q(5)]])?;
    let cert = structured::structured_gram(&shell, &quotient_gram)?;
    assert!(cert.psd.is_psd());
    assert_eq!(cert.observed_components(), 2);
    println!("target: {}", cert.target);
    println!("gram matrix:\n{}", cert.gram.mat());
    println!(
        "components observed/claimed/bound: {}/{}/{}",
        cert.observed_components(),
        cert.provenance.theorem_claim,
        cert.provenance.lemma_bound
    );
    Ok(())
}
