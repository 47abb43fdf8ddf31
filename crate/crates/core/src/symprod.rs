//! The symmetric tensor product on monomial-indexed symmetric matrices.
//!
//! For A representing p and B representing q, the product represents p*q
//! and is psd whenever both factors are. It is the convolution
//! (A (.) B)_{(alpha,beta)} = sum over alpha1+alpha2=alpha,
//! beta1+beta2=beta of A_{(alpha1,beta1)} B_{(alpha2,beta2)}.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::MultiIndex;
use crate::grams::SymMatrix;
use crate::mat::RatMat;

/// Convolution product; the result is indexed by degree d1 + d2 monomials.
pub fn sym_tensor_product(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let n = a.n();
    let d_out = a.index_degree() + b.index_degree();
    let basis_a = a.index_set();
    let basis_b = b.index_set();
    let basis_out = MultiIndex::basis(n, d_out);
    let position: HashMap<&MultiIndex, usize> = basis_out
        .iter()
        .enumerate()
        .map(|(i, idx)| (idx, i))
        .collect();

    // row/column index sums, precomputed once per factor pair
    let row_targets: Vec<Vec<usize>> = basis_a
        .iter()
        .map(|alpha1| {
            basis_b
                .iter()
                .map(|alpha2| position[&alpha1.add(alpha2)])
                .collect()
        })
        .collect();

    let mut out = RatMat::zeros(basis_out.len(), basis_out.len());
    for (i1, _) in basis_a.iter().enumerate() {
        for (j1, _) in basis_a.iter().enumerate() {
            let entry_a = a.entry(i1, j1);
            if entry_a.is_zero() {
                continue;
            }
            for (i2, _) in basis_b.iter().enumerate() {
                let r = row_targets[i1][i2];
                for (j2, _) in basis_b.iter().enumerate() {
                    let entry_b = b.entry(i2, j2);
                    if entry_b.is_zero() {
                        continue;
                    }
                    let c = row_targets[j1][j2];
                    let delta = entry_a * entry_b;
                    out[(r, c)] += delta;
                }
            }
        }
    }
    SymMatrix::new(n, d_out, out)
}
