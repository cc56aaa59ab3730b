use num_complex::Complex;

use super::{ComplexMatrix, LinalgError};
use crate::Scalar;

/// Reduced operator on the wires listed in `keep`, tracing out the rest.
///
/// `wire_dims` gives the Hilbert-space dimension of each tensor factor, first
/// factor most significant. Kept wires stay in ascending index order;
/// duplicates in `keep` are ignored.
pub fn partial_trace<T: Scalar>(
    a: &ComplexMatrix<T>,
    wire_dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix<T>, LinalgError> {
    let total: usize = wire_dims.iter().product();
    if !a.is_square() || a.rows() != total {
        return Err(LinalgError::DimensionMismatch(format!(
            "operator is {}x{} but wire dims {:?} multiply to {}",
            a.rows(),
            a.cols(),
            wire_dims,
            total
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= wire_dims.len()) {
        return Err(LinalgError::DimensionMismatch(format!(
            "kept wire {bad} out of range for {} wires",
            wire_dims.len()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..wire_dims.len()).filter(|w| !kept.contains(w)).collect();

    let kept_dims: Vec<usize> = kept.iter().map(|&w| wire_dims[w]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&w| wire_dims[w]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let env_dim: usize = traced_dims.iter().product();

    // place-value of each wire in the full index
    let mut strides = vec![1usize; wire_dims.len()];
    for w in (0..wire_dims.len().saturating_sub(1)).rev() {
        strides[w] = strides[w + 1] * wire_dims[w + 1];
    }
    let offset = |dims: &[usize], wires: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for k in (0..wires.len()).rev() {
            let digit = idx % dims[k];
            idx /= dims[k];
            off += digit * strides[wires[k]];
        }
        off
    };
    let kept_offsets: Vec<usize> = (0..out_dim)
        .map(|i| offset(&kept_dims, &kept, i))
        .collect();
    let env_offsets: Vec<usize> = (0..env_dim)
        .map(|i| offset(&traced_dims, &traced, i))
        .collect();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &e in &env_offsets {
                acc += a[(ro + e, co + e)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}
