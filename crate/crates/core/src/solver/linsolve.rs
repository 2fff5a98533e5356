//! Sparse direct solve of the reduced system.

use std::time::Instant;

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LinearStats {
    pub n: usize,
    pub nnz: usize,
    pub seconds: f64,
}

/// Solve `A x = b` with `A` given as triplets (duplicates summed) by sparse LU.
pub fn sparse_lu_solve(n: usize, triplets: &[(usize, usize, f64)], rhs: &[f64]) -> Result<(Vec<f64>, LinearStats)> {
    let start = Instant::now();
    let trip: Vec<Triplet<usize, usize, f64>> = triplets.iter().map(|&(i, j, v)| Triplet::new(i, j, v)).collect();
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
        .map_err(|e| Error::LinearSolve(format!("{e:?}")))?;
    let nnz = a.compute_nnz();
    let lu = a.sp_lu().map_err(|e| Error::LinearSolve(format!("{e:?}")))?;
    let mut b = Mat::<f64>::from_fn(n, 1, |i, _| rhs[i]);
    lu.solve_in_place(b.as_mut());
    let x: Vec<f64> = (0..n).map(|i| b[(i, 0)]).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve("singular reduced matrix".into()));
    }
    Ok((x, LinearStats { n, nnz, seconds: start.elapsed().as_secs_f64() }))
}
