//! Angular-momentum matrices and tensor-product embedding.

use nalgebra::DMatrix;

use crate::spincore::Spin;
use crate::{Result, C64};

/// Jx, Jy, Jz for one spin in the |I, m⟩ basis, m = I … −I.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTriple {
    pub dimension: usize,
    pub x: DMatrix<C64>,
    pub y: DMatrix<C64>,
    pub z: DMatrix<C64>,
}

impl OperatorTriple {
    pub fn component(&self, axis: usize) -> &DMatrix<C64> {
        match axis {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("axis index {axis} out of range"),
        }
    }

    pub fn identity(&self) -> DMatrix<C64> {
        DMatrix::identity(self.dimension, self.dimension)
    }
}

/// Ladder construction of the spin matrices for a spin given as a float.
pub fn spin_operators(spin: f64) -> Result<OperatorTriple> {
    Ok(operators_for(Spin::new(spin)?))
}

pub fn operators_for(spin: Spin) -> OperatorTriple {
    let d = spin.multiplicity();
    let i = spin.value();
    let m: Vec<f64> = spin.projections().collect();
    let mut plus = DMatrix::<C64>::zeros(d, d);
    // J+ |m⟩ = sqrt(I(I+1) - m(m+1)) |m+1⟩ ; row k-1 holds m+1 when column k holds m
    for k in 1..d {
        let mk = m[k];
        plus[(k - 1, k)] = C64::new((i * (i + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let x = (&plus + &minus).map(|v| v * 0.5);
    let y = (&plus - &minus).map(|v| v * C64::new(0.0, -0.5));
    let z = DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(m[r], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    OperatorTriple {
        dimension: d,
        x,
        y,
        z,
    }
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Adds `op`, acting on the tensor product of `factors` (in that order), into
/// the full-space matrix `h` whose factor dimensions are `dims`.
pub(crate) fn add_local(
    h: &mut DMatrix<C64>,
    dims: &[usize],
    factors: &[usize],
    op: &DMatrix<C64>,
) {
    let n = h.nrows();
    let mut strides = vec![1usize; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let local_dims: Vec<usize> = factors.iter().map(|&f| dims[f]).collect();
    let local_n: usize = local_dims.iter().product();
    debug_assert_eq!(op.nrows(), local_n);

    // offset in the full space contributed by each local basis index
    let local_offset: Vec<usize> = (0..local_n)
        .map(|mut l| {
            let mut off = 0;
            for (pos, &f) in factors.iter().enumerate().rev() {
                let digit = l % local_dims[pos];
                l /= local_dims[pos];
                off += digit * strides[f];
            }
            off
        })
        .collect();
    let entries: Vec<Vec<(usize, C64)>> = (0..local_n)
        .map(|r| {
            (0..local_n)
                .filter(|&c| op[(r, c)] != C64::new(0.0, 0.0))
                .map(|c| (c, op[(r, c)]))
                .collect()
        })
        .collect();

    for row in 0..n {
        let mut local_row = 0;
        for (pos, &f) in factors.iter().enumerate() {
            local_row = local_row * local_dims[pos] + (row / strides[f]) % dims[f];
        }
        let base = row - local_offset[local_row];
        for &(lc, v) in &entries[local_row] {
            h[(row, base + local_offset[lc])] += v;
        }
    }
}

/// `op` on factor `factor`, identity elsewhere.
pub fn embed(dims: &[usize], factor: usize, op: &DMatrix<C64>) -> DMatrix<C64> {
    let n: usize = dims.iter().product();
    let mut out = DMatrix::zeros(n, n);
    add_local(&mut out, dims, &[factor], op);
    out
}
