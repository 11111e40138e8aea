//! Cohomology groups of a cochain complex over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::snf::{dense_mul, smith_with_transforms};

/// `H^n ≅ Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with `t_1 | ... | t_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohomologyGroup {
    pub dim: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Whether degree `n` lies past the stored range, and if so whether it is
/// known to vanish.
fn out_of_range(c: &CochainComplex, n: usize) -> Option<Result<CohomologyGroup>> {
    if n <= c.top() {
        return None;
    }
    Some(match c.vanishes_above() {
        Some(bound) if n > bound => Ok(CohomologyGroup::zero(n)),
        _ => Err(Error::TruncationExceeded {
            requested: n,
            bound: c.top(),
        }),
    })
}

/// `H^n(c)`.
pub fn cohomology(c: &CochainComplex, n: usize) -> Result<CohomologyGroup> {
    if let Some(r) = out_of_range(c, n) {
        return r;
    }
    let dim = c.basis(n).map_or(0, |b| b.len());
    let out = c.smith(n).expect("stored degree");
    let (incoming_rank, torsion) = match n.checked_sub(1) {
        Some(m) => {
            let s = c.smith(m).expect("stored degree");
            (s.rank(), s.torsion().to_vec())
        }
        None => (0, Vec::new()),
    };
    let free_rank = dim
        .checked_sub(out.rank() + incoming_rank)
        .expect("rank d^n + rank d^(n-1) exceeds dim C^n: not a complex");
    Ok(CohomologyGroup {
        dim: n,
        free_rank,
        torsion,
    })
}

/// `H^0 ..= H^top`, reducing the coboundaries in parallel.
pub fn cohomology_all(c: &CochainComplex) -> Result<Vec<CohomologyGroup>> {
    c.reduce_all();
    (0..=c.top()).map(|n| cohomology(c, n)).collect()
}

/// Integer cocycles describing `H^n`, as coordinate vectors in the basis of
/// `C^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representatives {
    /// A Z-basis of `ker d^n`.
    pub kernel: Vec<Vec<BigInt>>,
    /// Cocycles whose classes form a basis of the free part of `H^n`.
    pub free: Vec<Vec<BigInt>>,
    /// Cocycles generating the torsion summands, with their orders.
    pub torsion: Vec<(BigInt, Vec<BigInt>)>,
}

/// Generators of `H^n(c)` from dense Smith forms with transforms. Meant for
/// small complexes: cost is cubic in `dim C^n`.
pub fn cocycle_representatives(c: &CochainComplex, n: usize) -> Result<Representatives> {
    if let Some(r) = out_of_range(c, n) {
        r?;
        return Ok(Representatives {
            kernel: Vec::new(),
            free: Vec::new(),
            torsion: Vec::new(),
        });
    }
    let dim = c.basis(n).map_or(0, |b| b.len());
    let d = c.d(n).expect("stored degree");
    let sd = smith_with_transforms(d);
    let k = sd.rank();
    // Columns k.. of v span the kernel.
    let kernel_basis: Vec<Vec<BigInt>> = (k..dim)
        .map(|j| (0..dim).map(|i| sd.v[i][j].clone()).collect())
        .collect();

    let incoming = match n.checked_sub(1) {
        Some(m) => c.d(m).expect("stored degree").clone(),
        None => IntegerMatrix::zeros(dim, 0),
    };
    // Coordinates of the image in the kernel basis: rows k.. of v_inv · B.
    let coords = dense_mul(&sd.v_inv, &incoming.to_dense(), dim);
    debug_assert!(coords[..k].iter().all(|row| row.iter().all(Zero::is_zero)));
    let kernel_dim = dim - k;
    let coords = IntegerMatrix::from_dense(&coords[k..], incoming.cols());
    let si = smith_with_transforms(&coords);
    // New kernel basis K' = K · P^{-1}; the image is spanned by d'_i K'_i.
    let adapted: Vec<Vec<BigInt>> = (0..kernel_dim)
        .map(|j| {
            (0..dim)
                .map(|row| {
                    let mut s = BigInt::zero();
                    for (t, kb) in kernel_basis.iter().enumerate() {
                        let p = &si.u_inv[t][j];
                        if !p.is_zero() {
                            s += &kb[row] * p;
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let r = si.rank();
    let torsion = si
        .diagonal
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_one())
        .map(|(i, f)| (f.clone(), adapted[i].clone()))
        .collect();
    Ok(Representatives {
        kernel: kernel_basis,
        free: adapted[r..].to_vec(),
        torsion,
    })
}
