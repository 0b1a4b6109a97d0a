//! Order complexes and their reduced integral homology.

mod complex;
mod int;
mod smith;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use complex::{order_complex, OrderComplex, SimplicialComplex};
pub use int::Int;
pub use smith::{smith_normal_form, SparseMatrix};

/// Default bound on the number of simplices of an order complex.
pub const SIMPLEX_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("order complex exceeds the simplex budget of {budget}{}", needed.map(|n| format!(" ({n} simplices)")).unwrap_or_default())]
    SimplexBudget { needed: Option<u128>, budget: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct HomologyOptions {
    /// Remove free faces before reducing boundary matrices.
    pub collapse: bool,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions { collapse: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub dim: usize,
    pub rank: usize,
    /// Invariant factors greater than 1.
    pub torsion: Vec<Int>,
}

/// Reduced homology with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    /// The complex has no vertices, so its only reduced homology is ℤ in
    /// degree -1.
    pub empty_complex: bool,
    pub dimension: isize,
    pub simplex_counts: Vec<usize>,
    /// Simplex counts after free-face collapses, if they were applied.
    pub collapsed_counts: Option<Vec<usize>>,
    /// One entry per dimension 0..=dimension.
    pub groups: Vec<HomologyGroup>,
    /// Reduced Euler characteristic from the simplex counts.
    pub euler_characteristic: i64,
}

impl HomologyResult {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn rank(&self, d: usize) -> usize {
        self.groups.get(d).map_or(0, |g| g.rank)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    /// Dimensions with nonzero rank or torsion.
    pub fn nonzero_dimensions(&self) -> Vec<isize> {
        if self.empty_complex {
            return vec![-1];
        }
        self.groups
            .iter()
            .filter(|g| g.rank > 0 || !g.torsion.is_empty())
            .map(|g| g.dim as isize)
            .collect()
    }

    /// Alternating sum of the ranks, counting degree -1 for the empty
    /// complex.
    pub fn euler_from_ranks(&self) -> i64 {
        if self.empty_complex {
            return -1;
        }
        self.groups.iter().map(|g| if g.dim % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum()
    }
}

/// Compute reduced homology from the ranks and invariant factors of the
/// augmented boundary maps.
pub fn reduced_homology(k: &SimplicialComplex, opts: &HomologyOptions) -> HomologyResult {
    let simplex_counts = k.counts();
    let euler_characteristic = k.reduced_euler_characteristic();
    if k.is_empty() {
        return HomologyResult {
            empty_complex: true,
            dimension: -1,
            simplex_counts,
            collapsed_counts: None,
            groups: Vec::new(),
            euler_characteristic,
        };
    }
    let collapsed = opts.collapse.then(|| k.collapse());
    let work = collapsed.as_ref().unwrap_or(k);
    let counts = work.counts();
    let factors: Vec<Vec<Int>> =
        work.boundary_matrices().par_iter().map(smith_normal_form).collect();
    let top = k.dim() as usize;
    let groups = (0..=top)
        .map(|d| {
            let n = counts.get(d).copied().unwrap_or(0);
            let r_d = factors.get(d).map_or(0, Vec::len);
            let next = factors.get(d + 1);
            let r_next = next.map_or(0, Vec::len);
            HomologyGroup {
                dim: d,
                rank: n - r_d - r_next,
                torsion: next.map(|f| f.iter().filter(|x| !x.is_unit()).cloned().collect()).unwrap_or_default(),
            }
        })
        .collect();
    let result = HomologyResult {
        empty_complex: false,
        dimension: k.dim(),
        simplex_counts,
        collapsed_counts: collapsed.map(|c| c.counts()),
        groups,
        euler_characteristic,
    };
    debug_assert_eq!(result.euler_from_ranks(), result.euler_characteristic);
    result
}

/// Whether the homology is that of a `d`-sphere: ℤ in degree `d`, zero
/// elsewhere, no torsion. `d = -1` asks for the empty complex.
pub fn is_homology_sphere(h: &HomologyResult, d: isize) -> bool {
    if d < 0 {
        return d == -1 && h.empty_complex;
    }
    !h.empty_complex
        && h.is_torsion_free()
        && h.groups.iter().all(|g| g.rank == usize::from(g.dim as isize == d))
        && (d as usize) < h.groups.len()
}

/// Check `∂_{d} ∘ ∂_{d+1} = 0` for every d, including the augmentation.
pub fn boundary_squares_to_zero(k: &SimplicialComplex) -> bool {
    let ms = k.boundary_matrices();
    ms.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
}
