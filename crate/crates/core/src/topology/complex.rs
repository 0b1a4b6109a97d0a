use std::collections::VecDeque;

use super::int::Int;
use super::smith::SparseMatrix;
use super::TopologyError;
use crate::lattice::BoundedPoset;

/// A finite abstract simplicial complex. Simplices of each dimension are
/// stored as increasing vertex tuples in lexicographic order, which makes
/// face lookup a binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `faces[d]` holds the d-simplices, flattened with stride `d + 1`.
    faces: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    pub fn empty() -> SimplicialComplex {
        SimplicialComplex { faces: Vec::new() }
    }

    /// The complex generated by the given simplices (all faces are added).
    pub fn from_simplices(simplices: &[Vec<u32>]) -> SimplicialComplex {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = Vec::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            let k = s.len();
            for mask in 1u64..(1 << k) {
                let face: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(face);
            }
        }
        SimplicialComplex { faces: by_dim.into_iter().map(|set| set.into_iter().flatten().collect()).collect() }
    }

    /// Dimension, or -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, |f| f.len() / (d + 1))
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..self.faces.len()).map(|d| self.count(d)).collect()
    }

    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[u32] {
        &self.faces[d][i * (d + 1)..(i + 1) * (d + 1)]
    }

    pub fn simplices(&self, d: usize) -> impl Iterator<Item = &[u32]> {
        self.faces.get(d).map(|f| f.chunks_exact(d + 1)).into_iter().flatten()
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        let n = self.count(d);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.simplex(d, mid).cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Reduced Euler characteristic `-1 + Σ (-1)^d f_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().fold(-1, |acc, (d, &n)| {
            if d % 2 == 0 { acc + n as i64 } else { acc - n as i64 }
        })
    }

    /// ∂_d from d-simplices to (d-1)-simplices. ∂_0 is the augmentation,
    /// sending every vertex to the single (-1)-simplex.
    pub fn boundary(&self, d: usize) -> SparseMatrix {
        if d == 0 {
            let mut m = SparseMatrix::new(1);
            for _ in 0..self.count(0) {
                m.push_column(vec![(0, Int::ONE)]);
            }
            return m;
        }
        let mut m = SparseMatrix::new(self.count(d - 1));
        let mut face = Vec::with_capacity(d);
        for s in self.simplices(d) {
            let mut col = Vec::with_capacity(d + 1);
            for i in 0..=d {
                face.clear();
                face.extend(s.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &v)| v));
                let row = self.index_of(&face).expect("complex is closed under faces");
                col.push((row as u32, Int::from(if i % 2 == 0 { 1 } else { -1 })));
            }
            m.push_column(col);
        }
        m
    }

    /// ∂_0, ..., ∂_dim.
    pub fn boundary_matrices(&self) -> Vec<SparseMatrix> {
        use rayon::prelude::*;
        (0..self.faces.len()).into_par_iter().map(|d| self.boundary(d)).collect()
    }

    /// Indices of the (d-1)-faces of the i-th d-simplex.
    fn face_ids(&self, d: usize, i: usize) -> Vec<usize> {
        let s = self.simplex(d, i);
        (0..=d)
            .map(|k| {
                let face: Vec<u32> = s.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, &v)| v).collect();
                self.index_of(&face).expect("complex is closed under faces")
            })
            .collect()
    }

    /// Repeatedly remove a simplex lying in exactly one other simplex
    /// together with that simplex. The result has the homotopy type of the
    /// input.
    pub fn collapse(&self) -> SimplicialComplex {
        let top = self.faces.len();
        if top < 2 {
            return self.clone();
        }
        let counts = self.counts();
        let mut alive: Vec<Vec<bool>> = counts.iter().map(|&n| vec![true; n]).collect();
        // faces[d][i] for d >= 1, and cofaces in CSR form for d < top - 1
        let face_lists: Vec<Vec<Vec<usize>>> = (0..top)
            .map(|d| if d == 0 { Vec::new() } else { (0..counts[d]).map(|i| self.face_ids(d, i)).collect() })
            .collect();
        let mut cofaces: Vec<Vec<Vec<u32>>> = counts.iter().map(|&n| vec![Vec::new(); n]).collect();
        for d in 1..top {
            for (i, fs) in face_lists[d].iter().enumerate() {
                for &f in fs {
                    cofaces[d - 1][f].push(i as u32);
                }
            }
        }
        let mut live_cofaces: Vec<Vec<u32>> =
            cofaces.iter().map(|cs| cs.iter().map(|c| c.len() as u32).collect()).collect();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for d in 0..top - 1 {
            for i in 0..counts[d] {
                if live_cofaces[d][i] == 1 {
                    queue.push_back((d, i));
                }
            }
        }
        while let Some((d, i)) = queue.pop_front() {
            if !alive[d][i] || live_cofaces[d][i] != 1 {
                continue;
            }
            let t = cofaces[d][i].iter().map(|&c| c as usize).find(|&c| alive[d + 1][c]).unwrap();
            alive[d][i] = false;
            alive[d + 1][t] = false;
            for &f in &face_lists[d + 1][t] {
                if f != i {
                    live_cofaces[d][f] -= 1;
                    if live_cofaces[d][f] == 1 {
                        queue.push_back((d, f));
                    }
                }
            }
            if d > 0 {
                for &f in &face_lists[d][i] {
                    live_cofaces[d - 1][f] -= 1;
                    if live_cofaces[d - 1][f] == 1 {
                        queue.push_back((d - 1, f));
                    }
                }
            }
        }
        let mut faces: Vec<Vec<u32>> = (0..top)
            .map(|d| {
                (0..counts[d]).filter(|&i| alive[d][i]).flat_map(|i| self.simplex(d, i).iter().copied()).collect()
            })
            .collect();
        while faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        SimplicialComplex { faces }
    }
}

/// The order complex of the proper part of a bounded poset.
#[derive(Debug, Clone)]
pub struct OrderComplex {
    /// Poset node ids of the vertices, ascending; vertex `v` of the complex
    /// is node `vertices[v]`.
    pub vertices: Vec<usize>,
    pub complex: SimplicialComplex,
}

/// Build the complex of chains of `p` minus its bottom and top, refusing to
/// produce more than `budget` simplices.
pub fn order_complex(p: &BoundedPoset, budget: usize) -> Result<OrderComplex, TopologyError> {
    let n = p.len();
    if n <= 2 {
        return Ok(OrderComplex { vertices: Vec::new(), complex: SimplicialComplex::empty() });
    }
    let top = p.top();
    let proper = n - 2;
    // strict up-sets inside the proper part, vertex v = node v + 1
    let mut ups: Vec<Vec<u32>> = vec![Vec::new(); proper];
    let mut pairs = 0usize;
    for v in (0..proper).rev() {
        let mut acc: Vec<u32> = Vec::new();
        for &y in p.up(v + 1) {
            let y = y as usize;
            if y == top {
                continue;
            }
            acc.push(y as u32 - 1);
            acc.extend_from_slice(&ups[y - 1]);
        }
        acc.sort_unstable();
        acc.dedup();
        pairs += acc.len();
        if pairs + proper > budget {
            return Err(TopologyError::SimplexBudget { needed: None, budget });
        }
        ups[v] = acc;
    }
    // chains[d][v]: number of d-simplices with minimum v
    let mut per_dim: Vec<Vec<u128>> = vec![vec![1; proper]];
    loop {
        let prev = per_dim.last().unwrap();
        let next: Vec<u128> = (0..proper).map(|v| ups[v].iter().map(|&w| prev[w as usize]).sum()).collect();
        if next.iter().all(|&c| c == 0) {
            break;
        }
        per_dim.push(next);
    }
    let total: u128 = per_dim.iter().flatten().sum();
    if total > budget as u128 {
        return Err(TopologyError::SimplexBudget { needed: Some(total), budget });
    }
    let mut faces: Vec<Vec<u32>> =
        per_dim.iter().enumerate().map(|(d, c)| Vec::with_capacity(c.iter().sum::<u128>() as usize * (d + 1))).collect();
    let mut chain: Vec<u32> = Vec::new();
    fn extend(ups: &[Vec<u32>], chain: &mut Vec<u32>, faces: &mut [Vec<u32>]) {
        faces[chain.len() - 1].extend_from_slice(chain);
        let last = *chain.last().unwrap() as usize;
        for &w in &ups[last] {
            chain.push(w);
            extend(ups, chain, faces);
            chain.pop();
        }
    }
    for v in 0..proper as u32 {
        chain.push(v);
        extend(&ups, &mut chain, &mut faces);
        chain.pop();
    }
    // depth-first order is lexicographic within each dimension
    debug_assert!(faces.iter().enumerate().all(|(d, f)| f.chunks_exact(d + 1).collect::<Vec<_>>().windows(2).all(|w| w[0] < w[1])));
    Ok(OrderComplex { vertices: (1..=proper).collect(), complex: SimplicialComplex { faces } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_simplices_closes_under_faces() {
        let k = SimplicialComplex::from_simplices(&[vec![0, 1, 2]]);
        assert_eq!(k.counts(), vec![3, 3, 1]);
        assert_eq!(k.index_of(&[1, 2]), Some(2));
        assert_eq!(k.index_of(&[0, 3]), None);
        assert_eq!(k.reduced_euler_characteristic(), 0);
    }

    #[test]
    fn edge_boundary() {
        let k = SimplicialComplex::from_simplices(&[vec![0, 1]]);
        let d1 = k.boundary(1);
        assert_eq!(d1.column(0), &[(0, Int::from(-1)), (1, Int::from(1))]);
        assert!(k.boundary(0).mul(&d1).is_zero());
    }

    #[test]
    fn collapse_of_a_cone_is_a_point() {
        let k = SimplicialComplex::from_simplices(&[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4]]);
        let c = k.collapse();
        assert_eq!(c.counts(), vec![1]);
        let circle = SimplicialComplex::from_simplices(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(circle.collapse(), circle);
        let tree = SimplicialComplex::from_simplices(&[vec![0, 1], vec![1, 2], vec![1, 3]]);
        assert_eq!(tree.collapse().counts(), vec![1]);
    }

    #[test]
    fn order_complex_of_pentagon() {
        // 0 < 1 < 2 < 4, 0 < 3 < 4
        let p = BoundedPoset::from_up_covers(vec![vec![1, 3], vec![2], vec![4], vec![4], vec![]]);
        let oc = order_complex(&p, 100).unwrap();
        assert_eq!(oc.vertices, vec![1, 2, 3]);
        assert_eq!(oc.complex.counts(), vec![3, 1]);
        assert_eq!(oc.complex.simplex(1, 0), &[0, 1]);
        assert!(matches!(order_complex(&p, 3), Err(TopologyError::SimplexBudget { .. })));
    }

    #[test]
    fn two_element_poset_gives_empty_complex() {
        let p = BoundedPoset::from_up_covers(vec![vec![1], vec![]]);
        assert!(order_complex(&p, 10).unwrap().complex.is_empty());
    }
}
