//! Rack isomorphism by backtracking with forced-value propagation.

use super::{Rack, RackError};

/// Default largest rack size accepted by [`rack_isomorphism`].
pub const ISOMORPHISM_CAP: usize = 16;

/// Per-element invariant: whether `a ▷ a = a`, and the cycle type (including
/// fixed points) of the left translation `b ↦ a ▷ b`.
pub fn rack_profile(r: &Rack) -> Vec<(bool, Vec<usize>)> {
    let n = r.size();
    (0..n)
        .map(|a| {
            let mut seen = vec![false; n];
            let mut lens = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut len = 0;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    x = r.op(a, x);
                    len += 1;
                }
                lens.push(len);
            }
            lens.sort_unstable();
            (r.op(a, a) == a, lens)
        })
        .collect()
}

/// Find a bijection `f` with `f(a ▷ b) = f(a) ▷ f(b)`, or `None` if the racks
/// are not isomorphic. Errors when either rack is larger than `cap`.
pub fn rack_isomorphism(r1: &Rack, r2: &Rack, cap: usize) -> Result<Option<Vec<usize>>, RackError> {
    for r in [r1, r2] {
        if r.size() > cap {
            return Err(RackError::SizeCap { size: r.size(), cap });
        }
    }
    if r1.size() != r2.size() {
        return Ok(None);
    }
    let p1 = rack_profile(r1);
    let p2 = rack_profile(r2);
    let mut s1 = p1.clone();
    let mut s2 = p2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let n = r1.size();
    // compat[a][x]: element a of r1 may map to x of r2
    let compat: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|x| p1[a] == p2[x]).collect()).collect();
    let mut search = Search {
        r1,
        r2,
        compat,
        map: vec![None; n],
        used: vec![false; n],
        trail: Vec::new(),
    };
    if !search.run() {
        return Ok(None);
    }
    let f: Vec<usize> = search.map.into_iter().map(Option::unwrap).collect();
    debug_assert!(is_isomorphism(r1, r2, &f));
    Ok(Some(f))
}

/// Whether `f` is a bijective homomorphism from `r1` to `r2`.
pub fn is_isomorphism(r1: &Rack, r2: &Rack, f: &[usize]) -> bool {
    let n = r1.size();
    if r2.size() != n || f.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &x in f {
        if x >= n || std::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    (0..n).all(|a| (0..n).all(|b| f[r1.op(a, b)] == r2.op(f[a], f[b])))
}

struct Search<'a> {
    r1: &'a Rack,
    r2: &'a Rack,
    compat: Vec<Vec<bool>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self) -> bool {
        let Some(a) = self.map.iter().position(Option::is_none) else {
            return true;
        };
        for x in 0..self.r1.size() {
            if self.used[x] || !self.compat[a][x] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(a, x) && self.run() {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    /// Set `f(a) = x` and everything it forces. Every pair of assigned
    /// elements has its product checked, so a complete assignment is a
    /// homomorphism.
    fn assign(&mut self, a: usize, x: usize) -> bool {
        let mut queue = vec![(a, x)];
        while let Some((a, x)) = queue.pop() {
            match self.map[a] {
                Some(y) if y == x => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[x] || !self.compat[a][x] {
                return false;
            }
            self.map[a] = Some(x);
            self.used[x] = true;
            self.trail.push(a);
            for &b in &self.trail {
                let y = self.map[b].unwrap();
                queue.push((self.r1.op(a, b), self.r2.op(x, y)));
                queue.push((self.r1.op(b, a), self.r2.op(y, x)));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for a in self.trail.drain(mark..) {
            let x = self.map[a].take().unwrap();
            self.used[x] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Permutation;
    use crate::racks::{build_rack, parse_rack_spec, validate_rack};

    fn rack(s: &str) -> Rack {
        build_rack(&parse_rack_spec(s).unwrap(), &Default::default()).unwrap()
    }

    /// Oracle: try every bijection.
    fn brute_force_isomorphic(r1: &Rack, r2: &Rack) -> bool {
        fn go(r1: &Rack, r2: &Rack, f: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let n = r1.size();
            if f.len() == n {
                return is_isomorphism(r1, r2, f);
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    f.push(x);
                    if go(r1, r2, f, used) {
                        return true;
                    }
                    f.pop();
                    used[x] = false;
                }
            }
            false
        }
        r1.size() == r2.size() && go(r1, r2, &mut Vec::new(), &mut vec![false; r1.size()])
    }

    #[test]
    fn d8_and_q8_racks_are_isomorphic() {
        let (d8, q8) = (rack("D8"), rack("Q8"));
        let f = rack_isomorphism(&d8, &q8, ISOMORPHISM_CAP).unwrap().expect("isomorphic");
        assert!(is_isomorphism(&d8, &q8, &f));
        assert!(brute_force_isomorphic(&d8, &q8));
    }

    #[test]
    fn abelian_racks_are_trivial() {
        let f = rack_isomorphism(&rack("Z4"), &rack("Z2xZ2"), ISOMORPHISM_CAP).unwrap();
        assert!(f.is_some());
    }

    #[test]
    fn negative_cases() {
        assert_eq!(rack_isomorphism(&rack("S3"), &rack("Z5"), ISOMORPHISM_CAP).unwrap(), None);
        assert_eq!(rack_isomorphism(&rack("S3"), &rack("Z6"), ISOMORPHISM_CAP).unwrap(), None);
        let s4 = rack("S4:cycles(4)");
        let d6 = Rack::dihedral_quandle(6);
        assert_eq!(rack_isomorphism(&s4, &d6, ISOMORPHISM_CAP).unwrap(), None);
        assert!(!brute_force_isomorphic(&s4, &d6));
        assert!(matches!(
            rack_isomorphism(&rack("S4"), &rack("S4"), ISOMORPHISM_CAP),
            Err(RackError::SizeCap { size: 24, cap: 16 })
        ));
    }

    #[test]
    fn agrees_with_brute_force_on_small_racks() {
        let mut racks = vec![
            rack("S3"),
            rack("Z6"),
            rack("S3:noncentral"),
            rack("S4:cycles(4)"),
            rack("S4:transpositions"),
            rack("A4:class((123))"),
            Rack::dihedral_quandle(3),
            Rack::dihedral_quandle(6),
            Rack::permutation_rack(&Permutation::from_cycles(6, &[&[1, 2, 3]])),
            Rack::permutation_rack(&Permutation::from_cycles(6, &[&[4, 5, 6]])),
            Rack::permutation_rack(&Permutation::from_cycles(6, &[&[1, 2], &[3, 4]])),
        ];
        // a relabelled copy of the transposition rack
        let t = rack("S4:transpositions");
        let sigma = [3, 5, 0, 1, 4, 2];
        let mut table = vec![vec![0; 6]; 6];
        for a in 0..6 {
            for b in 0..6 {
                table[sigma[a]][sigma[b]] = sigma[t.op(a, b)];
            }
        }
        racks.push(validate_rack(&table).unwrap());
        for r1 in &racks {
            for r2 in &racks {
                let fast = rack_isomorphism(r1, r2, ISOMORPHISM_CAP).unwrap();
                assert_eq!(fast.is_some(), brute_force_isomorphic(r1, r2));
                if let Some(f) = fast {
                    assert!(is_isomorphism(r1, r2, &f));
                }
            }
        }
    }
}
