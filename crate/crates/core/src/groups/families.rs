use std::fmt;

use super::spec::GroupSpec;
use super::{FiniteGroup, GroupError};

/// A permutation of `{0, .., n-1}` stored as its image list. Displayed in
/// 1-based cycle notation without separators, e.g. `(123)(45)`; the identity
/// is `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort();
            s.iter().enumerate().all(|(i, &x)| i == x as usize)
        });
        Permutation(images)
    }

    /// Build from 1-based cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Self {
        let mut img: Vec<u8> = (0..n as u8).collect();
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                let b = cyc[(i + 1) % cyc.len()];
                img[a as usize - 1] = b - 1;
            }
        }
        Permutation(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        self.compose(other).compose(&self.inverse())
    }

    /// Non-trivial cycles, each starting at its smallest point, in order of
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.image(x);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Sorted lengths of the non-trivial cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort();
        t
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.image(i) != i).collect()
    }

    /// All permutations of `n` points in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("e");
        }
        for c in cycles {
            f.write_str("(")?;
            for x in c {
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Build the group described by `spec`, refusing orders above `cap`.
pub fn build_group(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup, GroupError> {
    let order = spec.order();
    let cap = cap.min(crate::bitset::MAX_ELEMENTS);
    if order > cap as u128 {
        return Err(GroupError::OrderCap { order, cap });
    }
    let name = spec.to_string();
    match spec {
        GroupSpec::Cyclic(n) => {
            let n = *n;
            let labels = (0..n).map(|i| if i == 0 { "e".into() } else { i.to_string() }).collect();
            table(name, n, |a, b| (a + b) % n, labels)
        }
        GroupSpec::Symmetric(n) => permutation_group(name, Permutation::all(*n)),
        GroupSpec::Alternating(n) => {
            permutation_group(name, Permutation::all(*n).into_iter().filter(Permutation::is_even).collect())
        }
        GroupSpec::Dihedral(order) => dihedral(name, order / 2),
        GroupSpec::Dicyclic(order) => dicyclic(name, order / 4),
        GroupSpec::SemiDihedral16 => semidihedral16(name),
        GroupSpec::SpecialLinear23 => special_linear_2_3(name),
        GroupSpec::Tv18 => tv18(name),
        GroupSpec::Product(factors) => {
            let mut acc = build_group(&factors[0], cap)?;
            for f in &factors[1..] {
                let g = build_group(f, cap)?;
                acc = direct_product(&acc, &g)?;
            }
            acc.name = name;
            Ok(acc)
        }
    }
}

fn table(
    name: String,
    n: usize,
    mul: impl Fn(usize, usize) -> usize,
    labels: Vec<String>,
) -> Result<FiniteGroup, GroupError> {
    let mut t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t.push(mul(a, b));
        }
    }
    FiniteGroup::from_table(name, t, labels)
}

fn permutation_group(name: String, perms: Vec<Permutation>) -> Result<FiniteGroup, GroupError> {
    let index: std::collections::HashMap<&Permutation, usize> =
        perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let labels = perms.iter().map(|p| p.to_string()).collect();
    let g = table(name, perms.len(), |a, b| index[&perms[a].compose(&perms[b])], labels)?;
    Ok(g.with_perms(perms))
}

/// Elements `s^j r^i` encoded as `j * k + i`.
fn dihedral(name: String, k: usize) -> Result<FiniteGroup, GroupError> {
    let decode = |x: usize| (x / k, x % k);
    let labels = (0..2 * k)
        .map(|x| {
            let (j, i) = decode(x);
            let r = match i {
                0 => String::new(),
                1 => "r".into(),
                _ => format!("r{i}"),
            };
            match (j, i) {
                (0, 0) => "e".into(),
                (0, _) => r,
                _ => format!("s{r}"),
            }
        })
        .collect();
    table(
        name,
        2 * k,
        |a, b| {
            let (ja, ia) = decode(a);
            let (jb, ib) = decode(b);
            // r^i s = s r^{-i}
            let i = if jb == 1 { (k - ia) % k } else { ia };
            ((ja + jb) % 2) * k + (i + ib) % k
        },
        labels,
    )
}

/// Dic_m = <a, x | a^{2m} = 1, x^2 = a^m, x a x⁻¹ = a⁻¹>; `x^j a^i` encoded
/// as `j * 2m + i`.
fn dicyclic(name: String, m: usize) -> Result<FiniteGroup, GroupError> {
    let k = 2 * m;
    let labels = (0..2 * k)
        .map(|x| {
            let (j, i) = (x / k, x % k);
            let a = match i {
                0 => String::new(),
                1 => "a".into(),
                _ => format!("a{i}"),
            };
            match (j, i) {
                (0, 0) => "e".into(),
                (0, _) => a,
                _ => format!("x{a}"),
            }
        })
        .collect();
    table(
        name,
        2 * k,
        |p, q| {
            let (jp, ip) = (p / k, p % k);
            let (jq, iq) = (q / k, q % k);
            // a^i x = x a^{-i}; x x = a^m
            let i = if jq == 1 { (k - ip) % k } else { ip };
            let (j, extra) = match (jp, jq) {
                (1, 1) => (0, m),
                _ => (jp + jq, 0),
            };
            j * k + (i + iq + extra) % k
        },
        labels,
    )
}

/// SD16 = <a, x | a^8 = x^2 = 1, x a x = a^3>; `x^j a^i` encoded as `8j + i`.
fn semidihedral16(name: String) -> Result<FiniteGroup, GroupError> {
    let labels = (0..16)
        .map(|x| {
            let (j, i) = (x / 8, x % 8);
            let a = match i {
                0 => String::new(),
                1 => "a".into(),
                _ => format!("a{i}"),
            };
            match (j, i) {
                (0, 0) => "e".into(),
                (0, _) => a,
                _ => format!("x{a}"),
            }
        })
        .collect();
    table(
        name,
        16,
        |p, q| {
            let (jp, ip) = (p / 8, p % 8);
            let (jq, iq) = (q / 8, q % 8);
            // a^i x = x a^{3i}
            let i = if jq == 1 { (3 * ip) % 8 } else { ip };
            ((jp + jq) % 2) * 8 + (i + iq) % 8
        },
        labels,
    )
}

/// 2x2 matrices over F3 of determinant 1, identity first, then in
/// lexicographic order of (a, b, c, d).
fn special_linear_2_3(name: String) -> Result<FiniteGroup, GroupError> {
    let mut mats: Vec<[u8; 4]> = Vec::new();
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                for d in 0..3u8 {
                    if (a * d + 3 * 3 - (b * c) % 3) % 3 == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    mats.sort_by_key(|m| (*m != [1, 0, 0, 1], *m));
    let find = |m: [u8; 4]| mats.iter().position(|&x| x == m).unwrap();
    let labels = mats
        .iter()
        .map(|m| {
            if *m == [1, 0, 0, 1] {
                "e".into()
            } else {
                format!("[{}{};{}{}]", m[0], m[1], m[2], m[3])
            }
        })
        .collect();
    table(
        name,
        24,
        |x, y| {
            let (p, q) = (mats[x], mats[y]);
            find([
                (p[0] * q[0] + p[1] * q[2]) % 3,
                (p[0] * q[1] + p[1] * q[3]) % 3,
                (p[2] * q[0] + p[3] * q[2]) % 3,
                (p[2] * q[1] + p[3] * q[3]) % 3,
            ])
        },
        labels,
    )
}

/// Pairs (ε, v), ε ∈ Z2, v ∈ Z3 x Z3, with (ε, v)(δ, w) = (ε + δ, (-1)^δ v + w).
/// Encoded as `9ε + 3 v0 + v1`.
fn tv18(name: String) -> Result<FiniteGroup, GroupError> {
    let decode = |x: usize| (x / 9, (x / 3) % 3, x % 3);
    let labels = (0..18)
        .map(|x| {
            let (e, v0, v1) = decode(x);
            if x == 0 {
                "e".into()
            } else if e == 0 {
                format!("v{v0}{v1}")
            } else {
                format!("t{v0}{v1}")
            }
        })
        .collect();
    table(
        name,
        18,
        |a, b| {
            let (ea, a0, a1) = decode(a);
            let (eb, b0, b1) = decode(b);
            let (s0, s1) = if eb == 1 { ((3 - a0) % 3, (3 - a1) % 3) } else { (a0, a1) };
            ((ea + eb) % 2) * 9 + ((s0 + b0) % 3) * 3 + (s1 + b1) % 3
        },
        labels,
    )
}

/// Pairs (g, h) encoded as `g * |H| + h`.
fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let m = h.order();
    let n = g.order() * m;
    let labels = (0..n)
        .map(|x| {
            if x == 0 {
                "e".into()
            } else {
                format!("({},{})", g.label(x / m), h.label(x % m))
            }
        })
        .collect();
    table(
        format!("{}x{}", g.name(), h.name()),
        n,
        |a, b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m),
        labels,
    )
}
