//! Textual group specifications: `S4`, `S3xZ2`, `SL(2,3)`, `D8xZ3`, ...

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::MAX_ELEMENTS;

/// Largest degree accepted for symmetric and alternating families.
pub const MAX_PERMUTATION_DEGREE: usize = 8;

/// Parse tree of a group specification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum GroupSpec {
    /// `Zn`, cyclic of order n.
    Cyclic(usize),
    /// `Sn`, symmetric on n letters.
    Symmetric(usize),
    /// `An`, alternating on n letters.
    Alternating(usize),
    /// `Dn`, dihedral of order n (n even, at least 4).
    Dihedral(usize),
    /// `Qn`, dicyclic (generalized quaternion when n is a power of two) of
    /// order n, n divisible by 4 and at least 8. `Dicm` is accepted as an
    /// alias of `Q(4m)`.
    Dicyclic(usize),
    /// `SD16`.
    SemiDihedral16,
    /// `SL(2,3)`.
    SpecialLinear23,
    /// `TV18`: (Z3 x Z3) extended by an involution acting as inversion.
    Tv18,
    /// Direct product of two or more non-product factors, left to right.
    Product(Vec<GroupSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("parameter out of bounds at position {pos}: {message}")]
    Bounds { pos: usize, message: String },
}

impl GroupSpec {
    /// Order of the group this spec describes, computed without building it.
    pub fn order(&self) -> u128 {
        match self {
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) | GroupSpec::Dicyclic(n) => *n as u128,
            GroupSpec::Symmetric(n) => factorial(*n),
            GroupSpec::Alternating(n) => {
                if *n < 2 {
                    1
                } else {
                    factorial(*n) / 2
                }
            }
            GroupSpec::SemiDihedral16 => 16,
            GroupSpec::SpecialLinear23 => 24,
            GroupSpec::Tv18 => 18,
            GroupSpec::Product(fs) => fs.iter().map(GroupSpec::order).product(),
        }
    }

    /// Factors of a product, or the spec itself.
    pub fn factors(&self) -> &[GroupSpec] {
        match self {
            GroupSpec::Product(fs) => fs,
            other => std::slice::from_ref(other),
        }
    }

    pub fn is_permutation_family(&self) -> bool {
        matches!(self, GroupSpec::Symmetric(_) | GroupSpec::Alternating(_))
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "Z{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Dicyclic(n) => write!(f, "Q{n}"),
            GroupSpec::SemiDihedral16 => f.write_str("SD16"),
            GroupSpec::SpecialLinear23 => f.write_str("SL(2,3)"),
            GroupSpec::Tv18 => f.write_str("TV18"),
            GroupSpec::Product(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self, SpecError> {
        parse_group_spec(s)
    }
}

/// Parse `spec := term ("x" term)*`.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, SpecError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut factors = vec![p.term()?];
    while p.pos < p.src.len() {
        if p.src[p.pos] != b'x' {
            return Err(p.syntax("expected 'x' or end of input"));
        }
        p.pos += 1;
        factors.push(p.term()?);
    }
    if factors.len() == 1 {
        Ok(factors.pop().unwrap())
    } else {
        Ok(GroupSpec::Product(factors))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> SpecError {
        SpecError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<usize, SpecError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| SpecError::Syntax { pos: start, message: "integer too large".into() })
    }

    fn term(&mut self) -> Result<GroupSpec, SpecError> {
        let start = self.pos;
        let bounds = |message: String| SpecError::Bounds { pos: start, message };
        if self.eat("SL(2,3)") {
            return Ok(GroupSpec::SpecialLinear23);
        }
        if self.eat("SD16") {
            return Ok(GroupSpec::SemiDihedral16);
        }
        if self.eat("TV18") {
            return Ok(GroupSpec::Tv18);
        }
        if self.eat("Dic") {
            let m = self.int()?;
            if m < 2 || 4 * m > MAX_ELEMENTS {
                return Err(bounds(format!("Dic{m}: parameter must be in 2..={}", MAX_ELEMENTS / 4)));
            }
            return Ok(GroupSpec::Dicyclic(4 * m));
        }
        let Some(&head) = self.src.get(self.pos) else {
            return Err(self.syntax("expected a group term"));
        };
        self.pos += 1;
        let ctor: fn(usize) -> GroupSpec = match head {
            b'Z' => GroupSpec::Cyclic,
            b'S' => GroupSpec::Symmetric,
            b'A' => GroupSpec::Alternating,
            b'D' => GroupSpec::Dihedral,
            b'Q' => GroupSpec::Dicyclic,
            _ => {
                self.pos -= 1;
                return Err(self.syntax("unknown group family"));
            }
        };
        let n = self.int()?;
        let spec = ctor(n);
        match spec {
            GroupSpec::Cyclic(n) if n == 0 || n > MAX_ELEMENTS => {
                Err(bounds(format!("Z{n}: order must be in 1..={MAX_ELEMENTS}")))
            }
            GroupSpec::Symmetric(n) | GroupSpec::Alternating(n)
                if n == 0 || n > MAX_PERMUTATION_DEGREE =>
            {
                Err(bounds(format!("degree {n} must be in 1..={MAX_PERMUTATION_DEGREE}")))
            }
            GroupSpec::Dihedral(n) if n < 4 || n % 2 == 1 || n > MAX_ELEMENTS => Err(bounds(
                format!("D{n}: dihedral parameter must be an even group order in 4..={MAX_ELEMENTS}"),
            )),
            GroupSpec::Dicyclic(n) if n < 8 || n % 4 != 0 || n > MAX_ELEMENTS => Err(bounds(
                format!("Q{n}: dicyclic order must be a multiple of 4 in 8..={MAX_ELEMENTS}"),
            )),
            ok => Ok(ok),
        }
    }
}
