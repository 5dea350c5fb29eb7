//! Permutations of `{0, 1, ..., n-1}` stored as image arrays.
//!
//! Points are 0-based in memory and in the library API; all *textual*
//! interfaces (cycle notation, group files, reports) are 1-based, matching
//! the convention of the group file format.
//!
//! Composition is left-to-right: `a.then(&b)` applies `a` first, then `b`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from an image array, validating bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let img = img as usize;
            if img >= n {
                return Err(Error::PointOutOfRange {
                    point: img + 1,
                    degree: n,
                });
            }
            if seen[img] {
                return Err(Error::NotAPermutation(format!(
                    "point {} hit twice",
                    img + 1
                )));
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles of
    /// 0-based points. Repeated points are rejected.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cyc in cycles {
            for (i, &pt) in cyc.iter().enumerate() {
                if pt >= degree {
                    return Err(Error::PointOutOfRange {
                        point: pt + 1,
                        degree,
                    });
                }
                if seen[pt] {
                    return Err(Error::NotAPermutation(format!(
                        "point {} appears twice in cycle notation",
                        pt + 1
                    )));
                }
                seen[pt] = true;
                let next = cyc[(i + 1) % cyc.len()];
                images[pt] = next as u32;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, pt: usize) -> usize {
        self.images[pt] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// `self` applied first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&m| other.images[m as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Conjugate `self^g = g^-1 * self * g` (left-to-right application).
    ///
    /// Maps `g(a) -> g(b)` wherever `self` maps `a -> b`.
    pub fn conj(&self, g: &Permutation) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            images[g.images[a] as usize] = g.images[b as usize];
        }
        Permutation { images }
    }

    /// Commutator `self^-1 * other^-1 * self * other`.
    pub fn comm(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    pub fn pow(&self, n: i64) -> Permutation {
        let deg = self.degree();
        if n == 0 {
            return Permutation::identity(deg);
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Permutation::identity(deg);
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.then(&sq);
        }
        acc
    }

    /// Order of the permutation: lcm of its cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut pt = start;
            while !seen[pt] {
                seen[pt] = true;
                pt = self.apply(pt);
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    pub fn moves(&self, pt: usize) -> bool {
        self.images[pt] != pt as u32
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&p| self.moves(p)).collect()
    }

    /// Nontrivial cycles, each rotated to start at its least point and sorted
    /// by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || !self.moves(start) {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut pt = start;
            while !seen[pt] {
                seen[pt] = true;
                cyc.push(pt);
                pt = self.apply(pt);
            }
            out.push(cyc);
        }
        out
    }

    /// Multiset of cycle lengths as sorted (length, count) pairs, fixed points
    /// included. A conjugation invariant.
    pub fn cycle_type(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut pt = start;
            while !seen[pt] {
                seen[pt] = true;
                pt = self.apply(pt);
                len += 1;
            }
            *counts.entry(len).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    /// Length of the cycle through `pt`.
    pub fn cycle_len_at(&self, pt: usize) -> usize {
        let mut len = 1;
        let mut q = self.apply(pt);
        while q != pt {
            q = self.apply(q);
            len += 1;
        }
        len
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Parses disjoint-cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`.
/// The identity is written `()`.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
    let err = |msg: String| Error::Parse { line: 0, msg };
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c != '(' {
            return Err(err(format!("expected '(' but found '{c}'")));
        }
        chars.next();
        let mut cyc: Vec<usize> = Vec::new();
        let mut num = String::new();
        loop {
            match chars.next() {
                Some(d) if d.is_ascii_digit() => num.push(d),
                Some(',') => {
                    if num.is_empty() {
                        return Err(err("empty entry in cycle".into()));
                    }
                    cyc.push(parse_point(&num, degree)?);
                    num.clear();
                }
                Some(')') => {
                    if !num.is_empty() {
                        cyc.push(parse_point(&num, degree)?);
                        num.clear();
                    } else if !cyc.is_empty() {
                        return Err(err("trailing comma in cycle".into()));
                    }
                    break;
                }
                Some(w) if w.is_whitespace() => continue,
                Some(other) => {
                    return Err(err(format!("unexpected character '{other}' in cycle")));
                }
                None => return Err(err("unterminated cycle".into())),
            }
        }
        if cyc.len() == 1 {
            return Err(err(format!("cycle of length 1 at point {}", cyc[0] + 1)));
        }
        if !cyc.is_empty() {
            cycles.push(cyc);
        }
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| match e {
        Error::NotAPermutation(msg) => err(msg),
        Error::PointOutOfRange { point, degree } => {
            err(format!("point {point} exceeds degree {degree}"))
        }
        other => other,
    })
}

fn parse_point(num: &str, degree: usize) -> Result<usize> {
    let v: usize = num.parse().map_err(|_| Error::Parse {
        line: 0,
        msg: format!("invalid point '{num}'"),
    })?;
    if v == 0 {
        return Err(Error::Parse {
            line: 0,
            msg: "points are 1-based; 0 is not a point".into(),
        });
    }
    if v > degree {
        return Err(Error::Parse {
            line: 0,
            msg: format!("point {v} exceeds degree {degree}"),
        });
    }
    Ok(v - 1)
}

impl fmt::Display for Permutation {
    /// Disjoint-cycle notation, 1-based. The identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, pt) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", pt + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, deg: usize) -> Permutation {
        parse_cycles(s, deg).unwrap()
    }

    #[test]
    fn compose_left_to_right() {
        // (1,2,3) then (1,2) = (2,3)
        let a = p("(1,2,3)", 3);
        let b = p("(1,2)", 3);
        assert_eq!(a.then(&b), p("(2,3)", 3));
    }

    #[test]
    fn inverse_of_three_cycle() {
        assert_eq!(p("(1,2,3)", 3).inverse(), p("(1,3,2)", 3));
        let a = p("(1,4,2,5)(3,6)", 6);
        assert!(a.inverse().then(&a).is_identity());
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        assert_eq!(p("(1,2)(3,4,5)", 5).order(), 6);
        assert_eq!(Permutation::identity(4).order(), 1);
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let x = p("(1,2,3)", 4);
        let g = p("(1,4)", 4);
        assert_eq!(x.conj(&g), p("(4,2,3)", 4));
        // x^g should equal g^-1 * x * g
        assert_eq!(x.conj(&g), g.inverse().then(&x).then(&g));
    }

    #[test]
    fn parse_rejects_duplicates_and_range() {
        assert!(parse_cycles("(1,2,2)", 3).is_err());
        assert!(parse_cycles("(1,5)", 3).is_err());
        assert!(parse_cycles("(0,1)", 3).is_err());
        assert!(parse_cycles("()", 3).unwrap().is_identity());
    }

    #[test]
    fn display_round_trip() {
        let x = p("(1,3)(2,5,4)", 6);
        assert_eq!(parse_cycles(&x.to_string(), 6).unwrap(), x);
    }

    #[test]
    fn parity() {
        assert!(p("(1,2,3)", 3).is_even());
        assert!(!p("(1,2)", 3).is_even());
        assert!(p("(1,2)(3,4)", 4).is_even());
    }
}
