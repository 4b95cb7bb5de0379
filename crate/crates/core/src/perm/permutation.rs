use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use crate::{Error, Result};

/// A bijection on `{0, …, degree − 1}`, stored as its image list.
///
/// Products follow the "left factor first" convention: `(a * b)[p] = b[a[p]]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p >= n {
                return Err(Error::InvalidPermutation(alloc::format!(
                    "image {p} out of range for degree {n}"
                )));
            }
            if seen[p] {
                return Err(Error::InvalidPermutation(alloc::format!(
                    "point {p} is hit twice"
                )));
            }
            seen[p] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2], &[3, 4]]`.
    pub fn from_cycles<C: AsRef<[usize]>>(degree: usize, cycles: &[C]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (i, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::InvalidPermutation(alloc::format!(
                        "point {p} out of range for degree {degree}"
                    )));
                }
                if touched[p] {
                    return Err(Error::InvalidPermutation(alloc::format!(
                        "point {p} appears in more than one cycle position"
                    )));
                }
                touched[p] = true;
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint-cycle notation over 0-indexed points, e.g. `"(0 1 2)(3 4)"`.
    ///
    /// Whitespace is insensitive, commas are accepted as separators, and `()`
    /// or the empty string denote the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number: Option<(usize, usize)> = None;
        let bytes = text.as_bytes();
        let err = |offset: usize, message: &str| Error::Parse {
            offset,
            message: message.to_string(),
        };
        let mut i = 0;
        while i <= bytes.len() {
            let c = bytes.get(i).copied();
            match c {
                Some(b'0'..=b'9') => {
                    let d = (c.unwrap() - b'0') as usize;
                    number = Some(match number {
                        Some((start, v)) => (
                            start,
                            v.checked_mul(10)
                                .and_then(|v| v.checked_add(d))
                                .ok_or_else(|| err(start, "point index overflows"))?,
                        ),
                        None => (i, d),
                    });
                }
                _ => {
                    if let Some((start, v)) = number.take() {
                        match current.as_mut() {
                            Some(cycle) => cycle.push(v),
                            None => return Err(err(start, "point outside of a cycle")),
                        }
                    }
                    match c {
                        Some(b'(') => {
                            if current.is_some() {
                                return Err(err(i, "nested '('"));
                            }
                            current = Some(Vec::new());
                        }
                        Some(b')') => match current.take() {
                            Some(cycle) => cycles.push(cycle),
                            None => return Err(err(i, "unmatched ')'")),
                        },
                        Some(b',') | Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r') => {}
                        Some(_) => return Err(err(i, "unexpected character")),
                        None => {
                            if current.is_some() {
                                return Err(err(i, "unterminated cycle"));
                            }
                        }
                    }
                }
            }
            i += 1;
        }
        Self::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point]
    }

    #[inline]
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// First point moved by the permutation.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, p)| *i != **p)
            .map(|(i, _)| i)
    }

    /// `self · other` (apply `self` first); errors on degree mismatch.
    pub fn multiply(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { images: inv }
    }

    /// `self^k` for any integer `k`, computed along cycles.
    pub fn pow(&self, k: i64) -> Permutation {
        let n = self.degree();
        let mut out = vec![usize::MAX; n];
        let mut cycle = Vec::new();
        for start in 0..n {
            if out[start] != usize::MAX {
                continue;
            }
            cycle.clear();
            let mut p = start;
            loop {
                cycle.push(p);
                p = self.images[p];
                if p == start {
                    break;
                }
            }
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (i, &q) in cycle.iter().enumerate() {
                out[q] = cycle[(i + shift) % cycle.len()];
            }
        }
        Permutation { images: out }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // (g^-1 self g)[g[p]] = g[self[p]]
        let mut out = vec![0; self.degree()];
        for (p, &q) in self.images.iter().enumerate() {
            out[g.images[p]] = g.images[q];
        }
        Permutation { images: out }
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
        &(&a.inverse() * &b.inverse()) * &(a * b)
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut acc: u64 = 1;
        for cycle in self.cycles() {
            acc = num_integer::lcm(acc, cycle.len() as u64);
        }
        acc
    }

    /// Nontrivial cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Restriction to the block `offset..offset + len`, relabelled to `0..len`.
    ///
    /// The block must be invariant under `self`.
    pub fn restrict(&self, offset: usize, len: usize) -> Permutation {
        let images = self.images[offset..offset + len]
            .iter()
            .map(|&p| p - offset)
            .collect();
        Permutation::from_images_unchecked(images)
    }

    /// Concatenates coordinate permutations on disjoint consecutive blocks.
    pub fn concat<'a, I: IntoIterator<Item = &'a Permutation>>(parts: I) -> Permutation {
        let mut images = Vec::new();
        for part in parts {
            let offset = images.len();
            images.extend(part.images.iter().map(|&p| p + offset));
        }
        Permutation { images }
    }

    /// Acts on every point of `self` but applies `inner` to the block starting at `offset`.
    pub fn embed(inner: &Permutation, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<usize> = (0..degree).collect();
        for (i, &p) in inner.images.iter().enumerate() {
            images[offset + i] = offset + p;
        }
        Permutation { images }
    }

    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for cycle in cycles {
            s.push('(');
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                s.push_str(&p.to_string());
            }
            s.push(')');
        }
        s
    }
}

impl Mul<&Permutation> for &Permutation {
    type Output = Permutation;

    /// Panics on degree mismatch; use [`Permutation::multiply`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&p| rhs.images[p]).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn left_factor_is_applied_first() {
        let a = cyc(3, "(0 1 2)");
        let b = cyc(3, "(0 1)");
        // 0 -a-> 1 -b-> 0, 1 -a-> 2 -b-> 2, 2 -a-> 0 -b-> 1
        assert_eq!(&a * &b, cyc(3, "(1 2)"));
        assert_eq!(&b * &a, cyc(3, "(0 2)"));
    }

    #[test]
    fn inverse_and_identity() {
        let id = Permutation::identity(4);
        assert_eq!(id.inverse(), id);
        let a = cyc(5, "(0 1 2 3 4)");
        assert!((&a * &a.inverse()).is_identity());
        assert!((&a.inverse() * &a).is_identity());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert_eq!(
            a.multiply(&b),
            Err(Error::DegreeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn parse_and_display() {
        let p = cyc(6, " ( 3 4 )(0,1 , 2) ");
        assert_eq!(p.to_cycle_string(), "(0 1 2)(3 4)");
        assert_eq!(cyc(3, "").to_cycle_string(), "()");
        assert_eq!(cyc(3, "()"), Permutation::identity(3));
        assert!(Permutation::parse_cycles(3, "(0 3)").is_err());
        assert!(Permutation::parse_cycles(3, "(0 1)(1 2)").is_err());
        assert!(Permutation::parse_cycles(3, "(0 1").is_err());
        assert!(Permutation::parse_cycles(3, "0 1").is_err());
        assert!(Permutation::from_images(alloc::vec![0, 0, 1]).is_err());
    }

    #[test]
    fn pow_and_order() {
        let a = cyc(5, "(0 1 2 3 4)");
        assert_eq!(a.pow(2), cyc(5, "(0 2 4 1 3)"));
        assert_eq!(a.pow(-1), a.inverse());
        assert_eq!(a.pow(5), Permutation::identity(5));
        assert_eq!(cyc(5, "(0 1)(2 3 4)").order(), 6);
        assert_eq!(Permutation::identity(3).order(), 1);
    }

    #[test]
    fn commutator_convention() {
        let a = cyc(3, "(0 1 2)");
        let b = cyc(3, "(0 1)");
        let expected = &(&a.inverse() * &b.inverse()) * &(&a * &b);
        assert_eq!(Permutation::commutator(&a, &b), expected);
        assert_eq!(expected.order(), 3);
    }

    #[test]
    fn conjugation_matches_products() {
        let k = cyc(5, "(0 1 2)");
        let g = cyc(5, "(1 3 4)");
        assert_eq!(k.conjugate_by(&g), &(&g.inverse() * &k) * &g);
    }

    #[test]
    fn restrict_concat_embed() {
        let a = cyc(3, "(0 1)");
        let b = cyc(2, "(0 1)");
        let ab = Permutation::concat([&a, &b]);
        assert_eq!(ab, cyc(5, "(0 1)(3 4)"));
        assert_eq!(ab.restrict(3, 2), b);
        assert_eq!(Permutation::embed(&b, 3, 5), cyc(5, "(3 4)"));
    }
}
