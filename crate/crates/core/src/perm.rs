//! Permutations on `{0, .., degree - 1}` and cycle notation.
//!
//! Products are read left to right: `a.compose(&b)` applies `a` first, then
//! `b`, so the image of `i` is `b(a(i))`. Cycle notation is 1-based on the
//! way in and on the way out.

use std::fmt;

use crate::error::{Error, Result};

pub type Point = u16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<Point>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n {
                return Err(Error::InvalidParams(format!("image {i} out of range for degree {n}")));
            }
            if seen[i] {
                return Err(Error::InvalidParams(format!("image {i} repeated")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as Point;
        }
        Permutation { images }
    }

    /// Least `k >= 1` with `self^k` the identity: the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, num_integer::lcm)
    }

    /// Nontrivial cycles, each starting at its smallest point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Parses 1-based cycle notation such as `"(1,2)(3,4)"` or `"()"`.
    ///
    /// The listed cycles are multiplied left to right. A point may occur in
    /// at most one cycle.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        if degree == 0 {
            return Err(Error::InvalidParams("degree must be at least 1".into()));
        }
        if degree > Point::MAX as usize {
            return Err(Error::DegreeCap {
                degree,
                cap: Point::MAX as usize,
            });
        }
        let mut parser = CycleParser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let mut used = vec![false; degree];
        let mut result = Permutation::identity(degree);
        let mut any = false;
        loop {
            parser.skip_ws();
            if parser.at_end() {
                break;
            }
            let cycle = parser.cycle(degree)?;
            any = true;
            for &(p, offset) in &cycle {
                if used[p] {
                    return Err(Error::Parse {
                        offset,
                        message: format!("point {} repeated", p + 1),
                    });
                }
                used[p] = true;
            }
            if cycle.len() > 1 {
                let mut images: Vec<Point> = (0..degree as Point).collect();
                for w in 0..cycle.len() {
                    let from = cycle[w].0;
                    let to = cycle[(w + 1) % cycle.len()].0;
                    images[from] = to as Point;
                }
                result = result.compose_unchecked(&Permutation { images });
            }
        }
        if !any {
            return Err(Error::Parse {
                offset: 0,
                message: "expected a cycle such as \"()\"".into(),
            });
        }
        Ok(result)
    }
}

struct CycleParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl CycleParser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else if self.at_end() {
            self.err(format!("expected '{}', found end of input", b as char))
        } else {
            self.err(format!(
                "expected '{}', found '{}'",
                b as char, self.bytes[self.pos] as char
            ))
        }
    }

    /// One parenthesized cycle; returns 0-based points with their offsets.
    fn cycle(&mut self, degree: usize) -> Result<Vec<(usize, usize)>> {
        self.expect(b'(')?;
        let mut points = Vec::new();
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b')') {
            self.pos += 1;
            return Ok(points);
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return if self.at_end() {
                    self.err("expected a point, found end of input")
                } else {
                    self.err(format!("expected a point, found '{}'", self.bytes[self.pos] as char))
                };
            }
            let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
            let value: usize = digits.parse().map_err(|_| Error::Parse {
                offset: start,
                message: format!("point {digits} too large"),
            })?;
            if value == 0 || value > degree {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("point {value} out of range 1..={degree}"),
                });
            }
            if points.iter().any(|&(p, _)| p == value - 1) {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("point {value} repeated"),
                });
            }
            points.push((value - 1, start));
            self.skip_ws();
            match self.bytes.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(points);
                }
                Some(&c) => return self.err(format!("expected ',' or ')', found '{}'", c as char)),
                None => return self.err("expected ',' or ')', found end of input"),
            }
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn four_cycle_fixes_first_point() {
        let x = p("(2,3,4,5)", 5);
        assert_eq!(x.images(), &[0, 2, 3, 4, 1]);
        assert_eq!(x.order(), 4);
        assert_eq!(x.to_string(), "(2,3,4,5)");
    }

    #[test]
    fn empty_cycle_is_identity() {
        assert!(p("()", 4).is_identity());
        assert!(p(" ( ) ", 4).is_identity());
    }

    #[test]
    fn double_transposition() {
        let d = p("(1,2)(3,4)", 4);
        assert_eq!(d.images(), &[1, 0, 3, 2]);
        assert_eq!(d.order(), 2);
    }

    #[test]
    fn five_cycle_order() {
        assert_eq!(p("(1,2,3,5,4)", 5).order(), 5);
    }

    #[test]
    fn compose_left_to_right() {
        // (1,2) then (1,3): 1 -> 2 -> 2, 2 -> 1 -> 3, 3 -> 3 -> 1
        let a = p("(1,2)", 3);
        let b = p("(1,3)", 3);
        assert_eq!(a.compose(&b).unwrap(), p("(1,2,3)", 3));
    }

    #[test]
    fn compose_with_inverse() {
        let a = p("(1,4,2)(3,5)", 5);
        assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn degree_mismatch() {
        assert_eq!(p("(1,2)", 2).compose(&p("(1,2)", 3)), Err(Error::DegreeMismatch(2, 3)));
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("(1,2", 4, 4),
            ("(1,,2)", 4, 3),
            ("(1,5)", 4, 3),
            ("(0,1)", 4, 1),
            ("(1,2,1)", 4, 5),
            ("1,2", 4, 0),
            ("", 4, 0),
        ];
        for (text, n, offset) in cases {
            match Permutation::parse_cycles(text, n) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn repeated_point_across_cycles() {
        assert!(matches!(
            Permutation::parse_cycles("(1,2)(2,3)", 3),
            Err(Error::Parse { offset: 6, .. })
        ));
    }

    #[test]
    fn from_images_rejects_non_bijection() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }
}
