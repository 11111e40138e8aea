//! Chains `x0 <= x1 <= ... <= xn`, i.e. simplices of the nerve.

use std::fmt;

use crate::error::{Error, Result};
use crate::poset::Poset;

/// An n-simplex of the nerve, stored as its vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Chain(Vec<usize>);

impl Chain {
    /// Wraps `vertices` without checking them against a poset.
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a chain has at least one vertex");
        Chain(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Simplicial dimension: number of vertices minus one.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// No two consecutive vertices coincide (a non-degenerate simplex).
    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// All vertices coincide (a constant chain).
    pub fn is_homogeneous(&self) -> bool {
        self.0.iter().all(|&v| v == self.0[0])
    }

    /// Adjacent vertices are related in `p`.
    pub fn is_valid_in(&self, p: &Poset) -> bool {
        self.0.iter().all(|&v| v < p.len()) && self.0.windows(2).all(|w| p.leq(w[0], w[1]))
    }

    /// Deletes vertex `i`.
    pub fn face(&self, i: usize) -> Result<Chain> {
        if self.length() == 0 || i > self.length() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.length(),
            });
        }
        let mut v = self.0.clone();
        v.remove(i);
        Ok(Chain(v))
    }

    /// Repeats vertex `i`.
    pub fn degeneracy(&self, i: usize) -> Result<Chain> {
        if i > self.length() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.length(),
            });
        }
        let mut v = self.0.clone();
        v.insert(i, self.0[i]);
        Ok(Chain(v))
    }

    /// Keeps the first `p + 1` vertices.
    pub fn front(&self, p: usize) -> Result<Chain> {
        if p > self.length() {
            return Err(Error::IndexOutOfRange {
                index: p,
                bound: self.length(),
            });
        }
        Ok(Chain(self.0[..=p].to_vec()))
    }

    /// Keeps the last `q + 1` vertices.
    pub fn back(&self, q: usize) -> Result<Chain> {
        if q > self.length() {
            return Err(Error::IndexOutOfRange {
                index: q,
                bound: self.length(),
            });
        }
        Ok(Chain(self.0[self.length() - q..].to_vec()))
    }

    /// Human-readable label: names concatenated when all are one character
    /// wide (`013`), comma separated otherwise.
    pub fn label(&self, p: &Poset) -> String {
        let names: Vec<&str> = self.0.iter().map(|&v| p.name(v)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// All chains with `n + 1` vertices, weakly increasing when `allow_repeats`
/// and strictly increasing otherwise, in lexicographic order of vertex
/// indices.
pub fn enumerate_chains(p: &Poset, n: usize, allow_repeats: bool) -> Vec<Chain> {
    fn extend(p: &Poset, n: usize, weak: bool, cur: &mut Vec<usize>, out: &mut Vec<Chain>) {
        if cur.len() == n + 1 {
            out.push(Chain(cur.clone()));
            return;
        }
        let candidates: Vec<usize> = match cur.last() {
            None => (0..p.len()).collect(),
            Some(&last) => p
                .up_set(last)
                .ones()
                .filter(|&b| weak || b != last)
                .collect(),
        };
        for b in candidates {
            cur.push(b);
            extend(p, n, weak, cur, out);
            cur.pop();
        }
    }

    let mut out = Vec::new();
    extend(p, n, allow_repeats, &mut Vec::with_capacity(n + 1), &mut out);
    out
}
