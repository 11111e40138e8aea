//! Finite posets with precomputed reachability.
//!
//! Elements are dense indices `0..len()`; every element carries a user-facing
//! name. The order is stored as one up-set and one down-set bitset per element,
//! so `leq` is a single bit probe. Covers (the Hasse diagram) are derived by
//! transitive reduction and kept sorted.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    neighbors: Vec<FixedBitSet>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds the poset generated by `relations` (pairs `a < b`) on the named
    /// elements. Relations need not be covers; the order is their
    /// reflexive-transitive closure.
    pub fn from_relations(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let m = names.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m];
        for &(a, b) in relations {
            for x in [a, b] {
                if x >= m {
                    return Err(Error::IndexOutOfRange { index: x, bound: m });
                }
            }
            if a != b {
                succ[a].push(b);
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }

        let order = topological_order(&succ).map_err(|cycle| Error::CyclicInput {
            cycle: cycle.into_iter().map(|i| names[i].clone()).collect(),
        })?;

        let mut up = vec![FixedBitSet::with_capacity(m); m];
        for &a in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(m);
            set.insert(a);
            for &b in &succ[a] {
                set.union_with(&up[b]);
            }
            up[a] = set;
        }
        Ok(Self::from_up_sets(names, up))
    }

    /// Builds a poset from an order predicate, auditing reflexivity,
    /// antisymmetry and transitivity.
    pub fn from_order<F>(names: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let m = names.len();
        let mut up = vec![FixedBitSet::with_capacity(m); m];
        for (a, set) in up.iter_mut().enumerate() {
            for b in 0..m {
                if leq(a, b) {
                    set.insert(b);
                }
            }
        }
        audit_order(&names, &up)?;
        Ok(Self::from_up_sets(names, up))
    }

    fn from_up_sets(names: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let m = names.len();
        let mut down = vec![FixedBitSet::with_capacity(m); m];
        for (a, set) in up.iter().enumerate() {
            for b in set.ones() {
                down[b].insert(a);
            }
        }

        // b covers a iff a < b with no witness strictly between them.
        let mut covers = Vec::new();
        let mut neighbors = vec![FixedBitSet::with_capacity(m); m];
        for a in 0..m {
            let mut strict_up = up[a].clone();
            strict_up.set(a, false);
            for b in strict_up.ones() {
                let mut between = strict_up.clone();
                between.intersect_with(&down[b]);
                between.set(b, false);
                if between.count_ones(..) == 0 {
                    covers.push((a, b));
                    neighbors[a].insert(b);
                    neighbors[b].insert(a);
                }
            }
        }
        covers.sort_unstable();

        Self {
            names,
            up,
            down,
            covers,
            neighbors,
        }
    }

    /// The chain `0 < 1 < ... < n`.
    pub fn chain(n: usize) -> Self {
        let names = (0..=n).map(|i| i.to_string()).collect();
        let rels: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
        Self::from_relations(names, &rels).expect("a chain is acyclic")
    }

    /// `m` pairwise incomparable elements.
    pub fn antichain(m: usize) -> Self {
        let names = (0..m).map(|i| i.to_string()).collect();
        Self::from_relations(names, &[]).expect("no relations")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{ b : a <= b }`
    pub fn up_set(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{ b : b <= a }`
    pub fn down_set(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// Cover pairs `(a, b)` with `b` covering `a`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements adjacent to `a` in the Hasse diagram.
    pub fn hasse_neighbors(&self, a: usize) -> &FixedBitSet {
        &self.neighbors[a]
    }

    /// All pairs `a <= b`, identities included, in lexicographic order.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.up[a].ones().map(move |b| (a, b)))
            .collect()
    }

    /// Number of strict pairs `a < b`.
    pub fn strict_relation_count(&self) -> usize {
        self.up.iter().map(|s| s.count_ones(..) - 1).sum()
    }

    /// Length of the longest chain of covers; 0 for an antichain or the
    /// empty poset.
    pub fn composition_length(&self) -> usize {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| self.down[a].count_ones(..));
        let mut height = vec![0usize; self.len()];
        for &b in &order {
            for a in self.down[b].ones() {
                if a != b {
                    height[b] = height[b].max(height[a] + 1);
                }
            }
        }
        height.into_iter().max().unwrap_or(0)
    }

    /// Connected components of the comparability graph restricted to
    /// `subset`, each sorted, emitted in order of smallest member.
    pub fn connected_components(&self, subset: &[usize]) -> Result<Vec<Vec<usize>>> {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for &x in subset {
            if x >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    bound: self.len(),
                });
            }
            bits.insert(x);
        }
        Ok(self
            .components_of(&bits)
            .into_iter()
            .map(|c| c.ones().collect())
            .collect())
    }

    /// Bitset form of [`Poset::connected_components`].
    pub fn components_of(&self, subset: &FixedBitSet) -> Vec<FixedBitSet> {
        let m = self.len();
        let mut remaining = subset.clone();
        let mut out = Vec::new();
        while let Some(seed) = remaining.ones().next() {
            let mut comp = FixedBitSet::with_capacity(m);
            comp.insert(seed);
            remaining.set(seed, false);
            let mut queue = VecDeque::from([seed]);
            while let Some(x) = queue.pop_front() {
                let mut next = self.up[x].clone();
                next.union_with(&self.down[x]);
                next.intersect_with(&remaining);
                for y in next.ones() {
                    remaining.set(y, false);
                    comp.insert(y);
                    queue.push_back(y);
                }
            }
            out.push(comp);
        }
        out
    }

    /// Elements lying between two members of `subset`.
    pub fn convex_hull(&self, subset: &FixedBitSet) -> FixedBitSet {
        let m = self.len();
        let mut above = FixedBitSet::with_capacity(m);
        let mut below = FixedBitSet::with_capacity(m);
        for x in subset.ones() {
            above.union_with(&self.up[x]);
            below.union_with(&self.down[x]);
        }
        above.intersect_with(&below);
        above
    }

    /// Parses the line-oriented poset format.
    ///
    /// ```text
    /// # comment
    /// element a
    /// rel a b
    /// ```
    ///
    /// `rel A B` declares `A < B`; names not declared with `element` are
    /// declared in order of first appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut rels = Vec::new();

        fn intern(name: &str, names: &mut Vec<String>, index: &mut HashMap<String, usize>) -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        }

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            match tokens.as_slice() {
                ["element", name] => {
                    if index.contains_key(*name) {
                        return Err(Error::DuplicateElement {
                            name: name.to_string(),
                            line,
                        });
                    }
                    intern(name, &mut names, &mut index);
                }
                ["rel", a, b] => {
                    if a == b {
                        return Err(Error::Syntax {
                            line,
                            message: format!("`{a}` cannot be strictly below itself"),
                        });
                    }
                    let ia = intern(a, &mut names, &mut index);
                    let ib = intern(b, &mut names, &mut index);
                    rels.push((ia, ib));
                }
                [kw, ..] if *kw == "element" || *kw == "rel" => {
                    return Err(Error::Syntax {
                        line,
                        message: format!("wrong number of arguments to `{kw}`"),
                    });
                }
                [kw, ..] => {
                    return Err(Error::Syntax {
                        line,
                        message: format!("unknown directive `{kw}`"),
                    });
                }
                [] => unreachable!(),
            }
        }
        Self::from_relations(names, &rels)
    }

    /// Serializes to the text format: every element, then every cover.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "element {name}");
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "rel {} {}", self.names[a], self.names[b]);
        }
        out
    }
}

/// Kahn's algorithm; on failure returns one directed cycle.
fn topological_order(succ: &[Vec<usize>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let m = succ.len();
    let mut indeg = vec![0usize; m];
    for s in succ {
        for &b in s {
            indeg[b] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..m).filter(|&a| indeg[a] == 0).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for &b in &succ[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push_back(b);
            }
        }
    }
    if order.len() == m {
        return Ok(order);
    }

    // Every leftover vertex has a leftover successor; walk until a repeat.
    let leftover: Vec<bool> = (0..m).map(|a| indeg[a] > 0).collect();
    let start = (0..m).find(|&a| leftover[a]).expect("some vertex is left");
    let mut seen = vec![usize::MAX; m];
    let mut path = Vec::new();
    let mut cur = start;
    while seen[cur] == usize::MAX {
        seen[cur] = path.len();
        path.push(cur);
        cur = *succ[cur]
            .iter()
            .find(|&&b| leftover[b])
            .expect("leftover vertex has a leftover successor");
    }
    let mut cycle = path.split_off(seen[cur]);
    cycle.push(cur);
    Err(cycle)
}

fn audit_order(names: &[String], up: &[FixedBitSet]) -> Result<()> {
    for (a, set) in up.iter().enumerate() {
        if !set.contains(a) {
            return Err(Error::NotAPartialOrder(format!("`{}` is not reflexive", names[a])));
        }
        for b in set.ones() {
            if b != a && up[b].contains(a) {
                return Err(Error::NotAPartialOrder(format!(
                    "`{}` and `{}` violate antisymmetry",
                    names[a], names[b]
                )));
            }
            if !up[b].is_subset(set) {
                return Err(Error::NotAPartialOrder(format!(
                    "transitivity fails through `{}` <= `{}`",
                    names[a], names[b]
                )));
            }
        }
    }
    Ok(())
}
