//! Intervals: nonempty, convex, connected full subposets.
//!
//! In a poset the subcategory spanned by a convex set of objects is full, so
//! an interval is determined by its support alone and is stored as a bitset
//! over the ambient poset.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poset::Poset;

/// Default bound on the number of intervals enumerated for one poset.
pub const DEFAULT_INTERVAL_CAP: usize = 5_000_000;

/// A support set in some ambient poset. Ordered by size, then
/// lexicographically by sorted members.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    support: FixedBitSet,
}

impl Interval {
    pub fn from_bits(support: FixedBitSet) -> Self {
        Interval { support }
    }

    /// Builds the support over an ambient poset of `ambient_len` elements.
    pub fn from_members(ambient_len: usize, members: &[usize]) -> Self {
        let mut support = FixedBitSet::with_capacity(ambient_len);
        for &m in members {
            support.insert(m);
        }
        Interval { support }
    }

    /// The whole poset, when it is connected and nonempty.
    pub fn whole(p: &Poset) -> Self {
        let mut support = FixedBitSet::with_capacity(p.len());
        support.insert_range(..);
        Interval { support }
    }

    pub fn singleton(ambient_len: usize, x: usize) -> Self {
        Self::from_members(ambient_len, &[x])
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.support
    }

    pub fn members(&self) -> Vec<usize> {
        self.support.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.support.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.support.contains(x)
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.support.ones().cmp(other.support.ones()))
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorts into basis order (size, then lexicographic support).
pub fn sort_intervals(intervals: &mut [Interval]) {
    intervals.par_sort_by_cached_key(|iv| (iv.len(), iv.members()));
}

/// Decides the interval property directly from the definition: nonempty,
/// every element between two members is a member, and the members are
/// connected through comparabilities among themselves.
pub fn is_interval(p: &Poset, subset: &FixedBitSet) -> bool {
    let members: Vec<usize> = subset.ones().filter(|&x| x < p.len()).collect();
    if members.is_empty() || members.len() != subset.count_ones(..) {
        return false;
    }
    for &a in &members {
        for &c in &members {
            if !p.leq(a, c) {
                continue;
            }
            for b in 0..p.len() {
                if p.leq(a, b) && p.leq(b, c) && !subset.contains(b) {
                    return false;
                }
            }
        }
    }
    let mut reached = vec![false; members.len()];
    reached[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..members.len() {
            if !reached[j] && p.comparable(members[i], members[j]) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// A convex set together with its up- and down-closures, which make the
/// convex hull of a one-element extension a constant-time bitset update.
struct Grown {
    set: FixedBitSet,
    above: FixedBitSet,
    below: FixedBitSet,
}

/// Enumerates every interval of `p` exactly once, in basis order.
///
/// Each interval is grown from its smallest member: starting from the
/// singleton, repeatedly add a Hasse neighbour and take the convex hull,
/// discarding any set whose hull reaches below the seed. Every interval is
/// reachable this way because a connected convex set contains a Hasse edge
/// leaving any proper convex connected subset of it.
pub fn enumerate_intervals(p: &Poset, cap: usize) -> Result<Vec<Interval>> {
    let m = p.len();
    let total = AtomicUsize::new(0);

    let per_seed: Vec<Result<Vec<FixedBitSet>>> = (0..m)
        .into_par_iter()
        .map(|seed| {
            let mut below_seed = FixedBitSet::with_capacity(m);
            below_seed.insert_range(..seed);

            let mut start = FixedBitSet::with_capacity(m);
            start.insert(seed);
            let mut seen: HashSet<FixedBitSet> = HashSet::new();
            seen.insert(start.clone());
            if total.fetch_add(1, AtomicOrdering::Relaxed) + 1 > cap {
                return Err(Error::IntervalExplosion { cap });
            }
            let mut stack = vec![Grown {
                set: start,
                above: p.up_set(seed).clone(),
                below: p.down_set(seed).clone(),
            }];

            while let Some(g) = stack.pop() {
                let mut frontier = FixedBitSet::with_capacity(m);
                for x in g.set.ones() {
                    frontier.union_with(p.hasse_neighbors(x));
                }
                frontier.difference_with(&g.set);
                frontier.difference_with(&below_seed);

                for x in frontier.ones() {
                    let mut above = g.above.clone();
                    above.union_with(p.up_set(x));
                    let mut below = g.below.clone();
                    below.union_with(p.down_set(x));
                    let mut hull = above.clone();
                    hull.intersect_with(&below);
                    if !hull.is_disjoint(&below_seed) || seen.contains(&hull) {
                        continue;
                    }
                    if total.fetch_add(1, AtomicOrdering::Relaxed) + 1 > cap {
                        return Err(Error::IntervalExplosion { cap });
                    }
                    seen.insert(hull.clone());
                    stack.push(Grown {
                        set: hull,
                        above,
                        below,
                    });
                }
            }
            Ok(seen.into_iter().collect())
        })
        .collect();

    let mut out = Vec::new();
    for r in per_seed {
        out.extend(r?.into_iter().map(Interval::from_bits));
    }
    sort_intervals(&mut out);
    Ok(out)
}
