//! Virtual classes: integer combinations of interval modules on one level.
//!
//! Pulling an interval module back along a monotone map gives the indicator
//! module of the preimage, which splits as the direct sum of the interval
//! modules on its connected components. Everything here is that one fact
//! applied linearly.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::levels::{LevelPoset, LevelTower, ObjectMap, StructureKind, Variant};
use crate::poset::Poset;

/// A finite integer combination of intervals of one level poset.
#[derive(Clone, Debug)]
pub struct VirtualClass {
    level: Arc<LevelPoset>,
    coeffs: BTreeMap<Interval, i64>,
}

impl PartialEq for VirtualClass {
    fn eq(&self, other: &Self) -> bool {
        same_level(&self.level, &other.level) && self.coeffs == other.coeffs
    }
}

impl Eq for VirtualClass {}

fn same_level(a: &LevelPoset, b: &LevelPoset) -> bool {
    a.level() == b.level() && a.variant() == b.variant() && Arc::ptr_eq(a.base(), b.base())
}

impl VirtualClass {
    pub fn zero(level: Arc<LevelPoset>) -> Self {
        Self {
            level,
            coeffs: BTreeMap::new(),
        }
    }

    /// The class of one interval module.
    pub fn interval(level: Arc<LevelPoset>, q: Interval) -> Self {
        let mut x = Self::zero(level);
        x.add_term(q, 1);
        x
    }

    /// The class of the interval module with support `members`, which must
    /// be an interval of the level poset.
    pub fn from_members(level: Arc<LevelPoset>, members: &[Chain]) -> Result<Self> {
        let idx = members
            .iter()
            .map(|c| {
                level.index_of(c).ok_or_else(|| Error::UnknownName {
                    name: c.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let q = Interval::from_members(level.len(), &idx);
        if !crate::interval::is_interval(level.order(), q.bits()) {
            return Err(Error::ConvexityViolation);
        }
        Ok(Self::interval(level, q))
    }

    pub fn from_terms(level: Arc<LevelPoset>, terms: impl IntoIterator<Item = (Interval, i64)>) -> Self {
        let mut x = Self::zero(level);
        for (q, c) in terms {
            x.add_term(q, c);
        }
        x
    }

    pub fn level(&self) -> &Arc<LevelPoset> {
        &self.level
    }

    pub fn degree(&self) -> usize {
        self.level.level()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Interval, i64)> {
        self.coeffs.iter().map(|(q, &c)| (q, c))
    }

    pub fn coefficient(&self, q: &Interval) -> i64 {
        self.coeffs.get(q).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, q: Interval, c: i64) {
        if c == 0 {
            return;
        }
        match self.coeffs.entry(q) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_same_level(&self, other: &Self) -> Result<()> {
        if same_level(&self.level, &other.level) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "classes on {} level {} and {} level {}",
                self.level.variant(),
                self.level.level(),
                other.level.variant(),
                other.level.level()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_level(other)?;
        let mut x = self.clone();
        for (q, c) in other.terms() {
            x.add_term(q.clone(), c);
        }
        Ok(x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(
            self.level.clone(),
            self.terms().map(|(q, c)| (q.clone(), c * k)),
        )
    }

    /// Pointwise dimension of the virtual module at every object.
    pub fn dimension_vector(&self) -> Vec<i64> {
        let mut v = vec![0; self.level.len()];
        for (q, c) in self.terms() {
            for x in q.bits().ones() {
                v[x] += c;
            }
        }
        v
    }

    /// Pullback along `f`, whose target must be this class's level.
    pub fn pullback(&self, f: &ObjectMap) -> Result<Self> {
        if !same_level(&self.level, f.target()) {
            return Err(Error::ContextMismatch(format!(
                "pullback along {} expects a class on level {}",
                f.kind(),
                f.target().level()
            )));
        }
        let mut x = Self::zero(f.source().clone());
        for (q, c) in self.terms() {
            for comp in pullback_components(q, f)? {
                x.add_term(comp, c);
            }
        }
        Ok(x)
    }

    /// Coordinates in an interval basis, or `None` if a term is missing.
    pub fn coordinates(&self, basis_index: &HashMap<Interval, usize>, dim: usize) -> Option<Vec<i64>> {
        let mut v = vec![0; dim];
        for (q, c) in self.terms() {
            v[*basis_index.get(q)?] = c;
        }
        Some(v)
    }
}

/// Connected components of `f⁻¹(support(q))`, each audited for convexity.
pub fn pullback_components(q: &Interval, f: &ObjectMap) -> Result<Vec<Interval>> {
    let source = f.source();
    let mut preimage = FixedBitSet::with_capacity(source.len());
    for (x, &y) in f.images().iter().enumerate() {
        if q.contains(y) {
            preimage.insert(x);
        }
    }
    let comps = split_components(source.order(), &preimage)?;
    if source.variant() == Variant::TildeE && matches!(f.kind(), StructureKind::Face(_)) {
        debug_assert!(
            comps.len() <= 1,
            "disconnected face preimage in a tildeE context"
        );
    }
    Ok(comps)
}

/// Splits a convex subset into component intervals, auditing each.
fn split_components(order: &Poset, subset: &FixedBitSet) -> Result<Vec<Interval>> {
    order
        .components_of(subset)
        .into_iter()
        .map(|comp| {
            if order.convex_hull(&comp) != comp {
                return Err(Error::ConvexityViolation);
            }
            Ok(Interval::from_bits(comp))
        })
        .collect()
}

/// The class of the pullback of one interval module along `f`.
pub fn pullback_class(q: &Interval, f: &ObjectMap) -> Result<VirtualClass> {
    Ok(VirtualClass::from_terms(
        f.source().clone(),
        pullback_components(q, f)?.into_iter().map(|c| (c, 1)),
    ))
}

/// `d x = Σ_i (-1)^i δ^i x`, landing on level `n + 1` of `tower`.
pub fn coboundary_class(x: &VirtualClass, tower: &LevelTower) -> Result<VirtualClass> {
    let n = x.degree();
    let target = tower.level(n + 1)?.clone();
    let mut out = VirtualClass::zero(target);
    for i in 0..=n + 1 {
        let face = tower.face(n, i)?;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out = out.add(&x.pullback(face)?.scale(sign))?;
    }
    Ok(out)
}

/// The unit: the sum of the connected components of level 0, i.e. the class
/// of the constant module.
pub fn unit_class(tower: &LevelTower) -> Result<VirtualClass> {
    let level0 = tower.level(0)?.clone();
    let mut all = FixedBitSet::with_capacity(level0.len());
    all.insert_range(..);
    let comps = split_components(level0.order(), &all)?;
    Ok(VirtualClass::from_terms(level0, comps.into_iter().map(|c| (c, 1))))
}

/// Cup product of a level-`p` class with a level-`q` class.
pub fn cup(a: &VirtualClass, b: &VirtualClass, tower: &LevelTower) -> Result<VirtualClass> {
    let (p, q) = (a.degree(), b.degree());
    let top = tower.level(p + q)?.clone();
    for x in [a, b] {
        if !same_level(x.level(), tower.level(x.degree())?) {
            return Err(Error::ContextMismatch("cup operands belong to another tower".into()));
        }
    }
    let front = tower.structure_map(p + q, StructureKind::Front(p))?;
    let back = tower.structure_map(p + q, StructureKind::Back(q))?;
    let mut out = VirtualClass::zero(top.clone());
    for (qa, ca) in a.terms() {
        let pa = preimage(qa, &front);
        for (qb, cb) in b.terms() {
            let mut both = preimage(qb, &back);
            both.intersect_with(&pa);
            if both.is_clear() {
                continue;
            }
            for comp in split_components(top.order(), &both)? {
                out.add_term(comp, ca * cb);
            }
        }
    }
    Ok(out)
}

fn preimage(q: &Interval, f: &ObjectMap) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(f.source().len());
    for (x, &y) in f.images().iter().enumerate() {
        if q.contains(y) {
            s.insert(x);
        }
    }
    s
}

/// Rank invariant of a level-0 class: for each related pair `a <= b`, the
/// signed number of terms whose support holds both endpoints.
pub fn rank_invariant(x: &VirtualClass) -> Result<BTreeMap<(usize, usize), i64>> {
    if x.degree() != 0 {
        return Err(Error::LevelMismatch {
            kind: "rank invariant".into(),
            source_level: x.degree(),
            target_level: 0,
        });
    }
    let order = x.level().order();
    let mut out = BTreeMap::new();
    for (a, b) in order.relations() {
        let v: i64 = x
            .terms()
            .filter(|(q, _)| q.contains(a) && q.contains(b))
            .map(|(_, c)| c)
            .sum();
        out.insert((a, b), v);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentRule {
    /// Components of the level-1 poset of the compositional variant.
    Line,
    /// Components of the level-1 poset of the pointwise variant.
    Square,
}

/// Partition of the strict 1-chains into line or square components.
pub fn morphism_components(base: Arc<Poset>, rule: ComponentRule) -> Result<Vec<Vec<Chain>>> {
    let variant = match rule {
        ComponentRule::Line => Variant::CheckG,
        ComponentRule::Square => Variant::CheckE,
    };
    let level = LevelPoset::new(base, variant, 1)?;
    let mut all = FixedBitSet::with_capacity(level.len());
    all.insert_range(..);
    Ok(level
        .order()
        .components_of(&all)
        .into_iter()
        .map(|c| c.ones().map(|i| level.object(i).clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: Poset, v: Variant, top: usize) -> LevelTower {
        LevelTower::new(Arc::new(p), v, top).unwrap()
    }

    fn singleton(level: &Arc<LevelPoset>, v: &[usize]) -> Interval {
        let i = level.index_of(&Chain::new(v.to_vec())).unwrap();
        Interval::singleton(level.len(), i)
    }

    fn chains_of(x: &VirtualClass) -> Vec<(Vec<Vec<usize>>, i64)> {
        x.terms()
            .map(|(q, c)| {
                (
                    q.members()
                        .iter()
                        .map(|&i| x.level().object(i).vertices().to_vec())
                        .collect(),
                    c,
                )
            })
            .collect()
    }

    #[test]
    fn face_one_splits_into_two_singletons() {
        let t = tower(Poset::chain(1), Variant::TildeG, 2);
        let l1 = t.level(1).unwrap();
        let x = pullback_class(&singleton(l1, &[0, 1]), t.face(1, 1).unwrap()).unwrap();
        let mut got = chains_of(&x);
        got.sort();
        assert_eq!(got, vec![(vec![vec![0, 0, 1]], 1), (vec![vec![0, 1, 1]], 1)]);
    }

    #[test]
    fn face_zero_prepends_lower_vertices() {
        let n = 4;
        let t = tower(Poset::chain(n), Variant::TildeG, 2);
        let l1 = t.level(1).unwrap();
        for i in 0..=n {
            for j in i..=n {
                if i == j {
                    continue;
                }
                let x = pullback_class(&singleton(l1, &[i, j]), t.face(1, 0).unwrap()).unwrap();
                let mut got: Vec<_> = chains_of(&x).into_iter().map(|(s, _)| s).collect();
                got.sort();
                let want: Vec<_> = (0..=i).map(|a| vec![vec![a, i, j]]).collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn whole_pulls_back_to_whole_components() {
        let t = tower(Poset::chain(3), Variant::CheckG, 2);
        let l1 = t.level(1).unwrap().clone();
        let mut all = FixedBitSet::with_capacity(l1.len());
        all.insert_range(..);
        let comps = split_components(l1.order(), &all).unwrap();
        assert_eq!(comps.len(), 2);
        let l0 = t.level(0).unwrap();
        let x = pullback_class(&Interval::whole(l0.order()), t.face(0, 0).unwrap()).unwrap();
        assert_eq!(x, VirtualClass::from_terms(l1, comps.into_iter().map(|c| (c, 1))));
    }

    #[test]
    fn cup_examples() {
        let t = tower(Poset::chain(2), Variant::TildeG, 2);
        let l1 = t.level(1).unwrap().clone();
        let a = VirtualClass::interval(l1.clone(), singleton(&l1, &[0, 1]));
        let b = VirtualClass::interval(l1.clone(), singleton(&l1, &[1, 2]));
        let ab = cup(&a, &b, &t).unwrap();
        assert_eq!(chains_of(&ab), vec![(vec![vec![0, 1, 2]], 1)]);
        assert!(cup(&a, &a, &t).unwrap().is_zero());
    }

    #[test]
    fn unit_is_two_sided() {
        let t = tower(Poset::chain(3), Variant::CheckG, 3);
        let e = unit_class(&t).unwrap();
        let l1 = t.level(1).unwrap().clone();
        let x = VirtualClass::interval(l1.clone(), singleton(&l1, &[0, 2]));
        assert_eq!(cup(&e, &x, &t).unwrap(), x);
        assert_eq!(cup(&x, &e, &t).unwrap(), x);
    }

    #[test]
    fn rank_invariant_examples() {
        let t = tower(Poset::chain(3), Variant::CheckG, 1);
        let l0 = t.level(0).unwrap().clone();
        let iv = |m: &[usize]| Interval::from_members(4, m);
        let whole = VirtualClass::interval(l0.clone(), iv(&[0, 1, 2, 3]));
        assert!(rank_invariant(&whole).unwrap().values().all(|&v| v == 1));
        let s = VirtualClass::from_terms(l0.clone(), (0..4).map(|a| (iv(&[a]), 1)));
        for ((a, b), v) in rank_invariant(&s).unwrap() {
            assert_eq!(v, i64::from(a == b));
        }
        let tn = VirtualClass::from_terms(
            l0,
            [(iv(&[0, 1, 2]), 1), (iv(&[1, 2, 3]), 1), (iv(&[1, 2]), -1)],
        );
        assert_eq!(rank_invariant(&tn).unwrap()[&(1, 2)], 1);
    }

    #[test]
    fn line_and_square_components() {
        let labels = |base: Poset, rule| {
            let base = Arc::new(base);
            morphism_components(base.clone(), rule)
                .unwrap()
                .into_iter()
                .map(|c| {
                    let mut v: Vec<String> = c.iter().map(|x| x.label(&base)).collect();
                    v.sort();
                    v
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(
            labels(Poset::chain(3), ComponentRule::Line),
            vec![vec!["01", "02", "12", "13", "23"], vec!["03"]]
        );
        assert_eq!(
            labels(Poset::chain(2), ComponentRule::Line),
            vec![vec!["01", "12"], vec!["02"]]
        );
        assert_eq!(
            labels(Poset::chain(2), ComponentRule::Square),
            vec![vec!["01", "02", "12"]]
        );
    }
}
