//! Structural audits shared by the property tests and the acceptance suite.
//! Each audit returns human-readable violations; an empty list means pass.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use repcoh_core::{
    build_complex, coboundary_class, enumerate_chains, cocycle_representatives, cup, interval_bases, is_interval, morphism_components,
    pullback_components, pullback_matrix, rank_invariant, unit_class, Chain, ComponentRule, Error, IntervalBasis, IntegerMatrix, LevelTower, Poset, StructureKind, Variant, VirtualClass,
};

/// Interval cap used while auditing random posets; levels whose interval
/// count exceeds it are not audited.
pub const AUDIT_CAP: usize = 4_000;

/// Largest level poset materialized while auditing.
pub const AUDIT_MAX_OBJECTS: usize = 250;

/// Highest level `<= want` whose chain count stays under
/// [`AUDIT_MAX_OBJECTS`].
pub fn tower_top(base: &Poset, variant: Variant, want: usize) -> usize {
    (1..=want)
        .take_while(|&n| enumerate_chains(base, n, variant.is_simplicial()).len() <= AUDIT_MAX_OBJECTS)
        .last()
        .unwrap_or(0)
}

#[derive(Default, Debug, Clone)]
pub struct Stats {
    pub posets: usize,
    pub complexes: usize,
    pub pullbacks: usize,
    pub cosimplicial: usize,
    pub sections: usize,
    pub maps: usize,
    pub leibniz: usize,
    pub associativity: usize,
    pub unit: usize,
    pub kernel_vectors: usize,
}

impl Stats {
    pub fn merge(&mut self, o: &Stats) {
        self.posets += o.posets;
        self.complexes += o.complexes;
        self.pullbacks += o.pullbacks;
        self.cosimplicial += o.cosimplicial;
        self.sections += o.sections;
        self.maps += o.maps;
        self.leibniz += o.leibniz;
        self.associativity += o.associativity;
        self.unit += o.unit;
        self.kernel_vectors += o.kernel_vectors;
    }
}

/// A random poset on `1..=max_elements` elements: a random DAG on a shuffled
/// vertex order with edge probability `density`, closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, max_elements: usize, density: f64) -> Poset {
    let m = rng.gen_range(1..=max_elements);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut rel = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if rng.gen_bool(density) {
                rel.push((order[i], order[j]));
            }
        }
    }
    let names = (0..m).map(|i| format!("p{i}")).collect();
    Poset::from_relations(names, &rel).expect("edges follow a linear order")
}

/// Highest level `<= want` whose interval bases stay under the audit cap.
pub fn feasible_top(tower: &LevelTower, want: usize) -> (usize, Vec<IntervalBasis>) {
    let mut bases = Vec::new();
    for n in 0..=want.min(tower.top()) {
        match interval_bases(tower, n, AUDIT_CAP).map(|mut b| b.pop().unwrap()) {
            Ok(b) => bases.push(b),
            Err(Error::IntervalExplosion { .. }) => break,
            Err(e) => panic!("unexpected error: {e}"),
        }
    }
    (bases.len().saturating_sub(1), bases)
}

/// Object-level simplicial identities and monotonicity of every structure
/// map between materialized levels.
pub fn audit_maps(tower: &LevelTower, stats: &mut Stats) -> Vec<String> {
    let mut bad = Vec::new();
    let top = tower.top();
    for n in 0..top {
        for i in 0..=n + 1 {
            let f = tower.face(n, i).unwrap();
            stats.maps += 1;
            if !f.is_monotone() {
                bad.push(format!("face {i} at level {} is not monotone", n + 1));
            }
        }
        if tower.variant().is_simplicial() {
            for i in 0..=n {
                let s = tower.degeneracy(n, i).unwrap();
                stats.maps += 1;
                if !s.is_monotone() {
                    bad.push(format!("degeneracy {i} at level {n} is not monotone"));
                }
                // d_i s_i = d_{i+1} s_i = id
                for k in [i, i + 1] {
                    let f = tower.face(n, k).unwrap();
                    for x in 0..s.source().len() {
                        if f.image(s.image(x)) != x {
                            bad.push(format!("face {k} after degeneracy {i} moves object {x} at level {n}"));
                        }
                    }
                }
            }
        }
        for p in 0..=n + 1 {
            for kind in [StructureKind::Front(p), StructureKind::Back(p)] {
                let m = tower.structure_map(n + 1, kind).unwrap();
                stats.maps += 1;
                if !m.is_monotone() {
                    bad.push(format!("{kind} out of level {} is not monotone", n + 1));
                }
            }
        }
    }
    // d_i d_j = d_{j-1} d_i for i < j, on objects of level n + 2.
    for n in 0..top.saturating_sub(1) {
        for j in 0..=n + 2 {
            for i in 0..j {
                let (dj, di_low) = (tower.face(n + 1, j).unwrap(), tower.face(n, i).unwrap());
                let (di, dj1) = (tower.face(n + 1, i).unwrap(), tower.face(n, j - 1).unwrap());
                for x in 0..dj.source().len() {
                    if di_low.image(dj.image(x)) != dj1.image(di.image(x)) {
                        bad.push(format!("simplicial identity d{i} d{j} fails at level {}", n + 2));
                    }
                }
            }
        }
    }
    // Both order rules are partial orders; level 0 is the base.
    for n in 0..=top {
        let l = tower.level(n).unwrap();
        let ord = l.order();
        for a in 0..l.len() {
            for b in 0..l.len() {
                if a != b && ord.leq(a, b) && ord.leq(b, a) {
                    bad.push(format!("antisymmetry fails at level {n}"));
                }
            }
        }
    }
    let base = tower.base();
    let l0 = tower.level(0).unwrap();
    if l0.order().relations() != base.relations() {
        bad.push("level 0 differs from the base".into());
    }
    bad
}

/// Every face pullback of every interval: independent convexity and
/// connectivity check of each component, single components in the
/// pointwise tilde variant, and conservation of multiplicities.
pub fn audit_pullbacks(tower: &LevelTower, bases: &[IntervalBasis], stats: &mut Stats) -> Vec<String> {
    let mut bad = Vec::new();
    for n in 0..bases.len().saturating_sub(1).min(tower.top()) {
        for q in bases[n].intervals() {
            for i in 0..=n + 1 {
                let f = tower.face(n, i).unwrap();
                let comps = match pullback_components(q, f) {
                    Ok(c) => c,
                    Err(e) => {
                        bad.push(format!("pullback failed: {e}"));
                        continue;
                    }
                };
                stats.pullbacks += 1;
                let order = f.source().order();
                let mut total = vec![0i64; f.source().len()];
                for c in &comps {
                    if !is_interval(order, c.bits()) {
                        bad.push(format!("non-interval component at level {}", n + 1));
                    }
                    for x in c.bits().ones() {
                        total[x] += 1;
                    }
                }
                let want: Vec<i64> = (0..f.source().len())
                    .map(|x| i64::from(q.contains(f.image(x))))
                    .collect();
                if total != want {
                    bad.push(format!("multiplicity not conserved by face {i} at level {n}"));
                }
                if tower.variant() == Variant::TildeE && comps.len() > 1 {
                    bad.push(format!("tildeE pullback along face {i} at level {n} is disconnected"));
                }
            }
        }
    }
    bad
}

/// Cosimplicial identities and the codegeneracy sections on matrices.
pub fn audit_matrices(tower: &LevelTower, bases: &[IntervalBasis], stats: &mut Stats) -> Vec<String> {
    let mut bad = Vec::new();
    let top = bases.len() - 1;
    let coface = |n: usize, i: usize| pullback_matrix(tower.face(n, i).unwrap(), &bases[n], &bases[n + 1]).unwrap();
    // δ^j δ^i = δ^i δ^{j-1} for i < j, from level n to level n + 2.
    for n in 0..top.saturating_sub(1) {
        let low: Vec<IntegerMatrix> = (0..=n + 1).map(|i| coface(n, i)).collect();
        let high: Vec<IntegerMatrix> = (0..=n + 2).map(|i| coface(n + 1, i)).collect();
        for j in 0..=n + 2 {
            for i in 0..j {
                stats.cosimplicial += 1;
                if high[j].mul(&low[i]) != high[i].mul(&low[j - 1]) {
                    bad.push(format!("cosimplicial identity ({i}, {j}) fails at level {n}"));
                }
            }
        }
    }
    if tower.variant().is_simplicial() {
        for n in 0..top {
            for i in 0..=n {
                let sigma = pullback_matrix(tower.degeneracy(n, i).unwrap(), &bases[n + 1], &bases[n]).unwrap();
                for k in [i, i + 1] {
                    stats.sections += 1;
                    if sigma.mul(&coface(n, k)) != IntegerMatrix::identity(bases[n].len()) {
                        bad.push(format!("codegeneracy {i} is not a section of coface {k} at level {n}"));
                    }
                }
            }
        }
    }
    bad
}

fn random_class<R: Rng>(rng: &mut R, basis: &IntervalBasis) -> Option<VirtualClass> {
    let q = basis.intervals().choose(rng)?.clone();
    Some(VirtualClass::interval(basis.level().clone(), q))
}

/// Leibniz rule, unit law and associativity on random intervals.
pub fn audit_cup<R: Rng>(
    rng: &mut R,
    tower: &LevelTower,
    bases: &[IntervalBasis],
    samples: usize,
    stats: &mut Stats,
) -> Vec<String> {
    let mut bad = Vec::new();
    let top = bases.len() - 1;
    let unit = unit_class(tower).unwrap();
    for _ in 0..samples {
        let p = rng.gen_range(0..=top);
        let q = rng.gen_range(0..=top - p);
        let (Some(a), Some(b)) = (random_class(rng, &bases[p]), random_class(rng, &bases[q])) else {
            continue;
        };
        stats.unit += 1;
        if cup(&unit, &a, tower).unwrap() != a || cup(&a, &unit, tower).unwrap() != a {
            bad.push(format!("unit law fails at level {p}"));
        }
        if p + q < top.min(tower.top()) {
            stats.leibniz += 1;
            let lhs = coboundary_class(&cup(&a, &b, tower).unwrap(), tower).unwrap();
            let da_b = cup(&coboundary_class(&a, tower).unwrap(), &b, tower).unwrap();
            let a_db = cup(&a, &coboundary_class(&b, tower).unwrap(), tower).unwrap();
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let rhs = da_b.add(&a_db.scale(sign)).unwrap();
            if lhs != rhs {
                bad.push(format!("Leibniz rule fails for degrees ({p}, {q})"));
            }
        }
        if p + q <= top {
            let r = rng.gen_range(0..=top - p - q);
            if let Some(c) = random_class(rng, &bases[r]) {
                stats.associativity += 1;
                let left = cup(&cup(&a, &b, tower).unwrap(), &c, tower).unwrap();
                let right = cup(&a, &cup(&b, &c, tower).unwrap(), tower).unwrap();
                if left != right {
                    bad.push(format!("associativity fails for degrees ({p}, {q}, {r})"));
                }
            }
        }
    }
    bad
}

/// Rank invariants of the kernel basis of `d^0` for the compositional check
/// variant: constant on strict pairs within each line component, and
/// pointwise dimension constant on each component of the base.
pub fn audit_rank_constancy(base: Arc<Poset>, stats: &mut Stats) -> Vec<String> {
    let mut bad = Vec::new();
    let c = match build_complex(base.clone(), Variant::CheckG, 0, AUDIT_CAP) {
        Ok(c) => c,
        Err(Error::IntervalExplosion { .. }) => return bad,
        Err(e) => panic!("unexpected error: {e}"),
    };
    let Some(repcoh_core::Basis::Intervals(b0)) = c.basis(0) else {
        unreachable!()
    };
    let lines = morphism_components(base.clone(), ComponentRule::Line).unwrap();
    let mut all = FixedBitSet::with_capacity(base.len());
    all.insert_range(..);
    let base_components = base.components_of(&all);
    let reps = cocycle_representatives(&c, 0).unwrap();
    for v in &reps.kernel {
        stats.kernel_vectors += 1;
        let x = VirtualClass::from_terms(
            b0.level().clone(),
            v.iter()
                .enumerate()
                .map(|(i, k)| (b0.intervals()[i].clone(), k.to_i64().unwrap())),
        );
        let rk = rank_invariant(&x).unwrap();
        for line in &lines {
            let values: Vec<i64> = line.iter().map(|ch: &Chain| rk[&(ch.first(), ch.last())]).collect();
            if values.windows(2).any(|w| w[0] != w[1]) {
                bad.push(format!("rank not constant on a line component: {values:?}"));
            }
        }
        for comp in &base_components {
            let values: Vec<i64> = comp.ones().map(|a| rk[&(a, a)]).collect();
            if values.windows(2).any(|w| w[0] != w[1]) {
                bad.push(format!("dimension not constant on a component: {values:?}"));
            }
        }
    }
    bad
}

/// `d d = 0` for a complex of the given variant truncated at `top`.
pub fn audit_dd(base: Arc<Poset>, variant: Variant, top: usize, stats: &mut Stats) -> Vec<String> {
    let mut bad = Vec::new();
    let c = match build_complex(base, variant, top, AUDIT_CAP) {
        Ok(c) => c,
        Err(Error::IntervalExplosion { .. }) => return bad,
        Err(e) => panic!("unexpected error: {e}"),
    };
    stats.complexes += 1;
    for n in 0..c.top() {
        if !c.d(n + 1).unwrap().mul(c.d(n).unwrap()).is_zero() {
            bad.push(format!("d d != 0 at degree {n} for {variant}"));
        }
    }
    bad
}

/// All audits for one poset and variant, with levels up to `want_top`.
pub fn audit_all<R: Rng>(
    rng: &mut R,
    base: Arc<Poset>,
    variant: Variant,
    want_top: usize,
    cup_samples: usize,
    stats: &mut Stats,
) -> Vec<String> {
    stats.posets += 1;
    let tower = LevelTower::new(base.clone(), variant, tower_top(&base, variant, want_top)).unwrap();
    let (top, bases) = feasible_top(&tower, want_top);
    let mut bad = audit_maps(&tower, stats);
    bad.extend(audit_pullbacks(&tower, &bases, stats));
    bad.extend(audit_matrices(&tower, &bases, stats));
    if top >= 1 {
        bad.extend(audit_dd(base.clone(), variant, top - 1, stats));
    }
    bad.extend(audit_cup(rng, &tower, &bases, cup_samples, stats));
    if variant == Variant::CheckG {
        bad.extend(audit_rank_constancy(base, stats));
    }
    bad
}

/// Entries of a matrix as a map, for readable failure output.
pub fn sparse_entries(m: &IntegerMatrix) -> BTreeMap<(usize, usize), i64> {
    m.triplets().map(|(r, c, v)| ((r, c), v.to_i64().unwrap())).collect()
}

/// Row and column permutation of a matrix by random shuffles.
pub fn shuffled<R: Rng>(rng: &mut R, m: &IntegerMatrix) -> IntegerMatrix {
    let mut rp: Vec<usize> = (0..m.rows()).collect();
    let mut cp: Vec<usize> = (0..m.cols()).collect();
    rp.shuffle(rng);
    cp.shuffle(rng);
    m.permute(&rp, &cp)
}
