//! Level posets of the four simplicial envelopes and their structure maps.
//!
//! For a base poset `P` the level-`n` poset of every variant has the
//! `n`-chains of `P` as objects (weak chains for the tilde variants, strict
//! chains for the check variants). Two order rules exist:
//!
//! * pointwise (`E` variants): `u <= v` iff `u_i <= v_i` for every `i`;
//! * compositional (`G` variants): `u <= v` iff `u = v` or `last(u) <= first(v)`.
//!
//! Both are partial orders. For the compositional rule,
//! `last(u) <= first(v)` and `last(v) <= first(u)` force both chains to be
//! the same constant chain; a reflexive pair `last(u) <= first(u)` only occurs
//! for constant chains, where both clauses of the rule agree.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::chain::{enumerate_chains, Chain};
use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Variant {
    TildeE,
    TildeG,
    CheckE,
    CheckG,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderRule {
    Pointwise,
    Compositional,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::TildeE,
        Variant::TildeG,
        Variant::CheckE,
        Variant::CheckG,
    ];

    /// Tilde variants carry degeneracies; check variants are semi-simplicial.
    pub fn is_simplicial(self) -> bool {
        matches!(self, Variant::TildeE | Variant::TildeG)
    }

    pub fn rule(self) -> OrderRule {
        match self {
            Variant::TildeE | Variant::CheckE => OrderRule::Pointwise,
            Variant::TildeG | Variant::CheckG => OrderRule::Compositional,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::TildeE => "tildeE",
            Variant::TildeG => "tildeG",
            Variant::CheckE => "E",
            Variant::CheckG => "G",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tildeE" | "tilde-E" | "TildeE" => Ok(Variant::TildeE),
            "tildeG" | "tilde-G" | "TildeG" => Ok(Variant::TildeG),
            "E" | "checkE" | "CheckE" => Ok(Variant::CheckE),
            "G" | "checkG" | "CheckG" => Ok(Variant::CheckG),
            other => Err(format!(
                "unknown variant `{other}` (expected E, G, tildeE or tildeG)"
            )),
        }
    }
}

/// The level-`n` poset of a variant over a base poset.
#[derive(Debug)]
pub struct LevelPoset {
    base: Arc<Poset>,
    variant: Variant,
    level: usize,
    objects: Vec<Chain>,
    index: HashMap<Chain, usize>,
    order: Poset,
}

impl LevelPoset {
    pub fn new(base: Arc<Poset>, variant: Variant, level: usize) -> Result<Self> {
        let objects = enumerate_chains(&base, level, variant.is_simplicial());
        let names = objects.iter().map(|c| c.label(&base)).collect();
        let order = match variant.rule() {
            OrderRule::Pointwise => Poset::from_order(names, |a, b| {
                objects[a]
                    .vertices()
                    .iter()
                    .zip(objects[b].vertices())
                    .all(|(&x, &y)| base.leq(x, y))
            })?,
            OrderRule::Compositional => Poset::from_order(names, |a, b| {
                a == b || base.leq(objects[a].last(), objects[b].first())
            })?,
        };
        let index = objects
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Ok(Self {
            base,
            variant,
            level,
            objects,
            index,
            order,
        })
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn objects(&self) -> &[Chain] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &Chain {
        &self.objects[i]
    }

    pub fn index_of(&self, c: &Chain) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// The order on objects, as a poset whose element names are chain labels.
    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StructureKind {
    /// Deletes vertex `i` (level `n + 1` to `n`).
    Face(usize),
    /// Repeats vertex `i` (level `n` to `n + 1`).
    Degeneracy(usize),
    /// Keeps the first `p + 1` vertices (level `n` to `p`).
    Front(usize),
    /// Keeps the last `q + 1` vertices (level `n` to `q`).
    Back(usize),
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureKind::Face(i) => write!(f, "face {i}"),
            StructureKind::Degeneracy(i) => write!(f, "degeneracy {i}"),
            StructureKind::Front(p) => write!(f, "front {p}"),
            StructureKind::Back(q) => write!(f, "back {q}"),
        }
    }
}

impl StructureKind {
    fn apply(self, c: &Chain) -> Result<Chain> {
        match self {
            StructureKind::Face(i) => c.face(i),
            StructureKind::Degeneracy(i) => c.degeneracy(i),
            StructureKind::Front(p) => c.front(p),
            StructureKind::Back(q) => c.back(q),
        }
    }

    /// Level reached from `source_level`, or the reason the map does not exist.
    fn target_level(self, source_level: usize) -> Result<usize> {
        let (StructureKind::Face(i)
        | StructureKind::Degeneracy(i)
        | StructureKind::Front(i)
        | StructureKind::Back(i)) = self;
        if i > source_level {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: source_level,
            });
        }
        match self {
            StructureKind::Face(_) if source_level == 0 => Err(Error::LevelMismatch {
                kind: self.to_string(),
                source_level,
                target_level: source_level,
            }),
            StructureKind::Face(_) => Ok(source_level - 1),
            StructureKind::Degeneracy(_) => Ok(source_level + 1),
            StructureKind::Front(p) => Ok(p),
            StructureKind::Back(q) => Ok(q),
        }
    }
}

/// A functor between level posets, recorded by its action on objects.
#[derive(Clone, Debug)]
pub struct ObjectMap {
    kind: StructureKind,
    source: Arc<LevelPoset>,
    target: Arc<LevelPoset>,
    images: Vec<usize>,
}

impl ObjectMap {
    pub fn new(source: Arc<LevelPoset>, target: Arc<LevelPoset>, kind: StructureKind) -> Result<Self> {
        if source.variant != target.variant || !Arc::ptr_eq(&source.base, &target.base) {
            return Err(Error::ContextMismatch(
                "structure maps need levels of one variant over one base".into(),
            ));
        }
        if matches!(kind, StructureKind::Degeneracy(_)) && !source.variant.is_simplicial() {
            return Err(Error::DegeneracyOnSemiSimplicial {
                variant: source.variant.as_str(),
            });
        }
        let mismatch = || Error::LevelMismatch {
            kind: kind.to_string(),
            source_level: source.level,
            target_level: target.level,
        };
        if kind.target_level(source.level)? != target.level {
            return Err(mismatch());
        }

        let images = source
            .objects
            .iter()
            .map(|c| {
                let image = kind.apply(c)?;
                target.index_of(&image).ok_or_else(mismatch)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind,
            source,
            target,
            images,
        })
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn source(&self) -> &Arc<LevelPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LevelPoset> {
        &self.target
    }

    pub fn image(&self, object: usize) -> usize {
        self.images[object]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Every cover pair of the source maps to a related pair of the target.
    pub fn is_monotone(&self) -> bool {
        self.source
            .order
            .covers()
            .iter()
            .all(|&(a, b)| self.target.order.leq(self.images[a], self.images[b]))
    }
}

/// Levels `0..=top` of one variant over one base, with all face maps and,
/// for simplicial variants, all degeneracy maps between them.
#[derive(Debug)]
pub struct LevelTower {
    base: Arc<Poset>,
    variant: Variant,
    levels: Vec<Arc<LevelPoset>>,
    /// `faces[n][i]`: level `n + 1` to level `n`.
    faces: Vec<Vec<ObjectMap>>,
    /// `degeneracies[n][i]`: level `n` to level `n + 1`.
    degeneracies: Vec<Vec<ObjectMap>>,
}

impl LevelTower {
    pub fn new(base: Arc<Poset>, variant: Variant, top: usize) -> Result<Self> {
        let levels = (0..=top)
            .map(|n| LevelPoset::new(base.clone(), variant, n).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let mut faces = Vec::with_capacity(top);
        let mut degeneracies = Vec::new();
        for n in 0..top {
            faces.push(
                (0..=n + 1)
                    .map(|i| {
                        ObjectMap::new(levels[n + 1].clone(), levels[n].clone(), StructureKind::Face(i))
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
            if variant.is_simplicial() {
                degeneracies.push(
                    (0..=n)
                        .map(|i| {
                            ObjectMap::new(
                                levels[n].clone(),
                                levels[n + 1].clone(),
                                StructureKind::Degeneracy(i),
                            )
                        })
                        .collect::<Result<Vec<_>>>()?,
                );
            }
        }
        Ok(Self {
            base,
            variant,
            levels,
            faces,
            degeneracies,
        })
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Highest materialized level.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&Arc<LevelPoset>> {
        self.levels.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            bound: self.top(),
        })
    }

    /// The face map deleting vertex `i`, from level `n + 1` to level `n`.
    pub fn face(&self, n: usize, i: usize) -> Result<&ObjectMap> {
        self.faces
            .get(n)
            .and_then(|f| f.get(i))
            .ok_or(Error::IndexOutOfRange { index: i, bound: n + 1 })
    }

    /// The degeneracy repeating vertex `i`, from level `n` to level `n + 1`.
    pub fn degeneracy(&self, n: usize, i: usize) -> Result<&ObjectMap> {
        if !self.variant.is_simplicial() {
            return Err(Error::DegeneracyOnSemiSimplicial {
                variant: self.variant.as_str(),
            });
        }
        self.degeneracies
            .get(n)
            .and_then(|f| f.get(i))
            .ok_or(Error::IndexOutOfRange { index: i, bound: n })
    }

    /// Front or back map out of `source_level`.
    pub fn structure_map(&self, source_level: usize, kind: StructureKind) -> Result<ObjectMap> {
        let target = kind.target_level(source_level)?;
        ObjectMap::new(
            self.level(source_level)?.clone(),
            self.level(target)?.clone(),
            kind,
        )
    }
}

/// Builds one structure map between freshly materialized levels.
pub fn structure_map(base: Arc<Poset>, variant: Variant, kind: StructureKind, n: usize) -> Result<ObjectMap> {
    let target = kind.target_level(n)?;
    if matches!(kind, StructureKind::Degeneracy(_)) && !variant.is_simplicial() {
        return Err(Error::DegeneracyOnSemiSimplicial {
            variant: variant.as_str(),
        });
    }
    let source = Arc::new(LevelPoset::new(base.clone(), variant, n)?);
    let target = Arc::new(LevelPoset::new(base, variant, target)?);
    ObjectMap::new(source, target, kind)
}
