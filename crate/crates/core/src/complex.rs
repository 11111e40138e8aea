//! Cochain complexes: interval-generated complexes of the four variants, the
//! singleton subcomplex of the compositional tilde variant, and the nerve
//! cochains used as an oracle.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::chain::{enumerate_chains, Chain};
use crate::class::pullback_components;
use crate::error::{Error, Result};
use crate::interval::{enumerate_intervals, sort_intervals, Interval};
use crate::levels::{LevelPoset, LevelTower, ObjectMap, Variant};
use crate::matrix::IntegerMatrix;
use crate::poset::Poset;
use crate::snf::{smith_form, SmithForm};

/// Intervals of one level poset in basis order.
#[derive(Clone, Debug)]
pub struct IntervalBasis {
    level: Arc<LevelPoset>,
    intervals: Vec<Interval>,
    index: HashMap<Interval, usize>,
}

impl IntervalBasis {
    /// Every interval of the level poset.
    pub fn enumerate(level: Arc<LevelPoset>, cap: usize) -> Result<Self> {
        let intervals = enumerate_intervals(level.order(), cap)?;
        Ok(Self::from_sorted(level, intervals))
    }

    /// Sorts `intervals` into basis order; duplicates are dropped.
    pub fn from_intervals(level: Arc<LevelPoset>, mut intervals: Vec<Interval>) -> Self {
        sort_intervals(&mut intervals);
        intervals.dedup();
        Self::from_sorted(level, intervals)
    }

    fn from_sorted(level: Arc<LevelPoset>, intervals: Vec<Interval>) -> Self {
        let index = intervals
            .iter()
            .enumerate()
            .map(|(i, q)| (q.clone(), i))
            .collect();
        Self {
            level,
            intervals,
            index,
        }
    }

    pub fn level(&self) -> &Arc<LevelPoset> {
        &self.level
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn index(&self) -> &HashMap<Interval, usize> {
        &self.index
    }

    pub fn index_of(&self, q: &Interval) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Basis of one cochain group.
#[derive(Clone, Debug)]
pub enum Basis {
    Intervals(IntervalBasis),
    /// Singleton intervals or nerve simplices, named by their chains.
    Chains(Vec<Chain>),
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Basis::Intervals(b) => b.len(),
            Basis::Chains(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Chains spanned by basis element `i`.
    pub fn support(&self, i: usize) -> Vec<Chain> {
        match self {
            Basis::Intervals(b) => b.intervals[i]
                .bits()
                .ones()
                .map(|x| b.level.object(x).clone())
                .collect(),
            Basis::Chains(c) => vec![c[i].clone()],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BasisKind {
    /// All interval modules of each level.
    Intervals,
    /// Singletons on non-constant weak chains (compositional tilde variant).
    Singletons,
    /// Singletons on strict chains, with the coboundary projected onto them.
    ReducedSingletons,
    /// Simplicial cochains of the nerve.
    Nerve,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Intervals => "intervals",
            BasisKind::Singletons => "singletons",
            BasisKind::ReducedSingletons => "reduced-singletons",
            BasisKind::Nerve => "nerve",
        }
    }
}

/// A cochain complex truncated at degree `top`.
///
/// Groups `0..=top` are stored in full. The coboundary out of degree `top`
/// is stored too, but its target basis may hold only the generators that
/// the coboundary actually reaches; that changes no rank, and it spares
/// enumerating the top level.
#[derive(Debug)]
pub struct CochainComplex {
    base: Arc<Poset>,
    variant: Option<Variant>,
    kind: BasisKind,
    top: usize,
    bases: Vec<Basis>,
    d: Vec<IntegerMatrix>,
    smith: Vec<OnceLock<SmithForm>>,
}

impl CochainComplex {
    fn assemble(
        base: Arc<Poset>,
        variant: Option<Variant>,
        kind: BasisKind,
        bases: Vec<Basis>,
        d: Vec<IntegerMatrix>,
    ) -> Self {
        debug_assert_eq!(bases.len(), d.len() + 1);
        for (n, m) in d.iter().enumerate() {
            debug_assert_eq!((m.rows(), m.cols()), (bases[n + 1].len(), bases[n].len()));
        }
        let top = d.len() - 1;
        Self {
            base,
            variant,
            kind,
            top,
            bases,
            smith: (0..d.len()).map(|_| OnceLock::new()).collect(),
            d,
        }
    }

    pub fn base(&self) -> &Arc<Poset> {
        &self.base
    }

    /// `None` for the nerve complex.
    pub fn variant(&self) -> Option<Variant> {
        self.variant
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Highest degree whose cohomology the complex determines.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Degrees above this bound have zero cochains, if such a bound exists:
    /// strict chains stop at the composition length.
    pub fn vanishes_above(&self) -> Option<usize> {
        let strict = match self.kind {
            BasisKind::Nerve | BasisKind::ReducedSingletons => true,
            BasisKind::Intervals => self.variant.is_some_and(|v| !v.is_simplicial()),
            BasisKind::Singletons => false,
        };
        strict.then(|| self.base.composition_length())
    }

    /// All groups, not only `0..=top`, are determined.
    pub fn is_complete(&self) -> bool {
        self.vanishes_above().is_some_and(|n| n <= self.top)
    }

    /// Basis of `C^n` for `n <= top`; `C^{top+1}` may be partial.
    pub fn basis(&self, n: usize) -> Option<&Basis> {
        self.bases.get(n)
    }

    /// Ranks of `C^0 ..= C^top`.
    pub fn dims(&self) -> Vec<usize> {
        self.bases[..=self.top].iter().map(Basis::len).collect()
    }

    /// `d^n : C^n -> C^{n+1}` for `n <= top`.
    pub fn d(&self, n: usize) -> Option<&IntegerMatrix> {
        self.d.get(n)
    }

    /// Invariant factors of `d^n`, computed once.
    pub fn smith(&self, n: usize) -> Option<&SmithForm> {
        Some(self.smith.get(n)?.get_or_init(|| smith_form(&self.d[n])))
    }

    /// Forces every Smith form, reducing distinct matrices in parallel.
    pub fn reduce_all(&self) {
        (0..self.d.len()).into_par_iter().for_each(|n| {
            self.smith(n);
        });
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `d q` as a map from level-(n+1) intervals to coefficients.
fn coboundary_terms(tower: &LevelTower, n: usize, q: &Interval) -> Result<BTreeMap<Interval, i64>> {
    let mut acc: BTreeMap<Interval, i64> = BTreeMap::new();
    for i in 0..=n + 1 {
        for comp in pullback_components(q, tower.face(n, i)?)? {
            *acc.entry(comp).or_insert(0) += sign(i);
        }
    }
    acc.retain(|_, c| *c != 0);
    Ok(acc)
}

fn columns_to_matrix(
    rows: &IntervalBasis,
    columns: Vec<BTreeMap<Interval, i64>>,
) -> Result<IntegerMatrix> {
    let columns = columns
        .into_iter()
        .map(|col| {
            col.into_iter()
                .map(|(q, c)| {
                    rows.index_of(&q)
                        .map(|r| (r, c))
                        .ok_or_else(|| Error::ContextMismatch("pullback left the target basis".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegerMatrix::from_columns(rows.len(), columns))
}

/// Matrix of the pullback along `f`: columns indexed by `from` (a basis on
/// `f`'s target), rows by `to` (a basis on `f`'s source).
pub fn pullback_matrix(f: &ObjectMap, from: &IntervalBasis, to: &IntervalBasis) -> Result<IntegerMatrix> {
    let columns = from
        .intervals
        .par_iter()
        .map(|q| {
            let mut acc = BTreeMap::new();
            for comp in pullback_components(q, f)? {
                *acc.entry(comp).or_insert(0) += 1;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    columns_to_matrix(to, columns)
}

/// Interval bases of levels `0..=top` of a tower.
pub fn interval_bases(tower: &LevelTower, top: usize, cap: usize) -> Result<Vec<IntervalBasis>> {
    (0..=top)
        .map(|n| IntervalBasis::enumerate(tower.level(n)?.clone(), cap))
        .collect()
}

/// The interval-generated complex of `variant` over `base` in degrees
/// `0..=top`.
pub fn build_complex(base: Arc<Poset>, variant: Variant, top: usize, cap: usize) -> Result<CochainComplex> {
    let tower = LevelTower::new(base.clone(), variant, top + 1)?;
    let mut bases = interval_bases(&tower, top, cap)?;
    let mut d = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let columns = bases[n]
            .intervals
            .par_iter()
            .map(|q| coboundary_terms(&tower, n, q))
            .collect::<Result<Vec<_>>>()?;
        if n == top {
            let reached: HashSet<Interval> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
            if reached.len() > cap {
                return Err(Error::IntervalExplosion { cap });
            }
            bases.push(IntervalBasis::from_intervals(
                tower.level(n + 1)?.clone(),
                reached.into_iter().collect(),
            ));
        }
        d.push(columns_to_matrix(&bases[n + 1], columns)?);
    }
    Ok(CochainComplex::assemble(
        base,
        Some(variant),
        BasisKind::Intervals,
        bases.into_iter().map(Basis::Intervals).collect(),
        d,
    ))
}

/// The singleton subcomplex of the compositional tilde variant, spanned by
/// singleton modules on non-constant chains. With `reduced`, only strict
/// chains are kept and coboundaries are projected onto them (the quotient by
/// the subcomplex of chains with a repeated vertex).
///
/// Preimages of a non-constant singleton under a face map are discrete:
/// two chains over the same face are never related by the compositional
/// order, since each contains the first and last vertex of the face.
pub fn singleton_complex(base: Arc<Poset>, top: usize, reduced: bool) -> Result<CochainComplex> {
    let tower = LevelTower::new(base.clone(), Variant::TildeG, top + 1)?;
    let keep = |c: &Chain| !c.is_homogeneous() && (!reduced || c.is_strict());
    let mut chains = Vec::with_capacity(top + 2);
    let mut positions: Vec<Vec<Option<usize>>> = Vec::with_capacity(top + 2);
    for n in 0..=top + 1 {
        let level = tower.level(n)?;
        let mut kept = Vec::new();
        let mut pos = vec![None; level.len()];
        for (i, c) in level.objects().iter().enumerate() {
            if keep(c) {
                pos[i] = Some(kept.len());
                kept.push(c.clone());
            }
        }
        chains.push(kept);
        positions.push(pos);
    }

    let mut d = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let source = tower.level(n)?;
        let columns = chains[n]
            .par_iter()
            .map(|v| {
                let q = Interval::singleton(source.len(), source.index_of(v).expect("own object"));
                let mut col: Vec<(usize, i64)> = Vec::new();
                for i in 0..=n + 1 {
                    for comp in pullback_components(&q, tower.face(n, i)?)? {
                        let members = comp.members();
                        assert_eq!(members.len(), 1, "face preimage of a singleton is not discrete");
                        if let Some(r) = positions[n + 1][members[0]] {
                            col.push((r, sign(i)));
                        } else {
                            assert!(reduced, "coface of a non-constant chain is constant");
                        }
                    }
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        d.push(IntegerMatrix::from_columns(chains[n + 1].len(), columns));
    }
    let kind = if reduced {
        BasisKind::ReducedSingletons
    } else {
        BasisKind::Singletons
    };
    Ok(CochainComplex::assemble(
        base,
        Some(Variant::TildeG),
        kind,
        chains.into_iter().map(Basis::Chains).collect(),
        d,
    ))
}

/// Simplicial cochains of the nerve on strict chains, in degrees `0..=top`.
pub fn nerve_complex(base: Arc<Poset>, top: usize) -> CochainComplex {
    let chains: Vec<Vec<Chain>> = (0..=top + 1).map(|n| enumerate_chains(&base, n, false)).collect();
    let d = (0..=top)
        .map(|n| {
            let index: HashMap<&Chain, usize> = chains[n].iter().enumerate().map(|(i, c)| (c, i)).collect();
            let entries = chains[n + 1].iter().enumerate().flat_map(|(r, w)| {
                let index = &index;
                (0..=n + 1).map(move |i| {
                    let face = w.face(i).expect("face index in range");
                    (r, index[&face], BigInt::from(sign(i)))
                })
            });
            IntegerMatrix::from_triplets(chains[n + 1].len(), chains[n].len(), entries)
        })
        .collect();
    CochainComplex::assemble(
        base,
        None,
        BasisKind::Nerve,
        chains.into_iter().map(Basis::Chains).collect(),
        d,
    )
}

/// The comparison from the singleton subcomplex to nerve cochains, sending
/// a singleton on a strict chain to that chain's characteristic function
/// and every other singleton to zero.
#[derive(Debug)]
pub struct NerveComparison {
    pub singletons: CochainComplex,
    pub nerve: CochainComplex,
    /// `maps[n] : C^n(singletons) -> C^n(nerve)` for `n <= top`.
    pub maps: Vec<IntegerMatrix>,
}

impl NerveComparison {
    /// Degrees `n` in `1..top` where `P_{n+1} d_s = d_N P_n` fails.
    pub fn failures(&self) -> Vec<usize> {
        (1..self.maps.len().saturating_sub(1))
            .filter(|&n| {
                let lhs = self.maps[n + 1].mul(self.singletons.d(n).expect("stored"));
                let rhs = self.nerve.d(n).expect("stored").mul(&self.maps[n]);
                lhs != rhs
            })
            .collect()
    }

    pub fn is_cochain_map(&self) -> bool {
        self.failures().is_empty()
    }
}

pub fn nerve_comparison(base: Arc<Poset>, top: usize) -> Result<NerveComparison> {
    let singletons = singleton_complex(base.clone(), top, false)?;
    let nerve = nerve_complex(base, top);
    let maps = (0..=top + 1)
        .map(|n| {
            let (Some(Basis::Chains(src)), Some(Basis::Chains(dst))) = (singletons.basis(n), nerve.basis(n)) else {
                unreachable!("both complexes have chain bases");
            };
            let index: HashMap<&Chain, usize> = dst.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let columns = src
                .iter()
                .map(|c| index.get(c).map(|&r| (r, 1)).into_iter().collect())
                .collect();
            IntegerMatrix::from_columns(dst.len(), columns)
        })
        .collect();
    Ok(NerveComparison {
        singletons,
        nerve,
        maps,
    })
}
