//! Smith normal form over the integers.
//!
//! Two engines live here. [`smith_form`] only computes invariant factors and
//! is built for large sparse coboundaries: it eliminates pivots that divide
//! their whole row and column (unit pivots first, chosen by a Markowitz-style
//! count), which needs row operations only, and hands whatever is left to the
//! dense algorithm. It runs in checked `i64` and restarts in `BigInt` if an
//! intermediate value overflows. [`smith_with_transforms`] is the dense
//! textbook algorithm that also records unimodular transforms.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::IntegerMatrix;

/// Invariant factors `d_1 | d_2 | ... | d_r`, stored as a count of leading
/// ones plus the factors exceeding one.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SmithForm {
    unit_count: usize,
    nontrivial: Vec<BigInt>,
}

impl SmithForm {
    /// Normalizes an arbitrary list of nonzero diagonal entries.
    pub fn from_diagonal(entries: impl IntoIterator<Item = BigInt>) -> Self {
        let mut unit_count = 0;
        let mut rest = Vec::new();
        for e in entries {
            let e = e.abs();
            assert!(!e.is_zero(), "diagonal entries must be nonzero");
            if e.is_one() {
                unit_count += 1;
            } else {
                rest.push(e);
            }
        }
        // Pairwise gcd/lcm sweeps turn any diagonal into a divisibility chain.
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let g = rest[i].gcd(&rest[j]);
                if g != rest[i] {
                    let l = rest[i].lcm(&rest[j]);
                    rest[i] = g;
                    rest[j] = l;
                }
            }
        }
        let mut nontrivial = Vec::new();
        for e in rest {
            if e.is_one() {
                unit_count += 1;
            } else {
                nontrivial.push(e);
            }
        }
        nontrivial.sort();
        Self {
            unit_count,
            nontrivial,
        }
    }

    pub fn rank(&self) -> usize {
        self.unit_count + self.nontrivial.len()
    }

    /// Invariant factors greater than one, ascending.
    pub fn torsion(&self) -> &[BigInt] {
        &self.nontrivial
    }

    pub fn factors(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::one(); self.unit_count];
        v.extend(self.nontrivial.iter().cloned());
        v
    }
}

/// Invariant factors of `m`.
pub fn smith_form(m: &IntegerMatrix) -> SmithForm {
    let small = m
        .triplets()
        .map(|(r, c, v)| v.to_i64().filter(|&x| x != i64::MIN).map(|x| (r, c, x)))
        .collect::<Option<Vec<_>>>();
    if let Some(entries) = small {
        if let Some(f) = Eliminator::<i64>::new(m.rows(), m.cols(), entries).run() {
            return f;
        }
    }
    let entries = m.triplets().map(|(r, c, v)| (r, c, v.clone())).collect();
    Eliminator::<BigInt>::new(m.rows(), m.cols(), entries)
        .run()
        .expect("arbitrary precision never overflows")
}

/// Rank of `m`.
pub fn rank(m: &IntegerMatrix) -> usize {
    smith_form(m).rank()
}

trait Scalar: Clone + Debug + PartialEq {
    fn is_nil(&self) -> bool;
    fn is_pm_one(&self) -> bool;
    /// Size used to prefer small pivots.
    fn magnitude(&self) -> u64;
    /// Whether `self` divides `other`; `self` is nonzero.
    fn divides(&self, other: &Self) -> bool;
    /// `other / self`, exact.
    fn quotient_of(&self, other: &Self) -> Self;
    /// `self - k * other`, or `None` on overflow.
    fn sub_mul(&self, k: &Self, other: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_pm_one(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn magnitude(&self) -> u64 {
        self.unsigned_abs()
    }
    fn divides(&self, other: &Self) -> bool {
        // i64::MIN % -1 overflows; every value is divisible by a unit.
        self.is_pm_one() || other % self == 0
    }
    fn quotient_of(&self, other: &Self) -> Self {
        if *self == 1 {
            *other
        } else if *self == -1 {
            other.wrapping_neg()
        } else {
            other / self
        }
    }
    fn sub_mul(&self, k: &Self, other: &Self) -> Option<Self> {
        let prod = k.checked_mul(*other)?;
        let r = self.checked_sub(prod)?;
        // Keep negation of every stored value representable.
        (r != i64::MIN).then_some(r)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pm_one(&self) -> bool {
        self.abs().is_one()
    }
    fn magnitude(&self) -> u64 {
        self.abs().to_u64().unwrap_or(u64::MAX)
    }
    fn divides(&self, other: &Self) -> bool {
        (other % self).is_zero()
    }
    fn quotient_of(&self, other: &Self) -> Self {
        other / self
    }
    fn sub_mul(&self, k: &Self, other: &Self) -> Option<Self> {
        Some(self - k * other)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Row-based sparse elimination state.
struct Eliminator<T: Scalar> {
    rows: Vec<Vec<(usize, T)>>,
    /// Rows holding a nonzero in each column.
    cols: Vec<HashSet<usize>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    diagonal: Vec<BigInt>,
}

impl<T: Scalar> Eliminator<T> {
    fn new(nrows: usize, ncols: usize, entries: Vec<(usize, usize, T)>) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); nrows];
        let mut cols: Vec<HashSet<usize>> = vec![HashSet::new(); ncols];
        for (r, c, v) in entries {
            if !v.is_nil() {
                rows[r].push((c, v));
                cols[c].insert(r);
            }
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
        }
        Self {
            rows,
            cols,
            row_alive: vec![true; nrows],
            col_alive: vec![true; ncols],
            diagonal: Vec::new(),
        }
    }

    fn entry(&self, r: usize, c: usize) -> &T {
        let row = &self.rows[r];
        let k = row
            .binary_search_by_key(&c, |e| e.0)
            .expect("column index lists a row without that entry");
        &row[k].1
    }

    fn run(mut self) -> Option<SmithForm> {
        self.unit_phase()?;
        self.divisor_phase()?;
        let rest = self.remainder();
        let mut diagonal = std::mem::take(&mut self.diagonal);
        diagonal.extend(dense_invariant_factors(rest));
        Some(SmithForm::from_diagonal(diagonal))
    }

    /// Eliminates unit pivots, visiting columns by increasing population and
    /// choosing the shortest row with a unit entry.
    fn unit_phase(&mut self) -> Option<()> {
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, s)| Reverse((s.len(), c)))
            .collect();
        while let Some(Reverse((count, c))) = heap.pop() {
            if !self.col_alive[c] || self.cols[c].is_empty() {
                continue;
            }
            if count != self.cols[c].len() {
                heap.push(Reverse((self.cols[c].len(), c)));
                continue;
            }
            let pivot_row = self.cols[c]
                .iter()
                .copied()
                .filter(|&r| self.entry(r, c).is_pm_one())
                .min_by_key(|&r| (self.rows[r].len(), r));
            if let Some(r) = pivot_row {
                let touched = self.pivot(r, c)?;
                for col in touched {
                    if self.col_alive[col] && !self.cols[col].is_empty() {
                        heap.push(Reverse((self.cols[col].len(), col)));
                    }
                }
            }
        }
        Some(())
    }

    /// Eliminates any pivot that divides every entry of its row and column,
    /// smallest magnitude first, until none is left.
    fn divisor_phase(&mut self) -> Option<()> {
        loop {
            let mut best: Option<(u64, usize, usize, usize)> = None;
            for c in 0..self.cols.len() {
                if !self.col_alive[c] || self.cols[c].is_empty() {
                    continue;
                }
                for &r in &self.cols[c] {
                    let p = self.entry(r, c);
                    let key = (p.magnitude(), self.rows[r].len() * self.cols[c].len(), r, c);
                    if best.is_some_and(|b| key >= b) {
                        continue;
                    }
                    let column_ok = self.cols[c].iter().all(|&i| p.divides(self.entry(i, c)));
                    let row_ok = self.rows[r].iter().all(|(_, v)| p.divides(v));
                    if column_ok && row_ok {
                        best = Some(key);
                    }
                }
            }
            match best {
                Some((_, _, r, c)) => {
                    self.pivot(r, c)?;
                }
                None => return Some(()),
            }
        }
    }

    /// Clears column `c` with row operations against row `r`, records the
    /// pivot and retires both. The pivot must divide its column and row, so
    /// the column operations clearing row `r` change nothing else. Returns
    /// the columns whose population changed.
    fn pivot(&mut self, r: usize, c: usize) -> Option<Vec<usize>> {
        let p = self.entry(r, c).clone();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let mut touched: HashSet<usize> = HashSet::new();
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let k = p.quotient_of(self.entry(i, c));
            let old = std::mem::take(&mut self.rows[i]);
            let merged = sub_rows(&old, &k, &pivot_row)?;
            // Update column membership for the symmetric difference.
            let mut a = old.iter().map(|e| e.0).peekable();
            let mut b = merged.iter().map(|e| e.0).peekable();
            loop {
                match (a.peek().copied(), b.peek().copied()) {
                    (None, None) => break,
                    (Some(x), Some(y)) if x == y => {
                        a.next();
                        b.next();
                    }
                    (Some(x), y) if y.is_none() || x < y.unwrap() => {
                        self.cols[x].remove(&i);
                        touched.insert(x);
                        a.next();
                    }
                    (_, Some(y)) => {
                        self.cols[y].insert(i);
                        touched.insert(y);
                        b.next();
                    }
                    _ => unreachable!(),
                }
            }
            self.rows[i] = merged;
        }
        for (col, _) in &pivot_row {
            self.cols[*col].remove(&r);
            touched.insert(*col);
        }
        self.row_alive[r] = false;
        self.col_alive[c] = false;
        self.diagonal.push(p.to_big());
        Some(touched.into_iter().collect())
    }

    /// The surviving nonzero submatrix, densely.
    fn remainder(&self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> = (0..self.cols.len())
            .filter(|&c| self.col_alive[c] && !self.cols[c].is_empty())
            .collect();
        let mut position = vec![usize::MAX; self.cols.len()];
        for (k, &c) in live_cols.iter().enumerate() {
            position[c] = k;
        }
        self.rows
            .iter()
            .enumerate()
            .filter(|(r, row)| self.row_alive[*r] && !row.is_empty())
            .map(|(_, row)| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for (c, v) in row {
                    dense[position[*c]] = v.to_big();
                }
                dense
            })
            .collect()
    }
}

/// `a - k * b` for sorted sparse rows.
fn sub_rows<T: Scalar>(a: &[(usize, T)], k: &T, b: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let zero = zero_like(&b[j].1);
            let v = zero.sub_mul(k, &b[j].1)?;
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = a[i].1.sub_mul(k, &b[j].1)?;
            if !v.is_nil() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn zero_like<T: Scalar>(x: &T) -> T {
    x.sub_mul(&x.quotient_of(x), x)
        .expect("x - 1 * x cannot overflow")
}

/// Invariant factors of a dense matrix (no transforms kept).
fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut noop = NoTransforms;
    for t in 0..rows.min(cols) {
        if !reduce_pivot(&mut a, t, &mut noop) {
            break;
        }
        out.push(a[t][t].clone());
    }
    out
}

/// Hooks mirroring each elementary operation on the transform matrices.
trait Recorder {
    fn swap_rows(&mut self, i: usize, j: usize);
    fn swap_cols(&mut self, i: usize, j: usize);
    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, q: &BigInt, j: usize);
    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, q: &BigInt, j: usize);
    fn negate_row(&mut self, i: usize);
}

struct NoTransforms;

impl Recorder for NoTransforms {
    fn swap_rows(&mut self, _: usize, _: usize) {}
    fn swap_cols(&mut self, _: usize, _: usize) {}
    fn row_sub(&mut self, _: usize, _: &BigInt, _: usize) {}
    fn col_sub(&mut self, _: usize, _: &BigInt, _: usize) {}
    fn negate_row(&mut self, _: usize) {}
}

/// Brings the submatrix from `(t, t)` to the form `diag(d) ⊕ A'` with `d`
/// positive and dividing every entry of `A'`. Returns false when the
/// submatrix is zero.
fn reduce_pivot<R: Recorder>(a: &mut [Vec<BigInt>], t: usize, rec: &mut R) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    loop {
        // Smallest nonzero magnitude moves to (t, t).
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            return false;
        };
        if bi != t {
            a.swap(bi, t);
            rec.swap_rows(bi, t);
        }
        if bj != t {
            for row in a.iter_mut() {
                row.swap(bj, t);
            }
            rec.swap_cols(bj, t);
        }

        let mut dirty = false;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in bottom[0].iter_mut().zip(&top[t]).skip(t) {
                    *x -= &q * y;
                }
                rec.row_sub(i, &q, t);
            }
            dirty |= !a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut().skip(t) {
                    let y = row[t].clone();
                    row[j] -= &q * y;
                }
                rec.col_sub(j, &q, t);
            }
            dirty |= !a[t][j].is_zero();
        }
        if dirty {
            continue;
        }
        // Pivot row and column are clear; enforce divisibility of the rest.
        let offender = (t + 1..rows).find(|&i| {
            a[i][t + 1..]
                .iter()
                .any(|v| !(v % &a[t][t]).is_zero())
        });
        match offender {
            Some(i) => {
                // row_t += row_i, i.e. row_t -= (-1) * row_i
                let minus_one = -BigInt::one();
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in top[t].iter_mut().zip(&bottom[0]).skip(t) {
                    *x += y;
                }
                rec.row_sub(t, &minus_one, i);
            }
            None => {
                if a[t][t].is_negative() {
                    for v in a[t].iter_mut().skip(t) {
                        *v = -&*v;
                    }
                    rec.negate_row(t);
                }
                return true;
            }
        }
    }
}

/// Dense Smith normal form with certificates: `u * m * v = d` where
/// `u_inv * u = 1` and `v * v_inv = 1`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
    /// Nonzero diagonal entries `d_1 | ... | d_r`.
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The diagonal matrix `d` as a dense `rows x cols` array.
    pub fn diagonal_matrix(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (k, x) in self.diagonal.iter().enumerate() {
            d[k][k] = x.clone();
        }
        d
    }

    /// Recomputes `u * m * v` and the two inverse products and compares them
    /// with the claimed diagonal and identities.
    pub fn verify(&self, m: &IntegerMatrix) -> bool {
        let dense = m.to_dense();
        let umv = dense_mul(&dense_mul(&self.u, &dense, self.rows), &self.v, self.cols);
        umv == self.diagonal_matrix()
            && dense_mul(&self.u_inv, &self.u, self.rows) == identity(self.rows)
            && dense_mul(&self.v, &self.v_inv, self.cols) == identity(self.cols)
            && self.diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
            && self.diagonal.iter().all(|x| x.is_positive())
    }
}

struct Transforms<'a> {
    u: &'a mut Vec<Vec<BigInt>>,
    u_inv: &'a mut Vec<Vec<BigInt>>,
    v: &'a mut Vec<Vec<BigInt>>,
    v_inv: &'a mut Vec<Vec<BigInt>>,
}

impl Recorder for Transforms<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }
    fn row_sub(&mut self, i: usize, q: &BigInt, j: usize) {
        // E = 1 - q e_i e_j^T acts on u from the left; u_inv picks up
        // E^{-1} = 1 + q e_i e_j^T on the right: col_j += q col_i.
        let (ri, rj) = pair_mut(self.u, i, j);
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            *x -= q * y;
        }
        for row in self.u_inv.iter_mut() {
            let y = row[i].clone();
            row[j] += q * y;
        }
    }
    fn col_sub(&mut self, i: usize, q: &BigInt, j: usize) {
        // F = 1 - q e_j e_i^T acts on v from the right; v_inv picks up
        // F^{-1} on the left: row_j += q row_i.
        for row in self.v.iter_mut() {
            let y = row[j].clone();
            row[i] -= q * y;
        }
        let (rj, ri) = pair_mut(self.v_inv, j, i);
        for (x, y) in rj.iter_mut().zip(ri.iter()) {
            *x += q * y;
        }
    }
    fn negate_row(&mut self, i: usize) {
        for v in self.u[i].iter_mut() {
            *v = -&*v;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

pub fn smith_with_transforms(m: &IntegerMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.to_dense();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let mut diagonal = Vec::new();
    {
        let mut rec = Transforms {
            u: &mut u,
            u_inv: &mut u_inv,
            v: &mut v,
            v_inv: &mut v_inv,
        };
        for t in 0..rows.min(cols) {
            if !reduce_pivot(&mut a, t, &mut rec) {
                break;
            }
            diagonal.push(a[t][t].clone());
        }
    }
    SmithDecomposition {
        u,
        u_inv,
        v,
        v_inv,
        diagonal,
        rows,
        cols,
    }
}

pub fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = BigInt::one();
            row
        })
        .collect()
}

/// Product of dense matrices; `inner` is the shared dimension, needed when
/// the left factor has no rows.
pub fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize) -> Vec<Vec<BigInt>> {
    let out_cols = b.first().map_or(0, Vec::len);
    debug_assert!(a.iter().all(|r| r.len() == inner) && b.len() == inner);
    a.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); out_cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rational_rank(m: &IntegerMatrix) -> usize {
    let mut a = m.to_dense();
    let rows = m.rows();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
