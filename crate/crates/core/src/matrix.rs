//! Sparse integer matrices with arbitrary-precision entries.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Column-major sparse matrix; each column is sorted by row and never stores
/// a zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, BigInt::one())]).collect(),
        }
    }

    /// Sums duplicate entries and drops zeros.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            columns[c].push((r, v));
        }
        for col in &mut columns {
            normalize(col);
        }
        Self { rows, cols, columns }
    }

    /// Builds from small-integer columns, e.g. the output of a pullback.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|col| {
                let mut col: Vec<(usize, BigInt)> = col
                    .into_iter()
                    .map(|(r, v)| {
                        assert!(r < rows, "row {r} outside {rows}");
                        (r, BigInt::from(v))
                    })
                    .collect();
                normalize(&mut col);
                col
            })
            .collect();
        Self { rows, cols, columns }
    }

    pub fn from_dense(dense: &[Vec<BigInt>], cols: usize) -> Self {
        let rows = dense.len();
        Self::from_triplets(
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(c, v)| (r, c, v.clone()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v.clone();
        }
        d
    }

    /// `self * other`.
    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, BigInt)> = Vec::new();
                for (k, b) in col {
                    for (r, a) in &self.columns[*k] {
                        acc.push((*r, a * b));
                    }
                }
                normalize(&mut acc);
                acc
            })
            .collect();
        IntegerMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in product");
        let mut out = vec![BigInt::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in &self.columns[c] {
                out[*r] += a * x;
            }
        }
        out
    }

    pub fn add(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets()
                .chain(other.triplets())
                .map(|(r, c, v)| (r, c, v.clone())),
        )
    }

    pub fn scale(&self, k: &BigInt) -> IntegerMatrix {
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().map(|(r, c, v)| (r, c, v * k)),
        )
    }

    /// Relabels rows and columns: entry `(r, c)` moves to
    /// `(row_perm[r], col_perm[c])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> IntegerMatrix {
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets()
                .map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone())),
        )
    }
}

fn normalize(col: &mut Vec<(usize, BigInt)>) {
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(col.len());
    for (r, v) in col.drain(..) {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *col = out;
}
