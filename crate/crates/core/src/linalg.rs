//! Exact sparse rational matrices and fraction-free elimination.
//!
//! Projectors on tensor powers are large but very sparse for the systems we
//! care about (diagonal for word systems, block structured for symmetric
//! powers), so rows store only their nonzero entries.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Sparse row: `(column, value)` pairs sorted by column, no stored zeros.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal((0..size).map(|_| Rational::one()))
    }

    pub fn diagonal(entries: impl IntoIterator<Item = Rational>) -> Self {
        let data: Vec<SparseRow> = entries
            .into_iter()
            .enumerate()
            .map(|(i, q)| {
                if q.is_zero() {
                    Vec::new()
                } else {
                    vec![(i, q)]
                }
            })
            .collect();
        QMatrix {
            rows: data.len(),
            cols: data.len(),
            data,
        }
    }

    pub fn from_dense(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let data = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .collect()
            })
            .collect::<Vec<_>>();
        QMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions add up.
    pub fn from_triples(
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (i, j, q) in triples {
            assert!(i < rows && j < cols, "entry ({i},{j}) out of bounds");
            *acc[i].entry(j).or_insert_with(Rational::zero) += q;
        }
        QMatrix {
            rows,
            cols,
            data: acc.into_iter().map(finish_row).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.data[i][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.cols];
                for (j, q) in row {
                    dense[*j] = q.clone();
                }
                dense
            })
            .collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, q) in row {
                data[*j].push((i, q.clone()));
            }
        }
        QMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == 1 && row[0].0 == i && row[0].1.is_one())
    }

    pub fn scale(&self, factor: &Rational) -> QMatrix {
        if factor.is_zero() {
            return QMatrix::zeros(self.rows, self.cols);
        }
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(j, q)| (*j, q * factor)).collect())
                .collect(),
        }
    }

    /// Kronecker product `self ⊗ other`, with row index `i·rows(other) + k`.
    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for left in &self.data {
            for right in &other.data {
                let mut row = Vec::with_capacity(left.len() * right.len());
                for (j, p) in left {
                    for (l, q) in right {
                        row.push((j * other.cols + l, p * q));
                    }
                }
                data.push(row);
            }
        }
        QMatrix {
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            data,
        }
    }

    /// Rank by fraction-free elimination over the integers.
    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new();
        for row in &self.data {
            basis.insert(row);
        }
        basis.rank()
    }
}

fn finish_row(acc: BTreeMap<usize, Rational>) -> SparseRow {
    acc.into_iter().filter(|(_, q)| !q.is_zero()).collect()
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, p) in row {
                    for (j, q) in &rhs.data[*k] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += p * q;
                    }
                }
                finish_row(acc)
            })
            .collect();
        QMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }
}

/// Sparse integer vector, sorted by index, no zeros.
type IntRow = Vec<(usize, BigInt)>;

/// Incrementally built row-echelon basis over ℤ.
///
/// Each inserted vector is cleared of denominators and then reduced against
/// the stored rows by cross-multiplication (`v ← p·v − v[c]·b` for a stored
/// row `b` with pivot `p` at column `c`), dividing out the content after each
/// step. No fractions appear and every intermediate stays primitive.
#[derive(Debug, Default, Clone)]
pub struct EchelonBasis {
    rows: Vec<(usize, IntRow)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a rational vector; returns whether it was independent of the
    /// vectors inserted before.
    pub fn insert(&mut self, vector: &[(usize, Rational)]) -> bool {
        let mut v = clear_denominators(vector);
        for (pivot_col, basis_row) in &self.rows {
            let coefficient = match v.binary_search_by_key(pivot_col, |(c, _)| *c) {
                Ok(k) => v[k].1.clone(),
                Err(_) => continue,
            };
            let pivot = &basis_row[0].1;
            v = combine(&v, pivot, basis_row, &coefficient);
            make_primitive(&mut v);
        }
        match v.first() {
            None => false,
            Some(&(col, _)) => {
                self.rows.push((col, v));
                true
            }
        }
    }
}

fn clear_denominators(vector: &[(usize, Rational)]) -> IntRow {
    let lcm = vector
        .iter()
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let mut row: IntRow = vector
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(j, q)| (*j, q.numer() * (&lcm / q.denom())))
        .collect();
    make_primitive(&mut row);
    row
}

/// `a·v − b·w` for sparse sorted rows.
fn combine(v: &IntRow, a: &BigInt, w: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j == w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i == v.len() || (j < w.len() && w[j].0 < v[i].0);
        let (col, value) = if take_v {
            let r = (v[i].0, a * &v[i].1);
            i += 1;
            r
        } else if take_w {
            let r = (w[j].0, -(b * &w[j].1));
            j += 1;
            r
        } else {
            let r = (v[i].0, a * &v[i].1 - b * &w[j].1);
            i += 1;
            j += 1;
            r
        };
        if !value.is_zero() {
            out.push((col, value));
        }
    }
    out
}

fn make_primitive(row: &mut IntRow) {
    let content = row.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if content.is_zero() || content.is_one() {
        return;
    }
    for (_, x) in row.iter_mut() {
        *x = &*x / &content;
    }
}

/// Parses a canonical fraction: `"p"` for integers, `"p/q"` with `q > 1`
/// and `gcd(p, q) = 1` otherwise. `"-0"`, `"+1"`, `"2/4"`, `"3/1"` are rejected.
pub fn parse_rational(text: &str) -> Option<Rational> {
    fn parse_int(s: &str) -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty()
            || !digits.bytes().all(|b| b.is_ascii_digit())
            || (digits.len() > 1 && digits.starts_with('0'))
        {
            return None;
        }
        let value: BigInt = s.parse().ok()?;
        if s.starts_with('-') && value.is_zero() {
            return None;
        }
        Some(value)
    }
    match text.split_once('/') {
        None => parse_int(text).map(Rational::from_integer),
        Some((p, q)) => {
            let numer = parse_int(p)?;
            let denom = parse_int(q)?;
            if !denom.is_positive() || denom.is_one() || !numer.gcd(&denom).is_one() {
                return None;
            }
            Some(Rational::new_raw(numer, denom))
        }
    }
}

/// Canonical text of a rational, inverse of [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
