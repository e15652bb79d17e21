//! Exact right kernels of rational matrices.
//!
//! Rows are scaled to primitive integer vectors and reduced by integer
//! cross-multiplication, so no fractions appear during elimination.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{Integer, Rational};

/// Dense rectangular matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            entries.extend(r);
        }
        RationalMatrix { rows: n, cols, entries }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut s = SparseMatrix::new(self.cols);
        for i in 0..self.rows {
            s.push_row(self.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())));
        }
        s
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Row-sparse matrix used for assembling large operator matrices.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Entries may come in any order; duplicates are summed.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, x) in entries {
            assert!(j < self.cols, "column {j} out of range");
            *acc.entry(j).or_insert_with(Rational::zero) += x;
        }
        self.rows.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
    }
}

type Row = Vec<(usize, Integer)>;

fn primitive(row: &[(usize, Rational)]) -> Row {
    let mut l = Integer::one();
    for (_, x) in row {
        l = l.lcm(x.denom());
    }
    let mut out: Row = row.iter().map(|(j, x)| (*j, x.numer() * (&l / x.denom()))).collect();
    make_primitive(&mut out);
    out
}

/// Divides by the content and makes the leading entry positive.
fn make_primitive(row: &mut Row) {
    let mut g = Integer::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a*r - b*s`, merged by column, zeros dropped.
fn combine(a: &Integer, r: &Row, b: &Integer, s: &Row) -> Row {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = s.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, a * &r[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &s[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &s[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &Row, col: usize) -> Option<&Integer> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Eliminates every pivot column of `pivots` from `row`, scanning columns left to right.
fn reduce(mut row: Row, pivots: &BTreeMap<usize, Row>) -> Row {
    let mut from = 0usize;
    loop {
        let hit = row.iter().find(|(c, _)| *c >= from && pivots.contains_key(c)).map(|(c, x)| (*c, x.clone()));
        let Some((c, x)) = hit else {
            return row;
        };
        let p = &pivots[&c];
        let lead = &p[0].1;
        let g = lead.gcd(&x);
        row = combine(&(lead / &g), &row, &(&x / &g), p);
        if row.is_empty() {
            return row;
        }
        make_primitive(&mut row);
        from = c + 1;
    }
}

/// Basis of the right kernel of `m`, ordered by free column, each vector
/// scaled so that its first nonzero entry is 1.
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    nullspace_sparse(&m.to_sparse())
}

pub fn nullspace_sparse(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for r in &m.rows {
        if r.is_empty() {
            continue;
        }
        let row = reduce(primitive(r), &pivots);
        if let Some(&(c, _)) = row.first() {
            pivots.insert(c, row);
        }
    }
    // Back-substitution to reduced echelon form, last pivot first.
    let cols: Vec<usize> = pivots.keys().copied().collect();
    for &c in cols.iter().rev() {
        let p = pivots[&c].clone();
        let lead = p[0].1.clone();
        for &c2 in cols.iter().filter(|&&c2| c2 < c) {
            let r = pivots.get_mut(&c2).unwrap();
            if let Some(x) = entry(r, c).cloned() {
                let g = lead.gcd(&x);
                let mut next = combine(&(&lead / &g), r, &(&x / &g), &p);
                make_primitive(&mut next);
                *r = next;
            }
        }
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains_key(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (&c, row) in &pivots {
            if let Some(x) = entry(row, free) {
                let lead = &row[0].1;
                v[c] = -Rational::from_parts(x.clone(), lead.clone()).expect("pivot is nonzero");
            }
        }
        let first = v.iter().find(|x| !x.is_zero()).cloned().expect("free column is nonzero");
        let inv = first.inv().expect("nonzero");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        basis.push(v);
    }
    basis
}

/// Rank of `m` (number of pivots found by the same elimination).
pub fn rank(m: &RationalMatrix) -> usize {
    m.cols - nullspace(m).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    /// Textbook Gauss-Jordan over the rationals on a dense copy.
    fn dense_kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
        let (rows, cols) = (m.rows(), m.cols());
        let mut a: Vec<Vec<Rational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
        let mut piv = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = a[r][c].inv().unwrap();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= &t;
                    }
                }
            }
            piv.push(c);
            r += 1;
        }
        let mut out = Vec::new();
        for free in (0..cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = -a[i][free].clone();
            }
            out.push(v);
        }
        out
    }

    /// Whether `v` is a rational combination of `basis` (rank test by elimination).
    fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
        if basis.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        let n = v.len();
        let with = RationalMatrix::from_rows(n, basis.iter().cloned().chain([v.to_vec()]).collect());
        let without = RationalMatrix::from_rows(n, basis.to_vec());
        transpose_rank(&with) == transpose_rank(&without)
    }

    fn transpose_rank(m: &RationalMatrix) -> usize {
        let t = RationalMatrix::from_rows(
            m.rows(),
            (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j).clone()).collect()).collect(),
        );
        t.cols() - dense_kernel(&t).len()
    }

    #[test]
    fn small_examples() {
        assert!(nullspace(&RationalMatrix::identity(3)).is_empty());
        assert_eq!(nullspace(&RationalMatrix::from_ints(&[&[1, 1]])), vec![vec![q(1, 1), q(-1, 1)]]);
        let z = RationalMatrix::zeros(2, 2);
        assert_eq!(nullspace(&z), vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
        let m = RationalMatrix::from_rows(3, vec![vec![q(1, 2), q(1, 3), q(0, 1)], vec![q(0, 1), q(2, 5), q(-4, 15)]]);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        assert!(k[0][0].is_one());
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, rank: usize) -> RationalMatrix {
        let left: Vec<Vec<i64>> = (0..rows).map(|_| (0..rank).map(|_| rng.gen_range(-3..4)).collect()).collect();
        let right: Vec<Vec<i64>> = (0..rank).map(|_| (0..cols).map(|_| rng.gen_range(-3..4)).collect()).collect();
        let mut m = RationalMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let s: i64 = (0..rank).map(|t| left[i][t] * right[t][j]).sum();
                m.set(i, j, q(s, rng.gen_range(1..4)));
            }
        }
        m
    }

    #[test]
    fn agrees_with_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..60 {
            let (rows, cols) = if trial < 30 { (5, 8) } else { (rng.gen_range(1..9), rng.gen_range(1..9)) };
            let r = rng.gen_range(0..=rows.min(cols));
            let m = random_matrix(&mut rng, rows, cols, r);
            let got = nullspace(&m);
            let want = dense_kernel(&m);
            assert_eq!(got.len(), want.len(), "{m:?}");
            for v in &got {
                assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
                assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_one());
                assert!(in_span(&want, v));
            }
        }
    }

    #[test]
    fn span_is_independent_of_column_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let (rows, cols) = (rng.gen_range(1..7), rng.gen_range(2..9));
            let r = rng.gen_range(0..=rows.min(cols));
            let m = random_matrix(&mut rng, rows, cols, r);
            let rev = RationalMatrix::from_rows(cols, (0..rows).map(|i| m.row(i).iter().rev().cloned().collect()).collect());
            let a = nullspace(&m);
            let b: Vec<Vec<Rational>> = nullspace(&rev).into_iter().map(|v| v.into_iter().rev().collect()).collect();
            assert_eq!(a.len(), b.len());
            assert!(a.iter().all(|v| in_span(&b, v)));
            assert!(b.iter().all(|v| in_span(&a, v)));
        }
    }

    #[test]
    fn sparse_rows_sum_duplicates() {
        let mut s = SparseMatrix::new(3);
        s.push_row([(2, q(1, 1)), (0, q(1, 2)), (2, q(-1, 1))]);
        assert_eq!(nullspace_sparse(&s).len(), 2);
    }
}
