//! Sparse exact linear algebra: echelon forms, rank, kernels, quotient bases.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalars::{FieldSpec, Scalar};

/// Below this size, elimination runs on a dense array.
pub const DENSE_CUTOFF: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("index {0} out of range {1}")]
    OutOfRange(usize, usize),
}

/// A sparse coordinate vector: sorted indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: FieldSpec) -> Self {
        SparseVec { entries: vec![(i, field.one())] }
    }

    /// Builds a vector from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, Scalar)>>(it: I) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in it {
            match map.get_mut(&i) {
                Some(x) => *x = &*x + &c,
                None => {
                    map.insert(i, c);
                }
            }
        }
        SparseVec { entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Entries must already be sorted by index and nonzero.
    pub fn from_sorted(entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, c)| !c.is_zero()));
        SparseVec { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let s = &a[i].1 + &(&b[j].1 * c);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(&c.field().one(), other),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(&-c.field().one(), other),
        }
    }

    /// Re-indexes entries through `f`; entries mapped to `None` are dropped.
    pub fn remap<F: Fn(usize) -> Option<usize>>(&self, f: F) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))))
    }

    pub fn dot(&self, other: &SparseVec) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let p = &a[i].1 * &b[j].1;
                    acc = Some(match acc {
                        None => p,
                        Some(s) => &s + &p,
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// A sparse matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        SparseMatrix { rows, cols, field, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let data = (0..n).map(|i| SparseVec::unit(i, field)).collect();
        SparseMatrix { rows: n, cols: n, field, data }
    }

    pub fn from_rows(cols: usize, field: FieldSpec, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|m| m < cols)));
        SparseMatrix { rows: rows.len(), cols, field, data: rows }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, field: FieldSpec, columns: &[SparseVec]) -> Self {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter() {
                buckets[*i].push((j, x.clone()));
            }
        }
        let data = buckets.into_iter().map(SparseVec::from_sorted).collect();
        SparseMatrix { rows, cols: columns.len(), field, data }
    }

    /// Builds a matrix from integer rows (dense literal).
    pub fn from_dense_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| SparseVec::from_entries(r.iter().enumerate().map(|(j, &x)| (j, field.from_i64(x)))))
            .collect();
        SparseMatrix { rows: rows.len(), cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(c).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) -> Result<(), LinalgError> {
        if r >= self.rows {
            return Err(LinalgError::OutOfRange(r, self.rows));
        }
        if c >= self.cols {
            return Err(LinalgError::OutOfRange(c, self.cols));
        }
        if v.field() != self.field {
            return Err(LinalgError::FieldMismatch);
        }
        let mut e: Vec<(usize, Scalar)> = self.data[r].entries.iter().filter(|x| x.0 != c).cloned().collect();
        if !v.is_zero() {
            e.push((c, v));
            e.sort_by_key(|x| x.0);
        }
        self.data[r] = SparseVec { entries: e };
        Ok(())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.nnz()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.cols, self.field, &self.data)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_sorted(
            self.data
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.dot(v).filter(|s| !s.is_zero()).map(|s| (i, s)))
                .collect(),
        )
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = SparseVec::new();
                for (k, c) in r.iter() {
                    acc = acc.add_scaled(c, &other.data[*k]);
                }
                acc
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, field: self.field, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }
}

/// Incremental semi-echelon form: each stored row is normalized at its leading index,
/// and no stored row has an entry at another row's pivot that precedes it.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldSpec,
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
    track: Option<Vec<SparseVec>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Echelon { field, rows: Vec::new(), pivots: BTreeMap::new(), track: None, inserted: 0 }
    }

    /// Also records, for every stored row, its expression in the inserted vectors.
    pub fn tracking(field: FieldSpec) -> Self {
        Echelon { track: Some(Vec::new()), ..Echelon::new(field) }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivots.contains_key(&i)
    }

    fn reduce_inner(&self, v: &SparseVec, mut comb: Option<SparseVec>) -> (SparseVec, Option<SparseVec>) {
        let mut v = v.clone();
        let mut k = 0;
        while k < v.entries.len() {
            let (idx, c) = (v.entries[k].0, v.entries[k].1.clone());
            match self.pivots.get(&idx) {
                Some(&r) => {
                    let neg = -&c;
                    v = v.add_scaled(&neg, &self.rows[r]);
                    if let (Some(cb), Some(t)) = (comb.as_mut(), self.track.as_ref()) {
                        *cb = cb.add_scaled(&neg, &t[r]);
                    }
                    k = v.entries.partition_point(|e| e.0 <= idx);
                }
                None => k += 1,
            }
        }
        (v, comb)
    }

    /// Remainder of `v` after eliminating all pivot positions.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_inner(v, None).0
    }

    /// Writes `v = sum c_i * inserted_i + remainder` and returns `(remainder, c)`.
    /// Only available on tracking echelons.
    pub fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        assert!(self.track.is_some(), "echelon was not created with tracking");
        let (rem, comb) = self.reduce_inner(v, Some(SparseVec::new()));
        (rem, comb.unwrap().neg())
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns its new pivot when it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let idx = self.inserted;
        self.inserted += 1;
        let start = self.track.as_ref().map(|_| SparseVec::unit(idx, self.field));
        let (rem, comb) = self.reduce_inner(v, start);
        let lead = rem.leading()?;
        let inv = rem.entries[0].1.inv().expect("nonzero leading entry");
        let row = rem.scale(&inv);
        if let (Some(t), Some(cb)) = (self.track.as_mut(), comb) {
            t.push(cb.scale(&inv));
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        Some(lead)
    }

    /// Canonical reduced row echelon basis of the span.
    pub fn into_subspace(self, ambient_dim: usize) -> Subspace {
        let field = self.field;
        let mut order: Vec<(usize, usize)> = self.pivots.iter().map(|(&p, &r)| (p, r)).collect();
        order.sort();
        let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &(p, r) in order.iter().rev() {
            let mut v = self.rows[r].clone();
            let mut k = 1;
            while k < v.entries.len() {
                let idx = v.entries[k].0;
                match reduced.get(&idx) {
                    Some(row) => {
                        let neg = -&v.entries[k].1;
                        v = v.add_scaled(&neg, row);
                        k = v.entries.partition_point(|e| e.0 <= idx);
                    }
                    None => k += 1,
                }
            }
            reduced.insert(p, v);
        }
        Subspace { ambient_dim, field, basis: reduced.into_values().collect() }
    }
}

/// A subspace of `k^n` held in canonical reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    field: FieldSpec,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, field: FieldSpec) -> Self {
        Subspace { ambient_dim, field, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize, field: FieldSpec) -> Self {
        Subspace { ambient_dim, field, basis: (0..ambient_dim).map(|i| SparseVec::unit(i, field)).collect() }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a SparseVec>>(ambient_dim: usize, field: FieldSpec, vs: I) -> Self {
        let mut e = Echelon::new(field);
        for v in vs {
            e.insert(v);
        }
        e.into_subspace(ambient_dim)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|v| v.leading().unwrap()).collect()
    }

    fn pivot_row(&self, idx: usize) -> Option<&SparseVec> {
        self.basis
            .binary_search_by_key(&idx, |v| v.leading().unwrap())
            .ok()
            .map(|k| &self.basis[k])
    }

    /// Remainder of `v` modulo the subspace; supported on non-pivot columns only.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (idx, c) in v.iter() {
            if let Some(row) = self.pivot_row(*idx) {
                out = out.add_scaled(&-c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of a member with respect to the canonical basis.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        let piv = self.pivots();
        Some(SparseVec::from_sorted(
            piv.iter()
                .enumerate()
                .filter_map(|(k, p)| v.get(*p).map(|c| (k, c.clone())))
                .collect(),
        ))
    }

    pub fn canonicalize(&self) -> Subspace {
        Subspace::from_vectors(self.ambient_dim, self.field, self.basis.iter())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(Subspace::from_vectors(self.ambient_dim, self.field, self.basis.iter().chain(other.basis.iter())))
    }
}

fn dense_rref(m: &SparseMatrix) -> Subspace {
    let (r, c, f) = (m.rows, m.cols, m.field);
    let zero = f.zero();
    let mut a: Vec<Vec<Scalar>> = (0..r)
        .map(|i| {
            let mut row = vec![zero.clone(); c];
            for (j, x) in m.data[i].iter() {
                row[*j] = x.clone();
            }
            row
        })
        .collect();
    let mut prow = 0;
    for col in 0..c {
        if prow == r {
            break;
        }
        let Some(sel) = (prow..r).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(prow, sel);
        let inv = a[prow][col].inv().unwrap();
        for j in col..c {
            a[prow][j] = &a[prow][j] * &inv;
        }
        for i in 0..r {
            if i != prow && !a[i][col].is_zero() {
                let fac = a[i][col].clone();
                for j in col..c {
                    if !a[prow][j].is_zero() {
                        a[i][j] = &a[i][j] - &(&fac * &a[prow][j]);
                    }
                }
            }
        }
        prow += 1;
    }
    let basis = a
        .into_iter()
        .take(prow)
        .map(|row| SparseVec::from_sorted(row.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()))
        .collect();
    Subspace { ambient_dim: c, field: f, basis }
}

/// Canonical row space of `m`.
pub fn row_space(m: &SparseMatrix) -> Subspace {
    if m.rows < DENSE_CUTOFF && m.cols < DENSE_CUTOFF {
        dense_rref(m)
    } else {
        Subspace::from_vectors(m.cols, m.field, m.data.iter())
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    row_space(m).dim()
}

/// Right null space `{x : m x = 0}`.
pub fn kernel(m: &SparseMatrix) -> Subspace {
    let rs = row_space(m);
    let piv = rs.pivots();
    let is_piv: std::collections::HashSet<usize> = piv.iter().copied().collect();
    let f = m.field;
    let mut vs = Vec::new();
    for free in (0..m.cols).filter(|j| !is_piv.contains(j)) {
        let mut e = vec![(free, f.one())];
        for (k, row) in rs.basis.iter().enumerate() {
            if let Some(x) = row.get(free) {
                e.push((piv[k], -x));
            }
        }
        vs.push(SparseVec::from_entries(e));
    }
    Subspace::from_vectors(m.cols, f, vs.iter())
}

/// Column space of `m`.
pub fn image(m: &SparseMatrix) -> Subspace {
    row_space(&m.transpose())
}

/// Standard basis indices complementing `sub` (its non-pivot columns).
pub fn quotient_basis(sub: &Subspace) -> Vec<usize> {
    let piv: std::collections::HashSet<usize> = sub.pivots().into_iter().collect();
    (0..sub.ambient_dim).filter(|j| !piv.contains(j)).collect()
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LinalgError::AmbientMismatch(a.ambient_dim, b.ambient_dim));
    }
    let residues: Vec<SparseVec> = a.basis.iter().map(|v| b.reduce(v)).collect();
    let m = SparseMatrix::from_columns(a.ambient_dim, a.field, &residues);
    let ker = kernel(&m);
    let vs: Vec<SparseVec> = ker
        .basis
        .iter()
        .map(|alpha| {
            let mut acc = SparseVec::new();
            for (i, c) in alpha.iter() {
                acc = acc.add_scaled(c, &a.basis[*i]);
            }
            acc
        })
        .collect();
    Ok(Subspace::from_vectors(a.ambient_dim, a.field, vs.iter()))
}

/// Some `x` with `m x = b`, if one exists.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let cols = m.transpose();
    let mut e = Echelon::tracking(m.field);
    for c in cols.row_vectors() {
        e.insert(c);
    }
    let (rem, comb) = e.reduce_tracked(b);
    rem.is_zero().then_some(comb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_entries(xs.iter().enumerate().map(|(i, &x)| (i, q().from_i64(x))))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(2, q())), 2);
        assert_eq!(rank(&SparseMatrix::zero(3, 4, q())), 0);
        assert_eq!(rank(&SparseMatrix::from_dense_i64(q(), &[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&SparseMatrix::identity(3, q())).dim(), 0);
        assert_eq!(kernel(&SparseMatrix::zero(3, 3, q())).dim(), 3);
        let k = kernel(&SparseMatrix::from_dense_i64(q(), &[vec![1, 1]]));
        assert_eq!(k.basis(), &[v(&[1, -1])]);
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_basis(&Subspace::zero(2, q())), vec![0, 1]);
        assert!(quotient_basis(&Subspace::full(2, q())).is_empty());
        let s = Subspace::from_vectors(3, q(), [v(&[1, 0, 0])].iter());
        assert_eq!(quotient_basis(&s), vec![1, 2]);
    }

    #[test]
    fn intersect_examples() {
        let a = Subspace::from_vectors(3, q(), [v(&[1, 0, 0]), v(&[0, 1, 0])].iter());
        let b = Subspace::from_vectors(3, q(), [v(&[0, 1, 0]), v(&[0, 0, 1])].iter());
        assert_eq!(intersect(&a, &b).unwrap().basis(), &[v(&[0, 1, 0])]);
        assert_eq!(intersect(&a, &a).unwrap(), a);
        let l1 = Subspace::from_vectors(2, q(), [v(&[1, 1])].iter());
        let l2 = Subspace::from_vectors(2, q(), [v(&[1, -1])].iter());
        assert_eq!(intersect(&l1, &l2).unwrap().dim(), 0);
        assert!(intersect(&a, &l1).is_err());
    }

    #[test]
    fn dense_and_sparse_agree() {
        let rows: Vec<Vec<i64>> = (0..70).map(|i| (0..70).map(|j| ((i * 7 + j * 3) % 5) as i64 - 2).collect()).collect();
        let m = SparseMatrix::from_dense_i64(q(), &rows);
        let sparse = Subspace::from_vectors(70, q(), m.row_vectors().iter());
        let small = SparseMatrix::from_rows(70, q(), m.row_vectors()[..10].to_vec());
        assert_eq!(dense_rref(&m), sparse);
        assert_eq!(dense_rref(&small), Subspace::from_vectors(70, q(), small.row_vectors().iter()));
    }

    #[test]
    fn solve_and_track() {
        let m = SparseMatrix::from_dense_i64(q(), &[vec![1, 2], vec![3, 4]]);
        let x = solve(&m, &v(&[5, 6])).unwrap();
        assert_eq!(m.mul_vec(&x), v(&[5, 6]));
        let sing = SparseMatrix::from_dense_i64(q(), &[vec![1, 2], vec![2, 4]]);
        assert!(solve(&sing, &v(&[1, 0])).is_none());
    }
}
