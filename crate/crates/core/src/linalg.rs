//! Exact dense linear algebra: small matrices, incremental row echelon
//! forms, kernels and subspace bases.
//!
//! Over `Q` rows are cleared to integer vectors and eliminated
//! fraction-free (`r ← q_c·r − r_c·q`, then divided by its content); over
//! `F_p` elimination is the ordinary one with monic pivots. Pivots are the
//! first nonzero column, so results are deterministic.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::comb::Combination;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let field = self.field_hint().or(other.field_hint());
        let mut out = Matrix {
            rows: self.rows,
            cols: other.cols,
            data: Vec::with_capacity(self.rows * other.cols),
        };
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<Scalar> = None;
                for k in 0..self.cols {
                    let t = self.get(i, k) * other.get(k, j);
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a + t,
                    });
                }
                out.data
                    .push(acc.unwrap_or_else(|| field.expect("field of empty product").zero()));
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, field: Field, exp: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(field, self.rows);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    fn field_hint(&self) -> Option<Field> {
        self.data.first().map(Scalar::field)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn first_nonzero<T>(row: &[T], is_zero: impl Fn(&T) -> bool) -> Option<usize> {
    row.iter().position(|v| !is_zero(v))
}

#[derive(Clone, Debug)]
enum Rows {
    Integer(Vec<(usize, Vec<BigInt>)>),
    Modular { p: u64, rows: Vec<(usize, Vec<u64>)> },
}

/// Row echelon form grown one row at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Rows,
}

fn to_integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in row {
        let (_, d) = v.to_ratio();
        lcm = lcm.lcm(&d);
    }
    row.iter()
        .map(|v| {
            let (n, d) = v.to_ratio();
            n * (&lcm / d)
        })
        .collect()
}

fn normalize_integer_row(row: &mut [BigInt], pivot: usize) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
        }
    }
    if row[pivot].is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Self {
        let rows = match field {
            Field::Rational => Rows::Integer(Vec::new()),
            Field::Prime(p) => Rows::Modular {
                p: p as u64,
                rows: Vec::new(),
            },
        };
        Self { field, ncols, rows }
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Integer(r) => r.len(),
            Rows::Modular { rows, .. } => rows.len(),
        }
    }

    /// Inserts a row; returns `true` if it was independent of the rows
    /// already present.
    pub fn insert(&mut self, row: &[Scalar]) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        match &mut self.rows {
            Rows::Integer(rows) => {
                let mut r = to_integer_row(row);
                for (pc, q) in rows.iter() {
                    if r[*pc].is_zero() {
                        continue;
                    }
                    let a = q[*pc].clone();
                    let b = r[*pc].clone();
                    let g = a.gcd(&b);
                    let (a, b) = (&a / &g, &b / &g);
                    for (x, y) in r.iter_mut().zip(q) {
                        *x = &a * &*x - &b * y;
                    }
                }
                match first_nonzero(&r, BigInt::is_zero) {
                    Some(pc) => {
                        normalize_integer_row(&mut r, pc);
                        rows.push((pc, r));
                        true
                    }
                    None => false,
                }
            }
            Rows::Modular { p, rows } => {
                let p = *p;
                let mut r: Vec<u64> = row
                    .iter()
                    .map(|s| match s {
                        Scalar::Modular { value, .. } => *value as u64,
                        Scalar::Rational(_) => panic!("rational scalar in a prime-field echelon"),
                    })
                    .collect();
                for (pc, q) in rows.iter() {
                    let f = r[*pc];
                    if f == 0 {
                        continue;
                    }
                    for (x, y) in r.iter_mut().zip(q) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
                match first_nonzero(&r, |v| *v == 0) {
                    Some(pc) => {
                        let inv = mod_inv(r[pc], p);
                        for x in r.iter_mut() {
                            *x = *x * inv % p;
                        }
                        rows.push((pc, r));
                        true
                    }
                    None => false,
                }
            }
        }
    }

    /// Reduced row echelon form: rows sorted by pivot, monic pivots, pivot
    /// columns cleared elsewhere.
    pub fn rref(&self) -> Vec<(usize, Vec<Scalar>)> {
        let field = self.field;
        let mut rows: Vec<(usize, Vec<Scalar>)> = match &self.rows {
            Rows::Integer(rows) => rows
                .iter()
                .map(|(pc, r)| {
                    let inv = field.from_bigint(&r[*pc]).inv().expect("pivot");
                    (*pc, r.iter().map(|v| field.from_bigint(v) * &inv).collect())
                })
                .collect(),
            Rows::Modular { rows, .. } => rows
                .iter()
                .map(|(pc, r)| (*pc, r.iter().map(|v| field.from_i64(*v as i64)).collect()))
                .collect(),
        };
        rows.sort_by_key(|(pc, _)| *pc);
        for k in (0..rows.len()).rev() {
            let (pc, pivot_row) = (rows[k].0, rows[k].1.clone());
            for (_, other) in rows.iter_mut().take(k) {
                let f = other[pc].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        rows
    }
}

/// Kernel of the linear map whose matrix has the given rows, as a list of
/// basis vectors (one per free column).
pub fn kernel_of_rows(field: Field, ncols: usize, rows: impl IntoIterator<Item = Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(field, ncols);
    for r in rows {
        if ech.rank() == ncols {
            break;
        }
        ech.insert(&r);
    }
    nullspace_from_rref(field, ncols, &ech.rref())
}

fn nullspace_from_rref(field: Field, ncols: usize, rref: &[(usize, Vec<Scalar>)]) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; ncols];
    for (pc, _) in rref {
        is_pivot[*pc] = true;
    }
    (0..ncols)
        .filter(|c| !is_pivot[*c])
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (pc, row) in rref {
                v[*pc] = -&row[free];
            }
            v
        })
        .collect()
}

/// Kernel of a linear map `span(ambient) → Combination<T>` given the image
/// of each ambient basis vector.
pub fn kernel_of_images<T: Ord + Clone>(field: Field, images: &[Combination<T>]) -> Vec<Vec<Scalar>> {
    let mut row_of: alloc::collections::BTreeMap<&T, Vec<Scalar>> = alloc::collections::BTreeMap::new();
    let ncols = images.len();
    for (j, img) in images.iter().enumerate() {
        for (k, c) in img.iter() {
            row_of.entry(k).or_insert_with(|| vec![field.zero(); ncols])[j] = c.clone();
        }
    }
    kernel_of_rows(field, ncols, row_of.into_values())
}

/// A subspace of the span of an ordered ambient basis, stored as the
/// reduced row echelon form of a spanning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis<K> {
    field: Field,
    ambient: Vec<K>,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl<K: Ord + Clone> SubspaceBasis<K> {
    pub fn zero(field: Field, ambient: Vec<K>) -> Self {
        Self {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Span of coordinate vectors (with respect to `ambient`).
    pub fn from_coordinates(field: Field, ambient: Vec<K>, vectors: impl IntoIterator<Item = Vec<Scalar>>) -> Self {
        let n = ambient.len();
        let mut ech = Echelon::new(field, n);
        for v in vectors {
            ech.insert(&v);
        }
        let rref = ech.rref();
        Self {
            field,
            ambient,
            pivots: rref.iter().map(|(p, _)| *p).collect(),
            rows: rref.into_iter().map(|(_, r)| r).collect(),
        }
    }

    /// Span of combinations whose keys all lie in `ambient`; `None` if some
    /// key is outside it.
    pub fn from_elements<'a>(
        field: Field,
        ambient: Vec<K>,
        elements: impl IntoIterator<Item = &'a Combination<K>>,
    ) -> Option<Self>
    where
        K: 'a,
    {
        let vectors: Option<Vec<Vec<Scalar>>> = elements.into_iter().map(|e| coordinates(field, &ambient, e)).collect();
        Some(Self::from_coordinates(field, ambient, vectors?))
    }

    /// The whole ambient space.
    pub fn full(field: Field, ambient: Vec<K>) -> Self {
        let n = ambient.len();
        let rows = (0..n).map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v
        });
        Self::from_coordinates(field, ambient.clone(), rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> &[K] {
        &self.ambient
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Basis vectors as combinations of ambient keys.
    pub fn vectors(&self) -> Vec<Combination<K>> {
        self.rows.iter().map(|r| self.to_element(r)).collect()
    }

    pub fn to_element(&self, coords: &[Scalar]) -> Combination<K> {
        self.ambient
            .iter()
            .zip(coords)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect()
    }

    /// Membership of a coordinate vector.
    pub fn contains_coordinates(&self, v: &[Scalar]) -> bool {
        let mut r = v.to_vec();
        for (pc, row) in self.pivots.iter().zip(&self.rows) {
            let f = r[*pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        r.iter().all(Scalar::is_zero)
    }

    /// Membership of a combination; keys outside the ambient mean "no".
    pub fn contains(&self, e: &Combination<K>) -> bool {
        match coordinates(self.field, &self.ambient, e) {
            Some(v) => self.contains_coordinates(&v),
            None => false,
        }
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains_coordinates(r))
    }

    /// Equality as subspaces (containment both ways).
    pub fn same_subspace(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other) && other.is_subspace_of(self)
    }
}

/// Sparse echelon form keyed by leading (largest) term.
///
/// Rows are forward-reduced only, so a row never changes after insertion
/// and its leading key is its pivot. When keys are ordered by degree first,
/// the rows form a filtered basis: an element of degree `k` in the span is
/// a combination of rows of degree at most `k`.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord> {
    field: Field,
    rows: BTreeMap<K, Combination<K>>,
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new(field: Field) -> Self {
        Self {
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &Combination<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Reduces `v` until its leading key is not a pivot (or it vanishes).
    pub fn reduce(&self, v: &Combination<K>) -> Combination<K> {
        let mut v = v.clone();
        while let Some((k, c)) = v.last() {
            let Some(row) = self.rows.get(k) else { break };
            let f = -c;
            v.add_scaled(row, &f);
        }
        v
    }

    pub fn contains(&self, v: &Combination<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v` if it is independent of the rows; returns the new
    /// (monic) row.
    pub fn insert(&mut self, v: &Combination<K>) -> Option<Combination<K>> {
        let r = self.reduce(v);
        let (k, c) = r.last()?;
        let k = k.clone();
        let row = r.scale(&c.inv().expect("leading coefficient is nonzero"));
        self.rows.insert(k, row.clone());
        Some(row)
    }
}

/// Coordinates of `e` in the ordered basis `ambient`.
pub fn coordinates<K: Ord + Clone>(field: Field, ambient: &[K], e: &Combination<K>) -> Option<Vec<Scalar>> {
    let mut v = vec![field.zero(); ambient.len()];
    for (k, c) in e.iter() {
        let idx = ambient.iter().position(|a| a == k)?;
        v[idx] = c.clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|x| Field::Rational.from_i64(*x)).collect()
    }

    #[test]
    fn sparse_echelon_filtered() {
        let q = Field::Rational;
        let mut ech = SparseEchelon::new(q);
        let a: Combination<u32> = [(1, q.from_i64(2)), (3, q.from_i64(4))].into_iter().collect();
        let b: Combination<u32> = [(1, q.one()), (3, q.from_i64(2))].into_iter().collect();
        let c: Combination<u32> = [(1, q.one()), (2, q.one())].into_iter().collect();
        assert!(ech.insert(&a).is_some());
        assert!(ech.insert(&b).is_none());
        assert_eq!(ech.insert(&c).unwrap().last().map(|(k, _)| *k), Some(2));
        assert_eq!(ech.dim(), 2);
        assert!(ech.contains(&a.add(&c)));
        assert!(!ech.contains(&Combination::term(1, q.one())));
        assert_eq!(ech.pivots().copied().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn rational_kernel() {
        // x + 2y + 3z = 0, 2x + 4y + 6z = 0 has a 2-dim kernel.
        let k = kernel_of_rows(Field::Rational, 3, [q(&[1, 2, 3]), q(&[2, 4, 6])]);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s = &(&v[0] + &(&v[1] * &Field::Rational.from_i64(2))) + &(&v[2] * &Field::Rational.from_i64(3));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn rref_over_rationals_is_reduced() {
        let mut e = Echelon::new(Field::Rational, 3);
        assert!(e.insert(&q(&[2, 4, 1])));
        assert!(e.insert(&q(&[3, 1, 0])));
        assert!(!e.insert(&q(&[5, 5, 1])));
        let r = e.rref();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].0, 0);
        assert_eq!(r[1].0, 1);
        assert!(r[0].1[1].is_zero());
        assert!(r[0].1[0].is_one() && r[1].1[1].is_one());
    }

    #[test]
    fn modular_kernel() {
        let f = Field::Prime(2);
        let row = |v: &[i64]| v.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>();
        // over F_2, (1,1,0) and (0,1,1) leave (1,1,1) in the kernel.
        let k = kernel_of_rows(f, 3, [row(&[1, 1, 0]), row(&[0, 1, 1])]);
        assert_eq!(k, vec![row(&[1, 1, 1])]);
    }

    #[test]
    fn subspace_equality_ignores_spanning_set() {
        let amb = vec!['a', 'b', 'c'];
        let a = SubspaceBasis::from_coordinates(Field::Rational, amb.clone(), [q(&[1, 1, 0]), q(&[0, 1, 1])]);
        let b = SubspaceBasis::from_coordinates(Field::Rational, amb, [q(&[1, 2, 1]), q(&[1, 0, -1])]);
        assert!(a.same_subspace(&b));
        assert_eq!(a, b);
        assert!(a.contains_coordinates(&q(&[2, 3, 1])));
        assert!(!a.contains_coordinates(&q(&[0, 0, 1])));
    }

    #[test]
    fn matrix_power() {
        let f = Field::Rational;
        let mut m = Matrix::zeros(f, 2, 2);
        m.set(0, 1, f.one());
        assert!(m.pow(f, 2).is_zero());
        assert_eq!(m.pow(f, 0), Matrix::identity(f, 2));
    }
}
