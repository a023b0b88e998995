//! Finite-dimensional (restricted) Lie algebras given by structure constants.

pub mod lyndon;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// Name reserved for the adjoined formal variable.
pub const RESERVED_VARIABLE: &str = "x";

/// A vector in the presentation's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieElement {
    coeffs: Vec<Scalar>,
}

impl LieElement {
    pub fn zero(field: Field, dim: usize) -> Self {
        Self {
            coeffs: vec![field.zero(); dim],
        }
    }

    pub fn basis(field: Field, dim: usize, i: usize) -> Self {
        let mut e = Self::zero(field, dim);
        e.coeffs[i] = field.one();
        e
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        Self { coeffs }
    }

    /// Builds an element from sparse `(index, coefficient)` pairs; repeated
    /// indices accumulate.
    pub fn from_sparse(field: Field, dim: usize, terms: &[(usize, Scalar)]) -> Result<Self> {
        let mut e = Self::zero(field, dim);
        for (k, c) in terms {
            if *k >= dim {
                return Err(Error::IndexOutOfRange { index: *k, dim });
            }
            if c.field() != field {
                return Err(Error::Input(format!("scalar {c} is not in {field}")));
            }
            e.coeffs[*k] += c;
        }
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Nonzero `(index, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }
}

/// An asserted value `at^[p] = value` on a vector that is not a basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmapAssertion {
    pub at: LieElement,
    pub value: LieElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePresentation {
    field: Field,
    names: Vec<String>,
    /// `[e_i, e_j]` for `i < j`; absent pairs bracket to zero.
    table: BTreeMap<(usize, usize), LieElement>,
    pmap: Option<Vec<LieElement>>,
    pmap_asserted: Vec<PmapAssertion>,
    /// Pairs whose raw entries disagree with antisymmetry.
    conflicts: Vec<(usize, usize)>,
}

/// Collects raw table entries; entries may come in either order `(i, j)` or
/// `(j, i)`, and disagreements are remembered for validation rather than
/// rejected outright.
/// Sparse coordinates `(index, coefficient)`.
type SparseTerms = Vec<(usize, Scalar)>;

#[derive(Clone, Debug)]
pub struct PresentationBuilder {
    field: Field,
    names: Vec<String>,
    brackets: Vec<(usize, usize, SparseTerms)>,
    pmap: Vec<(usize, SparseTerms)>,
    asserted: Vec<(SparseTerms, SparseTerms)>,
}

impl PresentationBuilder {
    pub fn bracket(mut self, i: usize, j: usize, value: Vec<(usize, Scalar)>) -> Self {
        self.brackets.push((i, j, value));
        self
    }

    /// Convenience for integer structure constants.
    pub fn bracket_int(self, i: usize, j: usize, value: &[(usize, i64)]) -> Self {
        let f = self.field;
        self.bracket(i, j, value.iter().map(|(k, c)| (*k, f.from_i64(*c))).collect())
    }

    pub fn pmap(mut self, i: usize, value: Vec<(usize, Scalar)>) -> Self {
        self.pmap.push((i, value));
        self
    }

    pub fn pmap_int(self, i: usize, value: &[(usize, i64)]) -> Self {
        let f = self.field;
        self.pmap(i, value.iter().map(|(k, c)| (*k, f.from_i64(*c))).collect())
    }

    pub fn assert_pmap(mut self, at: Vec<(usize, Scalar)>, value: Vec<(usize, Scalar)>) -> Self {
        self.asserted.push((at, value));
        self
    }

    pub fn build(self) -> Result<LiePresentation> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::Input("a presentation needs at least one basis vector".into()));
        }
        for (idx, name) in self.names.iter().enumerate() {
            let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Input(format!("`{name}` is not an identifier")));
            }
            if name == RESERVED_VARIABLE {
                return Err(Error::Input("`x` is reserved for the adjoined variable".into()));
            }
            if self.names[..idx].contains(name) {
                return Err(Error::Input(format!("duplicate basis name `{name}`")));
            }
        }
        let field = self.field;
        let mut table: BTreeMap<(usize, usize), LieElement> = BTreeMap::new();
        let mut conflicts = Vec::new();
        for (i, j, value) in &self.brackets {
            for idx in [*i, *j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            let v = LieElement::from_sparse(field, n, value)?;
            if i == j {
                if !v.is_zero() {
                    conflicts.push((*i, *j));
                }
                continue;
            }
            let (key, v) = if i < j {
                ((*i, *j), v)
            } else {
                ((*j, *i), v.scale(&-field.one()))
            };
            match table.get(&key) {
                Some(prev) if *prev != v => conflicts.push(key),
                Some(_) => {}
                None => {
                    table.insert(key, v);
                }
            }
        }
        table.retain(|_, v| !v.is_zero());
        conflicts.sort();
        conflicts.dedup();

        let pmap = if self.pmap.is_empty() {
            None
        } else {
            if !field.is_prime_field() {
                return Err(Error::Input("a p-map requires a prime field".into()));
            }
            let mut slots: Vec<Option<LieElement>> = vec![None; n];
            for (i, value) in &self.pmap {
                if *i >= n {
                    return Err(Error::IndexOutOfRange { index: *i, dim: n });
                }
                if slots[*i].is_some() {
                    return Err(Error::Input(format!("duplicate p-map entry for index {i}")));
                }
                slots[*i] = Some(LieElement::from_sparse(field, n, value)?);
            }
            let mut out = Vec::with_capacity(n);
            for (i, s) in slots.into_iter().enumerate() {
                out.push(s.ok_or_else(|| Error::Input(format!("p-map missing for basis vector {i}")))?);
            }
            Some(out)
        };
        if !self.asserted.is_empty() && pmap.is_none() {
            return Err(Error::Input("p-map assertions need a p-map".into()));
        }
        let pmap_asserted = self
            .asserted
            .iter()
            .map(|(at, value)| {
                Ok(PmapAssertion {
                    at: LieElement::from_sparse(field, n, at)?,
                    value: LieElement::from_sparse(field, n, value)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(LiePresentation {
            field,
            names: self.names,
            table,
            pmap,
            pmap_asserted,
            conflicts,
        })
    }
}

/// Outcome of [`LiePresentation::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationReport {
    /// Sorted triples `i < j < k` where the Jacobi sum is nonzero.
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    /// Pairs whose raw entries contradict antisymmetry.
    pub antisymmetry_conflicts: Vec<(usize, usize)>,
}

impl PresentationReport {
    pub fn is_ok(&self) -> bool {
        self.jacobi_failures.is_empty() && self.antisymmetry_conflicts.is_empty()
    }
}

impl LiePresentation {
    pub fn builder<S: Into<String>>(field: Field, names: impl IntoIterator<Item = S>) -> PresentationBuilder {
        PresentationBuilder {
            field,
            names: names.into_iter().map(Into::into).collect(),
            brackets: Vec::new(),
            pmap: Vec::new(),
            asserted: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn pmap(&self) -> Option<&[LieElement]> {
        self.pmap.as_deref()
    }

    pub fn pmap_assertions(&self) -> &[PmapAssertion] {
        &self.pmap_asserted
    }

    /// Stored structure constants, `i < j`, nonzero only.
    pub fn table(&self) -> impl Iterator<Item = (&(usize, usize), &LieElement)> {
        self.table.iter()
    }

    pub fn zero(&self) -> LieElement {
        LieElement::zero(self.field, self.dim())
    }

    pub fn basis(&self, i: usize) -> LieElement {
        LieElement::basis(self.field, self.dim(), i)
    }

    pub fn element(&self, terms: &[(usize, i64)]) -> LieElement {
        let f = self.field;
        let terms: Vec<(usize, Scalar)> = terms.iter().map(|(k, c)| (*k, f.from_i64(*c))).collect();
        LieElement::from_sparse(f, self.dim(), &terms).expect("indices in range")
    }

    /// `[e_i, e_j]`, derived by antisymmetry when `i > j`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> LieElement {
        use core::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => self.zero(),
            Less => self.table.get(&(i, j)).cloned().unwrap_or_else(|| self.zero()),
            Greater => self
                .table
                .get(&(j, i))
                .map(|v| v.scale(&-self.field.one()))
                .unwrap_or_else(|| self.zero()),
        }
    }

    fn check_dim(&self, u: &LieElement) -> Result<()> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.dim(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, u: &LieElement, v: &LieElement) -> Result<LieElement> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        let mut out = self.zero();
        for (i, a) in u.support() {
            for (j, b) in v.support() {
                if i == j {
                    continue;
                }
                let ab = a * b;
                out = out.add(&self.bracket_basis(i, j).scale(&ab));
            }
        }
        Ok(out)
    }

    /// Matrix of `ad u`; column `j` holds `[u, e_j]`.
    pub fn ad_matrix(&self, u: &LieElement) -> Result<Matrix> {
        self.check_dim(u)?;
        let n = self.dim();
        let columns: Vec<Vec<Scalar>> = (0..n)
            .map(|j| self.bracket(u, &self.basis(j)).map(|c| c.coeffs))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(self.field, n, &columns))
    }

    /// Checks the Jacobi identity on all basis triples and reports raw
    /// table entries that contradicted antisymmetry.
    pub fn validate(&self) -> PresentationReport {
        let n = self.dim();
        let mut jacobi_failures = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.jacobi(i, j, k).is_zero() {
                        jacobi_failures.push((i, j, k));
                    }
                }
            }
        }
        PresentationReport {
            jacobi_failures,
            antisymmetry_conflicts: self.conflicts.clone(),
        }
    }

    /// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobi(&self, i: usize, j: usize, k: usize) -> LieElement {
        let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
        let t1 = self.bracket(&self.bracket_basis(i, j), &ek).expect("dims");
        let t2 = self.bracket(&self.bracket_basis(j, k), &ei).expect("dims");
        let t3 = self.bracket(&self.bracket_basis(k, i), &ej).expect("dims");
        t1.add(&t2).add(&t3)
    }

    /// Human-readable form, e.g. `2*e - h`.
    pub fn format_element(&self, u: &LieElement) -> String {
        let mut s = String::new();
        for (i, c) in u.support() {
            crate::comb::push_signed_term(&mut s, c, &self.names[i]);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// One-line summary such as `sl2-like dim 3 over Q (restricted)`.
    pub fn summary(&self) -> String {
        format!(
            "dim {} over {} [{}]{}",
            self.dim(),
            self.field,
            self.names.join(", "),
            if self.pmap.is_some() { " with p-map" } else { "" }
        )
    }
}

impl fmt::Display for LiePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sl2_is_valid() {
        assert!(fixtures::sl2_q().validate().is_ok());
    }

    #[test]
    fn abelian_is_valid() {
        assert!(fixtures::abelian_q(3).validate().is_ok());
    }

    #[test]
    fn corrupted_sl2_reports_triple() {
        let p = LiePresentation::builder(Field::Rational, ["e", "h", "f"])
            .bracket_int(1, 0, &[(0, 2)])
            .bracket_int(1, 2, &[(2, -2)])
            .bracket_int(0, 2, &[(0, 1)])
            .build()
            .unwrap();
        let r = p.validate();
        assert_eq!(r.jacobi_failures, vec![(0, 1, 2)]);
        // Jacobi sum on (e,h,f) works out to 2e by hand.
        assert_eq!(p.jacobi(0, 1, 2), p.element(&[(0, 2)]));
    }

    #[test]
    fn out_of_range_is_input_error() {
        let err = LiePresentation::builder(Field::Rational, ["a", "b"])
            .bracket_int(0, 5, &[(0, 1)])
            .build()
            .unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 5, dim: 2 });
        let err = LiePresentation::builder(Field::Rational, ["a", "b"])
            .bracket_int(0, 1, &[(7, 1)])
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { .. }));
    }

    #[test]
    fn antisymmetry_conflicts_are_reported() {
        let p = LiePresentation::builder(Field::Rational, ["a", "b"])
            .bracket_int(0, 1, &[(0, 1)])
            .bracket_int(1, 0, &[(0, 1)])
            .bracket_int(1, 1, &[(1, 1)])
            .build()
            .unwrap();
        let r = p.validate();
        assert_eq!(r.antisymmetry_conflicts, vec![(0, 1), (1, 1)]);
        assert!(!r.is_ok());
    }

    #[test]
    fn reserved_and_duplicate_names() {
        assert!(LiePresentation::builder(Field::Rational, ["x"]).build().is_err());
        assert!(LiePresentation::builder(Field::Rational, ["a", "a"]).build().is_err());
        assert!(LiePresentation::builder(Field::Rational, ["1a"]).build().is_err());
    }

    #[test]
    fn sl2_brackets() {
        let p = fixtures::sl2_q();
        let (e, h, f) = (p.basis(0), p.basis(1), p.basis(2));
        assert_eq!(p.bracket(&h, &e).unwrap(), p.element(&[(0, 2)]));
        assert_eq!(p.bracket(&e.add(&f), &h).unwrap(), p.element(&[(0, -2), (2, 2)]));
        let u = p.element(&[(0, 3), (1, -1), (2, 5)]);
        assert!(p.bracket(&u, &u).unwrap().is_zero());
        let short = LieElement::zero(Field::Rational, 2);
        assert!(matches!(p.bracket(&short, &e), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sl2_ad_matrices() {
        let p = fixtures::sl2_q();
        let f = p.field();
        let adh = p.ad_matrix(&p.basis(1)).unwrap();
        let mut diag = Matrix::zeros(f, 3, 3);
        diag.set(0, 0, f.from_i64(2));
        diag.set(2, 2, f.from_i64(-2));
        assert_eq!(adh, diag);
        let ade = p.ad_matrix(&p.basis(0)).unwrap();
        assert_eq!(ade.column(2), p.basis(1).coeffs().to_vec());
        let ab = fixtures::abelian_q(3);
        assert!(ab.ad_matrix(&ab.element(&[(0, 1), (2, 4)])).unwrap().is_zero());
    }
}
