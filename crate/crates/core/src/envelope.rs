//! The enveloping algebra `Q(L)`: the full `U(L)` or, over `F_p` with a
//! p-map, the restricted `U_p(L)`, in PBW normal form.
//!
//! Products are normalized by straightening words in the generators. The
//! leftmost descent `e_j e_i` (`j > i`) of a word is rewritten to
//! `e_i e_j + [e_j, e_i]`; in restricted mode a sorted word containing
//! `e_i^p` has that run replaced by `e_i^[p]`. Each rewrite lowers
//! `(degree, inversions)` lexicographically, and pending words are
//! processed from the largest key down, so equal words merge before they
//! are expanded.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::comb::{push_signed_term, Combination};
use crate::error::{Error, Result};
use crate::liealg::{LieElement, LiePresentation};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnvMode {
    Full,
    Restricted,
}

impl fmt::Display for EnvMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvMode::Full => "full",
            EnvMode::Restricted => "restricted",
        })
    }
}

/// An ordered monomial `Π e_i^{k_i}` given by its exponent vector.
///
/// Monomials are ordered by total degree, then by exponent vectors in
/// descending lexicographic order, so that `e < h < f` for basis `e, h, f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn identity(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self(e)
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// The sorted generator word, e.g. `e h^2` → `[0, 1, 1]`.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree());
        for (i, &k) in self.0.iter().enumerate() {
            w.extend(core::iter::repeat_n(i, k as usize));
        }
        w
    }

    fn from_sorted_word(dim: usize, w: &[usize]) -> Self {
        let mut e = vec![0; dim];
        for &i in w {
            e[i] += 1;
        }
        Self(e)
    }

    /// `e^1*h^2` style, with explicit unit exponents.
    pub fn format_explicit(&self, names: &[String]) -> String {
        self.format_with(names, true)
    }

    /// `e*h^2` style; `1` for the identity.
    pub fn format(&self, names: &[String]) -> String {
        self.format_with(names, false)
    }

    fn format_with(&self, names: &[String], explicit: bool) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 && !explicit {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], k)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type EnvElement = Combination<PbwMonomial>;

/// Filtration degree: the largest total degree among the terms (0 for 0).
pub fn env_degree(a: &EnvElement) -> usize {
    a.keys().map(PbwMonomial::degree).max().unwrap_or(0)
}

fn inversions(w: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                n += 1;
            }
        }
    }
    n
}

type WorkKey = (usize, usize, Vec<usize>);

fn push_work(work: &mut BTreeMap<WorkKey, Scalar>, w: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let key = (w.len(), inversions(&w), w);
    match work.get_mut(&key) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                work.remove(&key);
            }
        }
        None => {
            work.insert(key, c);
        }
    }
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pres: Arc<LiePresentation>,
    mode: EnvMode,
}

impl Envelope {
    /// Restricted mode needs a prime field and a p-map.
    pub fn new(pres: impl Into<Arc<LiePresentation>>, mode: EnvMode) -> Result<Self> {
        let pres = pres.into();
        if mode == EnvMode::Restricted {
            if !pres.field().is_prime_field() {
                return Err(Error::UnsupportedMode(
                    "the restricted enveloping algebra needs a prime field".into(),
                ));
            }
            if pres.pmap().is_none() {
                return Err(Error::UnsupportedMode(
                    "the restricted enveloping algebra needs a p-map".into(),
                ));
            }
        }
        Ok(Self { pres, mode })
    }

    pub fn full(pres: impl Into<Arc<LiePresentation>>) -> Self {
        Self {
            pres: pres.into(),
            mode: EnvMode::Full,
        }
    }

    pub fn presentation(&self) -> &LiePresentation {
        &self.pres
    }

    pub fn shared_presentation(&self) -> Arc<LiePresentation> {
        self.pres.clone()
    }

    pub fn mode(&self) -> EnvMode {
        self.mode
    }

    pub fn field(&self) -> Field {
        self.pres.field()
    }

    pub fn dim(&self) -> usize {
        self.pres.dim()
    }

    /// Exponent bound in restricted mode.
    fn modulus(&self) -> Option<usize> {
        match self.mode {
            EnvMode::Full => None,
            EnvMode::Restricted => Some(self.field().characteristic() as usize),
        }
    }

    pub fn one(&self) -> EnvElement {
        self.scalar(self.field().one())
    }

    pub fn scalar(&self, c: Scalar) -> EnvElement {
        EnvElement::term(PbwMonomial::identity(self.dim()), c)
    }

    pub fn generator(&self, i: usize) -> EnvElement {
        EnvElement::term(PbwMonomial::generator(self.dim(), i), self.field().one())
    }

    pub fn monomial(&self, m: &PbwMonomial) -> EnvElement {
        EnvElement::term(m.clone(), self.field().one())
    }

    /// The inclusion `L ⊂ Q(L)`.
    pub fn embed_lie(&self, u: &LieElement) -> EnvElement {
        assert_eq!(u.dim(), self.dim(), "dimension mismatch");
        u.support()
            .map(|(i, c)| (PbwMonomial::generator(self.dim(), i), c.clone()))
            .collect()
    }

    /// The inverse of [`embed_lie`](Self::embed_lie) on its image.
    pub fn as_lie(&self, a: &EnvElement) -> Option<LieElement> {
        let mut u = self.pres.zero();
        let mut coeffs = u.coeffs().to_vec();
        for (m, c) in a.iter() {
            if m.degree() != 1 {
                return None;
            }
            let i = m.exponents().iter().position(|&k| k == 1)?;
            coeffs[i] = c.clone();
        }
        u = LieElement::from_coeffs(coeffs);
        Some(u)
    }

    /// Checks that every key is an admissible monomial for this algebra.
    pub fn check(&self, a: &EnvElement) -> Result<()> {
        for (m, c) in a.iter() {
            if m.exponents().len() != self.dim() {
                return Err(Error::ModeMismatch(format!(
                    "monomial of length {} in an algebra of dimension {}",
                    m.exponents().len(),
                    self.dim()
                )));
            }
            if let Some(p) = self.modulus() {
                if m.exponents().iter().any(|&k| k as usize >= p) {
                    return Err(Error::ModeMismatch(format!(
                        "exponent at least p = {p} in the restricted enveloping algebra"
                    )));
                }
            }
            if c.field() != self.field() {
                return Err(Error::ModeMismatch(format!("coefficient {c} not in {}", self.field())));
            }
        }
        Ok(())
    }

    /// PBW normal form of an arbitrary product of generators.
    pub fn straighten_word(&self, w: &[usize]) -> EnvElement {
        self.straighten([(w.to_vec(), self.field().one())])
    }

    fn straighten(&self, seed: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> EnvElement {
        let mut work: BTreeMap<WorkKey, Scalar> = BTreeMap::new();
        for (w, c) in seed {
            push_work(&mut work, w, c);
        }
        let n = self.dim();
        let mut out = EnvElement::zero();
        while let Some(((_, _, w), c)) = work.pop_last() {
            if let Some(k) = (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) {
                let mut swapped = w.clone();
                swapped.swap(k, k + 1);
                push_work(&mut work, swapped, c.clone());
                let br = self.pres.bracket_basis(w[k], w[k + 1]);
                for (m, b) in br.support() {
                    let mut nw = Vec::with_capacity(w.len() - 1);
                    nw.extend_from_slice(&w[..k]);
                    nw.push(m);
                    nw.extend_from_slice(&w[k + 2..]);
                    push_work(&mut work, nw, &c * b);
                }
            } else if let Some((start, p)) = self.overflow(&w) {
                let value = &self.pres.pmap().expect("restricted mode has a p-map")[w[start]];
                for (m, b) in value.support() {
                    let mut nw = Vec::with_capacity(w.len() + 1 - p);
                    nw.extend_from_slice(&w[..start]);
                    nw.push(m);
                    nw.extend_from_slice(&w[start + p..]);
                    push_work(&mut work, nw, &c * b);
                }
            } else {
                out.add_term(PbwMonomial::from_sorted_word(n, &w), c);
            }
        }
        out
    }

    /// Start of the first run of `p` equal generators in a sorted word.
    fn overflow(&self, w: &[usize]) -> Option<(usize, usize)> {
        let p = self.modulus()?;
        let mut start = 0;
        while start < w.len() {
            let mut end = start;
            while end < w.len() && w[end] == w[start] {
                end += 1;
            }
            if end - start >= p {
                return Some((start, p));
            }
            start = end;
        }
        None
    }

    pub fn mul_monomials(&self, a: &PbwMonomial, b: &PbwMonomial) -> EnvElement {
        if a.is_identity() {
            return self.monomial(b);
        }
        if b.is_identity() {
            return self.monomial(a);
        }
        let mut w = a.word();
        w.extend(b.word());
        self.straighten_word(&w)
    }

    /// Product in PBW normal form. Panics on elements of a different
    /// algebra; see [`try_mul`](Self::try_mul).
    pub fn mul(&self, a: &EnvElement, b: &EnvElement) -> EnvElement {
        let mut seed = Vec::with_capacity(a.len() * b.len());
        for (m1, c1) in a.iter() {
            for (m2, c2) in b.iter() {
                let mut w = m1.word();
                w.extend(m2.word());
                seed.push((w, c1 * c2));
            }
        }
        self.straighten(seed)
    }

    pub fn try_mul(&self, a: &EnvElement, b: &EnvElement) -> Result<EnvElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn power(&self, a: &EnvElement, m: u32) -> EnvElement {
        let mut acc = self.one();
        for _ in 0..m {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn counit(&self, a: &EnvElement) -> Scalar {
        a.coeff(&PbwMonomial::identity(self.dim()))
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    /// `a - ε(a)·1`.
    pub fn constantless_part(&self, a: &EnvElement) -> EnvElement {
        a.filter(|m| !m.is_identity())
    }

    pub fn degree(&self, a: &EnvElement) -> usize {
        env_degree(a)
    }

    /// PBW monomials of total degree at most `d`, in monomial order.
    pub fn pbw_basis(&self, d: usize) -> Vec<PbwMonomial> {
        let cap = match self.modulus() {
            Some(p) => p - 1,
            None => d,
        };
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.dim()];
        fn rec(i: usize, left: usize, cap: usize, cur: &mut Vec<u32>, out: &mut Vec<PbwMonomial>) {
            if i == cur.len() {
                out.push(PbwMonomial(cur.clone()));
                return;
            }
            for k in 0..=left.min(cap) {
                cur[i] = k as u32;
                rec(i + 1, left - k, cap, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, d, cap, &mut cur, &mut out);
        out.sort();
        out
    }

    /// `u^[p]`, computed as `u^p` in `U_p(L)`.
    pub fn pmap_apply(&self, u: &LieElement) -> Result<LieElement> {
        if self.mode != EnvMode::Restricted {
            return Err(Error::UnsupportedMode("the p-map needs restricted mode".into()));
        }
        let p = self.field().characteristic();
        let power = self.power(&self.embed_lie(u), p);
        if !self.counit(&power).is_zero() || self.degree(&power) > 1 {
            return Err(Error::InvalidPmap(format!(
                "({})^{p} = {} does not lie in L",
                self.pres.format_element(u),
                self.format(&power)
            )));
        }
        Ok(self.as_lie(&power).expect("degree one"))
    }

    pub fn format(&self, a: &EnvElement) -> String {
        let mut s = String::new();
        for (m, c) in a.iter() {
            push_signed_term(&mut s, c, &m.format(self.pres.names()));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// A failed restricted-structure axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PmapViolation {
    /// `ad(e_i^[p]) ≠ (ad e_i)^p`.
    AdAxiom { index: usize },
    /// An asserted value at `λ e_i` differs from `λ^p e_i^[p]`.
    Scaling {
        at: LieElement,
        asserted: LieElement,
        expected: LieElement,
    },
    /// The enveloping-algebra identity
    /// `ι(v^[p] - Σ λ_i^p e_i^[p]) = v^p - Σ (λ_i e_i)^p` fails at `at`.
    Additivity { at: LieElement },
}

impl PmapViolation {
    pub fn category(&self) -> &'static str {
        match self {
            PmapViolation::AdAxiom { .. } => "ad",
            PmapViolation::Scaling { .. } => "scaling",
            PmapViolation::Additivity { .. } => "additivity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmapReport {
    pub violations: Vec<PmapViolation>,
    pub notes: Vec<String>,
}

impl PmapReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the restricted-Lie-algebra axioms for the p-map of `pres`.
pub fn validate_pmap(pres: &LiePresentation) -> Result<PmapReport> {
    let field = pres.field();
    if !field.is_prime_field() {
        return Err(Error::Input("p-map validation needs a prime field".into()));
    }
    let pmap = pres
        .pmap()
        .ok_or_else(|| Error::Input("presentation has no p-map".into()))?;
    let p = field.characteristic();
    let shared = Arc::new(pres.clone());
    let restricted = Envelope::new(shared.clone(), EnvMode::Restricted)?;
    let full = Envelope::full(shared);
    let n = pres.dim();
    let mut violations = Vec::new();

    for (i, value) in pmap.iter().enumerate() {
        let lhs = pres.ad_matrix(value)?;
        let rhs = pres.ad_matrix(&pres.basis(i))?.pow(field, p as u64);
        if lhs != rhs {
            violations.push(PmapViolation::AdAxiom { index: i });
        }
    }

    let notes = vec![String::from(
        "scaling (λe_i)^[p] = λ^p e_i^[p] holds by construction for tabulated basis values",
    )];

    // Full-U(L) side of the additivity identity: v^p - Σ (λ_i e_i)^p.
    let jacobson_defect = |v: &LieElement| -> EnvElement {
        let mut rhs = full.power(&full.embed_lie(v), p);
        for (i, c) in v.support() {
            let term = full.power(&full.embed_lie(&pres.basis(i).scale(c)), p);
            rhs = rhs.sub(&term);
        }
        rhs
    };
    let semilinear_part = |v: &LieElement| -> LieElement {
        let mut acc = pres.zero();
        for (i, c) in v.support() {
            acc = acc.add(&pmap[i].scale(&c.pow(p as u64)));
        }
        acc
    };

    for i in 0..n {
        for j in i + 1..n {
            let v = pres.basis(i).add(&pres.basis(j));
            let ok = match restricted.pmap_apply(&v) {
                Ok(value) => {
                    let lhs = full.embed_lie(&value.sub(&semilinear_part(&v)));
                    lhs == jacobson_defect(&v)
                }
                Err(_) => false,
            };
            if !ok {
                violations.push(PmapViolation::Additivity { at: v });
            }
        }
    }

    for a in pres.pmap_assertions() {
        let support: Vec<(usize, &Scalar)> = a.at.support().collect();
        if support.len() <= 1 {
            let expected = match support.first() {
                Some((i, c)) => pmap[*i].scale(&c.pow(p as u64)),
                None => pres.zero(),
            };
            if expected != a.value {
                violations.push(PmapViolation::Scaling {
                    at: a.at.clone(),
                    asserted: a.value.clone(),
                    expected,
                });
            }
        } else {
            let lhs = full.embed_lie(&a.value.sub(&semilinear_part(&a.at)));
            if lhs != jacobson_defect(&a.at) {
                violations.push(PmapViolation::Additivity { at: a.at.clone() });
            }
        }
    }

    Ok(PmapReport { violations, notes })
}
