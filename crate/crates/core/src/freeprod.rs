//! The free product `A = Q(L) * k[x]`, which realizes `Q(⟨L, x⟩)`.
//!
//! A basis of `A` is given by alternating words whose letters are
//! non-identity PBW monomials of `Q(L)` or positive powers of `x`.
//! Multiplication concatenates words and merges the letters meeting at the
//! junction: powers of `x` add, env-letters multiply in `Q(L)`. Should an
//! env-product contain an identity component, that letter disappears and
//! the two neighbouring `x`-powers merge; each merge shortens the word, so
//! normalization terminates.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::comb::{push_signed_term, Combination};
use crate::envelope::{EnvElement, EnvMode, Envelope, PbwMonomial};
use crate::error::{Error, Result};
use crate::liealg::LiePresentation;
use crate::scalar::{Field, Scalar};

/// A letter of a free-product word. Env-letters sort before `x`-letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Env(PbwMonomial),
    X(u32),
}

impl Letter {
    pub fn degree(&self) -> usize {
        match self {
            Letter::Env(m) => m.degree(),
            Letter::X(n) => *n as usize,
        }
    }

    fn same_factor(&self, other: &Letter) -> bool {
        matches!(
            (self, other),
            (Letter::Env(_), Letter::Env(_)) | (Letter::X(_), Letter::X(_))
        )
    }
}

/// A normal-form word: letters strictly alternate between the two factors.
/// Words are ordered by degree, then length, then letter by letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpWord(Vec<Letter>);

impl FpWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a word, checking alternation and letter invariants.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let w = Self(letters);
        if w.is_normal() {
            Ok(w)
        } else {
            Err(Error::Input("letters must alternate and be non-trivial".into()))
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(Letter::degree).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the word contains no `x`-letter.
    pub fn is_env_only(&self) -> bool {
        self.0.iter().all(|l| matches!(l, Letter::Env(_)))
    }

    /// Alternation plus `Env ≠ 1`, `X(n ≥ 1)`.
    pub fn is_normal(&self) -> bool {
        let letters_ok = self.0.iter().all(|l| match l {
            Letter::Env(m) => !m.is_identity(),
            Letter::X(n) => *n >= 1,
        });
        letters_ok && self.0.windows(2).all(|p| !p[0].same_factor(&p[1]))
    }

    /// `[e^1*h^2 | x^3 | f^1]`; the empty word prints as `[]`.
    pub fn format_bracketed(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::Env(m) => m.format_explicit(names),
                Letter::X(n) => alloc::format!("x^{n}"),
            })
            .collect();
        alloc::format!("[{}]", parts.join(" | "))
    }

    /// Product expression `e*h^2*x^3*f`; `1` for the empty word.
    pub fn format(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::Env(m) => m.format(names),
                Letter::X(1) => "x".into(),
                Letter::X(n) => alloc::format!("x^{n}"),
            })
            .collect();
        parts.join("*")
    }
}

impl Ord for FpWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for FpWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type FpElement = Combination<FpWord>;

/// Largest word degree among the terms (0 for 0).
pub fn fp_degree(a: &FpElement) -> usize {
    a.keys().map(FpWord::degree).max().unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct FreeProduct {
    env: Envelope,
}

impl FreeProduct {
    pub fn new(env: Envelope) -> Self {
        Self { env }
    }

    pub fn from_presentation(pres: LiePresentation, mode: EnvMode) -> Result<Self> {
        Ok(Self::new(Envelope::new(pres, mode)?))
    }

    pub fn envelope(&self) -> &Envelope {
        &self.env
    }

    pub fn presentation(&self) -> &LiePresentation {
        self.env.presentation()
    }

    pub fn field(&self) -> Field {
        self.env.field()
    }

    pub fn mode(&self) -> EnvMode {
        self.env.mode()
    }

    pub fn one(&self) -> FpElement {
        FpElement::term(FpWord::empty(), self.field().one())
    }

    pub fn scalar(&self, c: Scalar) -> FpElement {
        FpElement::term(FpWord::empty(), c)
    }

    pub fn word(&self, w: FpWord) -> FpElement {
        FpElement::term(w, self.field().one())
    }

    /// The formal variable `x`.
    pub fn x_gen(&self) -> FpElement {
        self.word(FpWord(alloc::vec![Letter::X(1)]))
    }

    /// The factor inclusion `Q(L) → A`.
    pub fn inject_env(&self, a: &EnvElement) -> FpElement {
        a.iter()
            .map(|(m, c)| {
                let w = if m.is_identity() {
                    FpWord::empty()
                } else {
                    FpWord(alloc::vec![Letter::Env(m.clone())])
                };
                (w, c.clone())
            })
            .collect()
    }

    /// The generator `e_i` of `L` inside `A`.
    pub fn lie_generator(&self, i: usize) -> FpElement {
        self.inject_env(&self.env.generator(i))
    }

    /// The part of `a` living in the `Q(L)` factor, or `None` if `a`
    /// involves `x`.
    pub fn project_env(&self, a: &FpElement) -> Option<EnvElement> {
        let n = self.env.dim();
        let mut out = EnvElement::zero();
        for (w, c) in a.iter() {
            match w.letters() {
                [] => out.add_term(PbwMonomial::identity(n), c.clone()),
                [Letter::Env(m)] => out.add_term(m.clone(), c.clone()),
                _ => return None,
            }
        }
        Some(out)
    }

    /// Normal form of the product of two normal-form words.
    pub fn mul_words(&self, u: &FpWord, v: &FpWord) -> FpElement {
        let one = self.field().one();
        let mut out = FpElement::zero();
        self.join(&u.0, &v.0, &one, &mut out);
        out
    }

    /// Accumulates `coeff · (left ++ right)` after merging at the junction.
    fn join(&self, left: &[Letter], right: &[Letter], coeff: &Scalar, out: &mut FpElement) {
        let (Some(a), Some(b)) = (left.last(), right.first()) else {
            let mut w = left.to_vec();
            w.extend_from_slice(right);
            out.add_term(FpWord(w), coeff.clone());
            return;
        };
        let prefix = &left[..left.len() - 1];
        let suffix = &right[1..];
        match (a, b) {
            (Letter::X(m), Letter::X(n)) => {
                let mut w = prefix.to_vec();
                w.push(Letter::X(m + n));
                w.extend_from_slice(suffix);
                out.add_term(FpWord(w), coeff.clone());
            }
            (Letter::Env(m1), Letter::Env(m2)) => {
                for (m, c) in self.env.mul_monomials(m1, m2).iter() {
                    let c = coeff * c;
                    if m.is_identity() {
                        self.join(prefix, suffix, &c, out);
                    } else {
                        let mut w = prefix.to_vec();
                        w.push(Letter::Env(m.clone()));
                        w.extend_from_slice(suffix);
                        out.add_term(FpWord(w), c);
                    }
                }
            }
            _ => {
                let mut w = left.to_vec();
                w.extend_from_slice(right);
                out.add_term(FpWord(w), coeff.clone());
            }
        }
    }

    pub fn mul(&self, a: &FpElement, b: &FpElement) -> FpElement {
        let mut out = FpElement::zero();
        for (u, c1) in a.iter() {
            for (v, c2) in b.iter() {
                let c = c1 * c2;
                self.join(&u.0, &v.0, &c, &mut out);
            }
        }
        debug_assert!(out.keys().all(FpWord::is_normal));
        out
    }

    /// Checks that every key is a normal word over this algebra's letters.
    pub fn check(&self, a: &FpElement) -> Result<()> {
        for (w, c) in a.iter() {
            if !w.is_normal() {
                return Err(Error::ModeMismatch("word is not in normal form".into()));
            }
            for l in w.letters() {
                if let Letter::Env(m) = l {
                    self.env.check(&self.env.monomial(m))?;
                }
            }
            if c.field() != self.field() {
                return Err(Error::ModeMismatch(alloc::format!(
                    "coefficient {c} not in {}",
                    self.field()
                )));
            }
        }
        Ok(())
    }

    pub fn try_mul(&self, a: &FpElement, b: &FpElement) -> Result<FpElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn power(&self, a: &FpElement, m: u32) -> FpElement {
        let mut acc = self.one();
        for _ in 0..m {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &FpElement, b: &FpElement) -> FpElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Drops terms of word degree above `d`.
    pub fn truncate(&self, a: &FpElement, d: usize) -> FpElement {
        a.filter(|w| w.degree() <= d)
    }

    pub fn degree(&self, a: &FpElement) -> usize {
        fp_degree(a)
    }

    /// All normal-form words of degree at most `d`, in word order.
    pub fn basis(&self, d: usize) -> Vec<FpWord> {
        let env_letters: Vec<PbwMonomial> = self.env.pbw_basis(d).into_iter().filter(|m| !m.is_identity()).collect();
        let mut out = Vec::new();
        let mut cur: Vec<Letter> = Vec::new();
        self.extend_words(&env_letters, d, &mut cur, &mut out);
        out.sort();
        out
    }

    fn extend_words(&self, env_letters: &[PbwMonomial], left: usize, cur: &mut Vec<Letter>, out: &mut Vec<FpWord>) {
        out.push(FpWord(cur.clone()));
        let last_env = matches!(cur.last(), Some(Letter::Env(_)));
        let last_x = matches!(cur.last(), Some(Letter::X(_)));
        if !last_env {
            for m in env_letters.iter().filter(|m| m.degree() <= left) {
                cur.push(Letter::Env(m.clone()));
                self.extend_words(env_letters, left - m.degree(), cur, out);
                cur.pop();
            }
        }
        if !last_x {
            for n in 1..=left {
                cur.push(Letter::X(n as u32));
                self.extend_words(env_letters, left - n, cur, out);
                cur.pop();
            }
        }
    }

    /// Sum-of-products expression that parses back to the same element.
    pub fn format(&self, a: &FpElement) -> String {
        let names = self.presentation().names();
        let mut s = String::new();
        for (w, c) in a.iter() {
            push_signed_term(&mut s, c, &w.format(names));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    pub fn format_word(&self, w: &FpWord) -> String {
        w.format_bracketed(self.presentation().names())
    }
}
