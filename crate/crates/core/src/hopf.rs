//! Bialgebra structure on `A = Q(L) * k[x]`: coproduct, counit, and the
//! primitivity defect `Δ(a) - a⊗1 - 1⊗a` together with its kernel.
//!
//! `Δ` is the algebra morphism making every Lie generator and `x`
//! primitive. It is evaluated on a word by multiplying the coproducts of
//! the generators spelled by its letters, so the same code serves `U(L)`
//! and `U_p(L)`.

use alloc::vec::Vec;

use crate::comb::Combination;
use crate::envelope::PbwMonomial;
use crate::error::{Error, Result};
use crate::freeprod::{fp_degree, FpElement, FpWord, FreeProduct, Letter};
use crate::linalg::{kernel_of_images, SubspaceBasis};
use crate::scalar::Scalar;

pub type TensorElement = Combination<(FpWord, FpWord)>;

/// Elements of `A⊗A⊗A`, used for coassociativity checks.
pub type Tensor3Element = Combination<(FpWord, FpWord, FpWord)>;

/// Result of a primitivity test. `witness` is the first nonzero defect term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityCheck {
    pub primitive: bool,
    pub witness: Option<((FpWord, FpWord), Scalar)>,
}

impl FreeProduct {
    /// `s ⊗ t` for elements of `A`.
    pub fn tensor(&self, s: &FpElement, t: &FpElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (u, a) in s.iter() {
            for (v, b) in t.iter() {
                out.add_term((u.clone(), v.clone()), a * b);
            }
        }
        out
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac⊗bd` (no signs).
    pub fn tensor_mul(&self, s: &TensorElement, t: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((a, b), c1) in s.iter() {
            for ((c, d), c2) in t.iter() {
                let left = self.mul_words(a, c);
                let right = self.mul_words(b, d);
                let coeff = c1 * c2;
                for (u, x) in left.iter() {
                    for (v, y) in right.iter() {
                        out.add_term((u.clone(), v.clone()), &(&coeff * x) * y);
                    }
                }
            }
        }
        out
    }

    /// `g⊗1 + 1⊗g` for a one-letter generator word.
    fn primitive_tensor(&self, g: FpWord) -> TensorElement {
        let one = self.field().one();
        let mut t = TensorElement::term((g.clone(), FpWord::empty()), one.clone());
        t.add_term((FpWord::empty(), g), one);
        t
    }

    fn letter_generators(&self, letter: &Letter) -> Vec<FpWord> {
        let dim = self.presentation().dim();
        match letter {
            Letter::X(n) => (0..*n)
                .map(|_| FpWord::new(alloc::vec![Letter::X(1)]).expect("x"))
                .collect(),
            Letter::Env(m) => m
                .word()
                .into_iter()
                .map(|i| FpWord::new(alloc::vec![Letter::Env(PbwMonomial::generator(dim, i))]).expect("generator"))
                .collect(),
        }
    }

    fn coproduct_word(&self, w: &FpWord) -> TensorElement {
        let one = self.field().one();
        let mut acc = TensorElement::term((FpWord::empty(), FpWord::empty()), one);
        for letter in w.letters() {
            for g in self.letter_generators(letter) {
                acc = self.tensor_mul(&acc, &self.primitive_tensor(g));
            }
        }
        acc
    }

    /// `Δ(a)`; fails if `a` has degree above `cap`. `Δ` preserves degree,
    /// so nothing is lost to truncation.
    pub fn coproduct(&self, a: &FpElement, cap: usize) -> Result<TensorElement> {
        let degree = fp_degree(a);
        if degree > cap {
            return Err(Error::DegreeOverCap { degree, cap });
        }
        Ok(a.map_linear(|w| self.coproduct_word(w)))
    }

    /// `Δ(a) - a⊗1 - 1⊗a`.
    pub fn primitivity_defect(&self, a: &FpElement) -> TensorElement {
        let delta = self.coproduct(a, fp_degree(a)).expect("cap equals degree");
        let one = self.one();
        delta.sub(&self.tensor(a, &one)).sub(&self.tensor(&one, a))
    }

    pub fn is_primitive(&self, a: &FpElement) -> PrimitivityCheck {
        let defect = self.primitivity_defect(a);
        PrimitivityCheck {
            primitive: defect.is_zero(),
            witness: defect.first().map(|(k, c)| (k.clone(), c.clone())),
        }
    }

    /// Counit extended to `A`: the coefficient of the empty word.
    pub fn counit(&self, a: &FpElement) -> Scalar {
        a.coeff(&FpWord::empty())
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    /// `(ε⊗id)(t)`.
    pub fn counit_left(&self, t: &TensorElement) -> FpElement {
        t.iter()
            .filter(|((u, _), _)| u.is_empty())
            .map(|((_, v), c)| (v.clone(), c.clone()))
            .collect()
    }

    /// `(id⊗ε)(t)`.
    pub fn counit_right(&self, t: &TensorElement) -> FpElement {
        t.iter()
            .filter(|((_, v), _)| v.is_empty())
            .map(|((u, _), c)| (u.clone(), c.clone()))
            .collect()
    }

    /// `(Δ⊗id)(t)`.
    pub fn coproduct_left(&self, t: &TensorElement) -> Tensor3Element {
        let mut out = Tensor3Element::zero();
        for ((u, v), c) in t.iter() {
            for ((a, b), d) in self.coproduct_word(u).iter() {
                out.add_term((a.clone(), b.clone(), v.clone()), c * d);
            }
        }
        out
    }

    /// `(id⊗Δ)(t)`.
    pub fn coproduct_right(&self, t: &TensorElement) -> Tensor3Element {
        let mut out = Tensor3Element::zero();
        for ((u, v), c) in t.iter() {
            for ((a, b), d) in self.coproduct_word(v).iter() {
                out.add_term((u.clone(), a.clone(), b.clone()), c * d);
            }
        }
        out
    }

    /// Kernel of `a ↦ primitivity_defect(a)` on the span of `ambient`.
    pub fn primitive_subspace(&self, ambient: &[FpWord], d: usize) -> Result<SubspaceBasis<FpWord>> {
        if let Some(w) = ambient.iter().find(|w| w.degree() > d) {
            return Err(Error::DegreeOverCap {
                degree: w.degree(),
                cap: d,
            });
        }
        let columns = crate::par::map_collect(ambient, |w| self.primitivity_defect(&self.word(w.clone())));
        let kernel = kernel_of_images(self.field(), &columns);
        Ok(SubspaceBasis::from_coordinates(self.field(), ambient.to_vec(), kernel))
    }

    /// Kernel of a linear map `ambient → A⊗A` given by `f` on basis
    /// elements, returned as coordinate vectors.
    pub fn defect_kernel<T: Sync>(
        &self,
        ambient: &[T],
        f: impl Fn(&T) -> TensorElement + Sync + Send,
    ) -> Vec<Vec<Scalar>> {
        let columns = crate::par::map_collect(ambient, f);
        kernel_of_images(self.field(), &columns)
    }

    /// Formats a defect term as `c (u ⊗ v)`.
    pub fn format_tensor_term(&self, key: &(FpWord, FpWord), c: &Scalar) -> alloc::string::String {
        alloc::format!("{c} ({} ⊗ {})", self.format_word(&key.0), self.format_word(&key.1))
    }

    pub fn format_tensor(&self, t: &TensorElement) -> alloc::string::String {
        let parts: Vec<_> = t.iter().map(|(k, c)| self.format_tensor_term(k, c)).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
