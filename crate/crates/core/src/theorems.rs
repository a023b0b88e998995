//! Finite-degree verifiers for two structural facts about `Q(L)`:
//! its constant-less universal derivatives are exactly `L`, and its only
//! universal endomorphisms are `0` and `id`.
//!
//! Both reduce to primitivity in `A = Q(L) * k[x]`. An element `a` is a
//! universal derivative iff `[a,x]` is primitive, and `m ↦ a·m·b` is
//! universal iff `a·x·b` is primitive. The Lie closure of `L ∪ {x}` inside
//! `A` is built separately by brackets (and p-th powers) and serves as an
//! oracle for the first test.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::envelope::{env_degree, EnvElement, EnvMode, PbwMonomial};
use crate::error::{Error, Result};
use crate::freeprod::{fp_degree, FpElement, FpWord, FreeProduct};
use crate::hopf::TensorElement;
use crate::liealg::LiePresentation;
use crate::linalg::{SparseEchelon, SubspaceBasis};
use crate::par::{map_collect, Stopwatch};
use crate::scalar::{Field, Scalar};

/// Exhaustive `(a, b)` scans run only when the number of pairs is at most
/// this.
pub const SCAN_PAIR_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    UniversalDerivatives,
    UniversalEndomorphisms,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::UniversalDerivatives => "universal-derivatives",
            Theorem::UniversalEndomorphisms => "universal-endomorphisms",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// `element` was expected to be primitive but has a nonzero defect.
    NonzeroDefect,
    /// `element` is primitive although the input was not expected to be.
    UnexpectedKernel,
    /// Primitivity and closure membership disagree on `element`.
    OracleDisagreement,
}

impl WitnessKind {
    pub fn tag(self) -> &'static str {
        match self {
            WitnessKind::NonzeroDefect => "nonzero-defect",
            WitnessKind::UnexpectedKernel => "unexpected-kernel",
            WitnessKind::OracleDisagreement => "oracle-disagreement",
        }
    }
}

/// An offending element together with one defect term when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub subject: String,
    /// The element of `A` whose primitivity was tested.
    pub element: FpElement,
    pub term: Option<((FpWord, FpWord), Scalar)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub label: String,
    pub computed: usize,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub presentation: String,
    pub field: Field,
    pub mode: EnvMode,
    pub degree: usize,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub elapsed: Option<Duration>,
}

impl VerificationReport {
    fn new(theorem: Theorem, fp: &FreeProduct, degree: usize) -> Self {
        Self {
            theorem,
            presentation: fp.presentation().summary(),
            field: fp.field(),
            mode: fp.mode(),
            degree,
            checks: Vec::new(),
            pass: false,
            witnesses: Vec::new(),
            notes: Vec::new(),
            elapsed: None,
        }
    }

    fn check(&mut self, label: impl Into<String>, computed: usize, expected: usize, pass: bool) {
        self.checks.push(CheckLine {
            label: label.into(),
            computed,
            expected,
            pass,
        });
    }

    fn finish(mut self, sw: &Stopwatch) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self.elapsed = sw.elapsed();
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.theorem, if self.pass { "PASS" } else { "FAIL" })?;
        writeln!(f, "  presentation: {}", self.presentation)?;
        writeln!(f, "  mode: {}, degree: {}", self.mode, self.degree)?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {} (computed {}, expected {})",
                if c.pass { "ok" } else { "FAIL" },
                c.label,
                c.computed,
                c.expected
            )?;
        }
        for w in &self.witnesses {
            writeln!(f, "  witness ({}): {}: {}", w.kind.tag(), w.subject, w.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        if let Some(t) = self.elapsed {
            writeln!(f, "  elapsed: {:.3}s", t.as_secs_f64())?;
        }
        Ok(())
    }
}

/// Outcome of a single universal-derivative test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeCheck {
    pub universal: bool,
    pub commutator: FpElement,
    pub witness: Option<Witness>,
}

/// Solutions `b` (or `a`) of `a·x·b` primitive for one fixed side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoSpace {
    pub basis: SubspaceBasis<PbwMonomial>,
    /// Set when the fixed side is zero, so every input qualifies.
    pub degenerate: bool,
    /// Degree cap of the free side's ambient.
    pub b_cap: usize,
}

impl EndoSpace {
    /// True if the space is exactly the scalars.
    pub fn is_scalars(&self) -> bool {
        let ambient = self.basis.ambient().to_vec();
        let one = ambient.iter().find(|m| m.is_identity()).cloned();
        match one {
            Some(m) => {
                let field = self.basis.field();
                let line = SubspaceBasis::from_elements(field, ambient, [&EnvElement::term(m, field.one())])
                    .expect("identity is in the ambient");
                self.basis.same_subspace(&line)
            }
            None => false,
        }
    }
}

/// The Lie subalgebra of `A` generated by `L` and `x` (closed under p-th
/// powers in restricted mode), truncated at a degree.
#[derive(Clone, Debug)]
pub struct AdjoinClosure {
    degree: usize,
    span: SparseEchelon<FpWord>,
}

impl AdjoinClosure {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    /// Membership; elements above the cap are never members.
    pub fn contains(&self, a: &FpElement) -> bool {
        fp_degree(a) <= self.degree && self.span.contains(a)
    }

    /// Dimensions of the associated graded pieces, degrees `1..=degree`.
    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut dims = vec![0; self.degree];
        for w in self.span.pivots() {
            dims[w.degree() - 1] += 1;
        }
        dims
    }

    /// A filtered basis: each element's degree is that of its leading word.
    pub fn basis(&self) -> Vec<FpElement> {
        self.span.rows().cloned().collect()
    }
}

struct DerivationSpace {
    ambient: Vec<PbwMonomial>,
    defects: Vec<TensorElement>,
    kernel: SubspaceBasis<PbwMonomial>,
    report: VerificationReport,
}

/// Theorem checks over a fixed free product `A = Q(L) * k[x]`.
#[derive(Clone, Debug)]
pub struct Verifier {
    fp: FreeProduct,
}

impl Verifier {
    pub fn new(fp: FreeProduct) -> Self {
        Self { fp }
    }

    pub fn from_presentation(pres: LiePresentation, mode: EnvMode) -> Result<Self> {
        Ok(Self::new(FreeProduct::from_presentation(pres, mode)?))
    }

    pub fn free_product(&self) -> &FreeProduct {
        &self.fp
    }

    fn require_derivation_mode(&self) -> Result<()> {
        if self.fp.mode() == EnvMode::Full && self.fp.field().is_prime_field() {
            return Err(Error::UnsupportedMode(
                "universal derivatives of the plain enveloping algebra in characteristic p are not characterised; use restricted mode".into(),
            ));
        }
        Ok(())
    }

    fn require_degree(d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::Input("degree must be at least 1".into()));
        }
        Ok(())
    }

    fn commutator_with_x(&self, a: &EnvElement) -> FpElement {
        self.fp.commutator(&self.fp.inject_env(a), &self.fp.x_gen())
    }

    fn witness(&self, kind: WitnessKind, subject: String, element: FpElement, defect: &TensorElement) -> Witness {
        let term = defect.first().map(|(k, c)| (k.clone(), c.clone()));
        let detail = match &term {
            Some((k, c)) => format!("defect term {}", self.fp.format_tensor_term(k, c)),
            None => format!("{} has zero defect", self.fp.format(&element)),
        };
        Witness {
            kind,
            subject,
            element,
            term,
            detail,
        }
    }

    /// Tests whether `[a,x]` is primitive. Requires `deg a + 1 <= d`.
    pub fn is_universal_derivative(&self, a: &EnvElement, d: usize) -> Result<DerivativeCheck> {
        self.require_derivation_mode()?;
        self.fp.envelope().check(a)?;
        let degree = env_degree(a) + 1;
        if degree > d {
            return Err(Error::DegreeOverCap { degree, cap: d });
        }
        let commutator = self.commutator_with_x(a);
        let defect = self.fp.primitivity_defect(&commutator);
        let witness = (!defect.is_zero()).then(|| {
            let subject = format!("a = {}", self.fp.envelope().format(a));
            self.witness(WitnessKind::NonzeroDefect, subject, commutator.clone(), &defect)
        });
        Ok(DerivativeCheck {
            universal: defect.is_zero(),
            commutator,
            witness,
        })
    }

    fn derivation_space(&self, d: usize, extra_expected: &[EnvElement]) -> Result<DerivationSpace> {
        self.require_derivation_mode()?;
        Self::require_degree(d)?;
        for e in extra_expected {
            self.fp.envelope().check(e)?;
        }
        let sw = Stopwatch::start();
        let env = self.fp.envelope();
        let field = self.fp.field();
        let ambient: Vec<PbwMonomial> = env.pbw_basis(d).into_iter().filter(|m| !m.is_identity()).collect();
        let defects = map_collect(&ambient, |m| {
            self.fp.primitivity_defect(&self.commutator_with_x(&env.monomial(m)))
        });
        let kernel_vectors = crate::linalg::kernel_of_images(field, &defects);
        let kernel = SubspaceBasis::from_coordinates(field, ambient.clone(), kernel_vectors);

        let mut expected_elems: Vec<EnvElement> = (0..env.dim()).map(|i| env.generator(i)).collect();
        expected_elems.extend(extra_expected.iter().map(|e| env.constantless_part(e)));
        let expected =
            SubspaceBasis::from_elements(field, ambient.clone(), expected_elems.iter()).ok_or_else(|| {
                Error::DegreeOverCap {
                    degree: expected_elems.iter().map(env_degree).max().unwrap_or(0),
                    cap: d,
                }
            })?;

        let mut report = VerificationReport::new(Theorem::UniversalDerivatives, &self.fp, d);
        report.check(
            format!(
                "constant-less kernel over {} monomials equals the expected space",
                ambient.len()
            ),
            kernel.dim(),
            expected.dim(),
            kernel.same_subspace(&expected),
        );
        for v in expected.vectors() {
            if !kernel.contains(&v) {
                let c = self.commutator_with_x(&v);
                let defect = self.fp.primitivity_defect(&c);
                let subject = format!("expected a = {}", env.format(&v));
                report
                    .witnesses
                    .push(self.witness(WitnessKind::NonzeroDefect, subject, c, &defect));
            }
        }
        for v in kernel.vectors() {
            if !expected.contains(&v) {
                let c = self.commutator_with_x(&v);
                let subject = format!("kernel a = {}", env.format(&v));
                report
                    .witnesses
                    .push(self.witness(WitnessKind::UnexpectedKernel, subject, c, &TensorElement::zero()));
            }
        }
        let report = report.finish(&sw);
        Ok(DerivationSpace {
            ambient,
            defects,
            kernel,
            report,
        })
    }

    /// Kernel of `a ↦ defect([a,x])` on constant-less PBW monomials of
    /// degree at most `d`, with a report comparing it to `L`.
    pub fn universal_derivative_space(&self, d: usize) -> Result<(SubspaceBasis<PbwMonomial>, VerificationReport)> {
        let s = self.derivation_space(d, &[])?;
        Ok((s.kernel, s.report))
    }

    /// Filtered basis of the Lie closure of `L ∪ {x}` in `A` up to degree `d`.
    ///
    /// Rows are kept as a leading-term echelon basis, so every element of
    /// degree `k` in the closure is a combination of rows of degree at most
    /// `k`. Two rows in the ideal generated by `x` are bracketed only when
    /// their degrees sum to at most `d`; rows from `L` are bracketed with
    /// everything. In restricted mode `g^p` is added for rows `g` of the
    /// ideal with `p·deg g <= d`.
    pub fn adjoin_closure(&self, d: usize) -> AdjoinClosure {
        let fp = &self.fp;
        let mut span = SparseEchelon::new(fp.field());
        let mut rows: Vec<(FpElement, usize, bool)> = Vec::new();
        let push = |span: &mut SparseEchelon<FpWord>, rows: &mut Vec<(FpElement, usize, bool)>, v: &FpElement| {
            if v.is_zero() || fp_degree(v) > d {
                return;
            }
            if let Some(row) = span.insert(v) {
                let in_l = row.keys().all(FpWord::is_env_only);
                let deg = fp_degree(&row);
                rows.push((row, deg, in_l));
            }
        };
        if d >= 1 {
            for i in 0..fp.presentation().dim() {
                push(&mut span, &mut rows, &fp.lie_generator(i));
            }
            push(&mut span, &mut rows, &fp.x_gen());
        }
        let p = match fp.mode() {
            EnvMode::Restricted => Some(fp.field().characteristic() as usize),
            EnvMode::Full => None,
        };
        let mut i = 0;
        while i < rows.len() {
            let (g, dg, g_in_l) = rows[i].clone();
            if let Some(p) = p {
                if !g_in_l && p * dg <= d {
                    let pw = fp.power(&g, p as u32);
                    push(&mut span, &mut rows, &pw);
                }
            }
            for j in 0..i {
                let (h, dh, h_in_l) = rows[j].clone();
                if g_in_l && h_in_l {
                    continue;
                }
                if g_in_l || h_in_l || dg + dh <= d {
                    let b = fp.commutator(&g, &h);
                    push(&mut span, &mut rows, &b);
                }
            }
            i += 1;
        }
        AdjoinClosure { degree: d, span }
    }

    /// Membership of `a` in the Lie closure of `L ∪ {x}`; needs `deg a <= d`.
    pub fn member_of_adjoin(&self, a: &FpElement, d: usize) -> Result<bool> {
        let degree = fp_degree(a);
        if degree > d {
            return Err(Error::DegreeOverCap { degree, cap: d });
        }
        Ok(self.adjoin_closure(d).contains(a))
    }

    fn endo_space(&self, fixed: &EnvElement, d: usize, fixed_on_left: bool) -> Result<EndoSpace> {
        let env = self.fp.envelope();
        env.check(fixed)?;
        let field = self.fp.field();
        let ambient = env.pbw_basis(d);
        if fixed.is_zero() {
            return Ok(EndoSpace {
                basis: SubspaceBasis::full(field, ambient),
                degenerate: true,
                b_cap: d,
            });
        }
        let x = self.fp.x_gen();
        let f = self.fp.inject_env(fixed);
        let (fx, xf) = (self.fp.mul(&f, &x), self.fp.mul(&x, &f));
        let kernel = self.fp.defect_kernel(&ambient, |m| {
            let other = self.fp.inject_env(&env.monomial(m));
            let prod = if fixed_on_left {
                self.fp.mul(&fx, &other)
            } else {
                self.fp.mul(&other, &xf)
            };
            self.fp.primitivity_defect(&prod)
        });
        Ok(EndoSpace {
            basis: SubspaceBasis::from_coordinates(field, ambient, kernel),
            degenerate: false,
            b_cap: d,
        })
    }

    /// All `b` of degree at most `d` with `a·x·b` primitive.
    pub fn endo_right_space(&self, a: &EnvElement, d: usize) -> Result<EndoSpace> {
        self.endo_space(a, d, true)
    }

    /// All `a` of degree at most `d` with `a·x·b` primitive.
    pub fn endo_left_space(&self, b: &EnvElement, d: usize) -> Result<EndoSpace> {
        self.endo_space(b, d, false)
    }

    /// Universal derivatives up to degree `d` are exactly `L`, checked by
    /// primitivity and cross-checked against the Lie closure.
    pub fn verify_derivations(&self, d: usize) -> Result<VerificationReport> {
        self.verify_derivations_against(d, &[])
    }

    /// As [`Verifier::verify_derivations`], with `extra_expected` added to
    /// the expected space. Used for negative controls.
    pub fn verify_derivations_against(&self, d: usize, extra_expected: &[EnvElement]) -> Result<VerificationReport> {
        let sw = Stopwatch::start();
        let space = self.derivation_space(d, extra_expected)?;
        let mut report = space.report;
        let env = self.fp.envelope();
        let closure = self.adjoin_closure(d + 1);

        let kernel_vectors = space.kernel.vectors();
        let mut agree = 0;
        for v in &kernel_vectors {
            let c = self.commutator_with_x(v);
            if closure.contains(&c) {
                agree += 1;
            } else {
                let subject = format!("kernel a = {} but [a,x] is outside the closure", env.format(v));
                report.witnesses.push(self.witness(
                    WitnessKind::OracleDisagreement,
                    subject,
                    c,
                    &TensorElement::zero(),
                ));
            }
        }
        report.check(
            "kernel basis: [a,x] lies in the Lie closure of L and x",
            agree,
            kernel_vectors.len(),
            agree == kernel_vectors.len(),
        );

        let mut outside = 0;
        let mut nonzero = 0;
        let mut expected_outside = 0;
        for (m, defect) in space.ambient.iter().zip(&space.defects) {
            let a = env.monomial(m);
            if space.kernel.contains(&a) {
                continue;
            }
            expected_outside += 1;
            if !defect.is_zero() {
                nonzero += 1;
            }
            let c = self.commutator_with_x(&a);
            if closure.contains(&c) {
                let subject = format!("a = {} has [a,x] in the closure", env.format(&a));
                report
                    .witnesses
                    .push(self.witness(WitnessKind::OracleDisagreement, subject, c, defect));
            } else {
                outside += 1;
            }
        }
        report.check(
            "non-kernel monomials: [a,x] has nonzero defect",
            nonzero,
            expected_outside,
            nonzero == expected_outside,
        );
        report.check(
            "non-kernel monomials: [a,x] lies outside the Lie closure",
            outside,
            expected_outside,
            outside == expected_outside,
        );
        Ok(report.finish(&sw))
    }

    /// The only universal endomorphisms are `0` and `id`, checked as: for
    /// non-scalar PBW monomials the solution spaces on either side are
    /// zero, for `1` they are the scalars, and over prime fields an
    /// exhaustive scan of the degree-at-most-1 ambient finds primitive
    /// `a·x·b` only when `a·x·b = 0` or both factors are scalars.
    pub fn verify_endomorphisms(&self, d: usize) -> Result<VerificationReport> {
        Self::require_degree(d)?;
        let sw = Stopwatch::start();
        let env = self.fp.envelope();
        let field = self.fp.field();
        let mut report = VerificationReport::new(Theorem::UniversalEndomorphisms, &self.fp, d);
        let nonscalar: Vec<PbwMonomial> = env.pbw_basis(d).into_iter().filter(|m| !m.is_identity()).collect();

        for (side, left) in [("right", true), ("left", false)] {
            let spaces = map_collect(&nonscalar, |m| self.endo_space(&env.monomial(m), d, left));
            let mut zero = 0;
            for (m, space) in nonscalar.iter().zip(spaces) {
                let space = space?;
                if space.basis.dim() == 0 {
                    zero += 1;
                    continue;
                }
                let fixed = env.monomial(m);
                for v in space.basis.vectors() {
                    let (a, b) = if left { (&fixed, &v) } else { (&v, &fixed) };
                    let prod = self.axb(a, b);
                    let subject = format!("a = {}, b = {}", env.format(a), env.format(b));
                    report.witnesses.push(self.witness(
                        WitnessKind::UnexpectedKernel,
                        subject,
                        prod,
                        &TensorElement::zero(),
                    ));
                }
            }
            let fixed_name = if left { "a" } else { "b" };
            report.check(
                format!("{side} sweep: zero solution space for non-scalar {fixed_name} of degree 1..{d}"),
                zero,
                nonscalar.len(),
                zero == nonscalar.len(),
            );
            let one = self.endo_space(&env.one(), d, left)?;
            report.check(
                format!("{side} sweep: {fixed_name} = 1 gives exactly the scalars"),
                one.basis.dim(),
                1,
                one.is_scalars(),
            );
            if !left {
                continue;
            }
            let mut lambdas: Vec<Scalar> = Vec::new();
            for k in [2, -1] {
                let s = field.from_i64(k);
                if !s.is_zero() && !s.is_one() && !lambdas.contains(&s) {
                    lambdas.push(s);
                }
            }
            if lambdas.is_empty() {
                report
                    .notes
                    .push("scalar invariance skipped: the field has no scalar other than 0 and 1".into());
            } else {
                let mut same = 0;
                for l in &lambdas {
                    let s = self.endo_space(&env.scalar(l.clone()), d, true)?;
                    if s.basis.same_subspace(&one.basis) {
                        same += 1;
                    }
                }
                report.check(
                    "right solution space for a = λ·1 matches a = 1",
                    same,
                    lambdas.len(),
                    same == lambdas.len(),
                );
            }
        }

        if field.is_prime_field() {
            self.exhaustive_scan(&mut report)?;
        } else {
            report.notes.push("exhaustive scan not applicable over Q".into());
        }
        if field.is_prime_field() && self.fp.mode() == EnvMode::Full {
            report.notes.push(
                "plain enveloping algebra in characteristic p: the expected outcome is the characteristic-free form of the statement, not the restricted one".into(),
            );
        }
        Ok(report.finish(&sw))
    }

    fn axb(&self, a: &EnvElement, b: &EnvElement) -> FpElement {
        let fp = &self.fp;
        fp.mul(&fp.mul(&fp.inject_env(a), &fp.x_gen()), &fp.inject_env(b))
    }

    /// Enumerates every pair `(a, b)` over the ambient `span(1, L)` and
    /// checks which `a·x·b` are primitive, using bilinearity of
    /// `(a, b) ↦ defect(a·x·b)` on precomputed basis defects.
    fn exhaustive_scan(&self, report: &mut VerificationReport) -> Result<()> {
        let env = self.fp.envelope();
        let field = self.fp.field();
        let p = field.characteristic() as u64;
        let ambient = env.pbw_basis(1);
        let m = ambient.len();
        let q = p.checked_pow(m as u32).unwrap_or(u64::MAX);
        let pairs = q.saturating_mul(q);
        if pairs > SCAN_PAIR_LIMIT {
            report.notes.push(format!(
                "exhaustive scan skipped: {pairs} pairs exceed the limit of {SCAN_PAIR_LIMIT}"
            ));
            return Ok(());
        }

        let defects: Vec<Vec<TensorElement>> = ambient
            .iter()
            .map(|mi| {
                ambient
                    .iter()
                    .map(|mj| {
                        self.fp
                            .primitivity_defect(&self.axb(&env.monomial(mi), &env.monomial(mj)))
                    })
                    .collect()
            })
            .collect();
        let mut keys: Vec<(FpWord, FpWord)> = defects.iter().flatten().flat_map(|t| t.keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        let residue = |s: &Scalar| -> u64 {
            match s {
                Scalar::Modular { value, .. } => u64::from(*value),
                Scalar::Rational(_) => unreachable!("prime field"),
            }
        };
        let dense: Vec<Vec<Vec<u64>>> = defects
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| keys.iter().map(|k| t.coeff(k).map(residue).unwrap_or(0)).collect())
                    .collect()
            })
            .collect();
        let digits: Vec<Vec<u64>> = (0..q)
            .map(|mut v| {
                (0..m)
                    .map(|_| {
                        let dgt = v % p;
                        v /= p;
                        dgt
                    })
                    .collect()
            })
            .collect();

        // ambient[0] is the identity.
        let is_zero = |c: &[u64]| c.iter().all(|&v| v == 0);
        let is_scalar = |c: &[u64]| c[1..].iter().all(|&v| v == 0);
        let mut primitive = 0u64;
        let mut bad: Vec<(usize, usize)> = Vec::new();
        let mut scalar_pairs: Vec<(u64, u64)> = Vec::new();
        let nk = keys.len();
        for (ai, alpha) in digits.iter().enumerate() {
            let cols: Vec<Vec<u64>> = (0..m)
                .map(|j| {
                    let mut col = vec![0u64; nk];
                    for (i, &a) in alpha.iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        for (c, &dv) in col.iter_mut().zip(&dense[i][j]) {
                            *c = (*c + a * dv) % p;
                        }
                    }
                    col
                })
                .collect();
            for (bi, beta) in digits.iter().enumerate() {
                let prim = (0..nk).all(|k| {
                    let s: u64 = beta.iter().zip(&cols).map(|(&b, col)| b * col[k]).sum();
                    s.is_multiple_of(p)
                });
                if !prim {
                    continue;
                }
                primitive += 1;
                let trivial = is_zero(alpha) || is_zero(beta);
                let scalars = is_scalar(alpha) && is_scalar(beta);
                if !(trivial || scalars) {
                    bad.push((ai, bi));
                } else if !trivial {
                    scalar_pairs.push((alpha[0], beta[0]));
                }
            }
        }
        let expected = (2 * q - 1) + (p - 1) * (p - 1);
        let to_elem = |c: &[u64]| -> EnvElement {
            ambient
                .iter()
                .zip(c)
                .map(|(mono, &v)| (mono.clone(), field.from_i64(v as i64)))
                .collect()
        };
        for &(ai, bi) in bad.iter().take(8) {
            let (a, b) = (to_elem(&digits[ai]), to_elem(&digits[bi]));
            let subject = format!("a = {}, b = {}", env.format(&a), env.format(&b));
            report.witnesses.push(self.witness(
                WitnessKind::UnexpectedKernel,
                subject,
                self.axb(&a, &b),
                &TensorElement::zero(),
            ));
        }
        report.check(
            format!(
                "exhaustive scan of {pairs} pairs over span(1, L): primitive only when a·x·b = 0 or both are scalars"
            ),
            usize::try_from(primitive).unwrap_or(usize::MAX),
            usize::try_from(expected).unwrap_or(usize::MAX),
            bad.is_empty() && primitive == expected,
        );

        let x = self.fp.x_gen();
        let consistent = scalar_pairs
            .iter()
            .filter(|(l, u)| {
                let (lam, mu) = (field.from_i64(*l as i64), field.from_i64(*u as i64));
                let prod = self.axb(&env.scalar(lam.clone()), &env.scalar(mu.clone()));
                prod == x.scale(&(&lam * &mu))
            })
            .count();
        report.notes.push(format!(
            "scalar pairs (λ, μ) with a·x·b primitive: {} of {} satisfy a·x·b = (λμ)·x",
            consistent,
            scalar_pairs.len()
        ));
        Ok(())
    }
}

impl fmt::Display for DerivativeCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("universal derivative"),
            Some(w) => write!(f, "not a universal derivative: {}", w.detail),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sl2() -> Verifier {
        Verifier::from_presentation(fixtures::sl2_q(), EnvMode::Full).unwrap()
    }

    fn restricted(pres: LiePresentation) -> Verifier {
        Verifier::from_presentation(pres, EnvMode::Restricted).unwrap()
    }

    #[test]
    fn generators_are_universal_derivatives() {
        let v = sl2();
        let env = v.free_product().envelope();
        for i in 0..3 {
            let c = v.is_universal_derivative(&env.generator(i), 2).unwrap();
            assert!(c.universal);
            assert!(c.witness.is_none());
        }
    }

    #[test]
    fn e_squared_and_casimir_are_not() {
        let v = sl2();
        let env = v.free_product().envelope();
        let q = Field::Rational;
        let (e, h, f) = (env.generator(0), env.generator(1), env.generator(2));
        let e2 = env.mul(&e, &e);
        let c = v.is_universal_derivative(&e2, 3).unwrap();
        assert!(!c.universal);
        let w = c.witness.unwrap();
        assert!(!v.free_product().primitivity_defect(&w.element).is_zero());

        let half = q.parse_scalar("1/2").unwrap();
        let cas = env.mul(&e, &f).add(&env.mul(&f, &e)).add(&env.mul(&h, &h).scale(&half));
        assert!(!v.is_universal_derivative(&cas, 3).unwrap().universal);
        assert_eq!(
            v.is_universal_derivative(&e2, 2).unwrap_err(),
            Error::DegreeOverCap { degree: 3, cap: 2 }
        );
    }

    #[test]
    fn plain_char_p_is_refused() {
        let v = Verifier::from_presentation(fixtures::sl2_f5(), EnvMode::Full).unwrap();
        let g = v.free_product().envelope().generator(0);
        assert!(matches!(
            v.is_universal_derivative(&g, 2),
            Err(Error::UnsupportedMode(_))
        ));
        assert!(matches!(v.verify_derivations(2), Err(Error::UnsupportedMode(_))));
    }

    #[test]
    fn derivation_space_sl2() {
        let (k, report) = sl2().universal_derivative_space(2).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(report.pass);
    }

    #[test]
    fn closure_dims_free_on_two() {
        let v = Verifier::from_presentation(fixtures::abelian_q(1), EnvMode::Full).unwrap();
        assert_eq!(v.adjoin_closure(4).dims_by_degree(), vec![2, 1, 2, 3]);
        assert_eq!(v.adjoin_closure(1).dim(), 2);
    }

    #[test]
    fn closure_sl2_degree_two() {
        let v = sl2();
        let c = v.adjoin_closure(2);
        assert_eq!(c.dims_by_degree(), vec![4, 3]);
        let fp = v.free_product();
        let (e, x) = (fp.lie_generator(0), fp.x_gen());
        assert!(c.contains(&fp.commutator(&e, &x)));
        assert!(!c.contains(&fp.mul(&e, &x)));
        assert!(c.contains(&x));
        assert!(v.member_of_adjoin(&fp.commutator(&e, &x), 1).is_err());
    }

    #[test]
    fn closure_matches_primitives_of_a() {
        let cases = [
            (fixtures::sl2_q(), EnvMode::Full, 3),
            (fixtures::heisenberg_q(), EnvMode::Full, 3),
            (fixtures::toral_f3(), EnvMode::Restricted, 3),
            (fixtures::solvable2_f2(), EnvMode::Restricted, 4),
        ];
        for (pres, mode, d) in cases {
            let v = Verifier::from_presentation(pres, mode).unwrap();
            let fp = v.free_product();
            let ambient: Vec<FpWord> = fp.basis(d).into_iter().filter(|w| !w.is_empty()).collect();
            let prim = fp.primitive_subspace(&ambient, d).unwrap();
            let closure = v.adjoin_closure(d);
            assert_eq!(prim.dim(), closure.dim(), "{}", fp.presentation().summary());
            for b in closure.basis() {
                assert!(prim.contains(&b));
            }
        }
    }

    #[test]
    fn verify_derivations_pass_and_negative_control() {
        let v = sl2();
        assert!(v.verify_derivations(2).unwrap().pass);
        let env = v.free_product().envelope();
        let e = env.generator(0);
        let r = v.verify_derivations_against(2, &[env.mul(&e, &e)]).unwrap();
        assert!(!r.pass);
        let w: Vec<_> = r
            .witnesses
            .iter()
            .filter(|w| w.kind == WitnessKind::NonzeroDefect)
            .collect();
        assert_eq!(w.len(), 1);
        assert!(!v.free_product().primitivity_defect(&w[0].element).is_zero());
    }

    #[test]
    fn verify_derivations_restricted() {
        assert!(restricted(fixtures::toral_f3()).verify_derivations(3).unwrap().pass);
        assert!(restricted(fixtures::solvable2_f2()).verify_derivations(2).unwrap().pass);
    }

    #[test]
    fn endo_spaces() {
        let v = sl2();
        let env = v.free_product().envelope();
        let r = v.endo_right_space(&env.generator(0), 2).unwrap();
        assert_eq!(r.basis.dim(), 0);
        assert!(!r.degenerate);
        assert!(v.endo_right_space(&env.one(), 2).unwrap().is_scalars());
        assert!(v.endo_left_space(&env.one(), 2).unwrap().is_scalars());
        assert_eq!(v.endo_left_space(&env.generator(2), 2).unwrap().basis.dim(), 0);
        let z = v.endo_right_space(&EnvElement::zero(), 2).unwrap();
        assert!(z.degenerate);
        assert_eq!(z.basis.dim(), 10);
    }

    #[test]
    fn verify_endomorphisms_small() {
        let r = sl2().verify_endomorphisms(1).unwrap();
        assert!(r.pass, "{r}");
        let r = restricted(fixtures::solvable2_f2()).verify_endomorphisms(2).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.checks.iter().any(|c| c.label.starts_with("exhaustive scan")));
    }
}
