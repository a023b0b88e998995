//! JSON and text renderings of command results.
//!
//! Every document is built from exact scalar strings, so output is
//! byte-for-byte reproducible. Wall time appears only when requested.

use std::fmt::Write as _;

use liehopf_core::envelope::PmapReport;
use liehopf_core::{
    AdjoinClosure, FpElement, FpWord, FreeProduct, LiePresentation, PmapViolation, PresentationReport, Scalar,
    TensorElement, Theorem, VerificationReport, Witness,
};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// A rendered document in both output formats.
pub struct Rendered {
    pub json: String,
    pub text: String,
}

impl Rendered {
    fn new<T: Serialize>(doc: &T, text: String) -> Self {
        Self {
            json: serde_json::to_string_pretty(doc).expect("report documents serialize"),
            text,
        }
    }

    pub fn emit(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => format!("{}\n", self.json),
            OutputFormat::Text => self.text.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct TensorTerm {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

fn tensor_term(fp: &FreeProduct, key: &(FpWord, FpWord), c: &Scalar) -> TensorTerm {
    TensorTerm {
        left: fp.format_word(&key.0),
        right: fp.format_word(&key.1),
        coeff: c.to_string(),
    }
}

#[derive(Serialize)]
pub struct WordTerm {
    pub word: String,
    pub coeff: String,
}

fn word_terms(fp: &FreeProduct, a: &FpElement) -> Vec<WordTerm> {
    a.iter()
        .map(|(w, c)| WordTerm {
            word: fp.format_word(w),
            coeff: c.to_string(),
        })
        .collect()
}

#[derive(Serialize)]
struct NormalForm {
    expression: String,
    normal_form: String,
    degree: usize,
    terms: Vec<WordTerm>,
    /// Present when the element lies in the enveloping algebra: PBW
    /// exponent vectors with their coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pbw: Option<Vec<(Vec<u32>, String)>>,
}

pub fn normal_form(fp: &FreeProduct, src: &str, a: &FpElement) -> Rendered {
    let pbw = fp
        .project_env(a)
        .map(|e| e.iter().map(|(m, c)| (m.exponents().to_vec(), c.to_string())).collect());
    let doc = NormalForm {
        expression: src.into(),
        normal_form: fp.format(a),
        degree: fp.degree(a),
        terms: word_terms(fp, a),
        pbw,
    };
    let mut text = format!("{}\n", doc.normal_form);
    for t in &doc.terms {
        let _ = writeln!(text, "  {} {}", t.coeff, t.word);
    }
    Rendered::new(&doc, text)
}

#[derive(Serialize)]
struct Coproduct {
    expression: String,
    degree_cap: usize,
    coproduct: String,
    terms: Vec<TensorTerm>,
}

pub fn coproduct(fp: &FreeProduct, src: &str, cap: usize, t: &TensorElement) -> Rendered {
    let doc = Coproduct {
        expression: src.into(),
        degree_cap: cap,
        coproduct: fp.format_tensor(t),
        terms: t.iter().map(|(k, c)| tensor_term(fp, k, c)).collect(),
    };
    let mut text = format!("Δ({}) =\n", doc.expression);
    if doc.terms.is_empty() {
        text.push_str("  0\n");
    }
    for (k, c) in t.iter() {
        let _ = writeln!(text, "  {}", fp.format_tensor_term(k, c));
    }
    Rendered::new(&doc, text)
}

#[derive(Serialize)]
struct Primitive {
    expression: String,
    normal_form: String,
    primitive: bool,
    witness: Option<TensorTerm>,
}

pub fn primitive(fp: &FreeProduct, src: &str, a: &FpElement, witness: Option<&((FpWord, FpWord), Scalar)>) -> Rendered {
    let doc = Primitive {
        expression: src.into(),
        normal_form: fp.format(a),
        primitive: witness.is_none(),
        witness: witness.map(|(k, c)| tensor_term(fp, k, c)),
    };
    let text = match witness {
        None => format!("{}: primitive\n", doc.normal_form),
        Some((k, c)) => format!(
            "{}: not primitive\n  defect term: {}\n",
            doc.normal_form,
            fp.format_tensor_term(k, c)
        ),
    };
    Rendered::new(&doc, text)
}

#[derive(Serialize)]
struct Check {
    label: String,
    computed: usize,
    expected: usize,
    pass: bool,
}

#[derive(Serialize)]
struct WitnessDoc {
    kind: &'static str,
    subject: String,
    element: String,
    defect_term: Option<TensorTerm>,
    detail: String,
}

fn witness_doc(fp: &FreeProduct, w: &Witness) -> WitnessDoc {
    WitnessDoc {
        kind: w.kind.tag(),
        subject: w.subject.clone(),
        element: fp.format(&w.element),
        defect_term: w.term.as_ref().map(|(k, c)| tensor_term(fp, k, c)),
        detail: w.detail.clone(),
    }
}

#[derive(Serialize)]
struct Verification {
    theorem: &'static str,
    presentation: String,
    field: String,
    mode: String,
    degree: usize,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_dimension: Option<usize>,
    checks: Vec<Check>,
    witnesses: Vec<WitnessDoc>,
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed: Option<String>,
}

/// Renders a theorem report. `timings` keeps the wall time, which
/// otherwise is dropped so that reruns are identical.
pub fn verification(fp: &FreeProduct, report: &VerificationReport, timings: bool) -> Rendered {
    let mut report = report.clone();
    if !timings {
        report.elapsed = None;
    }
    // The first check of a derivation report compares the kernel with L.
    let kernel_dimension = match report.theorem {
        Theorem::UniversalDerivatives => report.checks.first().map(|c| c.computed),
        Theorem::UniversalEndomorphisms => None,
    };
    let doc = Verification {
        theorem: report.theorem.tag(),
        presentation: report.presentation.clone(),
        field: report.field.to_string(),
        mode: report.mode.to_string(),
        degree: report.degree,
        pass: report.pass,
        kernel_dimension,
        checks: report
            .checks
            .iter()
            .map(|c| Check {
                label: c.label.clone(),
                computed: c.computed,
                expected: c.expected,
                pass: c.pass,
            })
            .collect(),
        witnesses: report.witnesses.iter().map(|w| witness_doc(fp, w)).collect(),
        notes: report.notes.clone(),
        elapsed: report.elapsed.map(|t| format!("{}ms", t.as_millis())),
    };
    let mut text = report.to_string();
    if let Some(k) = kernel_dimension {
        let _ = writeln!(text, "  kernel dimension: {k}");
    }
    Rendered::new(&doc, text)
}

#[derive(Serialize)]
struct Closure {
    degree: usize,
    dimension: usize,
    dims_by_degree: Vec<usize>,
    basis: Vec<String>,
}

pub fn closure(fp: &FreeProduct, c: &AdjoinClosure) -> Rendered {
    let doc = Closure {
        degree: c.degree(),
        dimension: c.dim(),
        dims_by_degree: c.dims_by_degree(),
        basis: c.basis().iter().map(|b| fp.format(b)).collect(),
    };
    let mut text = format!(
        "Lie closure of L and x up to degree {}: dimension {}\n  by degree: {:?}\n",
        doc.degree, doc.dimension, doc.dims_by_degree
    );
    for b in &doc.basis {
        let _ = writeln!(text, "  {b}");
    }
    Rendered::new(&doc, text)
}

#[derive(Serialize)]
struct Violation {
    category: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct PmapDoc {
    ok: bool,
    violations: Vec<Violation>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct Validation {
    presentation: String,
    ok: bool,
    jacobi_failures: Vec<[String; 3]>,
    antisymmetry_conflicts: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pmap: Option<PmapDoc>,
}

fn violation(pres: &LiePresentation, v: &PmapViolation) -> Violation {
    let detail = match v {
        PmapViolation::AdAxiom { index } => {
            format!(
                "ad({}^[p]) differs from (ad {})^p",
                pres.names()[*index],
                pres.names()[*index]
            )
        }
        PmapViolation::Scaling { at, asserted, expected } => format!(
            "asserted ({})^[p] = {} but scaling gives {}",
            pres.format_element(at),
            pres.format_element(asserted),
            pres.format_element(expected)
        ),
        PmapViolation::Additivity { at } => {
            format!("additivity fails at {}", pres.format_element(at))
        }
    };
    Violation {
        category: v.category(),
        detail,
    }
}

pub fn validation(pres: &LiePresentation, structure: &PresentationReport, pmap: Option<&PmapReport>) -> Rendered {
    let name = |i: usize| pres.names()[i].clone();
    let pmap_doc = pmap.map(|r| PmapDoc {
        ok: r.is_ok(),
        violations: r.violations.iter().map(|v| violation(pres, v)).collect(),
        notes: r.notes.clone(),
    });
    let doc = Validation {
        presentation: pres.summary(),
        ok: structure.is_ok() && pmap.is_none_or(PmapReport::is_ok),
        jacobi_failures: structure
            .jacobi_failures
            .iter()
            .map(|&(i, j, k)| [name(i), name(j), name(k)])
            .collect(),
        antisymmetry_conflicts: structure
            .antisymmetry_conflicts
            .iter()
            .map(|&(i, j)| [name(i), name(j)])
            .collect(),
        pmap: pmap_doc,
    };
    let mut text = format!("{}: {}\n", doc.presentation, if doc.ok { "valid" } else { "INVALID" });
    for [a, b, c] in &doc.jacobi_failures {
        let _ = writeln!(text, "  Jacobi identity fails at ({a}, {b}, {c})");
    }
    for [a, b] in &doc.antisymmetry_conflicts {
        let _ = writeln!(text, "  conflicting entries for [{a}, {b}]");
    }
    if let Some(p) = &doc.pmap {
        let _ = writeln!(text, "  p-map: {}", if p.ok { "ok" } else { "INVALID" });
        for v in &p.violations {
            let _ = writeln!(text, "    {}: {}", v.category, v.detail);
        }
        for n in &p.notes {
            let _ = writeln!(text, "    note: {n}");
        }
    }
    Rendered::new(&doc, text)
}

#[derive(Serialize)]
pub struct LawOutcome {
    pub law: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, as the inputs' normal forms.
    pub first_failure: Option<Vec<String>>,
}

#[derive(Serialize)]
struct Properties {
    presentation: String,
    seed: u64,
    pass: bool,
    laws: Vec<LawOutcome>,
}

pub fn properties(pres: &LiePresentation, seed: u64, laws: Vec<LawOutcome>) -> Rendered {
    let doc = Properties {
        presentation: pres.summary(),
        seed,
        pass: laws.iter().all(|l| l.failures == 0),
        laws,
    };
    let mut text = format!(
        "property checks (seed {}): {}\n",
        seed,
        if doc.pass { "PASS" } else { "FAIL" }
    );
    for l in &doc.laws {
        let _ = writeln!(text, "  {:<28} {}/{} ok", l.law, l.cases - l.failures, l.cases);
        if let Some(inputs) = &l.first_failure {
            let _ = writeln!(text, "    first failure: {}", inputs.join(", "));
        }
    }
    Rendered::new(&doc, text)
}
