use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use liehopf_core::envelope::{validate_pmap, Envelope};
use liehopf_core::{EnvElement, EnvMode, FpElement, FreeProduct, LiePresentation, Scalar, Verifier};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{self, LawOutcome, OutputFormat, Rendered};
use crate::{exit, CliError};

#[derive(Parser, Debug)]
#[command(
    name = "liehopf",
    version,
    about = "Exact computations in enveloping algebras of Lie algebras and their free products with k[x]"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Enveloping algebra to use; defaults to restricted when the file has a p-map.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for verification sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub parallel: Option<u16>,
    /// Include wall time in reports.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    Restricted,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Jacobi identity and, when present, the p-map axioms.
    Validate { file: PathBuf },
    /// Normal form of an expression in Q(L) * k[x].
    Nf { file: PathBuf, expr: String },
    /// Coproduct of an expression.
    Coprod {
        file: PathBuf,
        expr: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Whether an expression is primitive, with a defect term if not.
    Primitive { file: PathBuf, expr: String },
    /// Verify that the constant-less universal derivatives are exactly L.
    Derivations {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Extra element of Q(L) claimed to be a universal derivative
        /// (a negative control; repeatable).
        #[arg(long = "expect", value_name = "EXPR")]
        expect: Vec<String>,
    },
    /// Verify that the only universal endomorphisms are 0 and id.
    Endos {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Lie closure of L and x inside Q(L) * k[x].
    Closure {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Randomized checks of the algebra and bialgebra laws.
    Props {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

impl Command {
    fn file(&self) -> &PathBuf {
        match self {
            Command::Validate { file }
            | Command::Nf { file, .. }
            | Command::Coprod { file, .. }
            | Command::Primitive { file, .. }
            | Command::Derivations { file, .. }
            | Command::Endos { file, .. }
            | Command::Closure { file, .. }
            | Command::Props { file, .. } => file,
        }
    }
}

/// Result of a command: the document and its exit status.
pub struct Outcome {
    pub rendered: Rendered,
    pub code: i32,
}

fn mode_for(cli: &Cli, pres: &LiePresentation) -> EnvMode {
    match cli.mode {
        Some(ModeArg::Full) => EnvMode::Full,
        Some(ModeArg::Restricted) => EnvMode::Restricted,
        None if pres.pmap().is_some() => EnvMode::Restricted,
        None => EnvMode::Full,
    }
}

/// Loads a presentation and refuses it unless it is a Lie algebra (and,
/// in restricted mode, a restricted one).
fn load_checked(cli: &Cli, file: &Path) -> Result<FreeProduct, CliError> {
    let pres = crate::load_presentation(file)?;
    let structure = pres.validate();
    if !structure.is_ok() {
        return Err(CliError::Input(format!(
            "{} is not a Lie algebra presentation; run `liehopf validate` for details",
            file.display()
        )));
    }
    let mode = mode_for(cli, &pres);
    let fp = FreeProduct::from_presentation(pres, mode)?;
    if mode == EnvMode::Restricted && !validate_pmap(fp.presentation())?.is_ok() {
        return Err(CliError::Input(format!(
            "{} has an invalid p-map; run `liehopf validate` for details",
            file.display()
        )));
    }
    Ok(fp)
}

fn require_degree(d: usize) -> Result<(), CliError> {
    if d == 0 {
        return Err(CliError::Input("--degree must be at least 1".into()));
    }
    Ok(())
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        exit::OK
    } else {
        exit::CHECK_FAILED
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let file = cli.command.file();
    if let Command::Validate { .. } = cli.command {
        let pres = crate::load_presentation(file)?;
        let structure = pres.validate();
        let pmap = match pres.pmap() {
            Some(_) if structure.is_ok() => Some(validate_pmap(&pres)?),
            _ => None,
        };
        let ok = structure.is_ok() && pmap.as_ref().is_none_or(|r| r.is_ok());
        return Ok(Outcome {
            rendered: report::validation(&pres, &structure, pmap.as_ref()),
            code: if ok { exit::OK } else { exit::INPUT },
        });
    }
    let fp = load_checked(cli, file)?;
    let outcome = match &cli.command {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::Nf { expr, .. } => {
            let a = crate::eval_str(expr, &fp)?;
            Outcome {
                rendered: report::normal_form(&fp, expr, &a),
                code: exit::OK,
            }
        }
        Command::Coprod { expr, degree, .. } => {
            let a = crate::eval_str(expr, &fp)?;
            let t = fp.coproduct(&a, *degree)?;
            Outcome {
                rendered: report::coproduct(&fp, expr, *degree, &t),
                code: exit::OK,
            }
        }
        Command::Primitive { expr, .. } => {
            let a = crate::eval_str(expr, &fp)?;
            let check = fp.is_primitive(&a);
            Outcome {
                rendered: report::primitive(&fp, expr, &a, check.witness.as_ref()),
                code: exit::OK,
            }
        }
        Command::Derivations { degree, expect, .. } => {
            require_degree(*degree)?;
            let extra = expect
                .iter()
                .map(|src| {
                    let a = crate::eval_str(src, &fp)?;
                    fp.project_env(&a).ok_or_else(|| {
                        CliError::Input(format!("--expect {src}: not an element of the enveloping algebra"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let v = Verifier::new(fp);
            let r = v.verify_derivations_against(*degree, &extra)?;
            Outcome {
                rendered: report::verification(v.free_product(), &r, cli.timings),
                code: pass_code(r.pass),
            }
        }
        Command::Endos { degree, .. } => {
            require_degree(*degree)?;
            let v = Verifier::new(fp);
            let r = v.verify_endomorphisms(*degree)?;
            Outcome {
                rendered: report::verification(v.free_product(), &r, cli.timings),
                code: pass_code(r.pass),
            }
        }
        Command::Closure { degree, .. } => {
            require_degree(*degree)?;
            let v = Verifier::new(fp);
            let c = v.adjoin_closure(*degree);
            Outcome {
                rendered: report::closure(v.free_product(), &c),
                code: exit::OK,
            }
        }
        Command::Props { cases, .. } => {
            let laws = run_properties(&fp, cli.seed, *cases);
            let pass = laws.iter().all(|l| l.failures == 0);
            Outcome {
                rendered: report::properties(fp.presentation(), cli.seed, laws),
                code: pass_code(pass),
            }
        }
    };
    Ok(outcome)
}

fn small_scalar(fp: &FreeProduct, rng: &mut ChaCha8Rng) -> Scalar {
    let c = loop {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            break c;
        }
    };
    fp.field().from_i64(c)
}

fn random_env(env: &Envelope, fp: &FreeProduct, rng: &mut ChaCha8Rng) -> EnvElement {
    let basis = env.pbw_basis(3);
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            (
                basis.choose(rng).expect("nonempty basis").clone(),
                small_scalar(fp, rng),
            )
        })
        .collect()
}

fn random_fp(fp: &FreeProduct, rng: &mut ChaCha8Rng) -> FpElement {
    let basis = fp.basis(3);
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            (
                basis.choose(rng).expect("nonempty basis").clone(),
                small_scalar(fp, rng),
            )
        })
        .collect()
}

struct Tally {
    outcome: LawOutcome,
}

impl Tally {
    fn new(law: &'static str) -> Self {
        Self {
            outcome: LawOutcome {
                law,
                cases: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn record(&mut self, ok: bool, inputs: impl FnOnce() -> Vec<String>) {
        self.outcome.cases += 1;
        if !ok {
            self.outcome.failures += 1;
            if self.outcome.first_failure.is_none() {
                self.outcome.first_failure = Some(inputs());
            }
        }
    }
}

/// Randomized law checks on elements of degree at most 3. Cases are drawn
/// from one seeded stream, so results depend only on `seed` and `cases`.
pub fn run_properties(fp: &FreeProduct, seed: u64, cases: usize) -> Vec<LawOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env = fp.envelope();
    let cap = 3 * 3 + 1;
    let mut env_assoc = Tally::new("Q(L) associativity");
    let mut fp_assoc = Tally::new("A associativity");
    let mut delta_mul = Tally::new("coproduct multiplicativity");
    let mut coassoc = Tally::new("coassociativity");
    let mut counit = Tally::new("counit laws");
    let mut eps_mul = Tally::new("counit multiplicativity");

    for _ in 0..cases {
        let (a, b, c) = (
            random_env(env, fp, &mut rng),
            random_env(env, fp, &mut rng),
            random_env(env, fp, &mut rng),
        );
        let ok = env.mul(&env.mul(&a, &b), &c) == env.mul(&a, &env.mul(&b, &c));
        env_assoc.record(ok, || vec![env.format(&a), env.format(&b), env.format(&c)]);

        let (u, v, w) = (
            random_fp(fp, &mut rng),
            random_fp(fp, &mut rng),
            random_fp(fp, &mut rng),
        );
        let show = |xs: &[&FpElement]| xs.iter().map(|x| fp.format(x)).collect::<Vec<_>>();
        let ok = fp.mul(&fp.mul(&u, &v), &w) == fp.mul(&u, &fp.mul(&v, &w));
        fp_assoc.record(ok, || show(&[&u, &v, &w]));

        let uv = fp.mul(&u, &v);
        let du = fp.coproduct(&u, cap).expect("degree within cap");
        let dv = fp.coproduct(&v, cap).expect("degree within cap");
        let duv = fp.coproduct(&uv, cap).expect("degree within cap");
        delta_mul.record(duv == fp.tensor_mul(&du, &dv), || show(&[&u, &v]));
        coassoc.record(fp.coproduct_left(&du) == fp.coproduct_right(&du), || show(&[&u]));
        counit.record(fp.counit_left(&du) == u && fp.counit_right(&du) == u, || show(&[&u]));
        eps_mul.record(fp.counit(&uv) == &fp.counit(&u) * &fp.counit(&v), || show(&[&u, &v]));
    }
    [env_assoc, fp_assoc, delta_mul, coassoc, counit, eps_mul]
        .into_iter()
        .map(|t| t.outcome)
        .collect()
}

/// Parses `args`, runs the command, writes the report to `out` and any
/// error to `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.parallel {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(usize::from(n)).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Input(format!("cannot start {n} workers: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.rendered.emit(cli.format).as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
