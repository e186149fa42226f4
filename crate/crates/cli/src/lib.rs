//! The `hermite` command line: argument model, dispatch and exit codes.

pub mod input;
pub mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermite_core::conjugates::build_system;
use hermite_core::dirichlet::{answer_q1, answer_q2, answer_q3, DirichletOptions, Q3Answer};
use hermite_core::engines::{self, ApdOptions, Sin2Objective, Sin2Options};
use hermite_core::nfield::max_bits;
use hermite_core::{
    Algorithm, ConjugateSystem, Error, Expansion, FieldElement, MinimalPolynomial, RunLimits,
    Status,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use input::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hermite", version, about = "Exact multidimensional continued fractions and Dirichlet-group matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Stop after this many steps
    #[arg(long, global = true, default_value_t = 500)]
    pub max_steps: usize,

    /// Precision cap for certified comparisons, in bits
    #[arg(long, global = true, env = "HERMITE_MAX_BITS")]
    pub max_bits: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Regular continued fraction of a rational, a quadratic literal or a root of --poly
    Cf {
        /// `21/15`, `2*sqrt(5)`, `(1+sqrt(5))/2`
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        value: Option<String>,
        #[arg(long)]
        poly: Option<String>,
        /// Real embedding, counted among real roots in ascending order
        #[arg(long)]
        embedding: Option<usize>,
    },
    /// Jacobi-Perron algorithm
    Jp(SystemArgs),
    /// APD algorithm on a cubic system
    Apd {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        apd: ApdFlags,
    },
    /// sin² algorithm on a totally real cubic system
    Sin2 {
        #[command(flatten)]
        system: SystemArgs,
        /// Pick the smallest sin² instead of the largest
        #[arg(long)]
        minimize: bool,
    },
    /// APD algorithm in any dimension
    Mdapd {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        apd: ApdFlags,
    },
    /// A unimodular matrix commuting with --matrix
    Q1 {
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        algo: AlgoFlags,
    },
    /// A unimodular matrix with the system's vector as eigenvector
    Q2 {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        algo: AlgoFlags,
    },
    /// A commuting unimodular matrix that is not a power of --matrix
    Q3 {
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        algo: AlgoFlags,
    },
    /// Element frequencies: Monte Carlo over random reals, or of a given list
    Stats {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        elements: usize,
        #[arg(long, default_value_t = 512)]
        bits: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated elements to tabulate instead of sampling
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<BigInt>>,
        /// Largest element shown against the Gauss-Kuzmin law
        #[arg(long, default_value_t = 5)]
        kmax: u64,
    },
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    /// Minimal polynomial, e.g. `x^3+2x^2+x+4` or `[1,2,1,4]`
    #[arg(long)]
    pub poly: String,
    /// Basis polynomial in t; one value replaces the last power, d values give the full basis
    #[arg(long)]
    pub q: Vec<String>,
    /// Primary real embedding, counted among real roots in ascending order
    #[arg(long)]
    pub embedding: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ApdFlags {
    /// Take the all-zero element only at Step 1
    #[arg(long, conflicts_with = "repeat_exception")]
    pub strict: bool,
    /// Take the all-zero element whenever every floor vanishes (default)
    #[arg(long)]
    pub repeat_exception: bool,
}

impl ApdFlags {
    fn options(&self) -> ApdOptions {
        if self.strict {
            ApdOptions::strict()
        } else {
            ApdOptions::default()
        }
    }
}

#[derive(Args, Debug)]
pub struct AlgoFlags {
    /// Expansion algorithm; chosen from the field when absent
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgoChoice>,
    #[command(flatten)]
    pub apd: ApdFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoChoice {
    Jp,
    Apd,
    Mdapd,
    Sin2,
}

impl From<AlgoChoice> for Algorithm {
    fn from(a: AlgoChoice) -> Self {
        match a {
            AlgoChoice::Jp => Algorithm::JacobiPerron,
            AlgoChoice::Apd => Algorithm::Apd,
            AlgoChoice::Mdapd => Algorithm::MdApd,
            AlgoChoice::Sin2 => Algorithm::Sin2,
        }
    }
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn error(e: &Error) -> Self {
        let code = match e {
            Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_USAGE,
        };
        Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code }
    }
}

impl Cli {
    fn limits(&self) -> RunLimits {
        RunLimits {
            max_steps: self.max_steps,
            max_precision_bits: self.max_bits.unwrap_or_else(max_bits),
        }
    }
}

/// Parses `argv` (program name first) and runs it.
pub fn run_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_USAGE }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn dispatch(cli: &Cli) -> hermite_core::Result<Outcome> {
    let limits = cli.limits();
    limits.validate()?;
    match &cli.command {
        Command::Cf { value, poly, embedding } => {
            let e = match (value, poly) {
                (Some(v), _) => match input::parse_value(v)? {
                    Value::Rational(q) => {
                        // a literal `p/q` keeps its unreduced pair
                        let (n, d) = input::integer_pair(v).unwrap_or_else(|| (q.numer().clone(), q.denom().clone()));
                        engines::euclid_expand_rational(&BigRational::from_integer(n), &BigRational::from_integer(d), &limits)?
                    }
                    Value::Quadratic { field, embedding } => euclid_generator(&field, embedding, &limits)?,
                },
                (None, Some(p)) => {
                    let field = MinimalPolynomial::parse(p)?;
                    let emb = input::real_embedding(&field, *embedding)?;
                    euclid_generator(&field, emb, &limits)?
                }
                (None, None) => return Err(Error::Parse("give --value or --poly".into())),
            };
            Ok(expansion_outcome(&e, cli.format))
        }
        Command::Jp(s) => {
            let sys = system(s)?;
            Ok(expansion_outcome(&engines::jacobi_perron_expand(&sys, &limits)?, cli.format))
        }
        Command::Apd { system: s, apd } => {
            let e = engines::apd_expand(&system(s)?, &apd.options(), &limits)?;
            Ok(expansion_outcome(&e, cli.format))
        }
        Command::Mdapd { system: s, apd } => {
            let e = engines::md_apd_expand(&system(s)?, &apd.options(), &limits)?;
            Ok(expansion_outcome(&e, cli.format))
        }
        Command::Sin2 { system: s, minimize } => {
            let opts = Sin2Options {
                objective: if *minimize { Sin2Objective::Minimize } else { Sin2Objective::Maximize },
                ..Default::default()
            };
            Ok(expansion_outcome(&engines::sin2_expand(&system(s)?, &opts, &limits)?, cli.format))
        }
        Command::Q1 { matrix, algo } => {
            let a = input::parse_matrix(matrix)?;
            let ans = answer_q1(&a, &dirichlet_options(algo, limits))?;
            Ok(Outcome::ok(match cli.format {
                Format::Table => render::matrix_answer(&ans),
                Format::Json => to_json(&ans),
            }))
        }
        Command::Q2 { system: s, algo } => {
            let p = MinimalPolynomial::parse(&s.poly)?;
            let basis = input::parse_basis(p.degree(), &s.q)?;
            let emb = input::real_embedding(&p, s.embedding)?;
            let ans = answer_q2(&p, basis, emb, &dirichlet_options(algo, limits))?;
            Ok(Outcome::ok(match cli.format {
                Format::Table => render::matrix_answer(&ans),
                Format::Json => to_json(&ans),
            }))
        }
        Command::Q3 { matrix, algo } => {
            let a = input::parse_matrix(matrix)?;
            let q = answer_q3(&a, &dirichlet_options(algo, limits))?;
            Ok(Outcome::ok(match cli.format {
                Format::Table => render::q3_answer(&q),
                Format::Json => q3_json(&q),
            }))
        }
        Command::Stats { samples, elements, bits, seed, values, kmax } => {
            let expected: Vec<(u64, f64)> = (1..=*kmax)
                .map(|k| engines::gauss_kuzmin_expected(k, 64).map(|g| (k, g.to_f64())))
                .collect::<hermite_core::Result<_>>()?;
            match values {
                Some(xs) => {
                    let f = engines::frequencies(xs)?;
                    Ok(Outcome::ok(match cli.format {
                        Format::Table => render::frequencies(&f, xs.len(), &expected),
                        Format::Json => to_json(&json!({
                            "count": xs.len(),
                            "frequencies": f.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<std::collections::BTreeMap<_, _>>(),
                            "expected": expected,
                        })),
                    }))
                }
                None => {
                    let r = engines::monte_carlo_frequencies(*samples, *elements, *bits, *seed)?;
                    Ok(Outcome::ok(match cli.format {
                        Format::Table => render::stats(&r, &expected),
                        Format::Json => to_json(&json!({ "report": r, "expected": expected })),
                    }))
                }
            }
        }
    }
}

fn euclid_generator(
    field: &MinimalPolynomial,
    e: hermite_core::EmbeddingIndex,
    limits: &RunLimits,
) -> hermite_core::Result<Expansion> {
    engines::euclid_expand(&FieldElement::generator(field), &FieldElement::one(field), e, limits)
}

fn system(s: &SystemArgs) -> hermite_core::Result<ConjugateSystem> {
    let p = MinimalPolynomial::parse(&s.poly)?;
    let basis = input::parse_basis(p.degree(), &s.q)?;
    build_system(&p, basis, input::real_embedding(&p, s.embedding)?)
}

fn dirichlet_options(algo: &AlgoFlags, limits: RunLimits) -> DirichletOptions {
    DirichletOptions {
        limits,
        algorithm: algo.algorithm.map(Into::into),
        apd: algo.apd.options(),
        ..Default::default()
    }
}

fn expansion_outcome(e: &Expansion, format: Format) -> Outcome {
    let stdout = match format {
        Format::Table => render::expansion(e),
        Format::Json => to_json(e),
    };
    let code = if e.status == Status::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Outcome { stdout, stderr: String::new(), code }
}

fn q3_json(q: &Q3Answer) -> String {
    let builds: Vec<serde_json::Value> = q
        .builds
        .iter()
        .map(|(e, r)| match r {
            Ok(a) => json!({ "embedding": e.index, "answer": a }),
            Err(err) => json!({ "embedding": e.index, "error": err.to_string() }),
        })
        .collect();
    to_json(&json!({
        "matrix": q.matrix(),
        "chosen": q.chosen,
        "excluded": [q.excluded.0.index, q.excluded.1.index],
        "builds": builds,
    }))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}
