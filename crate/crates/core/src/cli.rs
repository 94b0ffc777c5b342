//! Command-line front end. `run` returns the exit code and never panics on
//! bad input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::darboux::DarbouxChain;
use crate::diffop::SecondOrderOp;
use crate::error::Error;
use crate::exact::rat::{self, int, Rat};
use crate::exact::Poly;
use crate::quadform::{gram_matrix, regularity_check, weight_of, write_weight_csv, QuadConfig};
use crate::spectral::{semisimplicity_check, trivial_monodromy_certificate, ExceptionalSystem, NumericConfig};
use crate::structure::{codimension_report, verify_natural, NaturalForm};
use crate::system::{construct, natural_subspace, naturalize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "xop", version, about = "Exceptional operators from rational Darboux chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Path to a JSON file, or the JSON itself.
    pub input: String,
    /// Largest polynomial degree considered.
    #[arg(long, default_value_t = 10)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 256)]
    pub precision_bits: u32,
    /// Frobenius series depth; default depends on the pole multiplicity.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Adds version and timestamp to JSON output.
    #[arg(long)]
    pub metadata: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Structure,
    Monodromy,
    Orthogonality,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a chain and report the exceptional system and its gap data.
    Construct(Common),
    /// Run verification suites on a system, operator or chain.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Coefficient table of the eigenpolynomials.
    Tabulate(Common),
    /// Gram matrix of the eigenpolynomials against the weight.
    Gram {
        #[command(flatten)]
        common: Common,
        /// Degrees to include; defaults to all computed up to --max-degree.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        /// Writes z,W(z) on the grid given by --grid.
        #[arg(long)]
        weight_curve: Option<PathBuf>,
        /// `lo:hi:count` with rational ends.
        #[arg(long, default_value = "0:4:41")]
        grid: String,
    },
    /// Construct followed by every verification suite.
    Report(Common),
}

/// Failure with its exit code.
#[derive(Debug)]
struct Fail {
    code: i32,
    msg: String,
}

impl Fail {
    fn input(m: impl Into<String>) -> Self {
        Fail { code: EXIT_INPUT, msg: m.into() }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Input(_)
            | Error::InvalidSeed(_)
            | Error::DependentSeeds(..)
            | Error::DegenerateSeed(_)
            | Error::ChainStep { .. }
            | Error::ZeroInput
            | Error::NoWeight(_)
            | Error::NotRegularSingular(_) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Fail { code, msg: e.to_string() }
    }
}

type Out = (i32, String);

/// Parses `args` (including the program name) and runs the command,
/// writing the primary output to `stdout` or `--out`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = if code == EXIT_PASS { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let common = match &cli.command {
        Command::Construct(c) | Command::Tabulate(c) | Command::Report(c) => c.clone(),
        Command::Verify { common, .. } | Command::Gram { common, .. } => common.clone(),
    };
    let result = dispatch(&cli.command);
    match result {
        Ok((code, text)) => {
            if let Some(path) = &common.out {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Out, Fail> {
    match cmd {
        Command::Construct(c) => {
            json_only(c)?;
            cmd_construct(c)
        }
        Command::Verify { common, suite } => {
            json_only(common)?;
            cmd_verify(common, *suite)
        }
        Command::Tabulate(c) => cmd_tabulate(c),
        Command::Gram { common, degrees, weight_curve, grid } => cmd_gram(common, degrees, weight_curve.as_ref(), grid),
        Command::Report(c) => {
            json_only(c)?;
            cmd_report(c)
        }
    }
}

fn json_only(c: &Common) -> Result<(), Fail> {
    if c.format != Format::Json {
        return Err(Fail::input("this command only writes JSON"));
    }
    Ok(())
}

fn read_input(src: &str) -> Result<Value, Fail> {
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| Fail::input(format!("cannot read {src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Fail::input(format!("invalid JSON: {e}")))
}

fn render(mut v: Value, c: &Common) -> String {
    if c.metadata {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        v["metadata"] = json!({ "version": env!("CARGO_PKG_VERSION"), "timestamp": secs });
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Operator plus natural data, from any accepted input shape.
struct Loaded {
    op: SecondOrderOp,
    eta: Poly,
    nf: Result<NaturalForm, String>,
    system: ExceptionalSystem,
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, Fail> {
    serde_json::from_value(v.clone()).map_err(|e| Fail::input(format!("invalid {what}: {e}")))
}

fn load(v: &Value, c: &Common) -> Result<Loaded, Fail> {
    let max_eta = c.max_degree.max(6);
    if v.get("base").is_some() {
        let chain: DarbouxChain = parse(v, "chain")?;
        let built = construct(&chain, c.max_degree, max_eta)?;
        return Ok(Loaded {
            op: built.natural.operator.clone(),
            eta: built.natural.nf.eta.clone(),
            nf: Ok(built.natural.nf),
            system: built.system,
        });
    }
    let body = v.get("system").unwrap_or(v);
    let (op, eta): (SecondOrderOp, Option<Poly>) = if let Some(o) = body.get("operator") {
        (parse(o, "operator")?, body.get("eta").map(|e| parse(e, "eta")).transpose()?)
    } else if body.get("p").is_some() {
        (parse(body, "operator")?, body.get("eta").map(|e| parse(e, "eta")).transpose()?)
    } else {
        return Err(Fail::input("expected a chain, a system or an operator"));
    };
    let (eta, nf) = match eta {
        Some(e) => {
            let nf = verify_natural(&op, &e).map_err(|e| e.to_string());
            (e, nf)
        }
        None => match naturalize(&op, c.max_degree.max(2 * max_eta + 2), max_eta) {
            // Bare operators are taken in the gauge given.
            Ok(n) if n.factor == crate::exact::RatFunc::one() && n.shift == rat::zero() => (n.nf.eta.clone(), Ok(n.nf)),
            Ok(n) => (n.nf.eta.clone(), Err(format!("operator is not natural; its natural gauge has eta = {}", n.nf.eta))),
            Err(e) => (Poly::one(), Err(e.to_string())),
        },
    };
    let system = ExceptionalSystem::build(&op, nf.clone().ok(), c.max_degree)?;
    Ok(Loaded { op, eta, nf, system })
}

fn cmd_construct(c: &Common) -> Result<Out, Fail> {
    let v = read_input(&c.input)?;
    let chain: DarbouxChain = parse(&v, "chain")?;
    let max_eta = c.max_degree.max(6);
    let built = construct(&chain, c.max_degree, max_eta)?;
    let (gaps, code) = match &built.gaps {
        Ok(g) => (to_value(g), EXIT_PASS),
        Err(e) => (json!({ "error": e.to_string() }), EXIT_INTERNAL),
    };
    let out = json!({
        "system": to_value(&built.system),
        "gaps": gaps,
        "gauge": {
            "sigma": to_value(&built.natural.sigma),
            "mu": to_value(&built.natural.mu),
            "factor": to_value(&built.natural.factor),
            "shift": rat::to_string(&built.natural.shift),
        },
        "chain": {
            "final_operator": to_value(built.chain.final_operator()),
            "intertwiner_order": built.chain.intertwiner.order(),
            "lambdas": built.chain.lambdas.iter().map(rat::to_string).collect::<Vec<_>>(),
            "weight_multiplier": to_value(&built.chain.weight_multiplier()),
        },
    });
    Ok((code, render(out, c)))
}

#[derive(Default)]
struct SuiteOutcome {
    pass: bool,
    warnings: Vec<String>,
}

fn structure_suite(l: &Loaded, c: &Common) -> (Value, SuiteOutcome) {
    let mut out = SuiteOutcome { pass: true, ..Default::default() };
    let mut report = serde_json::Map::new();
    let nf = match &l.nf {
        Ok(nf) => nf,
        Err(e) => {
            report.insert("natural".into(), json!({ "pass": false, "error": e }));
            report.insert("pass".into(), json!(false));
            out.pass = false;
            return (Value::Object(report), out);
        }
    };
    report.insert("natural".into(), json!({ "pass": true, "eta": to_value(&nf.eta), "s": to_value(&nf.s) }));
    let bad: Vec<usize> = l
        .system
        .eigenpairs
        .values()
        .filter(|e| l.op.apply_poly(&e.y) != crate::exact::RatFunc::from_poly(e.y.scale(&e.lambda)))
        .map(|e| e.k)
        .collect();
    out.pass &= bad.is_empty();
    report.insert("eigen_identities".into(), json!({ "pass": bad.is_empty(), "failed_degrees": bad }));
    let deg = nf.eta.degree().unwrap_or(0);
    let basis = natural_subspace(nf, c.max_degree.max(2 * deg + 2));
    match codimension_report(&nf.eta, &basis) {
        Ok(g) => {
            report.insert("gaps".into(), json!({ "pass": true, "report": to_value(&g) }));
        }
        Err(e) => {
            out.pass = false;
            report.insert("gaps".into(), json!({ "pass": false, "error": e.to_string() }));
        }
    }
    match semisimplicity_check(&l.op, &basis) {
        Ok(v) => {
            let m = l.system.exceptional_degrees.len();
            let count_ok = !v.semisimple || m == deg;
            out.pass &= v.semisimple && count_ok;
            report.insert(
                "semisimplicity".into(),
                json!({ "pass": v.semisimple && count_ok, "verdict": to_value(&v), "exceptional_count": m, "eta_degree": deg }),
            );
        }
        Err(e) => {
            out.pass = false;
            report.insert("semisimplicity".into(), json!({ "pass": false, "error": e.to_string() }));
        }
    }
    report.insert("pass".into(), json!(out.pass));
    (Value::Object(report), out)
}

fn monodromy_suite(l: &Loaded, c: &Common) -> (Value, SuiteOutcome) {
    let cfg = NumericConfig { precision_bits: c.precision_bits, ..Default::default() };
    let lambdas: Vec<Rat> = (0..5).map(int).collect();
    match trivial_monodromy_certificate(&l.op, &l.eta, c.depth, &lambdas, &cfg) {
        Ok(r) => {
            use crate::spectral::monodromy::Verdict;
            let v = r.verdict();
            let mut o = SuiteOutcome { pass: v != Verdict::Fail, ..Default::default() };
            if v == Verdict::Inconclusive {
                o.warnings.push("monodromy inconclusive at this precision; raise --precision-bits".into());
            }
            let mut val = to_value(&r);
            val["pass"] = json!(o.pass);
            (val, o)
        }
        Err(e) => (json!({ "pass": false, "error": e.to_string() }), SuiteOutcome::default()),
    }
}

fn orthogonality_suite(l: &Loaded, c: &Common) -> (Value, SuiteOutcome) {
    let fail = |m: String| (json!({ "pass": false, "error": m }), SuiteOutcome::default());
    let nf = match &l.nf {
        Ok(nf) => nf,
        Err(e) => return fail(e.clone()),
    };
    let w = match weight_of(&l.op, nf) {
        Ok(w) => w,
        Err(e) => return fail(e.to_string()),
    };
    let reg = regularity_check(&w);
    if !reg.regular {
        return (
            json!({ "pass": false, "weight": to_value(&w), "regularity": to_value(&reg) }),
            SuiteOutcome::default(),
        );
    }
    let degrees: Vec<usize> = l.system.eigenpairs.keys().copied().filter(|k| *k <= c.max_degree.min(8)).collect();
    let cfg = QuadConfig { precision_bits: c.precision_bits, ..Default::default() };
    match gram_matrix(&l.system, &w, &degrees, &cfg) {
        Ok(g) => {
            let pass = g.diagonal_positive() && g.max_offdiag < 1e-20;
            (
                json!({ "pass": pass, "weight": to_value(&w), "regularity": to_value(&reg), "gram": to_value(&g) }),
                SuiteOutcome { pass, ..Default::default() },
            )
        }
        Err(e) => fail(e.to_string()),
    }
}

fn verify_loaded(l: &Loaded, c: &Common, suite: Suite) -> (Value, i32) {
    let mut suites = BTreeMap::new();
    let mut pass = true;
    let mut warnings = vec![];
    let wanted = |s: Suite| suite == Suite::All || suite == s;
    type Runner = fn(&Loaded, &Common) -> (Value, SuiteOutcome);
    let runners: [(Suite, &str, Runner); 3] = [
        (Suite::Structure, "structure", structure_suite),
        (Suite::Monodromy, "monodromy", monodromy_suite),
        (Suite::Orthogonality, "orthogonality", orthogonality_suite),
    ];
    for (s, name, f) in runners {
        if wanted(s) {
            let (v, o) = f(l, c);
            pass &= o.pass;
            warnings.extend(o.warnings);
            suites.insert(name, v);
        }
    }
    let v = json!({ "pass": pass, "suites": suites, "warnings": warnings });
    (v, if pass { EXIT_PASS } else { EXIT_CHECK })
}

fn cmd_verify(c: &Common, suite: Suite) -> Result<Out, Fail> {
    let v = read_input(&c.input)?;
    let l = load(&v, c)?;
    let (out, code) = verify_loaded(&l, c, suite);
    Ok((code, render(out, c)))
}

fn cmd_report(c: &Common) -> Result<Out, Fail> {
    let (code_c, text) = cmd_construct(c)?;
    let constructed: Value = serde_json::from_str(&text).expect("own output");
    let l = load(&read_input(&c.input)?, c)?;
    let (verify, code_v) = verify_loaded(&l, c, Suite::All);
    let out = json!({ "construct": constructed, "verify": verify });
    Ok((code_c.max(code_v), render(out, &Common { metadata: c.metadata, ..c.clone() })))
}

fn cmd_tabulate(c: &Common) -> Result<Out, Fail> {
    let v = read_input(&c.input)?;
    let l = load(&v, c)?;
    let n = c.max_degree;
    match c.format {
        Format::Json => {
            let rows: BTreeMap<String, Value> = l
                .system
                .eigenpairs
                .values()
                .filter(|e| e.k <= n)
                .map(|e| (e.k.to_string(), json!({ "lambda": rat::to_string(&e.lambda), "coeffs": to_value(&e.y) })))
                .collect();
            Ok((EXIT_PASS, render(json!({ "eigenpolys": rows }), c)))
        }
        Format::Csv => {
            let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
            let mut header = vec!["k".to_string(), "lambda".to_string()];
            header.extend((0..=n).map(|i| format!("c{i}")));
            wr.write_record(&header).map_err(|e| Fail::input(e.to_string()))?;
            for e in l.system.eigenpairs.values().filter(|e| e.k <= n) {
                let mut row = vec![e.k.to_string(), rat::to_string(&e.lambda)];
                row.extend((0..=n).map(|i| rat::to_string(&e.y.coeff(i))));
                wr.write_record(&row).map_err(|e| Fail::input(e.to_string()))?;
            }
            let bytes = wr.into_inner().map_err(|e| Fail::input(e.to_string()))?;
            Ok((EXIT_PASS, String::from_utf8(bytes).expect("utf-8")))
        }
    }
}

fn parse_grid(g: &str) -> Result<Vec<Rat>, Fail> {
    let parts: Vec<&str> = g.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(Fail::input("grid must be lo:hi:count"));
    };
    let lo = rat::parse(lo).map_err(Fail::from)?;
    let hi = rat::parse(hi).map_err(Fail::from)?;
    let n: usize = n.parse().map_err(|_| Fail::input("grid count must be an integer"))?;
    if n < 2 || lo >= hi {
        return Err(Fail::input("grid needs lo < hi and count >= 2"));
    }
    let step = (&hi - &lo) / int(n as i64 - 1);
    Ok((0..n).map(|i| &lo + &step * int(i as i64)).collect())
}

fn cmd_gram(c: &Common, degrees: &[usize], curve: Option<&PathBuf>, grid: &str) -> Result<Out, Fail> {
    let grid = parse_grid(grid)?;
    let v = read_input(&c.input)?;
    let l = load(&v, c)?;
    let nf = l.nf.as_ref().map_err(|e| Fail::input(e.clone()))?;
    let w = weight_of(&l.op, nf)?;
    let reg = regularity_check(&w);
    if !reg.regular {
        let out = json!({ "pass": false, "regularity": to_value(&reg) });
        return Ok((EXIT_CHECK, render(out, c)));
    }
    if let Some(path) = curve {
        let f = std::fs::File::create(path).map_err(|e| Fail::input(format!("cannot write {}: {e}", path.display())))?;
        write_weight_csv(&w, &grid, c.precision_bits, f)?;
    }
    let degrees: Vec<usize> = if degrees.is_empty() {
        l.system.eigenpairs.keys().copied().filter(|k| *k <= c.max_degree).collect()
    } else {
        degrees.to_vec()
    };
    let cfg = QuadConfig { precision_bits: c.precision_bits, ..Default::default() };
    let g = gram_matrix(&l.system, &w, &degrees, &cfg)?;
    let code = if g.diagonal_positive() { EXIT_PASS } else { EXIT_CHECK };
    match c.format {
        Format::Json => Ok((code, render(to_value(&g), c))),
        Format::Csv => {
            let mut s = String::from("i,j,value\n");
            for (a, di) in g.degrees.iter().enumerate() {
                for (b, dj) in g.degrees.iter().enumerate() {
                    let _ = writeln!(s, "{di},{dj},{}", crate::quadform::decimal(&g.matrix[a][b]));
                }
            }
            Ok((code, s))
        }
    }
}
