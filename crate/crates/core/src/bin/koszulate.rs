use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use koszulate::engine::{
    is_isotropic, is_separable, multiplicity_lower_bound_check, resonance_points_count, resonance_report, wq_report,
    wq_report_presentation, Subspace2, WqReport,
};
use koszulate::error::{Error, Result};
use koszulate::families::FamilySpec;
use koszulate::field::{FieldConfig, DEFAULT_PRIME};
use koszulate::formulas::{
    canonical_pencil_class, chow_degree, degree_identity, h1_sym_dim, koszul_divisor_degree, mukai_pairing,
    resonance_class, sym_mukai, voisin_class, voisin_class_derived, FormalClass, MukaiVector, C1E, C1F, PHI,
};
use koszulate::kfile::{num_list, read_covectors, read_subspace, write_atomic, write_subspace, Report};
use koszulate::verify::{mutated_delta, Level, Suite};

const EXIT_VERIFY_FAILED: u8 = 3;

/// Exact graded pieces of Koszul modules, resonance and enumerative formulas.
#[derive(Parser)]
#[command(name = "koszulate", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Subspace file of K.
    #[arg(long)]
    input: PathBuf,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Complex,
    Presentation,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Random,
    CodimOne,
    Weyman,
    GaussianRnc,
    SplitP1,
    ResonantPerturbation,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// dim W_q(V, K).
    Wq {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        q: usize,
        /// Recompute the rank of the multiplication map.
        #[arg(long)]
        paranoid: bool,
        #[arg(long, value_enum, default_value = "complex")]
        route: RouteArg,
    },
    /// dim W_0 … dim W_qmax.
    Hilbert {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        qmax: usize,
    },
    /// Decide whether the resonance of K is trivial.
    Resonance {
        #[command(flatten)]
        io: Input,
    },
    /// Count resonant points of P(V^∨) over F_p.
    Points {
        #[command(flatten)]
        io: Input,
        /// Prime to reduce a rational K modulo (a number or "auto").
        #[arg(long)]
        prime: Option<String>,
    },
    /// Isotropy and separability of a subspace of V^∨.
    Isotropy {
        #[command(flatten)]
        io: Input,
        /// Subspace file of V^∨ (rows of length n).
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Write the subspace file of a named family.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Prime field (a number or "auto"); rational when absent.
        #[arg(long)]
        prime: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degrees of the Koszul and Chow-form divisors.
    Degrees {
        #[arg(long)]
        n: usize,
    },
    /// Divisor classes as symbol → coefficient maps.
    Classes {
        #[command(subcommand)]
        kind: ClassKind,
    },
    /// Mukai vectors on a K3 surface.
    Mukai {
        #[command(subcommand)]
        kind: MukaiKind,
    },
    /// Run the self-verification suite; exit 3 on failure.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        mutate_delta: bool,
    },
}

#[derive(Subcommand)]
enum ClassKind {
    /// Class of the resonance divisor in terms of c1E and c1F.
    ResonanceDivisor {
        #[arg(long)]
        e: usize,
    },
    /// Canonical-pencil class in terms of lambda and psi_sum.
    CanonicalPencil {
        #[arg(long)]
        g: usize,
    },
    /// Curve class in terms of hhat, with its derivation from the resonance class.
    Voisin {
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum MukaiKind {
    /// v·w for v = (r1, c1 L, s1), w = (r2, c2 L, s2).
    Pair {
        #[arg(long, allow_hyphen_values = true)]
        r1: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        s1: i64,
        #[arg(long, allow_hyphen_values = true)]
        r2: i64,
        #[arg(long, allow_hyphen_values = true)]
        c2: i64,
        #[arg(long, allow_hyphen_values = true)]
        s2: i64,
        #[arg(long)]
        g: i64,
    },
    /// v(Sym^b E) for v(E) = (r, L, s).
    Sym {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        spherical: bool,
    },
    /// h^1(Sym^b E) for v(E) = (r, L, 2) in genus 2r.
    H1 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        b: usize,
    },
}

fn parse_prime(text: &str) -> Result<FieldConfig> {
    if text == "auto" {
        return FieldConfig::prime(DEFAULT_PRIME);
    }
    let p: u64 = text
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("--prime expects a number or \"auto\", got {text:?}")))?;
    FieldConfig::prime(p)
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.ok_or_else(|| Error::InvalidParameter(format!("family {family} needs --{flag}")))
}

fn class_value(class: &FormalClass) -> Value {
    json!(class.to_strings())
}

fn wq_value(r: &WqReport) -> Value {
    json!({
        "q": r.q.to_string(),
        "dim": r.dim.to_string(),
        "rank": r.rank.to_string(),
        "multiplication_rank": r.multiplication_rank.map(|x| x.to_string()),
        "route": r.route,
    })
}

fn mukai_value(v: &MukaiVector) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn subspace_report(command: &str, io: &Input) -> Result<(Report, Subspace2)> {
    let k = read_subspace(&io.input)?;
    let report = Report::new(command)
        .input("input", io.input.display())
        .input("n", k.n())
        .input("m", k.dim())
        .with_field(k.field());
    Ok((report, k))
}

/// Runs a command; the second value is the exit status on success.
fn execute(command: Command) -> Result<(Report, Option<PathBuf>, u8)> {
    let mut status = 0;
    let (report, out) = match command {
        Command::Wq { io, q, paranoid, route } => {
            let (mut r, k) = subspace_report("wq", &io)?;
            r = r.input("q", q);
            let reports: Vec<WqReport> = match route {
                RouteArg::Complex => vec![wq_report(&k, q, paranoid)],
                RouteArg::Presentation => vec![wq_report_presentation(&k, q)],
                RouteArg::Both => vec![wq_report(&k, q, paranoid), wq_report_presentation(&k, q)],
            };
            if let [a, b] = reports.as_slice() {
                if a.dim != b.dim {
                    return Err(Error::Malformed(format!("routes disagree: {} vs {}", a.dim, b.dim)));
                }
            }
            r.set_num("dim", reports[0].dim);
            r.set("routes", Value::Array(reports.iter().map(wq_value).collect()));
            (r, io.out)
        }
        Command::Hilbert { io, qmax } => {
            let (mut r, k) = subspace_report("hilbert", &io)?;
            r = r.input("qmax", qmax);
            r.set("dims", num_list(&koszulate::engine::hilbert_prefix(&k, qmax)));
            (r, io.out)
        }
        Command::Resonance { io } => {
            let (mut r, k) = subspace_report("resonance", &io)?;
            let res = resonance_report(&k);
            let mult = multiplicity_lower_bound_check(&k);
            r.set_bool("trivial", res.trivial);
            r.set_num("q", res.q);
            r.set_num("dim", res.dim);
            r.set_num("threshold", res.q);
            r.set_bool("multiplicity_bound_holds", mult.passes);
            (r, io.out)
        }
        Command::Points { io, prime } => {
            let (mut r, k) = subspace_report("points", &io)?;
            let k = match (prime.as_deref().map(parse_prime).transpose()?, k.field()) {
                (None, FieldConfig::Rational) => {
                    return Err(Error::InvalidParameter("a rational K needs --prime".into()))
                }
                (None, _) => k,
                (Some(f), field) if f == field => k,
                (Some(FieldConfig::Prime(p)), FieldConfig::Rational) => k.reduce_mod(p)?,
                (Some(f), field) => {
                    return Err(Error::FieldMismatch(format!("K is over {field}, --prime asks for {f}")))
                }
            };
            r = r.with_field(k.field());
            r.set_num("points", resonance_points_count(&k)?);
            (r, io.out)
        }
        Command::Isotropy { io, subspace } => {
            let (mut r, k) = subspace_report("isotropy", &io)?;
            r = r.input("subspace", subspace.display());
            let vbar = read_covectors(&subspace)?;
            let iso = is_isotropic(&k, &vbar)?;
            let sep = is_separable(&k, &vbar)?;
            r.set_bool("isotropic", iso);
            r.set_bool("separable", sep);
            r.set_bool("strongly_isotropic", iso && sep);
            (r, io.out)
        }
        Command::Family { name, n, m, a, b, seed, prime, out } => {
            let field = match prime {
                Some(p) => parse_prime(&p)?,
                None => FieldConfig::Rational,
            };
            let spec = match name {
                FamilyName::Random => {
                    FamilySpec::Random { n: need(n, "n", "random")?, m: need(m, "m", "random")?, seed }
                }
                FamilyName::CodimOne => FamilySpec::CodimOne { n: need(n, "n", "codim-one")? },
                FamilyName::Weyman => FamilySpec::Weyman { n: need(n, "n", "weyman")? },
                FamilyName::GaussianRnc => FamilySpec::GaussianRnc { n: need(n, "n", "gaussian-rnc")? },
                FamilyName::SplitP1 => {
                    FamilySpec::SplitP1 { a: need(a, "a", "split-p1")?, b: need(b, "b", "split-p1")? }
                }
                FamilyName::ResonantPerturbation => {
                    FamilySpec::ResonantPerturbation { n: need(n, "n", "resonant-perturbation")?, seed }
                }
            };
            let k = spec.build(field)?;
            write_subspace(&out, &k)?;
            let mut r = Report::new("family").input("family", spec.name()).input("out", out.display());
            if let Value::Object(params) = serde_json::to_value(&spec).expect("plain data serializes") {
                for (key, v) in params.into_iter().filter(|(key, _)| key != "family") {
                    r = r.input(&key, v.to_string());
                }
            }
            r = r.with_field(field);
            r.set_num("n", k.n());
            r.set_num("m", k.dim());
            (r, None)
        }
        Command::Degrees { n } => {
            let mut r = Report::new("degrees").input("n", n);
            r.set_num("koszul", koszul_divisor_degree(n)?);
            r.set_num("chow", chow_degree(n)?);
            r.set_bool("identity", degree_identity(n)?);
            (r, None)
        }
        Command::Classes { kind } => {
            let mut r;
            match kind {
                ClassKind::ResonanceDivisor { e } => {
                    r = Report::new("classes").input("kind", "resonance-divisor").input("e", e);
                    let c = resonance_class(e, &FormalClass::symbol(C1E), &FormalClass::symbol(C1F))?;
                    r.set("class", class_value(&c));
                }
                ClassKind::CanonicalPencil { g } => {
                    r = Report::new("classes").input("kind", "canonical-pencil").input("g", g);
                    r.set("class", class_value(&canonical_pencil_class(g)?));
                }
                ClassKind::Voisin { r: rr } => {
                    r = Report::new("classes").input("kind", "voisin").input("r", rr);
                    let stated = voisin_class(rr)?;
                    let derived = voisin_class_derived(rr)?;
                    r.set("class", class_value(&stated));
                    r.set("derived", class_value(&derived));
                    r.set_bool("agrees", stated == derived && num_traits::Zero::is_zero(&derived.coefficient(PHI)));
                }
            }
            (r, None)
        }
        Command::Mukai { kind } => {
            let mut r;
            match kind {
                MukaiKind::Pair { r1, c1, s1, r2, c2, s2, g } => {
                    r = Report::new("mukai").input("kind", "pair").input("g", g);
                    let (v, w) = (MukaiVector::new(r1, c1, s1, g), MukaiVector::new(r2, c2, s2, g));
                    r = r.input("v", &v).input("w", &w);
                    r.set_num("pairing", koszulate::field::format_rational(&mukai_pairing(&v, &w)?));
                }
                MukaiKind::Sym { r: rank, s, g, b, spherical } => {
                    r = Report::new("mukai")
                        .input("kind", "sym")
                        .input("r", rank)
                        .input("s", s)
                        .input("g", g)
                        .input("b", b)
                        .input("spherical", spherical);
                    let v = sym_mukai(rank, s, g, b, spherical)?;
                    r.set("vector", mukai_value(&v));
                    r.set_num("text", &v);
                }
                MukaiKind::H1 { r: rank, b } => {
                    r = Report::new("mukai").input("kind", "h1").input("r", rank).input("b", b);
                    r.set_num("h1", h1_sym_dim(rank, b)?);
                }
            }
            (r, None)
        }
        Command::Verify { level, out, mutate_delta } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let suite = if mutate_delta { Suite::with_delta(level, mutated_delta) } else { Suite::new(level) };
            let mut r =
                Report::new("verify").input("level", serde_json::to_value(level).expect("enum").as_str().unwrap_or(""));
            let outcomes = suite.run_all();
            let failures: Vec<Value> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| json!({"id": o.id.to_string(), "title": o.title, "detail": o.detail}))
                .collect();
            r.set(
                "criteria",
                Value::Array(
                    outcomes
                        .iter()
                        .map(|o| {
                            json!({"id": o.id.to_string(), "title": o.title, "passed": o.passed,
                                   "detail": o.detail, "elapsed_ms": o.elapsed_ms})
                        })
                        .collect(),
                ),
            );
            r.set_bool("passed", failures.is_empty());
            if !failures.is_empty() {
                status = EXIT_VERIFY_FAILED;
            }
            r.set("failures", Value::Array(failures));
            (r, out)
        }
    };
    Ok((report, out, status))
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(render_value).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => {
            format!("{{{}}}", m.iter().map(|(k, v)| format!("{k}: {}", render_value(v))).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn render_text(report: &Report) -> String {
    let mut lines = Vec::new();
    if report.command == "verify" {
        if let Some(Value::Array(criteria)) = report.results.get("criteria") {
            for c in criteria {
                let get = |k: &str| c.get(k).map(render_value).unwrap_or_default();
                let passed = c.get("passed").and_then(Value::as_bool).unwrap_or(false);
                let mut line = format!(
                    "criterion {:>2} {}: {} ({} ms)",
                    get("id"),
                    if passed { "PASS" } else { "FAIL" },
                    get("title"),
                    get("elapsed_ms")
                );
                if !passed {
                    line.push_str(&format!(" - {}", get("detail")));
                }
                lines.push(line);
            }
        }
        let passed = report.results.get("passed").and_then(Value::as_bool).unwrap_or(false);
        lines.push(if passed { "all criteria passed".into() } else { "verification failed".into() });
        return lines.join("\n");
    }
    if let Some(f) = &report.field {
        lines.push(format!("field: {f}"));
    }
    for (k, v) in &report.results {
        lines.push(format!("{k}: {}", render_value(v)));
    }
    lines.join("\n")
}

fn emit(report: &Report, out: Option<&Path>, as_json: bool) -> Result<()> {
    let text = report.to_json();
    if let Some(path) = out {
        write_atomic(path, &text)?;
    }
    if as_json {
        println!("{text}");
    } else {
        println!("{}", render_text(report));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match execute(cli.command) {
        Ok((mut report, out, status)) => {
            report.elapsed_ms = start.elapsed().as_millis().to_string();
            if let Err(e) = emit(&report, out.as_deref(), cli.json) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
