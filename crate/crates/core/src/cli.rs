//! The `tropfan` command line: argument parsing, dispatch and report
//! rendering. Exit status 0 means every asserted check passed, 1 that a
//! mathematical verdict failed, 2 an input or usage error.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chow::{chow_pd_check, fy_crosscheck};
use crate::deligne::{deligne_sequence, DeligneMode, Verdict};
use crate::error::{Error, Result};
use crate::fan::{product, Fan};
use crate::homology::{
    homology_table, pd_check, smooth_check, verify_tm_coefficients, verify_tm_homology, HomologyTable,
    SmoothCriterion, Space, Theory,
};
use crate::io::{from_fan, parse, LoadedFan};
use crate::weights::{check_balancing, divisor, tropical_modification, PLFunction};
use crate::zoo;

#[derive(Parser, Debug)]
#[command(name = "tropfan", version, about = "Exact tropical homology of rational fans")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Fan file (JSON); `-` reads standard input.
    pub file: Option<PathBuf>,
    /// Use a built-in example instead of a file.
    #[arg(long, short = 'e')]
    pub example: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    /// Function values on the rays, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub function: Option<String>,
    /// A linear function, comma separated coordinates.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "function")]
    pub linear: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Ordinary,
    Bm,
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Local,
    Aksnes,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Euler,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a fan and print its canonical form.
    Validate(Input),
    /// Summary of a fan: dimensions, f-vector, rays, weights.
    Info(Input),
    /// Check the balancing condition.
    Balancing(Input),
    /// The star fan of a cone.
    Star {
        #[command(flatten)]
        input: Input,
        /// Ray ids of the cone, comma separated (empty for the zero cone).
        #[arg(long, default_value = "")]
        cone: String,
    },
    /// The product of two fans.
    Product {
        #[command(flatten)]
        input: Input,
        /// Second factor as a file.
        #[arg(long)]
        with: Option<PathBuf>,
        /// Second factor as a built-in example.
        #[arg(long)]
        with_example: Option<String>,
    },
    /// The divisor of a conewise linear function.
    Divisor {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        function: FunctionArgs,
    },
    /// The tropical modification along a conewise linear function.
    Modify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        function: FunctionArgs,
    },
    /// Tropical (co)homology dimensions.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = TheoryArg::Bm)]
        theory: TheoryArg,
        /// `fan`, `compactification` or `open:ID,ID,…` (sedentarity cone ids).
        #[arg(long, default_value = "fan")]
        space: String,
        /// `all` or a single coefficient degree.
        #[arg(long, default_value = "all")]
        p: String,
    },
    /// Poincaré duality check.
    Pd(Input),
    /// Homological smoothness check.
    Smooth {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = CriterionArg::Both)]
        criterion: CriterionArg,
    },
    /// Chow ring dimensions and Poincaré duality of the pairing.
    Chow(Input),
    /// Chow ring against the diagonal of the cohomology of the compactification.
    Fy(Input),
    /// The tropical Deligne sequence.
    Deligne {
        #[command(flatten)]
        input: Input,
        /// `all` or a single degree.
        #[arg(long, default_value = "all")]
        p: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
    },
    /// Coefficient and homology checks for a tropical modification.
    VerifyTm {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        function: FunctionArgs,
    },
    /// List the built-in examples, or print one as a fan file.
    Examples {
        name: Option<String>,
    },
}

/// Rendered output of a command.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Report {
    fn new<T: Serialize>(data: &T, text: String, ok: bool) -> Report {
        Report {
            json: serde_json::to_value(data).expect("reports serialize"),
            text,
            ok,
        }
    }
}

fn load(input: &Input) -> Result<LoadedFan> {
    match (&input.file, &input.example) {
        (Some(_), Some(_)) => Err(Error::Parse("give either a file or --example, not both".into())),
        (None, Some(name)) => zoo::example(name)?.load(),
        (Some(path), None) => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
            };
            parse(&text)?.load()
        }
        (None, None) => Err(Error::Parse("no input: give a fan file or --example NAME".into())),
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("not an integer: {t:?}"))))
        .collect()
}

fn parse_ids(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("not an index: {t:?}"))))
        .collect()
}

fn function_of(l: &LoadedFan, args: &FunctionArgs) -> Result<PLFunction> {
    if let Some(v) = &args.function {
        return PLFunction::from_ray_values(&l.fan, &parse_ints(v)?);
    }
    if let Some(v) = &args.linear {
        let lin = parse_ints(v)?;
        if lin.len() != l.fan.ambient_rank() {
            return Err(Error::DimensionMismatch {
                expected: l.fan.ambient_rank(),
                found: lin.len(),
            });
        }
        return Ok(PLFunction::linear(&l.fan, &lin));
    }
    l.function
        .clone()
        .ok_or_else(|| Error::InvalidFunction("no function: use --function, --linear or a file function".into()))
}

fn parse_space(s: &str) -> Result<Space> {
    match s {
        "fan" => Ok(Space::Fan),
        "compactification" => Ok(Space::Compactification),
        _ => match s.strip_prefix("open:") {
            Some(ids) => Ok(Space::Open(parse_ids(ids)?)),
            None => Err(Error::Parse(format!("unknown space {s:?}"))),
        },
    }
}

fn parse_degree(s: &str, d: usize) -> Result<Vec<usize>> {
    if s == "all" {
        return Ok((0..=d).collect());
    }
    let p: usize = s.parse().map_err(|_| Error::Parse(format!("bad degree {s:?}")))?;
    if p > d {
        return Err(Error::DegreeMismatch(format!("p = {p} exceeds the fan dimension {d}")));
    }
    Ok(vec![p])
}

fn cone_list(fan: &Fan) -> Vec<Vec<usize>> {
    fan.cones()[1..].iter().map(|c| c.rays.clone()).collect()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn table_text(title: &str, t: &HomologyTable, rows: &[usize]) -> String {
    let full = t.to_string();
    let mut lines = full.lines();
    let mut out = format!("{title}\n{}\n", lines.next().unwrap_or_default());
    for (p, l) in lines.enumerate() {
        if rows.contains(&p) {
            out.push_str(l);
            out.push('\n');
        }
    }
    out
}

fn theory_title(theory: Theory, space: &Space) -> String {
    let sp = match space {
        Space::Fan => "fan".to_string(),
        Space::Compactification => "compactification".to_string(),
        Space::Open(s) => format!("open sedentarities {s:?}"),
    };
    let th = match theory {
        Theory::Ordinary => "H^{p,q}",
        Theory::BorelMoore => "H^BM_{p,q}",
        Theory::Compact => "H_c^{p,q}",
    };
    format!("{th} of the {sp}")
}

pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate(input) => {
            let l = load(input)?;
            let file = from_fan(&l.fan, &l.weights);
            let text = format!(
                "valid fan: ambient rank {}, dimension {}, f-vector {:?}\n",
                l.fan.ambient_rank(),
                l.fan.dim(),
                l.fan.f_vector()
            ) + &l.fan.warnings().iter().map(|w| format!("warning: {w}\n")).collect::<String>();
            Ok(Report::new(&json!({"valid": true, "fan": file, "warnings": l.fan.warnings()}), text, true))
        }
        Command::Info(input) => {
            let l = load(input)?;
            let f = &l.fan;
            let balanced = check_balancing(f, &l.weights)?.is_balanced();
            let weights: Vec<(Vec<usize>, i64)> =
                f.facets().iter().map(|&s| (f.cone(s).rays.clone(), l.weights.get(s))).collect();
            let data = json!({
                "ambient_rank": f.ambient_rank(),
                "dim": f.dim(),
                "f_vector": f.f_vector(),
                "pure": f.is_pure(),
                "simplicial": f.is_simplicial(),
                "unimodular": f.is_unimodular(),
                "balanced": balanced,
                "product": f.product_data().is_some(),
                "rays": f.rays(),
                "cones": cone_list(f),
                "weights": weights,
            });
            let mut text = String::new();
            let _ = writeln!(text, "ambient rank  {}", f.ambient_rank());
            let _ = writeln!(text, "dimension     {}", f.dim());
            let _ = writeln!(text, "f-vector      {:?}", f.f_vector());
            let _ = writeln!(text, "pure {}  simplicial {}  unimodular {}  balanced {}", f.is_pure(), f.is_simplicial(), f.is_unimodular(), balanced);
            for (i, r) in f.rays().iter().enumerate() {
                let _ = writeln!(text, "ray {i:>3}  {r:?}");
            }
            for (c, w) in &weights {
                let _ = writeln!(text, "facet {c:?}  weight {w}");
            }
            Ok(Report::new(&data, text, true))
        }
        Command::Balancing(input) => {
            let l = load(input)?;
            let r = check_balancing(&l.fan, &l.weights)?;
            let mut text = format!("balancing: {}\n", verdict(r.is_balanced()));
            for v in &r.violations {
                let _ = writeln!(text, "  unbalanced at cone {:?}: sum {:?}", l.fan.cone(v.cone).rays, v.sum);
            }
            let data = json!({
                "balanced": r.is_balanced(),
                "violations": r.violations.iter().map(|v| json!({"cone": l.fan.cone(v.cone).rays, "sum": v.sum})).collect::<Vec<_>>(),
            });
            Ok(Report::new(&data, text, r.is_balanced()))
        }
        Command::Star { input, cone } => {
            let l = load(input)?;
            let mut rays = parse_ids(cone)?;
            rays.sort_unstable();
            let id = l.fan.cone_id(&rays).ok_or_else(|| Error::NotACone(format!("{rays:?}")))?;
            let s = l.fan.star_fan(id)?;
            let file = from_fan(&s.star, &s.star.orientation());
            Ok(Report::new(&file, file.to_json(), true))
        }
        Command::Product {
            input,
            with,
            with_example,
        } => {
            let a = load(input)?;
            let b = load(&Input {
                file: with.clone(),
                example: with_example.clone(),
            })?;
            let p = product(&a.fan, &b.fan)?;
            let file = from_fan(&p, &p.orientation());
            Ok(Report::new(&file, file.to_json(), true))
        }
        Command::Divisor { input, function } => {
            let l = load(input)?;
            let f = function_of(&l, function)?;
            let d = divisor(&l.fan, &l.weights, &f)?;
            let cones: Vec<Vec<usize>> = d.cones.iter().filter(|&&c| c > 0).map(|&c| l.fan.cone(c).rays.clone()).collect();
            let orders: Vec<(Vec<usize>, i64)> =
                d.orders.iter().map(|(&c, &o)| (l.fan.cone(c).rays.clone(), o)).collect();
            let sub = d.subfan.as_ref().map(|(s, _)| from_fan(s, &s.orientation()));
            let mut text = if d.is_empty() {
                "divisor: empty\n".to_string()
            } else {
                format!("divisor: {} cones\n", d.cones.len())
            };
            for (c, o) in &orders {
                let _ = writeln!(text, "  cone {c:?}  order {o}");
            }
            let data = json!({"empty": d.is_empty(), "cones": cones, "orders": orders, "fan": sub});
            Ok(Report::new(&data, text, true))
        }
        Command::Modify { input, function } => {
            let l = load(input)?;
            let f = function_of(&l, function)?;
            let m = tropical_modification(&l.fan, &l.weights, &f)?;
            let file = from_fan(&m.total, &m.total.orientation());
            Ok(Report::new(&file, file.to_json(), true))
        }
        Command::Homology {
            input,
            theory,
            space,
            p,
        } => {
            let l = load(input)?;
            let theory = match theory {
                TheoryArg::Ordinary => Theory::Ordinary,
                TheoryArg::Bm => Theory::BorelMoore,
                TheoryArg::Compact => Theory::Compact,
            };
            let space = parse_space(space)?;
            let rows = parse_degree(p, l.fan.dim())?;
            let t = homology_table(&l.fan, &space, theory)?;
            let text = table_text(&theory_title(theory, &space), &t, &rows);
            let grid: Vec<&Vec<usize>> = rows.iter().map(|&r| &t.grid[r]).collect();
            let data = json!({"theory": t.theory, "p": rows, "dims": grid});
            Ok(Report::new(&data, text, true))
        }
        Command::Pd(input) => {
            let l = load(input)?;
            let r = pd_check(&l.fan, &l.weights)?;
            let mut text = table_text("H^BM_{p,q} of the fan", &r.borel_moore, &(0..=r.dim).collect::<Vec<_>>());
            let _ = writeln!(text, "vanishing off q = d: {}", r.vanishing);
            for c in &r.caps {
                let _ = writeln!(
                    text,
                    "cap p = {}: F^p(0) dim {} -> H^BM_{{d-p,d}} dim {}, rank {}",
                    c.p, c.source_dim, c.target_dim, c.rank
                );
            }
            let _ = writeln!(text, "Poincaré duality: {}", verdict(r.holds));
            Ok(Report::new(&r, text, r.holds))
        }
        Command::Smooth { input, criterion } => {
            let l = load(input)?;
            let crits: Vec<SmoothCriterion> = match criterion {
                CriterionArg::Local => vec![SmoothCriterion::Local],
                CriterionArg::Aksnes => vec![SmoothCriterion::Aksnes],
                CriterionArg::Both => vec![SmoothCriterion::Local, SmoothCriterion::Aksnes],
            };
            let reports = crits
                .iter()
                .map(|&c| smooth_check(&l.fan, &l.weights, c))
                .collect::<Result<Vec<_>>>()?;
            let smooth = reports.iter().all(|r| r.smooth);
            let agree = reports.iter().all(|r| r.smooth == reports[0].smooth);
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(text, "{:?} criterion: {}", r.criterion, verdict(r.smooth));
                for s in r.stars.iter().filter(|s| s.pd == Some(false) || !s.vanishing || s.unique_relation == Some(false)) {
                    let _ = writeln!(text, "  fails at cone {:?}", l.fan.cone(s.cone).rays);
                }
            }
            if !agree {
                text.push_str("criteria disagree\n");
            }
            let _ = writeln!(text, "homologically smooth: {}", verdict(smooth));
            let data = json!({"smooth": smooth, "criteria_agree": agree, "reports": reports});
            Ok(Report::new(&data, text, smooth && agree))
        }
        Command::Chow(input) => {
            let l = load(input)?;
            let r = chow_pd_check(&l.fan, &l.weights)?;
            let mut text = format!("Chow ring dimensions: {:?}\n", r.dims);
            if r.unimodular {
                for p in &r.pairings {
                    let _ = writeln!(text, "pairing A^{} x A^{}: {}x{}, rank {}", p.k, r.dims.len() - 1 - p.k, p.rows, p.cols, p.rank);
                }
            } else {
                text.push_str("not unimodular: dimension symmetry only\n");
            }
            let _ = writeln!(text, "Poincaré duality: {}", verdict(r.passes));
            Ok(Report::new(&r, text, r.passes))
        }
        Command::Fy(input) => {
            let l = load(input)?;
            let r = fy_crosscheck(&l.fan)?;
            let text = format!(
                "Chow dims {:?}\nH^{{p,p}} of the compactification {:?}\nvanishing for p < q: {}\nvanishing for q = 0 < p: {}\ncross-check: {}\n",
                r.chow,
                r.diagonal,
                r.upper_vanishes,
                r.first_column_vanishes,
                verdict(r.passes)
            );
            Ok(Report::new(&r, text, r.passes))
        }
        Command::Deligne { input, p, mode } => {
            let l = load(input)?;
            let mode = match mode {
                ModeArg::Euler => DeligneMode::Euler,
                ModeArg::Full => DeligneMode::Full,
            };
            let ps = parse_degree(p, l.fan.dim())?;
            let reports = ps
                .iter()
                .map(|&p| deligne_sequence(&l.fan, &l.weights, p, mode))
                .collect::<Result<Vec<_>>>()?;
            let mut text = String::new();
            for r in &reports {
                let v = match r.verdict {
                    Verdict::Exact => "EXACT",
                    Verdict::NotExact => "NOT EXACT",
                    Verdict::Inconclusive => "INCONCLUSIVE",
                };
                let _ = writeln!(text, "p = {}: dims {:?}, χ = {}, {}", r.p, r.dims, r.euler, v);
                if let Some(f) = &r.full {
                    let marks: Vec<&str> = f.exact_at.iter().map(|&e| if e { "ok" } else { "X" }).collect();
                    let _ = writeln!(text, "  dual sequence {:?}", f.dual_dims);
                    let _ = writeln!(text, "  exactness     {marks:?}");
                }
            }
            let ok = reports.iter().all(|r| r.verdict != Verdict::NotExact);
            Ok(Report::new(&reports, text, ok))
        }
        Command::VerifyTm { input, function } => {
            let l = load(input)?;
            let f = function_of(&l, function)?;
            let c = verify_tm_coefficients(&l.fan, &l.weights, &f)?;
            let h = verify_tm_homology(&l.fan, &l.weights, &f)?;
            let mut text = String::new();
            let mut warnings: Vec<&String> = c.warnings.iter().chain(&h.warnings).collect();
            warnings.sort();
            warnings.dedup();
            for w in warnings {
                let _ = writeln!(text, "warning: {w}");
            }
            let _ = writeln!(text, "coefficients: {}", verdict(c.passed));
            for x in c.checks.iter().filter(|x| !x.ok()) {
                let _ = writeln!(text, "  {} over cone {:?}, p = {}: expected {}, found {}", x.kind, l.fan.cone(x.cone).rays, x.p, x.expected, x.found);
            }
            let _ = writeln!(text, "BM of modification = relative BM: {}", h.borel_moore.equal);
            let _ = writeln!(text, "H_c of modification = relative H_c: {}", h.compact.equal);
            let _ = writeln!(text, "mapping cone agrees: {}", h.mapping_cone_agrees);
            let _ = writeln!(text, "semi-open BM = BM of base: {}", h.semi_open.equal);
            let _ = writeln!(text, "compactifications agree: {}", h.compactification.equal);
            let _ = writeln!(text, "homology: {}", verdict(h.passed));
            let ok = c.passed && h.passed;
            Ok(Report::new(&json!({"coefficients": c, "homology": h}), text, ok))
        }
        Command::Examples { name } => match name {
            None => {
                let text = zoo::NAMES.iter().map(|n| format!("{n}\n")).collect();
                Ok(Report::new(&zoo::NAMES, text, true))
            }
            Some(n) => {
                let file = zoo::example(n)?.canonical()?;
                Ok(Report::new(&file, file.to_json(), true))
            }
        },
    }
}

/// Runs the command line with the given arguments, writing the report to
/// `out` and diagnostics to `err`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("json")),
                Format::Text => write!(out, "{}", r.text),
            };
            if r.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Applies `TROPFAN_THREADS` to the global worker pool.
pub fn configure_threads() {
    if let Some(n) = std::env::var("TROPFAN_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["tropfan"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["balancing", "--example", "lambda2"]).0, 0);
        assert_eq!(run_str(&["pd", "--example", "cross"]).0, 1);
        assert_eq!(run_str(&["pd", "--example", "nope"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
    }

    #[test]
    fn function_arguments() {
        let (code, out, _) = run_str(&["divisor", "--example", "lambda2", "--linear", "1,-2"]);
        assert_eq!(code, 0);
        assert!(out.contains("empty"));
        let (_, out, _) = run_str(&["divisor", "--example", "lambda2", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cones"].as_array().unwrap().len(), 4);
    }
}
