//! Command-line front end. The binary only forwards `argv` to [`run`].

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value as Json;

use crate::approximant::{
    audit_grid, build_approximant, check_defect_free, error_sweep, linear_grid, log_grid, scan_mu, standard_recipe,
    summarize, Approximant, Constraint, Precision, Recipe, SeriesBank,
};
use crate::asymptotics::asymptotic_series;
use crate::error::{Error, Result};
use crate::odesolve::ShootingConfig;
use crate::perturb::{exact_harmonic_series, numeric_series, SeriesData, SeriesPoint};
use crate::problem::ProblemFamily;
use crate::reproduce::{reproduce_table, table_ids, TableReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERDICT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mqra", version, about = "Quasi-rational approximants for x^a + lambda x^b eigenvalues")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expansion coefficients of one eigenvalue about one point.
    Expand(ExpandArgs),
    /// Solve the matching system and write an approximant.
    Build(BuildArgs),
    /// Compare an approximant with shooting eigenvalues on a grid.
    Sweep(SweepArgs),
    /// Build over a grid of mu values and keep the best defect-free one.
    ScanMu(ScanArgs),
    /// Recompute a reference table and compare it entry by entry.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    #[arg(long, default_value_t = 2)]
    a: u32,
    #[arg(long, default_value_t = 4)]
    b: u32,
    #[arg(long, default_value_t = 0)]
    level: usize,
}

impl FamilyArgs {
    fn family(&self) -> Result<ProblemFamily> {
        ProblemFamily::new(self.a, self.b)
    }
}

#[derive(Debug, Clone, Args)]
struct SolverArgs {
    /// Grid step.
    #[arg(long)]
    h: Option<f64>,
    /// Fixed box size instead of the automatic one.
    #[arg(long)]
    x_max: Option<f64>,
    /// Relative eigenvalue tolerance.
    #[arg(long)]
    tol_e: Option<f64>,
    /// Boundary-mismatch tolerance of chain functions.
    #[arg(long)]
    match_tol: Option<f64>,
}

impl SolverArgs {
    fn apply(&self, mut config: ShootingConfig) -> ShootingConfig {
        if let Some(h) = self.h {
            config.h = h;
        }
        if self.x_max.is_some() {
            config.x_max = self.x_max;
        }
        if let Some(t) = self.tol_e {
            config.tol_e = t;
        }
        if let Some(t) = self.match_tol {
            config.match_tol = t;
        }
        config
    }

    fn config(&self) -> ShootingConfig {
        self.apply(ShootingConfig::default())
    }
}

#[derive(Debug, Clone, Args)]
struct ConstraintArgs {
    /// Use the built-in constraint set for this family, level and degree.
    #[arg(long)]
    standard: bool,
    /// Match orders 0..k of the series at zero.
    #[arg(long)]
    powers: Option<usize>,
    /// Match the first k powers of the large-coupling expansion.
    #[arg(long)]
    asymptotic: Option<usize>,
    /// Extra points: `0.5` matches the value, `d2@0.5` the second Taylor coefficient.
    #[arg(long, value_delimiter = ',')]
    nodes: Vec<String>,
    /// `K:NODE` replaces the K-th power term (1-based) by NODE.
    /// `--replace-power-K-by NODE` is accepted as well.
    #[arg(long)]
    replace_power: Vec<String>,
    /// Directory of series files from `expand` to use before computing.
    #[arg(long)]
    series_dir: Option<PathBuf>,
}

impl ConstraintArgs {
    /// Constraint set and the μ of the standard recipe, if one was used.
    fn recipe(&self, family: ProblemFamily, level: usize, degree: usize) -> Result<(Recipe, Option<f64>)> {
        let (mut recipe, mu) = if self.standard {
            let (r, mu) = standard_recipe(family, level, degree)?;
            (r, Some(mu))
        } else if self.powers.is_none() && self.asymptotic.is_none() && self.nodes.is_empty() {
            return Err(Error::InvalidArgument(
                "give --standard or at least one of --powers, --asymptotic, --nodes".into(),
            ));
        } else {
            (Recipe { powers: 0, asymptotic: 0, nodes: Vec::new(), replacements: Vec::new() }, None)
        };
        if let Some(p) = self.powers {
            recipe.powers = p;
        }
        if let Some(a) = self.asymptotic {
            recipe.asymptotic = a;
        }
        if !self.nodes.is_empty() {
            recipe.nodes = self.nodes.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        for spec in &self.replace_power {
            let (k, node) = spec
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("replacement {spec:?} must look like K:NODE")))?;
            let k: usize = k.parse().map_err(|_| Error::InvalidArgument(format!("bad power position in {spec:?}")))?;
            recipe.replacements.retain(|(p, _)| *p != k);
            recipe.replacements.push((k, node.parse()?));
        }
        Ok((recipe, mu))
    }

    fn bank(
        &self,
        family: ProblemFamily,
        level: usize,
        constraints: &[Constraint],
        config: &ShootingConfig,
    ) -> Result<SeriesBank> {
        let mut bank = SeriesBank::new();
        if let Some(dir) = &self.series_dir {
            load_series_dir(dir, family, level, &mut bank)?;
        }
        bank.fill(family, level, constraints, config)?;
        Ok(bank)
    }
}

#[derive(Debug, Clone, Args)]
struct ExpandArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// `0`, a positive coupling, or `asymptotic`.
    #[arg(long)]
    point: String,
    #[arg(long)]
    terms: usize,
    /// Exact rationals (a = 2, point 0 only).
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
struct BuildArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Polynomial degree.
    #[arg(long = "N")]
    degree: usize,
    /// Auxiliary-function parameter; defaults to the standard recipe's.
    #[arg(long)]
    mu: Option<f64>,
    #[command(flatten)]
    constraints: ConstraintArgs,
    /// Write the approximant even if its denominator has positive roots.
    #[arg(long)]
    allow_defects: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
struct SweepArgs {
    #[arg(long)]
    approximant: PathBuf,
    /// `log:LO:HI:N`, `linear:LO:HI:N` or a comma-separated list.
    #[arg(long)]
    grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
struct ScanArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long = "N")]
    degree: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    mu_grid: Vec<f64>,
    #[command(flatten)]
    constraints: ConstraintArgs,
    /// Grid used for ranking; defaults to 41 log-spaced points on [0.01, 100].
    #[arg(long)]
    audit_grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
struct ReproduceArgs {
    /// Table id (I..VIII), key, or `all`.
    #[arg(long)]
    table: String,
    /// Write one CSV per table plus a JSON bundle here instead of stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

/// Provenance block embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub args: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<ProblemFamily>,
    pub levels: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<ShootingConfig>,
    pub precision: Precision,
    pub outputs: Vec<String>,
    pub determinism: &'static str,
}

impl RunManifest {
    fn new(command: &str, args: &[String], precision: Precision) -> Self {
        RunManifest {
            tool: "mqra",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            args: args.to_vec(),
            family: None,
            levels: Vec::new(),
            constraints: Vec::new(),
            solver: None,
            precision,
            outputs: Vec::new(),
            determinism: "no random numbers are used; identical invocations produce identical output",
        }
    }
}

/// Rewrites `--replace-power-K-by NODE` (or `=NODE`) to `--replace-power K:NODE`.
pub fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let parsed = arg.strip_prefix("--replace-power-").and_then(|rest| {
            let (k, value) = match rest.split_once('=') {
                Some((head, v)) => (head.strip_suffix("-by")?, Some(v.to_string())),
                None => (rest.strip_suffix("-by")?, None),
            };
            k.parse::<usize>().ok().map(|k| (k, value))
        });
        match parsed {
            Some((k, value)) => {
                let value = value.or_else(|| it.next()).unwrap_or_default();
                out.push("--replace-power".into());
                out.push(format!("{k}:{value}"));
            }
            None => out.push(arg),
        }
    }
    out
}

/// Fixed 12-significant-digit CSV number.
pub fn csv_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

fn with_manifest<T: Serialize>(payload: &T, manifest: &RunManifest) -> Result<String> {
    let mut value = serde_json::to_value(payload)?;
    match &mut value {
        Json::Object(map) => {
            map.insert("manifest".into(), serde_json::to_value(manifest)?);
        }
        other => {
            let inner = std::mem::take(other);
            *other = serde_json::json!({ "manifest": manifest, "data": inner });
        }
    }
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn out_list(path: &Option<PathBuf>) -> Vec<String> {
    path.iter().map(|p| p.display().to_string()).collect()
}

/// Parses `log:LO:HI:N`, `linear:LO:HI:N`, or `x1,x2,...`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("cannot parse grid {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [kind @ ("log" | "linear"), lo, hi, n] => {
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if *kind == "log" {
                log_grid(num(lo)?, num(hi)?, n)
            } else {
                linear_grid(num(lo)?, num(hi)?, n)
            }
        }
        [list] => {
            let list = list.strip_prefix("list=").unwrap_or(list);
            let v: Vec<f64> = list.split(',').map(num).collect::<Result<_>>()?;
            if v.iter().any(|x| !(*x >= 0.0)) {
                return Err(Error::InvalidArgument("grid points must be nonnegative".into()));
            }
            Ok(v)
        }
        _ => Err(bad()),
    }
}

/// Loads series files written by `expand` that belong to this family and
/// level. Exact files carry fraction strings; both forms are accepted.
fn load_series_dir(dir: &Path, family: ProblemFamily, level: usize, bank: &mut SeriesBank) -> Result<()> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let value: Json = serde_json::from_str(&fs::read_to_string(&path)?)?;
        let Some(fam) = value.get("family").and_then(|f| serde_json::from_value::<ProblemFamily>(f.clone()).ok())
        else {
            continue;
        };
        if fam != family || value.get("level").and_then(Json::as_u64) != Some(level as u64) {
            continue;
        }
        let Some(point) = value.get("point").and_then(|p| serde_json::from_value::<SeriesPoint>(p.clone()).ok()) else {
            continue;
        };
        let coefficients: Vec<f64> = match value.get("coefficients").and_then(Json::as_array) {
            Some(arr) => arr
                .iter()
                .map(|c| match c {
                    Json::Number(n) => n.as_f64(),
                    Json::String(s) => Some(crate::reference::Value::Text(s.clone()).as_f64()),
                    _ => None,
                })
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidArgument(format!("{}: bad coefficients", path.display())))?,
            None => continue,
        };
        match point {
            SeriesPoint::Finite { alpha } => bank.insert_finite(alpha, coefficients),
            SeriesPoint::Asymptotic => bank.set_asymptotic(coefficients),
        }
    }
    Ok(())
}

fn parse_point(s: &str) -> Result<SeriesPoint> {
    match s.trim() {
        "asymptotic" | "inf" | "infinity" => Ok(SeriesPoint::Asymptotic),
        other => {
            let alpha: f64 = other.parse().map_err(|_| {
                Error::InvalidArgument(format!("point must be a number or 'asymptotic', got {other:?}"))
            })?;
            if !(alpha >= 0.0) || !alpha.is_finite() {
                return Err(Error::InvalidArgument(format!("point must be nonnegative, got {alpha}")));
            }
            Ok(SeriesPoint::Finite { alpha })
        }
    }
}

fn cmd_expand(args: &ExpandArgs, argv: &[String], precision: Precision) -> Result<i32> {
    let family = args.family.family()?;
    let level = args.family.level;
    let point = parse_point(&args.point)?;
    let mut manifest = RunManifest::new("expand", argv, precision);
    manifest.family = Some(family);
    manifest.levels = vec![level];
    manifest.outputs = out_list(&args.out);
    let text = if args.exact {
        if family.a() != 2 || point != (SeriesPoint::Finite { alpha: 0.0 }) {
            return Err(Error::InvalidArgument("--exact needs a = 2 and --point 0".into()));
        }
        let series = exact_harmonic_series(family.b(), level, args.terms)?;
        let mut value = serde_json::to_value(&series)?;
        value["family"] = serde_json::to_value(family)?;
        value["point"] = serde_json::to_value(point)?;
        with_manifest(&value, &manifest)?
    } else {
        let data: SeriesData = match point {
            SeriesPoint::Finite { alpha } => {
                let config = args.solver.config();
                manifest.solver = Some(config.clone());
                numeric_series(family, level, alpha, args.terms, &config)?
            }
            SeriesPoint::Asymptotic => {
                let config = args.solver.apply(ShootingConfig::scaled_frame(family.b()));
                manifest.solver = Some(config.clone());
                asymptotic_series(family, level, args.terms, &config)?.1
            }
        };
        with_manifest(&data, &manifest)?
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_build(args: &BuildArgs, argv: &[String], precision: Precision) -> Result<i32> {
    let family = args.family.family()?;
    let level = args.family.level;
    let (recipe, recipe_mu) = args.constraints.recipe(family, level, args.degree)?;
    let mu =
        args.mu.or(recipe_mu).ok_or_else(|| Error::InvalidArgument("--mu is required without --standard".into()))?;
    let constraints = recipe.constraints()?;
    let unknowns = family.unknown_count(args.degree);
    if constraints.len() != unknowns {
        return Err(Error::ConstraintCount { constraints: constraints.len(), unknowns });
    }
    let config = args.solver.config();
    let bank = args.constraints.bank(family, level, &constraints, &config)?;
    let approx = build_approximant(family, level, args.degree, mu, &constraints, &bank, precision)?;
    if !approx.is_defect_free() && !args.allow_defects {
        return Err(Error::Defective { roots: approx.defect.positive_roots.clone() });
    }
    let mut manifest = RunManifest::new("build", argv, precision);
    manifest.family = Some(family);
    manifest.levels = vec![level];
    manifest.constraints = constraints.iter().map(ToString::to_string).collect();
    manifest.solver = Some(config);
    manifest.outputs = out_list(&args.out);
    emit(args.out.as_deref(), &with_manifest(&approx, &manifest)?)?;
    if let Some(report) = &approx.solve {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(EXIT_OK)
}

fn read_approximant(path: &Path) -> Result<Approximant> {
    let approx: Approximant = serde_json::from_str(&fs::read_to_string(path)?)?;
    let defect = check_defect_free(&approx.q);
    if !defect.defect_free {
        return Err(Error::Defective { roots: defect.positive_roots });
    }
    Ok(approx)
}

fn cmd_sweep(args: &SweepArgs, argv: &[String], precision: Precision) -> Result<i32> {
    let approx = read_approximant(&args.approximant)?;
    let grid = parse_grid(&args.grid)?;
    let config = args.solver.config();
    let rows = error_sweep(&approx, &grid, &config)?;
    let mut manifest = RunManifest::new("sweep", argv, precision);
    manifest.family = Some(approx.family);
    manifest.levels = vec![approx.level];
    manifest.constraints = approx.constraints.iter().map(ToString::to_string).collect();
    manifest.solver = Some(config);
    manifest.outputs = out_list(&args.out);

    let mut csv = format!("# manifest {}\n", serde_json::to_string(&manifest)?);
    csv.push_str("lambda,e_app,e_shoot,rel_err\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            csv_number(r.lambda),
            csv_number(r.e_app),
            csv_number(r.e_shoot),
            csv_number(r.rel_err)
        ));
    }
    if let Some(s) = summarize(&rows) {
        csv.push_str(&format!("# summary max_rel_err={} argmax={}\n", csv_number(s.max_rel_err), csv_number(s.argmax)));
    }
    emit(args.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn cmd_scan(args: &ScanArgs, argv: &[String], precision: Precision) -> Result<i32> {
    let family = args.family.family()?;
    let level = args.family.level;
    let (recipe, _) = args.constraints.recipe(family, level, args.degree)?;
    let constraints = recipe.constraints()?;
    let unknowns = family.unknown_count(args.degree);
    if constraints.len() != unknowns {
        return Err(Error::ConstraintCount { constraints: constraints.len(), unknowns });
    }
    let config = args.solver.config();
    let bank = args.constraints.bank(family, level, &constraints, &config)?;
    let audit = match &args.audit_grid {
        Some(spec) => parse_grid(spec)?,
        None => audit_grid(),
    };
    let (best, report) =
        scan_mu(family, level, args.degree, &constraints, &bank, &args.mu_grid, &audit, &config, precision)?;
    let mut manifest = RunManifest::new("scan-mu", argv, precision);
    manifest.family = Some(family);
    manifest.levels = vec![level];
    manifest.constraints = constraints.iter().map(ToString::to_string).collect();
    manifest.solver = Some(config);
    manifest.outputs = out_list(&args.out);
    let payload = serde_json::json!({ "report": report, "best": best });
    emit(args.out.as_deref(), &with_manifest(&payload, &manifest)?)?;
    Ok(EXIT_OK)
}

fn report_csv(report: &TableReport) -> String {
    let mut csv = String::from("table,level,row,reference,computed,abs_delta,rel_delta,tolerance,verdict\n");
    for c in &report.comparisons {
        let verdict = match c.pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "info",
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            report.id,
            c.level,
            c.row,
            c.reference,
            c.computed,
            csv_number(c.abs_delta),
            csv_number(c.rel_delta),
            c.tolerance.map(csv_number).unwrap_or_default(),
            verdict
        ));
    }
    for c in &report.checks {
        csv.push_str(&format!("# check {}: {} ({})\n", c.name, if c.pass { "pass" } else { "fail" }, c.detail));
    }
    for n in &report.notes {
        csv.push_str(&format!("# note {n}\n"));
    }
    csv.push_str(&format!(
        "# verdict table {} {}: {}\n",
        report.id,
        report.key,
        if report.pass { "PASS" } else { "FAIL" }
    ));
    csv
}

fn cmd_reproduce(args: &ReproduceArgs, argv: &[String], precision: Precision) -> Result<i32> {
    let ids = if args.table.eq_ignore_ascii_case("all") { table_ids() } else { vec![args.table.clone()] };
    let config = args.solver.config();
    let reports: Vec<TableReport> =
        ids.iter().map(|id| reproduce_table(id, &config, precision)).collect::<Result<_>>()?;
    let pass = reports.iter().all(|r| r.pass);

    let mut manifest = RunManifest::new("reproduce", argv, precision);
    manifest.solver = Some(config);
    match &args.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut outputs = Vec::new();
            for r in &reports {
                let path = dir.join(format!("table_{}.csv", r.id));
                outputs.push(path.display().to_string());
            }
            let bundle = dir.join("reproduce.json");
            outputs.push(bundle.display().to_string());
            manifest.outputs = outputs;
            let header = format!("# manifest {}\n", serde_json::to_string(&manifest)?);
            for r in &reports {
                fs::write(dir.join(format!("table_{}.csv", r.id)), format!("{header}{}", report_csv(r)))?;
            }
            let payload = serde_json::json!({ "tables": reports, "pass": pass });
            fs::write(bundle, with_manifest(&payload, &manifest)?)?;
            for r in &reports {
                println!("table {} {}: {}", r.id, r.key, if r.pass { "PASS" } else { "FAIL" });
            }
        }
        None => {
            let mut text = format!("# manifest {}\n", serde_json::to_string(&manifest)?);
            for r in &reports {
                text.push_str(&report_csv(r));
            }
            emit(None, &text)?;
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERDICT })
}

/// Exit code for an error surfaced by a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidFamily { .. }
        | Error::InvalidArgument(_)
        | Error::ConstraintCount { .. }
        | Error::DuplicateConstraint(_)
        | Error::MissingSeries(_) => EXIT_USAGE,
        _ => EXIT_SOLVER,
    }
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run(argv: impl IntoIterator<Item = String>) -> i32 {
    let argv = normalize_args(argv);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let precision = match Precision::from_env() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let args = &argv[1.min(argv.len())..];
    let result = match &cli.command {
        Command::Expand(a) => cmd_expand(a, args, precision),
        Command::Build(a) => cmd_build(a, args, precision),
        Command::Sweep(a) => cmd_sweep(a, args, precision),
        Command::ScanMu(a) => cmd_scan(a, args, precision),
        Command::Reproduce(a) => cmd_reproduce(a, args, precision),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn replacement_flag_is_normalized() {
        let out = normalize_args(strings(&["mqra", "build", "--replace-power-4-by", "d2@0.5", "--N", "6"]));
        assert_eq!(out, strings(&["mqra", "build", "--replace-power", "4:d2@0.5", "--N", "6"]));
        let out = normalize_args(strings(&["--replace-power-2-by=0.5"]));
        assert_eq!(out, strings(&["--replace-power", "2:0.5"]));
        assert_eq!(normalize_args(strings(&["--replace-power-x-by"])), strings(&["--replace-power-x-by"]));
    }

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("linear:0:1:3").unwrap(), [0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0,0.5").unwrap(), [0.0, 0.5]);
        assert_eq!(parse_grid("log:0.01:100:200").unwrap().len(), 200);
        assert!(parse_grid("log:0:1:3").is_err());
        assert!(parse_grid("cubic:0:1").is_err());
        assert!(parse_grid("-1").is_err());
    }

    #[test]
    fn csv_numbers_have_twelve_digits() {
        assert_eq!(csv_number(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(csv_number(0.0), "0.00000000000e0");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::ConstraintCount { constraints: 14, unknowns: 15 }), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Singular { pivot: 0 }), EXIT_SOLVER);
    }
}
