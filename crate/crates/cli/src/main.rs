// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! `sdslab`: batch front end for exact analysis of randomized voting rules.
//!
//! Exit codes: 0 success, 1 an audit or bound fails (witness on stdout),
//! 2 input error, 3 enumeration budget exceeded.

mod output;
mod resolve;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{Format, Report, Rows};
use resolve::{read_input, resolve_rule};
use sdslab::analysis::{Analysis, AnalysisMode};
use sdslab::axioms::{anonymity, gibbard_conditions, neutrality, strategyproofness, AxiomReport, AxiomVerdict, Scope};
use sdslab::descriptor::{read_tabulation, write_tabulation};
use sdslab::enumerate::Budget;
use sdslab::metrics::{measure, reference_values, verify_theorem_bounds, BoundOutcome, Metric, ReferenceRule};
use sdslab::model::{parse_profile, AlternativeId};
use sdslab::report::{axiom_report_json, bounds_report_json, decomposition_json, metrics_report_json, witness_json};
use sdslab::rules::tabulate;
use sdslab::transforms::{
    barbera_decompose, build_cwc_profile, build_minimal_margin_profile, build_unanimous_profile, symmetrize,
    Decomposition,
};
use sdslab::{Error, Rational};

#[derive(Parser)]
#[command(name = "sdslab", version, about = "Exact analysis of randomized social decision schemes")]
struct Cli {
    /// Output format; JSON-lines commands (tabulate, symmetrize) ignore it.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add decimal columns with this many digits to CSV and table output.
    #[arg(long, global = true, value_name = "K")]
    decimals: Option<usize>,
    /// Profile-space reduction used by audits and metrics.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Maximum rule evaluations; overrides SDSLAB_BUDGET (default 10000000).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Anonymous,
    Auto,
}

impl From<ModeArg> for AnalysisMode {
    fn from(mode: ModeArg) -> AnalysisMode {
        match mode {
            ModeArg::Full => AnalysisMode::Full,
            ModeArg::Anonymous => AnalysisMode::Anonymous,
            ModeArg::Auto => AnalysisMode::Auto,
        }
    }
}

#[derive(Args)]
struct Scoped {
    /// Rule: a registry name, point:FILE, support:FILE, mix:FILE, tab:FILE,
    /// a JSON descriptor file, or inline JSON.
    #[arg(long)]
    rule: String,
    #[arg(short, value_name = "M")]
    m: usize,
    #[arg(short, value_name = "N")]
    n: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxiomGroup {
    All,
    Sp,
    Gibbard,
    Symmetry,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    /// Condorcet-winner-candidate profile with ceil(m/2) candidates.
    Cwc,
    /// Profile where the first alternative wins every comparison by the smallest majority.
    MinimalMargin,
    /// Profile where every voter ranks --x first and --y second.
    Unanimous,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a rule on one profile.
    Eval {
        #[arg(long)]
        rule: String,
        /// Profile file ("-" for standard input).
        #[arg(long)]
        profile: String,
    },
    /// Audit axioms exhaustively over all profiles of a scope.
    Audit {
        #[command(flatten)]
        scope: Scoped,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        axioms: Vec<AxiomGroup>,
    },
    /// Measure alpha, beta and gamma.
    Measure {
        #[command(flatten)]
        scope: Scoped,
        #[arg(long, value_delimiter = ',', default_value = "alpha,beta,gamma")]
        metrics: Vec<String>,
    },
    /// Check the Condorcet, dictatorship and efficiency bounds for strategyproof rules.
    Bounds {
        #[command(flatten)]
        scope: Scoped,
    },
    /// Measure alpha, beta, gamma of RD, U, B, C and compare with their closed forms.
    Table {
        #[arg(short, value_name = "M")]
        m: usize,
        #[arg(short, value_name = "N")]
        n: usize,
    },
    /// Print a constructed profile.
    Fixtures {
        #[arg(value_enum)]
        kind: FixtureKind,
        #[arg(short, value_name = "M")]
        m: usize,
        #[arg(short, value_name = "N")]
        n: usize,
        #[arg(long, default_value = "a")]
        x: String,
        #[arg(long, default_value = "b")]
        y: String,
    },
    /// Decompose a JSON-lines tabulation into point-voting and supporting-size parts.
    Decompose {
        /// Tabulation file; standard input when omitted.
        #[arg(default_value = "-")]
        file: String,
    },
    /// Average a rule over all voter and alternative permutations; prints a JSON-lines tabulation.
    Symmetrize {
        #[command(flatten)]
        scope: Scoped,
    },
    /// Print the full JSON-lines tabulation of a rule.
    Tabulate {
        #[command(flatten)]
        scope: Scoped,
    },
}

/// What a command produced and whether it found a violation.
enum Output {
    Report { report: Report, violation: bool },
    Text(String),
}

struct Settings {
    mode: AnalysisMode,
    budget: Budget,
}

fn fraction(value: &Rational) -> String {
    value.to_string()
}

fn label(text: &str) -> Result<AlternativeId, Error> {
    AlternativeId::from_label(text).ok_or_else(|| Error::Precondition(format!("unknown alternative {text:?}")))
}

fn eval(rule: &str, profile_path: &str) -> Result<Output, Error> {
    let profile = parse_profile(&read_input(profile_path)?)?;
    let spec = resolve_rule(rule, profile.m())?;
    let lottery = sdslab::rules::evaluate(&spec, &profile)?;
    let mut rows = Rows::new(["alternative", "probability"]);
    for x in profile.alternatives() {
        rows.push(vec![x.label(), fraction(lottery.prob(x))]);
    }
    let json = serde_json::to_value(&lottery).expect("lottery serializes");
    let report = Report { json, rows: Some(rows), compact: true };
    Ok(Output::Report { report, violation: false })
}

fn verdict_rows(report: &AxiomReport) -> Rows {
    let mut rows = Rows::new(["axiom", "holds", "profile", "modified_profile", "before", "after"]);
    for v in &report.verdicts {
        let w = v.canonical.as_ref().or(v.witness.as_ref());
        let cell = |f: &dyn Fn(&sdslab::axioms::Witness) -> String| w.map(f).unwrap_or_default();
        rows.push(vec![
            v.axiom.as_str().to_string(),
            v.holds().to_string(),
            cell(&|w| w.profile.to_compact_string()),
            cell(&|w| w.modified_profile().map(|p| p.to_compact_string()).unwrap_or_default()),
            cell(&|w| w.before.to_string()),
            cell(&|w| w.after.to_string()),
        ]);
    }
    rows
}

fn audit(scope: &Scoped, groups: &[AxiomGroup], settings: &Settings) -> Result<Output, Error> {
    let spec = resolve_rule(&scope.rule, scope.m)?;
    let analysis = Analysis::new(&spec, scope.m, scope.n, settings.mode, settings.budget)?;
    let wants = |g: AxiomGroup| groups.contains(&AxiomGroup::All) || groups.contains(&g);
    let mut verdicts: Vec<AxiomVerdict> = Vec::new();
    if wants(AxiomGroup::Sp) {
        verdicts.push(strategyproofness(&analysis));
    }
    if wants(AxiomGroup::Gibbard) {
        let (np, loc) = gibbard_conditions(&analysis);
        verdicts.extend([np, loc]);
    }
    if wants(AxiomGroup::Symmetry) {
        verdicts.extend([anonymity(&analysis), neutrality(&analysis)]);
    }
    let report = AxiomReport { rule: spec.name(), scope: Scope::of(&analysis), verdicts };
    let violation = !report.all_hold();
    let rows = verdict_rows(&report);
    Ok(Output::Report { report: Report::new(axiom_report_json(&report)).with_rows(rows), violation })
}

fn parse_metrics(names: &[String]) -> Result<Vec<Metric>, Error> {
    names.iter().map(|s| s.trim().parse::<Metric>()).collect()
}

fn measure_cmd(scope: &Scoped, names: &[String], settings: &Settings) -> Result<Output, Error> {
    let metrics = parse_metrics(names)?;
    let spec = resolve_rule(&scope.rule, scope.m)?;
    let analysis = Analysis::new(&spec, scope.m, scope.n, settings.mode, settings.budget)?;
    let report = measure(&analysis, &metrics)?;
    let mut json = metrics_report_json(&report);
    let mut violation = false;
    if report.strategyproof == Some(false) {
        // Gamma is only defined for strategyproof rules; report why it is missing.
        violation = true;
        let verdict = strategyproofness(&analysis);
        if let Some(w) = verdict.canonical.as_ref().or(verdict.witness.as_ref()) {
            json["strategyproofness_witness"] = witness_json(w);
        }
        eprintln!("gamma is undefined: the rule is not strategyproof");
    }
    let mut rows = Rows::new(["metric", "value", "profile"]);
    if let Some(a) = &report.alpha {
        rows.push(vec!["alpha".into(), fraction(&a.value), a.profile.to_compact_string()]);
    }
    if let Some(b) = &report.beta {
        let profile = b.witness.as_ref().map(|(p, _, _)| p.to_compact_string()).unwrap_or_default();
        rows.push(vec!["beta".into(), fraction(&b.value), profile]);
    }
    if let Some(g) = &report.gamma {
        rows.push(vec!["gamma".into(), fraction(&g.value), String::new()]);
        for (w, v) in g.witnesses.iter().zip(&g.per_voter) {
            rows.push(vec![format!("gamma_{}", w.voter + 1), fraction(v), w.profile.to_compact_string()]);
        }
    }
    Ok(Output::Report { report: Report::new(json).with_rows(rows), violation })
}

fn bounds(scope: &Scoped, settings: &Settings) -> Result<Output, Error> {
    let spec = resolve_rule(&scope.rule, scope.m)?;
    let analysis = Analysis::new(&spec, scope.m, scope.n, settings.mode, settings.budget)?;
    let report = measure(&analysis, &[Metric::Alpha, Metric::Beta, Metric::Gamma])?;
    let sp = report.strategyproof.unwrap_or(false);
    let checked = verify_theorem_bounds(&report, sp, scope.m, scope.n)?;
    let mut rows = Rows::new(["bound", "inequality", "status", "lhs", "rhs"]);
    for c in checked.checks() {
        let status = match &c.outcome {
            BoundOutcome::Holds { tight: true } => "holds (tight)".to_string(),
            BoundOutcome::Holds { tight: false } => "holds".to_string(),
            BoundOutcome::Violated => "violated".to_string(),
            BoundOutcome::Skipped(reason) => format!("skipped: {reason}"),
        };
        let opt = |v: &Option<Rational>| v.as_ref().map(fraction).unwrap_or_default();
        rows.push(vec![c.name.to_string(), c.inequality.to_string(), status, opt(&c.lhs), opt(&c.rhs)]);
    }
    let mut json = bounds_report_json(&checked);
    json["strategyproof"] = Value::Bool(sp);
    let violation = checked.any_violated();
    Ok(Output::Report { report: Report::new(json).with_rows(rows), violation })
}

fn table(m: usize, n: usize, settings: &Settings) -> Result<Output, Error> {
    let mut rows = Rows::new(["rule", "alpha", "beta", "gamma", "alpha_formula", "beta_formula", "gamma_formula"]);
    let mut entries = Vec::new();
    let mut mismatches = Vec::new();
    for rule in ReferenceRule::ALL {
        let analysis = Analysis::new(&rule.spec(), m, n, settings.mode, settings.budget)?;
        let report = measure(&analysis, &[Metric::Alpha, Metric::Beta, Metric::Gamma])?;
        let closed = reference_values(rule, m, n)?;
        let measured = [report.alpha.map(|a| a.value), report.beta.map(|b| b.value), report.gamma.map(|g| g.value)];
        let formulas = [closed.alpha, closed.beta, closed.gamma];
        let mut row = vec![rule.short_name().to_string()];
        let mut cells = serde_json::Map::new();
        for (name, (got, formula)) in ["alpha", "beta", "gamma"].iter().zip(measured.iter().zip(&formulas)) {
            row.push(got.as_ref().map(fraction).unwrap_or_else(|| "undefined".into()));
            if let (Some(g), Some(f)) = (got, formula) {
                if g != f {
                    mismatches.push(format!("{} {name}: measured {g}, formula {f}", rule.short_name()));
                }
            }
            cells.insert(
                (*name).into(),
                json!({
                    "measured": got.as_ref().map(fraction),
                    "formula": formula.as_ref().map(fraction).unwrap_or_else(|| "n/a".into()),
                }),
            );
        }
        row.extend(formulas.iter().map(|f| f.as_ref().map(fraction).unwrap_or_else(|| "n/a".into())));
        rows.push(row);
        entries.push(json!({ "rule": rule.short_name(), "values": cells }));
    }
    for m in &mismatches {
        eprintln!("mismatch: {m}");
    }
    let json = json!({ "m": m, "n": n, "rows": entries, "mismatches": mismatches });
    Ok(Output::Report { report: Report::new(json).with_rows(rows), violation: !mismatches.is_empty() })
}

fn fixtures(kind: FixtureKind, m: usize, n: usize, x: &str, y: &str, format: Format) -> Result<Output, Error> {
    let (profile, candidates, name) = match kind {
        FixtureKind::Cwc => {
            let (p, c) = build_cwc_profile(m, n)?;
            (p, Some(c), "cwc")
        }
        FixtureKind::MinimalMargin => (build_minimal_margin_profile(m, n, label(x)?)?, None, "minimal-margin"),
        FixtureKind::Unanimous => (build_unanimous_profile(m, n, label(x)?, label(y)?)?, None, "unanimous"),
    };
    let labels = |c: &Vec<AlternativeId>| c.iter().map(|x| x.label()).collect::<Vec<_>>();
    if format == Format::Table {
        let mut text = profile.to_text();
        if let Some(c) = &candidates {
            text.push_str(&format!("# candidates: {}\n", labels(c).join(", ")));
        }
        return Ok(Output::Text(text));
    }
    let mut json = json!({ "kind": name, "m": m, "n": n, "profile": profile.to_compact_string() });
    if let Some(c) = &candidates {
        json["candidates"] = json!(labels(c));
    }
    Ok(Output::Report { report: Report::new(json), violation: false })
}

fn decompose(file: &str) -> Result<Output, Error> {
    let tab = read_tabulation(&read_input(file)?)?;
    let decomposition = barbera_decompose(&tab)?;
    let violation = matches!(decomposition, Decomposition::Infeasible(_));
    Ok(Output::Report { report: Report::new(decomposition_json(&decomposition)), violation })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let settings = Settings {
        mode: cli.mode.into(),
        budget: cli.budget.map(|b| Budget::new(b.into())).unwrap_or_else(Budget::from_env),
    };
    match &cli.command {
        Command::Eval { rule, profile } => eval(rule, profile),
        Command::Audit { scope, axioms } => audit(scope, axioms, &settings),
        Command::Measure { scope, metrics } => measure_cmd(scope, metrics, &settings),
        Command::Bounds { scope } => bounds(scope, &settings),
        Command::Table { m, n } => table(*m, *n, &settings),
        Command::Fixtures { kind, m, n, x, y } => fixtures(*kind, *m, *n, x, y, cli.format),
        Command::Decompose { file } => decompose(file),
        Command::Symmetrize { scope } => {
            let spec = resolve_rule(&scope.rule, scope.m)?;
            Ok(Output::Text(write_tabulation(&symmetrize(&spec, scope.m, scope.n, settings.budget)?)))
        }
        Command::Tabulate { scope } => {
            let spec = resolve_rule(&scope.rule, scope.m)?;
            Ok(Output::Text(write_tabulation(&tabulate(&spec, scope.m, scope.n, settings.budget)?)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report { report, violation }) => {
            print!("{}", report.render(cli.format, cli.decimals));
            ExitCode::from(u8::from(violation))
        }
        Err(e @ Error::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
