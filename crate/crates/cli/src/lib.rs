//! Command-line front end for the `qgame` toolkit.
//!
//! [`run`] parses arguments and returns the exit code together with everything
//! that would be written to stdout and stderr, so the binary and the tests share
//! one code path.

pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qgame_core::bayes::{
    average_payoff, classical_bound, ghz_phase_distribution, is_advised_equilibrium,
    mermin_inequivalence, parity_expectation, Advice, BayesianGame, ConditionalDistribution,
    DEFAULT_ENUMERATION_LIMIT,
};
use qgame_core::diagram::{evaluate, parse, parse_angle, typecheck, BoxEnv, ObservableStructure};
use qgame_core::formats::{from_json, to_json, BayesGameFile, EwlGameFile};
use qgame_core::tensor::{Distribution, LinearMap, C64};
use qgame_core::{Error, PROB_TOL};

use output::{fmt_num, num, nums, render_json, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qgame",
    version,
    about = "Quantum games, Bell expressions and string diagrams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub output: OutputFormat,
    /// Comparison tolerance for equilibria, bounds and no-signaling checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Maximum number of deterministic strategies or deviations to enumerate.
    #[arg(long, global = true)]
    pub limit: Option<u128>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Payoff table of an EWL game, with Nash and Pareto flags.
    EwlTable(FileArg),
    /// Pure Nash equilibria of an EWL game.
    EwlNash(FileArg),
    /// Final state, outcome distribution and payoffs for one profile.
    EwlState {
        #[command(flatten)]
        file: FileArg,
        /// Comma-separated strategy labels, one per player.
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<String>,
    },
    /// Average payoffs of a Bayesian game under its advice, and whether following it is an equilibrium.
    BayesPayoff(FileArg),
    /// Classical bound of the file's Bell expression by deterministic enumeration.
    BellBound(FileArg),
    /// Value of the Bell expression under the file's advice.
    BellValue(FileArg),
    /// Outcome distribution of GHZ measured in phase bases.
    GhzDist {
        #[arg(long)]
        n: usize,
        /// Comma-separated angles in radians; `pi/2`-style fractions accepted.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        phases: Vec<String>,
    },
    /// Quantum parities of GHZ on the Mermin settings against every local hidden-variable assignment.
    Mermin,
    /// Evaluate a diagram to a matrix.
    DiagramEval(DiagramArg),
    /// Type-check a diagram and print its arity.
    DiagramCheck(DiagramArg),
}

#[derive(Debug, clap::Args)]
pub struct FileArg {
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct DiagramArg {
    /// Diagram text; use `--input` to read it from a file instead.
    #[arg(conflicts_with = "input", required_unless_present = "input")]
    pub expr: Option<String>,
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// `z`, `x`, `computational:d` or `fourier:d`.
    #[arg(long, default_value = "z")]
    pub observable: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// A report rendered either as a table or as JSON.
struct Report {
    json: Value,
    table: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let wants_json = args
        .windows(2)
        .any(|w| w[0] == "--output" && w[1] == "json")
        || args.iter().any(|a| a == "--output=json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => failure(Failure::Input(e.to_string()), wants_json),
            };
        }
    };
    let json = cli.output == OutputFormat::Json;
    match execute(&cli) {
        Ok(report) => Outcome {
            code: 0,
            stdout: if json {
                render_json(report.json)
            } else {
                report.table
            },
            stderr: String::new(),
        },
        Err(f) => failure(f, json),
    }
}

fn failure(f: Failure, json: bool) -> Outcome {
    let (code, kind, message) = match f {
        Failure::Input(m) => (1, "input", m),
        Failure::Limit(m) => (2, "limit", m),
    };
    let message = message.trim_end();
    let message = message
        .strip_prefix("error: ")
        .unwrap_or(message)
        .to_string();
    Outcome {
        code,
        stdout: if json {
            render_json(json!({"error": {"code": code, "kind": kind, "message": message}}))
        } else {
            String::new()
        },
        stderr: format!("error: {message}\n"),
    }
}

fn execute(cli: &Cli) -> Res<Report> {
    let tol = cli.tolerance.unwrap_or(PROB_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::Input(
            "tolerance must be a non-negative number".into(),
        ));
    }
    let limit = cli.limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    match &cli.command {
        Command::EwlTable(f) => ewl_table(&load_ewl(&f.input)?, tol),
        Command::EwlNash(f) => ewl_nash(&load_ewl(&f.input)?, tol),
        Command::EwlState { file, profile } => ewl_state(&load_ewl(&file.input)?, profile),
        Command::BayesPayoff(f) => bayes_payoff(&load_bayes(&f.input)?, tol, limit),
        Command::BellBound(f) => bell_bound(&load_bayes(&f.input)?, tol, limit),
        Command::BellValue(f) => bell_value(&load_bayes(&f.input)?, tol, limit),
        Command::GhzDist { n, phases } => ghz_dist(*n, phases),
        Command::Mermin => Ok(mermin()),
        Command::DiagramEval(d) => diagram_eval(d),
        Command::DiagramCheck(d) => diagram_check(d),
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_ewl(path: &Path) -> Res<EwlGameFile> {
    Ok(from_json(&read(path)?)?)
}

fn load_bayes(path: &Path) -> Res<BayesGameFile> {
    Ok(from_json(&read(path)?)?)
}

/// Any of the JSON input files.
#[derive(Debug, Clone, PartialEq)]
pub enum GameFile {
    Ewl(EwlGameFile),
    Bayes(BayesGameFile),
}

impl GameFile {
    pub fn parse(text: &str) -> qgame_core::Result<Self> {
        let v: Value = from_json(text)?;
        if v.get("entangler").is_some() {
            Ok(GameFile::Ewl(from_json(text)?))
        } else {
            Ok(GameFile::Bayes(from_json(text)?))
        }
    }

    pub fn load(path: &Path) -> qgame_core::Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        match self {
            GameFile::Ewl(f) => to_json(f),
            GameFile::Bayes(f) => to_json(f),
        }
    }

    /// The commands that accept this file.
    pub fn commands(&self) -> &'static [&'static str] {
        match self {
            GameFile::Ewl(_) => &["ewl-table", "ewl-nash"],
            GameFile::Bayes(f) if f.advice.is_some() => {
                &["bayes-payoff", "bell-bound", "bell-value"]
            }
            GameFile::Bayes(_) => &["bell-bound"],
        }
    }
}

fn count(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn profile_json(p: &[String]) -> Value {
    Value::Array(p.iter().map(|s| Value::String(s.clone())).collect())
}

fn ewl_table(file: &EwlGameFile, tol: f64) -> Res<Report> {
    let spec = file.to_spec()?;
    let table = spec.payoff_table()?;
    let nash = table.pure_nash_with_tolerance(tol);
    let pareto = table.pareto_optimal_with_tolerance(tol);
    let n = spec.players();
    let mut header = vec!["profile".to_string()];
    header.extend((1..=n).map(|i| format!("payoff{i}")));
    header.extend(["nash".into(), "pareto".into()]);
    let mut t = Table::new(header);
    let mut rows = Vec::new();
    for (profile, payoffs) in table.entries() {
        let is_nash = nash.contains(&profile);
        let is_pareto = pareto.contains(&profile);
        let mut cells = vec![profile.join(" ")];
        cells.extend(payoffs.iter().map(|&x| fmt_num(x)));
        cells.push(if is_nash { "yes" } else { "" }.into());
        cells.push(if is_pareto { "yes" } else { "" }.into());
        t.row(cells);
        rows.push(json!({
            "profile": profile_json(&profile),
            "payoffs": nums(&payoffs),
            "nash": is_nash,
            "pareto_optimal": is_pareto,
        }));
    }
    Ok(Report {
        json: json!({"strategies": table.labels(), "profiles": rows}),
        table: t.render(),
    })
}

fn ewl_nash(file: &EwlGameFile, tol: f64) -> Res<Report> {
    let spec = file.to_spec()?;
    let table = spec.payoff_table()?;
    let nash = table.pure_nash_with_tolerance(tol);
    let mut t = Table::new(["equilibrium", "payoffs"]);
    for p in &nash {
        let refs: Vec<&str> = p.iter().map(String::as_str).collect();
        let pay = table.get(&refs).expect("profile from table");
        t.row([
            p.join(" "),
            pay.iter()
                .map(|&x| fmt_num(x))
                .collect::<Vec<_>>()
                .join(", "),
        ]);
    }
    let mut text = t.render();
    if nash.is_empty() {
        text = "no pure Nash equilibria\n".into();
    }
    Ok(Report {
        json: json!({"equilibria": nash}),
        table: text,
    })
}

fn complex_json(z: &C64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn fmt_complex(z: &C64) -> String {
    let (re, im) = (output::round12(z.re), output::round12(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt_num(re),
        (true, false) => format!("{}i", fmt_num(im)),
        (false, false) if im < 0.0 => format!("{}-{}i", fmt_num(re), fmt_num(-im)),
        (false, false) => format!("{}+{}i", fmt_num(re), fmt_num(im)),
    }
}

fn distribution_json(d: &Distribution) -> Value {
    Value::Object(d.iter().map(|(l, p)| (l, num(p))).collect::<Map<_, _>>())
}

fn ewl_state(file: &EwlGameFile, profile: &[String]) -> Res<Report> {
    let spec = file.to_spec()?;
    let refs: Vec<&str> = profile.iter().map(String::as_str).collect();
    let r = spec.evaluate_profile(&refs)?;
    let dims = r.final_state.dims().to_vec();
    let mut amps = Map::new();
    let mut t = Table::new(["outcome", "amplitude", "probability"]);
    for (k, a) in r.final_state.amplitudes().iter().enumerate() {
        let label = qgame_core::tensor::index_label(&dims, k);
        let p = r.outcome_distribution.probs()[k];
        t.row([label.clone(), fmt_complex(a), fmt_num(p)]);
        amps.insert(label, complex_json(a));
    }
    let mut text = format!("profile: {}\n", profile.join(" "));
    text += &t.render();
    text += &format!(
        "payoffs: {}\n",
        r.payoffs
            .iter()
            .map(|&x| fmt_num(x))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(Report {
        json: json!({
            "profile": profile_json(profile),
            "amplitudes": amps,
            "distribution": distribution_json(&r.outcome_distribution),
            "payoffs": nums(&r.payoffs),
        }),
        table: text,
    })
}

fn require_advice(file: &BayesGameFile, game: &BayesianGame) -> Res<Advice> {
    file.to_advice(game)?
        .ok_or_else(|| Failure::Input("this command needs an `advice` block in the input".into()))
}

fn advice_kind(a: &Advice) -> &'static str {
    match a {
        Advice::Classical(_) => "classical",
        Advice::Quantum(_) => "quantum",
        Advice::Conditional(_) => "conditional",
    }
}

fn bayes_payoff(file: &BayesGameFile, tol: f64, limit: u128) -> Res<Report> {
    let game = file.to_game()?;
    let advice = require_advice(file, &game)?;
    let cond: ConditionalDistribution = advice.conditional()?;
    let payoffs = average_payoff(&game, &cond)?;
    let violation = cond.signaling_violation();
    let verdict = is_advised_equilibrium(&game, &cond, tol, limit)?;
    let deviation = verdict.best_deviation.as_ref().map(|d| {
        let types = &game.type_labels()[d.player];
        let strats = &game.strategy_labels()[d.player];
        let mapping: Map<String, Value> = d
            .mapping
            .iter()
            .enumerate()
            .map(|(x, row)| {
                let inner: Map<String, Value> = row
                    .iter()
                    .enumerate()
                    .map(|(r, &s)| (strats[r].clone(), Value::String(strats[s].clone())))
                    .collect();
                (types[x].clone(), Value::Object(inner))
            })
            .collect();
        json!({"player": d.player, "gain": num(d.gain), "payoff": num(d.payoff), "mapping": mapping})
    });
    let mut text = format!("advice: {}\n", advice_kind(&advice));
    let mut t = Table::new(["player", "payoff", "best gain"]);
    for (i, (p, g)) in payoffs.iter().zip(&verdict.max_gains).enumerate() {
        t.row([(i + 1).to_string(), fmt_num(*p), fmt_num(*g)]);
    }
    text += &t.render();
    text += &format!(
        "no-signaling: {} (violation {})\n",
        violation <= tol,
        fmt_num(violation)
    );
    text += &format!(
        "advised equilibrium: {} ({} deviations checked)\n",
        if verdict.is_equilibrium { "yes" } else { "no" },
        verdict.deviations_checked
    );
    if let Some(d) = &verdict.best_deviation {
        text += &format!(
            "best deviation: player {} gains {}\n",
            d.player + 1,
            fmt_num(d.gain)
        );
    }
    Ok(Report {
        json: json!({
            "advice": advice_kind(&advice),
            "payoffs": nums(&payoffs),
            "no_signaling": violation <= tol,
            "signaling_violation": num(violation),
            "equilibrium": {
                "is_equilibrium": verdict.is_equilibrium,
                "max_gains": nums(&verdict.max_gains),
                "deviations_checked": count(verdict.deviations_checked),
                "best_deviation": deviation,
            },
        }),
        table: text,
    })
}

fn bound_json(
    file: &BayesGameFile,
    tol: f64,
    limit: u128,
) -> Res<(
    BayesianGame,
    qgame_core::bayes::BellExpression,
    f64,
    Value,
    String,
)> {
    let game = file.to_game()?;
    let expr = file.to_bell(&game)?;
    let cert = classical_bound(&expr, limit)?;
    let maximizer: Vec<Value> = cert
        .strategies
        .iter()
        .enumerate()
        .map(|(i, per_type)| {
            Value::Object(
                per_type
                    .iter()
                    .enumerate()
                    .map(|(x, &s)| {
                        (
                            game.type_labels()[i][x].clone(),
                            Value::String(game.strategy_labels()[i][s].clone()),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    let mut v = json!({
        "classical_bound": num(cert.value),
        "enumerated": count(cert.enumerated),
        "maximizer": maximizer,
    });
    let mut text = format!(
        "classical bound: {} ({} deterministic strategies)\n",
        fmt_num(cert.value),
        cert.enumerated
    );
    if let Some(b) = expr.bound() {
        let matches = (b - cert.value).abs() <= tol;
        v["declared_bound"] = num(b);
        v["matches_declared"] = Value::Bool(matches);
        text += &format!(
            "declared bound: {} ({})\n",
            fmt_num(b),
            if matches { "matches" } else { "differs" }
        );
    }
    Ok((game, expr, cert.value, v, text))
}

fn bell_bound(file: &BayesGameFile, tol: f64, limit: u128) -> Res<Report> {
    let (game, _, _, json, mut text) = bound_json(file, tol, limit)?;
    let mut t = Table::new(["player", "type", "strategy"]);
    if let Some(players) = json["maximizer"].as_array() {
        for (i, m) in players.iter().enumerate() {
            for x in &game.type_labels()[i] {
                t.row([
                    (i + 1).to_string(),
                    x.clone(),
                    m[x].as_str().unwrap_or("").to_string(),
                ]);
            }
        }
    }
    text += &t.render();
    Ok(Report { json, table: text })
}

fn bell_value(file: &BayesGameFile, tol: f64, limit: u128) -> Res<Report> {
    let (game, expr, bound, mut json, mut text) = bound_json(file, tol, limit)?;
    let advice = require_advice(file, &game)?;
    let value = expr.value(&advice.conditional()?)?;
    let exceeds = value > bound + tol;
    json["value"] = num(value);
    json["advice"] = Value::String(advice_kind(&advice).into());
    json["exceeds_classical_bound"] = Value::Bool(exceeds);
    if let Some(m) = json.as_object_mut() {
        m.remove("maximizer");
    }
    text = format!(
        "value under {} advice: {}\n",
        advice_kind(&advice),
        fmt_num(value)
    ) + &text;
    text += &format!(
        "exceeds classical bound: {}\n",
        if exceeds { "yes" } else { "no" }
    );
    Ok(Report { json, table: text })
}

fn ghz_dist(n: usize, phases: &[String]) -> Res<Report> {
    let radians = phases
        .iter()
        .map(|p| parse_angle(p.trim()).map_err(|e| Failure::Input(format!("phase `{p}`: {e}"))))
        .collect::<Res<Vec<f64>>>()?;
    let d = ghz_phase_distribution(n, &radians)?;
    let parity = parity_expectation(&d);
    let mut t = Table::new(["outcome", "probability"]);
    for (l, p) in d.iter() {
        t.row([l, fmt_num(p)]);
    }
    Ok(Report {
        json: json!({
            "n": n,
            "phases": nums(&radians),
            "distribution": distribution_json(&d),
            "parity_expectation": num(parity),
        }),
        table: t.render() + &format!("parity expectation: {}\n", fmt_num(parity)),
    })
}

fn mermin() -> Report {
    let r = mermin_inequivalence();
    let mut t = Table::new(["setting", "quantum parity"]);
    for (s, e) in r.settings.iter().zip(&r.quantum_expectations) {
        t.row([s.clone(), fmt_num(*e)]);
    }
    let text = t.render()
        + &format!(
            "product of quantum parities: {}\nlocal assignments reproducing them: {} of {}\nclassical product always +1: {}\nquantum and classical correlations inequivalent: {}\n",
            fmt_num(r.quantum_product),
            r.satisfying_assignments,
            r.assignments_checked,
            r.classical_product_always_positive,
            r.inequivalent
        );
    Report {
        json: json!({
            "settings": r.settings,
            "quantum_expectations": nums(&r.quantum_expectations),
            "quantum_product": num(r.quantum_product),
            "assignments_checked": r.assignments_checked,
            "satisfying_assignments": r.satisfying_assignments,
            "classical_product_always_positive": r.classical_product_always_positive,
            "inequivalent": r.inequivalent,
        }),
        table: text,
    }
}

fn diagram_source(d: &DiagramArg) -> Res<String> {
    match (&d.expr, &d.input) {
        (Some(e), None) => Ok(e.clone()),
        (None, Some(p)) => read(p),
        _ => Err(Failure::Input(
            "give a diagram expression or --input, not both".into(),
        )),
    }
}

fn observable(name: &str) -> Res<ObservableStructure> {
    ObservableStructure::named(name)
        .ok_or_else(|| Failure::Input(format!("unknown observable `{name}`")))
}

fn matrix_json(m: &LinearMap) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(complex_json).collect()))
            .collect(),
    )
}

fn diagram_eval(d: &DiagramArg) -> Res<Report> {
    let term = parse(&diagram_source(d)?).map_err(Error::from)?;
    let obs = observable(&d.observable)?;
    let map = evaluate(&term, &obs, &BoxEnv::qubit_gates())?;
    let mut v = json!({
        "input_dims": map.in_dims(),
        "output_dims": map.out_dims(),
        "matrix": matrix_json(&map),
    });
    let mut text = format!(
        "{} -> {} wires, {}x{} matrix\n",
        map.in_dims().len(),
        map.out_dims().len(),
        map.rows(),
        map.cols()
    );
    if let Some(state) = map.as_state() {
        let mut amps = Map::new();
        let mut t = Table::new(["basis", "amplitude"]);
        for (k, a) in state.amplitudes().iter().enumerate() {
            let label = qgame_core::tensor::index_label(state.dims(), k);
            if output::round12(a.norm()) != 0.0 {
                t.row([format!("|{label}>"), fmt_complex(a)]);
            }
            amps.insert(label, complex_json(a));
        }
        v["amplitudes"] = Value::Object(amps);
        text += &t.render();
    } else {
        for r in map.to_rows() {
            text += &r.iter().map(fmt_complex).collect::<Vec<_>>().join("  ");
            text.push('\n');
        }
    }
    Ok(Report {
        json: v,
        table: text,
    })
}

fn diagram_check(d: &DiagramArg) -> Res<Report> {
    let term = parse(&diagram_source(d)?).map_err(Error::from)?;
    let (inputs, outputs) = typecheck(&term, &BoxEnv::qubit_gates())?;
    let pretty = term.to_string();
    Ok(Report {
        json: json!({"well_typed": true, "inputs": inputs, "outputs": outputs, "term": pretty}),
        table: format!("{pretty}\nwell typed: {inputs} -> {outputs}\n"),
    })
}
