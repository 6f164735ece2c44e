//! Command-line front end. `run` does all the work and returns the exit
//! code with the report, so the binary is a thin wrapper.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{format_rational, serde_rational, Rational};
use crate::constructible::{MapFile, SpaceFile, StratMap, StratifiedSpace, StratumValue};
use crate::error::{Error, Result};
use crate::json;
use crate::mckay::{
    evaluate_mckay, verify_mckay, GroupLimits, LinearAction, McKay, McKayEvaluation, McKayReport,
    Verdict,
};
use crate::snc::{
    compare_resolutions, evaluate, stringy_euler, ComparisonReport, LogTerminalGate, SncDatum,
    SncEvaluation, SncFile,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "stringy",
    version,
    about = "Exact stringy invariants from resolution data and finite group actions"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Accept discrepancies below -1 (results are reported as not certified).
    #[arg(long, global = true)]
    allow_beyond_lt: bool,
    /// Largest group order for closure and subgroup enumeration.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Evaluate Φ, e_st and the motivic integral of an SNC datum.
    SncEval { file: PathBuf },
    /// Compare Φ and e_st of two resolutions of the same base.
    SncCompare { first: PathBuf, second: PathBuf },
    /// Evaluate Φ, e_st and the motivic McKay expression of a linear action.
    MckayEval { file: PathBuf },
    /// Check the McKay identities, optionally against a resolution.
    MckayVerify {
        file: PathBuf,
        #[arg(long)]
        snc: Option<PathBuf>,
    },
    /// Print the stringy Euler number.
    Euler {
        #[arg(long, conflicts_with = "action", required_unless_present = "action")]
        snc: Option<PathBuf>,
        #[arg(long)]
        action: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub verb: String,
    pub inputs: Vec<String>,
    pub allow_beyond_lt: bool,
    pub cap: u64,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerResult {
    pub source: String,
    #[serde(with = "serde_rational")]
    pub e_st: Rational,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub e_orbifold: Option<Rational>,
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(q) => serde_rational::serialize(q, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "serde_rational")] Rational);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Outcome {
    SncEval(SncEvaluation),
    SncCompare(ComparisonReport),
    MckayEval(Box<McKayEvaluation>),
    MckayVerify(Box<McKayReport>),
    Euler(EulerResult),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Outcome>,
    pub warnings: Vec<String>,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub exit_code: i32,
}

impl Report {
    fn new(command: Option<CommandEcho>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            result: None,
            warnings: Vec::new(),
            verdicts: Vec::new(),
            error: None,
            exit_code: EXIT_OK,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// What `run` produced: exit code, report, and the rendered output.
#[derive(Clone, Debug)]
pub struct Run {
    pub exit_code: i32,
    pub report: Report,
    pub output: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    Space,
    Map,
    Snc,
    Action,
}

#[derive(Clone, Debug)]
pub enum Input {
    Space(StratifiedSpace),
    Map(StratMap),
    Snc(SncDatum),
    Action(LinearAction),
}

pub fn parse_text(text: &str, kind: InputKind) -> Result<Input> {
    Ok(match kind {
        InputKind::Space => Input::Space(StratifiedSpace::try_from(json::from_str::<SpaceFile>(
            text,
        )?)?),
        InputKind::Map => Input::Map(StratMap::try_from(json::from_str::<MapFile>(text)?)?),
        InputKind::Snc => Input::Snc(SncDatum::try_from(json::from_str::<SncFile>(text)?)?),
        InputKind::Action => Input::Action(LinearAction::from_json(text)?),
    })
}

pub fn parse_input(path: &Path, kind: InputKind) -> Result<Input> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_text(&text, kind).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn read_snc(path: &Path) -> Result<SncDatum> {
    match parse_input(path, InputKind::Snc)? {
        Input::Snc(d) => Ok(d),
        _ => unreachable!("parse_input returns the requested kind"),
    }
}

fn read_action(path: &Path) -> Result<LinearAction> {
    match parse_input(path, InputKind::Action)? {
        Input::Action(a) => Ok(a),
        _ => unreachable!("parse_input returns the requested kind"),
    }
}

fn echo(cli: &Cli) -> CommandEcho {
    let show = |p: &PathBuf| p.display().to_string();
    let (verb, inputs) = match &cli.verb {
        Verb::SncEval { file } => ("snc-eval", vec![show(file)]),
        Verb::SncCompare { first, second } => ("snc-compare", vec![show(first), show(second)]),
        Verb::MckayEval { file } => ("mckay-eval", vec![show(file)]),
        Verb::MckayVerify { file, snc } => {
            let mut v = vec![show(file)];
            v.extend(snc.iter().map(show));
            ("mckay-verify", v)
        }
        Verb::Euler { snc, action } => ("euler", snc.iter().chain(action).map(show).collect()),
    };
    CommandEcho {
        verb: verb.to_string(),
        inputs,
        allow_beyond_lt: cli.allow_beyond_lt,
        cap: cli.cap,
        format: cli.format,
    }
}

fn verdict(name: &str, pass: bool) -> Verdict {
    Verdict {
        name: name.to_string(),
        pass,
    }
}

fn execute(cli: &Cli, report: &mut Report) -> Result<()> {
    let gate = if cli.allow_beyond_lt {
        LogTerminalGate::AllowBeyond
    } else {
        LogTerminalGate::Required
    };
    let limits = GroupLimits::uniform(usize::try_from(cli.cap).unwrap_or(usize::MAX));
    match &cli.verb {
        Verb::SncEval { file } => {
            let d = read_snc(file)?;
            let ev = evaluate(&d, gate)?;
            report.warnings.extend(ev.warnings.iter().cloned());
            report.verdicts.push(verdict(
                "motivic and pushforward routes agree",
                ev.routes_agree,
            ));
            report.result = Some(Outcome::SncEval(ev));
        }
        Verb::SncCompare { first, second } => {
            let cmp = compare_resolutions(&read_snc(first)?, &read_snc(second)?, gate)?;
            report.warnings.extend(cmp.warnings.iter().cloned());
            report.verdicts.push(verdict(
                "Phi agrees on every stratum",
                cmp.strata.iter().all(|s| s.equal),
            ));
            report
                .verdicts
                .push(verdict("e_st agrees", cmp.euler_equal));
            report.result = Some(Outcome::SncCompare(cmp));
        }
        Verb::MckayEval { file } => {
            let mk = McKay::from_action(&read_action(file)?, limits)?;
            report.result = Some(Outcome::MckayEval(Box::new(evaluate_mckay(&mk)?)));
        }
        Verb::MckayVerify { file, snc } => {
            let mk = McKay::from_action(&read_action(file)?, limits)?;
            let d = snc.as_deref().map(read_snc).transpose()?;
            if let Some(d) = &d {
                report.warnings.extend(d.validate(gate)?.warnings);
            }
            let r = verify_mckay(&mk, d.as_ref(), gate)?;
            report.verdicts.extend(r.verdicts.iter().cloned());
            report.result = Some(Outcome::MckayVerify(Box::new(r)));
        }
        Verb::Euler { snc, action } => {
            let result = if let Some(path) = snc {
                let d = read_snc(path)?;
                report.warnings.extend(d.validate(gate)?.warnings);
                EulerResult {
                    source: "snc".into(),
                    e_st: stringy_euler(&d, gate)?,
                    e_orbifold: None,
                }
            } else {
                let path = action.as_ref().expect("clap requires --snc or --action");
                let mk = McKay::from_action(&read_action(path)?, limits)?;
                let e_st = mk.phi_first()?.integral();
                let e_orb = mk.orbifold_euler();
                report
                    .verdicts
                    .push(verdict("integral of Phi = e(M,G)", e_st == e_orb));
                EulerResult {
                    source: "action".into(),
                    e_st,
                    e_orbifold: Some(e_orb),
                }
            };
            report.result = Some(Outcome::Euler(result));
        }
    }
    Ok(())
}

pub fn run<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Run {
                    exit_code: EXIT_OK,
                    report: Report::new(None),
                    output: text,
                };
            }
            let mut report = Report::new(None);
            report.error = Some(ErrorInfo {
                kind: "Usage".into(),
                message: text.trim_end().to_string(),
            });
            report.exit_code = EXIT_INPUT;
            return Run {
                exit_code: EXIT_INPUT,
                output: text,
                report,
            };
        }
    };
    let mut report = Report::new(Some(echo(&cli)));
    if let Err(e) = execute(&cli, &mut report) {
        report.error = Some(ErrorInfo {
            kind: e.kind().to_string(),
            message: e.to_string(),
        });
        report.exit_code = EXIT_INPUT;
    } else if report.verdicts.iter().any(|v| !v.pass) {
        report.exit_code = EXIT_VERDICT;
    }
    let output = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => render_text(&report),
    };
    Run {
        exit_code: report.exit_code,
        report,
        output,
    }
}

fn fmt_values(out: &mut String, title: &str, values: &[StratumValue]) {
    let _ = writeln!(out, "{title}:");
    for v in values {
        let _ = writeln!(out, "  {} -> {}", v.stratum, format_rational(&v.value));
    }
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    if let Some(err) = &report.error {
        let _ = writeln!(out, "error [{}]: {}", err.kind, err.message);
        return out;
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    match &report.result {
        None => {}
        Some(Outcome::Euler(r)) => {
            let _ = writeln!(out, "e_st = {}", format_rational(&r.e_st));
            if let Some(e) = &r.e_orbifold {
                let _ = writeln!(out, "e(M,G) = {}", format_rational(e));
            }
        }
        Some(Outcome::SncEval(ev)) => {
            fmt_values(&mut out, "Phi", &ev.phi);
            let _ = writeln!(out, "e_st = {}", format_rational(&ev.e_st));
            let _ = writeln!(out, "root r = {}", ev.root);
            if let Some(m) = &ev.motivic {
                match crate::motivic::MotivicExpr::try_from(m) {
                    Ok(expr) => {
                        let _ = writeln!(out, "motivic integral = {expr}");
                    }
                    Err(_) => {
                        let _ = writeln!(out, "motivic integral: {} terms", m.terms.len());
                    }
                }
            }
        }
        Some(Outcome::SncCompare(c)) => {
            let _ = writeln!(
                out,
                "Phi (first | second), representative equality per stratum:"
            );
            for s in &c.strata {
                let _ = writeln!(
                    out,
                    "  {} -> {} | {}  {}",
                    s.stratum,
                    format_rational(&s.first),
                    format_rational(&s.second),
                    if s.equal { "equal" } else { "DIFFERENT" }
                );
            }
            let _ = writeln!(
                out,
                "e_st = {} | {}",
                format_rational(&c.e_st_first),
                format_rational(&c.e_st_second)
            );
        }
        Some(Outcome::MckayEval(ev)) => {
            let _ = writeln!(
                out,
                "|G| = {} acting on C^{} (entries in Q(zeta_{}))",
                ev.group_order, ev.n, ev.m
            );
            write_classes(&mut out, &ev.classes);
            write_strata(&mut out, &ev.strata);
            fmt_values(&mut out, "Phi", &ev.phi);
            let _ = writeln!(out, "e_st = {}", format_rational(&ev.e_st));
            let _ = writeln!(out, "e(M,G) = {}", format_rational(&ev.e_orbifold));
            if let Ok(expr) = crate::motivic::MotivicExpr::try_from(&ev.motivic) {
                let _ = writeln!(out, "motivic McKay = {expr}");
            }
        }
        Some(Outcome::MckayVerify(r)) => {
            let _ = writeln!(
                out,
                "|G| = {} acting on C^{} (entries in Q(zeta_{}))",
                r.group_order, r.n, r.m
            );
            write_classes(&mut out, &r.classes);
            write_strata(&mut out, &r.strata);
            fmt_values(&mut out, "Phi by stabilizer class numbers", &r.phi_first);
            fmt_values(&mut out, "Phi by inertia pushforwards", &r.phi_second);
            let _ = writeln!(out, "e_st = {}", format_rational(&r.e_st));
            let _ = writeln!(out, "e(M,G) = {}", format_rational(&r.e_orbifold));
            if let Some(s) = &r.snc {
                let _ = writeln!(out, "resolution e_st = {}", format_rational(&s.e_st));
            }
        }
    }
    if !report.verdicts.is_empty() {
        let _ = writeln!(out, "verdicts:");
        for v in &report.verdicts {
            let _ = writeln!(
                out,
                "  [{}] {}",
                if v.pass { "pass" } else { "FAIL" },
                v.name
            );
        }
    }
    out
}

fn write_classes(out: &mut String, classes: &[crate::mckay::ClassRow]) {
    let _ = writeln!(out, "conjugacy classes ({}):", classes.len());
    let _ = writeln!(out, "  rep  size  order  age  dim Fix  |C(g)|");
    for c in classes {
        let _ = writeln!(
            out,
            "  {:>3}  {:>4}  {:>5}  {:>3}  {:>7}  {:>6}",
            c.representative,
            c.size,
            c.order,
            format_rational(&c.age),
            c.fixed_dim,
            c.centralizer_order
        );
    }
}

fn write_strata(out: &mut String, strata: &[crate::mckay::StratumRow]) {
    let _ = writeln!(out, "stabilizer strata:");
    for s in strata {
        let _ = writeln!(
            out,
            "  {}{}: |H| = {}, |N_H| = {}, dim = {}, chi_c = {}, classes of H = {}",
            s.id,
            s.label
                .as_ref()
                .map(|l| format!(" ({l})"))
                .unwrap_or_default(),
            s.stabilizer_order,
            s.normalizer_order,
            s.fixed_dim,
            s.chi_c,
            s.stabilizer_classes
        );
    }
}
