mod curve_file;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use ewtree_core::inversion::{invert, invert_general};
use ewtree_core::puiseux::intersection_oracle;
use ewtree_core::splice::{splice_via_generic, to_splice};
use ewtree_core::valuation::{coordinates, eval_point};
use ewtree_core::{BranchRecord, Divisor, Error, Ext, EwTree, Observer, SpliceDiagram, TreePoint};
use serde_json::{json, Value};

use crate::curve_file::CurveFile;

/// Eggers-Wall trees, intersection numbers, re-rooting, splice diagrams and
/// valuative coordinates of plane curve singularities.
#[derive(Parser)]
#[command(name = "ewtree", version)]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Also write a Graphviz rendering to this path (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The Eggers-Wall tree relative to L.
    Tree {
        file: PathBuf,
        /// Make the attaching point of a generic line a vertex.
        #[arg(long)]
        mark_unit: bool,
    },
    /// Intersection numbers read off the tree.
    Intersect {
        file: PathBuf,
        a: Option<String>,
        b: Option<String>,
        /// Every pair of branches.
        #[arg(long)]
        all: bool,
        /// Add the value computed directly from the series.
        #[arg(long)]
        oracle: bool,
    },
    /// Re-root the tree at another smooth branch.
    Invert {
        file: PathBuf,
        new_root: String,
        #[arg(long)]
        mark_unit: bool,
    },
    /// Splice diagram of the curve together with L.
    Splice {
        file: PathBuf,
        /// Go through a generic transversal line even if L is transversal.
        #[arg(long)]
        via_generic: bool,
    },
    /// Linking number of two components in the splice diagram.
    Link {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        via_generic: bool,
    },
    /// Value of the semivaluation at POINT on a divisor such as `2*C1 + C5`.
    Eval { file: PathBuf, point: String, divisor: String },
    /// Log-discrepancy, self-interaction and multiplicity at POINT.
    Coords {
        file: PathBuf,
        point: String,
        /// `L`, `O`, or the name of a smooth branch.
        #[arg(long, default_value = "L")]
        observer: String,
    },
    /// Retract POINT onto the tree of the comma-separated SUBCURVE.
    Retract { file: PathBuf, subcurve: String, point: String },
}

enum Failure {
    Parse(String),
    Usage(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Usage(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::EmptyCurve => Failure::Parse(e.to_string()),
            Error::UnknownBranch(_) | Error::PointNotInTree(_) => Failure::Usage(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

struct Loaded {
    path: String,
    file: CurveFile,
}

impl Loaded {
    fn read(path: &Path) -> Outcome<Self> {
        let text = if path == Path::new("-") {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(path)
        }
        .map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))?;
        let display = path.display().to_string();
        let file = CurveFile::parse(&text).map_err(|e| Failure::Parse(format!("{}:{}", display, e)))?;
        Ok(Loaded { path: display, file })
    }

    /// Builds from the records, pinning a duplicate-branch error to its line.
    fn build(&self, records: Vec<BranchRecord>, include_l: bool) -> Outcome<EwTree> {
        EwTree::build_with_l(records, include_l).map_err(|e| match e {
            Error::DuplicateBranch(ref first, ref second) => {
                let line = self.file.line_of(second).unwrap_or(0);
                Failure::Parse(format!(
                    "{}:{}:1: duplicate branch: {} is a conjugate of {} (line {})",
                    self.path,
                    line,
                    second,
                    first,
                    self.file.line_of(first).unwrap_or(0)
                ))
            }
            e => e.into(),
        })
    }

    fn tree(&self) -> Outcome<EwTree> {
        self.build(self.file.records(), self.file.has_l())
    }

    fn tree_with_l(&self) -> Outcome<EwTree> {
        self.build(self.file.records(), true)
    }
}

fn branch_id(t: &EwTree, name: &str) -> Outcome<usize> {
    t.branch_id(name).map_err(|_| Failure::Usage(format!("unknown branch {}", name)))
}

/// `name@p/q`, `name@inf`, or a bare name for the leaf.
fn parse_point(t: &EwTree, text: &str) -> Outcome<TreePoint> {
    let (name, exponent) = match text.split_once('@') {
        Some((n, e)) => {
            let e = Ext::from_str(e.trim()).map_err(|_| Failure::Usage(format!("bad exponent in point `{}`", text)))?;
            (n.trim(), e)
        }
        None => (text.trim(), Ext::Infinite),
    };
    let id = branch_id(t, name)?;
    let exponent = if id == t.root_label() && exponent.is_infinite() { Ext::zero() } else { exponent };
    let p = TreePoint::new(id, exponent);
    t.locate(&p)?;
    Ok(p)
}

fn parse_divisor(loaded: &Loaded, t: &EwTree, text: &str) -> Outcome<Divisor> {
    let mut terms = Vec::new();
    for part in text.split('+') {
        let part = part.trim();
        let (mult, name) = match part.split_once('*') {
            Some((m, n)) => {
                let m: u64 = m.trim().parse().map_err(|_| Failure::Usage(format!("bad multiplicity in `{}`", part)))?;
                (m, n.trim())
            }
            None => (1, part),
        };
        let record = match loaded.file.record(name) {
            Some(r) => r.clone(),
            None if name == t.branch(t.root_label()).name() => BranchRecord::reference(name),
            None => return Err(Failure::Usage(format!("unknown branch {}", name))),
        };
        terms.push((record, mult));
    }
    Ok(Divisor::new(terms)?)
}

fn parse_observer(t: &EwTree, text: &str) -> Outcome<Observer> {
    match t.branch_id(text) {
        Ok(id) if id == t.root_label() => Ok(Observer::L),
        Ok(id) => Ok(Observer::Leaf(id)),
        Err(_) if text == "O" => Ok(Observer::Origin),
        Err(_) => Err(Failure::Usage(format!("unknown observer {}", text))),
    }
}

fn diagram(loaded: &Loaded, via_generic: bool) -> Outcome<(SpliceDiagram, &'static str)> {
    if !via_generic {
        match to_splice(&loaded.tree_with_l()?) {
            Ok(d) => return Ok((d, "direct")),
            Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok((splice_via_generic(&loaded.file.records())?, "generic"))
}

struct Report {
    json: Value,
    text: String,
    dot: Option<String>,
}

fn intersection_entry(t: &EwTree, a: usize, b: usize, oracle: bool) -> Outcome<(Value, String)> {
    let value = t.intersection(a, b)?;
    let (na, nb) = (t.branch(a).name(), t.branch(b).name());
    let mut entry = json!({"pair": [na, nb], "value": value.to_string()});
    let mut text = format!("({}·{}) = {}", na, nb, value);
    if a == b {
        entry["note"] = json!("same branch");
        text.push_str(" (same branch)");
    }
    if oracle {
        let direct = intersection_oracle(t.branch(a), t.branch(b));
        entry["oracle"] = json!(direct.to_string());
        entry["agree"] = json!(direct == value);
        text.push_str(&format!("  oracle {}{}", direct, if direct == value { "" } else { "  MISMATCH" }));
    }
    Ok((entry, text))
}

fn run(command: Command) -> Outcome<Report> {
    match command {
        Command::Tree { file, mark_unit } => {
            let loaded = Loaded::read(&file)?;
            let mut t = loaded.tree()?;
            if mark_unit {
                t = t.mark(&t.unit_point()?)?;
            }
            Ok(Report { json: render::tree_json(&t), text: t.to_string(), dot: Some(render::tree_dot(&t)) })
        }
        Command::Intersect { file, a, b, all, oracle } => {
            let loaded = Loaded::read(&file)?;
            let t = loaded.tree()?;
            let pairs: Vec<(usize, usize)> = match (a, b, all) {
                (None, None, true) => {
                    let ids: Vec<usize> = (0..loaded.file.entries.len()).collect();
                    ids.iter().flat_map(|&i| ids.iter().filter(move |&&j| j > i).map(move |&j| (i, j))).collect()
                }
                (Some(a), Some(b), false) => vec![(branch_id(&t, &a)?, branch_id(&t, &b)?)],
                _ => return Err(Failure::Usage("give two branch names or --all".into())),
            };
            let mut entries = Vec::new();
            let mut lines = Vec::new();
            for (i, j) in pairs {
                let (e, l) = intersection_entry(&t, i, j, oracle)?;
                entries.push(e);
                lines.push(l);
            }
            let json = if entries.len() == 1 && !all { entries.remove(0) } else { json!({ "pairs": entries }) };
            Ok(Report { json, text: lines.join("\n") + "\n", dot: None })
        }
        Command::Invert { file, new_root, mark_unit } => {
            let loaded = Loaded::read(&file)?;
            let record = loaded
                .file
                .record(&new_root)
                .ok_or_else(|| Failure::Usage(format!("unknown branch {}", new_root)))?
                .clone();
            let inv = if loaded.file.has_l() || mark_unit {
                let mut t = loaded.tree_with_l()?;
                if mark_unit {
                    t = t.mark(&t.unit_point()?)?;
                }
                let inv = invert(&t, branch_id(&t, &new_root)?)?;
                if loaded.file.has_l() {
                    inv
                } else {
                    let keep: Vec<usize> = (0..t.branches().len()).filter(|&i| i != t.root_label()).collect();
                    inv.restrict(&keep)?
                }
            } else {
                invert_general(&loaded.file.records(), &record)?
            };
            Ok(Report { json: render::tree_json(&inv), text: inv.to_string(), dot: Some(render::tree_dot(&inv)) })
        }
        Command::Splice { file, via_generic } => {
            let loaded = Loaded::read(&file)?;
            let (d, route) = diagram(&loaded, via_generic)?;
            let mut json = render::splice_json(&d);
            json["route"] = json!(route);
            Ok(Report { json, text: render::splice_text(&d), dot: Some(render::splice_dot(&d)) })
        }
        Command::Link { file, a, b, via_generic } => {
            let loaded = Loaded::read(&file)?;
            let (d, route) = diagram(&loaded, via_generic)?;
            let value = d.linking(&a, &b)?;
            Ok(Report {
                json: json!({"pair": [a, b], "linking": value.to_string(), "route": route}),
                text: format!("lk({}, {}) = {}\n", a, b, value),
                dot: Some(render::splice_dot(&d)),
            })
        }
        Command::Eval { file, point, divisor } => {
            let loaded = Loaded::read(&file)?;
            let t = loaded.tree()?;
            let p = parse_point(&t, &point)?;
            let d = parse_divisor(&loaded, &t, &divisor)?;
            let value = eval_point(&t, &p, &d)?;
            let at = t.describe(&t.canonical(&p)?);
            Ok(Report {
                json: json!({"point": at, "divisor": divisor, "value": value.to_string()}),
                text: format!("ν_{}({}) = {}\n", at, divisor, value),
                dot: None,
            })
        }
        Command::Coords { file, point, observer } => {
            let loaded = Loaded::read(&file)?;
            let t = loaded.tree()?;
            let p = parse_point(&t, &point)?;
            let r = parse_observer(&t, &observer)?;
            let c = coordinates(&t, &p, r)?;
            let at = t.describe(&t.canonical(&p)?);
            Ok(Report {
                json: json!({"point": at, "observer": observer, "l": c.l.to_string(), "s": c.s.to_string(), "m": c.m.to_string()}),
                text: format!("{} relative to {}: l = {}, s = {}, m = {}\n", at, observer, c.l, c.s, c.m),
                dot: None,
            })
        }
        Command::Retract { file, subcurve, point } => {
            let loaded = Loaded::read(&file)?;
            let big = loaded.tree()?;
            let mut records = Vec::new();
            for name in subcurve.split(',').map(str::trim) {
                let r = loaded.file.record(name).ok_or_else(|| Failure::Usage(format!("unknown branch {}", name)))?;
                records.push(r.clone());
            }
            let small = loaded.build(records, loaded.file.has_l())?;
            let p = parse_point(&big, &point)?;
            let r = EwTree::retraction(&big, &small, &p)?;
            let (from, to) = (big.describe(&big.canonical(&p)?), small.describe(&r));
            Ok(Report {
                json: json!({"point": from, "retraction": to, "exponent": r.exponent.to_string()}),
                text: format!("{} -> {}\n", from, to),
                dot: None,
            })
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                emit(&(serde_json::to_string_pretty(&report.json).expect("serializable") + "\n"));
            } else {
                emit(&report.text);
            }
            if let Some(path) = cli.dot {
                let Some(dot) = report.dot else {
                    eprintln!("error: this command has no DOT rendering");
                    return ExitCode::from(2);
                };
                if path == Path::new("-") {
                    emit(&dot);
                } else if let Err(e) = std::fs::write(&path, dot) {
                    eprintln!("error: {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
