//! The `ordgram` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::components::compute_components;
use crate::error::Error;
use crate::grammar::{Grammar, SForm, Symbol};
use crate::langops::{sup, SupInfo};
use crate::normalize::{to_normal_form, Normalized};
use crate::oracle::{validate, ENUMERATION_BUDGET};
use crate::solver::{analyze, Case, Limits};
use crate::words::UpWord;

#[derive(Parser, Debug)]
#[command(name = "ordgram", version, about = "Order types of ordinal grammars")]
pub struct Cli {
    /// Iteration budget for the start-symbol splitting procedure.
    #[arg(long, global = true, default_value_t = Limits::default().step_budget)]
    step_budget: usize,
    /// Recursion depth cap for the start-symbol splitting procedure.
    #[arg(long, global = true, default_value_t = Limits::default().depth_cap)]
    depth_cap: usize,
    /// Print only the result artifact.
    #[arg(long, global = true)]
    quiet: bool,
    /// Emit one JSON record instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the order type of the generated language in Cantor normal form.
    OrderType { file: PathBuf },
    /// Print the grammar in normal form.
    Normalize { file: PathBuf },
    /// Print components, periodic words and per-nonterminal order types.
    Analyze { file: PathBuf },
    /// Print the lexicographic supremum of a nonterminal's language.
    Sup { file: PathBuf, symbol: String },
    /// Exit 0 when both grammars have the same order type, 1 otherwise.
    Iso { first: PathBuf, second: PathBuf },
    /// Bounded checks of prefix-freeness and well-ordering.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Grammar(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Grammar(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the command line, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(err, "error[IoError]: {}: {e}", path.display());
            2
        }
        Err(Failure::Grammar(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.class());
            2
        }
    }
}

fn load(path: &Path) -> std::result::Result<Grammar, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    Ok(Grammar::parse(&text)?)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let limits = Limits {
        step_budget: cli.step_budget,
        depth_cap: cli.depth_cap,
        ..Limits::default()
    };
    let mut emit = |line: String| {
        let _ = writeln!(out, "{line}");
    };
    match &cli.command {
        Command::OrderType { file } => {
            let g = load(file)?;
            let o = analyze(&g, limits)?.order_type.to_text();
            emit(if cli.json {
                json!({ "order_type": o }).to_string()
            } else {
                o
            });
            Ok(0)
        }
        Command::Normalize { file } => {
            let g = load(file)?;
            let n = to_normal_form(&g, limits.substitution_budget)?.to_grammar(&g);
            let text = n.to_text();
            emit(if cli.json {
                json!({ "grammar": text }).to_string()
            } else {
                text.trim_end().to_string()
            });
            Ok(0)
        }
        Command::Analyze { file } => {
            let g = load(file)?;
            let a = analyze(&g, limits)?;
            let mut lines = vec![format!("order type: {}", a.order_type)];
            let mut records = Vec::new();
            match (&a.normalized, &a.solved) {
                (Normalized::Empty, _) => lines.push("language: empty".into()),
                (Normalized::Finite(ws), _) => {
                    lines.push(format!("language: finite, {} words", ws.len()))
                }
                (Normalized::Grammar(_), Some(s)) => {
                    let ng = &s.grammar;
                    let t = &s.components;
                    for c in t.bottom_up() {
                        let names: Vec<&str> = t.members(c).iter().map(|&x| ng.name(x)).collect();
                        let mut line = format!(
                            "component {{{}}} height {}",
                            names.join(", "),
                            t.component_height(c)
                        );
                        let sol = s.types.component(c);
                        if let Some(sol) = sol {
                            let case = match sol.case {
                                Case::Power => "power",
                                Case::Beta => "beta",
                                Case::BetaOmega => "beta-omega",
                            };
                            line += &format!(
                                " recursive o_alpha={} o_beta={} case={case}",
                                sol.o_alpha, sol.o_beta
                            );
                        }
                        lines.push(line);
                        for &x in t.members(c) {
                            let o = s.types.get(Symbol::N(x)).expect("solved");
                            let u = t.u(x).map(|u| ng.alphabet().render(u));
                            let mut l = format!("  {} = {o}", ng.name(x));
                            if let Some(u) = &u {
                                l += &format!("  u = {u}");
                            }
                            lines.push(l);
                            records.push(json!({
                                "nonterminal": ng.name(x),
                                "component": names,
                                "height": t.component_height(c),
                                "recursive": t.is_recursive(x),
                                "u": u,
                                "order_type": o.to_text(),
                            }));
                        }
                    }
                }
                (Normalized::Grammar(_), None) => {
                    unreachable!("infinite language is always solved")
                }
            }
            if cli.json {
                emit(
                    json!({ "order_type": a.order_type.to_text(), "nonterminals": records })
                        .to_string(),
                );
            } else if cli.quiet {
                emit(a.order_type.to_text());
            } else {
                lines.into_iter().for_each(&mut emit);
            }
            Ok(0)
        }
        Command::Sup { file, symbol } => {
            let g = load(file)?;
            let info = sup_of_symbol(&g, symbol, limits)?;
            let value = info.value.render(g.alphabet());
            emit(if cli.json {
                json!({ "symbol": symbol, "sup": value, "attained": info.attained }).to_string()
            } else if cli.quiet {
                value
            } else {
                info.render(g.alphabet())
            });
            Ok(0)
        }
        Command::Iso { first, second } => {
            let (g1, g2) = (load(first)?, load(second)?);
            let o1 = analyze(&g1, limits)?.order_type;
            let o2 = analyze(&g2, limits)?.order_type;
            let same = o1 == o2;
            if cli.json {
                emit(
                    json!({ "isomorphic": same, "first": o1.to_text(), "second": o2.to_text() })
                        .to_string(),
                );
            } else if !cli.quiet {
                emit(if same { "isomorphic" } else { "not isomorphic" }.to_string());
            }
            Ok(if same { 0 } else { 1 })
        }
        Command::Validate { file, max_len } => {
            let g = load(file)?;
            let report = validate(&g, *max_len, ENUMERATION_BUDGET)?;
            if cli.json {
                for f in &report.findings {
                    emit(serde_json::to_string(f).expect("serializable"));
                }
            } else if !cli.quiet {
                for f in &report.findings {
                    emit(f.to_string());
                }
                if let Some(n) = report.finite_count {
                    emit(format!("finite language: {n} words"));
                }
                if report.is_clean() {
                    emit(format!("no findings up to length {max_len}"));
                }
            }
            Ok(if report.is_clean() { 0 } else { 1 })
        }
    }
}

/// Supremum of `L(symbol)`, computed on the normal form of the grammar
/// restarted at `symbol`.
fn sup_of_symbol(g: &Grammar, symbol: &str, limits: Limits) -> crate::Result<SupInfo> {
    let x = g.lookup(symbol).ok_or_else(|| Error::UndeclaredSymbol {
        line: 0,
        symbol: symbol.to_string(),
    })?;
    let h = Grammar::new(
        g.alphabet().clone(),
        g.names().to_vec(),
        g.rules().to_vec(),
        x,
    );
    match to_normal_form(&h, limits.substitution_budget)? {
        Normalized::Empty => Err(Error::Unproductive(symbol.to_string())),
        Normalized::Finite(ws) => Ok(SupInfo {
            value: UpWord::finite(ws.last().expect("nonempty").clone()),
            attained: true,
        }),
        Normalized::Grammar(ng) => {
            let t = compute_components(&ng)?;
            sup(&ng, &t, &SForm(vec![Symbol::N(ng.start())]))
        }
    }
}
