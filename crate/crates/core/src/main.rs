use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use boolax::decision::{parity_decide, z2_decide};
use boolax::enumeration::{canonical_candidates, count_report, CandidateSpec, SymmetryConvention};
use boolax::fixtures::FIXTURE_FILE;
use boolax::models::{find_models, ModelQuery, SearchMode};
use boolax::pipeline::{classify, run_batch, ClassifyConfig};
use boolax::prover::pterm::unskolemize;
use boolax::prover::{axiom_terms, derive, goal_terms, Limits, PTerm, Strategy, TermOrdering};
use boolax::term::{
    parse_formula_file, parse_identity, write_formula_file, Identity, TaggedFormula,
};

#[derive(Parser)]
#[command(
    name = "boolax",
    version,
    about = "Boolean-group identities: decide, enumerate, find models, prove"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an identity holds in all Boolean groups.
    Check { identity: String },
    /// Count candidate identities and list the canonical ones.
    Enumerate {
        /// Identify mirror images.
        #[arg(long)]
        mirror: bool,
        /// Identify candidates that differ by renaming y and z.
        #[arg(long)]
        swap: bool,
        /// Print only the counts.
        #[arg(long)]
        counts_only: bool,
    },
    /// Search for finite models with e = 0.
    Models {
        identity: String,
        #[arg(long)]
        size: usize,
        #[arg(long, conflicts_with = "count")]
        all: bool,
        #[arg(long)]
        count: bool,
        /// Print tables as JSON, one per line.
        #[arg(long)]
        json: bool,
        /// Prune tables that differ only by renaming elements.
        #[arg(long)]
        least_number: bool,
    },
    /// Prove goals from axioms by ordered completion.
    Prove {
        /// Formula file with the axioms.
        #[arg(long)]
        axioms: PathBuf,
        /// Formula file with the goals.
        #[arg(long)]
        goals: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        /// Print the proof trace.
        #[arg(long)]
        trace: bool,
    },
    /// Classify one identity and print the result as JSON.
    Classify {
        identity: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Classify every formula of a file.
    Batch {
        file: PathBuf,
        #[arg(long, conflicts_with = "tsv")]
        json: bool,
        #[arg(long)]
        tsv: bool,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Print the embedded formulas in the file format.
    Fixtures,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Kbo,
    Lpo,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, value_enum, default_value = "kbo")]
    ordering: OrderingArg,
    /// Wall-clock limit for one prover run.
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Limit on equations taken from the passive queue.
    #[arg(long)]
    max_processed: Option<u64>,
    /// Equations with a larger side are dropped.
    #[arg(long)]
    max_term_size: Option<u32>,
}

impl LimitArgs {
    fn strategy(&self, base: Strategy) -> Strategy {
        let mut s = match self.ordering {
            OrderingArg::Kbo => base,
            OrderingArg::Lpo => Strategy {
                name: "lpo",
                ordering: TermOrdering::LPO,
                ..base
            },
        };
        let Limits {
            max_seconds,
            max_processed,
            max_term_size,
        } = s.limits;
        s.limits = Limits {
            max_seconds: self.max_seconds.unwrap_or(max_seconds),
            max_processed: self.max_processed.unwrap_or(max_processed),
            max_term_size: self.max_term_size.unwrap_or(max_term_size),
        };
        s
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn identity(s: &str) -> Result<Identity, Failure> {
    parse_identity(s).map_err(|e| usage(format!("cannot parse {s:?}: {e}")))
}

fn read_formulas(path: &Path) -> Result<Vec<TaggedFormula>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (entries, errors) = parse_formula_file(&text);
    if let Some(e) = errors.first() {
        return Err(usage(format!(
            "{}:{}: {}",
            path.display(),
            e.line,
            e.message
        )));
    }
    Ok(entries.into_iter().map(|e| e.formula).collect())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli, out: &mut String) -> Result<(), Failure> {
    match cli.command {
        Command::Check { identity: s } => {
            let id = identity(&s)?;
            let parity = parity_decide(&id);
            let z2 = z2_decide(&id).map_err(usage)?;
            let _ = writeln!(out, "identity: {id}");
            let _ = writeln!(out, "parity: {}", yes_no(parity));
            match &z2.witness {
                None => {
                    let _ = writeln!(out, "z2: {}", yes_no(z2.is_theorem));
                }
                Some(w) => {
                    let w: Vec<String> = w.iter().map(|(v, b)| format!("{v}={b}")).collect();
                    let _ = writeln!(
                        out,
                        "z2: {} (witness {})",
                        yes_no(z2.is_theorem),
                        w.join(" ")
                    );
                }
            }
            if parity != z2.is_theorem {
                return Err(Failure::Internal(
                    "parity and Z2 evaluation disagree".into(),
                ));
            }
            let _ = writeln!(out, "theorem: {}", yes_no(parity));
        }
        Command::Enumerate {
            mirror,
            swap,
            counts_only,
        } => {
            let spec = CandidateSpec::default();
            let report = count_report(&spec).map_err(usage)?;
            let _ = write!(out, "{}", report.render());
            if !counts_only {
                let conv = SymmetryConvention {
                    mirror,
                    variable_swap: swap,
                };
                let list = canonical_candidates(&spec, conv).map_err(usage)?;
                let _ = writeln!(
                    out,
                    "# listing {} candidates under {}",
                    list.len(),
                    conv.label()
                );
                let tagged: Vec<TaggedFormula> = list
                    .into_iter()
                    .enumerate()
                    .map(|(i, identity)| TaggedFormula {
                        tag: format!("c{}", i + 1),
                        identity,
                    })
                    .collect();
                let _ = write!(out, "{}", write_formula_file(&tagged));
            }
        }
        Command::Models {
            identity: s,
            size,
            all,
            count,
            json,
            least_number,
        } => {
            let id = identity(&s)?;
            let mode = if count {
                SearchMode::Count
            } else if all {
                SearchMode::FindAll
            } else {
                SearchMode::FindOne
            };
            let mut q = ModelQuery::new(vec![id], size, mode);
            q.least_number = least_number;
            let set = find_models(&q).map_err(usage)?;
            if count {
                let _ = writeln!(out, "{}", set.count);
            } else if set.tables.is_empty() {
                let _ = writeln!(out, "no model of size {size}");
            }
            for t in &set.tables {
                if json {
                    let _ = writeln!(out, "{}", t.to_json());
                } else {
                    let _ = writeln!(out, "{t}");
                }
            }
        }
        Command::Prove {
            axioms,
            goals,
            limits,
            trace,
        } => {
            let axioms: Vec<Identity> = read_formulas(&axioms)?
                .into_iter()
                .map(|f| f.identity)
                .collect();
            let goals: Vec<Identity> = read_formulas(&goals)?
                .into_iter()
                .map(|f| f.identity)
                .collect();
            let strategy = limits.strategy(Strategy::default());
            let outcome = derive(&axioms, &goals, &strategy);
            let _ = writeln!(out, "status: {}", outcome.status);
            for (g, o) in goals.iter().zip(&outcome.goals) {
                let vars = g.variables();
                let show = |t: &PTerm| {
                    unskolemize(t, &vars).map_or_else(|| t.to_string(), |t| t.to_string())
                };
                let _ = writeln!(
                    out,
                    "goal {g}: {} (normal forms {} / {})",
                    if o.proved { "proved" } else { "open" },
                    show(&o.normal_forms.0),
                    show(&o.normal_forms.1)
                );
            }
            let _ = writeln!(
                out,
                "strategy {} processed {} critical pairs {} active {} elapsed {:.3}s",
                strategy.name,
                outcome.stats.processed,
                outcome.stats.critical_pairs,
                outcome.stats.active,
                outcome.stats.elapsed.as_secs_f64()
            );
            if let Some(t) = &outcome.trace {
                t.replay(&axiom_terms(&axioms), &goal_terms(&goals))
                    .map_err(|e| Failure::Internal(format!("proof does not replay: {e}")))?;
                let _ = writeln!(
                    out,
                    "trace: {} lines, replayed",
                    t.equations.len() + t.goals.len()
                );
                if trace {
                    let _ = write!(out, "{t}");
                }
            }
        }
        Command::Classify {
            identity: s,
            limits,
        } => {
            let formula = TaggedFormula {
                tag: "input".into(),
                identity: identity(&s)?,
            };
            let config = ClassifyConfig::default();
            let config = ClassifyConfig {
                strategy: limits.strategy(config.strategy),
                ..config
            };
            let c = classify(&formula, &config).map_err(|e| Failure::Internal(e.to_string()))?;
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&c).expect("classification serializes")
            );
        }
        Command::Batch {
            file,
            json: _,
            tsv,
            workers,
            limits,
        } => {
            let text =
                fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let config = ClassifyConfig::default();
            let config = ClassifyConfig {
                strategy: limits.strategy(config.strategy),
                workers,
                ..config
            };
            let report = run_batch(&text, &config).map_err(|e| Failure::Internal(e.to_string()))?;
            for e in &report.parse_errors {
                eprintln!("{}:{}: {}", file.display(), e.line, e.message);
            }
            let _ = write!(
                out,
                "{}",
                if tsv {
                    report.to_tsv()
                } else {
                    report.to_json()
                }
            );
        }
        Command::Fixtures => out.push_str(FIXTURE_FILE),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
