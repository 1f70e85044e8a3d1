use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dcomplete::axioms::all_checks;
use dcomplete::certify::{is_d_complete, is_dleqk_complete, CriterionReport};
use dcomplete::enumerate::enum_all_posets;
use dcomplete::generators::{
    dtd, random_posets, random_tree, rooted_tree, shape, shifted_shape, CorpusSpec, Partition,
};
use dcomplete::harness::{
    exhaustive_corpus, family_corpus, run_tables, search_d3c_without_ss, verify_agreement,
    verify_consequences, Table,
};
use dcomplete::io::{self, Format};
use dcomplete::structures::{find_structures, StructureKind};
use dcomplete::{certify, Analysis, Check, Criterion, Poset};

const EXIT_NOT_COMPLETE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_BREACH: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dcomplete", version, about = "Check finite posets for d-completeness")]
#[command(after_help = "Exhaustive corpora are cached in $DCOMPLETE_CACHE_DIR when it is set.")]
struct Cli {
    /// Worker threads for corpus runs (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Poset file: JSON `{elements, covers}` or an edge list.
    file: PathBuf,

    /// Input format; guessed from the extension and contents when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,

    /// Drop covers implied by longer chains instead of rejecting them.
    #[arg(long)]
    auto_reduce: bool,
}

impl Input {
    fn load(&self) -> Result<Poset, String> {
        io::parse_poset_file(&self.file, self.format, self.auto_reduce)
            .map_err(|e| match e {
                dcomplete::Error::Io(msg) => msg,
                e => format!("{}: {e}", self.file.display()),
            })
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide d-completeness; exit 0 when complete, 1 when not, 3 when the
    /// criteria disagree.
    Check {
        #[command(flatten)]
        input: Input,
        /// kokyuroku, combo-a, combo-b, combo-c or combo-d; all five when omitted.
        #[arg(long)]
        criterion: Option<Criterion>,
        /// Decide d_{<=k}-completeness instead.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate axioms and properties with witnesses.
    Axioms {
        #[command(flatten)]
        input: Input,
        /// Every axiom and property at every k that fits the poset.
        #[arg(long, conflicts_with = "axiom")]
        all: bool,
        /// One axiom or property name, e.g. D3MF, DkmCF, UCk.
        #[arg(long, required_unless_present = "all")]
        axiom: Option<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// List structures of one kind as JSON.
    Structures {
        #[command(flatten)]
        input: Input,
        /// diamond, vee, dk, dkminus, yk, lambdayk or overlap.
        #[arg(long)]
        kind: StructureKind,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Write generated posets as JSON.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Replay the implication tables over every poset up to --n-max elements.
    VerifyTheorems {
        /// 1, 2, 3, 5, lemmas, corollaries or controls; repeatable. Every
        /// table plus the agreement, consequence and search runs when omitted.
        #[arg(long)]
        table: Vec<Table>,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Comma-separated row labels (`b`) or keys (`1:b`).
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<String>>,
        /// Add shapes, shifted shapes, double tailed diamonds and trees.
        #[arg(long)]
        families: bool,
    },
    /// Render the Hasse diagram in DOT, optionally highlighting structures.
    ExportDot {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        highlight: Option<StructureKind>,
        #[arg(long, default_value_t = 3, requires = "highlight")]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Young diagram of a partition, e.g. `4,2,1`.
    Shape {
        #[arg(value_delimiter = ',', required = true)]
        parts: Vec<usize>,
    },
    /// Shifted diagram of a strict partition.
    Shifted {
        #[arg(value_delimiter = ',', required = true)]
        parts: Vec<usize>,
    },
    /// Double tailed diamond dt_k(1).
    Dtd { k: usize },
    /// Rooted tree from a parent list (`-` marks the root) or at random.
    Tree {
        /// e.g. `-,0,0,1`.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["n", "seed"])]
        parents: Option<Vec<String>>,
        #[arg(long, required_unless_present = "parents")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every poset with N elements up to isomorphism.
    Enum { n: usize },
    /// Random posets built from shuffled linear orders.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

fn describe_failure(r: &CriterionReport) -> String {
    match (&r.failed, r.failed_at) {
        (Some(name), Some(h)) if name == r.criterion.as_str() => format!("fails at k={h}"),
        (Some(name), Some(h)) => format!("{name} fails at k={h}"),
        _ => "fails".into(),
    }
}

fn report_line(p: &Poset, r: &CriterionReport) -> String {
    if r.verdict {
        return format!("{:<10} holds\n", r.criterion.as_str());
    }
    let mut s = format!("{:<10} {}\n", r.criterion.as_str(), describe_failure(r));
    if let Some(w) = &r.witness {
        s.push_str(&format!("  witness: {}\n", w.to_labeled_json(p)));
    }
    s
}

fn run_check(
    p: &Poset,
    criterion: Option<Criterion>,
    k: Option<usize>,
    as_json: bool,
) -> Result<Output, String> {
    let reports: Vec<CriterionReport> = match (criterion, k) {
        (_, Some(k)) => criterion
            .map_or(Criterion::ALL.to_vec(), |c| vec![c])
            .into_iter()
            .map(|c| is_dleqk_complete(p, k, c).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?,
        (Some(c), None) => vec![is_d_complete(p, c)],
        (None, None) => {
            let cert = certify(p);
            let code = match cert.d_complete() {
                Some(true) => 0,
                Some(false) => EXIT_NOT_COMPLETE,
                None => EXIT_BREACH,
            };
            let text = if as_json {
                pretty(&cert.to_labeled_json(p))
            } else {
                let mut s = format!("{} elements, k_max {}\n", cert.size, cert.k_max);
                for r in &cert.criteria {
                    s.push_str(&report_line(p, r));
                }
                s.push_str(match cert.d_complete() {
                    Some(true) => "d-complete\n",
                    Some(false) => "not d-complete\n",
                    None => "criteria disagree\n",
                });
                s
            };
            return Ok(Output { text, code });
        }
    };
    let agree = reports.iter().all(|r| r.verdict == reports[0].verdict);
    let code = match (agree, reports[0].verdict) {
        (false, _) => EXIT_BREACH,
        (true, true) => 0,
        (true, false) => EXIT_NOT_COMPLETE,
    };
    let text = if as_json {
        let items: Vec<Value> = reports.iter().map(|r| r.to_labeled_json(p)).collect();
        pretty(&json!({ "agreement": agree, "reports": items }))
    } else {
        reports.iter().map(|r| report_line(p, r)).collect()
    };
    Ok(Output { text, code })
}

fn run_axioms(
    p: &Poset,
    all: bool,
    name: Option<&str>,
    k: usize,
    as_json: bool,
) -> Result<Output, String> {
    let checks = if all {
        all_checks(Analysis::new(p).k_limit())
    } else {
        vec![Check::parse(name.unwrap_or_default(), k)?]
    };
    let a = Analysis::new(p);
    let reports: Vec<_> = checks.iter().map(|&c| a.report(c)).collect();
    let text = if as_json {
        let items: Vec<Value> = reports.iter().map(|r| r.to_labeled_json(p)).collect();
        pretty(&Value::Array(items))
    } else {
        let mut s = String::new();
        for r in &reports {
            s.push_str(&format!("{:<14} {}\n", r.check.to_string(), r.verdict));
            if let Some(w) = &r.witness {
                s.push_str(&format!("  witness: {}\n", w.to_labeled_json(p)));
            }
        }
        s
    };
    Ok(Output::ok(text))
}

fn partition(parts: Vec<usize>, strict: bool) -> Result<Partition, String> {
    let r = if strict {
        Partition::strict(parts)
    } else {
        Partition::new(parts)
    };
    r.map_err(|e| e.to_string())
}

fn run_generate(family: Family) -> Result<Output, String> {
    let one = |p: Poset| Ok(Output::ok(io::to_json_pretty(&p)));
    let many = |ps: Vec<Poset>| {
        let items: Vec<Value> = ps.iter().map(io::to_json).collect();
        Ok(Output::ok(pretty(&Value::Array(items))))
    };
    match family {
        Family::Shape { parts } => one(shape(&partition(parts, false)?).map_err(|e| e.to_string())?),
        Family::Shifted { parts } => {
            one(shifted_shape(&partition(parts, true)?).map_err(|e| e.to_string())?)
        }
        Family::Dtd { k } => one(dtd(k).map_err(|e| e.to_string())?),
        Family::Tree { parents: Some(list), .. } => {
            let parents = list
                .iter()
                .map(|s| match s.as_str() {
                    "-" => Ok(None),
                    t => t
                        .parse()
                        .map(Some)
                        .map_err(|_| format!("bad parent `{t}`")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            one(rooted_tree(&parents).map_err(|e| e.to_string())?)
        }
        Family::Tree { n, seed, .. } => {
            one(random_tree(n.unwrap_or(1), seed).map_err(|e| e.to_string())?)
        }
        Family::Enum { n } => {
            if n > dcomplete::enumerate::MAX_CANONICAL_SIZE {
                return Err(format!("enumeration is limited to {} elements", dcomplete::enumerate::MAX_CANONICAL_SIZE));
            }
            many(enum_all_posets(n))
        }
        Family::Random { n, count, seed } => many(random_posets(&CorpusSpec::random(n, count, seed))),
    }
}

fn run_theorems(
    tables: Vec<Table>,
    n_max: usize,
    rows: Option<Vec<String>>,
    families: bool,
) -> Result<Output, String> {
    if n_max > dcomplete::generators::DEFAULT_ENUMERATION_CAP {
        return Err(format!(
            "--n-max {n_max} is above the enumeration cap of {}",
            dcomplete::generators::DEFAULT_ENUMERATION_CAP
        ));
    }
    let full = tables.is_empty();
    let tables = if full { Table::ALL.to_vec() } else { tables };
    let mut corpus = exhaustive_corpus(n_max);
    if families {
        corpus.extend(family_corpus(10));
    }
    let report = run_tables(&tables, rows.as_deref(), &corpus, n_max);
    let mut breaches = report.asserted_violations();
    let mut out = serde_json::to_value(&report).expect("report serializes");
    if full {
        let agreement = verify_agreement(&corpus);
        let consequences = verify_consequences(&corpus);
        let search = search_d3c_without_ss(n_max);
        breaches += agreement.disagreements.len() + consequences.failures.len();
        out["agreement"] = serde_json::to_value(agreement).expect("report serializes");
        out["consequences"] = serde_json::to_value(consequences).expect("report serializes");
        out["short_interval_search"] = serde_json::to_value(search).expect("report serializes");
    }
    out["breaches"] = json!(breaches);
    Ok(Output {
        text: pretty(&out),
        code: if breaches == 0 { 0 } else { EXIT_BREACH },
    })
}

fn run(cli: Cli) -> Result<Output, String> {
    match cli.command {
        Command::Check {
            input,
            criterion,
            k,
            json,
        } => run_check(&input.load()?, criterion, k, json),
        Command::Axioms {
            input,
            all,
            axiom,
            k,
            json,
        } => run_axioms(&input.load()?, all, axiom.as_deref(), k, json),
        Command::Structures { input, kind, k } => {
            let p = input.load()?;
            let hits = find_structures(&p, kind, k).map_err(|e| e.to_string())?;
            let items: Vec<Value> = hits.iter().map(|h| h.to_labeled_json(&p)).collect();
            Ok(Output::ok(pretty(&Value::Array(items))))
        }
        Command::Generate { family } => run_generate(family),
        Command::VerifyTheorems {
            table,
            n_max,
            rows,
            families,
        } => run_theorems(table, n_max, rows, families),
        Command::ExportDot {
            input,
            highlight,
            k,
        } => {
            let p = input.load()?;
            let hits = match highlight {
                Some(kind) => find_structures(&p, kind, k).map_err(|e| e.to_string())?,
                None => Vec::new(),
            };
            Ok(Output::ok(io::export_dot(&p, &hits)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let mut text = out.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(EXIT_ERROR);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
