use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use bmres::bridges::{self, check_friendliness_criterion};
use bmres::matching::{
    bridge_matching, bridge_matching_eager, critical_symbols, is_bridge_friendly, morse_digraph, validate_matching,
    MatchingReport,
};
use bmres::morse::{betti_from_criticals, differential};
use bmres::oracle::{strand_exactness, tor_betti_table};
use bmres::rivals::compare;
use bmres::search::{search_friendly, search_minimal, SearchMode, SearchOptions, SearchReport, Verdict};
use bmres::symbols::{base_digraph, enumerate_symbols};
use bmres::{Error, FieldSpec, GenOrder, GradedBettiTable, LcmTable, MonomialIdeal, Symbol};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod graph;

#[derive(Parser)]
#[command(name = "bmres", version, about = "Bridge-matching Morse resolutions of monomial ideals")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the parallel parts of the library.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Field characteristic: a prime, or 0 for the rationals.
    #[arg(long = "char", alias = "field", global = true)]
    characteristic: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct IdealArg {
    /// Ideal file (text `vars:` format or JSON).
    ideal: PathBuf,
}

#[derive(Args)]
struct OrderArg {
    /// Generator indices from largest to smallest; defaults to 0,1,…,n−1.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// Search all orders instead of checking one (the default without --order).
    #[arg(long, conflicts_with = "order")]
    search: bool,
    #[arg(long, value_parser = parse_mode, default_value = "exhaustive")]
    mode: SearchMode,
    /// Stop after examining this many orders.
    #[arg(long)]
    budget_orders: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop after this many witnesses.
    #[arg(long, default_value_t = 1)]
    witness_cap: usize,
    /// Permit exhaustive search beyond the default generator limit.
    #[arg(long)]
    allow_large: bool,
    /// Visit one order per dihedral class when the ideal is a plain cycle.
    #[arg(long)]
    cycle_reduction: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the Taylor symbols, optionally of one cardinality.
    Symbols {
        #[command(flatten)]
        input: IdealArg,
        #[arg(long)]
        card: Option<usize>,
    },
    /// The smallest bridge of a symbol such as `0,2,3`.
    Sbridge {
        #[command(flatten)]
        input: IdealArg,
        symbol: String,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Down-edges of the Taylor simplex.
    BaseDigraph {
        #[command(flatten)]
        input: IdealArg,
    },
    /// The bridge matching.
    Matching {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
        /// Use the single-pass variant.
        #[arg(long)]
        eager: bool,
    },
    /// Critical symbols of the bridge matching, by cardinality.
    Critical {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
    },
    /// The facet digraph with matched edges reversed, with weights.
    MorseDigraph {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Type-1, type-2 and potentially-type-2 symbols.
    Types {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Is the order bridge-friendly, or does some order exist?
    Friendly {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Is the bridge resolution minimal for the order, or for some order?
    Minimal {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// The Morse differential of the bridge matching.
    Resolution {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Betti numbers: the critical-cell bound, or the Tor oracle.
    Betti {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        oracle: bool,
    },
    /// Ranks of the Taylor, Lyubeznik, Scarf and bridge resolutions.
    Compare {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Certify the Morse complex against the Tor oracle.
    Oracle {
        #[command(flatten)]
        input: IdealArg,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Re-validate a matching report produced by `matching --format json`.
    Validate {
        #[command(flatten)]
        input: IdealArg,
        matching: PathBuf,
    },
    /// Edge ideals of weighted oriented graphs.
    #[command(subcommand)]
    Graph(graph::GraphCommand),
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A finished report: its JSON form, its text form and the exit status.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

impl Report {
    pub fn ok(json: Value, text: String) -> Self {
        Self { json, text, code: 0 }
    }

    pub fn verdict(json: Value, text: String, positive: bool) -> Self {
        Self { json, text, code: if positive { 0 } else { 1 } }
    }
}

pub fn read_file(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_ideal(input: &IdealArg) -> anyhow::Result<MonomialIdeal> {
    Ok(MonomialIdeal::parse_any(&read_file(&input.ideal)?)?)
}

fn parse_order(arg: &OrderArg, ideal: &MonomialIdeal) -> anyhow::Result<GenOrder> {
    match &arg.order {
        None => Ok(GenOrder::identity(ideal.ngens())),
        Some(text) => {
            let perm = text
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| Error::InvalidOrder(format!("bad index {p:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GenOrder::for_ideal(ideal, perm)?)
        }
    }
}

fn symbols_json(v: &[Symbol]) -> Value {
    json!(v.iter().map(|s| s.indices()).collect::<Vec<_>>())
}

fn symbol_list(v: &[Symbol]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn betti_text(b: &GradedBettiTable) -> String {
    let mut out = format!("totals: {}\npd: {}\n", b.totals(), b.pd());
    for ((i, deg), count) in b.graded() {
        out.push_str(&format!("beta[{i},{deg}] = {count}\n"));
    }
    out
}

fn search_options(s: &SearchArgs) -> SearchOptions {
    SearchOptions {
        mode: s.mode,
        max_orders: s.budget_orders,
        max_seconds: s.budget_seconds,
        seed: s.seed,
        witness_cap: s.witness_cap,
        allow_large: s.allow_large,
        cycle_reduction: s.cycle_reduction,
    }
}

fn search_report(what: &str, r: SearchReport) -> Report {
    let mut text = match r.verdict {
        Verdict::Found => format!("{what}: true\n"),
        Verdict::ExhaustedNone => format!("{what}: false (no order of {} works)\n", r.orders_examined),
        Verdict::BudgetExceeded => format!("{what}: unknown (budget exceeded)\n"),
    };
    for w in &r.witnesses {
        text.push_str(&format!("witness: {}\n", join(w)));
    }
    text.push_str(&format!("orders examined: {} in {} ms\n", r.orders_examined, r.elapsed_ms));
    let code = match r.verdict {
        Verdict::Found => 0,
        Verdict::ExhaustedNone => 1,
        Verdict::BudgetExceeded => 3,
    };
    Report { json: json!(r), text, code }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let field = match cli.characteristic {
        None => None,
        Some(0) => Some(FieldSpec::Rational),
        Some(p) => Some(FieldSpec::prime(p)?),
    };
    let report = match &cli.command {
        Command::Symbols { input, card } => {
            let ideal = read_ideal(input)?;
            let syms = enumerate_symbols(ideal.ngens(), *card)?;
            let rows: Vec<Value> = syms
                .iter()
                .map(|s| json!({"symbol": s.indices(), "lcm": ideal.ctx().format(&bmres::symbols::symbol_lcm(*s, &ideal))}))
                .collect();
            let text = syms
                .iter()
                .map(|s| format!("{s} {}\n", ideal.ctx().format(&bmres::symbols::symbol_lcm(*s, &ideal))))
                .collect();
            Report::ok(json!(rows), text)
        }
        Command::Sbridge { input, symbol, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let s = Symbol::parse(symbol, ideal.ngens())?;
            let b = bridges::sbridge(&t, s, &ord);
            let text = match b {
                Some(g) => format!("sbridge{s} = {g}\n"),
                None => format!("{s} has no bridge\n"),
            };
            Report::ok(json!({"symbol": s.indices(), "sbridge": b, "bridges": bridges::bridges(&t, s).indices()}), text)
        }
        Command::BaseDigraph { input } => {
            let ideal = read_ideal(input)?;
            let d = base_digraph(ideal.ngens())?;
            let edges: Vec<Value> = d.down_edges.iter().map(|(a, b)| json!([a.indices(), b.indices()])).collect();
            let text = d.down_edges.iter().map(|(a, b)| format!("{a} -> {b}\n")).collect();
            Report::ok(json!({"down_edges": edges}), text)
        }
        Command::Matching { input, order, eager } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let m = if *eager { bridge_matching_eager(&t, &ord) } else { bridge_matching(&t, &ord) };
            let r = MatchingReport::new(&m, ideal.ngens());
            let mut text: String =
                r.edges.iter().map(|e| format!("{} -> {} (sbridge {})\n", e.source, e.target, e.pivot)).collect();
            text.push_str(&format!("critical: {}\n", symbol_list(&r.critical)));
            Report::ok(json!(r), text)
        }
        Command::Critical { input, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let crit = critical_symbols(&bridge_matching(&t, &ord), ideal.ngens());
            let text = crit.iter().enumerate().map(|(r, c)| format!("{r}: {}\n", symbol_list(c))).collect();
            Report::ok(json!(crit.iter().map(|c| symbols_json(c)).collect::<Vec<_>>()), text)
        }
        Command::MorseDigraph { input, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let g = morse_digraph(&bridge_matching(&t, &ord), ideal.ngens());
            let text = g.edges.iter().map(|e| format!("{} -> {} [{}]\n", e.from, e.to, e.weight)).collect();
            Report::ok(json!(g), text)
        }
        Command::Types { input, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let r = MatchingReport::new(&bridge_matching(&t, &ord), ideal.ngens());
            let potential: Vec<Symbol> =
                t.all_symbols().filter(|&s| bridges::is_potentially_type2(&t, s, &ord)).collect();
            let class = |k: &str| r.classes.get(k).cloned().unwrap_or_default();
            let text = format!(
                "type1: {}\ntype2: {}\npotentially type2: {}\npotentially type2 only: {}\ncritical: {}\n",
                symbol_list(&class("type1")),
                symbol_list(&class("type2")),
                symbol_list(&potential),
                symbol_list(&class("potential_type2_only")),
                symbol_list(&r.critical)
            );
            Report::ok(
                json!({
                    "type1": class("type1"),
                    "type2": class("type2"),
                    "potential_type2": potential,
                    "potential_type2_only": class("potential_type2_only"),
                    "critical": r.critical,
                }),
                text,
            )
        }
        Command::Friendly { input, order, search } => {
            let ideal = read_ideal(input)?;
            if order.order.is_none() {
                return Ok(search_report("friendly", search_friendly(&ideal, &search_options(search))?));
            }
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let friendly = is_bridge_friendly(&t, &ord);
            let criterion = check_friendliness_criterion(&t, &ord);
            let mut text = format!("friendly: {friendly}\n");
            if let Some((s, m)) = criterion.witness {
                text.push_str(&format!("witness: {s} with true gap {m}\n"));
            }
            Report::verdict(json!({"order": ord.perm(), "friendly": friendly, "criterion": criterion}), text, friendly)
        }
        Command::Minimal { input, order, search } => {
            let ideal = read_ideal(input)?;
            if order.order.is_none() {
                let f = field.unwrap_or_default();
                return Ok(search_report("minimal", search_minimal(&ideal, &search_options(search), f)?));
            }
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let d = differential(&bridge_matching(&t, &ord), &t)?;
            let f = field.unwrap_or(FieldSpec::Rational);
            let minimal = d.is_minimal_over(f);
            let ranks = d.ranks();
            let text = format!("minimal: {minimal}\nranks: {ranks}\n");
            Report::verdict(
                json!({"order": ord.perm(), "minimal": minimal, "field": f.to_string(), "ranks": ranks}),
                text,
                minimal,
            )
        }
        Command::Resolution { input, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let d = differential(&bridge_matching(&t, &ord), &t)?;
            let mut text = format!("ranks: {}\nminimal: {}\n", d.ranks(), d.is_minimal());
            for m in &d.matrices {
                text.push_str(&format!("d{}: {} x {}\n", m.degree, m.rows.len(), m.cols.len()));
                for e in &m.entries {
                    text.push_str(&format!(
                        "  {} <- {}: {} * {}\n",
                        m.rows[e.row],
                        m.cols[e.col],
                        e.coeff,
                        ideal.ctx().format(&e.monomial)
                    ));
                }
            }
            Report::ok(json!(d.to_json(&t)), text)
        }
        Command::Betti { input, order, oracle } => {
            let ideal = read_ideal(input)?;
            let t = LcmTable::new(&ideal)?;
            let b = if *oracle {
                tor_betti_table(&t, field.unwrap_or_default())?
            } else {
                let ord = parse_order(order, &ideal)?;
                betti_from_criticals(&bridge_matching(&t, &ord), &t)
            };
            Report::ok(json!(b.to_json()), betti_text(&b))
        }
        Command::Compare { input, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let c = compare(&t, &ord);
            let text = format!(
                "taylor:     {}\nlyubeznik:  {}\nscarf:      {}\nbridge:     {}\n",
                c.taylor, c.lyubeznik, c.scarf, c.barile_macchia
            );
            Report::ok(json!(c), text)
        }
        Command::Oracle { input, order } => {
            let ideal = read_ideal(input)?;
            let ord = parse_order(order, &ideal)?;
            let t = LcmTable::new(&ideal)?;
            let f = field.unwrap_or_default();
            let m = bridge_matching(&t, &ord);
            let d = differential(&m, &t)?;
            let exact = strand_exactness(&d, &t, f)?;
            let tor = tor_betti_table(&t, f)?;
            let upper = betti_from_criticals(&m, &t);
            let attains = upper == tor;
            let mut text = format!("field: {f}\nexact: {}\nattains oracle Betti numbers: {attains}\n", exact.is_ok());
            if let Err(fail) = &exact {
                text.push_str(&format!(
                    "homology {} at position {} in multidegree {}\n",
                    fail.homology,
                    fail.position,
                    ideal.ctx().format(&fail.multidegree)
                ));
            }
            text.push_str(&betti_text(&tor));
            Report::verdict(
                json!({
                    "field": f.to_string(),
                    "exact": exact.is_ok(),
                    "failure": exact.as_ref().err(),
                    "attains": attains,
                    "oracle": tor.to_json(),
                    "critical_bound": upper.to_json(),
                }),
                text,
                exact.is_ok(),
            )
        }
        Command::Validate { input, matching } => {
            let ideal = read_ideal(input)?;
            let t = LcmTable::new(&ideal)?;
            let report: MatchingReport =
                serde_json::from_str(&read_file(matching)?).map_err(|e| Error::Parse(format!("matching JSON: {e}")))?;
            let m = report.to_matching();
            let result = validate_matching(&m, &t);
            let text = match &result {
                Ok(()) => "valid\n".to_string(),
                Err(v) => format!("invalid: {}\n", serde_json::to_string(v)?),
            };
            Report::verdict(json!({"valid": result.is_ok(), "violation": result.as_ref().err()}), text, result.is_ok())
        }
        Command::Graph(cmd) => graph::run(cmd, field)?,
    };
    Ok(report)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Capacity(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("JSON value serializes")),
                Format::Text => print!("{}", r.text),
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
