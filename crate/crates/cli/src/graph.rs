use std::path::{Path, PathBuf};

use bmres::graph::cycle::{blockends_cycle, blocks_cycle, cycle_betti_recursion_total, cycle_traversal, sink_and_iron};
use bmres::graph::ek::{ek_split_cycle, EkSplit};
use bmres::graph::forest::{blockends_forest, forest_betti_recursion_graded, forest_betti_recursion_total, ForestView};
use bmres::graph::{edge_ideal, sinking, WeightedOrientedGraph};
use bmres::oracle::tor_betti;
use bmres::{Error, FieldSpec};
use clap::Subcommand;
use serde_json::{json, Value};

use crate::{betti_text, read_file, Report};

#[derive(Subcommand)]
pub enum GraphCommand {
    /// The edge ideal, with generator `i` belonging to edge `i`.
    EdgeIdeal { graph: PathBuf },
    /// Reset the weight of every sink to 1.
    Sink { graph: PathBuf },
    /// Sink, then reorient a cycle or path along its traversal.
    Iron { graph: PathBuf },
    /// Blocks and blockends of a forest or a cycle.
    Blocks { graph: PathBuf },
    /// Betti numbers from the deletion recursions.
    Recursion {
        graph: PathBuf,
        /// Also compare with the Tor oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// The two-level splitting of the n-cycle edge ideal.
    EkSplit {
        n: usize,
        /// Check the Betti splitting formula with the oracle.
        #[arg(long)]
        check: bool,
    },
}

fn read_graph(path: &Path) -> anyhow::Result<WeightedOrientedGraph> {
    Ok(WeightedOrientedGraph::parse_any(&read_file(path)?)?)
}

fn edge_names(g: &WeightedOrientedGraph, es: &[usize]) -> Vec<String> {
    es.iter()
        .map(|&e| {
            let (a, b) = g.edges()[e];
            format!("{}->{}", g.names()[a], g.names()[b])
        })
        .collect()
}

fn graph_report(g: &WeightedOrientedGraph) -> Report {
    Report::ok(json!(g.to_json()), g.to_text())
}

fn split_json(s: &EkSplit, check: Option<FieldSpec>) -> anyhow::Result<Value> {
    let mut v = json!({
        "whole": s.whole.to_text(),
        "left": s.left.to_text(),
        "right": s.right.to_text(),
        "intersection": s.intersection.to_text(),
        "map": s.map,
        "valid": s.validate()?,
    });
    if let Some(f) = check {
        v["betti_splitting"] = json!(s.betti_splitting_holds(f)?);
    }
    Ok(v)
}

pub fn run(cmd: &GraphCommand, field: Option<FieldSpec>) -> anyhow::Result<Report> {
    let report = match cmd {
        GraphCommand::EdgeIdeal { graph } => {
            let g = read_graph(graph)?;
            let map = edge_ideal(&g)?;
            let all: Vec<usize> = (0..g.edge_count()).collect();
            Report::ok(json!({"ideal": map.ideal.to_json(), "edges": edge_names(&g, &all)}), map.ideal.to_text())
        }
        GraphCommand::Sink { graph } => graph_report(&sinking(&read_graph(graph)?)),
        GraphCommand::Iron { graph } => graph_report(&sink_and_iron(&read_graph(graph)?)?),
        GraphCommand::Blocks { graph } => {
            let g = read_graph(graph)?;
            let (kind, blocks, ends) = if let Ok(view) = ForestView::new(&g) {
                ("forest", view.blocks(), blockends_forest(&g)?)
            } else if cycle_traversal(&g).is_ok() {
                ("cycle", blocks_cycle(&g)?, blockends_cycle(&g)?)
            } else {
                return Err(Error::Graph("expected a forest or a cycle".into()).into());
            };
            let mut text = format!("{kind}\nblockends: {}\n", edge_names(&g, &ends).join(" "));
            for b in &blocks {
                text.push_str(&format!("block: {}\n", edge_names(&g, b).join(" ")));
            }
            Report::ok(
                json!({
                    "kind": kind,
                    "blockends": ends,
                    "blocks": blocks,
                    "edges": edge_names(&g, &(0..g.edge_count()).collect::<Vec<_>>()),
                }),
                text,
            )
        }
        GraphCommand::Recursion { graph, oracle } => {
            let g = read_graph(graph)?;
            let is_forest = ForestView::new(&g).is_ok();
            let (totals, pd) =
                if is_forest { forest_betti_recursion_total(&g)? } else { cycle_betti_recursion_total(&g)? };
            let mut text = format!("totals: {totals}\npd: {pd}\n");
            let mut out = json!({"kind": if is_forest { "forest" } else { "cycle" }, "totals": totals, "pd": pd});
            if is_forest {
                if let Ok(table) = forest_betti_recursion_graded(&g) {
                    text.push_str(&betti_text(&table));
                    out["graded"] = json!(table.to_json());
                }
            }
            let mut agrees = true;
            if *oracle {
                let want = tor_betti(&edge_ideal(&g)?.ideal, field.unwrap_or_default())?;
                agrees = want.totals() == totals && want.pd() == pd;
                text.push_str(&format!("oracle: {} ({})\n", want.totals(), if agrees { "agrees" } else { "DIFFERS" }));
                out["oracle"] = json!({"totals": want.totals(), "pd": want.pd(), "agrees": agrees});
            }
            Report::verdict(out, text, agrees)
        }
        GraphCommand::EkSplit { n, check } => {
            let s = ek_split_cycle(*n)?;
            let f = check.then(|| field.unwrap_or_default());
            let outer = split_json(&s.outer, f)?;
            let inner = split_json(&s.inner, f)?;
            let mut text = String::new();
            for (name, v) in [("outer", &outer), ("inner", &inner)] {
                text.push_str(&format!("{name}: valid {}", v["valid"]));
                if let Some(b) = v.get("betti_splitting") {
                    text.push_str(&format!(", Betti splitting {b}"));
                }
                text.push('\n');
            }
            let ok = [&outer, &inner]
                .iter()
                .all(|v| v["valid"] == json!(true) && v.get("betti_splitting") != Some(&json!(false)));
            Report::verdict(json!({"n": n, "outer": outer, "inner": inner}), text, ok)
        }
    };
    Ok(report)
}
