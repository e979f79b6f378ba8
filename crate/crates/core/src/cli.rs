//! Command implementations behind the `prodcell` binary. Each returns the
//! text written to the data stream; progress goes through a callback.

use std::fmt::Write as _;

use serde_json::json;

use crate::budget::Deadline;
use crate::complex::build_complex_within;
use crate::constructions;
use crate::digraph::Digraph;
use crate::dow::{
    ascending_normalize, format_comma, maximal_factors, tangled_cord, Dow, FactorKind, Word,
};
use crate::error::{Error, Result};
use crate::homology::{homology_summary_within, HomologySummary};
use crate::verify::{run_suite, Suite};
use crate::wordgraph::{global_word_graph, rooted_word_graph, SuccessorCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    Dot,
    Json,
    #[default]
    Table,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_dim: usize,
    pub format: Format,
    /// Wall-clock seconds.
    pub budget: Option<f64>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_dim: 3,
            format: Format::Table,
            budget: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_dim < 1 {
            return Err(Error::InvalidParameter {
                name: "max-dim",
                value: self.max_dim as i64,
                expected: "max-dim >= 1",
            });
        }
        if let Some(b) = self.budget {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "budget",
                    value: b as i64,
                    expected: "a positive number of seconds",
                });
            }
        }
        Ok(())
    }

    pub fn deadline(&self) -> Deadline {
        Deadline::from_secs(self.budget)
    }
}

/// Where a graph comes from.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Word(String),
    Global(usize),
    Construct(String, Vec<usize>),
    /// A graph in the `{vertices, edges}` JSON form.
    Json(String),
}

impl GraphSource {
    pub fn resolve(&self) -> Result<Digraph> {
        Ok(match self {
            GraphSource::Word(w) => rooted_word_graph(&w.parse::<Dow>()?).graph,
            GraphSource::Global(n) => global_word_graph(*n).graph,
            GraphSource::Construct(name, params) => constructions::by_name(name, params)?,
            GraphSource::Json(text) => Digraph::from_json(text)?,
        })
    }
}

/// Output of a command that may stop early. `complete` is false when the
/// budget ran out; `text` then holds the partial result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub complete: bool,
}

impl Output {
    pub fn done(text: String) -> Self {
        Output {
            text,
            complete: true,
        }
    }
}

pub fn cmd_normalize(word: &str) -> Result<String> {
    let d = ascending_normalize(&word.parse::<Word>()?)?;
    Ok(d.to_comma_string())
}

fn kind_name(kind: FactorKind) -> &'static str {
    match kind {
        FactorKind::Repeat => "repeat",
        FactorKind::Return => "return",
    }
}

/// Maximal factors and immediate successors.
pub fn cmd_successors(word: &str, format: Format) -> Result<String> {
    let d: Dow = word.parse()?;
    let factors = if d.is_empty() {
        Vec::new()
    } else {
        maximal_factors(&d)?.factors
    };
    let successors = crate::dow::immediate_successors(&d);
    if format == Format::Json {
        let value = json!({
            "word": d.to_comma_string(),
            "factors": factors.iter().map(|f| json!({
                "letters": format_comma(&f.letters),
                "kind": kind_name(f.kind),
            })).collect::<Vec<_>>(),
            "successors": successors.iter().map(Dow::to_comma_string).collect::<Vec<_>>(),
        });
        return Ok(serde_json::to_string_pretty(&value).expect("json") + "\n");
    }
    let mut s = String::new();
    let _ = writeln!(s, "word {}", d.to_comma_string());
    for f in &factors {
        let _ = writeln!(
            s,
            "factor {} {}",
            format_comma(&f.letters),
            kind_name(f.kind)
        );
    }
    for v in &successors {
        let _ = writeln!(s, "successor {}", v.to_comma_string());
    }
    Ok(s)
}

pub fn cmd_graph(source: &GraphSource, format: Format) -> Result<String> {
    let g = source.resolve()?;
    Ok(render_graph(&g, format))
}

pub fn render_graph(g: &Digraph, format: Format) -> String {
    match format {
        Format::Dot => g.to_dot(),
        Format::Json => g.to_json() + "\n",
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "vertices {}", g.vertex_count());
            let _ = writeln!(s, "edges {}", g.edge_count());
            for (u, v) in g.edges() {
                let _ = writeln!(s, "{} -> {}", g.label(u), g.label(v));
            }
            s
        }
    }
}

pub fn cmd_construct(name: &str, params: &[usize], format: Format) -> Result<String> {
    cmd_graph(
        &GraphSource::Construct(name.to_string(), params.to_vec()),
        format,
    )
}

fn render_summary(h: &HomologySummary, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(&h.to_json_value()).expect("json") + "\n";
    }
    let mut s = String::from("degree\tbetti\ttorsion\n");
    for (n, d) in h.degrees.iter().enumerate() {
        let torsion = if d.torsion.is_empty() {
            "-".to_string()
        } else {
            d.torsion
                .iter()
                .map(|t| format!("Z/{t}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let note = if d.truncated {
            "\t(computed with truncated complex)"
        } else {
            ""
        };
        let _ = writeln!(s, "{n}\t{}\t{torsion}{note}", d.betti);
    }
    let counts: Vec<String> = h.cell_counts.iter().map(usize::to_string).collect();
    let _ = writeln!(s, "cells\t{}", counts.join(" "));
    let _ = writeln!(s, "euler\t{}", h.euler);
    s
}

/// Homology in degrees `0..=max_dim` of the complex built up to `max_dim`.
pub fn cmd_homology(source: &GraphSource, cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let deadline = cfg.deadline();
    let g = source.resolve()?;
    let cx = build_complex_within(&g, cfg.max_dim, &deadline)?;
    let h = homology_summary_within(&cx, cfg.max_dim, &deadline)?;
    Ok(render_summary(&h, cfg.format))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub word: String,
    pub betti1: usize,
    pub betti2: usize,
    pub vertices: usize,
    /// β₂ is only an upper bound (complex built below dimension 3).
    pub truncated: bool,
}

/// Computes the row for the tangled cord `t_n`.
pub fn table_row(
    n: usize,
    cfg: &RunConfig,
    cache: &SuccessorCache,
    deadline: &Deadline,
) -> Result<TableRow> {
    let t = tangled_cord(n)?;
    let g = crate::wordgraph::rooted_word_graph_with(cache, &t);
    let cx = build_complex_within(&g.graph, cfg.max_dim, deadline)?;
    let h = homology_summary_within(&cx, 2, deadline)?;
    Ok(TableRow {
        n,
        word: t.to_comma_string(),
        betti1: h.betti(1),
        betti2: h.betti(2),
        vertices: g.vertex_count(),
        truncated: h.degrees[2].truncated,
    })
}

/// Betti numbers of the word graphs of `t_2 .. t_{n_max}`.
pub fn cmd_table(n_max: usize, cfg: &RunConfig, progress: &mut dyn FnMut(&str)) -> Result<Output> {
    cfg.validate()?;
    if n_max < 2 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            value: n_max as i64,
            expected: "n_max >= 2",
        });
    }
    let deadline = cfg.deadline();
    let cache = SuccessorCache::new();
    let mut rows = Vec::new();
    let mut stopped_at = None;
    for n in 2..=n_max {
        progress(&format!("computing t_{n}"));
        match table_row(n, cfg, &cache, &deadline) {
            Ok(row) => rows.push(row),
            Err(Error::BudgetExceeded) => {
                stopped_at = Some(n);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let text = match cfg.format {
        Format::Json => {
            let value = json!({
                "rows": rows.iter().map(|r| json!({
                    "n": r.n, "word": r.word, "betti1": r.betti1, "betti2": r.betti2,
                    "vertices": r.vertices, "truncated": r.truncated,
                })).collect::<Vec<_>>(),
                "complete": stopped_at.is_none(),
            });
            serde_json::to_string_pretty(&value).expect("json") + "\n"
        }
        _ => {
            let mut s = String::from("n\tword\tβ1\tβ2\t|V|\n");
            for r in &rows {
                let mark = if r.truncated { "*" } else { "" };
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}{mark}\t{}",
                    r.n, r.word, r.betti1, r.betti2, r.vertices
                );
            }
            if rows.iter().any(|r| r.truncated) {
                s.push_str("# * computed with truncated complex (max-dim < 3)\n");
            }
            if let Some(n) = stopped_at {
                let _ = writeln!(s, "# PARTIAL: budget exceeded while computing n={n}");
            }
            s
        }
    };
    Ok(Output {
        text,
        complete: stopped_at.is_none(),
    })
}

/// Runs invariant suites. The output is complete iff every suite passed.
pub fn cmd_verify(suites: &[Suite], seed: u64, cases: usize) -> Output {
    let mut s = String::new();
    let mut ok = true;
    for &suite in suites {
        let report = run_suite(suite, seed, cases);
        ok &= report.passed();
        let _ = writeln!(s, "{report}");
    }
    let _ = writeln!(
        s,
        "seed {seed}: {}",
        if ok { "all passed" } else { "FAILED" }
    );
    Output {
        text: s,
        complete: ok,
    }
}

/// Parses a verify suite name, `all` meaning every default suite.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>> {
    Suite::parse(name).ok_or_else(|| {
        Error::GraphFormat(format!(
            "unknown suite {name:?}; expected all, boundary, reverse, product, snf, euler or corrupted"
        ))
    })
}
