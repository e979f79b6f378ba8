//! Seeded invariant suites and the random instances they draw from.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{build_complex, ChainComplex};
use crate::digraph::{cartesian_product, find_isomorphism, verify_isomorphism, Digraph};
use crate::dow::{concat_disjoint, reverse, Dow};
use crate::error::Error;
use crate::homology::{homology_summary, rational_rank, snf};
use crate::matrix::SparseMatrix;
use crate::wordgraph::{are_coprime, rooted_word_graph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random perfect matching on `2n` positions, normalized.
pub fn random_dow(rng: &mut impl Rng, n: usize) -> Dow {
    let mut slots: Vec<u32> = (1..=n as u32).flat_map(|s| [s, s]).collect();
    slots.shuffle(rng);
    Dow::normalize(&slots).expect("each symbol placed twice")
}

/// A DAG on `v0 .. v{n-1}` with forward edges kept with probability `p`,
/// then patched so that `v0` is the only source and `v{n-1}` the only target.
pub fn random_consistent_digraph(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    assert!(n >= 2);
    let mut g = Digraph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}")).expect("fresh");
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j).expect("simple");
            }
        }
    }
    for v in 1..n {
        if g.in_degree(v) == 0 {
            g.add_edge(0, v).expect("simple");
        }
    }
    for v in 0..n - 1 {
        if g.out_degree(v) == 0 {
            g.add_edge(v, n - 1).expect("simple");
        }
    }
    g
}

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, max_abs: i64) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(0..=max_dim);
    let cols = rng.gen_range(0..=max_dim);
    // Sparse-ish matrices exercise the unit elimination path too.
    let density: f64 = rng.gen_range(0.2..=1.0);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        rng.gen_range(-max_abs..=max_abs)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Draws coprime pairs of nonempty words with sizes in `1..=max_size`.
pub fn random_coprime_pairs(rng: &mut impl Rng, count: usize, max_size: usize) -> Vec<(Dow, Dow)> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < 1_000_000,
            "coprime pairs are too rare at this size"
        );
        let (na, nb) = (rng.gen_range(1..=max_size), rng.gen_range(1..=max_size));
        let a = random_dow(rng, na);
        let b = random_dow(rng, nb);
        if are_coprime(&a, &b) {
            out.push((a, b));
        }
    }
    out
}

/// The complexes exercised by the boundary and Euler suites: word graphs
/// of random DOWs (size at most 6) alternating with random consistently
/// directed graphs.
pub fn random_complexes(rng: &mut impl Rng, count: usize) -> Vec<(String, ChainComplex)> {
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let n = rng.gen_range(0..=6);
                let d = random_dow(rng, n);
                let g = rooted_word_graph(&d);
                (
                    format!("G_{}", d.to_comma_string()),
                    build_complex(&g.graph, 4),
                )
            } else {
                let n = rng.gen_range(2..=9);
                let p = rng.gen_range(0.2..0.7);
                let g = random_consistent_digraph(rng, n, p);
                (
                    serde_json::to_string(&g.to_json_value()).expect("json"),
                    build_complex(&g, 4),
                )
            }
        })
        .collect()
}

/// Outcome of one case: `Err` carries a description of the counterexample.
pub type CaseResult = std::result::Result<(), String>;

pub fn check_boundary_squared(cx: &ChainComplex) -> CaseResult {
    for n in 1..cx.top_dim() {
        let prod = cx
            .boundary(n)
            .expect("in range")
            .multiply(cx.boundary(n + 1).expect("in range"));
        if !prod.is_zero() {
            return Err(format!(
                "∂_{n}∘∂_{} has {} nonzero entries",
                n + 1,
                prod.nnz()
            ));
        }
    }
    Ok(())
}

pub fn check_euler(cx: &ChainComplex) -> CaseResult {
    let h = homology_summary(cx, cx.top_dim()).map_err(|e| e.to_string())?;
    let betti: i64 = (0..=cx.top_dim())
        .map(|n| {
            if n % 2 == 0 {
                h.betti(n) as i64
            } else {
                -(h.betti(n) as i64)
            }
        })
        .sum();
    if betti == h.euler {
        Ok(())
    } else {
        Err(format!(
            "cells give {}, Betti numbers give {betti}",
            h.euler
        ))
    }
}

pub fn check_reverse(d: &Dow) -> CaseResult {
    let g = rooted_word_graph(d).graph;
    let h = rooted_word_graph(&reverse(d)).graph;
    match find_isomorphism(&g, &h) {
        Some(map) if verify_isomorphism(&g, &h, &map) => Ok(()),
        Some(_) => Err(format!("bad witness for {d}")),
        None => Err(format!("G_w and G_w^R differ for {d}")),
    }
}

pub fn check_product(a: &Dow, b: &Dow) -> CaseResult {
    let joint = rooted_word_graph(&concat_disjoint(a, b)).graph;
    let prod = cartesian_product(&rooted_word_graph(a).graph, &rooted_word_graph(b).graph);
    match find_isomorphism(&joint, &prod) {
        Some(map) if verify_isomorphism(&joint, &prod, &map) => Ok(()),
        _ => Err(format!("G_ww' is not G_w □ G_w' for ({a}, {b})")),
    }
}

pub fn check_snf(m: &[Vec<i64>]) -> CaseResult {
    let sparse = SparseMatrix::from_dense(m);
    let r = snf(&sparse);
    if !r.divisibility_holds() {
        return Err(format!("divisibility fails on {m:?}"));
    }
    let q = rational_rank(&sparse);
    if r.rank() != q {
        return Err(format!(
            "snf rank {} vs rational rank {q} on {m:?}",
            r.rank()
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Boundary,
    Reverse,
    Product,
    Snf,
    Euler,
    /// A complex with a deliberately broken boundary; its report fails.
    Corrupted,
}

impl Suite {
    pub const DEFAULT: [Suite; 5] = [
        Suite::Boundary,
        Suite::Reverse,
        Suite::Product,
        Suite::Snf,
        Suite::Euler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Boundary => "boundary",
            Suite::Reverse => "reverse",
            Suite::Product => "product",
            Suite::Snf => "snf",
            Suite::Euler => "euler",
            Suite::Corrupted => "corrupted",
        }
    }

    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::DEFAULT.to_vec());
        }
        Suite::DEFAULT
            .iter()
            .chain(&[Suite::Corrupted])
            .find(|s| s.name() == name)
            .map(|&s| vec![s])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{:<10} {status} {} cases, {} failures",
            self.suite.name(),
            self.cases,
            self.failures.len()
        )?;
        for failure in self.failures.iter().take(5) {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

fn collect(suite: Suite, results: impl IntoIterator<Item = CaseResult>) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for r in results {
        cases += 1;
        if let Err(e) = r {
            failures.push(e);
        }
    }
    SuiteReport {
        suite,
        cases,
        failures,
    }
}

/// A three-square sphere whose `∂_2` has one sign flipped.
pub fn corrupted_fixture() -> ChainComplex {
    let mut cx = build_complex(&crate::constructions::three_square_sphere(), 2);
    let d2 = cx.boundary(2).expect("built").clone();
    let flipped = d2
        .triplets()
        .iter()
        .enumerate()
        .map(|(i, &(r, c, v))| (r, c, if i == 0 { -v } else { v }));
    let broken = SparseMatrix::from_triplets(d2.rows(), d2.cols(), flipped);
    cx.set_boundary(2, broken).expect("same shape");
    cx
}

/// Runs one suite with `cases` random instances drawn from `seed`.
pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> SuiteReport {
    // Each suite gets its own stream so reports do not depend on which
    // other suites ran.
    let mut r = rng(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match suite {
        Suite::Boundary => collect(
            suite,
            random_complexes(&mut r, cases)
                .iter()
                .map(|(name, cx)| check_boundary_squared(cx).map_err(|e| format!("{name}: {e}"))),
        ),
        Suite::Euler => collect(
            suite,
            random_complexes(&mut r, cases)
                .iter()
                .map(|(name, cx)| check_euler(cx).map_err(|e| format!("{name}: {e}"))),
        ),
        Suite::Reverse => collect(
            suite,
            (0..cases).map(|_| {
                let n = r.gen_range(0..=7);
                check_reverse(&random_dow(&mut r, n))
            }),
        ),
        Suite::Product => collect(
            suite,
            random_coprime_pairs(&mut r, cases, 4)
                .iter()
                .map(|(a, b)| check_product(a, b)),
        ),
        Suite::Snf => collect(
            suite,
            (0..cases).map(|_| check_snf(&random_matrix(&mut r, 12, 10))),
        ),
        Suite::Corrupted => {
            let cx = corrupted_fixture();
            let result = match homology_summary(&cx, 2) {
                Err(Error::InconsistentComplex { dim }) => {
                    Err(format!("corrupted fixture: ∂∘∂ ≠ 0 in degree {dim}"))
                }
                Err(e) => Err(e.to_string()),
                Ok(_) => Ok(()),
            };
            collect(suite, [result])
        }
    }
}
