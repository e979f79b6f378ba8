//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any required criterion fails.
//!
//! `ACCEPTANCE_BUDGET_SECS` bounds the stretch rows and the torsion probe
//! (default 3600). Running out of budget there is reported, not failed.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use prodcell::budget::Deadline;
use prodcell::cli::{cmd_homology, cmd_table, table_row, Format, GraphSource, RunConfig};
use prodcell::complex::build_complex;
use prodcell::constructions::{
    lantern, mixed, multiloop, path_square, sphere_chain, tennis_sphere, three_square_sphere,
};
use prodcell::digraph::{is_isomorphic, Digraph};
use prodcell::dow::{tangled_cord, Dow};
use prodcell::homology::{homology_summary, snf, HomologySummary};
use prodcell::matrix::SparseMatrix;
use prodcell::verify::{random_matrix, rng, run_suite, Suite};
use prodcell::wordgraph::{global_word_graph, rooted_word_graph, SuccessorCache};
use prodcell::Error;

const SEED: u64 = 20240611;
const CASES: usize = 200;

/// (n, β1, β2, |V|) for the tangled cords.
const REQUIRED_ROWS: [(usize, usize, usize, usize); 7] = [
    (2, 0, 0, 2),
    (3, 1, 0, 5),
    (4, 1, 2, 8),
    (5, 2, 6, 13),
    (6, 1, 27, 21),
    (7, 1, 54, 34),
    (8, 1, 86, 55),
];
const STRETCH_ROWS: [(usize, usize, usize, usize); 4] = [
    (9, 1, 111, 89),
    (10, 1, 126, 144),
    (11, 1, 116, 233),
    (12, 1, 112, 377),
];

enum Verdict {
    Pass(String),
    Fail(String),
    /// Did not finish within the budget; not counted as a failure.
    Unfinished(String),
}

type Check = fn(&Deadline) -> Verdict;

fn budget() -> Duration {
    let secs = std::env::var("ACCEPTANCE_BUDGET_SECS")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .unwrap_or(3600.0);
    Duration::from_secs_f64(secs)
}

fn summary(g: &Digraph, top: usize) -> HomologySummary {
    homology_summary(&build_complex(g, top + 1), top).expect("consistent complex")
}

fn betti(g: &Digraph, top: usize) -> Vec<usize> {
    let h = summary(g, top);
    (0..=top).map(|n| h.betti(n)).collect()
}

fn table_rows_match(rows: &[(usize, usize, usize, usize)], deadline: &Deadline) -> Verdict {
    let cfg = RunConfig::default();
    let cache = SuccessorCache::new();
    let mut notes = Vec::new();
    let mut bad = Vec::new();
    for &(n, b1, b2, v) in rows {
        match table_row(n, &cfg, &cache, deadline) {
            Ok(row) => {
                let got = (row.betti1, row.betti2, row.vertices);
                if got != (b1, b2, v) || row.truncated {
                    bad.push(format!("t{n}: got {got:?}, want {:?}", (b1, b2, v)));
                } else {
                    notes.push(format!("t{n}={got:?}"));
                }
            }
            Err(Error::BudgetExceeded) => {
                let done = notes.join(" ");
                return if bad.is_empty() {
                    Verdict::Unfinished(format!("budget ran out at t{n}; finished: {done}"))
                } else {
                    Verdict::Fail(bad.join("; "))
                };
            }
            Err(e) => return Verdict::Fail(format!("t{n}: {e}")),
        }
    }
    if bad.is_empty() {
        Verdict::Pass(notes.join(" "))
    } else {
        Verdict::Fail(bad.join("; "))
    }
}

fn table_required(_: &Deadline) -> Verdict {
    table_rows_match(&REQUIRED_ROWS, &Deadline::none())
}

fn table_stretch(deadline: &Deadline) -> Verdict {
    table_rows_match(&STRETCH_ROWS, deadline)
}

fn torsion_t10(deadline: &Deadline) -> Verdict {
    let t = tangled_cord(10).expect("n >= 2");
    let g = rooted_word_graph(&t);
    let cx = match prodcell::complex::build_complex_within(&g.graph, 3, deadline) {
        Ok(cx) => cx,
        Err(Error::BudgetExceeded) => {
            return Verdict::Unfinished("budget ran out building t10".into())
        }
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let h = match prodcell::homology::homology_summary_within(&cx, 2, deadline) {
        Ok(h) => h,
        Err(Error::BudgetExceeded) => {
            return Verdict::Unfinished("budget ran out reducing t10".into())
        }
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let degrees: Vec<usize> = (1..=2).filter(|&n| h.has_torsion(n, 2)).collect();
    let torsion = format!(
        "H1 torsion {:?}, H2 torsion {:?}",
        h.torsion(1),
        h.torsion(2)
    );
    if degrees.is_empty() {
        Verdict::Fail(torsion)
    } else {
        Verdict::Pass(format!("Z/2 in degree {degrees:?}; {torsion}"))
    }
}

fn construction_betti_numbers(_: &Deadline) -> Verdict {
    let mut cases: Vec<(String, Digraph, Vec<usize>)> = vec![
        ("path_square".into(), path_square(), vec![1, 1, 0]),
        (
            "three_square_sphere".into(),
            three_square_sphere(),
            vec![1, 0, 1],
        ),
        ("tennis_sphere".into(), tennis_sphere(false), vec![1, 0, 1]),
        (
            "tennis_sphere+diagonal".into(),
            tennis_sphere(true),
            vec![1, 0, 1],
        ),
    ];
    for k in 0..=5 {
        cases.push((format!("multiloop({k})"), multiloop(k), vec![1, k, 0]));
    }
    for k in 1..=4 {
        cases.push((
            format!("sphere_chain({k})"),
            sphere_chain(k).unwrap(),
            vec![1, 0, k],
        ));
    }
    for k in 2..=6 {
        let c = (k - 1) * (k - 2) / 2;
        cases.push((format!("lantern({k})"), lantern(k).unwrap(), vec![1, 0, c]));
    }
    for k in 0..=3 {
        for l in 0..=3 {
            cases.push((
                format!("mixed({k},{l})"),
                mixed(k, l).unwrap(),
                vec![1, k, l],
            ));
        }
    }
    let bad: Vec<String> = cases
        .iter()
        .filter_map(|(name, g, want)| {
            let got = betti(g, 2);
            (&got != want).then(|| format!("{name}: got {got:?}, want {want:?}"))
        })
        .collect();
    if bad.is_empty() {
        Verdict::Pass(format!("{} graphs", cases.len()))
    } else {
        Verdict::Fail(bad.join("; "))
    }
}

fn is_pentagon(g: &Digraph) -> bool {
    let degrees_two = (0..g.vertex_count()).all(|v| g.in_degree(v) + g.out_degree(v) == 2);
    g.vertex_count() == 5 && g.edge_count() == 5 && degrees_two && g.component_count() == 1
}

fn word_graph_examples(_: &Deadline) -> Verdict {
    let d = |s: &str| s.parse::<Dow>().unwrap();
    let mut bad = Vec::new();

    let a = rooted_word_graph(&d("121323")).graph;
    let b = rooted_word_graph(&d("122331")).graph;
    if !(is_pentagon(&a) && is_pentagon(&b) && is_isomorphic(&a, &b)) {
        bad.push("G_121323 and G_122331 are not isomorphic pentagons".to_string());
    }
    for (name, g) in [("121323", &a), ("122331", &b)] {
        if betti(g, 2) != [1, 1, 0] {
            bad.push(format!("betti of G_{name} is {:?}", betti(g, 2)));
        }
    }

    let closure: BTreeSet<String> = rooted_word_graph(&d("1234523541"))
        .words
        .iter()
        .skip(1)
        .map(|w| w.to_string())
        .collect();
    let expected: BTreeSet<String> = ["12341243", "123321", "123231", "1221", "1212", "11", "e"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if closure != expected {
        bad.push(format!("successors of 1234523541: {closure:?}"));
    }

    let g2: BTreeSet<String> = global_word_graph(2)
        .words
        .iter()
        .map(|w| w.to_string())
        .collect();
    let want: BTreeSet<String> = ["e", "11", "1122", "1212", "1221"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if g2 != want {
        bad.push(format!("V(G2) = {g2:?}"));
    }

    let b1 = summary(&rooted_word_graph(&d("1213234545")).graph, 2).betti(1);
    if b1 != 1 {
        bad.push(format!("β1(G_1213234545) = {b1}"));
    }

    if bad.is_empty() {
        Verdict::Pass("pentagons, 1234523541 closure, V(G2), 1213234545".into())
    } else {
        Verdict::Fail(bad.join("; "))
    }
}

fn det(m: &[Vec<i64>]) -> i128 {
    // Cofactor expansion; only used on matrices of size at most 5.
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinantal divisors: `D_k` is the gcd of all `k x k` minors.
fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c]).collect())
                    .collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g);
    }
    out
}

fn minor_gcd_oracle(m: &[Vec<i64>]) -> Result<(), String> {
    let r = snf(&SparseMatrix::from_dense(m));
    let factors: Vec<BigInt> = r
        .invariant_factors
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.abs())
        .collect();
    let divisors = determinantal_divisors(m);
    if factors.len() != divisors.len() {
        return Err(format!(
            "rank {} vs minor rank {} on {m:?}",
            factors.len(),
            divisors.len()
        ));
    }
    let mut prod = BigInt::from(1);
    for (k, (d, want)) in factors.iter().zip(&divisors).enumerate() {
        prod *= d;
        if prod != BigInt::from(*want) {
            return Err(format!(
                "D_{} is {want}, invariant factors give {prod} on {m:?}",
                k + 1
            ));
        }
    }
    Ok(())
}

fn property_suites(_: &Deadline) -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for suite in Suite::DEFAULT {
        let report = run_suite(suite, SEED, CASES);
        ok &= report.passed() && report.cases >= CASES;
        lines.push(format!(
            "{}:{}/{}",
            suite.name(),
            report.cases - report.failures.len(),
            report.cases
        ));
        if !report.passed() {
            lines.push(
                report
                    .failures
                    .iter()
                    .take(3)
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(" | "),
            );
        }
    }
    let mut r = rng(SEED);
    let mut oracle_failures = Vec::new();
    for _ in 0..CASES {
        let m = random_matrix(&mut r, 5, 10);
        if let Err(e) = minor_gcd_oracle(&m) {
            oracle_failures.push(e);
        }
    }
    // Keep at least a few full-size square matrices in the oracle run.
    for _ in 0..20 {
        let m: Vec<Vec<i64>> = (0..5)
            .map(|_| (0..5).map(|_| r.gen_range(-10..=10)).collect())
            .collect();
        if let Err(e) = minor_gcd_oracle(&m) {
            oracle_failures.push(e);
        }
    }
    ok &= oracle_failures.is_empty();
    lines.push(format!(
        "snf-minors:{}/{}",
        CASES + 20 - oracle_failures.len(),
        CASES + 20
    ));
    lines.extend(oracle_failures.into_iter().take(3));
    if ok {
        Verdict::Pass(lines.join(" "))
    } else {
        Verdict::Fail(lines.join(" "))
    }
}

fn determinism(_: &Deadline) -> Verdict {
    let mut bad = Vec::new();
    for format in [Format::Table, Format::Json] {
        let cfg = RunConfig {
            format,
            ..RunConfig::default()
        };
        let a = cmd_table(8, &cfg, &mut |_| {}).map(|o| o.text);
        let b = cmd_table(8, &cfg, &mut |_| {}).map(|o| o.text);
        if a.is_err() || a != b {
            bad.push(format!("cmd_table {format:?}"));
        }
        for source in [
            GraphSource::Word("1213234545".into()),
            GraphSource::Global(3),
            GraphSource::Construct("mixed".into(), vec![2, 2]),
        ] {
            let a = cmd_homology(&source, &cfg);
            let b = cmd_homology(&source, &cfg);
            if a.is_err() || a.as_ref().ok() != b.as_ref().ok() {
                bad.push(format!("cmd_homology {source:?} {format:?}"));
            }
        }
    }
    if bad.is_empty() {
        Verdict::Pass("cmd_table and cmd_homology, table and json".into())
    } else {
        Verdict::Fail(bad.join("; "))
    }
}

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("1 table n<=8", table_required),
        ("2 table stretch n=9..12", table_stretch),
        ("3 torsion t10", torsion_t10),
        ("4 construction betti numbers", construction_betti_numbers),
        ("5 word graph examples", word_graph_examples),
        ("6 property suites", property_suites),
        ("7 determinism", determinism),
    ];
    let budget = budget();
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let deadline = Deadline::after(budget);
        let verdict = panic::catch_unwind(AssertUnwindSafe(|| check(&deadline)))
            .unwrap_or_else(|_| Verdict::Fail("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Unfinished(d) => ("UNFINISHED", d),
        };
        println!("{tag} [{name}] ({secs:.2}s) {detail}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
