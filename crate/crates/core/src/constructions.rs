//! Generator graphs with prescribed low-degree homology.
//!
//! Vertices are named `v0, v1, ...` after the figures they reproduce.

use crate::digraph::{glue_at_vertex, Digraph};
use crate::error::{Error, Result};

fn named_graph(prefix: &str, count: usize, edges: &[(usize, usize)]) -> Digraph {
    let mut g = Digraph::new();
    for i in 0..count {
        g.add_vertex(&format!("{prefix}{i}")).expect("fresh label");
    }
    for &(a, b) in edges {
        g.add_edge(a, b).expect("simple edge");
    }
    g
}

fn graph(count: usize, edges: &[(usize, usize)]) -> Digraph {
    named_graph("v", count, edges)
}

fn at_least(name: &'static str, value: usize, min: usize, expected: &'static str) -> Result<()> {
    if value < min {
        return Err(Error::InvalidParameter {
            name,
            value: value as i64,
            expected,
        });
    }
    Ok(())
}

/// Paths of length one and three between `v0` and `v3`. One hole, no square.
pub fn path_square() -> Digraph {
    graph(4, &[(0, 3), (0, 1), (1, 2), (2, 3)])
}

/// The edge `v0 → v_{2k+1}` together with `k` paths
/// `v0 → v_i → v_{k+i} → v_{2k+1}`.
pub fn multiloop(k: usize) -> Digraph {
    let t = 2 * k + 1;
    let mut edges = vec![(0, t)];
    for i in 1..=k {
        edges.extend([(0, i), (i, k + i), (k + i, t)]);
    }
    graph(t + 1, &edges)
}

/// Three paths of length two from `v0` to `v4`.
pub fn three_square_sphere() -> Digraph {
    graph(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
}

/// Four squares closing up into a sphere; `with_diagonal` adds `v0 → v3`,
/// splitting the square `v0 v1 v3 v2` into two triangles.
pub fn tennis_sphere(with_diagonal: bool) -> Digraph {
    let mut edges = vec![
        (0, 1),
        (0, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (3, 5),
        (4, 5),
    ];
    if with_diagonal {
        edges.push((0, 3));
    }
    graph(6, &edges)
}

fn sphere_chain_named(prefix: &str, k: usize) -> Digraph {
    let mut edges = Vec::new();
    for j in 1..=k {
        let source = 3 * (j - 1);
        let target = 3 * j + 1;
        for middle in [3 * j - 2, 3 * j - 1, 3 * j] {
            edges.push((source, middle));
            edges.push((middle, target));
        }
    }
    named_graph(prefix, 3 * k + 2, &edges)
}

/// `k` three-square spheres in a row. Block `j` runs from `v_{3(j-1)}`
/// through `v_{3j-2}, v_{3j-1}, v_{3j}` to `v_{3j+1}`, so consecutive blocks
/// share the edge `v_{3j} → v_{3j+1}`.
pub fn sphere_chain(k: usize) -> Result<Digraph> {
    at_least("k", k, 1, "k >= 1")?;
    Ok(sphere_chain_named("v", k))
}

/// `k` paths `v0 → v_i → v_{k+1}`.
pub fn lantern(k: usize) -> Result<Digraph> {
    at_least("k", k, 2, "k >= 2")?;
    let mut edges = Vec::new();
    for i in 1..=k {
        edges.extend([(0, i), (i, k + 1)]);
    }
    Ok(graph(k + 2, &edges))
}

/// `multiloop(k)` with a sphere chain of length `l` (vertices `u0 ...`)
/// hanging above its source: `u_{3l+1}` is identified with `v0`.
pub fn mixed(k: usize, l: usize) -> Result<Digraph> {
    let g = multiloop(k);
    if l == 0 {
        return Ok(g);
    }
    let h = sphere_chain_named("u", l);
    glue_at_vertex(&g, &h, "v0", &format!("u{}", 3 * l + 1))
}

/// s → a → b → c → d → a with d → t: one source, one target, one cycle.
pub fn weakly_directed_cycle() -> Digraph {
    Digraph::from_edges(
        &["s", "a", "b", "c", "d", "t"],
        &[
            ("s", "a"),
            ("a", "b"),
            ("b", "c"),
            ("c", "d"),
            ("d", "a"),
            ("d", "t"),
        ],
    )
    .expect("valid fixture")
}

pub fn directed_triangle() -> Digraph {
    graph(3, &[(0, 1), (1, 2), (2, 0)])
}

pub fn transitive_triangle() -> Digraph {
    graph(3, &[(0, 1), (1, 2), (0, 2)])
}

pub fn square() -> Digraph {
    graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

/// Names accepted by [`by_name`], with their parameter counts.
pub const NAMES: &[(&str, usize)] = &[
    ("path_square", 0),
    ("multiloop", 1),
    ("three_square", 0),
    ("tennis", 0),
    ("tennis_diagonal", 0),
    ("sphere_chain", 1),
    ("lantern", 1),
    ("mixed", 2),
    ("weakly_directed_cycle", 0),
    ("directed_triangle", 0),
    ("transitive_triangle", 0),
    ("square", 0),
    ("simplex", 1),
];

/// Looks up a construction by name. Hyphens and underscores are
/// interchangeable.
pub fn by_name(name: &str, params: &[usize]) -> Result<Digraph> {
    let key = name.replace('-', "_");
    let Some(&(canonical, arity)) = NAMES.iter().find(|(n, _)| *n == key) else {
        return Err(Error::GraphFormat(format!(
            "unknown construction {name:?}; expected one of {}",
            NAMES.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        )));
    };
    if params.len() != arity {
        return Err(Error::InvalidParameter {
            name: "parameter count",
            value: params.len() as i64,
            expected: match arity {
                0 => "no parameters",
                1 => "one parameter",
                _ => "two parameters",
            },
        });
    }
    let p = |i: usize| params[i];
    match canonical {
        "path_square" => Ok(path_square()),
        "multiloop" => Ok(multiloop(p(0))),
        "three_square" => Ok(three_square_sphere()),
        "tennis" => Ok(tennis_sphere(false)),
        "tennis_diagonal" => Ok(tennis_sphere(true)),
        "sphere_chain" => sphere_chain(p(0)),
        "lantern" => lantern(p(0)),
        "mixed" => mixed(p(0), p(1)),
        "weakly_directed_cycle" => Ok(weakly_directed_cycle()),
        "directed_triangle" => Ok(directed_triangle()),
        "transitive_triangle" => Ok(transitive_triangle()),
        "square" => Ok(square()),
        "simplex" => Ok(crate::digraph::simplex(p(0))),
        _ => unreachable!("every listed name is handled"),
    }
}
