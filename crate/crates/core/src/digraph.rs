//! Finite simple directed graphs with string vertex labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple digraph: no loops, no parallel edges. Vertices are numbered in
/// insertion order and carry unique labels.
#[derive(Clone, Debug, Default)]
pub struct Digraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from labels and label pairs. Edge endpoints that are
    /// not listed among `vertices` are an error.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Digraph::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (u, v) in edges {
            let u = g.require(u.as_ref())?;
            let v = g.require(v.as_ref())?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<usize> {
        if self.index.contains_key(label) {
            return Err(Error::DuplicateVertex(label.to_string()));
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        Ok(id)
    }

    /// Adds `[u, v]`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        assert!(u < self.labels.len() && v < self.labels.len());
        if u == v {
            return Err(Error::SelfLoop(self.labels[u].clone()));
        }
        if !self.edges.insert((u, v)) {
            return Ok(false);
        }
        let pos = self.out[u].binary_search(&v).unwrap_err();
        self.out[u].insert(pos, v);
        let pos = self.inc[v].binary_search(&u).unwrap_err();
        self.inc[v].insert(pos, u);
        Ok(true)
    }

    pub fn add_edge_by_label(&mut self, u: &str, v: &str) -> Result<bool> {
        let u = self.require(u)?;
        let v = self.require(v)?;
        self.add_edge(u, v)
    }

    fn require(&self, label: &str) -> Result<usize> {
        self.vertex_id(label)
            .ok_or_else(|| Error::MissingVertex(label.to_string()))
    }

    pub fn vertex_id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Either direction.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    /// Edges in `(source, target)` vertex-id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Lexicographically sorted label lists.
    pub fn to_json_value(&self) -> GraphJson {
        let mut vertices = self.labels.clone();
        vertices.sort();
        let mut edges: Vec<[String; 2]> = self
            .edges()
            .map(|(u, v)| [self.labels[u].clone(), self.labels[v].clone()])
            .collect();
        edges.sort();
        GraphJson { vertices, edges }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))?;
        let edges: Vec<(String, String)> = data.edges.into_iter().map(|[u, v]| (u, v)).collect();
        Digraph::from_edges(&data.vertices, &edges)
    }

    /// DOT in vertex-id order; edges grouped by source.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for label in &self.labels {
            let _ = writeln!(s, "  {};", dot_quote(label));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(
                s,
                "  {} -> {};",
                dot_quote(&self.labels[u]),
                dot_quote(&self.labels[v])
            );
        }
        s.push_str("}\n");
        s
    }

    /// Subgraph induced on `vertices`, keeping their labels and the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Digraph {
        let mut g = Digraph::new();
        let mut map = HashMap::new();
        for &v in vertices {
            map.insert(v, g.add_vertex(&self.labels[v]).expect("distinct vertices"));
        }
        for &u in vertices {
            for &v in &self.out[u] {
                if let Some(&mv) = map.get(&v) {
                    g.add_edge(map[&u], mv).expect("simple");
                }
            }
        }
        g
    }

    /// Vertices reachable from `v` by directed paths, `v` included.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            out.push(u);
            for &w in &self.out[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Number of weakly connected components.
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &w in self.out[u].iter().chain(&self.inc[u]) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    /// Kahn topological order, or `None` if the graph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.out[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

fn dot_quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// JSON exchange form of a digraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub weakly_connected: bool,
    pub acyclic: bool,
    pub consistently_directed: bool,
}

impl StructureReport {
    /// Connected with a unique source and a unique target; cycles allowed.
    pub fn weakly_directed(&self) -> bool {
        self.weakly_connected && self.sources.len() == 1 && self.targets.len() == 1
    }
}

pub fn analyze(g: &Digraph) -> StructureReport {
    let sources: Vec<String> = (0..g.vertex_count())
        .filter(|&v| g.in_degree(v) == 0)
        .map(|v| g.label(v).to_string())
        .collect();
    let targets: Vec<String> = (0..g.vertex_count())
        .filter(|&v| g.out_degree(v) == 0)
        .map(|v| g.label(v).to_string())
        .collect();
    let weakly_connected = g.vertex_count() > 0 && g.component_count() == 1;
    let acyclic = g.topological_order().is_some();
    let consistently_directed =
        weakly_connected && acyclic && sources.len() == 1 && targets.len() == 1;
    StructureReport {
        sources,
        targets,
        weakly_connected,
        acyclic,
        consistently_directed,
    }
}

/// Label of the product vertex `(u, v)`.
pub fn product_label(u: &str, v: &str) -> String {
    format!("({u}|{v})")
}

/// `G □ H`. Vertex `(u, v)` gets id `u * |V(H)| + v`.
pub fn cartesian_product(g: &Digraph, h: &Digraph) -> Digraph {
    let mut p = Digraph::new();
    let m = h.vertex_count();
    for u in 0..g.vertex_count() {
        for v in 0..m {
            p.add_vertex(&product_label(g.label(u), h.label(v)))
                .expect("product labels are distinct");
        }
    }
    for u in 0..g.vertex_count() {
        for v in 0..m {
            let here = u * m + v;
            for &v2 in h.out_neighbors(v) {
                p.add_edge(here, u * m + v2).expect("simple");
            }
            for &u2 in g.out_neighbors(u) {
                p.add_edge(here, u2 * m + v).expect("simple");
            }
        }
    }
    p
}

/// Disjoint union of `g` and `h` with `vg` identified with `vh`. The glued
/// vertex keeps `g`'s label. If some other label of `h` clashes with a label
/// of `g`, every label of `h` is suffixed with `'` until the clash is gone.
pub fn glue_at_vertex(g: &Digraph, h: &Digraph, vg: &str, vh: &str) -> Result<Digraph> {
    let vg = g.require(vg)?;
    let vh = h.require(vh)?;

    let mut suffix = String::new();
    while (0..h.vertex_count())
        .filter(|&v| v != vh)
        .any(|v| g.index.contains_key(&format!("{}{}", h.label(v), suffix)))
    {
        suffix.push('\'');
    }

    let mut out = g.clone();
    let map = (0..h.vertex_count())
        .map(|v| {
            if v == vh {
                Ok(vg)
            } else {
                out.add_vertex(&format!("{}{}", h.label(v), suffix))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    for (u, v) in h.edges() {
        out.add_edge(map[u], map[v])?;
    }
    Ok(out)
}

/// Color refinement on (in-degree, out-degree) seeds. Returns a stable
/// color per vertex; isomorphisms must preserve colors.
fn refine_colors(graphs: [&Digraph; 2]) -> [Vec<usize>; 2] {
    let mut colors: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut palette: HashMap<(usize, usize), usize> = HashMap::new();
    for (gi, g) in graphs.iter().enumerate() {
        colors[gi] = (0..g.vertex_count())
            .map(|v| {
                let key = (g.in_degree(v), g.out_degree(v));
                let next = palette.len();
                *palette.entry(key).or_insert(next)
            })
            .collect();
    }
    let mut classes = palette.len();
    loop {
        let mut palette: HashMap<(usize, Vec<usize>, Vec<usize>), usize> = HashMap::new();
        let mut next_colors: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (gi, g) in graphs.iter().enumerate() {
            next_colors[gi] = (0..g.vertex_count())
                .map(|v| {
                    let mut outs: Vec<usize> =
                        g.out_neighbors(v).iter().map(|&w| colors[gi][w]).collect();
                    let mut ins: Vec<usize> =
                        g.in_neighbors(v).iter().map(|&w| colors[gi][w]).collect();
                    outs.sort_unstable();
                    ins.sort_unstable();
                    let key = (colors[gi][v], outs, ins);
                    let next = palette.len();
                    *palette.entry(key).or_insert(next)
                })
                .collect();
        }
        colors = next_colors;
        if palette.len() == classes {
            return colors;
        }
        classes = palette.len();
    }
}

/// Directed-graph isomorphism by backtracking over refined color classes.
/// Returns `map` with `map[v]` the image in `h` of vertex `v` of `g`.
pub fn find_isomorphism(g: &Digraph, h: &Digraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let [cg, ch] = refine_colors([g, h]);
    let mut hist_g = cg.clone();
    let mut hist_h = ch.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return None;
    }

    // Visit g's vertices so that each one (after the first of its component)
    // has an already-placed neighbor; rarer colors first.
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &cg {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (class_size[&cg[v]], v))
            .expect("unplaced vertex");
        placed[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = g
                .out_neighbors(u)
                .iter()
                .chain(g.in_neighbors(u))
                .copied()
                .filter(|&w| !placed[w])
                .collect();
            next.sort_unstable_by_key(|&w| (class_size[&cg[w]], w));
            next.dedup();
            for w in next {
                if !placed[w] {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut by_color: HashMap<usize, Vec<usize>> = HashMap::new();
    for (v, &c) in ch.iter().enumerate() {
        by_color.entry(c).or_default().push(v);
    }
    for list in by_color.values_mut() {
        list.sort_by(|&a, &b| {
            (h.in_degree(a), h.out_degree(a), h.label(a)).cmp(&(
                h.in_degree(b),
                h.out_degree(b),
                h.label(b),
            ))
        });
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend_isomorphism(g, h, &order, 0, &cg, &by_color, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_isomorphism(
    g: &Digraph,
    h: &Digraph,
    order: &[usize],
    depth: usize,
    cg: &[usize],
    by_color: &HashMap<usize, Vec<usize>>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    // Restrict candidates through an already-mapped neighbor when possible.
    let anchor = g
        .in_neighbors(v)
        .iter()
        .map(|&u| (u, true))
        .chain(g.out_neighbors(v).iter().map(|&u| (u, false)))
        .find(|&(u, _)| map[u] != usize::MAX);
    let candidates: Vec<usize> = match anchor {
        Some((u, true)) => h.out_neighbors(map[u]).to_vec(),
        Some((u, false)) => h.in_neighbors(map[u]).to_vec(),
        None => by_color[&cg[v]].clone(),
    };
    let color_ok: &Vec<usize> = &by_color[&cg[v]];
    for x in candidates {
        if used[x] || !color_ok.contains(&x) {
            continue;
        }
        let consistent = g
            .out_neighbors(v)
            .iter()
            .all(|&w| map[w] == usize::MAX || h.has_edge(x, map[w]))
            && g.in_neighbors(v)
                .iter()
                .all(|&w| map[w] == usize::MAX || h.has_edge(map[w], x))
            && {
                let mapped_out = g
                    .out_neighbors(v)
                    .iter()
                    .filter(|&&w| map[w] != usize::MAX)
                    .count();
                let mapped_in = g
                    .in_neighbors(v)
                    .iter()
                    .filter(|&&w| map[w] != usize::MAX)
                    .count();
                let h_out = h.out_neighbors(x).iter().filter(|&&y| used[y]).count();
                let h_in = h.in_neighbors(x).iter().filter(|&&y| used[y]).count();
                mapped_out == h_out && mapped_in == h_in
            };
        if !consistent {
            continue;
        }
        map[v] = x;
        used[x] = true;
        if extend_isomorphism(g, h, order, depth + 1, cg, by_color, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[x] = false;
    }
    false
}

pub fn is_isomorphic(g: &Digraph, h: &Digraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Checks that `map` is a bijection preserving edges in both directions.
pub fn verify_isomorphism(g: &Digraph, h: &Digraph, map: &[usize]) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || map.len() != n || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    g.edges().all(|(u, v)| h.has_edge(map[u], map[v]))
}

/// The simplicial digraph `Δ^n` on `v0 .. vn`.
pub fn simplex(n: usize) -> Digraph {
    let mut g = Digraph::new();
    for i in 0..=n {
        g.add_vertex(&format!("v{i}")).expect("fresh");
    }
    for i in 0..=n {
        for j in i + 1..=n {
            g.add_edge(i, j).expect("simple");
        }
    }
    g
}
