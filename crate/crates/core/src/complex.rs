//! Prodsimplicial cells of a digraph and the chain complex they span.
//!
//! A cell of shape `(n_1, ..., n_k)` is a product `Δ^{n_1} □ ... □ Δ^{n_k}`
//! whose vertex grid sits in the host graph with the product skeleton as its
//! induced subgraph. Grids are stored row-major with factor 0 most
//! significant. Factors are ordered by dimension (descending) and, within
//! equal dimension, by their fibers through the grid origin; that ordering
//! is the orientation representative.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::budget::Deadline;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProdCell {
    dims: Vec<usize>,
    grid: Vec<usize>,
}

impl ProdCell {
    pub fn vertex(v: usize) -> Self {
        ProdCell {
            dims: Vec::new(),
            grid: vec![v],
        }
    }

    /// A simplex on vertices listed in topological order.
    pub fn simplex(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty());
        if vertices.len() == 1 {
            return ProdCell::vertex(vertices[0]);
        }
        ProdCell {
            dims: vec![vertices.len() - 1],
            grid: vertices,
        }
    }

    /// Builds a cell from its factor dimensions and row-major grid, putting
    /// the factors into canonical order. Returns the cell and the sign of the
    /// reordering relative to the given factor order.
    pub fn from_grid(dims: Vec<usize>, grid: Vec<usize>) -> (Self, i64) {
        assert_eq!(grid.len(), dims.iter().map(|n| n + 1).product::<usize>());
        canonicalize(dims, grid)
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Factor dimensions, descending. Empty for a vertex.
    pub fn shape(&self) -> &[usize] {
        &self.dims
    }

    pub fn grid(&self) -> &[usize] {
        &self.grid
    }

    pub fn is_simplex(&self) -> bool {
        self.dims.len() <= 1
    }

    /// Vertex tuple of each factor, taken along the fiber through the
    /// grid origin.
    pub fn factors(&self) -> Vec<Vec<usize>> {
        let strides = strides(&self.dims);
        self.dims
            .iter()
            .zip(&strides)
            .map(|(&n, &s)| (0..=n).map(|j| self.grid[j * s]).collect())
            .collect()
    }

    /// Signed facets by the product rule. The facet deleting vertex `j` of
    /// factor `i` has sign `(-1)^(α(i) + j)` with `α(i)` the sum of the
    /// preceding factor dimensions, times the reordering sign.
    pub fn facets(&self) -> Result<Vec<(ProdCell, i64)>> {
        if self.dims.is_empty() {
            return Err(Error::ZeroDimensionalCell);
        }
        let mut out = Vec::with_capacity(self.dims.iter().map(|n| n + 1).sum());
        let strides = strides(&self.dims);
        let mut alpha = 0;
        for (i, &n) in self.dims.iter().enumerate() {
            for j in 0..=n {
                let grid: Vec<usize> = self
                    .grid
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| (p / strides[i]) % (n + 1) != j)
                    .map(|(_, &v)| v)
                    .collect();
                let mut dims = self.dims.clone();
                if n == 1 {
                    dims.remove(i);
                } else {
                    dims[i] = n - 1;
                }
                let (cell, sign) = canonicalize(dims, grid);
                let base = if (alpha + j) % 2 == 0 { 1 } else { -1 };
                out.push((cell, base * sign));
            }
            alpha += n;
        }
        Ok(out)
    }

    pub fn labels(&self, g: &Digraph) -> Vec<Vec<String>> {
        self.factors()
            .into_iter()
            .map(|f| f.into_iter().map(|v| g.label(v).to_string()).collect())
            .collect()
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * (dims[i + 1] + 1);
    }
    s
}

/// Sorts factors by (dim desc, origin fiber) and permutes the grid to match.
/// The sign is the Koszul sign: `(-1)^(n_a n_b)` per inverted pair.
fn canonicalize(dims: Vec<usize>, grid: Vec<usize>) -> (ProdCell, i64) {
    if dims.len() <= 1 {
        let cell = if dims.is_empty() {
            ProdCell::vertex(grid[0])
        } else {
            ProdCell { dims, grid }
        };
        return (cell, 1);
    }
    let old_strides = strides(&dims);
    // Fibers through the origin are distinct after their first vertex, so
    // comparing the second vertex is enough to order equal-dimension factors.
    let key = |i: usize| (std::cmp::Reverse(dims[i]), grid[old_strides[i]]);
    let mut order: Vec<usize> = (0..dims.len()).collect();
    order.sort_by_key(|&i| key(i));
    if order.iter().enumerate().all(|(a, &b)| a == b) {
        return (ProdCell { dims, grid }, 1);
    }
    let mut sign = 1;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && (dims[order[a]] * dims[order[b]]) % 2 == 1 {
                sign = -sign;
            }
        }
    }
    let new_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
    let new_strides = strides(&new_dims);
    let mut new_grid = vec![0; grid.len()];
    for (p, &v) in grid.iter().enumerate() {
        let q: usize = order
            .iter()
            .enumerate()
            .map(|(slot, &i)| ((p / old_strides[i]) % (dims[i] + 1)) * new_strides[slot])
            .sum();
        new_grid[q] = v;
    }
    (
        ProdCell {
            dims: new_dims,
            grid: new_grid,
        },
        sign,
    )
}

/// Vertex sets inducing a transitive tournament, by dimension, each listed
/// once in topological order. Index `n` holds the `n`-simplices.
pub fn enumerate_simplices(g: &Digraph, max_dim: usize) -> Vec<Vec<ProdCell>> {
    let mut out: Vec<Vec<ProdCell>> = vec![Vec::new(); max_dim + 1];
    let mut stack = Vec::with_capacity(max_dim + 1);
    for v in 0..g.vertex_count() {
        stack.push(v);
        extend_clique(g, max_dim, &mut stack, &mut out);
        stack.pop();
    }
    for cells in &mut out {
        cells.sort();
    }
    out
}

fn extend_clique(g: &Digraph, max_dim: usize, stack: &mut Vec<usize>, out: &mut [Vec<ProdCell>]) {
    out[stack.len() - 1].push(ProdCell::simplex(stack.clone()));
    if stack.len() > max_dim {
        return;
    }
    let last = *stack.last().expect("nonempty");
    for &w in g.out_neighbors(last) {
        let fits = stack.iter().all(|&u| g.has_edge(u, w) && !g.has_edge(w, u));
        if fits {
            stack.push(w);
            extend_clique(g, max_dim, stack, out);
            stack.pop();
        }
    }
}

/// Partitions of `n` into at least two parts, each part descending.
fn product_shapes(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Grid geometry for one shape: for each position, the earlier positions
/// joined to it by a skeleton edge, and the positions of the unit vectors.
struct ShapePlan {
    dims: Vec<usize>,
    preds: Vec<Vec<usize>>,
    /// `(position of e_i, position of e_{i+1})` for adjacent equal factors.
    symmetry: Vec<(usize, usize)>,
}

impl ShapePlan {
    fn new(dims: &[usize]) -> Self {
        let st = strides(dims);
        let size: usize = dims.iter().map(|n| n + 1).product();
        let preds = (0..size)
            .map(|p| {
                let mut v = Vec::new();
                for (i, &n) in dims.iter().enumerate() {
                    let c = (p / st[i]) % (n + 1);
                    for lower in 0..c {
                        v.push(p - (c - lower) * st[i]);
                    }
                }
                v
            })
            .collect();
        let symmetry = (0..dims.len().saturating_sub(1))
            .filter(|&i| dims[i] == dims[i + 1])
            .map(|i| (st[i], st[i + 1]))
            .collect();
        ShapePlan {
            dims: dims.to_vec(),
            preds,
            symmetry,
        }
    }
}

/// All induced product cells of the given shape, in canonical form.
fn cells_of_shape(g: &Digraph, dims: &[usize], deadline: &Deadline) -> Result<Vec<ProdCell>> {
    let plan = ShapePlan::new(dims);
    let size = plan.preds.len();
    let mut grid = Vec::with_capacity(size);
    let mut used = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if v % 64 == 0 {
            deadline.check()?;
        }
        grid.push(v);
        used[v] = true;
        place_grid(g, &plan, &mut grid, &mut used, &mut out);
        used[v] = false;
        grid.pop();
    }
    out.sort();
    Ok(out)
}

fn place_grid(
    g: &Digraph,
    plan: &ShapePlan,
    grid: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<ProdCell>,
) {
    let p = grid.len();
    if p == plan.preds.len() {
        out.push(ProdCell {
            dims: plan.dims.clone(),
            grid: grid.clone(),
        });
        return;
    }
    let preds = &plan.preds[p];
    let anchor = preds
        .iter()
        .copied()
        .min_by_key(|&q| g.out_degree(grid[q]))
        .expect("every position after the origin has a predecessor");
    // e_{i+1} is placed before e_i; canonical order wants grid[e_i] smaller.
    let upper_bound = plan
        .symmetry
        .iter()
        .find(|&&(ei, _)| ei == p)
        .map(|&(_, next)| grid[next]);
    for &w in g.out_neighbors(grid[anchor]) {
        if used[w] || upper_bound.is_some_and(|b| w >= b) {
            continue;
        }
        let ok = (0..p).all(|q| {
            let required = preds.contains(&q);
            let u = grid[q];
            g.has_edge(u, w) == required && !g.has_edge(w, u)
        });
        if ok {
            grid.push(w);
            used[w] = true;
            place_grid(g, plan, grid, used, out);
            used[w] = false;
            grid.pop();
        }
    }
}

/// Product cells of dimension 2 through `max_dim`, by dimension. Index `n`
/// holds the `n`-cells with at least two factors.
pub fn enumerate_prod_cells(g: &Digraph, max_dim: usize) -> Vec<Vec<ProdCell>> {
    enumerate_prod_cells_within(g, max_dim, &Deadline::none()).expect("no deadline")
}

pub fn enumerate_prod_cells_within(
    g: &Digraph,
    max_dim: usize,
    deadline: &Deadline,
) -> Result<Vec<Vec<ProdCell>>> {
    let mut out = vec![Vec::new(); max_dim + 1];
    for (n, cells) in out.iter_mut().enumerate().skip(2) {
        for shape in product_shapes(n) {
            cells.extend(cells_of_shape(g, &shape, deadline)?);
        }
        cells.sort();
    }
    Ok(out)
}

/// Cells graded by dimension with boundary matrices `∂_n : C_n → C_{n-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    labels: Vec<String>,
    max_dim: usize,
    cells: Vec<Vec<ProdCell>>,
    index: Vec<HashMap<ProdCell, usize>>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// The dimension cap the complex was built with.
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Highest dimension with a graded slot, equal to `max_dim`.
    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, n: usize) -> &[ProdCell] {
        self.cells.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn cell_count(&self, n: usize) -> usize {
        self.cells(n).len()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn position(&self, cell: &ProdCell) -> Option<usize> {
        self.index.get(cell.dim())?.get(cell).copied()
    }

    pub fn boundary(&self, n: usize) -> Result<&SparseMatrix> {
        if n == 0 || n > self.top_dim() {
            return Err(Error::DimensionOutOfRange {
                dim: n,
                top: self.top_dim(),
            });
        }
        Ok(&self.boundaries[n])
    }

    /// Replaces `∂_n`. Used to build deliberately broken fixtures.
    pub fn set_boundary(&mut self, n: usize, m: SparseMatrix) -> Result<()> {
        self.boundary(n)?;
        assert_eq!(
            (m.rows(), m.cols()),
            (self.cell_count(n - 1), self.cell_count(n))
        );
        self.boundaries[n] = m;
        Ok(())
    }

    pub fn to_json_value(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|c| {
                        let factors: Vec<Vec<&str>> = if c.dims.is_empty() {
                            vec![vec![self.labels[c.grid[0]].as_str()]]
                        } else {
                            c.factors()
                                .into_iter()
                                .map(|f| f.into_iter().map(|v| self.labels[v].as_str()).collect())
                                .collect()
                        };
                        json!(factors)
                    })
                    .collect()
            })
            .collect();
        let boundaries: Vec<Value> = (1..self.cells.len())
            .map(|n| {
                let m = &self.boundaries[n];
                json!({
                    "dim": n,
                    "rows": m.rows(),
                    "cols": m.cols(),
                    "entries": m.triplets().iter().map(|&(r, c, v)| json!([r, c, v])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"max_dim": self.max_dim, "cells": cells, "boundaries": boundaries})
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("complex json")
    }
}

pub fn build_complex(g: &Digraph, max_dim: usize) -> ChainComplex {
    build_complex_within(g, max_dim, &Deadline::none()).expect("no deadline")
}

/// All simplices and product cells up to `max_dim` with their boundaries.
pub fn build_complex_within(
    g: &Digraph,
    max_dim: usize,
    deadline: &Deadline,
) -> Result<ChainComplex> {
    let mut cells = enumerate_simplices(g, max_dim);
    if max_dim >= 2 {
        let prods = enumerate_prod_cells_within(g, max_dim, deadline)?;
        for (level, extra) in cells.iter_mut().zip(prods) {
            level.extend(extra);
            level.sort();
        }
    }
    let index: Vec<HashMap<ProdCell, usize>> = cells
        .iter()
        .map(|level| {
            level
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (c, i))
                .collect()
        })
        .collect();
    let mut boundaries = vec![SparseMatrix::zeros(0, cells[0].len())];
    for n in 1..=max_dim {
        deadline.check()?;
        let triplets = cells[n].iter().enumerate().flat_map(|(col, cell)| {
            let rows = &index[n - 1];
            cell.facets()
                .expect("positive dimension")
                .into_iter()
                .map(move |(f, s)| (*rows.get(&f).expect("facet is a stored cell"), col, s))
        });
        boundaries.push(SparseMatrix::from_triplets(
            cells[n - 1].len(),
            cells[n].len(),
            triplets,
        ));
    }
    Ok(ChainComplex {
        labels: g.labels().to_vec(),
        max_dim,
        cells,
        index,
        boundaries,
    })
}
