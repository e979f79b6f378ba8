//! Sparse integer matrices in triplet form.

use std::collections::BTreeMap;

/// Column-major sparse matrix. Entries are kept sorted by `(col, row)`
/// with no explicit zeros and no duplicate positions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Duplicate positions are summed; zero results are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "entry ({r}, {c}) outside {rows}x{cols}"
            );
            *acc.entry((c, r)).or_default() += v;
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((c, r), v)| (r, c, v))
            .collect();
        SparseMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let triplets = dense.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            row.iter().enumerate().map(move |(c, &v)| (r, c, v))
        });
        SparseMatrix::from_triplets(rows, cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `(row, col, value)` sorted by column, then row.
    pub fn triplets(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries
            .binary_search_by(|&(r, c, _)| (c, r).cmp(&(col, row)))
            .map_or(0, |i| self.entries[i].2)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.cols,
            self.rows,
            self.entries.iter().map(|&(r, c, v)| (c, r, v)),
        )
    }

    /// `self · other`. Panics on a dimension mismatch or i64 overflow.
    pub fn multiply(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            by_col[c].push((r, v));
        }
        let mut out = Vec::new();
        for &(k, j, b) in &other.entries {
            for &(i, a) in &by_col[k] {
                let prod = a.checked_mul(b).expect("overflow in sparse multiply");
                out.push((i, j, prod));
            }
        }
        SparseMatrix::from_triplets(self.rows, other.cols, out)
    }
}
