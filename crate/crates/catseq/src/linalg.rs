//! Exact row reduction over Q or F_p: incremental reduced row echelon bases,
//! rank, membership and subspace containment.

use crate::field::{Field, Scalar};

/// A subspace of k^n kept as a reduced row echelon basis. Rows are ordered by
/// pivot column, every pivot is 1, and pivot columns are cleared in all other
/// rows, so equal subspaces have identical representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpace {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Field, ncols: usize) -> RowSpace {
        RowSpace { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Reduce `row` against the basis, leaving only non-pivot coordinates.
    fn reduce(&self, row: &mut [Scalar]) {
        assert_eq!(row.len(), self.ncols);
        let f = &self.field;
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for j in p..self.ncols {
                    let t = f.mul(&c, &r[j]);
                    row[j] = f.sub(&row[j], &t);
                }
            }
        }
    }

    /// Insert a vector, extending the basis if it is independent of the rows
    /// already present. Returns true when the rank grew.
    pub fn insert(&mut self, mut row: Vec<Scalar>) -> bool {
        self.reduce(&mut row);
        let f = self.field;
        let Some(pivot) = row.iter().position(|c| !f.is_zero(c)) else {
            return false;
        };
        // normalize the pivot to 1
        let inv = f.inv(&row[pivot]);
        for c in row.iter_mut() {
            *c = f.mul(c, &inv);
        }
        // clear the new pivot column from existing rows
        for r in self.rows.iter_mut() {
            if !f.is_zero(&r[pivot]) {
                let c = r[pivot].clone();
                for j in 0..self.ncols {
                    let t = f.mul(&c, &row[j]);
                    r[j] = f.sub(&r[j], &t);
                }
            }
        }
        let at = self.pivots.iter().position(|&p| p > pivot).unwrap_or(self.pivots.len());
        self.pivots.insert(at, pivot);
        self.rows.insert(at, row);
        true
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        r.iter().all(|c| self.field.is_zero(c))
    }

    pub fn contains_space(&self, other: &RowSpace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Rank of a matrix by plain Gaussian elimination, written independently of
/// [`RowSpace`] so the two can be checked against each other.
pub fn rank_naive(field: Field, matrix: &[Vec<Scalar>]) -> usize {
    let Some(ncols) = matrix.first().map(Vec::len) else { return 0 };
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..m.len()).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = field.inv(&m[rank][col]);
        for r in 0..m.len() {
            if r != rank && !field.is_zero(&m[r][col]) {
                let factor = field.mul(&m[r][col], &inv);
                for j in col..ncols {
                    let t = field.mul(&factor, &m[rank][j]);
                    m[r][j] = field.sub(&m[r][j], &t);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
