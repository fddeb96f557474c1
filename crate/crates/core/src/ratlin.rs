//! Exact linear algebra over the rationals: row reduction, linear solves,
//! rank, kernel vectors and Gram matrices.
//!
//! Elimination is plain fractional Gauss-Jordan. The pivot in each column is
//! the first nonzero entry at or below the current row, which makes every
//! result a deterministic function of the input.

use crate::error::{Error, Result};
use crate::rat::{Rat, RatMat, RatVec};

/// Outcome of [`solve_linear_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// The unique solution.
    Solution(RatVec),
    /// No solution exists.
    Inconsistent,
    /// Rank-deficient but consistent; free variables are set to zero.
    UnderdeterminedSolution(RatVec),
}

impl LinearSolution {
    /// The solution vector of either solvable variant.
    pub fn into_vec(self) -> Option<RatVec> {
        match self {
            LinearSolution::Solution(x) | LinearSolution::UnderdeterminedSolution(x) => Some(x),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Reduced row echelon form of a matrix held as rows.
struct Echelon {
    rows: Vec<Vec<Rat>>,
    /// `pivots[r]` is the pivot column of row `r`.
    pivots: Vec<usize>,
}

fn row_reduce(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &(&f * p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Solves `M x = v` exactly.
pub fn solve_linear_system(m: &RatMat, v: &RatVec) -> Result<LinearSolution> {
    if v.dim() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            v.dim(),
            m.rows()
        )));
    }
    let n = m.cols();
    let augmented = (0..m.rows())
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(v[i].clone());
            row
        })
        .collect();
    let ech = row_reduce(augmented, n + 1);
    if ech.pivots.last() == Some(&n) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut x = RatVec::zeros(n);
    for (r, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.rows[r][n].clone();
    }
    if ech.pivots.len() == n {
        Ok(LinearSolution::Solution(x))
    } else {
        Ok(LinearSolution::UnderdeterminedSolution(x))
    }
}

/// Exact rank.
pub fn rank(m: &RatMat) -> usize {
    row_reduce(m.to_rows(), m.cols()).pivots.len()
}

/// A nonzero vector `x` with `M x = 0`, or `None` when the columns are
/// independent. The first free column gets coefficient one, the others zero,
/// and the sign is chosen so the first nonzero entry is positive.
pub fn kernel_vector(m: &RatMat) -> Option<RatVec> {
    let n = m.cols();
    let ech = row_reduce(m.to_rows(), n);
    let free = (0..n).find(|c| !ech.pivots.contains(c))?;
    let mut x = RatVec::zeros(n);
    x[free] = Rat::one();
    for (r, &c) in ech.pivots.iter().enumerate() {
        if c < free {
            x[c] = -&ech.rows[r][free];
        }
    }
    Some(orient(x))
}

/// Flips the sign of `x` so that its first nonzero entry is positive.
pub fn orient(x: RatVec) -> RatVec {
    match x.iter().find(|v| !v.is_zero()) {
        Some(first) if first.is_negative() => -&x,
        _ => x,
    }
}

/// Gram matrix `(A_J)^T A_J` of the columns indexed by `J`.
pub fn gram(a: &RatMat, j: &[usize]) -> Result<RatMat> {
    if j.is_empty() {
        return Err(Error::Contract(
            "gram matrix needs an inhabited index set".into(),
        ));
    }
    let cols: Vec<RatVec> = j
        .iter()
        .map(|&k| {
            if k < a.cols() {
                Ok(a.column(k))
            } else {
                Err(Error::Contract(format!("column index {k} out of range")))
            }
        })
        .collect::<Result<_>>()?;
    let rows = cols
        .iter()
        .map(|ci| cols.iter().map(|cj| ci.dot(cj)).collect())
        .collect();
    RatMat::from_rows(rows)
}
