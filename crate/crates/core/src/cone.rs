//! Geometry of finitely generated cones and convex hulls.
//!
//! Every distance is computed exactly by enumerating column subsets: the
//! nearest point of `cone(A)` lies in `cone(A_J)` for some `J` with `A_J`
//! linearly independent, and there it is the orthogonal projection onto
//! `span(A_J)`. A candidate is accepted only if it passes the nearest-point
//! (KKT) conditions, so the returned projection certifies itself.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exec;
use crate::rat::{Rat, RatMat, RatVec};
use crate::ratlin::{self, LinearSolution};
use crate::MAX_COLUMNS;

/// Result of [`independence_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceResult {
    Independent,
    /// Nonzero `lambda` over all columns of `A`, zero outside `J`, with `A lambda = 0`.
    Dependent(RatVec),
}

/// The inhabited column subsets `J` with `A_J` linearly independent, ordered
/// by size and then lexicographically. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndependentFamily {
    subsets: Vec<Vec<usize>>,
}

impl IndependentFamily {
    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn contains(&self, j: &[usize]) -> bool {
        self.subsets.iter().any(|s| s == j)
    }
}

/// Exact nearest point of `b` in `cone(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeProjection {
    /// Independent column subset carrying the nearest point; empty for the apex.
    pub face: Vec<usize>,
    /// Nonnegative weights over `face`.
    pub coefficients: RatVec,
    pub nearest: RatVec,
    /// Squared distance `|b - nearest|^2`.
    pub dist_sq: Rat,
}

impl ConeProjection {
    /// Coefficients scattered over all `n` columns.
    pub fn padded_coefficients(&self, n: usize) -> RatVec {
        self.coefficients.pad(&self.face, n)
    }
}

/// Orthogonal projection onto `span(A_J)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanProjection {
    pub coefficients: RatVec,
    pub nearest: RatVec,
    pub dist_sq: Rat,
}

/// Exact nearest point of `z` in `hull(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullProjection {
    pub dist_sq: Rat,
    pub nearest: RatVec,
    /// Convex weights over all columns.
    pub weights: RatVec,
}

pub(crate) fn check_column_limit(a: &RatMat) -> Result<()> {
    if a.cols() > MAX_COLUMNS {
        return Err(Error::TooLarge {
            cols: a.cols(),
            limit: MAX_COLUMNS,
        });
    }
    Ok(())
}

fn check_index_set(a: &RatMat, j: &[usize]) -> Result<()> {
    if j.is_empty() {
        return Err(Error::Contract("index set must be inhabited".into()));
    }
    if let Some(&k) = j.iter().find(|&&k| k >= a.cols()) {
        return Err(Error::Contract(format!("column index {k} out of range")));
    }
    if !j.iter().tuple_windows().all(|(x, y)| x < y) {
        return Err(Error::Contract(
            "index set must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn check_rows(a: &RatMat, b: &RatVec) -> Result<()> {
    if b.dim() != a.rows() {
        return Err(Error::Dimension(format!(
            "vector has length {}, matrix has {} rows",
            b.dim(),
            a.rows()
        )));
    }
    Ok(())
}

/// All subsets of `{0..n}` of the given size, lexicographically.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Decides linear independence of the columns `J` of `A`.
pub fn independence_witness(a: &RatMat, j: &[usize]) -> Result<IndependenceResult> {
    check_index_set(a, j)?;
    let sub = a.select_columns(j)?;
    Ok(match ratlin::kernel_vector(&sub) {
        None => IndependenceResult::Independent,
        Some(lambda) => IndependenceResult::Dependent(lambda.pad(j, a.cols())),
    })
}

/// Enumerates the family of independent column subsets.
///
/// Subsets larger than `rank(A)` are always dependent and are not visited.
pub fn independent_family(a: &RatMat) -> IndependentFamily {
    let r = ratlin::rank(a);
    let mut subsets = Vec::new();
    for k in 1..=r {
        let level = subsets_of_size(a.cols(), k);
        subsets.extend(exec::filter_map(&level, |j| {
            let sub = a.select_columns(j).expect("valid indices");
            (ratlin::rank(&sub) == k).then(|| j.clone())
        }));
    }
    IndependentFamily { subsets }
}

/// Projects `b` onto `span(A_J)` via the normal equations.
pub fn project_onto_span(a: &RatMat, j: &[usize], b: &RatVec) -> Result<SpanProjection> {
    check_index_set(a, j)?;
    check_rows(a, b)?;
    let g = ratlin::gram(a, j)?;
    let rhs: RatVec = j.iter().map(|&k| a.column(k).dot(b)).collect();
    let coefficients = match ratlin::solve_linear_system(&g, &rhs)? {
        LinearSolution::Solution(x) => x,
        _ => {
            return Err(Error::Contract(format!(
                "columns {j:?} are linearly dependent"
            )))
        }
    };
    let nearest = a.select_columns(j)?.mul_vec(&coefficients);
    let dist_sq = (b - &nearest).norm_sq();
    Ok(SpanProjection {
        coefficients,
        nearest,
        dist_sq,
    })
}

/// Column Gram matrix `A^T A` and `A^T b`, shared by all candidate faces.
struct Normal {
    gram: RatMat,
    rhs: RatVec,
}

impl Normal {
    fn new(a: &RatMat, b: &RatVec) -> Self {
        let at = a.transpose();
        let cols: Vec<RatVec> = (0..a.cols()).map(|j| at.row_vec(j)).collect();
        let gram = RatMat::from_rows(
            cols.iter()
                .map(|ci| cols.iter().map(|cj| ci.dot(cj)).collect())
                .collect(),
        )
        .expect("square gram matrix");
        let rhs = a.vec_mul(b);
        Normal { gram, rhs }
    }

    fn sub_gram(&self, j: &[usize]) -> RatMat {
        RatMat::from_rows(
            j.iter()
                .map(|&r| j.iter().map(|&c| self.gram[(r, c)].clone()).collect())
                .collect(),
        )
        .expect("inhabited face")
    }

    /// `(b - A_J lambda) . a_i` for every column `i`.
    fn residual_dots(&self, j: &[usize], lambda: &RatVec) -> RatVec {
        (0..self.rhs.dim())
            .map(|i| {
                let mut v = self.rhs[i].clone();
                for (&k, l) in j.iter().zip(lambda) {
                    v -= &(&self.gram[(i, k)] * l);
                }
                v
            })
            .collect()
    }
}

fn face_candidate(a: &RatMat, b: &RatVec, normal: &Normal, j: &[usize]) -> Option<ConeProjection> {
    let rhs = normal.rhs.select(j);
    let lambda = match ratlin::solve_linear_system(&normal.sub_gram(j), &rhs).ok()? {
        LinearSolution::Solution(x) => x,
        // singular gram: A_J dependent, not in the family
        _ => return None,
    };
    if !lambda.is_nonneg() {
        return None;
    }
    if normal
        .residual_dots(j, &lambda)
        .iter()
        .any(Rat::is_positive)
    {
        return None;
    }
    let nearest = a.select_columns(j).ok()?.mul_vec(&lambda);
    let residual = b - &nearest;
    if !residual.dot(&nearest).is_zero() {
        return None;
    }
    Some(ConeProjection {
        face: j.to_vec(),
        coefficients: lambda,
        nearest,
        dist_sq: residual.norm_sq(),
    })
}

/// Nearest point without the column limit; used by the reductions, whose
/// derived matrices may exceed it.
pub(crate) fn nearest_in_cone(a: &RatMat, b: &RatVec) -> ConeProjection {
    let normal = Normal::new(a, b);
    // apex
    if normal.rhs.iter().all(|x| !x.is_positive()) {
        return ConeProjection {
            face: Vec::new(),
            coefficients: RatVec::zeros(0),
            nearest: RatVec::zeros(a.rows()),
            dist_sq: b.norm_sq(),
        };
    }
    // The nearest point is unique, so every KKT-certified candidate has the
    // same distance; the first one in subset order is the minimum.
    for k in 1..=ratlin::rank(a) {
        let level = subsets_of_size(a.cols(), k);
        if let Some(p) = exec::find_map_first(&level, |j| face_candidate(a, b, &normal, j)) {
            return p;
        }
    }
    unreachable!("the nearest point of a finitely generated cone lies on an independent face")
}

/// Exact distance from `b` to `cone(A)`, with the certifying nearest point.
pub fn cone_distance(a: &RatMat, b: &RatVec) -> Result<ConeProjection> {
    check_rows(a, b)?;
    check_column_limit(a)?;
    Ok(nearest_in_cone(a, b))
}

/// Exact distance from `z` to the convex hull of the columns of `A`.
pub fn hull_distance(a: &RatMat, z: &RatVec) -> Result<HullProjection> {
    check_rows(a, z)?;
    check_column_limit(a)?;
    let normal = Normal::new(a, z);
    let n = a.cols();
    let max_size = n.min(a.rows() + 1);
    for k in 1..=max_size {
        let level = subsets_of_size(n, k);
        let found = exec::find_map_first(&level, |j| hull_candidate(a, z, &normal, j));
        if let Some(p) = found {
            return Ok(p);
        }
    }
    unreachable!("the nearest point of a polytope lies in an affinely independent simplex")
}

fn hull_candidate(a: &RatMat, z: &RatVec, normal: &Normal, j: &[usize]) -> Option<HullProjection> {
    let k = j.len();
    // [[G_JJ, 1], [1^T, 0]] [lambda; mu] = [A_J^T z; 1]
    let g = normal.sub_gram(j);
    let mut rows: Vec<Vec<Rat>> = (0..k)
        .map(|r| {
            let mut row = g.row(r).to_vec();
            row.push(Rat::one());
            row
        })
        .collect();
    let mut last = vec![Rat::one(); k];
    last.push(Rat::zero());
    rows.push(last);
    let kkt = RatMat::from_rows(rows).ok()?;
    let mut rhs = normal.rhs.select(j).into_entries();
    rhs.push(Rat::one());
    let sol = match ratlin::solve_linear_system(&kkt, &RatVec::new(rhs)).ok()? {
        LinearSolution::Solution(x) => x,
        _ => return None,
    };
    let lambda: RatVec = sol.iter().take(k).cloned().collect();
    if !lambda.is_nonneg() {
        return None;
    }
    let dots = normal.residual_dots(j, &lambda);
    let at_nearest: Rat = j.iter().zip(&lambda).map(|(&i, l)| &dots[i] * l).sum();
    if dots.iter().any(|d| d > &at_nearest) {
        return None;
    }
    let nearest = a.select_columns(j).ok()?.mul_vec(&lambda);
    let dist_sq = (z - &nearest).norm_sq();
    Some(HullProjection {
        dist_sq,
        nearest,
        weights: lambda.pad(j, a.cols()),
    })
}

/// Rewrites the conic combination `A q` on an independent support.
///
/// Returns `(J, q')` with `A_J q' = A q`, `q' >= 0`, `A_J` independent, and
/// `J` empty exactly when `A q = 0`. Each step takes the oriented kernel
/// vector of the current support and moves along it until the first
/// coordinate (smallest index among ties) hits zero.
pub fn caratheodory_reduce(a: &RatMat, q: &RatVec) -> Result<(Vec<usize>, RatVec)> {
    if q.dim() != a.cols() {
        return Err(Error::Dimension(format!(
            "weights have length {}, matrix has {} columns",
            q.dim(),
            a.cols()
        )));
    }
    if !q.is_nonneg() {
        return Err(Error::Contract("conic weights must be nonnegative".into()));
    }
    let mut q = q.clone();
    loop {
        let support: Vec<usize> = (0..q.dim()).filter(|&j| q[j].is_positive()).collect();
        if support.is_empty() {
            return Ok((support, RatVec::zeros(0)));
        }
        let sub = a.select_columns(&support)?;
        let Some(lambda) = ratlin::kernel_vector(&sub) else {
            let weights = q.select(&support);
            return Ok((support, weights));
        };
        let (pos, t) = lambda
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_positive())
            .map(|(p, l)| (p, &q[support[p]] / l))
            .min_by(|(p1, t1), (p2, t2)| t1.cmp(t2).then(p1.cmp(p2)))
            .expect("oriented kernel vector has a positive entry");
        for (&j, l) in support.iter().zip(&lambda) {
            q[j] -= &(&t * l);
        }
        q[support[pos]] = Rat::zero();
    }
}

/// A functional `xi` with `xi . a_i >= 0` for all columns and `xi . b < 0`.
pub fn separating_functional(a: &RatMat, b: &RatVec) -> Result<RatVec> {
    let proj = cone_distance(a, b)?;
    separation_from_projection(a, b, &proj)
}

pub(crate) fn separation_from_projection(
    a: &RatMat,
    b: &RatVec,
    proj: &ConeProjection,
) -> Result<RatVec> {
    if proj.dist_sq.is_zero() {
        return Err(Error::Precondition("b lies in the cone".into()));
    }
    let xi = &proj.nearest - b;
    if a.vec_mul(&xi).iter().any(Rat::is_negative) || !xi.dot(b).is_negative() {
        return Err(Error::Internal(format!(
            "separating functional {xi} failed its check"
        )));
    }
    Ok(xi)
}
