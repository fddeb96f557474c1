//! Exact linear programming in standard form.
//!
//! Primal: minimise `c·x` subject to `A x = b`, `x >= 0`.
//! Dual:   maximise `b·u` subject to `u A <= c`.
//!
//! [`solve_lp`] decides feasibility and boundedness with Farkas certificates,
//! then enumerates basic feasible solutions and recovers a dual vector on an
//! extension of the optimal support. Every outcome is re-checked before it
//! is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::alternatives::{farkas_unchecked, FarkasCertificate, Verdict};
use crate::cone::{check_column_limit, subsets_of_size};
use crate::error::{Error, Result};
use crate::exec;
use crate::rat::{Rat, RatMat, RatVec};
use crate::ratlin::{self, LinearSolution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    a: RatMat,
    b: RatVec,
    c: RatVec,
}

impl LpProblem {
    pub fn new(a: RatMat, b: RatVec, c: RatVec) -> Result<Self> {
        if b.dim() != a.rows() || c.dim() != a.cols() {
            return Err(Error::Dimension(format!(
                "A is {}x{}, b has length {}, c has length {}",
                a.rows(),
                a.cols(),
                b.dim(),
                c.dim()
            )));
        }
        Ok(LpProblem { a, b, c })
    }

    pub fn a(&self) -> &RatMat {
        &self.a
    }

    pub fn b(&self) -> &RatVec {
        &self.b
    }

    pub fn c(&self) -> &RatVec {
        &self.c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Optimal primal `x`, dual `u`, and the common value `c·x = b·u`.
    Optimal { x: RatVec, u: RatVec, value: Rat },
    /// `xi A >= 0` and `xi b < 0`.
    PrimalInfeasible { xi: RatVec },
    /// `ray >= 0`, `A ray = 0`, `c·ray < 0`.
    PrimalUnbounded { ray: RatVec },
}

/// Accepts iff `x` is primal feasible, `u` dual feasible and `c·x = b·u`,
/// which makes both optimal by weak duality.
pub fn check_optimal_pair(prob: &LpProblem, x: &RatVec, u: &RatVec) -> Verdict {
    if x.dim() != prob.a.cols() || u.dim() != prob.a.rows() {
        return Verdict::Reject("dimension mismatch".into());
    }
    if !x.is_nonneg() {
        return Verdict::Reject("x ∉ X_n".into());
    }
    if prob.a.mul_vec(x) != prob.b {
        return Verdict::Reject("A·x ≠ b".into());
    }
    let reduced = prob.a.vec_mul(u);
    if let Some(j) = (0..reduced.dim()).find(|&j| reduced[j] > prob.c[j]) {
        return Verdict::Reject(format!("(u·A)_{} > c_{}", j + 1, j + 1));
    }
    let primal = prob.c.dot(x);
    let dual = prob.b.dot(u);
    if primal != dual {
        return Verdict::Reject(format!("gap: c·x = {primal} ≠ {dual} = b·u"));
    }
    Verdict::Accept
}

/// Recovers a primal optimum from a dual optimum by complementary slackness.
///
/// Columns with slack `(u A)_i < c_i` must carry zero weight; `b` is then
/// expressed as a conic combination of the tight columns. If that fails the
/// separating functional `xi` shows `u - t xi` is a better dual point.
pub fn primal_from_dual(prob: &LpProblem, u: &RatVec) -> Result<RatVec> {
    let (a, b, c) = (&prob.a, &prob.b, &prob.c);
    if u.dim() != a.rows() {
        return Err(Error::Dimension(format!(
            "dual vector has length {}, expected {}",
            u.dim(),
            a.rows()
        )));
    }
    check_column_limit(a)?;
    let reduced = a.vec_mul(u);
    if (0..a.cols()).any(|j| reduced[j] > c[j]) {
        return Err(Error::Precondition(
            "u is not dual feasible: u·A ≰ c".into(),
        ));
    }
    let n = a.cols();
    if b.is_zero() {
        return Ok(RatVec::zeros(n));
    }
    let tight: Vec<usize> = (0..n).filter(|&j| reduced[j] == c[j]).collect();
    let sub = if tight.is_empty() {
        RatMat::zeros(a.rows(), 1)
    } else {
        a.select_columns(&tight)?
    };
    let x = match farkas_unchecked(&sub, b)? {
        FarkasCertificate::Separation { xi } => return Err(Error::NotDualOptimal { xi }),
        FarkasCertificate::Combination { q } => q.pad(&tight, n),
    };
    match check_optimal_pair(prob, &x, u) {
        Verdict::Accept => Ok(x),
        Verdict::Reject(why) => Err(Error::Internal(format!("recovered primal rejected: {why}"))),
    }
}

/// Scales a nonzero vector to the primitive integer vector on its ray.
fn primitive(v: RatVec) -> RatVec {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v;
    }
    ints.into_iter()
        .map(|x| Rat::from(BigRational::from_integer(x / &gcd)))
        .collect()
}

/// A basic feasible solution: support `J` (independent columns) and `x`.
#[derive(Debug, Clone)]
pub(crate) struct Vertex {
    pub support: Vec<usize>,
    pub x: RatVec,
}

/// All basic feasible solutions of `{x >= 0, A x = b}`, in subset order
/// (size, then lexicographic). The empty support appears when `b = 0`.
pub(crate) fn basic_feasible_solutions(a: &RatMat, b: &RatVec) -> Vec<Vertex> {
    let n = a.cols();
    let mut out = Vec::new();
    if b.is_zero() {
        out.push(Vertex {
            support: Vec::new(),
            x: RatVec::zeros(n),
        });
    }
    for k in 1..=ratlin::rank(a) {
        let level = subsets_of_size(n, k);
        out.extend(exec::filter_map(&level, |j| {
            let sub = a.select_columns(j).ok()?;
            match ratlin::solve_linear_system(&sub, b).ok()? {
                LinearSolution::Solution(xj) if xj.is_positive() => Some(Vertex {
                    support: j.clone(),
                    x: xj.pad(j, n),
                }),
                _ => None,
            }
        }));
    }
    out
}

/// Finds `u` with `u a_j = c_j` on `support` and `u A <= c`, by extending the
/// support to a maximal independent column set `B` and solving `u A_B = c_B`.
fn recover_dual(a: &RatMat, c: &RatVec, support: &[usize]) -> Option<RatVec> {
    let r = ratlin::rank(a);
    let m = a.rows();
    let feasible = |u: &RatVec| {
        let red = a.vec_mul(u);
        (0..a.cols()).all(|j| red[j] <= c[j])
    };
    if r == 0 {
        let u = RatVec::zeros(m);
        return feasible(&u).then_some(u);
    }
    let rest: Vec<usize> = (0..a.cols()).filter(|j| !support.contains(j)).collect();
    let extensions = subsets_of_size(rest.len(), r - support.len());
    exec::find_map_first(&extensions, |ext| {
        let mut basis: Vec<usize> = support
            .iter()
            .copied()
            .chain(ext.iter().map(|&i| rest[i]))
            .collect();
        basis.sort_unstable();
        let sub = a.select_columns(&basis).ok()?;
        if ratlin::rank(&sub) != r {
            return None;
        }
        let u = ratlin::solve_linear_system(&sub.transpose(), &c.select(&basis))
            .ok()?
            .into_vec()?;
        feasible(&u).then_some(u)
    })
}

/// Solves the primal/dual pair exactly.
pub fn solve_lp(prob: &LpProblem) -> Result<LpOutcome> {
    check_column_limit(&prob.a)?;
    solve_lp_unchecked(prob)
}

pub(crate) fn solve_lp_unchecked(prob: &LpProblem) -> Result<LpOutcome> {
    let (a, b, c) = (&prob.a, &prob.b, &prob.c);
    if let FarkasCertificate::Separation { xi } = farkas_unchecked(a, b)? {
        return Ok(LpOutcome::PrimalInfeasible { xi });
    }

    // A recession ray with c·r = -1 exists iff (0, -1) lies in cone((A over c)).
    let stacked = a.vcat(&RatMat::from_rows(vec![c.entries().to_vec()])?)?;
    let mut target = RatVec::zeros(a.rows() + 1);
    target[a.rows()] = -Rat::one();
    if let FarkasCertificate::Combination { q } = farkas_unchecked(&stacked, &target)? {
        let ray = primitive(q);
        if !ray.is_nonneg() || !a.mul_vec(&ray).is_zero() || !c.dot(&ray).is_negative() {
            return Err(Error::Internal(format!(
                "recession ray {ray} failed its check"
            )));
        }
        return Ok(LpOutcome::PrimalUnbounded { ray });
    }

    let best = basic_feasible_solutions(a, b)
        .into_iter()
        .map(|v| (c.dot(&v.x), v))
        .reduce(|best, cur| if cur.0 < best.0 { cur } else { best })
        .ok_or_else(|| Error::Internal("feasible bounded program without a vertex".into()))?;
    let (value, vertex) = best;
    let u = recover_dual(a, c, &vertex.support)
        .ok_or_else(|| Error::Internal("no dual vector complements the optimal basis".into()))?;
    match check_optimal_pair(prob, &vertex.x, &u) {
        Verdict::Accept => Ok(LpOutcome::Optimal {
            x: vertex.x,
            u,
            value,
        }),
        Verdict::Reject(why) => Err(Error::Internal(format!("optimal pair rejected: {why}"))),
    }
}
