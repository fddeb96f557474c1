//! Two-player zero-sum matrix games. The row player maximises `p·A·q`.

use serde::{Deserialize, Serialize};

use crate::alternatives::Verdict;
use crate::cone::check_column_limit;
use crate::error::{Error, Result};
use crate::exec;
use crate::lp::{basic_feasible_solutions, solve_lp_unchecked, LpOutcome, LpProblem};
use crate::rat::{Rat, RatMat, RatVec};

/// Game value with a pair of optimal mixed strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSolution {
    pub value: Rat,
    #[serde(rename = "p")]
    pub row_strategy: RatVec,
    #[serde(rename = "q")]
    pub col_strategy: RatVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Uniqueness {
    Unique(GameSolution),
    /// Two distinct optimal strategy pairs.
    Multiple(GameSolution, GameSolution),
}

fn check_size(a: &RatMat) -> Result<()> {
    check_column_limit(a)?;
    check_column_limit(&a.transpose())
}

/// Standard form of the row player's program over `(p, v+, v-, s)`:
/// `p·A - v 1 - s = 0`, `sum p = 1`, minimising `-v`.
fn row_program(a: &RatMat) -> LpProblem {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rat> = (0..m).map(|i| a[(i, j)].clone()).collect();
            row.push(-Rat::one());
            row.push(Rat::one());
            row.extend((0..n).map(|k| if k == j { -Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let mut last = vec![Rat::one(); m];
    last.extend(std::iter::repeat_n(Rat::zero(), n + 2));
    rows.push(last);
    let mut b = RatVec::zeros(n + 1);
    b[n] = Rat::one();
    let mut cost = RatVec::zeros(m + n + 2);
    cost[m] = -Rat::one();
    cost[m + 1] = Rat::one();
    LpProblem::new(RatMat::from_rows(rows).expect("rectangular"), b, cost)
        .expect("consistent shapes")
}

/// Column player's program over `(q, w+, w-, t)`:
/// `A q - w 1 + t = 0`, `sum q = 1`, minimising `w`.
fn col_program(a: &RatMat) -> LpProblem {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(-Rat::one());
            row.push(Rat::one());
            row.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let mut last = vec![Rat::one(); n];
    last.extend(std::iter::repeat_n(Rat::zero(), m + 2));
    rows.push(last);
    let mut b = RatVec::zeros(m + 1);
    b[m] = Rat::one();
    let mut cost = RatVec::zeros(n + m + 2);
    cost[n] = Rat::one();
    cost[n + 1] = -Rat::one();
    LpProblem::new(RatMat::from_rows(rows).expect("rectangular"), b, cost)
        .expect("consistent shapes")
}

fn optimal(prob: &LpProblem) -> Result<(RatVec, RatVec, Rat)> {
    match solve_lp_unchecked(prob)? {
        LpOutcome::Optimal { x, u, value } => Ok((x, u, value)),
        other => Err(Error::Internal(format!(
            "game program not optimal: {other:?}"
        ))),
    }
}

/// Solves the game: `p` from the row player's program, `q` from its dual.
pub fn solve_game(a: &RatMat) -> Result<GameSolution> {
    check_size(a)?;
    let (m, n) = (a.rows(), a.cols());
    let (x, u, value) = optimal(&row_program(a))?;
    let sol = GameSolution {
        value: -value,
        row_strategy: x.iter().take(m).cloned().collect(),
        col_strategy: u.iter().take(n).cloned().collect(),
    };
    match verify_saddle(a, &sol) {
        Verdict::Accept => Ok(sol),
        Verdict::Reject(why) => Err(Error::Internal(format!("game solution rejected: {why}"))),
    }
}

/// Checks the saddle-point inequalities exactly.
pub fn verify_saddle(a: &RatMat, sol: &GameSolution) -> Verdict {
    let (p, q, v) = (&sol.row_strategy, &sol.col_strategy, &sol.value);
    if p.dim() != a.rows() || q.dim() != a.cols() {
        return Verdict::Reject("strategy dimensions do not match the payoff matrix".into());
    }
    if !p.is_in_simplex() {
        return Verdict::Reject("p̂ ∉ S_m".into());
    }
    if !q.is_in_simplex() {
        return Verdict::Reject("q̂ ∉ S_n".into());
    }
    let row_payoffs = a.vec_mul(p);
    if let Some(j) = (0..a.cols()).find(|&j| &row_payoffs[j] < v) {
        return Verdict::Reject(format!("(p̂·A)_{} = {} < v", j + 1, row_payoffs[j]));
    }
    let col_payoffs = a.mul_vec(q);
    if let Some(i) = (0..a.rows()).find(|&i| &col_payoffs[i] > v) {
        return Verdict::Reject(format!("(A·q̂)_{} = {} > v", i + 1, col_payoffs[i]));
    }
    if &row_payoffs.dot(q) != v {
        return Verdict::Reject("p̂·A·q̂ ≠ v".into());
    }
    Verdict::Accept
}

/// `(max_p min_q pAq, min_q max_p pAq)` from two independent programs.
pub fn minimax_gap(a: &RatMat) -> Result<(Rat, Rat)> {
    check_size(a)?;
    let (row, col) = exec::join(|| optimal(&row_program(a)), || optimal(&col_program(a)));
    let lower = -row?.2;
    let upper = col?.2;
    if lower != upper {
        return Err(Error::Internal(format!(
            "minimax values differ: {lower} ≠ {upper}"
        )));
    }
    Ok((lower, upper))
}

/// Vertices of `{p in S_m : p·A >= v 1}`.
fn row_optimal_vertices(a: &RatMat, v: &Rat) -> Vec<RatVec> {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rat> = (0..m).map(|i| a[(i, j)].clone()).collect();
            row.extend((0..n).map(|k| if k == j { -Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let mut last = vec![Rat::one(); m];
    last.extend(std::iter::repeat_n(Rat::zero(), n));
    rows.push(last);
    let mut b = RatVec::new(vec![v.clone(); n]).into_entries();
    b.push(Rat::one());
    let sys = RatMat::from_rows(rows).expect("rectangular");
    basic_feasible_solutions(&sys, &RatVec::new(b))
        .into_iter()
        .map(|vx| vx.x.iter().take(m).cloned().collect())
        .collect()
}

/// Vertices of both players' optimal strategy sets, in basis order.
pub fn optimal_strategy_vertices(a: &RatMat) -> Result<(Vec<RatVec>, Vec<RatVec>)> {
    let v = solve_game(a)?.value;
    vertices_at_value(a, &v)
}

fn vertices_at_value(a: &RatMat, v: &Rat) -> Result<(Vec<RatVec>, Vec<RatVec>)> {
    let (rows, cols) = exec::join(
        || row_optimal_vertices(a, v),
        || row_optimal_vertices(&a.transpose().scale(&-Rat::one()), &-v),
    );
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::Internal(
            "optimal strategy set without vertices".into(),
        ));
    }
    Ok((rows, cols))
}

/// Optimal strategy sets are polytopes; the solution is unique iff each has
/// exactly one vertex.
pub fn solution_unique(a: &RatMat) -> Result<Uniqueness> {
    let sol = solve_game(a)?;
    let v = &sol.value;
    let (rows, cols) = vertices_at_value(a, v)?;
    if rows.len() == 1 && cols.len() == 1 {
        return Ok(Uniqueness::Unique(sol));
    }
    let pair = |p: &RatVec, q: &RatVec| GameSolution {
        value: v.clone(),
        row_strategy: p.clone(),
        col_strategy: q.clone(),
    };
    let first = pair(&rows[0], &cols[0]);
    let second = pair(
        rows.get(1).unwrap_or(&rows[0]),
        cols.get(1).unwrap_or(&cols[0]),
    );
    for s in [&first, &second] {
        if let Verdict::Reject(why) = verify_saddle(a, s) {
            return Err(Error::Internal(format!(
                "optimal vertex pair rejected: {why}"
            )));
        }
    }
    Ok(Uniqueness::Multiple(first, second))
}
