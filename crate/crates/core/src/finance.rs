//! One-period market model: arbitrage detection and superhedging.
//!
//! `A` is `m x n` with `A[i][j]` the discounted price change of asset `i`
//! in state `j`. A strategy `xi` (short sales allowed) gains `xi·A`; a
//! martingale measure is a probability vector `p > 0` with `A p = 0`.

use crate::alternatives::{stiemke, StiemkeCertificate};
use crate::cone::check_column_limit;
use crate::error::{Error, Result};
use crate::lp::{solve_lp_unchecked, LpOutcome, LpProblem};
use crate::rat::{Rat, RatMat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketModel {
    changes: RatMat,
    pub asset_labels: Option<Vec<String>>,
    pub state_labels: Option<Vec<String>>,
}

impl MarketModel {
    pub fn new(changes: RatMat) -> Self {
        MarketModel {
            changes,
            asset_labels: None,
            state_labels: None,
        }
    }

    pub fn changes(&self) -> &RatMat {
        &self.changes
    }

    pub fn assets(&self) -> usize {
        self.changes.rows()
    }

    pub fn states(&self) -> usize {
        self.changes.cols()
    }
}

/// Discounted, nonnegative payoff per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim(RatVec);

impl Claim {
    pub fn new(payoff: RatVec) -> Result<Self> {
        if !payoff.is_nonneg() {
            return Err(Error::Contract("claim payoffs must be nonnegative".into()));
        }
        Ok(Claim(payoff))
    }

    pub fn payoff(&self) -> &RatVec {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArbitrageOutcome {
    /// Strategy with `xi·A` semipositive.
    Arbitrage { xi: RatVec },
    /// Strictly positive martingale measure.
    NoArbitrage { p: RatVec },
}

/// Superhedging price with both certificates.
///
/// `measure` maximises `c·p` over the closed polytope `{p >= 0, sum p = 1,
/// A p = 0}` and may sit on its boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HedgeResult {
    pub price: Rat,
    pub strategy: RatVec,
    pub measure: RatVec,
}

pub fn detect_arbitrage(market: &MarketModel) -> Result<ArbitrageOutcome> {
    Ok(match stiemke(&market.changes)? {
        StiemkeCertificate::SemipositiveRow { xi } => ArbitrageOutcome::Arbitrage { xi },
        StiemkeCertificate::InteriorMeasure { p } => ArbitrageOutcome::NoArbitrage { p },
    })
}

fn require_no_arbitrage(market: &MarketModel, claim: &Claim) -> Result<()> {
    if claim.0.dim() != market.states() {
        return Err(Error::Dimension(format!(
            "claim has {} payoffs, market has {} states",
            claim.0.dim(),
            market.states()
        )));
    }
    check_column_limit(&market.changes)?;
    match detect_arbitrage(market)? {
        ArbitrageOutcome::Arbitrage { xi } => Err(Error::Arbitrage { strategy: xi }),
        ArbitrageOutcome::NoArbitrage { .. } => Ok(()),
    }
}

/// Standard-form hedging program in variables `(x+, x-, xi+, xi-, s)`:
/// `x 1 + xi·A + sign * s = c` per state, minimising `objective_sign * x`.
fn hedging_program(
    market: &MarketModel,
    claim: &Claim,
    slack_sign: i64,
    objective_sign: i64,
) -> Result<LpProblem> {
    let (m, n) = (market.assets(), market.states());
    let a = &market.changes;
    let rows = (0..n)
        .map(|j| {
            let mut row = vec![Rat::one(), -Rat::one()];
            row.extend((0..m).map(|i| a[(i, j)].clone()));
            row.extend((0..m).map(|i| -&a[(i, j)]));
            row.extend((0..n).map(|k| {
                if k == j {
                    Rat::from_int(slack_sign)
                } else {
                    Rat::zero()
                }
            }));
            row
        })
        .collect();
    let mut cost = RatVec::zeros(2 + 2 * m + n);
    cost[0] = Rat::from_int(objective_sign);
    cost[1] = Rat::from_int(-objective_sign);
    LpProblem::new(RatMat::from_rows(rows)?, claim.0.clone(), cost)
}

/// Optimises `sign * c·p` over the closed martingale polytope, returning the
/// optimal `p` (minimisation for `sign = 1`).
fn extreme_measure(market: &MarketModel, claim: &Claim, sign: i64) -> Result<RatVec> {
    let n = market.states();
    let ones = RatMat::from_rows(vec![vec![Rat::one(); n]])?;
    let a = market.changes.vcat(&ones)?;
    let mut b = RatVec::zeros(market.assets() + 1);
    b[market.assets()] = Rat::one();
    let prob = LpProblem::new(a, b, claim.0.scale(&Rat::from_int(sign)))?;
    match solve_lp_unchecked(&prob)? {
        LpOutcome::Optimal { x, .. } => Ok(x),
        other => Err(Error::Internal(format!(
            "martingale program not optimal: {other:?}"
        ))),
    }
}

fn hedge_solution(prob: &LpProblem, m: usize) -> Result<(Rat, RatVec)> {
    match solve_lp_unchecked(prob)? {
        LpOutcome::Optimal { x, .. } => {
            let capital = &x[0] - &x[1];
            let strategy = (0..m).map(|i| &x[2 + i] - &x[2 + m + i]).collect();
            Ok((capital, strategy))
        }
        other => Err(Error::Internal(format!(
            "hedging program not optimal: {other:?}"
        ))),
    }
}

/// Least capital that superhedges `claim`, its hedge, and a maximising measure.
pub fn superhedge_price(market: &MarketModel, claim: &Claim) -> Result<HedgeResult> {
    require_no_arbitrage(market, claim)?;
    let m = market.assets();
    let (price, strategy) = hedge_solution(&hedging_program(market, claim, -1, 1)?, m)?;
    let measure = extreme_measure(market, claim, -1)?;
    let result = HedgeResult {
        price,
        strategy,
        measure,
    };
    check_hedge(market, claim, &result)?;
    Ok(result)
}

fn check_hedge(market: &MarketModel, claim: &Claim, h: &HedgeResult) -> Result<()> {
    let a = &market.changes;
    let gains = a.vec_mul(&h.strategy);
    let covered = (0..market.states()).all(|j| &h.price + &gains[j] >= claim.0[j]);
    let fail = |why: &str| Err(Error::Internal(format!("hedge result failed: {why}")));
    if !covered {
        return fail("x·1 + ξ·A ≱ c");
    }
    if !a.mul_vec(&h.measure).is_zero() || !h.measure.is_in_simplex() {
        return fail("measure is not a martingale probability");
    }
    if claim.0.dot(&h.measure) != h.price {
        return fail("c·p ≠ price");
    }
    Ok(())
}

/// Arbitrage-free price interval `(lower, upper)` of `claim`.
///
/// `upper` is the superhedging price; `lower` the subhedging price
/// `max {x | x·1 + xi·A <= c}`, cross-checked against the minimum of `c·p`
/// over the closed martingale polytope.
pub fn price_bounds(market: &MarketModel, claim: &Claim) -> Result<(Rat, Rat)> {
    let upper = superhedge_price(market, claim)?.price;
    let (lower, _) = hedge_solution(&hedging_program(market, claim, 1, -1)?, market.assets())?;
    let cheapest = extreme_measure(market, claim, 1)?;
    if claim.0.dot(&cheapest) != lower || lower > upper {
        return Err(Error::Internal("subhedging duality failed".into()));
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn market(rows: &[&[i64]]) -> MarketModel {
        MarketModel::new(RatMat::from_ints(rows))
    }

    fn claim(xs: &[i64]) -> Claim {
        Claim::new(RatVec::from_ints(xs)).unwrap()
    }

    #[test]
    fn arbitrage_examples() {
        let half = RatVec::new(vec![r(1, 2), r(1, 2)]);
        assert_eq!(
            detect_arbitrage(&market(&[&[1, -1]])).unwrap(),
            ArbitrageOutcome::NoArbitrage { p: half.clone() }
        );
        assert_eq!(
            detect_arbitrage(&market(&[&[1, 2]])).unwrap(),
            ArbitrageOutcome::Arbitrage {
                xi: RatVec::from_ints(&[1])
            }
        );
        assert_eq!(
            detect_arbitrage(&market(&[&[0, 0]])).unwrap(),
            ArbitrageOutcome::NoArbitrage { p: half }
        );
    }

    #[test]
    fn superhedge_examples() {
        let h = superhedge_price(&market(&[&[1, -1]]), &claim(&[1, 0])).unwrap();
        assert_eq!(h.price, r(1, 2));
        assert_eq!(h.strategy, RatVec::new(vec![r(1, 2)]));
        assert_eq!(h.measure, RatVec::new(vec![r(1, 2), r(1, 2)]));

        let h = superhedge_price(&market(&[&[1, -1], &[2, -2]]), &claim(&[0, 0])).unwrap();
        assert!(h.price.is_zero());
        assert!(h.strategy.is_zero());

        let h = superhedge_price(&market(&[&[0, 0]]), &claim(&[1, 0])).unwrap();
        assert_eq!(h.price, Rat::one());
        assert_eq!(h.strategy, RatVec::zeros(1));
        assert_eq!(h.measure, RatVec::from_ints(&[1, 0]));
    }

    #[test]
    fn superhedge_refuses_arbitrage() {
        let err = superhedge_price(&market(&[&[1, 2]]), &claim(&[1, 0])).unwrap_err();
        assert_eq!(
            err,
            Error::Arbitrage {
                strategy: RatVec::from_ints(&[1])
            }
        );
        assert!(matches!(
            price_bounds(&market(&[&[1, 2]]), &claim(&[1, 0])),
            Err(Error::Arbitrage { .. })
        ));
    }

    #[test]
    fn claim_must_be_nonnegative_and_fit() {
        assert!(matches!(
            Claim::new(RatVec::from_ints(&[1, -1])),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            superhedge_price(&market(&[&[1, -1]]), &claim(&[1, 0, 0])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(
            price_bounds(&market(&[&[1, -1]]), &claim(&[1, 0])).unwrap(),
            (r(1, 2), r(1, 2))
        );
        assert_eq!(
            price_bounds(&market(&[&[0, 0]]), &claim(&[1, 0])).unwrap(),
            (r(0, 1), r(1, 1))
        );
        assert_eq!(
            price_bounds(&market(&[&[1, -1]]), &claim(&[0, 0])).unwrap(),
            (Rat::zero(), Rat::zero())
        );
    }

    #[test]
    fn translation_and_monotonicity() {
        let mk = market(&[&[1, -1, 2]]);
        let base = superhedge_price(&mk, &claim(&[1, 0, 2])).unwrap().price;
        let shifted = superhedge_price(&mk, &claim(&[3, 2, 4])).unwrap().price;
        assert_eq!(shifted, &base + &Rat::from_int(2));
        let bigger = superhedge_price(&mk, &claim(&[1, 1, 2])).unwrap().price;
        assert!(base <= bigger);
    }
}
