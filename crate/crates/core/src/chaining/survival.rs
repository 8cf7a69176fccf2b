use serde::{Deserialize, Serialize};

use crate::copulas::{survival_probability, ArrivalTimeModel};
use crate::error::{Error, Result};
use crate::numerics::{count_successes, McEstimate, RngStream};
use crate::samplers::CopulaSampler;

fn check_horizon(periods: u32, dt: f64) -> Result<()> {
    if periods == 0 {
        return Err(Error::param("N", "at least one period is required"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param(
            "T",
            format!("{dt} is not a positive period length"),
        ));
    }
    Ok(())
}

fn thresholds(model: &ArrivalTimeModel, horizon: f64) -> Vec<f64> {
    model
        .lambdas()
        .iter()
        .map(|l| (-l * horizon).exp())
        .collect()
}

/// Survival of every name over `N·T` in one draw, `C(G₁(NT),…,Gₙ(NT))`.
pub fn one_shot_survival(model: &ArrivalTimeModel, periods: u32, dt: f64) -> Result<f64> {
    check_horizon(periods, dt)?;
    let t = periods as f64 * dt;
    survival_probability(model, &vec![t; model.dim()])
}

/// Survival when each of `N` periods is simulated independently,
/// `C(G₁(T),…,Gₙ(T))^N`.
pub fn multi_step_survival(model: &ArrivalTimeModel, periods: u32, dt: f64) -> Result<f64> {
    check_horizon(periods, dt)?;
    let one = survival_probability(model, &vec![dt; model.dim()])?;
    Ok(one.powi(periods as i32))
}

/// Monte Carlo counterpart of [`one_shot_survival`]: one copula draw per
/// scenario, compared against `exp(−λᵢ N T)`.
pub fn mc_one_shot(
    model: &ArrivalTimeModel,
    periods: u32,
    dt: f64,
    scenarios: u64,
    rng: &RngStream,
) -> Result<McEstimate> {
    check_horizon(periods, dt)?;
    let sampler = CopulaSampler::new(model.copula());
    let c = thresholds(model, periods as f64 * dt);
    let hits = count_successes(scenarios, rng, |r| {
        let u = sampler.sample(r);
        u.iter().zip(&c).all(|(ui, ci)| ui <= ci)
    });
    McEstimate::from_counts(hits, scenarios, rng.seed())
}

/// Monte Carlo counterpart of [`multi_step_survival`]: `N` fresh copula
/// draws per scenario, each compared against `exp(−λᵢ T)`. A scenario stops
/// at its first default.
pub fn mc_multi_step(
    model: &ArrivalTimeModel,
    periods: u32,
    dt: f64,
    scenarios: u64,
    rng: &RngStream,
) -> Result<McEstimate> {
    check_horizon(periods, dt)?;
    let sampler = CopulaSampler::new(model.copula());
    let c = thresholds(model, dt);
    let hits = count_successes(scenarios, rng, |r| {
        let mut u = vec![0.0; c.len()];
        (0..periods).all(|_| {
            sampler.sample_into(r, &mut u);
            u.iter().zip(&c).all(|(ui, ci)| ui <= ci)
        })
    });
    McEstimate::from_counts(hits, scenarios, rng.seed())
}

/// Analytic and simulated survival under both simulation schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub one_shot_analytic: f64,
    pub multi_step_analytic: f64,
    pub one_shot_mc: McEstimate,
    pub multi_step_mc: McEstimate,
    /// `one_shot_analytic − multi_step_analytic`.
    pub gap: f64,
    #[serde(rename = "N")]
    pub periods: u32,
    #[serde(rename = "T")]
    pub dt: f64,
}

impl ChainReport {
    pub fn csv_header() -> &'static str {
        "one_shot_analytic,multi_step_analytic,one_shot_mc,one_shot_stderr,\
         multi_step_mc,multi_step_stderr,gap,N,T,scenarios,seed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{:?},{},{}",
            self.one_shot_analytic,
            self.multi_step_analytic,
            self.one_shot_mc.mean,
            self.one_shot_mc.stderr,
            self.multi_step_mc.mean,
            self.multi_step_mc.stderr,
            self.gap,
            self.periods,
            self.dt,
            self.one_shot_mc.n_scenarios,
            self.one_shot_mc.seed
        )
    }
}

/// Runs both schemes. The one-shot simulation uses stream 0 of `seed` and
/// the multi-step simulation stream 1.
pub fn chain_compare(
    model: &ArrivalTimeModel,
    periods: u32,
    dt: f64,
    scenarios: u64,
    seed: u64,
) -> Result<ChainReport> {
    let one_shot_analytic = one_shot_survival(model, periods, dt)?;
    let multi_step_analytic = multi_step_survival(model, periods, dt)?;
    let one_shot_mc = mc_one_shot(model, periods, dt, scenarios, &RngStream::new(seed, 0))?;
    let multi_step_mc = mc_multi_step(model, periods, dt, scenarios, &RngStream::new(seed, 1))?;
    Ok(ChainReport {
        one_shot_analytic,
        multi_step_analytic,
        one_shot_mc,
        multi_step_mc,
        gap: one_shot_analytic - multi_step_analytic,
        periods,
        dt,
    })
}
