//! Activity calibration by iterative proportional fitting.
//!
//! Each iteration multiplies every activity by `(target / marginal)^damp`.
//! `damp` starts at 1 and halves whenever the max error grows on two
//! consecutive iterations.

use serde::Serialize;

use super::chain::{estimate_marginals, ChainConfig};
use super::exact::{ExactLimits, ExactTable};
use super::HardCoreModel;
use crate::error::{Error, Result};
use crate::fractional::{chi_star, Rational};
use crate::multigraph::Multigraph;
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub activities: Vec<f64>,
    pub achieved_marginals: Vec<f64>,
    pub max_error: f64,
    pub iterations: usize,
    /// `c · max λ` with `c = 1/target`.
    pub k_hat: f64,
    /// True when marginals were computed exactly rather than estimated.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct CalibrationConfig {
    /// Marginal tolerance; `None` means 1e-6 on the exact path and 1e-2 on
    /// the MCMC path.
    pub tol: Option<f64>,
    pub max_iters: usize,
    pub limits: ExactLimits,
    pub chain: ChainConfig,
    /// Chain reads per marginal estimate on the MCMC path.
    pub samples: usize,
    /// Odd-set size cap for the feasibility check.
    pub odd_set_cap: Option<usize>,
    /// Known `χ*` (or an upper bound on it); skips recomputation.
    pub chi_star: Option<Rational>,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            tol: None,
            max_iters: 5000,
            limits: ExactLimits::default(),
            chain: ChainConfig::default(),
            samples: 2000,
            odd_set_cap: None,
            chi_star: None,
        }
    }
}

/// Finds activities whose marginals all equal `target`.
pub fn calibrate_activities(
    g: &Multigraph,
    target: Rational,
    tol: f64,
    max_iters: usize,
) -> Result<CalibrationResult> {
    calibrate_with(
        g,
        target,
        &CalibrationConfig {
            tol: Some(tol),
            max_iters,
            ..Default::default()
        },
    )
}

pub fn calibrate_with(g: &Multigraph, target: Rational, cfg: &CalibrationConfig) -> Result<CalibrationResult> {
    let t = *target.numer() as f64 / *target.denom() as f64;
    if !(t > 0.0) {
        return Err(Error::Argument(format!("target marginal {t} must be positive")));
    }
    if g.edge_count() == 0 {
        return Ok(CalibrationResult {
            activities: vec![],
            achieved_marginals: vec![],
            max_error: 0.0,
            iterations: 0,
            k_hat: 0.0,
            exact: true,
        });
    }
    let chi = match cfg.chi_star {
        Some(c) => c,
        None => chi_star(g, cfg.odd_set_cap)?.upper_bound,
    };
    // feasible iff chi* < 1/target, i.e. target * chi* < 1
    if target * chi >= Rational::from_integer(1) {
        return Err(Error::Infeasible {
            target: t,
            chi_star: format!("{}/{}", chi.numer(), chi.denom()),
        });
    }

    let init = t / (1.0 - t);
    let mut lam = vec![init; g.edge_count()];
    let exact_ok = {
        let probe = HardCoreModel::uniform(g.clone(), init)?;
        ExactTable::new(&probe, cfg.limits)
            .and_then(|mut tb| {
                let f = tb.full_mask();
                tb.ln_z(f)
            })
            .is_ok()
    };
    let tol = cfg.tol.unwrap_or(if exact_ok { 1e-6 } else { 1e-2 });

    let marginals = |lam: &[f64], it: usize| -> Result<Vec<f64>> {
        let model = HardCoreModel::new(g.clone(), lam.to_vec())?;
        if exact_ok {
            ExactTable::new(&model, cfg.limits)?.marginals(g.edge_count())
        } else {
            let mut rng = stream(cfg.chain.seed, &[0xCA1, it as u64]);
            Ok(estimate_marginals(&model, &cfg.chain, cfg.samples, &mut rng).mean)
        }
    };
    let finish = |lam: Vec<f64>, marg: Vec<f64>, err: f64, it: usize| CalibrationResult {
        k_hat: lam.iter().copied().fold(0.0, f64::max) / t,
        activities: lam,
        achieved_marginals: marg,
        max_error: err,
        iterations: it,
        exact: exact_ok,
    };

    let mut damp = 1.0;
    let mut history = [f64::INFINITY; 2];
    let mut best: Option<(f64, Vec<f64>, Vec<f64>, usize)> = None;
    for it in 0..=cfg.max_iters {
        let marg = marginals(&lam, it)?;
        let err = marg.iter().map(|p| (p - t).abs()).fold(0.0, f64::max);
        if err <= tol {
            return Ok(finish(lam, marg, err, it));
        }
        if best.as_ref().map_or(true, |b| err < b.0) {
            best = Some((err, lam.clone(), marg.clone(), it));
        }
        if err > history[1] && history[1] > history[0] {
            damp *= 0.5;
            log::debug!("calibration oscillating at iteration {it}; damping {damp}");
        }
        history = [history[1], err];
        if it == cfg.max_iters {
            break;
        }
        for (l, p) in lam.iter_mut().zip(&marg) {
            *l *= (t / p.max(1e-300)).powf(damp);
        }
    }
    let (err, lam, marg, it) = best.unwrap();
    Err(Error::Calibration {
        iterations: cfg.max_iters,
        max_error: err,
        best: Box::new(finish(lam, marg, err, it)),
    })
}
