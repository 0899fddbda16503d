//! Closed- and open-loop runs, amplitude/settling metrics and the
//! suspension-length sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::Engine;
use crate::plant::{rk4_step, PendulumState, PlantParams};

pub const DEFAULT_PHI_SCALE: f64 = 0.3;
pub const DEFAULT_PHIDOT_SCALE: f64 = 0.05;

/// Scalar run settings; the plant travels alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub plant: PlantParams,
    /// Initial deflection, rad.
    pub phi0: f64,
    pub phidot0: f64,
    /// Run length in natural periods of the design length (`l0 = 1`).
    pub horizon_periods: f64,
    /// Fixed step; `None` uses the plant's `dt_per_period`.
    pub dt: Option<f64>,
    /// Settling band as a fraction of `|phi0|`.
    pub settle_fraction: f64,
    /// Physical deflection mapped to the controller's unit input.
    pub phi_scale: f64,
    pub phidot_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            plant: PlantParams::default(),
            phi0: 0.1,
            phidot0: 0.0,
            horizon_periods: 10.0,
            dt: None,
            settle_fraction: 0.05,
            phi_scale: DEFAULT_PHI_SCALE,
            phidot_scale: DEFAULT_PHIDOT_SCALE,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.plant.validate()?;
        if !self.phi0.is_finite() {
            return Err(Error::invalid("phi0 must be finite"));
        }
        if !self.phidot0.is_finite() {
            return Err(Error::invalid("phidot0 must be finite"));
        }
        if !(self.horizon_periods > 0.0 && self.horizon_periods.is_finite()) {
            return Err(Error::invalid(format!(
                "horizon_periods must be positive, got {}",
                self.horizon_periods
            )));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::invalid(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.settle_fraction > 0.0 && self.settle_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "settle_fraction must lie in (0, 1), got {}",
                self.settle_fraction
            )));
        }
        for (name, v) in [("phi_scale", self.phi_scale), ("phidot_scale", self.phidot_scale)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Natural period at the design length, the unit for time outputs.
    pub fn design_period(&self) -> f64 {
        PlantParams {
            l: 1.0,
            ..self.plant
        }
        .natural_period()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon_periods * self.design_period()
    }

    pub fn step(&self) -> f64 {
        self.dt.unwrap_or_else(|| self.plant.default_dt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub times: Vec<f64>,
    pub phis: Vec<f64>,
    pub phidots: Vec<f64>,
    /// Controller output at each sample; empty for open loop.
    pub controls: Vec<f64>,
    /// Peak `|phi|` from one natural period of the plant onwards.
    pub amplitude: f64,
    /// In design periods; `None` when the run never settles.
    pub settle_time: Option<f64>,
}

fn control(engine: &Engine, cfg: &RunConfig, s: &PendulumState) -> Result<f64> {
    engine.infer(s.phi / cfg.phi_scale, s.phidot / cfg.phidot_scale)
}

/// Integrates one run. With an engine the control is recomputed at every
/// step and held over it.
pub fn run(cfg: &RunConfig, engine: Option<&Engine>) -> Result<SimResult> {
    cfg.validate()?;
    let dt = cfg.step();
    let steps = ((cfg.horizon() / dt).round() as usize).max(1);

    let mut times = Vec::with_capacity(steps + 1);
    let mut phis = Vec::with_capacity(steps + 1);
    let mut phidots = Vec::with_capacity(steps + 1);
    let mut controls = Vec::with_capacity(if engine.is_some() { steps + 1 } else { 0 });

    let mut s = PendulumState::new(cfg.phi0, cfg.phidot0);
    for k in 0..=steps {
        let u = match engine {
            Some(e) => {
                let u = control(e, cfg, &s)?;
                controls.push(u);
                u
            }
            None => 0.0,
        };
        times.push(s.t);
        phis.push(s.phi);
        phidots.push(s.phidot);
        if k < steps {
            s = rk4_step(&cfg.plant, &s, u, dt)?;
        }
    }

    let own_period = cfg.plant.natural_period();
    let amplitude = times
        .iter()
        .zip(&phis)
        .filter(|(&t, _)| t >= own_period)
        .map(|(_, p)| p.abs())
        .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.max(p))))
        .unwrap_or_else(|| phis.last().unwrap().abs());

    let settle_time = settle_time(&times, &phis, cfg, own_period);
    Ok(SimResult {
        times,
        phis,
        phidots,
        controls,
        amplitude,
        settle_time,
    })
}

/// First time after which `|phi|` stays inside the band. The band must hold
/// for at least one natural period before the horizon, otherwise a free
/// pendulum crossing zero near the end would count as settled.
fn settle_time(times: &[f64], phis: &[f64], cfg: &RunConfig, own_period: f64) -> Option<f64> {
    let band = cfg.settle_fraction * cfg.phi0.abs();
    let idx = match phis.iter().rposition(|p| p.abs() > band) {
        None => 0,
        Some(last) => last + 1,
    };
    let t = *times.get(idx)?;
    let end = *times.last()?;
    if idx > 0 && end - t < own_period {
        return None;
    }
    Some(t / cfg.design_period())
}

/// Controlled-to-uncontrolled amplitude ratio `V`.
pub fn amplitude_ratio(controlled: &SimResult, uncontrolled: &SimResult) -> Result<f64> {
    if uncontrolled.amplitude == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(controlled.amplitude / uncontrolled.amplitude)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub lengths: Vec<f64>,
    pub v: Vec<f64>,
    /// Closed-loop settle time in design periods, `None` if not settled.
    pub t_pp: Vec<Option<f64>>,
}

impl SweepResult {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        self.lengths
            .iter()
            .zip(&self.v)
            .zip(&self.t_pp)
            .map(|((&l, &v), &t)| (l, v, t))
    }
}

/// Runs the closed and open loop at every length with the same engine and
/// initial state. Output order follows `lengths`.
pub fn sweep_lengths(base: &RunConfig, engine: &Engine, lengths: &[f64]) -> Result<SweepResult> {
    if let Some(bad) = lengths.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::invalid(format!("sweep length must be positive, got {bad}")));
    }
    base.validate()?;
    let points = lengths
        .par_iter()
        .map(|&l| {
            let cfg = RunConfig {
                plant: base.plant.with_length(l),
                ..*base
            };
            let closed = run(&cfg, Some(engine))?;
            let open = run(&cfg, None)?;
            Ok((amplitude_ratio(&closed, &open)?, closed.settle_time))
        })
        .collect::<Result<Vec<_>>>()?;
    let (v, t_pp) = points.into_iter().unzip();
    Ok(SweepResult {
        lengths: lengths.to_vec(),
        v,
        t_pp,
    })
}

/// 0.1 to 4.8 in steps of 0.1.
pub fn default_length_grid() -> Vec<f64> {
    (1..=48).map(|k| k as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::EngineOptions;

    fn engine() -> Engine {
        Engine::principles_3x3(EngineOptions {
            clamp_inputs: true,
            ..EngineOptions::default()
        })
    }

    #[test]
    fn grid() {
        let g = default_length_grid();
        assert_eq!(g.len(), 48);
        assert_eq!(g[0], 0.1);
        assert!(g.contains(&0.3) && g.contains(&3.4));
        assert_eq!(*g.last().unwrap(), 4.8);
    }

    #[test]
    fn equilibrium_stays_put() {
        let cfg = RunConfig {
            phi0: 0.0,
            horizon_periods: 2.0,
            ..RunConfig::default()
        };
        let r = run(&cfg, Some(&engine())).unwrap();
        assert!(r.phis.iter().all(|&p| p == 0.0));
        assert!(r.controls.iter().all(|&u| u.abs() < 1e-9));
        assert_eq!(r.amplitude, 0.0);
        assert_eq!(r.settle_time, Some(0.0));
    }

    #[test]
    fn open_loop_conserves_amplitude() {
        let r = run(&RunConfig::default(), None).unwrap();
        assert!((r.amplitude - 0.1).abs() < 1e-4, "{}", r.amplitude);
        assert_eq!(r.settle_time, None);
        assert!(r.controls.is_empty());
        assert_eq!(r.times.len(), r.phis.len());
        assert_eq!(r.phis.len(), r.phidots.len());
    }

    #[test]
    fn closed_loop_beats_open_loop() {
        let cfg = RunConfig::default();
        let closed = run(&cfg, Some(&engine())).unwrap();
        let open = run(&cfg, None).unwrap();
        assert!(closed.amplitude < open.amplitude);
        assert!(closed.settle_time.is_some());
        assert_eq!(closed.controls.len(), closed.times.len());
    }

    #[test]
    fn deterministic() {
        let cfg = RunConfig {
            horizon_periods: 3.0,
            ..RunConfig::default()
        };
        assert_eq!(run(&cfg, Some(&engine())).unwrap(), run(&cfg, Some(&engine())).unwrap());
    }

    #[test]
    fn ratio_arithmetic() {
        let mk = |amplitude| SimResult {
            times: vec![],
            phis: vec![],
            phidots: vec![],
            controls: vec![],
            amplitude,
            settle_time: None,
        };
        assert!((amplitude_ratio(&mk(0.02), &mk(0.1)).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(amplitude_ratio(&mk(0.1), &mk(0.1)).unwrap(), 1.0);
        assert!(matches!(amplitude_ratio(&mk(0.1), &mk(0.0)), Err(Error::UndefinedRatio)));
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            RunConfig { horizon_periods: 0.0, ..RunConfig::default() },
            RunConfig { settle_fraction: 1.0, ..RunConfig::default() },
            RunConfig { dt: Some(0.0), ..RunConfig::default() },
            RunConfig { phi_scale: 0.0, ..RunConfig::default() },
            RunConfig { phi0: f64::NAN, ..RunConfig::default() },
        ];
        for cfg in bad {
            assert!(run(&cfg, None).is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn sweep_rejects_non_positive_lengths() {
        let err = sweep_lengths(&RunConfig::default(), &engine(), &[1.0, 0.0]);
        assert!(err.is_err());
    }

    #[test]
    fn sweep_order_independent() {
        let base = RunConfig {
            horizon_periods: 4.0,
            ..RunConfig::default()
        };
        let e = engine();
        let ab = sweep_lengths(&base, &e, &[0.5, 2.0]).unwrap();
        let ba = sweep_lengths(&base, &e, &[2.0, 0.5]).unwrap();
        assert_eq!(ab.v[0], ba.v[1]);
        assert_eq!(ab.v[1], ba.v[0]);
        assert_eq!(ab.t_pp[0], ba.t_pp[1]);
    }

    #[test]
    fn sweep_trend() {
        let e = engine();
        let base = RunConfig::default();
        let s = sweep_lengths(&base, &e, &[1.0, 5.0]).unwrap();
        assert!(s.v[0] < 1.0);
        assert!(s.v[1] > s.v[0]);
        let s = sweep_lengths(&base, &e, &[0.3, 1.0, 3.4]).unwrap();
        assert!(s.v.iter().all(|&v| v < 1.0), "{:?}", s.v);
    }
}
