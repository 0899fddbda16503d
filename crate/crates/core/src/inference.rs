//! Two-input fuzzy controller.
//!
//! Rules fire with the minimum of their two antecedent degrees, each output
//! term collects the maximum over the rules that conclude it, and the result
//! is defuzzified either by center of gravity over the clipped output terms
//! (Mamdani) or by a weighted average of the output-term centers (zero-order
//! Sugeno with singleton consequents).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::Partition;
use crate::rulebase::RuleBase;

pub const DEFAULT_GRID_POINTS: usize = 1001;
pub const MIN_GRID_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceMode {
    #[default]
    Mamdani,
    #[serde(alias = "sugeno")]
    SugenoSingleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub mode: InferenceMode,
    /// Output-universe samples used by the centroid. Odd, at least 101.
    pub grid_points: usize,
    pub clamp_inputs: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            mode: InferenceMode::Mamdani,
            grid_points: DEFAULT_GRID_POINTS,
            clamp_inputs: false,
        }
    }
}

/// `n` points over `[-z_max, z_max]` that are exact negatives of each other
/// about the middle index.
pub(crate) fn symmetric_grid(z_max: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2);
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k == 0 {
                -z_max
            } else if k == n - 1 {
                z_max
            } else {
                let a = (2 * k) as f64 - last;
                if a < 0.0 {
                    -(z_max * -a / last)
                } else {
                    z_max * a / last
                }
            }
        })
        .collect()
}

/// Rule activations for one input pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringRecord {
    cols: usize,
    strengths: Vec<f64>,
    aggregated: Vec<f64>,
}

impl FiringRecord {
    /// Builds a record with only the aggregate filled, for driving the
    /// defuzzifiers directly.
    pub fn from_aggregate(aggregated: Vec<f64>) -> Self {
        FiringRecord {
            cols: 0,
            strengths: Vec::new(),
            aggregated,
        }
    }

    /// Firing strength of rule `(row, col)`.
    pub fn strength(&self, row: usize, col: usize) -> f64 {
        self.strengths[row * self.cols + col]
    }

    pub fn strengths(&self) -> impl Iterator<Item = &[f64]> {
        self.strengths.chunks(self.cols.max(1))
    }

    pub fn aggregated(&self) -> &[f64] {
        &self.aggregated
    }
}

#[derive(Debug, Clone)]
pub struct Engine {
    phi: Partition,
    phidot: Partition,
    output: Partition,
    rules: RuleBase,
    options: EngineOptions,
    out_grid: Vec<f64>,
    // out_mu[t][s]: membership of output sample s in output term t.
    out_mu: Vec<Vec<f64>>,
}

impl Engine {
    pub fn new(
        phi: Partition,
        phidot: Partition,
        output: Partition,
        rules: RuleBase,
        options: EngineOptions,
    ) -> Result<Self> {
        let labels = rules.labels();
        let same = |p: &Partition, l: &[String]| p.labels().eq(l.iter().map(String::as_str));
        if !same(&phi, &labels.rows) {
            return Err(Error::invalid(format!(
                "rule rows {:?} do not match partition {} labels",
                labels.rows,
                phi.name()
            )));
        }
        if !same(&phidot, &labels.cols) {
            return Err(Error::invalid(format!(
                "rule columns {:?} do not match partition {} labels",
                labels.cols,
                phidot.name()
            )));
        }
        if !same(&output, &labels.outs) {
            return Err(Error::invalid(format!(
                "rule outputs {:?} do not match partition {} labels",
                labels.outs,
                output.name()
            )));
        }
        let n = options.grid_points;
        if n < MIN_GRID_POINTS || n.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "grid_points must be odd and at least {MIN_GRID_POINTS}, got {n}"
            )));
        }
        Ok(Self::assemble(phi, phidot, output, rules, options))
    }

    fn assemble(
        phi: Partition,
        phidot: Partition,
        output: Partition,
        rules: RuleBase,
        options: EngineOptions,
    ) -> Self {
        let out_grid = symmetric_grid(output.z_max(), options.grid_points);
        let out_mu = output
            .terms()
            .iter()
            .map(|t| out_grid.iter().map(|&y| t.eval(y)).collect())
            .collect();
        Engine {
            phi,
            phidot,
            output,
            rules,
            options,
            out_grid,
            out_mu,
        }
    }

    /// The 3x3 controller over unit universes.
    pub fn principles_3x3(options: EngineOptions) -> Self {
        let nzp = ["N", "Z", "P"];
        Engine::new(
            Partition::uniform("phi", 1.0, &nzp).unwrap(),
            Partition::uniform("phidot", 1.0, &nzp).unwrap(),
            Partition::uniform("u", 1.0, &nzp).unwrap(),
            RuleBase::principles_3x3(),
            options,
        )
        .expect("built-in controller is consistent")
    }

    /// The 5x5 / 7-output controller over unit universes.
    pub fn table_i(options: EngineOptions) -> Self {
        let five = ["NB", "NM", "Z", "PM", "PB"];
        let seven = ["NB", "NM", "NS", "Z", "PS", "PM", "PB"];
        Engine::new(
            Partition::uniform("phi", 1.0, &five).unwrap(),
            Partition::uniform("phidot", 1.0, &five).unwrap(),
            Partition::uniform("u", 1.0, &seven).unwrap(),
            RuleBase::table_i(),
            options,
        )
        .expect("built-in controller is consistent")
    }

    pub fn phi(&self) -> &Partition {
        &self.phi
    }

    pub fn phidot(&self) -> &Partition {
        &self.phidot
    }

    pub fn output(&self) -> &Partition {
        &self.output
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    pub fn mode(&self) -> InferenceMode {
        self.options.mode
    }

    /// Same controller with a different inference mode.
    pub fn with_mode(&self, mode: InferenceMode) -> Self {
        let mut e = self.clone();
        e.options.mode = mode;
        e
    }

    pub fn with_grid_points(&self, grid_points: usize) -> Result<Self> {
        Engine::new(
            self.phi.clone(),
            self.phidot.clone(),
            self.output.clone(),
            self.rules.clone(),
            EngineOptions {
                grid_points,
                ..self.options
            },
        )
    }

    pub fn with_clamp(&self, clamp_inputs: bool) -> Self {
        let mut e = self.clone();
        e.options.clamp_inputs = clamp_inputs;
        e
    }

    pub fn fire_rules(&self, phi: f64, phidot: f64) -> Result<FiringRecord> {
        if !phi.is_finite() || !phidot.is_finite() {
            return Err(Error::invalid(format!(
                "controller inputs must be finite, got ({phi}, {phidot})"
            )));
        }
        let (phi, phidot) = if self.options.clamp_inputs {
            (self.phi.clamp(phi), self.phidot.clamp(phidot))
        } else {
            (phi, phidot)
        };
        let a = self.phi.fuzzify(phi);
        let b = self.phidot.fuzzify(phidot);
        let cols = b.len();
        let mut strengths = Vec::with_capacity(a.len() * cols);
        let mut aggregated = vec![0.0f64; self.output.len()];
        for (i, &ma) in a.iter().enumerate() {
            for (j, &mb) in b.iter().enumerate() {
                let w = ma.min(mb);
                strengths.push(w);
                let t = self.rules.get(i, j);
                aggregated[t] = aggregated[t].max(w);
            }
        }
        Ok(FiringRecord {
            cols,
            strengths,
            aggregated,
        })
    }

    /// Center of gravity of `max_t min(aggregated[t], mu_t(y))` over the
    /// sampled output universe.
    pub fn defuzz_centroid(&self, f: &FiringRecord) -> f64 {
        let n = self.out_grid.len();
        let agg = f.aggregated();
        let clipped = |s: usize| {
            self.out_mu
                .iter()
                .zip(agg)
                .fold(0.0f64, |acc, (mu, &a)| acc.max(mu[s].min(a)))
        };
        // Samples are summed in mirror pairs so a mirror-symmetric aggregate
        // cancels exactly.
        let mid = n / 2;
        let mut num = 0.0;
        let mut den = clipped(mid);
        for s in 0..mid {
            let (lo, hi) = (clipped(s), clipped(n - 1 - s));
            num += self.out_grid[n - 1 - s] * (hi - lo);
            den += lo + hi;
        }
        if den == 0.0 {
            log::warn!("degenerate output set: centroid mass is zero, returning 0");
            return 0.0;
        }
        num / den
    }

    /// Firing-weighted average of the output-term centers.
    pub fn defuzz_sugeno(&self, f: &FiringRecord) -> f64 {
        let (num, den) = self
            .output
            .terms()
            .iter()
            .zip(f.aggregated())
            .fold((0.0, 0.0), |(n, d), (t, &w)| (n + w * t.center(), d + w));
        if den == 0.0 {
            log::warn!("degenerate output set: total firing is zero, returning 0");
            return 0.0;
        }
        num / den
    }

    pub fn infer(&self, phi: f64, phidot: f64) -> Result<f64> {
        let f = self.fire_rules(phi, phidot)?;
        Ok(match self.options.mode {
            InferenceMode::Mamdani => self.defuzz_centroid(&f),
            InferenceMode::SugenoSingleton => self.defuzz_sugeno(&f),
        })
    }

    /// Controller output over an `n_phi` x `n_phidot` uniform grid of the
    /// input universes.
    pub fn surface(&self, n_phi: usize, n_phidot: usize) -> Result<Surface> {
        if n_phi < 2 || n_phidot < 2 {
            return Err(Error::invalid(format!(
                "surface needs at least 2 points per axis, got {n_phi}x{n_phidot}"
            )));
        }
        let phis = symmetric_grid(self.phi.z_max(), n_phi);
        let phidots = symmetric_grid(self.phidot.z_max(), n_phidot);
        let values = phis
            .iter()
            .map(|&p| phidots.iter().map(|&d| self.infer(p, d)).collect())
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Ok(Surface {
            phis,
            phidots,
            values,
        })
    }
}

/// Sampled controller surface, `values[a][b]` at `(phis[a], phidots[b])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub phis: Vec<f64>,
    pub phidots: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Surface {
    /// Row-major `(phi, phidot, u)` triples.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.phis.iter().enumerate().flat_map(move |(a, &p)| {
            self.phidots
                .iter()
                .enumerate()
                .map(move |(b, &d)| (p, d, self.values[a][b]))
        })
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    // 30-digit reference memberships for the (-0.2, 0.6) state.
    const N_AT_M02: f64 = 0.169575540930958985;
    const Z_AT_06: f64 = 0.368567304322775303;
    const P_AT_06: f64 = 0.641712948781452099;
    const N_AT_06: f64 = 0.000826899719104030430;
    const P_AT_M02: f64 = 0.0184530103348364125;

    fn mamdani() -> Engine {
        Engine::principles_3x3(EngineOptions::default())
    }

    fn sugeno() -> Engine {
        mamdani().with_mode(InferenceMode::SugenoSingleton)
    }

    #[test]
    fn grid_is_exactly_antisymmetric() {
        for n in [3, 41, 101, 1001] {
            let g = symmetric_grid(1.0, n);
            assert_eq!(g[0], -1.0);
            assert_eq!(g[n - 1], 1.0);
            for k in 0..n {
                assert_eq!(g[k], -g[n - 1 - k]);
            }
        }
    }

    #[test]
    fn rejects_even_or_coarse_grids() {
        let e = mamdani();
        assert!(e.with_grid_points(1000).is_err());
        assert!(e.with_grid_points(99).is_err());
        assert!(e.with_grid_points(101).is_ok());
    }

    #[test]
    fn rejects_mismatched_rules() {
        let nzp = ["N", "Z", "P"];
        let five = ["NB", "NM", "Z", "PM", "PB"];
        let p3 = Partition::uniform("phi", 1.0, &nzp).unwrap();
        let p5 = Partition::uniform("phidot", 1.0, &five).unwrap();
        let err = Engine::new(
            p3.clone(),
            p5,
            p3.clone(),
            RuleBase::principles_3x3(),
            EngineOptions::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn both_centers_hit() {
        let f = mamdani().fire_rules(0.0, 0.0).unwrap();
        assert_eq!(f.strength(1, 1), 1.0);
        let f = mamdani().fire_rules(1.0, 1.0).unwrap();
        assert_eq!(f.strength(2, 2), 1.0);
        assert_eq!(f.aggregated()[2], 1.0);
    }

    #[test]
    fn worked_state_firing() {
        let f = mamdani().fire_rules(-0.2, 0.6).unwrap();
        assert!((f.strength(0, 1) - N_AT_M02).abs() < 1e-12);
        assert!((f.strength(0, 0) - N_AT_06).abs() < 1e-12);
        assert!((f.strength(2, 2) - P_AT_M02).abs() < 1e-12);
        let want = [N_AT_M02, Z_AT_06, P_AT_06];
        for (g, w) in f.aggregated().iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{:?}", f.aggregated());
        }
        assert!(f.strengths().flatten().all(|&w| w > 0.0));
    }

    #[test]
    fn non_finite_input_rejected() {
        assert!(mamdani().fire_rules(f64::NAN, 0.0).is_err());
        assert!(mamdani().infer(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn clamping_limits_inputs() {
        let e = mamdani().with_clamp(true);
        assert_eq!(e.infer(5.0, 7.0).unwrap(), e.infer(1.0, 1.0).unwrap());
        let free = mamdani();
        assert_ne!(free.infer(5.0, 7.0).unwrap(), free.infer(1.0, 1.0).unwrap());
    }

    #[test]
    fn centroid_of_symmetric_aggregates_is_zero() {
        let e = mamdani();
        assert_eq!(e.defuzz_centroid(&FiringRecord::from_aggregate(vec![0.0, 1.0, 0.0])), 0.0);
        for (a, b) in [(0.3, 0.9), (1.0, 0.1), (0.5, 0.5), (0.0, 0.0)] {
            let f = FiringRecord::from_aggregate(vec![a, b, a]);
            assert_eq!(e.defuzz_centroid(&f), 0.0);
        }
    }

    #[test]
    fn degenerate_aggregate_returns_zero() {
        let e = mamdani();
        let f = FiringRecord::from_aggregate(vec![0.0, 0.0, 0.0]);
        assert_eq!(e.defuzz_centroid(&f), 0.0);
        assert_eq!(e.defuzz_sugeno(&f), 0.0);
    }

    #[test]
    fn sugeno_singletons() {
        let e = sugeno();
        assert_eq!(e.defuzz_sugeno(&FiringRecord::from_aggregate(vec![0.0, 1.0, 0.0])), 0.0);
        assert_eq!(e.defuzz_sugeno(&FiringRecord::from_aggregate(vec![0.0, 0.0, 1.0])), 1.0);
        let u = e.infer(-0.2, 0.6).unwrap();
        let want = (P_AT_06 - N_AT_M02) / (N_AT_M02 + Z_AT_06 + P_AT_06);
        assert!((u - want).abs() < 1e-12);
        assert!((u - 0.400165350916107584).abs() < 1e-12);
    }

    /// Centroid over a five-sample output grid, summed by hand.
    #[test]
    fn centroid_matches_hand_sum_on_five_samples() {
        let coarse = mamdani();
        let e = Engine::assemble(
            coarse.phi.clone(),
            coarse.phidot.clone(),
            coarse.output.clone(),
            coarse.rules.clone(),
            EngineOptions {
                grid_points: 5,
                ..EngineOptions::default()
            },
        );
        // Samples -1, -0.5, 0, 0.5, 1 with aggregate (0.2, 0.7, 0.4):
        //   -1   -> max(0.2, 0.0625, 2^-16)  = 0.2
        //   -0.5 -> max(0.2, 0.5, 2^-9)      = 0.5
        //    0   -> max(0.0625, 0.7, 0.0625) = 0.7
        //    0.5 -> max(2^-9, 0.5, 0.4)      = 0.5
        //    1   -> max(2^-16, 0.0625, 0.4)  = 0.4
        let hand = (-0.2 - 0.25 + 0.0 + 0.25 + 0.4) / (0.2 + 0.5 + 0.7 + 0.5 + 0.4);
        let got = e.defuzz_centroid(&FiringRecord::from_aggregate(vec![0.2, 0.7, 0.4]));
        assert!((got - hand).abs() < 1e-12, "{got} vs {hand}");
    }

    #[test]
    fn zero_fixed_point() {
        for e in [mamdani(), sugeno()] {
            assert_eq!(e.infer(0.0, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn worked_state_centroid_in_window() {
        let u = mamdani().infer(-0.2, 0.6).unwrap();
        assert!((0.133..=0.253).contains(&u), "{u}");
    }

    #[test]
    fn surface_shape_and_center() {
        let s = mamdani().surface(3, 3).unwrap();
        assert_eq!(s.values[1][1], 0.0);
        assert_eq!(s.points().count(), 9);
        assert!(mamdani().surface(1, 5).is_err());
    }

    #[test]
    fn surface_point_reflection() {
        for e in [mamdani(), sugeno()] {
            let s = e.surface(17, 12).unwrap();
            for a in 0..17 {
                for b in 0..12 {
                    assert!((s.values[a][b] + s.values[16 - a][11 - b]).abs() < 1e-9);
                }
            }
        }
    }

    /// Independent recomputation of clip-max-centroid at the (1, 1) corner.
    #[test]
    fn surface_corner_matches_straight_line_centroid() {
        let sigma = 1.0 / (8.0 * std::f64::consts::LN_2).sqrt();
        let mu = |z: f64, c: f64| (-(z - c).powi(2) / (2.0 * sigma * sigma)).exp();
        let table = [[0, 0, 1], [0, 1, 2], [1, 2, 2]];
        let centers = [-1.0, 0.0, 1.0];
        let mut agg = [0.0f64; 3];
        for i in 0..3 {
            for j in 0..3 {
                let w = mu(1.0, centers[i]).min(mu(1.0, centers[j]));
                agg[table[i][j]] = agg[table[i][j]].max(w);
            }
        }
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..1001 {
            let y = -1.0 + 2.0 * k as f64 / 1000.0;
            let m = (0..3).map(|t| agg[t].min(mu(y, centers[t]))).fold(0.0, f64::max);
            num += y * m;
            den += m;
        }
        let want = num / den;
        let s = mamdani().surface(41, 41).unwrap();
        let got = s.values[40][40];
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        assert!(got > 0.5 && got < 1.0);
    }
}
