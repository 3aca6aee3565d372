//! Stream giving-up policies.
//!
//! The Bayesian rule leaves the attended stream k when its complexity,
//! discounted by the exponential gain learned so far, falls to the mean
//! complexity of the other streams:
//!
//!   C_k(t) * exp(-lambda * t_rel) <= <C>_{i != k}
//!
//! with lambda the posterior-mean detection rate of a Gamma(nu, Delta)
//! conjugate model updated from detection/handling times. Entry into a stream
//! is only justified while C_k(entry) exceeds the others' mean; a failed entry
//! hypothesis triggers an immediate leave. Charnov (fixed residence from the
//! marginal-value solution), Deterministic (fixed dwell) and Random (uniform
//! dwell) serve as baselines.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaze::RewardEvent;

/// Gamma-conjugate belief over the detection rate of the attended stream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesianState {
    pub nu0: f64,
    pub delta0: f64,
    pub nu: f64,
    pub delta: f64,
    /// Rewards gained since entry.
    pub n: u64,
    /// Entry tick.
    pub t_in: u32,
}

impl BayesianState {
    pub fn new(nu0: f64, delta0: f64, t_in: u32) -> Result<Self> {
        if nu0 <= 0.0 || delta0 <= 0.0 || !nu0.is_finite() || !delta0.is_finite() {
            return Err(Error::Parameter("Gamma hyper-parameters must be positive".into()));
        }
        Ok(BayesianState { nu0, delta0, nu: nu0, delta: delta0, n: 0, t_in })
    }

    /// Posterior-mean detection rate, E[lambda] = nu / Delta.
    pub fn lambda_bar(&self) -> f64 {
        self.nu / self.delta
    }
}

/// Probability of having gained a reward by dwell time t at rate lambda.
pub fn gain_probability(lambda: f64, t: f64) -> Result<f64> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::Parameter(format!("gain rate must be positive, got {lambda}")));
    }
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Parameter(format!("dwell time must be >= 0, got {t}")));
    }
    Ok(1.0 - (-lambda * t).exp())
}

/// Conjugate hyper-parameter update from one detection attempt.
///
/// Detection time accrues on every attempt; handling time and the reward
/// count only on hits.
pub fn update_bayesian(state: &BayesianState, event: &RewardEvent) -> BayesianState {
    let mut next = *state;
    if event.hit {
        next.n += 1;
        next.nu = next.nu0 + next.n as f64;
        next.delta += event.td + event.th;
    } else {
        next.delta += event.td;
    }
    next
}

/// The optimal Bayesian leave test at relative dwell `t_rel`.
///
/// At entry (t_rel = 0) this is exactly the entry hypothesis: a stream whose
/// complexity does not exceed the others' mean is abandoned immediately.
pub fn should_leave_bayesian(
    state: &BayesianState,
    c_k: f64,
    c_others_mean: f64,
    t_rel: u32,
) -> bool {
    if c_others_mean <= 0.0 {
        // The exponential decay never reaches zero, so positive complexity
        // can never cross a zero mean; the comparison in f64 would after
        // exp() underflows.
        return c_k <= 0.0;
    }
    c_k * (-state.lambda_bar() * t_rel as f64).exp() <= c_others_mean
}

/// Closed-form crossing time of the leave condition for constant
/// complexities: t* = (1/lambda) ln(C_k / <C>).
pub fn closed_form_leave_time(lambda: f64, c_k: f64, c_others_mean: f64) -> f64 {
    (c_k / c_others_mean).ln() / lambda
}

/// Posterior probability that the attended stream still yields a reward,
/// given that none has been gained by time t:
///
///   P(C_k | no reward) = P(C_k) / (exp(lambda t) sum_{i != k} P(C_i) + P(C_k))
///
/// with P(C_i) the complexity-proportional prior. At the crossing time of the
/// leave condition this equals 1/K.
pub fn posterior_no_reward(cs: &[f64], k: usize, lambda: f64, t: f64) -> Result<f64> {
    if k >= cs.len() {
        return Err(Error::Parameter(format!("stream index {k} out of range")));
    }
    if lambda <= 0.0 {
        return Err(Error::Parameter("lambda must be positive".into()));
    }
    if t < 0.0 {
        return Err(Error::Parameter("t must be >= 0".into()));
    }
    let total: f64 = cs.iter().sum();
    if total <= 0.0 {
        return Err(Error::Parameter("complexities must have positive sum".into()));
    }
    let p_k = cs[k] / total;
    let p_others = 1.0 - p_k;
    let denom = (lambda * t).exp() * p_others + p_k;
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "posterior denominator {denom} not positive at t = {t}"
        )));
    }
    Ok(p_k / denom)
}

/// Optimal residence time for the Charnov baseline:
/// Delta_w = C_in * sqrt(t_b / (<C> * delta)), rounded up to whole ticks.
pub fn charnov_residence(c_in: f64, c_mean: f64, delta_slope: f64, t_b: f64) -> Result<u64> {
    Ok(charnov_residence_raw(c_in, c_mean, delta_slope, t_b)?.ceil() as u64)
}

/// Pre-rounding Charnov residence time.
pub fn charnov_residence_raw(c_in: f64, c_mean: f64, delta_slope: f64, t_b: f64) -> Result<f64> {
    if c_mean <= 0.0 {
        return Err(Error::Parameter("Charnov residence requires <C> > 0".into()));
    }
    if c_in <= 0.0 || delta_slope <= 0.0 || t_b <= 0.0 {
        return Err(Error::Parameter("Charnov inputs must be positive".into()));
    }
    Ok(c_in * (t_b / (c_mean * delta_slope)).sqrt())
}

/// Strategy selection plus per-kind parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StrategyConfig {
    Bayesian { nu0: f64, delta0: f64 },
    Charnov { delta_slope: f64, t_b: f64 },
    Deterministic { delta_w: u32 },
    Random { b_w: f64 },
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig::Bayesian { nu0: 1.0, delta0: 100.0 }
    }
}

impl StrategyConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            StrategyConfig::Bayesian { .. } => "bayesian",
            StrategyConfig::Charnov { .. } => "charnov",
            StrategyConfig::Deterministic { .. } => "deterministic",
            StrategyConfig::Random { .. } => "random",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            StrategyConfig::Bayesian { nu0, delta0 } => nu0 > 0.0 && delta0 > 0.0,
            StrategyConfig::Charnov { delta_slope, t_b } => delta_slope > 0.0 && t_b > 0.0,
            StrategyConfig::Deterministic { delta_w } => delta_w > 0,
            StrategyConfig::Random { b_w } => b_w > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "strategy '{}' requires positive parameters",
                self.kind_name()
            )))
        }
    }
}

/// Why the forager left a stream; recorded in the timeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeaveReason {
    Bayes,
    Charnov,
    Deterministic,
    Random,
    /// Entry hypothesis C_k(entry) > <C> failed.
    Hypothesis,
}

impl LeaveReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            LeaveReason::Bayes => "bayes",
            LeaveReason::Charnov => "charnov",
            LeaveReason::Deterministic => "deterministic",
            LeaveReason::Random => "random",
            LeaveReason::Hypothesis => "hypothesis",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bayes" => Some(LeaveReason::Bayes),
            "charnov" => Some(LeaveReason::Charnov),
            "deterministic" => Some(LeaveReason::Deterministic),
            "random" => Some(LeaveReason::Random),
            "hypothesis" => Some(LeaveReason::Hypothesis),
            _ => None,
        }
    }
}

/// Complexity snapshot handed to the leave test each attentive tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeaveContext {
    /// Ticks since entry.
    pub t_rel: u32,
    /// Live complexity of the attended stream.
    pub c_attended: f64,
    /// Mean pre-attentive complexity of the other K-1 streams.
    pub c_others_mean: f64,
    /// Mean pre-attentive complexity over all K streams.
    pub c_all_mean: f64,
}

/// Runtime state of a giving-up policy across one visit.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategyState {
    Bayesian(BayesianState),
    Charnov { delta_slope: f64, t_b: f64, dwell: u64 },
    Deterministic { delta_w: u32 },
    Random { b_w: f64, dwell: f64 },
}

impl StrategyState {
    pub fn new(config: &StrategyConfig) -> Result<Self> {
        config.validate()?;
        Ok(match *config {
            StrategyConfig::Bayesian { nu0, delta0 } => {
                StrategyState::Bayesian(BayesianState::new(nu0, delta0, 0)?)
            }
            StrategyConfig::Charnov { delta_slope, t_b } => {
                StrategyState::Charnov { delta_slope, t_b, dwell: 0 }
            }
            StrategyConfig::Deterministic { delta_w } => StrategyState::Deterministic { delta_w },
            StrategyConfig::Random { b_w } => StrategyState::Random { b_w, dwell: 0.0 },
        })
    }

    /// Reset per-visit state at stream entry. The Bayesian belief restarts
    /// from its priors; Charnov fixes its residence from entry complexities;
    /// Random draws its dwell once.
    pub fn on_enter<R: Rng + ?Sized>(
        &mut self,
        t_in: u32,
        ctx: &LeaveContext,
        rng: &mut R,
    ) -> Result<()> {
        match self {
            StrategyState::Bayesian(b) => {
                *b = BayesianState::new(b.nu0, b.delta0, t_in)?;
            }
            StrategyState::Charnov { delta_slope, t_b, dwell } => {
                // Entering a stream with no usable complexity signal gets the
                // minimum one-tick residence.
                *dwell = if ctx.c_attended > 0.0 && ctx.c_all_mean > 0.0 {
                    charnov_residence(ctx.c_attended, ctx.c_all_mean, *delta_slope, *t_b)?
                } else {
                    1
                };
            }
            StrategyState::Deterministic { .. } => {}
            StrategyState::Random { b_w, dwell } => {
                *dwell = rng.random_range(0.0..*b_w);
            }
        }
        Ok(())
    }

    /// Feed one detection attempt into the policy.
    pub fn on_event(&mut self, event: &RewardEvent) {
        if let StrategyState::Bayesian(b) = self {
            *b = update_bayesian(b, event);
        }
    }

    /// Kind-dispatched leave decision.
    pub fn should_leave(&self, ctx: &LeaveContext) -> Option<LeaveReason> {
        match self {
            StrategyState::Bayesian(b) => {
                if should_leave_bayesian(b, ctx.c_attended, ctx.c_others_mean, ctx.t_rel) {
                    if ctx.t_rel == 0 {
                        Some(LeaveReason::Hypothesis)
                    } else {
                        Some(LeaveReason::Bayes)
                    }
                } else {
                    None
                }
            }
            StrategyState::Charnov { dwell, .. } => {
                (ctx.t_rel as u64 >= *dwell).then_some(LeaveReason::Charnov)
            }
            StrategyState::Deterministic { delta_w } => {
                (ctx.t_rel >= *delta_w).then_some(LeaveReason::Deterministic)
            }
            StrategyState::Random { dwell, .. } => {
                (ctx.t_rel as f64 >= *dwell).then_some(LeaveReason::Random)
            }
        }
    }

    pub fn bayesian(&self) -> Option<&BayesianState> {
        match self {
            StrategyState::Bayesian(b) => Some(b),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Vec2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn event(hit: bool, td: f64, th: f64) -> RewardEvent {
        RewardEvent {
            tick: 0,
            stream: 0,
            foa: Vec2::ZERO,
            hit,
            object_kind: None,
            td,
            th,
        }
    }

    #[test]
    fn gain_probability_boundaries() {
        assert_eq!(gain_probability(0.1, 0.0).unwrap(), 0.0);
        // Oracle: solve 1 - exp(-lambda t) = 0.5 at lambda = 0.1.
        let t_half = std::f64::consts::LN_2 / 0.1;
        assert!((gain_probability(0.1, t_half).unwrap() - 0.5).abs() < 1e-12);
        assert!((gain_probability(0.1, 1e6 / 0.1).unwrap() - 1.0).abs() < 1e-9);
        assert!(gain_probability(0.1, -1.0).is_err());
        assert!(gain_probability(0.0, 1.0).is_err());
    }

    #[test]
    fn gamma_update_matches_worked_arithmetic() {
        // nu0 = 1, Delta0 = 100; two hits with Delta(t) = 30 and 50.
        let s0 = BayesianState::new(1.0, 100.0, 0).unwrap();
        let s1 = update_bayesian(&s0, &event(true, 10.0, 20.0));
        let s2 = update_bayesian(&s1, &event(true, 25.0, 25.0));
        assert_eq!(s2.nu, 3.0);
        assert_eq!(s2.delta, 180.0);
        assert!((s2.lambda_bar() - 1.0 / 60.0).abs() < 1e-12);
        assert_eq!(s2.n, 2);
        assert_eq!(s2.nu - s2.nu0, s2.n as f64);
    }

    #[test]
    fn prior_mean_without_events() {
        let s = BayesianState::new(1.0, 100.0, 0).unwrap();
        assert!((s.lambda_bar() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn miss_accrues_detection_time_only() {
        let s0 = BayesianState::new(1.0, 100.0, 0).unwrap();
        let s1 = update_bayesian(&s0, &event(false, 10.0, 0.0));
        assert_eq!(s1.nu, 1.0);
        assert_eq!(s1.delta, 110.0);
        assert!(s1.lambda_bar() < s0.lambda_bar());
    }

    #[test]
    fn lambda_bar_strictly_decreases_over_rewardless_dwell() {
        let mut s = BayesianState::new(1.0, 100.0, 0).unwrap();
        let mut prev = s.lambda_bar();
        for _ in 0..50 {
            s = update_bayesian(&s, &event(false, 1.13, 0.0));
            assert!(s.lambda_bar() < prev);
            prev = s.lambda_bar();
        }
    }

    #[test]
    fn leave_condition_crosses_at_the_closed_form_tick() {
        // C_k = 2 <C>, lambda fixed at 0.05: first leave tick is
        // ceil(ln 2 / 0.05) = 14.
        let s = BayesianState::new(1.0, 20.0, 0).unwrap();
        assert!((s.lambda_bar() - 0.05).abs() < 1e-15);
        let c_k = 0.2;
        let c_mean = 0.1;
        let mut first_leave = None;
        for t in 0..100u32 {
            if t == 0 {
                // Entry hypothesis holds.
                assert!(!should_leave_bayesian(&s, c_k, c_mean, 0));
                continue;
            }
            if should_leave_bayesian(&s, c_k, c_mean, t) {
                first_leave = Some(t);
                break;
            }
        }
        assert_eq!(first_leave, Some(14));
        let t_star = closed_form_leave_time(0.05, c_k, c_mean);
        assert_eq!(t_star.ceil() as u32, 14);
    }

    #[test]
    fn failed_entry_hypothesis_leaves_at_zero() {
        let s = BayesianState::new(1.0, 100.0, 0).unwrap();
        assert!(should_leave_bayesian(&s, 0.1, 0.1, 0));
        assert!(should_leave_bayesian(&s, 0.05, 0.1, 0));
    }

    #[test]
    fn zero_competition_never_triggers_the_rule() {
        let s = BayesianState::new(1.0, 10.0, 0).unwrap();
        for t in 0..10_000 {
            assert!(!should_leave_bayesian(&s, 0.2, 0.0, t));
        }
    }

    #[test]
    fn posterior_equals_one_over_k_at_the_crossing_time() {
        // Substituting t* into the posterior must return 1/K for any
        // complexity vector satisfying the entry hypothesis.
        let cases: Vec<Vec<f64>> = vec![
            vec![0.2, 0.1],
            vec![0.2, 0.05, 0.08],
            vec![0.22, 0.01, 0.02, 0.03, 0.015, 0.025, 0.01, 0.02],
        ];
        for cs in cases {
            let k = 0usize;
            let others: f64 =
                cs.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, c)| c).sum();
            let c_mean = others / (cs.len() - 1) as f64;
            assert!(cs[k] > c_mean, "entry hypothesis must hold in test data");
            let lambda = 0.07;
            let t_star = closed_form_leave_time(lambda, cs[k], c_mean);
            let p = posterior_no_reward(&cs, k, lambda, t_star).unwrap();
            assert!(
                (p - 1.0 / cs.len() as f64).abs() < 1e-12,
                "posterior {p} vs 1/{}",
                cs.len()
            );
        }
    }

    #[test]
    fn posterior_at_time_zero_recovers_the_prior() {
        // exp(0) = 1 collapses the denominator to the full prior mass.
        let cs = vec![0.1, 0.1];
        let p = posterior_no_reward(&cs, 0, 0.05, 0.0).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let cs = vec![0.3, 0.1, 0.1];
        let p = posterior_no_reward(&cs, 0, 0.05, 0.0).unwrap();
        assert!((p - 0.6).abs() < 1e-12);
    }

    #[test]
    fn posterior_strictly_decreases_in_dwell_time() {
        let cs = vec![0.2, 0.1, 0.05];
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let t = i as f64 * 2.0;
            let p = posterior_no_reward(&cs, 0, 0.03, t).unwrap();
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn posterior_rejects_bad_inputs() {
        assert!(posterior_no_reward(&[0.0, 0.0], 0, 0.1, 1.0).is_err());
        assert!(posterior_no_reward(&[0.1, 0.1], 5, 0.1, 1.0).is_err());
        assert!(posterior_no_reward(&[0.1, 0.1], 0, -0.1, 1.0).is_err());
        assert!(posterior_no_reward(&[0.1, 0.1], 0, 0.1, -1.0).is_err());
    }

    #[test]
    fn charnov_unit_case_and_hand_example() {
        assert_eq!(charnov_residence(1.0, 1.0, 1.0, 1.0).unwrap(), 1);
        // 0.2 * sqrt(10) = 0.63246 -> 1 tick after ceiling.
        let raw = charnov_residence_raw(0.2, 0.1, 1.0, 1.0).unwrap();
        assert!((raw - 0.2 * 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(charnov_residence(0.2, 0.1, 1.0, 1.0).unwrap(), 1);
        assert!(charnov_residence(0.2, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn charnov_is_linear_in_entry_complexity() {
        let a = charnov_residence_raw(0.15, 0.06, 2.0, 1.0).unwrap();
        let b = charnov_residence_raw(0.30, 0.06, 2.0, 1.0).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
    }

    #[test]
    fn mvt_patch_time_increases_with_prey_density() {
        // Closed-form leave time strictly increasing in C_k.
        let lambda = 0.05;
        let c_mean = 0.08;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..50 {
            let c_k = 0.09 + 0.003 * i as f64;
            let t = closed_form_leave_time(lambda, c_k, c_mean);
            assert!(t > prev);
            prev = t;
        }
    }

    fn ctx(t_rel: u32, c_att: f64, c_others: f64) -> LeaveContext {
        LeaveContext {
            t_rel,
            c_attended: c_att,
            c_others_mean: c_others,
            c_all_mean: (c_att + c_others) / 2.0,
        }
    }

    #[test]
    fn deterministic_leaves_exactly_at_delta_w() {
        let cfg = StrategyConfig::Deterministic { delta_w: 100 };
        let mut s = StrategyState::new(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for visit in 0..3 {
            s.on_enter(visit * 1000, &ctx(0, 0.2, 0.1), &mut rng).unwrap();
            for t in 0..100 {
                assert_eq!(s.should_leave(&ctx(t, 0.2, 0.1)), None);
            }
            assert_eq!(
                s.should_leave(&ctx(100, 0.2, 0.1)),
                Some(LeaveReason::Deterministic)
            );
        }
    }

    #[test]
    fn random_dwell_is_bounded_and_reproducible() {
        let cfg = StrategyConfig::Random { b_w: 200.0 };
        let mut a = StrategyState::new(&cfg).unwrap();
        let mut b = StrategyState::new(&cfg).unwrap();
        let mut ra = ChaCha8Rng::seed_from_u64(11);
        let mut rb = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            a.on_enter(0, &ctx(0, 0.2, 0.1), &mut ra).unwrap();
            b.on_enter(0, &ctx(0, 0.2, 0.1), &mut rb).unwrap();
            let (StrategyState::Random { dwell: da, .. }, StrategyState::Random { dwell: db, .. }) =
                (&a, &b)
            else {
                panic!("not random state")
            };
            assert_eq!(da, db);
            assert!((0.0..200.0).contains(da));
        }
    }

    #[test]
    fn dispatch_matches_the_bare_bayesian_rule() {
        let cfg = StrategyConfig::Bayesian { nu0: 1.0, delta0: 20.0 };
        let mut s = StrategyState::new(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        s.on_enter(0, &ctx(0, 0.2, 0.1), &mut rng).unwrap();
        let b = *s.bayesian().unwrap();
        for t in 0..40 {
            let direct = should_leave_bayesian(&b, 0.2, 0.1, t);
            let via = s.should_leave(&ctx(t, 0.2, 0.1)).is_some();
            assert_eq!(direct, via, "tick {t}");
        }
        assert_eq!(s.should_leave(&ctx(14, 0.2, 0.1)), Some(LeaveReason::Bayes));
        assert_eq!(s.should_leave(&ctx(0, 0.1, 0.1)), Some(LeaveReason::Hypothesis));
    }

    #[test]
    fn bayesian_state_resets_between_visits() {
        let cfg = StrategyConfig::Bayesian { nu0: 1.0, delta0: 100.0 };
        let mut s = StrategyState::new(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        s.on_enter(0, &ctx(0, 0.2, 0.1), &mut rng).unwrap();
        s.on_event(&event(true, 10.0, 5.0));
        s.on_event(&event(false, 10.0, 0.0));
        assert!(s.bayesian().unwrap().n == 1);
        s.on_enter(500, &ctx(0, 0.2, 0.1), &mut rng).unwrap();
        let b = s.bayesian().unwrap();
        assert_eq!(b.n, 0);
        assert_eq!(b.nu, 1.0);
        assert_eq!(b.delta, 100.0);
        assert_eq!(b.t_in, 500);
    }

    #[test]
    fn config_validation_rejects_nonpositive_params() {
        assert!(StrategyConfig::Bayesian { nu0: 0.0, delta0: 1.0 }.validate().is_err());
        assert!(StrategyConfig::Charnov { delta_slope: -1.0, t_b: 1.0 }.validate().is_err());
        assert!(StrategyConfig::Deterministic { delta_w: 0 }.validate().is_err());
        assert!(StrategyConfig::Random { b_w: 0.0 }.validate().is_err());
    }

    #[test]
    fn strategy_config_json_round_trip() {
        let configs = [
            StrategyConfig::Bayesian { nu0: 1.0, delta0: 100.0 },
            StrategyConfig::Charnov { delta_slope: 0.001, t_b: 1.0 },
            StrategyConfig::Deterministic { delta_w: 25 },
            StrategyConfig::Random { b_w: 50.0 },
        ];
        for cfg in configs {
            let json = serde_json::to_string(&cfg).unwrap();
            let back: StrategyConfig = serde_json::from_str(&json).unwrap();
            assert_eq!(cfg, back);
        }
        let json = r#"{"kind":"bayesian","nu0":2.0,"delta0":50.0}"#;
        let cfg: StrategyConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg, StrategyConfig::Bayesian { nu0: 2.0, delta0: 50.0 });
    }
}
