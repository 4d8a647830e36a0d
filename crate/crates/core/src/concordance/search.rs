//! Locating the flip of the step function `t -> ν(D_+(K,t))`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;

use super::expr::{KnotExpression, KnotRegistry};
use super::nu::NuEvaluator;
use crate::construct::{twisted_double, DoubleSpec};
use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};

/// Optional a-priori bounds on `t_ν`, e.g. `lower = TB(K)` and
/// `upper = -TB(-K) - 1`. Only used to warn about inconsistencies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TbHints {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

impl TbHints {
    pub fn new(lower: Option<i64>, upper: Option<i64>) -> Result<Self> {
        if let (Some(l), Some(u)) = (lower, upper) {
            if l > u {
                return Err(Error::InvalidArgument(format!(
                    "hint lower bound {l} exceeds upper bound {u}"
                )));
            }
        }
        Ok(TbHints { lower, upper })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub t: i64,
    pub nu: i64,
}

/// `t_ν(K)` with the two evaluations certifying it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnuResult {
    pub knot: String,
    pub invariant: String,
    pub value: i64,
    /// `(ν(D_+(K, value)), ν(D_+(K, value + 1)))`, always `(1, 0)`.
    pub certificate: (i64, i64),
    /// Every evaluation in the order it was made.
    pub log: Vec<Evaluation>,
}

impl fmt::Display for TnuResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t_{}({}) = {} [nu(D+(K,{})) = {}, nu(D+(K,{})) = {}; {} evaluations]",
            self.invariant,
            self.knot,
            self.value,
            self.value,
            self.certificate.0,
            self.value + 1,
            self.certificate.1,
            self.log.len()
        )
    }
}

/// Runs searches for one invariant, evaluating several doubles at once when
/// `jobs > 1`.
pub struct Searcher<'a> {
    pub registry: &'a KnotRegistry,
    pub nu: &'a dyn NuEvaluator,
    pool: Option<rayon::ThreadPool>,
}

struct Probe<'a> {
    companion: &'a PlanarDiagram,
    negative: bool,
    cache: Mutex<BTreeMap<i64, i64>>,
    log: Mutex<Vec<Evaluation>>,
}

impl<'a> Searcher<'a> {
    pub fn new(registry: &'a KnotRegistry, nu: &'a dyn NuEvaluator, jobs: usize) -> Result<Self> {
        let pool = if jobs > 1 {
            let p = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} workers: {e}")))?;
            Some(p)
        } else {
            None
        };
        Ok(Searcher { registry, nu, pool })
    }

    fn par_map<T: Send, R: Send>(&self, items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
        match &self.pool {
            Some(p) => p.install(|| items.into_par_iter().map(&f).collect()),
            None => items.into_iter().map(f).collect(),
        }
    }

    fn compute(&self, probe: &Probe, t: i64) -> Result<i64> {
        if let Some(&v) = probe.cache.lock().expect("lock").get(&t) {
            return Ok(v);
        }
        let spec = if probe.negative {
            DoubleSpec::negative(probe.companion.clone(), t)
        } else {
            DoubleSpec::positive(probe.companion.clone(), t)
        };
        let v = self.nu.nu(&twisted_double(&spec)?)?;
        log::debug!(
            "nu_{}(D{}(K,{t})) = {v}",
            self.nu.name(),
            if probe.negative { "-" } else { "+" }
        );
        probe.cache.lock().expect("lock").insert(t, v);
        Ok(v)
    }

    /// Appends to the log in request order, so logs do not depend on
    /// scheduling.
    fn record(probe: &Probe, t: i64, v: i64) {
        let mut log = probe.log.lock().expect("lock");
        if !log.iter().any(|e| e.t == t) {
            log.push(Evaluation { t, nu: v });
        }
    }

    fn eval(&self, probe: &Probe, t: i64) -> Result<i64> {
        let v = self.compute(probe, t)?;
        Self::record(probe, t, v);
        Ok(v)
    }

    /// Evaluates all `ts`, in parallel when allowed; results follow `ts`.
    fn eval_many(&self, probe: &Probe, ts: Vec<i64>) -> Result<Vec<i64>> {
        let vs: Vec<i64> = self
            .par_map(ts.clone(), |t| self.compute(probe, t))
            .into_iter()
            .collect::<Result<_>>()?;
        for (&t, &v) in ts.iter().zip(&vs) {
            Self::record(probe, t, v);
        }
        Ok(vs)
    }

    fn step_value(&self, probe: &Probe, t: i64) -> Result<i64> {
        let v = self.eval(probe, t)?;
        if v != 0 && v != 1 {
            return Err(Error::MonotonicityViolation(format!(
                "nu(D+(K,{t})) = {v} is not 0 or 1"
            )));
        }
        Ok(v)
    }

    fn seed(&self, d: &PlanarDiagram) -> i64 {
        match self.nu.nu(d) {
            Ok(v) => 2 * v - 1,
            Err(e) => {
                log::warn!("falling back to a diagram seed: {e}");
                d.writhe() - d.seifert_circle_count() as i64
            }
        }
    }

    /// Greatest `t` with `ν(D_+(K,t)) = 1`. Starts at a seed, gallops with
    /// doubling steps until both values are seen, then bisects.
    pub fn t_nu(&self, e: &KnotExpression, hints: &TbHints) -> Result<TnuResult> {
        let knot = e.canonical(self.registry)?.to_string();
        let d = e.diagram(self.registry)?;
        let probe = Probe {
            companion: &d,
            negative: false,
            cache: Mutex::default(),
            log: Mutex::default(),
        };
        let t0 = self.seed(&d);
        let width = self
            .pool
            .as_ref()
            .map_or(1, |p| p.current_num_threads())
            .max(2);

        let first = self.eval_many(&probe, vec![t0, t0 + 1])?;
        for (t, v) in [(t0, first[0]), (t0 + 1, first[1])] {
            if v != 0 && v != 1 {
                return Err(Error::MonotonicityViolation(format!(
                    "nu(D+(K,{t})) = {v} is not 0 or 1"
                )));
            }
        }
        // Invariant: ν(lo) = 1 and ν(hi) = 0.
        let (mut lo, mut hi) = match (first[0], first[1]) {
            (1, 0) => (t0, t0 + 1),
            (0, 1) => {
                return Err(Error::MonotonicityViolation(format!(
                    "nu is 0 at {t0} but 1 at {}",
                    t0 + 1
                )));
            }
            (1, _) => {
                let mut lo = t0 + 1;
                let mut step = 1i64;
                loop {
                    let ts: Vec<i64> = (0..width).map(|k| lo + (step << k)).collect();
                    let vs = self.eval_many(&probe, ts.clone())?;
                    match ts.iter().zip(&vs).position(|(_, &v)| v != 1) {
                        Some(i) => {
                            if let Some(&bad) = vs.iter().find(|&&v| v != 0 && v != 1) {
                                return Err(Error::MonotonicityViolation(format!(
                                    "nu value {bad} is not 0 or 1"
                                )));
                            }
                            if i > 0 {
                                lo = ts[i - 1];
                            }
                            break (lo, ts[i]);
                        }
                        None => {
                            lo = *ts.last().expect("non-empty");
                            step <<= width;
                        }
                    }
                }
            }
            _ => {
                let mut hi = t0;
                let mut step = 1i64;
                loop {
                    let ts: Vec<i64> = (0..width).map(|k| hi - (step << k)).collect();
                    let vs = self.eval_many(&probe, ts.clone())?;
                    match ts.iter().zip(&vs).position(|(_, &v)| v != 0) {
                        Some(i) => {
                            if let Some(&bad) = vs.iter().find(|&&v| v != 0 && v != 1) {
                                return Err(Error::MonotonicityViolation(format!(
                                    "nu value {bad} is not 0 or 1"
                                )));
                            }
                            if i > 0 {
                                hi = ts[i - 1];
                            }
                            break (ts[i], hi);
                        }
                        None => {
                            hi = *ts.last().expect("non-empty");
                            step <<= width;
                        }
                    }
                }
            }
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.step_value(&probe, mid)? == 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let log = probe.log.into_inner().expect("lock");
        check_monotone(&log)?;
        if hints.lower.is_some_and(|l| lo < l) || hints.upper.is_some_and(|u| lo > u) {
            log::warn!(
                "t_{}({knot}) = {lo} lies outside the hinted range {hints:?}",
                self.nu.name()
            );
        }
        Ok(TnuResult {
            knot,
            invariant: self.nu.name().to_string(),
            value: lo,
            certificate: (1, 0),
            log,
        })
    }

    /// Recomputes the two certificate evaluations.
    pub fn reverify(&self, e: &KnotExpression, r: &TnuResult) -> Result<bool> {
        let d = e.diagram(self.registry)?;
        let at = |t| {
            self.nu
                .nu(&twisted_double(&DoubleSpec::positive(d.clone(), t))?)
        };
        Ok((at(r.value)?, at(r.value + 1)?) == r.certificate)
    }

    /// `ν(D_+(K,t))` for `t` in `lo..=hi`; must be a non-increasing 0/1 step.
    pub fn step_profile(&self, e: &KnotExpression, lo: i64, hi: i64) -> Result<Vec<(i64, i64)>> {
        let prof = self.profile(e, lo, hi, false)?;
        for &(t, v) in &prof {
            if v != 0 && v != 1 {
                return Err(Error::MonotonicityViolation(format!(
                    "nu(D+(K,{t})) = {v} is not 0 or 1"
                )));
            }
        }
        if prof.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(Error::MonotonicityViolation(format!(
                "profile {prof:?} increases"
            )));
        }
        Ok(prof)
    }

    /// `ν(D_-(K,t))` for `t` in `lo..=hi`; must be 0 below some flip and -1
    /// from it on.
    pub fn negative_double_profile(
        &self,
        e: &KnotExpression,
        lo: i64,
        hi: i64,
    ) -> Result<Vec<(i64, i64)>> {
        let prof = self.profile(e, lo, hi, true)?;
        for &(t, v) in &prof {
            if v != 0 && v != -1 {
                return Err(Error::MonotonicityViolation(format!(
                    "nu(D-(K,{t})) = {v} is not -1 or 0"
                )));
            }
        }
        if prof.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(Error::MonotonicityViolation(format!(
                "profile {prof:?} increases"
            )));
        }
        Ok(prof)
    }

    fn profile(
        &self,
        e: &KnotExpression,
        lo: i64,
        hi: i64,
        negative: bool,
    ) -> Result<Vec<(i64, i64)>> {
        if lo > hi {
            return Ok(Vec::new());
        }
        let d = e.diagram(self.registry)?;
        let probe = Probe {
            companion: &d,
            negative,
            cache: Mutex::default(),
            log: Mutex::default(),
        };
        let ts: Vec<i64> = (lo..=hi).collect();
        let vs = self.eval_many(&probe, ts.clone())?;
        Ok(ts.into_iter().zip(vs).collect())
    }

    /// Computes `t_ν` of `K1`, `K2`, `-K1`, `-K2` and `K1 # K2` and checks
    /// `t(K1) + t(K2) <= t(K1#K2) <= min(t(K1) - t(-K2), t(K2) - t(-K1))`.
    /// `-K` is taken as the mirror image; ν is assumed insensitive to
    /// orientation reversal, as s is.
    pub fn verify_sum_sandwich(
        &self,
        k1: &KnotExpression,
        k2: &KnotExpression,
    ) -> Result<SandwichReport> {
        let exprs = vec![
            k1.clone(),
            k2.clone(),
            k1.clone().mirror(),
            k2.clone().mirror(),
            k1.clone().sum(k2.clone()),
        ];
        let hints = TbHints::default();
        let rs: Vec<TnuResult> = self
            .par_map(exprs, |e| self.t_nu(&e, &hints))
            .into_iter()
            .collect::<Result<_>>()?;
        let [t1, t2, m1, m2, t12] = <[TnuResult; 5]>::try_from(rs).expect("five searches");
        let lower = t1.value + t2.value;
        let upper = (t1.value - m2.value).min(t2.value - m1.value);
        let report = SandwichReport {
            lower,
            upper,
            sum: t12,
            k1: t1,
            k2: t2,
            mirror_k1: m1,
            mirror_k2: m2,
        };
        if !(lower <= report.sum.value && report.sum.value <= upper) {
            return Err(Error::InequalityViolation(format!(
                "t({}) = {} outside [{lower}, {upper}]",
                report.sum.knot, report.sum.value
            )));
        }
        Ok(report)
    }
}

fn check_monotone(log: &[Evaluation]) -> Result<()> {
    let mut sorted: Vec<Evaluation> = log.to_vec();
    sorted.sort_by_key(|e| e.t);
    if let Some(w) = sorted.windows(2).find(|w| w[1].nu > w[0].nu) {
        return Err(Error::MonotonicityViolation(format!(
            "nu is {} at t = {} but {} at t = {}",
            w[0].nu, w[0].t, w[1].nu, w[1].t
        )));
    }
    Ok(())
}

/// Result of checking the connected-sum inequalities on one pair.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub k1: TnuResult,
    pub k2: TnuResult,
    pub mirror_k1: TnuResult,
    pub mirror_k2: TnuResult,
    pub sum: TnuResult,
    pub lower: i64,
    pub upper: i64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concordance::nu::NuS;

    /// ν(D_+(K,t)) = [t <= flip] for a fixed flip, ignoring K.
    struct FakeStep(i64);

    impl NuEvaluator for FakeStep {
        fn name(&self) -> &str {
            "fake"
        }
        fn nu(&self, d: &PlanarDiagram) -> Result<i64> {
            // Recover t from the writhe: w(D_+(U,t)) = 2 - 2t.
            if d.crossing_count() < 2 {
                return Ok(0);
            }
            let t = (2 - d.writhe()) / 2;
            Ok(i64::from(t <= self.0))
        }
    }

    struct Broken;

    impl NuEvaluator for Broken {
        fn name(&self) -> &str {
            "broken"
        }
        fn nu(&self, d: &PlanarDiagram) -> Result<i64> {
            Ok(d.crossing_count() as i64 % 3)
        }
    }

    fn unknot() -> KnotExpression {
        "PD[]".parse().unwrap()
    }

    #[test]
    fn gallop_finds_far_flips() {
        let reg = KnotRegistry::default();
        for flip in [-40, -3, -1, 0, 7, 100] {
            let nu = FakeStep(flip);
            for jobs in [1, 3] {
                let s = Searcher::new(&reg, &nu, jobs).unwrap();
                let r = s.t_nu(&unknot(), &TbHints::default()).unwrap();
                assert_eq!(r.value, flip, "jobs {jobs}");
                assert!(r.log.len() < 40);
                assert!(s.reverify(&unknot(), &r).unwrap());
            }
        }
    }

    #[test]
    fn broken_invariant_is_detected() {
        let reg = KnotRegistry::default();
        let s = Searcher::new(&reg, &Broken, 1).unwrap();
        assert!(matches!(
            s.t_nu(&unknot(), &TbHints::default()),
            Err(Error::MonotonicityViolation(_))
        ));
    }

    #[test]
    fn unknot_and_trefoil() {
        let reg = KnotRegistry::default();
        let nu = NuS::default();
        let s = Searcher::new(&reg, &nu, 1).unwrap();
        assert_eq!(s.t_nu(&unknot(), &TbHints::default()).unwrap().value, -1);
        let r = s
            .t_nu(&"T(2,3)".parse().unwrap(), &TbHints::default())
            .unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.certificate, (1, 0));
        assert_eq!(r.knot, "T(2,3)");
    }

    #[test]
    fn profiles() {
        let reg = KnotRegistry::default();
        let nu = NuS::default();
        let s = Searcher::new(&reg, &nu, 2).unwrap();
        let vals = |p: Vec<(i64, i64)>| p.into_iter().map(|x| x.1).collect::<Vec<_>>();
        assert_eq!(
            vals(s.step_profile(&unknot(), -3, 1).unwrap()),
            vec![1, 1, 1, 0, 0]
        );
        assert_eq!(
            vals(s.negative_double_profile(&unknot(), -2, 2).unwrap()),
            vec![0, 0, 0, -1, -1]
        );
        assert!(s.step_profile(&unknot(), 2, 1).unwrap().is_empty());
    }

    #[test]
    fn hints_are_validated() {
        assert!(TbHints::new(Some(3), Some(1)).is_err());
        assert!(TbHints::new(Some(1), Some(3)).is_ok());
    }
}
