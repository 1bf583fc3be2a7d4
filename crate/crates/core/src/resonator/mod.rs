//! The resonator: a window of irreducibles split into degree groups, a
//! multiplicative weight on squarefree products of window primes, and the
//! capped support set the resonator sum runs over.

mod psi;
mod set;
mod spec;
mod strength;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{count_irreducibles, irreducibles, Poly};

pub use psi::PsiTable;
pub use set::{resonator_value, Member, ResonatorSet, DEFAULT_MEMBER_BUDGET};
pub use spec::ResonatorSpec;
pub use strength::{
    a_n_divisor_sum, a_n_divisor_sum_exact, a_n_product, a_n_product_exact, le2_reference,
    tail_diagnostics, TailDiagnostics, SUPPORT_PRIME_LIMIT,
};

pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_A: f64 = 1.5;

/// Window primes beyond this count are refused.
pub const WINDOW_PRIME_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ResonatorParams {
    /// `L1, L2, L3` are `ln N`, `ln ln N`, `ln ln ln N`.
    Asymptotic {
        #[serde(with = "crate::real::string")]
        n: f64,
        #[serde(with = "crate::real::string")]
        gamma: f64,
        #[serde(with = "crate::real::string")]
        a: f64,
    },
    /// `L1, L2, L3` given directly; the window, caps and weight scale may be
    /// overridden. An explicit window `[lo, hi]` gets one group per degree.
    Explicit {
        #[serde(with = "crate::real::string")]
        l1: f64,
        #[serde(with = "crate::real::string")]
        l2: f64,
        #[serde(with = "crate::real::string")]
        l3: f64,
        #[serde(with = "crate::real::string")]
        gamma: f64,
        #[serde(with = "crate::real::string")]
        a: f64,
        #[serde(default)]
        window: Option<[usize; 2]>,
        #[serde(default)]
        caps: Option<Vec<u64>>,
        #[serde(default, with = "crate::real::opt_string")]
        psi_scale: Option<f64>,
    },
}

impl Default for ResonatorParams {
    /// Window degrees `{1, 2}`, one prime allowed from each.
    fn default() -> Self {
        ResonatorParams::Explicit {
            l1: 2.0,
            l2: 1.0,
            l3: 1.0,
            gamma: DEFAULT_GAMMA,
            a: DEFAULT_A,
            window: Some([1, 2]),
            caps: Some(vec![1, 1]),
            psi_scale: None,
        }
    }
}

/// The three log-scales plus the shape constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scales {
    #[serde(with = "crate::real::string")]
    pub l1: f64,
    #[serde(with = "crate::real::string")]
    pub l2: f64,
    #[serde(with = "crate::real::string")]
    pub l3: f64,
    #[serde(with = "crate::real::string")]
    pub gamma: f64,
    #[serde(with = "crate::real::string")]
    pub a: f64,
}

impl ResonatorParams {
    pub fn asymptotic(n: f64, gamma: f64, a: f64) -> Result<Self> {
        let p = ResonatorParams::Asymptotic { n, gamma, a };
        p.validate()?;
        Ok(p)
    }

    pub fn explicit(l1: f64, l2: f64, l3: f64) -> Self {
        ResonatorParams::Explicit {
            l1,
            l2,
            l3,
            gamma: DEFAULT_GAMMA,
            a: DEFAULT_A,
            window: None,
            caps: None,
            psi_scale: None,
        }
    }

    pub fn with_window(mut self, lo: usize, hi: usize) -> Self {
        if let ResonatorParams::Explicit { window, .. } = &mut self {
            *window = Some([lo, hi]);
        }
        self
    }

    pub fn with_caps(mut self, c: Vec<u64>) -> Self {
        if let ResonatorParams::Explicit { caps, .. } = &mut self {
            *caps = Some(c);
        }
        self
    }

    pub fn with_psi_scale(mut self, s: f64) -> Self {
        if let ResonatorParams::Explicit { psi_scale, .. } = &mut self {
            *psi_scale = Some(s);
        }
        self
    }

    pub fn with_shape(mut self, new_gamma: f64, new_a: f64) -> Self {
        match &mut self {
            ResonatorParams::Asymptotic { gamma, a, .. }
            | ResonatorParams::Explicit { gamma, a, .. } => {
                *gamma = new_gamma;
                *a = new_a;
            }
        }
        self
    }

    pub fn is_asymptotic(&self) -> bool {
        matches!(self, ResonatorParams::Asymptotic { .. })
    }

    /// `N` in asymptotic mode.
    pub fn n_scale(&self) -> Option<f64> {
        match self {
            ResonatorParams::Asymptotic { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.scales()?;
        if !(s.gamma > 0.0 && s.gamma < 1.0) {
            return Err(Error::InvalidParams(format!("gamma = {} not in (0, 1)", s.gamma)));
        }
        if !(s.a > 1.0 && s.a < 1.0 / s.gamma) {
            return Err(Error::InvalidParams(format!(
                "a = {} not in (1, 1/gamma = {})",
                s.a,
                1.0 / s.gamma
            )));
        }
        if let ResonatorParams::Explicit {
            window,
            caps,
            psi_scale,
            ..
        } = self
        {
            if let Some([lo, hi]) = window {
                if hi < lo || *lo == 0 {
                    return Err(Error::InvalidParams(format!("window [{lo}, {hi}] is empty")));
                }
                if let Some(c) = caps {
                    if c.len() != hi - lo + 1 {
                        return Err(Error::InvalidParams(format!(
                            "{} caps for {} window degrees",
                            c.len(),
                            hi - lo + 1
                        )));
                    }
                }
            }
            if let Some(s) = psi_scale {
                if !(s.is_finite() && *s > 0.0) {
                    return Err(Error::InvalidParams(format!("psi scale {s} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn scales(&self) -> Result<Scales> {
        match *self {
            ResonatorParams::Asymptotic { n, gamma, a } => {
                if !(n > std::f64::consts::E.exp()) {
                    return Err(Error::InvalidParams(format!(
                        "N = {n} must exceed e^e so that ln ln ln N > 0"
                    )));
                }
                let l1 = n.ln();
                let l2 = l1.ln();
                Ok(Scales {
                    l1,
                    l2,
                    l3: l2.ln(),
                    gamma,
                    a,
                })
            }
            ResonatorParams::Explicit {
                l1,
                l2,
                l3,
                gamma,
                a,
                ..
            } => {
                if !(l1 > 0.0 && l2 > 0.0 && l3 > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "scales L1 = {l1}, L2 = {l2}, L3 = {l3} must be positive"
                    )));
                }
                Ok(Scales {
                    l1,
                    l2,
                    l3,
                    gamma,
                    a,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub k: usize,
    /// Inclusive degree range, `None` when no integer degree falls in it.
    pub degrees: Option<(usize, usize)>,
    /// Indices into the window prime list.
    pub members: Vec<usize>,
    pub cap: u64,
}

/// The window of irreducibles and its partition into groups.
#[derive(Clone, Debug)]
pub struct PrimeGroups {
    field: FieldSpec,
    params: ResonatorParams,
    scales: Scales,
    offset: f64,
    psi_scale: f64,
    window: Option<(usize, usize)>,
    primes: Vec<Poly>,
    group_of: Vec<usize>,
    groups: Vec<Group>,
}

/// `log_q(x)`
fn log_q(field: FieldSpec, x: f64) -> f64 {
    x.ln() / (field.q() as f64).ln()
}

/// Integers `d` with `lo < d <= hi`.
fn integer_range(lo: f64, hi: f64) -> Option<(usize, usize)> {
    let first = (lo.floor() + 1.0).max(1.0);
    let last = hi.floor();
    (last >= first).then_some((first as usize, last as usize))
}

fn clip(r: Option<(usize, usize)>, w: Option<(usize, usize)>) -> Option<(usize, usize)> {
    let ((a, b), (c, d)) = (r?, w?);
    let (lo, hi) = (a.max(c), b.min(d));
    (lo <= hi).then_some((lo, hi))
}

pub fn build_groups(params: &ResonatorParams, field: FieldSpec) -> Result<PrimeGroups> {
    params.validate()?;
    let scales = params.scales()?;
    let offset = log_q(field, scales.l1 * scales.l2);
    let cap_for = |k: usize| -> u64 {
        // saturating float-to-int cast
        (scales.a * scales.l1 / ((k * k) as f64 * scales.l3)).floor() as u64
    };

    let (window, ranges, cap_override, psi_override) = match params {
        ResonatorParams::Explicit {
            window: Some([lo, hi]),
            caps,
            psi_scale,
            ..
        } => {
            let ranges: Vec<_> = (*lo..=*hi).map(|d| Some((d, d))).collect();
            (Some((*lo, *hi)), ranges, caps.clone(), *psi_scale)
        }
        _ => {
            let top = scales.l2.powf(scales.gamma);
            let window = integer_range(1.0 + offset, top + offset);
            let kmax = top.floor() as usize;
            let ranges = (1..=kmax)
                .map(|k| clip(integer_range(k as f64 + offset, (k + 1) as f64 + offset), window))
                .collect();
            let (caps, psi) = match params {
                ResonatorParams::Explicit { caps, psi_scale, .. } => (caps.clone(), *psi_scale),
                _ => (None, None),
            };
            (window, ranges, caps, psi)
        }
    };
    if let Some(c) = &cap_override {
        if c.len() != ranges.len() {
            return Err(Error::InvalidParams(format!(
                "{} caps for {} groups",
                c.len(),
                ranges.len()
            )));
        }
    }

    if let Some((lo, _)) = window {
        if (lo as f64) <= offset {
            return Err(Error::InvalidParams(format!(
                "window degree {lo} does not exceed log_q(L1 L2) = {offset:.6}, weights would not be positive"
            )));
        }
    }

    let mut primes = Vec::new();
    let mut group_of = Vec::new();
    let mut groups = Vec::with_capacity(ranges.len());
    for (i, range) in ranges.into_iter().enumerate() {
        let k = i + 1;
        let mut members = Vec::new();
        if let Some((lo, hi)) = range {
            for d in lo..=hi {
                let count = count_irreducibles(field, d);
                if count + primes.len() as u128 > WINDOW_PRIME_LIMIT {
                    return Err(Error::BudgetExceeded {
                        what: "window primes",
                        needed: count + primes.len() as u128,
                        budget: WINDOW_PRIME_LIMIT,
                    });
                }
                for p in irreducibles(field, d) {
                    members.push(primes.len());
                    group_of.push(i);
                    primes.push(p);
                }
            }
        }
        let cap = cap_override.as_ref().map_or_else(|| cap_for(k), |c| c[i]);
        groups.push(Group {
            k,
            degrees: range,
            members,
            cap,
        });
    }
    if primes.is_empty() {
        log::warn!("resonator window is empty; the resonator is identically 1");
    }
    Ok(PrimeGroups {
        field,
        params: params.clone(),
        scales,
        offset,
        psi_scale: psi_override.unwrap_or_else(|| (scales.l1 * scales.l2 / scales.l3).sqrt()),
        window,
        primes,
        group_of,
        groups,
    })
}

impl PrimeGroups {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn params(&self) -> &ResonatorParams {
        &self.params
    }

    pub fn scales(&self) -> Scales {
        self.scales
    }

    /// `log_q(L1 L2)`, the shift in the weight's degree factor.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn psi_scale(&self) -> f64 {
        self.psi_scale
    }

    /// Degree range the window covers, `None` if it contains no integer.
    pub fn window_degrees(&self) -> Option<(usize, usize)> {
        self.window
    }

    pub fn is_degenerate(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    pub fn group_of(&self, prime: usize) -> usize {
        self.group_of[prime]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.members.len()).collect()
    }

    pub fn caps(&self) -> Vec<u64> {
        self.groups.iter().map(|g| g.cap).collect()
    }

    pub fn caps_binding(&self) -> bool {
        self.groups.iter().any(|g| (g.cap as u128) < g.members.len() as u128)
    }

    pub fn max_degree(&self) -> usize {
        self.primes.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// `exp(gamma sqrt(L1 L3 / L2))`, the growth the window is built for.
    pub fn le2_reference(&self) -> f64 {
        le2_reference(&self.scales)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn default_explicit_window() {
        let g = build_groups(&ResonatorParams::default(), f3()).unwrap();
        assert_eq!(g.group_sizes(), vec![3, 3]);
        assert_eq!(g.caps(), vec![1, 1]);
        assert!(g.caps_binding());
        assert_eq!(g.window_degrees(), Some((1, 2)));
    }

    #[test]
    fn asymptotic_million() {
        let p = ResonatorParams::asymptotic(1e6, 0.5, 1.5).unwrap();
        let s = p.scales().unwrap();
        assert!((s.l2 - 2.626).abs() < 1e-3);
        let g = build_groups(&p, f3()).unwrap();
        assert_eq!(g.groups().len(), 1);
        // log_3(ln N ln ln N) ~ 3.27, so (4.27, 4.89] holds no degree
        assert!(g.is_degenerate());
        assert_eq!(g.window_degrees(), None);
    }

    #[test]
    fn small_n_is_rejected() {
        assert!(matches!(
            ResonatorParams::asymptotic(10.0, 0.5, 1.5),
            Err(Error::InvalidParams(_))
        ));
        assert!(ResonatorParams::asymptotic(1e6, 0.5, 2.5).is_err());
        assert!(ResonatorParams::asymptotic(1e6, 1.2, 1.5).is_err());
    }

    #[test]
    fn reversed_window_is_rejected() {
        let p = ResonatorParams::explicit(2.0, 1.0, 1.0).with_window(3, 2);
        assert!(build_groups(&p, f3()).is_err());
        let low = ResonatorParams::explicit(9.0, 3.0, 1.0).with_window(1, 2);
        assert!(build_groups(&low, f3()).is_err());
    }

    #[test]
    fn groups_partition_the_window() {
        for n in [1e8, 1e20, 1e40, 1e80] {
            for gamma in [0.3, 0.5, 0.9] {
                let p = ResonatorParams::asymptotic(n, gamma, 1.05).unwrap();
                let g = match build_groups(&p, f3()) {
                    Ok(g) => g,
                    Err(Error::BudgetExceeded { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                let mut covered: Vec<usize> =
                    g.groups().iter().flat_map(|gr| gr.members.clone()).collect();
                covered.sort();
                assert_eq!(covered, (0..g.primes().len()).collect::<Vec<_>>());
                if let Some((lo, hi)) = g.window_degrees() {
                    for pr in g.primes() {
                        let d = pr.degree().unwrap();
                        assert!(lo <= d && d <= hi);
                        assert!(d as f64 > g.offset());
                    }
                }
            }
        }
    }
}
