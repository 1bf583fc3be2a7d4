use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 1000;
const STEP_TOLERANCE: f64 = 1e-15;

/// Outcome of a root-modulus check on `L*`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RhCheck {
    pub ok: bool,
    /// `|u_j|` for every root, with multiplicity, ascending.
    pub moduli: Vec<f64>,
    /// `max_j | |u_j| - q^(-1/2) |`
    pub max_deviation: f64,
    pub tolerance: f64,
}

/// All complex roots of `sum_i coeffs[i] x^i` by Aberth iteration.
///
/// Expects simple roots; clustered roots converge slowly and lose accuracy.
pub fn find_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let mut roots = Vec::new();
    let zeros = c.iter().take_while(|&&x| x == 0.0).count();
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    c.drain(..zeros);
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(roots);
    }
    let lead = c[n];
    for x in c.iter_mut() {
        *x /= lead;
    }
    if n == 1 {
        roots.push(Complex64::new(-c[0], 0.0));
        return Ok(roots);
    }

    let radius = c[0].abs().powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();

    let mut max_step = f64::INFINITY;
    let mut converged_rounds = 0;
    for iteration in 0..MAX_ITERATIONS {
        max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
        }
        if max_step < STEP_TOLERANCE {
            // a couple of extra sweeps to polish
            converged_rounds += 1;
            if converged_rounds >= 2 {
                log::trace!("aberth converged after {iteration} sweeps");
                roots.extend(z);
                return Ok(roots);
            }
        }
    }
    Err(Error::RootFinding {
        iterations: MAX_ITERATIONS,
        max_step,
    })
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Root moduli of `sum c_i u^i`, compared against `q^(-1/2)`.
///
/// The polynomial is first split into squarefree factors over Q so repeated
/// roots are found as simple ones, then each factor is solved in the scaled
/// variable `v = u sqrt(q)`, which puts the expected roots on the unit circle.
pub(crate) fn check_rh(q: u32, completed: &[i64], tol: f64) -> Result<RhCheck> {
    let target = (q as f64).sqrt().recip();
    let poly: Vec<BigRational> = completed
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect();
    let mut moduli = Vec::new();
    for (factor, mult) in rational::squarefree(&poly) {
        let scaled: Vec<f64> = factor
            .iter()
            .enumerate()
            .map(|(i, a)| a.to_f64().unwrap_or(f64::NAN) * target.powi(i as i32))
            .collect();
        for v in find_roots(&scaled)? {
            let m = v.norm() * target;
            moduli.extend(std::iter::repeat_n(m, mult));
        }
    }
    moduli.sort_by(f64::total_cmp);
    let max_deviation = moduli
        .iter()
        .map(|m| (m - target).abs())
        .fold(0.0, f64::max);
    Ok(RhCheck {
        ok: max_deviation <= tol,
        moduli,
        max_deviation,
        tolerance: tol,
    })
}

/// Dense polynomials over Q, lowest degree first, trimmed.
mod rational {
    use super::*;

    pub type RPoly = Vec<BigRational>;

    fn trim(mut p: RPoly) -> RPoly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn degree(p: &RPoly) -> usize {
        p.len().saturating_sub(1)
    }

    fn monic(p: RPoly) -> RPoly {
        let lead = p.last().cloned().expect("nonzero");
        p.into_iter().map(|a| a / &lead).collect()
    }

    fn derivative(p: &RPoly) -> RPoly {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    fn divrem(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
        let mut r = a.clone();
        if a.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead = b.last().expect("nonzero divisor");
        let mut quo = vec![BigRational::zero(); a.len() - b.len() + 1];
        for k in (0..quo.len()).rev() {
            let c = &r[k + b.len() - 1] / lead;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[k + j] -= &c * bj;
                }
            }
            quo[k] = c;
        }
        r.truncate(b.len() - 1);
        (trim(quo), trim(r))
    }

    fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = if r.is_empty() { r } else { monic(r) };
        }
        monic(x)
    }

    fn exact_div(a: &RPoly, b: &RPoly) -> RPoly {
        let (q, r) = divrem(a, b);
        debug_assert!(r.is_empty());
        q
    }

    /// Yun's algorithm over a field of characteristic 0.
    pub fn squarefree(p: &RPoly) -> Vec<(RPoly, usize)> {
        let p = trim(p.clone());
        if degree(&p) == 0 {
            return Vec::new();
        }
        let p = monic(p);
        let mut c = gcd(&p, &derivative(&p));
        let mut w = exact_div(&p, &c);
        let mut out = Vec::new();
        let mut i = 1;
        while degree(&w) > 0 {
            let y = gcd(&w, &c);
            let z = exact_div(&w, &y);
            if degree(&z) > 0 {
                out.push((z, i));
            }
            i += 1;
            c = exact_div(&c, &y);
            w = y;
        }
        out
    }

    #[cfg(test)]
    pub fn from_ints(c: &[i64]) -> RPoly {
        c.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }
}
