//! Cutoff-sequence quadrature for integrands singular at the origin.
//!
//! Partial integrals over `2^{-k} < |z| <= 1/2` are accumulated one dyadic
//! shell at a time (Gauss–Legendre in `r`, trapezoid in `θ`), and the trend
//! of the shell contributions decides convergence.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

/// First and last inner cutoff exponents.
pub const FIRST_LEVEL: u32 = 4;
pub const LAST_LEVEL: u32 = 40;
/// Shell contributions must shrink (or grow) by at least this factor per
/// level, over the whole tail window, to call a trend.
pub const TREND_FACTOR: f64 = 1.15;
/// Partial integrals exceeding this multiple of the first one diverge.
pub const BLOWUP_FACTOR: f64 = 1e6;
/// Number of trailing level ratios inspected.
pub const TAIL_WINDOW: usize = 8;

pub const GAUSS_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Trend {
    Convergent,
    Divergent,
    Indeterminate,
}

/// Partial integrals and the trend read off from them.
#[derive(Debug, Clone, Serialize)]
pub struct CutoffSeries {
    pub trend: Trend,
    /// `I_k` for `k = FIRST_LEVEL..=LAST_LEVEL`.
    pub partials: Vec<f64>,
    /// Geometric-tail extrapolation of `lim I_k`, when convergent.
    pub extrapolated: Option<f64>,
    /// Ratios of successive shell contributions over the tail window.
    pub tail_ratios: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn shell_integral(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (mid, half) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Cutoff series for `∫_{2^{-k}}^{1/2} g(r) dr`.
pub fn radial_series(g: &dyn Fn(f64) -> f64) -> CutoffSeries {
    let rule = gauss_legendre(GAUSS_POINTS);
    // shell j covers [2^{-(j+1)}, 2^{-j}]
    let shells: Vec<f64> = (1..LAST_LEVEL)
        .map(|j| shell_integral(g, 0.5f64.powi(j as i32 + 1), 0.5f64.powi(j as i32), &rule))
        .collect();
    let mut partials = Vec::new();
    let mut acc = 0.0;
    for (j, s) in shells.iter().enumerate() {
        acc += s;
        let level = j as u32 + 2;
        if level >= FIRST_LEVEL {
            partials.push(acc);
        }
    }
    // I_{k+1} - I_k is the shell at level k, taken directly to avoid cancellation
    let diffs = shells[FIRST_LEVEL as usize - 1..].to_vec();
    classify(partials, diffs)
}

/// Cutoff series for `∫_{2^{-k} < |z| <= 1/2} F(z) dA`, with `angular`
/// equispaced angles per radius.
pub fn disc_series(f: &dyn Fn(Complex64) -> f64, angular: usize) -> CutoffSeries {
    let angular = angular.max(1);
    let g = |r: f64| {
        let step = 2.0 * PI / angular as f64;
        let mean: f64 = (0..angular)
            .map(|t| f(Complex64::from_polar(r, step * t as f64)))
            .sum::<f64>()
            / angular as f64;
        2.0 * PI * r * mean
    };
    radial_series(&g)
}

fn classify(partials: Vec<f64>, diffs: Vec<f64>) -> CutoffSeries {
    let tail = &diffs[diffs.len() - TAIL_WINDOW - 1..];
    let tail_ratios: Vec<f64> = tail.windows(2).map(|w| w[0] / w[1]).collect();
    let positive = tail.iter().all(|d| *d > 0.0 && d.is_finite());
    let first = partials[0];
    let last = *partials.last().unwrap();

    let shrinking = positive && tail_ratios.iter().all(|r| *r >= TREND_FACTOR);
    let growing = positive && tail_ratios.iter().all(|r| *r <= 1.0 / TREND_FACTOR);
    let blown_up = !last.is_finite() || (first > 0.0 && last > BLOWUP_FACTOR * first);

    let (trend, extrapolated) = if shrinking {
        let rho = *tail_ratios.last().unwrap();
        let d = *diffs.last().unwrap();
        (Trend::Convergent, Some(last + d / (rho - 1.0)))
    } else if growing || blown_up {
        (Trend::Divergent, None)
    } else {
        (Trend::Indeterminate, None)
    };
    CutoffSeries {
        trend,
        partials,
        extrapolated,
        tail_ratios,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(GAUSS_POINTS);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
        let quartic: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((quartic - 0.4).abs() < 1e-13);
    }

    #[test]
    fn disc_area() {
        let s = disc_series(&|_| 1.0, 1);
        assert_eq!(s.trend, Trend::Convergent);
        assert!((s.extrapolated.unwrap() - PI / 4.0).abs() < 1e-9);
    }

    #[test]
    fn log_divergence_is_indeterminate() {
        let s = radial_series(&|r| 1.0 / r);
        assert_eq!(s.trend, Trend::Indeterminate);
    }
}
