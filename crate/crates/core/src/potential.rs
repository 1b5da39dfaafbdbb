//! Radial attractive potentials with compact support.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Profile {
    /// v(r) = amplitude for r <= b, 0 beyond.
    Indicator,
    /// v(r) = amplitude * exp(1 - 1/(1 - (r/b)^2)), a C0-infinity mollifier.
    SmoothBump,
    /// Piecewise-linear interpolation of (r, v) samples ending at v(b) = 0.
    Tabulated { samples: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Potential {
    pub profile: Profile,
    /// Support radius b > 0.
    pub support_radius: f64,
    pub amplitude: f64,
}

impl Potential {
    pub fn indicator(b: f64, amplitude: f64) -> Result<Self> {
        Self::new(Profile::Indicator, b, amplitude)
    }

    pub fn smooth_bump(b: f64, amplitude: f64) -> Result<Self> {
        Self::new(Profile::SmoothBump, b, amplitude)
    }

    pub fn tabulated(b: f64, samples: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(Profile::Tabulated { samples }, b, 1.0)
    }

    pub fn new(profile: Profile, support_radius: f64, amplitude: f64) -> Result<Self> {
        if !(support_radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "support radius must be positive, got {support_radius}"
            )));
        }
        if !(amplitude >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "amplitude must be nonnegative, got {amplitude}"
            )));
        }
        if let Profile::Tabulated { samples } = &profile {
            if samples.len() < 2 {
                return Err(Error::InvalidArgument(
                    "tabulated profile needs at least two (r, v) samples".into(),
                ));
            }
            let mut prev = f64::NEG_INFINITY;
            for &(r, v) in samples {
                if !(r >= 0.0 && r > prev) {
                    return Err(Error::InvalidArgument(
                        "tabulated radii must be nonnegative and strictly increasing".into(),
                    ));
                }
                if !(v >= 0.0) {
                    return Err(Error::InvalidArgument(
                        "tabulated values must be nonnegative".into(),
                    ));
                }
                prev = r;
            }
            let last = samples.last().unwrap();
            if (last.0 - support_radius).abs() > 1e-12 * support_radius || last.1 != 0.0 {
                return Err(Error::InvalidArgument(
                    "tabulated profile must end at (b, 0)".into(),
                ));
            }
        }
        let p = Self {
            profile,
            support_radius,
            amplitude,
        };
        // reject identically-zero profiles
        let (integral, max) = p.norms_unchecked();
        if !(integral > 0.0 && max > 0.0) {
            return Err(Error::InvalidArgument(
                "potential is identically zero".into(),
            ));
        }
        Ok(p)
    }

    /// v(r); total on r >= 0, exactly zero beyond the support radius.
    pub fn evaluate(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        let b = self.support_radius;
        if r >= b {
            return 0.0;
        }
        match &self.profile {
            Profile::Indicator => self.amplitude,
            Profile::SmoothBump => {
                let s = r / b;
                self.amplitude * (1.0 - 1.0 / (1.0 - s * s)).exp()
            }
            Profile::Tabulated { samples } => {
                if r <= samples[0].0 {
                    return samples[0].1;
                }
                let idx = samples.partition_point(|&(rs, _)| rs <= r);
                if idx >= samples.len() {
                    return 0.0;
                }
                let (r0, v0) = samples[idx - 1];
                let (r1, v1) = samples[idx];
                v0 + (v1 - v0) * (r - r0) / (r1 - r0)
            }
        }
    }

    /// (∫_{R^3} v dx, max v). The integral is 4π ∫_0^b v(r) r^2 dr.
    pub fn norms(&self) -> (f64, f64) {
        self.norms_unchecked()
    }

    fn norms_unchecked(&self) -> (f64, f64) {
        let b = self.support_radius;
        let (nodes, weights) = gauss_legendre_on(200, 0.0, b);
        let mut integral = 0.0;
        let mut max = 0.0_f64;
        for (&r, &w) in nodes.iter().zip(&weights) {
            let v = self.evaluate(r);
            integral += w * v * r * r;
            max = max.max(v);
        }
        // tabulated and indicator profiles can peak at r = 0
        max = max.max(self.evaluate(0.0));
        (4.0 * std::f64::consts::PI * integral, max)
    }

    /// Mean of v over [lo, hi]; exact for the indicator and tabulated kinds,
    /// high-order quadrature for the smooth bump. Used by the PDE solver to
    /// keep second-order accuracy across the support edge.
    pub fn cell_average(&self, lo: f64, hi: f64) -> f64 {
        debug_assert!(hi > lo);
        let b = self.support_radius;
        let lo = lo.max(0.0);
        if lo >= b {
            return 0.0;
        }
        let width = hi - lo;
        let hi_in = hi.min(b);
        match &self.profile {
            Profile::Indicator => self.amplitude * (hi_in - lo) / width,
            Profile::SmoothBump => {
                let (nodes, weights) = gauss_legendre_on(16, lo, hi_in);
                let sum: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&r, &w)| w * self.evaluate(r))
                    .sum();
                sum / width
            }
            Profile::Tabulated { samples } => {
                // exact integral of the piecewise-linear profile
                let mut acc = 0.0;
                let mut breaks: Vec<f64> = vec![lo];
                for &(r, _) in samples {
                    if r > lo && r < hi_in {
                        breaks.push(r);
                    }
                }
                breaks.push(hi_in);
                for pair in breaks.windows(2) {
                    let (a, c) = (pair[0], pair[1]);
                    acc += 0.5 * (self.evaluate(a) + self.evaluate(c)) * (c - a);
                }
                acc / width
            }
        }
    }
}
