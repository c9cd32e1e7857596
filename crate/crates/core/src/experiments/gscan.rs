// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{GKSLKernel, Part};
use crate::propagate::{solve_nonlocal, weak_coupling_localize, TimeGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GScanPoint {
    pub g: f64,
    /// `sup_t ‖Λ^{nl}_t − Λ^{weak}_t‖_F`; absent if a solve failed.
    pub distance: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GScanResult {
    pub grid: TimeGrid,
    pub points: Vec<GScanPoint>,
    /// Least-squares slope of `ln distance` against `ln g`.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// RMS residual of the fit, in natural-log units.
    pub residual: Option<f64>,
    /// Distances nondecreasing in `g`.
    pub monotone: bool,
    pub warnings: Vec<String>,
}

/// Ordinary least squares `y ≈ a + b·x`; returns `(b, a, rms residual)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rms = (x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum::<f64>() / nf).sqrt();
    Some((b, a, rms))
}

/// Distance between the memory solution and its weak-coupling localization
/// for every `g`, with a log–log slope fit over the positive points.
pub fn g_scan(kernel: &GKSLKernel, grid: &TimeGrid, g_list: &[f64]) -> Result<GScanResult> {
    if g_list.is_empty() {
        return Err(Error::InvalidArgument("g_list is empty".into()));
    }
    if let Some(g) = g_list.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
        return Err(Error::InvalidArgument(format!("invalid coupling {g}")));
    }
    let mut sorted = g_list.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("g values must be distinct".into()));
    }
    let points: Vec<GScanPoint> = sorted
        .par_iter()
        .map(|&g| {
            let split = kernel.with_coupling(g).split();
            let run = || -> Result<f64> {
                let nl = solve_nonlocal(&split, grid, Part::Full)?;
                let weak = weak_coupling_localize(&split, grid)?;
                Ok(nl.sup_distance(&weak))
            };
            match run() {
                Ok(d) => GScanPoint {
                    g,
                    distance: Some(d),
                    error: None,
                },
                Err(e) => GScanPoint {
                    g,
                    distance: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let mut warnings = Vec::new();
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.distance.map(|d| (p.g, d)))
        .filter(|&(g, d)| g > 0.0 && d > 0.0)
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = usable.iter().map(|&(g, d)| (g.ln(), d.ln())).unzip();
    let fit = fit_line(&x, &y);
    if usable.len() < 4 {
        warnings.push(format!("fit uses {} points; at least 4 expected", usable.len()));
    }
    if let (Some(lo), Some(hi)) = (usable.first(), usable.last()) {
        if hi.0 / lo.0 < 10.0 {
            warnings.push("fit window spans less than one decade in g".into());
        }
    }
    let distances: Vec<f64> = points.iter().filter_map(|p| p.distance).collect();
    let monotone = distances.windows(2).all(|w| w[1] >= w[0]);
    if !monotone {
        warnings.push("distances are not monotone in g".into());
    }
    for p in &points {
        if let Some(e) = &p.error {
            warnings.push(format!("g = {}: {e}", p.g));
        }
    }
    Ok(GScanResult {
        grid: *grid,
        points,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        residual: fit.map(|f| f.2),
        monotone,
        warnings,
    })
}

impl GScanResult {
    /// `g,distance` rows followed by a `slope` footer record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,distance\n");
        for p in &self.points {
            let d = p.distance.map(|d| d.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{}\n", p.g, d));
        }
        let s = self.slope.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!("slope,{s}\n"));
        out
    }
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::kernel_corpus;

    #[test]
    fn exact_power_law_fit() {
        let x: Vec<f64> = [0.1f64, 0.2, 0.4, 0.8].iter().map(|g| g.ln()).collect();
        let y: Vec<f64> = [0.1f64, 0.2, 0.4, 0.8].iter().map(|g| (2.0 * g.powi(3)).ln()).collect();
        let (b, a, r) = fit_line(&x, &y).unwrap();
        assert!((b - 3.0).abs() < 1e-12);
        assert!((a - 2f64.ln()).abs() < 1e-12);
        assert!(r < 1e-12);
    }

    #[test]
    fn zero_coupling_gives_zero_distance() {
        let k = &kernel_corpus(1, 1)[0];
        let r = g_scan(k, &TimeGrid::new(1.0, 20).unwrap(), &[0.0]).unwrap();
        assert_eq!(r.points[0].distance, Some(0.0));
        assert!(r.slope.is_none());
        assert!(g_scan(k, &TimeGrid::new(1.0, 20).unwrap(), &[]).is_err());
    }

    #[test]
    fn points_sorted_and_csv_has_footer() {
        let k = &kernel_corpus(2, 1)[0];
        let r = g_scan(k, &TimeGrid::new(1.0, 40).unwrap(), &[0.4, 0.1, 0.2]).unwrap();
        let gs: Vec<f64> = r.points.iter().map(|p| p.g).collect();
        assert_eq!(gs, vec![0.1, 0.2, 0.4]);
        assert!(r.to_csv().lines().last().unwrap().starts_with("slope,"));
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn log_spacing_endpoints() {
        let v = log_spaced(0.05, 0.4, 6);
        assert!((v[0] - 0.05).abs() < 1e-15 && (v[5] - 0.4).abs() < 1e-14);
    }
}
