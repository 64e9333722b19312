use std::io::Write;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(N, α)` observation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub n: usize,
    pub alpha: f64,
    pub value: f64,
    pub stderr: Option<f64>,
    pub count: usize,
}

impl DataPoint {
    pub fn new(n: usize, alpha: f64, value: f64) -> Self {
        Self {
            n,
            alpha,
            value,
            stderr: None,
            count: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseConfig {
    pub alpha_c_range: (f64, f64),
    pub nu_range: (f64, f64),
    pub grid: usize,
    /// Points outside this α interval are dropped. Defaults to the middle of
    /// `alpha_c_range` ± 0.4.
    pub window: Option<(f64, f64)>,
    /// Weight residuals by `1/stderr²` when every point carries a stderr.
    pub weighted: bool,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for CollapseConfig {
    fn default() -> Self {
        Self {
            alpha_c_range: (0.2, 1.5),
            nu_range: (0.5, 6.0),
            grid: 50,
            window: None,
            weighted: false,
            max_iter: 2000,
            tol: 1e-12,
        }
    }
}

impl CollapseConfig {
    pub fn resolved_window(&self) -> (f64, f64) {
        self.window.unwrap_or_else(|| {
            let guess = 0.5 * (self.alpha_c_range.0 + self.alpha_c_range.1);
            (guess - 0.4, guess + 0.4)
        })
    }
}

/// Result of `argmin_{α_c, ν} min_{A,B,C} mean (y − A − Bx − Cx²)²` with
/// `x = (α − α_c) N^{1/ν}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseFit {
    pub alpha_c: f64,
    pub nu: f64,
    pub coeffs: [f64; 3],
    pub mse: f64,
    pub var_alpha_c: f64,
    pub var_nu: f64,
    pub window: (f64, f64),
    pub points_used: usize,
}

impl CollapseFit {
    pub fn sigma_alpha_c(&self) -> f64 {
        self.var_alpha_c.sqrt()
    }

    pub fn sigma_nu(&self) -> f64 {
        self.var_nu.sqrt()
    }
}

pub fn scaling_variable(alpha: f64, n: usize, alpha_c: f64, nu: f64) -> f64 {
    (alpha - alpha_c) * (n as f64).powf(1.0 / nu)
}

/// Weighted least squares for `(A, B, C)` at fixed `(α_c, ν)`; returns the
/// coefficients and the weighted mean squared residual.
pub fn inner_fit(points: &[DataPoint], alpha_c: f64, nu: f64, weighted: bool) -> Result<([f64; 3], f64)> {
    let mut ata = Matrix3::<f64>::zeros();
    let mut aty = Vector3::<f64>::zeros();
    let mut wsum = 0.0;
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let x = scaling_variable(p.alpha, p.n, alpha_c, nu);
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        let w = weight(p, weighted);
        let row = Vector3::new(1.0, x, x * x);
        ata += w * row * row.transpose();
        aty += w * p.value * row;
        wsum += w;
    }
    if points.len() < 3 || !(xmax - xmin > 1e-12 * (1.0 + xmax.abs())) {
        return Err(Error::DegenerateFit(
            "scaling variable takes fewer than three distinct values".into(),
        ));
    }
    let sol = ata
        .cholesky()
        .map(|c| c.solve(&aty))
        .or_else(|| ata.lu().solve(&aty))
        .ok_or_else(|| Error::DegenerateFit("singular normal equations".into()))?;
    let coeffs = [sol[0], sol[1], sol[2]];
    let mse = points
        .iter()
        .map(|p| {
            let x = scaling_variable(p.alpha, p.n, alpha_c, nu);
            let r = p.value - coeffs[0] - coeffs[1] * x - coeffs[2] * x * x;
            weight(p, weighted) * r * r
        })
        .sum::<f64>()
        / wsum;
    Ok((coeffs, mse))
}

fn weight(p: &DataPoint, weighted: bool) -> f64 {
    match (weighted, p.stderr) {
        (true, Some(s)) if s > 0.0 => 1.0 / (s * s),
        _ => 1.0,
    }
}

fn objective(points: &[DataPoint], x: [f64; 2], weighted: bool) -> f64 {
    if !(x[1] > 1e-3) {
        return f64::INFINITY;
    }
    inner_fit(points, x[0], x[1], weighted).map_or(f64::INFINITY, |(_, m)| m)
}

/// Downhill simplex in two dimensions.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, start: [f64; 2], step: [f64; 2], max_iter: usize, tol: f64) -> ([f64; 2], f64) {
    let mut s = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut v = s.map(&f);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        let spread = (v[2] - v[0]).abs();
        let size = (s[2][0] - s[0][0]).abs().max((s[2][1] - s[0][1]).abs());
        if spread <= tol * (v[0].abs() + tol) && size < 1e-9 {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let xr = lerp(c, s[2], -1.0);
        let fr = f(xr);
        if fr < v[0] {
            let xe = lerp(c, s[2], -2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let (xc, fc) = if fr < v[2] {
                let xc = lerp(c, xr, 0.5);
                (xc, f(xc))
            } else {
                let xc = lerp(c, s[2], 0.5);
                (xc, f(xc))
            };
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = lerp(s[0], s[i], 0.5);
                    v[i] = f(s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| v[i].total_cmp(&v[j])).unwrap();
    (s[best], v[best])
}

fn in_window(points: &[DataPoint], window: (f64, f64)) -> Vec<DataPoint> {
    points
        .iter()
        .filter(|p| p.alpha >= window.0 && p.alpha <= window.1)
        .copied()
        .collect()
}

fn check_points(points: &[DataPoint]) -> Result<()> {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least three system sizes, got {}",
            sizes.len()
        )));
    }
    if points.len() < 8 {
        return Err(Error::DegenerateFit(format!(
            "need at least eight points in the window, got {}",
            points.len()
        )));
    }
    Ok(())
}

/// Grid search then simplex refinement; no error bars.
fn point_estimate(points: &[DataPoint], cfg: &CollapseConfig) -> Result<([f64; 2], f64)> {
    let g = cfg.grid.max(2);
    let (a0, a1) = cfg.alpha_c_range;
    let (n0, n1) = cfg.nu_range;
    let da = (a1 - a0) / (g - 1) as f64;
    let dn = (n1 - n0) / (g - 1) as f64;
    let mut cells: Vec<([f64; 2], f64)> = (0..g * g)
        .into_par_iter()
        .map(|c| {
            let x = [a0 + da * (c / g) as f64, n0 + dn * (c % g) as f64];
            (x, objective(points, x, cfg.weighted))
        })
        .collect();
    cells.sort_by(|a, b| a.1.total_cmp(&b.1));
    if !cells[0].1.is_finite() {
        return Err(Error::DegenerateFit("objective is not finite anywhere on the grid".into()));
    }
    // refine from a few of the best cells and keep the overall best
    let best = cells
        .iter()
        .take(4)
        .map(|&(x, _)| nelder_mead(|p| objective(points, p, cfg.weighted), x, [da, dn], cfg.max_iter, cfg.tol))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    Ok(best)
}

/// Collapse fit with jackknife variances.
pub fn fit_collapse(points: &[DataPoint], cfg: &CollapseConfig) -> Result<CollapseFit> {
    let window = cfg.resolved_window();
    let used = in_window(points, window);
    check_points(&used)?;
    let (x, _) = point_estimate(&used, cfg)?;
    let (coeffs, mse) = inner_fit(&used, x[0], x[1], cfg.weighted)?;
    let (var_alpha_c, var_nu) = jackknife_from(&used, x, cfg)?;
    Ok(CollapseFit {
        alpha_c: x[0],
        nu: x[1],
        coeffs,
        mse,
        var_alpha_c,
        var_nu,
        window,
        points_used: used.len(),
    })
}

fn jackknife_from(points: &[DataPoint], center: [f64; 2], cfg: &CollapseConfig) -> Result<(f64, f64)> {
    let d = points.len();
    let step = [
        (cfg.alpha_c_range.1 - cfg.alpha_c_range.0) / (cfg.grid.max(2) - 1) as f64,
        (cfg.nu_range.1 - cfg.nu_range.0) / (cfg.grid.max(2) - 1) as f64,
    ];
    let estimates: Vec<Result<[f64; 2]>> = (0..d)
        .into_par_iter()
        .map(|i| {
            let rest: Vec<DataPoint> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| *p)
                .collect();
            let (x, v) = nelder_mead(|p| objective(&rest, p, cfg.weighted), center, step, cfg.max_iter, cfg.tol);
            if v.is_finite() {
                Ok(x)
            } else {
                Err(Error::JackknifeRefit {
                    index: i,
                    source: Box::new(Error::DegenerateFit("refit objective not finite".into())),
                })
            }
        })
        .collect();
    let estimates = estimates.into_iter().collect::<Result<Vec<_>>>()?;
    let df = d as f64;
    let mean = [0, 1].map(|k| estimates.iter().map(|e| e[k]).sum::<f64>() / df);
    let var = [0, 1].map(|k| (df - 1.0) / df * estimates.iter().map(|e| (mean[k] - e[k]).powi(2)).sum::<f64>());
    Ok((var[0], var[1]))
}

/// Leave-one-out variances of `(α_c, ν)`; each refit starts from the
/// full-data optimum.
pub fn jackknife_errors(points: &[DataPoint], cfg: &CollapseConfig) -> Result<(f64, f64)> {
    let used = in_window(points, cfg.resolved_window());
    if used.len() < 3 {
        return Err(Error::DegenerateFit("jackknife needs at least three points".into()));
    }
    let (x, _) = point_estimate(&used, cfg)?;
    jackknife_from(&used, x, cfg)
}

/// `(n, alpha, x, value)` rows of the collapsed data.
pub fn write_collapse_csv<W: Write>(w: W, points: &[DataPoint], fit: &CollapseFit) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["n", "alpha", "x", "value"])?;
    for p in points {
        let x = scaling_variable(p.alpha, p.n, fit.alpha_c, fit.nu);
        wr.write_record([p.n.to_string(), p.alpha.to_string(), x.to_string(), p.value.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}
