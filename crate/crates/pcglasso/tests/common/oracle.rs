//! Brute-force maximizers validating the solvers at small scale. Test-only;
//! deliberately independent of the solver implementations they check: they
//! touch nothing but the objective evaluations.

use pcglasso::cov::CovMatrix;
use pcglasso::decomp::PrecisionDecomposition;
use pcglasso::mat::SymMat;
use pcglasso::objective::{block_objective, BlockCoefficients};

/// Search box and step for the block grid oracle.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    /// Target step per axis; axis point counts are kept within [100, 256]
    /// regardless, the polish supplying the final precision.
    pub resolution: f64,
    pub y1_bounds: (f64, f64),
    pub y2_bounds: (f64, f64),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { resolution: 0.02, y1_bounds: (0.02, 8.0), y2_bounds: (0.02, 8.0) }
    }
}

impl GridSpec {
    /// Bounds derived from the coefficients alone: any stationary diagonal
    /// root satisfies `y <= (max(|c1|,|c2|) + sqrt(c_n)) / (1 - |c12| xmax)`
    /// and `y >= c_n / (2 (max(|c1|,|c2|) + |c12| xmax ymax + sqrt(c_n)))`.
    pub fn for_block(coef: &BlockCoefficients<f64>) -> Self {
        let xm = coef.quad.l.abs().max(coef.quad.u.abs()).min(1.0);
        let kappa = (coef.c12.abs() * xm).min(0.995);
        let m = coef.c1.abs().max(coef.c2.abs());
        let root_cn = coef.c_n.sqrt();
        let hi = (((m + root_cn) / (1.0 - kappa)) * 1.3).clamp(3.0, 60.0);
        let lo = (coef.c_n / (2.0 * (m + kappa * hi + root_cn)) * 0.7).clamp(1e-4, 0.5);
        GridSpec { resolution: 0.02, y1_bounds: (lo, hi), y2_bounds: (lo, hi) }
    }
}

fn linear_axis(lo: f64, hi: f64, resolution: f64) -> Vec<f64> {
    let count = (((hi - lo) / resolution).ceil() as usize).clamp(100, 256);
    (0..=count).map(|k| lo + (hi - lo) * k as f64 / count as f64).collect()
}

fn log_axis(lo: f64, hi: f64, resolution: f64) -> Vec<f64> {
    let count = (((hi - lo) / resolution).ceil() as usize).clamp(100, 256);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..=count).map(|k| (llo + (lhi - llo) * k as f64 / count as f64).exp()).collect()
}

/// Insert 0.0 into a sorted axis when the range straddles it (the penalty has
/// a kink there, so the exact point matters).
fn with_zero(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    if lo < 0.0 && hi > 0.0 {
        pts.push(0.0);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    pts
}

/// Exhaustive grid search over (x, y1, y2) followed by a local coordinate
/// polish with shrinking sampled line searches (multiplicative along the two
/// positive axes).
pub fn grid_maximize_block(coef: &BlockCoefficients<f64>, spec: &GridSpec) -> (f64, f64, f64, f64) {
    let (l, u) = (coef.quad.l, coef.quad.u);
    let xs = with_zero(linear_axis(l, u, spec.resolution), l, u);
    let y1s = log_axis(spec.y1_bounds.0, spec.y1_bounds.1, spec.resolution);
    let y2s = log_axis(spec.y2_bounds.0, spec.y2_bounds.1, spec.resolution);

    let eval = |x: f64, y1: f64, y2: f64| -> f64 {
        block_objective(coef, x, y1, y2).unwrap_or(f64::NEG_INFINITY)
    };

    let mut best = (0.0, 1.0, 1.0, f64::NEG_INFINITY);
    for &x in &xs {
        for &y1 in &y1s {
            for &y2 in &y2s {
                let f = eval(x, y1, y2);
                if f > best.3 {
                    best = (x, y1, y2, f);
                }
            }
        }
    }

    // Local coordinate polish: sampled line search per axis over 50 shrinking
    // rounds; x moves additively within the feasible interval, the y's move
    // multiplicatively.
    let mut point = [best.0, best.1, best.2];
    let mut fbest = best.3;
    let mut x_window = (u - l) / (xs.len() as f64 - 1.0) * 2.0;
    let mut y_window = 0.3f64; // log-scale half-width
    for _ in 0..50 {
        // x axis.
        let mut samples: Vec<f64> = (0..33)
            .map(|k| (point[0] - x_window + 2.0 * x_window * k as f64 / 32.0).clamp(l, u))
            .collect();
        if point[0].abs() <= x_window {
            samples.push(0.0);
        }
        for v in samples {
            let f = eval(v, point[1], point[2]);
            if f > fbest {
                fbest = f;
                point[0] = v;
            }
        }
        x_window *= 0.6;
        // y axes.
        for a in 1..3 {
            let center = point[a];
            for k in 0..33 {
                let v = center * (-y_window + 2.0 * y_window * k as f64 / 32.0).exp();
                let cand = if a == 1 { (point[0], v, point[2]) } else { (point[0], point[1], v) };
                let f = eval(cand.0, cand.1, cand.2);
                if f > fbest {
                    fbest = f;
                    point = [cand.0, cand.1, cand.2];
                }
            }
        }
        y_window *= 0.6;
    }
    (point[0], point[1], point[2], fbest)
}

/// Penalised objective evaluated directly from free parameters, bypassing the
/// library's state types: x are the strict-upper-triangle partial
/// correlations (row-major), t the diagonal precisions.
pub fn objective_direct(s: &CovMatrix<f64>, x: &[f64], t: &[f64], rho: f64) -> f64 {
    let p = t.len();
    let c_n = 1.0 - 4.0 / s.n() as f64;
    let det = match p {
        2 => 1.0 - x[0] * x[0],
        3 => 1.0 + 2.0 * x[0] * x[1] * x[2] - x[0] * x[0] - x[1] * x[1] - x[2] * x[2],
        _ => panic!("direct objective only supports p in {{2, 3}}"),
    };
    // Positive definiteness of a unit-diagonal matrix: leading minors.
    if det <= 0.0 || 1.0 - x[0] * x[0] <= 0.0 || t.iter().any(|&v| v <= 0.0) {
        return f64::NEG_INFINITY;
    }
    let mut idx = 0usize;
    let mut trace = 0.0;
    let mut penalty = 0.0;
    for i in 0..p {
        trace += s.get(i, i) * t[i];
        for j in (i + 1)..p {
            trace += 2.0 * s.get(i, j) * x[idx] * (t[i] * t[j]).sqrt();
            penalty += x[idx].abs();
            idx += 1;
        }
    }
    det.ln() + c_n * t.iter().map(|v| v.ln()).sum::<f64>() - trace - 2.0 * rho * penalty
}

/// Nested grid + multi-start coordinate polish over all free parameters of
/// the p = 2 or p = 3 problem. Returns the best (x, t, objective).
pub fn dense_maximize(
    s: &CovMatrix<f64>,
    rho: f64,
) -> (Vec<f64>, Vec<f64>, f64) {
    let p = s.dim();
    assert!(p == 2 || p == 3, "dense oracle supports p in {{2, 3}}");
    let nx = p * (p - 1) / 2;
    let dims = nx + p;

    // Bounds: partial correlations in (-0.99, 0.99), precisions in [0.05, 6]
    // (log-spaced); instances are standardised so optima sit well inside.
    let x_b = (-0.99f64, 0.99f64);
    let t_b = (0.05f64, 6.0f64);

    let eval = |v: &[f64]| -> f64 { objective_direct(s, &v[..nx], &v[nx..], rho) };

    let level0 = if p == 2 { 41 } else { 13 };
    let deeper = if p == 2 { 21 } else { 7 };

    let axis_points = |lo: f64, hi: f64, count: usize, log: bool| -> Vec<f64> {
        (0..count)
            .map(|k| {
                let tfrac = k as f64 / (count - 1) as f64;
                if log {
                    (lo.ln() + (hi.ln() - lo.ln()) * tfrac).exp()
                } else {
                    lo + (hi - lo) * tfrac
                }
            })
            .collect()
    };

    // Level-0 exhaustive scan keeping the top K cells.
    let mut keep: Vec<(f64, Vec<f64>)> = Vec::new(); // (f, point)
    let top_k = 10usize;
    {
        let axes: Vec<Vec<f64>> = (0..dims)
            .map(|d| {
                if d < nx {
                    let mut pts = axis_points(x_b.0, x_b.1, level0, false);
                    pts.push(0.0);
                    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    pts
                } else {
                    axis_points(t_b.0, t_b.1, level0, true)
                }
            })
            .collect();
        let mut point = vec![0usize; dims];
        let mut done = false;
        while !done {
            let v: Vec<f64> = point.iter().enumerate().map(|(d, &k)| axes[d][k]).collect();
            let f = eval(&v);
            if f.is_finite() {
                if keep.len() < top_k {
                    keep.push((f, v));
                    keep.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                } else if f > keep[top_k - 1].0 {
                    keep[top_k - 1] = (f, v);
                    keep.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                }
            }
            // Odometer increment.
            done = true;
            for d in 0..dims {
                point[d] += 1;
                if point[d] < axes[d].len() {
                    done = false;
                    break;
                }
                point[d] = 0;
            }
        }
    }

    // Nested refinement around each kept point.
    let mut half = vec![0.0f64; dims];
    for (d, h) in half.iter_mut().enumerate() {
        *h = if d < nx {
            (x_b.1 - x_b.0) / (level0 - 1) as f64 * 1.2
        } else {
            0.6 // generous in log-space terms at first refinement
        };
    }
    for _level in 0..6 {
        let mut next: Vec<(f64, Vec<f64>)> = keep.clone();
        for (_, center) in &keep {
            let axes: Vec<Vec<f64>> = (0..dims)
                .map(|d| {
                    let (lo, hi) = if d < nx {
                        ((center[d] - half[d]).max(x_b.0), (center[d] + half[d]).min(x_b.1))
                    } else {
                        ((center[d] - half[d]).max(t_b.0 * 0.5), (center[d] + half[d]).min(t_b.1 * 1.5))
                    };
                    let mut pts = axis_points(lo, hi, deeper, false);
                    if d < nx && lo < 0.0 && hi > 0.0 {
                        pts.push(0.0);
                    }
                    pts
                })
                .collect();
            let mut point = vec![0usize; dims];
            let mut done = false;
            while !done {
                let v: Vec<f64> = point.iter().enumerate().map(|(d, &k)| axes[d][k]).collect();
                let f = eval(&v);
                if f.is_finite() && f > next.last().map_or(f64::NEG_INFINITY, |t| t.0) {
                    if next.len() >= top_k {
                        next.pop();
                    }
                    next.push((f, v));
                    next.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                }
                done = true;
                for d in 0..dims {
                    point[d] += 1;
                    if point[d] < axes[d].len() {
                        done = false;
                        break;
                    }
                    point[d] = 0;
                }
            }
        }
        keep = next;
        keep.truncate(top_k);
        for (d, h) in half.iter_mut().enumerate() {
            *h *= if d < nx { 0.35 } else { 0.4 };
        }
    }

    // Multi-start coordinate polish from every kept point.
    let mut best_f = f64::NEG_INFINITY;
    let mut best_v = keep[0].1.clone();
    for (_, start) in &keep {
        let mut v = start.clone();
        let mut f = eval(&v);
        let mut w = vec![0.05f64; dims];
        for _ in 0..100 {
            for d in 0..dims {
                let center = v[d];
                let mut samples: Vec<f64> = (0..25)
                    .map(|k| center - w[d] + 2.0 * w[d] * k as f64 / 24.0)
                    .collect();
                if d < nx && center.abs() <= w[d] {
                    samples.push(0.0);
                }
                for cand in samples {
                    let cand = if d < nx { cand.clamp(-0.999, 0.999) } else { cand.max(1e-4) };
                    let old = v[d];
                    v[d] = cand;
                    let fc = eval(&v);
                    if fc > f {
                        f = fc;
                    } else {
                        v[d] = old;
                    }
                }
                w[d] *= 0.65;
            }
        }
        if f > best_f {
            best_f = f;
            best_v = v;
        }
    }
    (best_v[..nx].to_vec(), best_v[nx..].to_vec(), best_f)
}

/// Eq.-5 objective of a library estimate, evaluated through the direct
/// parametrisation so the comparison shares no code with the library path.
pub fn objective_of_estimate(
    s: &CovMatrix<f64>,
    est: &PrecisionDecomposition<f64>,
    rho: f64,
) -> f64 {
    let p = est.dim();
    let mut x = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in (i + 1)..p {
            x.push(est.delta().get(i, j));
        }
    }
    objective_direct(s, &x, est.theta(), rho)
}

/// Random feasible point in the block domain (for dominance spot checks).
pub fn random_feasible_block_point(
    coef: &BlockCoefficients<f64>,
    rng: &mut super::TestRng,
) -> (f64, f64, f64) {
    loop {
        let x = rng.range(coef.quad.l, coef.quad.u);
        if coef.quad.value(x) > 0.0 {
            return (x, rng.range(0.05, 4.0), rng.range(0.05, 4.0));
        }
    }
}

/// Convenience: a decomposition's delta as a plain matrix (upper triangle).
pub fn delta_entries(est: &PrecisionDecomposition<f64>) -> Vec<f64> {
    let p = est.dim();
    let mut out = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            out.push(est.delta().get(i, j));
        }
    }
    out
}

/// Build a CovMatrix from rows (test shorthand).
pub fn cov_from(rows: &[Vec<f64>], n: usize) -> CovMatrix<f64> {
    CovMatrix::new(SymMat::try_from_rows(rows, 1e-10).unwrap(), n).unwrap()
}
