//! Exact maximisation of the three-variable block objective
//! `f(x, y1, y2)` over `x` in the feasible interval and `y1, y2 > 0`.
//!
//! The maximum is found by comparing closed-form and stationary-point
//! candidates. For fixed `x` the objective is strictly jointly concave in
//! `(y1, y2)` whenever `|c12 u| < 1`, so the diagonal pair has a unique
//! stationary point `Y(x)` reachable by alternating the scalar updates; the
//! remaining one-dimensional condition `f_x(x, Y(x)) = 0` is located by a
//! bracketing scan with bisection. An alternating exact-ascent pass (maximise
//! over `x` holding the diagonal pair, then over the pair holding `x`)
//! supplies an extra candidate, which keeps weakly coupled blocks (small
//! `|c12|`) robust. Candidates at `x = 0`, in `x > 0` and in `x < 0` are
//! pooled and the best objective wins, with ties broken toward smaller `|x|`.

use crate::error::{Error, Result};
use crate::objective::{block_objective_raw, BlockCoefficients};
use crate::scalar::{fl, Scalar};

/// Argmax of the block objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSolution<T> {
    pub x: T,
    pub y1: T,
    pub y2: T,
    pub f_value: T,
}

/// Sub-intervals used by the bracketing scan over the feasible interval.
const SCAN_SUBDIVISIONS: usize = 64;
/// Bisection stops once the bracket is this narrow.
const BISECT_WIDTH: f64 = 1e-12;
/// A stationary-point candidate must satisfy `|f_x|` below this.
const STATIONARITY_TOL: f64 = 1e-7;
/// Candidates whose objectives differ by less than this tie toward
/// smaller `|x|`.
const TIE_TOL: f64 = 1e-12;

/// Positive root of `y^2 + lin*y - c_n = 0` (the scalar diagonal update).
/// There is exactly one positive root whenever `c_n > 0`.
#[inline]
fn pos_root<T: Scalar>(lin: T, c_n: T) -> T {
    let s = (lin * lin + fl::<T>(4.0) * c_n).sqrt();
    if lin <= T::zero() {
        (s - lin) * fl::<T>(0.5)
    } else {
        fl::<T>(2.0) * c_n / (lin + s)
    }
}

/// Unique stationary diagonal pair for a fixed `x`, by alternating the scalar
/// closed-form updates. Converges geometrically with rate below
/// `(c12 * x)^2 < 1`.
fn stationary_ys<T: Scalar>(
    coef: &BlockCoefficients<T>,
    x: T,
    warm: Option<(T, T)>,
) -> Result<(T, T)> {
    let (mut y1, mut y2) = warm.unwrap_or((pos_root(coef.c1, coef.c_n), pos_root(coef.c2, coef.c_n)));
    let tol = T::epsilon() * fl::<T>(8.0);
    let mut drift = T::infinity();
    for _ in 0..2000 {
        let y1n = pos_root(coef.c1 + coef.c12 * x * y2, coef.c_n);
        let y2n = pos_root(coef.c2 + coef.c12 * x * y1n, coef.c_n);
        drift = ((y1n - y1).abs() / y1n.max(T::one()))
            .max((y2n - y2).abs() / y2n.max(T::one()));
        y1 = y1n;
        y2 = y2n;
        if drift <= tol {
            return Ok((y1, y2));
        }
    }
    if drift <= T::epsilon().sqrt() {
        Ok((y1, y2))
    } else {
        Err(Error::RootFinderDiverged { iterations: 2000 })
    }
}

/// `f_x` at `(x, Y(x))` for `x` strictly inside the sign region.
#[inline]
fn f_x_at<T: Scalar>(coef: &BlockCoefficients<T>, x: T, y1: T, y2: T) -> T {
    let two = fl::<T>(2.0);
    (two * coef.quad.a * x + coef.quad.b) / coef.quad.value(x)
        - two * coef.c12 * y1 * y2
        - two * coef.rho * x.signum()
}

/// Roots of `g a x^2 + (g b - 2a) x + (g c - b) = 0`, the stationarity
/// condition `2ax + b = g * (a x^2 + b x + c)` for the one-dimensional
/// `x`-step with slope `g`.
fn x_step_roots<T: Scalar>(coef: &BlockCoefficients<T>, g: T) -> Vec<T> {
    let (a, b, c) = (coef.quad.a, coef.quad.b, coef.quad.c);
    let two = fl::<T>(2.0);
    let qa = g * a;
    let qb = g * b - two * a;
    let qc = g * c - b;
    let mut roots = Vec::with_capacity(2);
    if qa.abs() <= T::epsilon() * (a.abs() + g.abs() * b.abs()).max(T::one()) {
        if qb != T::zero() {
            roots.push(-qc / qb);
        }
        return roots;
    }
    let disc = qb * qb - fl::<T>(4.0) * qa * qc;
    if disc < T::zero() {
        return roots;
    }
    // Numerically stable pair via the q-trick.
    let sq = disc.sqrt();
    let q = if qb >= T::zero() { -(qb + sq) * fl::<T>(0.5) } else { (sq - qb) * fl::<T>(0.5) };
    roots.push(q / qa);
    if q != T::zero() {
        roots.push(qc / q);
    }
    roots
}

struct Candidate<T> {
    x: T,
    y1: T,
    y2: T,
    f: T,
}

/// Search the open region `(xlo, xhi)` (a sign-definite part of the feasible
/// interval; all points strictly feasible) for stationary points.
fn region_candidates<T: Scalar>(
    coef: &BlockCoefficients<T>,
    xlo: T,
    xhi: T,
) -> Result<Vec<Candidate<T>>> {
    let width = xhi - xlo;
    let mut out: Vec<Candidate<T>> = Vec::new();
    if !(width > fl::<T>(4.0 * BISECT_WIDTH)) {
        return Ok(out);
    }
    let margin = width * fl::<T>(1e-9);
    let lo = xlo + margin;
    let hi = xhi - margin;
    let step = (hi - lo) / fl::<T>(SCAN_SUBDIVISIONS as f64);

    let push_candidate = |x: T, warm: Option<(T, T)>, out: &mut Vec<Candidate<T>>| -> Result<()> {
        let (y1, y2) = stationary_ys(coef, x, warm)?;
        let fx = f_x_at(coef, x, y1, y2);
        if fx.abs() <= fl::<T>(STATIONARITY_TOL) {
            let f = block_objective_raw(coef, x, y1, y2);
            if f.is_finite() {
                out.push(Candidate { x, y1, y2, f });
            }
        }
        Ok(())
    };

    // Bracketing scan of f_x(x, Y(x)), which is continuous on the region.
    let mut warm: Option<(T, T)> = None;
    let mut prev: Option<(T, T)> = None; // (x, f_x)
    for k in 0..=SCAN_SUBDIVISIONS {
        let x = if k == SCAN_SUBDIVISIONS { hi } else { lo + step * fl::<T>(k as f64) };
        let ys = stationary_ys(coef, x, warm)?;
        warm = Some(ys);
        let fx = f_x_at(coef, x, ys.0, ys.1);
        if fx == T::zero() {
            push_candidate(x, warm, &mut out)?;
        } else if let Some((xp, fxp)) = prev {
            if fxp * fx < T::zero() {
                // Bisect on the bracket.
                let (mut a, mut b) = (xp, x);
                let mut fa = fxp;
                let mut wys = ys;
                let mut iter = 0usize;
                while (b - a) > fl::<T>(BISECT_WIDTH) {
                    iter += 1;
                    if iter > 200 {
                        return Err(Error::RootFinderDiverged { iterations: 200 });
                    }
                    let m = (a + b) * fl::<T>(0.5);
                    wys = stationary_ys(coef, m, Some(wys))?;
                    let fm = f_x_at(coef, m, wys.0, wys.1);
                    if fm == T::zero() {
                        a = m;
                        b = m;
                        break;
                    }
                    if fa * fm < T::zero() {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                push_candidate((a + b) * fl::<T>(0.5), Some(wys), &mut out)?;
            }
        }
        prev = Some((x, fx));
    }

    // Alternating exact ascent: maximise over x with the diagonal pair fixed,
    // then re-solve the pair; supplies a candidate even when the scan's
    // resolution misses a weakly coupled root.
    let mut ys = (pos_root(coef.c1, coef.c_n), pos_root(coef.c2, coef.c_n));
    let mut x_cur: Option<T> = None;
    for _ in 0..300 {
        let sign = if xlo >= T::zero() { T::one() } else { -T::one() };
        let g = fl::<T>(2.0) * (coef.c12 * ys.0 * ys.1 + coef.rho * sign);
        let mut best: Option<(T, T)> = None; // (x, phi)
        for r in x_step_roots(coef, g) {
            if r > lo && r < hi {
                let phi = coef.quad.value(r).ln()
                    - fl::<T>(2.0) * (coef.c12 * ys.0 * ys.1 + coef.rho * sign) * r;
                if best.map_or(true, |(_, bp)| phi > bp) {
                    best = Some((r, phi));
                }
            }
        }
        let Some((xn, _)) = best else { x_cur = None; break };
        let moved = x_cur.map_or(T::infinity(), |xc: T| (xn - xc).abs());
        x_cur = Some(xn);
        ys = stationary_ys(coef, xn, Some(ys))?;
        if moved <= fl::<T>(1e-13) * xn.abs().max(T::one()) {
            break;
        }
    }
    if let Some(x) = x_cur {
        push_candidate(x, Some(ys), &mut out)?;
    }

    // Deduplicate near-identical stationary points.
    out.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap());
    out.dedup_by(|p, q| {
        if (p.x - q.x).abs() < fl::<T>(1e-9) {
            if p.f > q.f {
                q.x = p.x;
                q.y1 = p.y1;
                q.y2 = p.y2;
                q.f = p.f;
            }
            true
        } else {
            false
        }
    });
    Ok(out)
}

/// Closed-form solution on the `x = 0` face. Errors when 0 is infeasible
/// (`c <= 0`).
pub fn solve_x_zero<T: Scalar>(coef: &BlockCoefficients<T>) -> Result<BlockSolution<T>> {
    check_coef(coef)?;
    if !(coef.quad.c > T::zero()) || !(coef.quad.l < T::zero() && coef.quad.u > T::zero()) {
        return Err(Error::EmptyFeasibleInterval);
    }
    let y1 = pos_root(coef.c1, coef.c_n);
    let y2 = pos_root(coef.c2, coef.c_n);
    let f_value = block_objective_raw(coef, T::zero(), y1, y2);
    Ok(BlockSolution { x: T::zero(), y1, y2, f_value })
}

/// Best stationary point with `x` in the positive part of the feasible
/// interval, or `None` when the region is empty or contains no stationary
/// point.
pub fn solve_x_positive<T: Scalar>(coef: &BlockCoefficients<T>) -> Result<Option<BlockSolution<T>>> {
    check_coef(coef)?;
    let xlo = coef.quad.l.max(T::zero());
    let xhi = coef.quad.u;
    if !(xhi > xlo) {
        return Ok(None);
    }
    let cands = region_candidates(coef, xlo, xhi)?;
    Ok(pick_best(cands.into_iter().map(|c| BlockSolution {
        x: c.x,
        y1: c.y1,
        y2: c.y2,
        f_value: c.f,
    })))
}

/// Mirror of [`solve_x_positive`] for the negative part of the interval,
/// obtained by solving the reflected problem (`x -> -x`, `c12 -> -c12`,
/// `b -> -b`) and flipping the sign of the result.
pub fn solve_x_negative<T: Scalar>(coef: &BlockCoefficients<T>) -> Result<Option<BlockSolution<T>>> {
    let reflected = reflect(coef);
    Ok(solve_x_positive(&reflected)?.map(|s| BlockSolution { x: -s.x, ..s }))
}

fn reflect<T: Scalar>(coef: &BlockCoefficients<T>) -> BlockCoefficients<T> {
    let mut r = *coef;
    r.c12 = -coef.c12;
    r.quad.b = -coef.quad.b;
    r.quad.l = -coef.quad.u;
    r.quad.u = -coef.quad.l;
    r
}

/// Fully separable case `c12 = 0`: the diagonal pair solves in closed form
/// and `x` maximises `ln(a x^2 + b x + c) - 2 rho |x|` on the interval, whose
/// stationary points are roots of one quadratic per sign of `x`.
pub fn solve_x_separable<T: Scalar>(coef: &BlockCoefficients<T>) -> Result<BlockSolution<T>> {
    check_coef(coef)?;
    if coef.c12 != T::zero() {
        return Err(Error::invalid("solve_x_separable requires c12 = 0"));
    }
    let y1 = pos_root(coef.c1, coef.c_n);
    let y2 = pos_root(coef.c2, coef.c_n);
    let (l, u) = (coef.quad.l, coef.quad.u);
    let mut cands: Vec<BlockSolution<T>> = Vec::new();
    let push = |x: T, cands: &mut Vec<BlockSolution<T>>| {
        let f_value = block_objective_raw(coef, x, y1, y2);
        if f_value.is_finite() {
            cands.push(BlockSolution { x, y1, y2, f_value });
        }
    };
    if coef.quad.c > T::zero() && l < T::zero() && u > T::zero() {
        push(T::zero(), &mut cands);
    }
    let two = fl::<T>(2.0);
    for sign in [T::one(), -T::one()] {
        for r in x_step_roots(coef, two * coef.rho * sign) {
            let in_sign = if sign > T::zero() { r > T::zero() } else { r < T::zero() };
            if in_sign && r > l && r < u {
                push(r, &mut cands);
            }
        }
    }
    pick_best(cands.into_iter()).ok_or(Error::NoFeasibleCandidate)
}

/// Global block maximiser: pools the `x = 0`, `x > 0` and `x < 0` candidates
/// (or the separable closed form when `c12 = 0`) and returns the best.
pub fn solve_block<T: Scalar>(coef: &BlockCoefficients<T>) -> Result<BlockSolution<T>> {
    check_coef(coef)?;
    if coef.c12 == T::zero() {
        return solve_x_separable(coef);
    }
    let mut cands: Vec<BlockSolution<T>> = Vec::new();
    if coef.quad.c > T::zero() && coef.quad.l < T::zero() && coef.quad.u > T::zero() {
        cands.push(solve_x_zero(coef)?);
    }
    if let Some(s) = solve_x_positive(coef)? {
        cands.push(s);
    }
    if let Some(s) = solve_x_negative(coef)? {
        cands.push(s);
    }
    pick_best(cands.into_iter()).ok_or(Error::NoFeasibleCandidate)
}

fn check_coef<T: Scalar>(coef: &BlockCoefficients<T>) -> Result<()> {
    if !(coef.c_n > T::zero()) {
        return Err(Error::invalid(format!(
            "block solver needs 1 - 4/n > 0; sample size {} is too small",
            coef.n
        )));
    }
    if coef.rho < T::zero() {
        return Err(Error::invalid("rho must be nonnegative"));
    }
    if !(coef.quad.l < coef.quad.u) {
        return Err(Error::EmptyFeasibleInterval);
    }
    Ok(())
}

fn pick_best<T: Scalar>(cands: impl Iterator<Item = BlockSolution<T>>) -> Option<BlockSolution<T>> {
    let cands: Vec<_> = cands.filter(|c| c.f_value.is_finite()).collect();
    let best_f = cands
        .iter()
        .map(|c| c.f_value)
        .fold(T::neg_infinity(), |m, v| m.max(v));
    cands
        .into_iter()
        .filter(|c| c.f_value >= best_f - fl::<T>(TIE_TOL))
        .min_by(|p, q| {
            (p.x.abs(), p.x < T::zero())
                .partial_cmp(&(q.x.abs(), q.x < T::zero()))
                .unwrap()
        })
}
