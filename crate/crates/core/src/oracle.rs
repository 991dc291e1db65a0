//! Reference computations that share no code with the main pipelines:
//! direct quadrature, closed-form overlaps, bisection and brute-force
//! enumeration. Used by the acceptance suite and the `check` subcommand.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Length of the semicircle of radius `l/2` above `z = eps` in the metric
/// `R^2 (dw^2 + dz^2) / z^2`, integrating the speed `R / sin(theta)`.
pub fn geodesic_arclength(l: f64, eps: f64, r_ads: f64) -> f64 {
    let a = l / 2.0;
    let theta0 = (eps / a).asin();
    let speed = |theta: f64| r_ads * a / (a * theta.sin());
    adaptive_simpson(&speed, theta0, PI - theta0, 1e-10)
}

/// Area of `{z >= eps, w^2 + z^2 <= a^2}` in `dw dz / z^2`, integrating
/// numerically in both directions.
pub fn wedge_area_quadrature(l: f64, eps: f64) -> f64 {
    let a = l / 2.0;
    if a <= eps {
        return 0.0;
    }
    let half = (a * a - eps * eps).sqrt();
    let column = |w: f64| {
        let top = (a * a - w * w).max(eps * eps).sqrt();
        if top <= eps {
            return 0.0;
        }
        adaptive_simpson(&|z: f64| 1.0 / (z * z), eps, top, 1e-11)
    };
    2.0 * adaptive_simpson(&column, 0.0, half, 1e-9)
}

/// `<psi_1 | psi_2>` for two raw Gaussian packets of width `eps_q`, in
/// closed form.
pub fn gaussian_overlap(eps_q: f64, (q1, p1): (f64, f64), (q2, p2): (f64, f64)) -> Complex64 {
    let dq = q2 - q1;
    let dp = p2 - p1;
    let mean = 0.5 * (q1 + q2);
    let magnitude = (-PI * dq * dq / (2.0 * eps_q * eps_q)).exp()
        * (-dp * dp * eps_q * eps_q / (8.0 * PI)).exp();
    Complex64::from_polar(magnitude, dp * mean)
}

/// One site: find `lambda` with `sum p e^{-lambda p} / sum e^{-lambda p} = mean`
/// by bisection. Returns `lambda` and the normalized weights.
pub fn single_site_dual(momenta: &[f64], mean: f64) -> Option<(f64, Vec<f64>)> {
    let lo_p = momenta.iter().copied().fold(f64::INFINITY, f64::min);
    let hi_p = momenta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(mean > lo_p && mean < hi_p) {
        return None;
    }
    let weights = |lambda: f64| {
        let e: Vec<f64> = momenta.iter().map(|p| -lambda * p).collect();
        let top = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = e.iter().map(|x| (x - top).exp()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect::<Vec<_>>()
    };
    let average = |lambda: f64| -> f64 {
        weights(lambda).iter().zip(momenta).map(|(w, p)| w * p).sum()
    };
    // The mean decreases in lambda.
    let (mut lo, mut hi) = (-1.0, 1.0);
    while average(lo) < mean {
        lo *= 2.0;
    }
    while average(hi) > mean {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if average(mid) > mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    Some((lambda, weights(lambda)))
}

/// `ln(N! / prod n_i!)` with exact integer factorials (`N <= 20`).
pub fn exact_log_multinomial(counts: &[u32]) -> f64 {
    let fact = |n: u32| (1..=n as u64).product::<u64>();
    let total: u32 = counts.iter().sum();
    let denominator: u64 = counts.iter().map(|&c| fact(c)).product();
    ((fact(total) / denominator) as f64).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    /// Every integer occupancy meeting the constraints, site-major.
    pub feasible: Vec<Vec<u32>>,
    pub best_log_w: f64,
    /// Indices into `feasible` attaining `best_log_w`.
    pub argmax: Vec<usize>,
}

/// Enumerates integer occupancies of `n_x` sites times `momenta.len()`
/// cells with total `n_total` and per-site momentum `site_momentum[x]`.
pub fn enumerate_occupancies(
    n_x: usize,
    momenta: &[i64],
    n_total: u32,
    site_momentum: &[i64],
) -> Enumeration {
    let cells = n_x * momenta.len();
    let mut feasible = Vec::new();
    let mut current = vec![0u32; cells];
    fn fill(
        idx: usize,
        left: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        check: &dyn Fn(&[u32]) -> bool,
    ) {
        if idx == current.len() - 1 {
            current[idx] = left;
            if check(current) {
                out.push(current.clone());
            }
            return;
        }
        for v in 0..=left {
            current[idx] = v;
            fill(idx + 1, left - v, current, out, check);
        }
    }
    let n_p = momenta.len();
    let check = |occ: &[u32]| {
        (0..n_x).all(|x| {
            let p: i64 = (0..n_p).map(|j| occ[x * n_p + j] as i64 * momenta[j]).sum();
            p == site_momentum[x]
        })
    };
    fill(0, n_total, &mut current, &mut feasible, &check);
    let scores: Vec<f64> = feasible.iter().map(|o| exact_log_multinomial(o)).collect();
    let best_log_w = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax = scores
        .iter()
        .enumerate()
        .filter(|(_, s)| (*s - best_log_w).abs() < 1e-12)
        .map(|(i, _)| i)
        .collect();
    Enumeration {
        feasible,
        best_log_w,
        argmax,
    }
}

/// The feasible integer occupancy closest (Euclidean) to a continuous one.
pub fn nearest_feasible(enumeration: &Enumeration, continuous: &[f64]) -> Option<usize> {
    enumeration
        .feasible
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let d: f64 = o
                .iter()
                .zip(continuous)
                .map(|(&a, b)| (a as f64 - b).powi(2))
                .sum();
            (i, d)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Gibbs entropy of levels `(0, e)` at inverse temperature `beta`.
pub fn two_level_entropy(beta: f64, e: f64) -> f64 {
    let x = (-beta * e).exp();
    beta * e * x / (1.0 + x) + (1.0 + x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_polynomials_and_exp() {
        let v = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(&f64::exp, 0.0, 1.0, 1e-12);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn overlap_is_unit_on_diagonal() {
        let z = gaussian_overlap(1.3, (0.4, 2.0), (0.4, 2.0));
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let a = gaussian_overlap(1.0, (0.0, 0.0), (1.0, 3.0));
        let b = gaussian_overlap(1.0, (1.0, 3.0), (0.0, 0.0));
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn bisection_recovers_mean() {
        let (lambda, w) = single_site_dual(&[-1.0, 0.0, 1.0], 0.3).unwrap();
        let mean: f64 = w.iter().zip([-1.0, 0.0, 1.0]).map(|(a, p)| a * p).sum();
        assert!((mean - 0.3).abs() < 1e-12);
        assert!(lambda < 0.0);
        assert!(single_site_dual(&[-1.0, 1.0], 1.0).is_none());
    }

    #[test]
    fn enumeration_counts() {
        assert!((exact_log_multinomial(&[3, 1]) - 4f64.ln()).abs() < 1e-15);
        let e = enumerate_occupancies(1, &[-1, 1], 4, &[0]);
        assert_eq!(e.feasible, vec![vec![2, 2]]);
        let e = enumerate_occupancies(2, &[-1, 0, 1], 2, &[0, 0]);
        // (1,0,1 | 0,0,0), (0,2,0 | 0,0,0), ... and mixed placements
        assert!(e.feasible.iter().all(|o| o.iter().sum::<u32>() == 2));
        assert!(!e.argmax.is_empty());
    }
}
