//! All-roots solver for complex polynomials: Aberth–Ehrlich simultaneous
//! iteration with random-perturbation restarts.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tol::ROOT_TOL;

/// Horner evaluation of the polynomial and its derivative.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = *coeffs.last().unwrap();
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev().skip(1) {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Horner evaluation of the polynomial with first and second derivatives.
fn eval_with_two_derivatives(
    coeffs: &[Complex64],
    z: Complex64,
) -> (Complex64, Complex64, Complex64) {
    let mut p = *coeffs.last().unwrap();
    let mut dp = Complex64::new(0.0, 0.0);
    let mut ddp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev().skip(1) {
        ddp = ddp * z + dp * 2.0;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, ddp)
}

/// Polish a converged approximation with multiplicity-aware Newton steps.
///
/// The multiplicity estimate `m = p'^2 / (p'^2 - p p'')` is exact at a pure
/// power and robust inside a root cluster, and `z <- z - m p/p'` then
/// converges quadratically to the multiple root, collapsing the cluster.
/// The polished point is kept only when it does not worsen the backward
/// error, so near-but-distinct simple roots are left alone.
fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn polish_root(coeffs: &[Complex64], z0: Complex64) -> Complex64 {
    let mult_estimate = |z: Complex64| -> f64 {
        let (p, dp, ddp) = eval_with_two_derivatives(coeffs, z);
        let denom = dp * dp - p * ddp;
        if denom.norm() < 1e-300 {
            1.0
        } else {
            ((dp * dp) / denom)
                .re
                .round()
                .clamp(1.0, (coeffs.len() - 1) as f64)
        }
    };
    // the estimate is only meaningful where the cluster still dominates the
    // coefficient noise, i.e. at the unpolished point
    let m = mult_estimate(z0) as usize;
    let mut z = z0;
    let mut best_z = z0;
    let mut best_p = f64::INFINITY;
    for _ in 0..40 {
        let (p, dp, _) = eval_with_two_derivatives(coeffs, z);
        let pn = p.norm();
        if pn < best_p {
            best_p = pn;
            best_z = z;
        }
        // at the coefficient-noise floor the evaluations carry no signal
        if pn <= 1e-15 * eval_scale(coeffs, z) || dp.norm() < 1e-300 {
            break;
        }
        let step = p / dp * m as f64;
        if step.norm() > 0.5 * (1.0 + z.norm()) {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            let (p_end, _, _) = eval_with_two_derivatives(coeffs, z);
            if p_end.norm() < best_p {
                best_p = p_end.norm();
                best_z = z;
            }
            break;
        }
    }
    if m < 2 {
        return best_z;
    }
    // a multiplicity-m root is a simple root of the (m-1)-th derivative,
    // where Newton reaches machine precision
    let mut dcoeffs = coeffs.to_vec();
    for _ in 1..m {
        dcoeffs = derivative(&dcoeffs);
    }
    let mut zd = best_z;
    for _ in 0..60 {
        let (p, dp) = eval_with_derivative(&dcoeffs, zd);
        if dp.norm() < 1e-300 {
            return best_z;
        }
        let step = p / dp;
        if step.norm() > 0.5 * (1.0 + zd.norm()) {
            return best_z;
        }
        zd -= step;
        if step.norm() <= 1e-16 * (1.0 + zd.norm()) {
            break;
        }
    }
    // keep the derivative root only if it is at least as good a root of p
    // (guards against a misread multiplicity at nearby simple roots)
    let (p_new, _, _) = eval_with_two_derivatives(coeffs, zd);
    if p_new.norm() <= best_p.max(1e-14 * eval_scale(coeffs, zd)) {
        zd
    } else {
        best_z
    }
}

/// Backward-error scale `sum_k |c_k| |z|^k`; a root is accepted when
/// `|p(z)| <= ROOT_TOL * scale`.
fn eval_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let az = z.norm();
    let mut scale = 0.0;
    let mut pw = 1.0;
    for c in coeffs {
        scale += c.norm() * pw;
        pw *= az;
    }
    scale.max(1e-300)
}

fn initial_guesses(coeffs: &[Complex64], n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    // monic: the product of root moduli is |c_0|
    let r0 = coeffs[0].norm().powf(1.0 / n as f64).clamp(1e-4, 1e4);
    (0..n)
        .map(|k| {
            let jitter_a: f64 = rng.gen_range(-0.1..0.1);
            let jitter_r: f64 = rng.gen_range(-0.08..0.08);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.37 + jitter_a;
            Complex64::from_polar(r0 * jitter_r.exp(), angle)
        })
        .collect()
}

/// Find all roots of `sum_k coeffs[k] z^k`. The leading coefficient must be
/// nonzero; exact zero roots are deflated first and returned as `0`.
pub fn all_roots(coeffs: &[Complex64], rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let lead = coeffs.last().map(|c| c.norm()).unwrap_or(0.0);
    if coeffs.len() < 2 || lead == 0.0 {
        if coeffs.len() == 1 {
            return Ok(Vec::new());
        }
        return Err(Error::Invalid("degenerate polynomial".into()));
    }
    let mut roots = Vec::with_capacity(coeffs.len() - 1);
    let mut work: Vec<Complex64> = coeffs.iter().map(|c| c / coeffs.last().unwrap()).collect();
    while work.len() > 1 && work[0].norm() == 0.0 {
        roots.push(Complex64::new(0.0, 0.0));
        work.remove(0);
    }
    let n = work.len() - 1;
    if n == 0 {
        return Ok(roots);
    }

    for _attempt in 0..8 {
        let mut z = initial_guesses(&work, n, rng);
        for _iter in 0..400 {
            let mut all_done = true;
            for i in 0..n {
                let (p, dp) = eval_with_derivative(&work, z[i]);
                if p.norm() <= ROOT_TOL * eval_scale(&work, z[i]) {
                    continue;
                }
                all_done = false;
                if dp.norm() < 1e-300 {
                    let kick: f64 = rng.gen_range(0.01..0.1);
                    z[i] += Complex64::from_polar(kick, rng.gen_range(0.0..6.28));
                    continue;
                }
                let newton = p / dp;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let diff = z[i] - z[j];
                        if diff.norm() < 1e-300 {
                            continue;
                        }
                        s += diff.inv();
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - newton * s;
                let w = if denom.norm() < 1e-12 {
                    newton
                } else {
                    newton / denom
                };
                z[i] -= w;
            }
            if all_done {
                roots.extend(z.iter().map(|&zi| polish_root(&work, zi)));
                return Ok(roots);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: 8 * 400,
        residual: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.arg()
                .partial_cmp(&b.arg())
                .unwrap()
                .then(a.norm().partial_cmp(&b.norm()).unwrap())
        });
        v
    }

    #[test]
    fn cube_roots_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // z^3 - 1
        let roots = all_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], &mut rng)
            .unwrap();
        assert_eq!(roots.len(), 3);
        let got = sorted_by_arg(roots);
        for (k, r) in got.iter().enumerate() {
            let expect = Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (k as f64 - 1.0) / 3.0,
            );
            assert!((r - expect).norm() < 1e-9, "{} vs {}", r, expect);
        }
    }

    #[test]
    fn zero_roots_are_deflated_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // z^2 (z - 2)
        let roots =
            all_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)], &mut rng).unwrap();
        let zeros = roots.iter().filter(|r| r.norm() == 0.0).count();
        assert_eq!(zeros, 2);
        assert!(roots.iter().any(|r| (r - c(2.0, 0.0)).norm() < 1e-9));
    }

    #[test]
    fn random_polynomials_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for deg in 1..=8 {
            // build from known roots, expand, solve, compare elementary symmetric sums
            let true_roots: Vec<Complex64> = (0..deg)
                .map(|_| {
                    let (x, y) = crate::linalg::normal_pair(&mut rng);
                    c(x, y)
                })
                .collect();
            let mut coeffs = vec![c(1.0, 0.0)];
            for r in &true_roots {
                let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
                for (k, &co) in coeffs.iter().enumerate() {
                    next[k] -= co * r;
                    next[k + 1] += co;
                }
                coeffs = next;
            }
            let found = all_roots(&coeffs, &mut rng).unwrap();
            assert_eq!(found.len(), deg);
            // compare coefficient reconstructions (robust to ordering)
            let mut rec = vec![c(1.0, 0.0)];
            for r in &found {
                let mut next = vec![c(0.0, 0.0); rec.len() + 1];
                for (k, &co) in rec.iter().enumerate() {
                    next[k] -= co * r;
                    next[k + 1] += co;
                }
                rec = next;
            }
            let scale: f64 = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in coeffs.iter().zip(&rec) {
                assert!((a - b).norm() < 1e-8 * scale, "deg {}: {} vs {}", deg, a, b);
            }
        }
    }

    #[test]
    fn multiple_root_cluster_preserves_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // (z - 0.8)^5: individual roots smear, coefficients survive
        let r = c(0.8, 0.3);
        let mut coeffs = vec![c(1.0, 0.0)];
        for _ in 0..5 {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &co) in coeffs.iter().enumerate() {
                next[k] -= co * r;
                next[k + 1] += co;
            }
            coeffs = next;
        }
        let found = all_roots(&coeffs, &mut rng).unwrap();
        let mut rec = vec![c(1.0, 0.0)];
        for z in &found {
            let mut next = vec![c(0.0, 0.0); rec.len() + 1];
            for (k, &co) in rec.iter().enumerate() {
                next[k] -= co * z;
                next[k + 1] += co;
            }
            rec = next;
        }
        for (a, b) in coeffs.iter().zip(&rec) {
            assert!((a - b).norm() < 1e-7);
        }
    }
}
