//! GM bounds and values through the likelihood connection.
//!
//! The squared maximal product overlap of a symmetrized multiset state
//! factorizes as `(N!/perm(A)) max_phi prod_j |<phi|psi_j>|^{2 n_j}`, which
//! is (up to the prefactor) a likelihood functional restricted to pure
//! states. This module carries the machinery on both sides of that bridge:
//! an iterative maximum-likelihood solver over density matrices, frequency
//! compatibility tests that decide when the resulting bound is tight, a
//! multistart fixed-point optimizer for the overlap itself, and additivity
//! certificates.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{BlochVector, CMat, CVec, DensityMatrix, PureState};
use crate::majorana::half_sphere_check;
use crate::permanent::gram;
use crate::symmetric::{product_overlap, KetMultiset, SymmetricState};
use crate::tol::{
    COMPAT_TOL, GM_STEP_TOL, ML_RESIDUAL_TOL, OVERLAP_GUARD, PURE_MAX_TOL, SATURATION_TOL,
};

const LN_2: f64 = std::f64::consts::LN_2;

fn log2(x: f64) -> f64 {
    x.ln() / LN_2
}

fn log2_factorial(n: u32) -> f64 {
    (1..=n as u64).map(|k| (k as f64).ln()).sum::<f64>() / LN_2
}

/// Rank-one POVM (possibly incomplete): subnormalized kets with observed
/// counts, plus the largest eigenvalue `g` of `Pi = sum_j |psi_j><psi_j|`.
#[derive(Debug, Clone)]
pub struct RankOnePovm {
    kets: Vec<CVec>,
    counts: Vec<u32>,
    pi: CMat,
    pi_max: f64,
}

impl RankOnePovm {
    pub fn new(kets: Vec<CVec>, counts: Vec<u32>) -> Result<Self> {
        if kets.is_empty() || kets.len() != counts.len() {
            return Err(Error::Invalid(format!(
                "{} kets vs {} counts",
                kets.len(),
                counts.len()
            )));
        }
        if counts.iter().all(|&n| n == 0) {
            return Err(Error::Invalid("all counts are zero".into()));
        }
        let dim = kets[0].dim();
        let mut pi = CMat::zeros(dim, dim);
        for ket in &kets {
            if ket.dim() != dim {
                return Err(Error::DimMismatch(ket.dim(), dim));
            }
            let norm = ket.norm();
            if norm <= 0.0 || norm > 1.0 + 1e-12 {
                return Err(Error::Invalid(format!("ket norm {} outside (0, 1]", norm)));
            }
            pi.add_outer(ket, 1.0);
        }
        let (evals, _) = pi.hermitian_eig()?;
        let pi_max = *evals.last().expect("nonempty spectrum");
        if pi_max <= 0.0 {
            return Err(Error::Invalid("Pi has no positive eigenvalue".into()));
        }
        Ok(RankOnePovm {
            kets,
            counts,
            pi,
            pi_max,
        })
    }

    /// POVM view of a multiset: distinct kets with counts = multiplicities.
    pub fn from_multiset(ms: &KetMultiset) -> Result<Self> {
        Self::new(ms.kets().to_vec(), ms.mults().to_vec())
    }

    pub fn kets(&self) -> &[CVec] {
        &self.kets
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn dim(&self) -> usize {
        self.kets[0].dim()
    }

    pub fn pi(&self) -> &CMat {
        &self.pi
    }

    /// Largest eigenvalue of `Pi`.
    pub fn pi_max(&self) -> f64 {
        self.pi_max
    }

    pub fn total_counts(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Frequencies `f_j = n_j / N`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total_counts() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Multiset of the kets with nonzero counts.
    pub fn observed_multiset(&self) -> Result<KetMultiset> {
        let mut kets = Vec::new();
        let mut mults = Vec::new();
        for (ket, &n) in self.kets.iter().zip(&self.counts) {
            if n > 0 {
                kets.push(ket.clone());
                mults.push(n);
            }
        }
        KetMultiset::new(kets, mults)
    }
}

/// Likelihood bound on the GM in bits:
/// `-log2[ (N!/perm(A)) prod_j (g f_j)^{n_j} ]`, kets with `n_j = 0`
/// contributing nothing.
pub fn gm_lower_bound(p: &RankOnePovm) -> Result<f64> {
    let ms = p.observed_multiset()?;
    let perm_a = gram(&ms).permanent()?;
    let n_total = p.total_counts();
    let g = p.pi_max();
    let mut log_term = log2_factorial(n_total) - log2(perm_a);
    for (&count, f) in p.counts.iter().zip(p.frequencies()) {
        if count > 0 {
            log_term += count as f64 * log2(g * f);
        }
    }
    Ok(-log_term)
}

/// Options for the iterative ML solver.
#[derive(Debug, Clone, Copy)]
pub struct MlOptions {
    pub max_iters: usize,
    pub residual_tol: f64,
}

impl Default for MlOptions {
    fn default() -> Self {
        MlOptions {
            max_iters: 50_000,
            residual_tol: ML_RESIDUAL_TOL,
        }
    }
}

/// Output of [`ml_maximize`].
#[derive(Debug, Clone)]
pub struct MlResult {
    pub rho_ml: DensityMatrix,
    /// Value of `prod_j p_j^{n_j}` at the maximizer.
    pub likelihood_max: f64,
    pub purity: f64,
    /// Certified: the likelihood maximum is attained at a pure state.
    pub is_pure_max: bool,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn log_likelihood(p: &RankOnePovm, rho: &CMat) -> f64 {
    let mut acc = 0.0;
    for (ket, &n) in p.kets.iter().zip(&p.counts) {
        if n == 0 {
            continue;
        }
        let prob = ket.inner(&rho.mul_vec(ket)).expect("dims").re.max(1e-300);
        acc += n as f64 * prob.ln();
    }
    acc
}

/// `R(rho) = sum_j (f_j / p_j)|psi_j><psi_j|` over observed outcomes.
fn r_operator(p: &RankOnePovm, rho: &CMat) -> CMat {
    let n_total = p.total_counts() as f64;
    let mut r = CMat::zeros(p.dim(), p.dim());
    for (ket, &n) in p.kets.iter().zip(&p.counts) {
        if n == 0 {
            continue;
        }
        let prob = ket.inner(&rho.mul_vec(ket)).expect("dims").re.max(1e-300);
        r.add_outer(ket, n as f64 / n_total / prob);
    }
    r
}

fn fixed_point_residual(r: &CMat, rho: &CMat) -> f64 {
    let r_rho = r.mul(rho);
    let lam = r_rho.trace().re;
    r_rho.sub(&rho.scaled(Complex64::new(lam, 0.0))).frobenius_norm()
}

/// Maximize the likelihood over density matrices by diluted RrhoR iteration.
///
/// The dilution `rho <- (I + eps R) rho (I + eps R) / tr` starts at
/// `eps = 1` and halves whenever the likelihood would drop, which keeps the
/// ascent monotone. On hitting the iteration cap the best iterate is
/// returned with `converged = false`.
pub fn ml_maximize(p: &RankOnePovm) -> Result<MlResult> {
    ml_maximize_with(p, &MlOptions::default())
}

pub fn ml_maximize_with(p: &RankOnePovm, opts: &MlOptions) -> Result<MlResult> {
    let dim = p.dim();
    let mut rho = CMat::identity(dim).scaled(Complex64::new(1.0 / dim as f64, 0.0));
    let mut loglik = log_likelihood(p, &rho);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let identity = CMat::identity(dim);
    while iterations < opts.max_iters {
        iterations += 1;
        let r = r_operator(p, &rho);
        residual = fixed_point_residual(&r, &rho);
        if residual < opts.residual_tol {
            converged = true;
            break;
        }
        let mut eps = 1.0f64;
        let mut accepted = false;
        while eps > 1e-9 {
            let t = identity.add(&r.scaled(Complex64::new(eps, 0.0)));
            let cand = t.mul(&rho).mul(&t.dagger());
            let tr = cand.trace().re;
            if tr <= 0.0 {
                eps *= 0.5;
                continue;
            }
            let cand = cand.scaled(Complex64::new(1.0 / tr, 0.0));
            let cand_loglik = log_likelihood(p, &cand);
            if cand_loglik >= loglik - 1e-14 {
                rho = cand;
                loglik = cand_loglik;
                accepted = true;
                break;
            }
            eps *= 0.5;
        }
        if !accepted {
            // stationary within line-search resolution
            break;
        }
    }
    finish_ml(p, rho, loglik, iterations, residual, converged)
}

fn finish_ml(
    p: &RankOnePovm,
    rho: CMat,
    loglik: f64,
    iterations: usize,
    residual: f64,
    converged: bool,
) -> Result<MlResult> {
    // symmetrize rounding drift before wrapping
    let mut sym = rho.clone();
    for i in 0..sym.rows() {
        let d = sym.get(i, i);
        sym.set(i, i, Complex64::new(d.re.max(0.0), 0.0));
        for j in (i + 1)..sym.cols() {
            let m = (sym.get(i, j) + sym.get(j, i).conj()) * 0.5;
            sym.set(i, j, m);
            sym.set(j, i, m.conj());
        }
    }
    let tr = sym.trace().re;
    let sym = sym.scaled(Complex64::new(1.0 / tr, 0.0));
    let rho_ml = DensityMatrix::new(sym)?;
    let purity = rho_ml.purity();
    let is_pure_max = pure_max_certificate(p, &rho_ml, 0)?;
    Ok(MlResult {
        rho_ml,
        likelihood_max: loglik.exp(),
        purity,
        is_pure_max,
        iterations,
        residual,
        converged,
    })
}

/// Decide whether the likelihood maximum is attained at a pure state.
///
/// High purity certifies directly. Otherwise, when the maximizer is rank
/// deficient the problem restricts to its support (where the same maximum is
/// attained) and the solver reruns there; a full-rank mixed maximizer stays
/// uncertified.
fn pure_max_certificate(p: &RankOnePovm, rho: &DensityMatrix, depth: usize) -> Result<bool> {
    if rho.purity() > 1.0 - PURE_MAX_TOL {
        return Ok(true);
    }
    if depth >= 4 {
        return Ok(false);
    }
    let (evals, evecs) = rho.mat().hermitian_eig()?;
    let support: Vec<&CVec> = evals
        .iter()
        .zip(&evecs)
        .filter(|(&e, _)| e > 1e-8)
        .map(|(_, v)| v)
        .collect();
    let k = support.len();
    if k == rho.dim() || k == 0 {
        return Ok(false);
    }
    // project the kets onto the support subspace
    let mut proj_kets = Vec::new();
    let mut proj_counts = Vec::new();
    for (ket, &n) in p.kets.iter().zip(&p.counts) {
        if n == 0 {
            continue;
        }
        let comps: Vec<Complex64> = support
            .iter()
            .map(|v| v.inner(ket).expect("dims"))
            .collect();
        let pv = CVec::new(comps);
        if pv.norm() < 1e-12 {
            // an observed outcome orthogonal to the support cannot happen at
            // the maximum; abandon the certificate
            return Ok(false);
        }
        proj_kets.push(pv);
        proj_counts.push(n);
    }
    let restricted = RankOnePovm::new(proj_kets, proj_counts)?;
    let res = ml_maximize_with(&restricted, &MlOptions::default())?;
    pure_max_certificate(&restricted, &res.rho_ml, depth + 1)
}

/// Closed-form qubit compatibility for two bases separated by `theta`.
///
/// `f = [[f00, f01], [f10, f11]]` are per-basis frequencies (rows sum to 1).
/// With `h_j = f_j0 - f_j1`, the frequencies are pure-state realizable iff
/// `|h0 s0 + h1 s1| <= 1` for the dual basis `s0 = (-cot t, 0, 1)`,
/// `s1 = (csc t, 0, 0)`; the witness sits on the intersection circle.
/// A collapsed angle (`theta = 0, pi`) degenerates to the single-basis case.
pub fn compatibility_qubit(theta: f64, f: [[f64; 2]; 2]) -> Result<(bool, Option<PureState>)> {
    for row in &f {
        if (row[0] + row[1] - 1.0).abs() > 1e-9 || row[0] < -1e-12 || row[1] < -1e-12 {
            return Err(Error::Invalid(format!("frequency row {:?} invalid", row)));
        }
    }
    let h0 = f[0][0] - f[0][1];
    let h1 = f[1][0] - f[1][1];
    let sin_t = theta.sin();
    if sin_t.abs() < 1e-9 {
        // bases coincide (up to relabeling when cos(theta) < 0)
        let h1_aligned = if theta.cos() > 0.0 { h1 } else { -h1 };
        if (h0 - h1_aligned).abs() > 1e-9 {
            return Ok((false, None));
        }
        let witness = BlochVector::new((1.0 - h0 * h0).max(0.0).sqrt(), 0.0, h0).to_state()?;
        return Ok((true, Some(witness)));
    }
    let s0 = BlochVector::new(-theta.cos() / sin_t, 0.0, 1.0);
    let s1 = BlochVector::new(1.0 / sin_t, 0.0, 0.0);
    let v = s0.scaled(h0).add(&s1.scaled(h1));
    let v_sq = v.dot(&v);
    if v_sq > 1.0 + 1e-12 {
        return Ok((false, None));
    }
    let y = (1.0 - v_sq).max(0.0).sqrt();
    let witness = BlochVector::new(v.x, y, v.z).to_state()?;
    Ok((true, Some(witness)))
}

/// Outcome of a numerical compatibility search.
#[derive(Debug, Clone)]
pub struct CompatOutcome {
    pub compatible: bool,
    pub witness: Option<PureState>,
    /// Smallest value of `sum_j (|<phi|psi_j>|^2 - t_j)^2` found.
    pub residual: f64,
    /// The optimizer stalled before reaching stationarity on every restart.
    pub inconclusive: bool,
}

/// Search for a pure state with `|<phi|psi_j>|^2 = t_j` for all `j`.
///
/// Levenberg–Marquardt on the squared-overlap residuals over the unit
/// sphere, multistart from the kets and seeded random states; compatible
/// when the best squared residual drops below `1e-12`.
pub fn compatibility_targets(
    kets: &[CVec],
    targets: &[f64],
    restarts: usize,
    seed: u64,
) -> Result<CompatOutcome> {
    if kets.is_empty() || kets.len() != targets.len() {
        return Err(Error::Invalid(format!(
            "{} kets vs {} targets",
            kets.len(),
            targets.len()
        )));
    }
    let dim = kets[0].dim();
    let reals: Vec<(Vec<f64>, Vec<f64>)> = kets.iter().map(ket_real_parts).collect();

    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for ket in kets {
        if let Ok(s) = PureState::normalize(ket) {
            seeds.push(state_to_real(&s));
        }
    }
    // weighted-projector top eigenvector often sits near the solution
    let mut weighted = CMat::zeros(dim, dim);
    for (ket, &t) in kets.iter().zip(targets) {
        weighted.add_outer(ket, t.max(0.0));
    }
    if let Ok((_, vecs)) = weighted.hermitian_eig() {
        if let Some(top) = vecs.last() {
            if let Ok(s) = PureState::normalize(top) {
                seeds.push(state_to_real(&s));
            }
        }
    }
    let deterministic = seeds.len();
    let total = deterministic + restarts.max(1);
    let results = exec::map_indexed(total, |i| {
        let u0 = if i < deterministic {
            seeds[i].clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(0x636f_0000 + i as u64);
            state_to_real(&PureState::random(dim, &mut rng))
        };
        lm_fit_overlaps(&reals, targets, u0)
    });
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut any_converged = false;
    for (u, d, conv) in results {
        any_converged |= conv;
        if best.as_ref().map_or(true, |(_, bd)| d < *bd) {
            best = Some((u, d));
        }
    }
    let (u, residual) = best.expect("at least one restart");
    let witness_state = real_to_state(&u)?;
    let compatible = residual < COMPAT_TOL;
    Ok(CompatOutcome {
        compatible,
        witness: if compatible {
            Some(witness_state.canonicalized())
        } else {
            None
        },
        residual,
        inconclusive: !any_converged && !compatible,
    })
}

/// Compatibility of POVM frequencies: targets are `g f_j` over every outcome
/// (zero-count outcomes demand orthogonality, as the frequency states).
pub fn compatibility_general(p: &RankOnePovm) -> Result<CompatOutcome> {
    compatibility_general_with(p, 32, 0)
}

pub fn compatibility_general_with(
    p: &RankOnePovm,
    restarts: usize,
    seed: u64,
) -> Result<CompatOutcome> {
    let g = p.pi_max();
    let targets: Vec<f64> = p.frequencies().iter().map(|f| g * f).collect();
    compatibility_targets(p.kets(), &targets, restarts, seed)
}

// --- real-vector helpers for the LM fit ------------------------------------

/// `<phi|psi> = u.a + i u.b` for the real embedding `u = [Re phi; Im phi]`.
fn ket_real_parts(ket: &CVec) -> (Vec<f64>, Vec<f64>) {
    let d = ket.dim();
    let mut a = vec![0.0; 2 * d];
    let mut b = vec![0.0; 2 * d];
    for i in 0..d {
        let z = ket.get(i);
        a[i] = z.re;
        a[d + i] = z.im;
        b[i] = z.im;
        b[d + i] = -z.re;
    }
    (a, b)
}

fn state_to_real(s: &PureState) -> Vec<f64> {
    let d = s.dim();
    let mut u = vec![0.0; 2 * d];
    for i in 0..d {
        let z = s.vec().get(i);
        u[i] = z.re;
        u[d + i] = z.im;
    }
    u
}

fn real_to_state(u: &[f64]) -> Result<PureState> {
    let d = u.len() / 2;
    let v = CVec::new(
        (0..d)
            .map(|i| Complex64::new(u[i], u[d + i]))
            .collect(),
    );
    PureState::normalize(&v)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve the square system `m x = rhs` by Gaussian elimination with partial
/// pivoting; `m` is row-major `n x n`.
fn solve_dense(mut m: Vec<f64>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i * n + col]
                    .abs()
                    .partial_cmp(&m[j * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if m[pivot * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            rhs.swap(col, pivot);
        }
        let inv = 1.0 / m[col * n + col];
        for row in (col + 1)..n {
            let factor = m[row * n + col] * inv;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(x)
}

/// Residuals: `q_j(u) - t_j` for each ket plus the normalization `u.u - 1`.
fn overlap_residuals(reals: &[(Vec<f64>, Vec<f64>)], targets: &[f64], u: &[f64]) -> Vec<f64> {
    let mut r = Vec::with_capacity(reals.len() + 1);
    for ((a, b), &t) in reals.iter().zip(targets) {
        let qa = dot(u, a);
        let qb = dot(u, b);
        r.push(qa * qa + qb * qb - t);
    }
    r.push(dot(u, u) - 1.0);
    r
}

fn residual_score(reals: &[(Vec<f64>, Vec<f64>)], targets: &[f64], u: &[f64]) -> f64 {
    let norm = dot(u, u).sqrt();
    let un: Vec<f64> = u.iter().map(|x| x / norm).collect();
    reals
        .iter()
        .zip(targets)
        .map(|((a, b), &t)| {
            let qa = dot(&un, a);
            let qb = dot(&un, b);
            let q = qa * qa + qb * qb;
            (q - t) * (q - t)
        })
        .sum()
}

/// Levenberg–Marquardt on the overlap residuals. Returns the final point,
/// its squared-residual score on the sphere, and whether it reached
/// stationarity.
fn lm_fit_overlaps(
    reals: &[(Vec<f64>, Vec<f64>)],
    targets: &[f64],
    mut u: Vec<f64>,
) -> (Vec<f64>, f64, bool) {
    let n = u.len();
    let m = reals.len() + 1;
    let mut lambda = 1e-3f64;
    let mut r = overlap_residuals(reals, targets, &u);
    let mut cost: f64 = r.iter().map(|x| x * x).sum();
    let mut converged = false;
    for _ in 0..400 {
        if cost < 1e-28 {
            converged = true;
            break;
        }
        // J rows: d r_j / d u
        let mut jac = vec![0.0; m * n];
        for (row, (a, b)) in reals.iter().enumerate() {
            let qa = dot(&u, a);
            let qb = dot(&u, b);
            for k in 0..n {
                jac[row * n + k] = 2.0 * (qa * a[k] + qb * b[k]);
            }
        }
        for k in 0..n {
            jac[(m - 1) * n + k] = 2.0 * u[k];
        }
        // normal equations
        let mut jtj = vec![0.0; n * n];
        let mut jtr = vec![0.0; n];
        for row in 0..m {
            for i in 0..n {
                let ji = jac[row * n + i];
                if ji == 0.0 {
                    continue;
                }
                jtr[i] += ji * r[row];
                for j in 0..n {
                    jtj[i * n + j] += ji * jac[row * n + j];
                }
            }
        }
        let mut improved = false;
        for _ in 0..12 {
            let mut damped = jtj.clone();
            for i in 0..n {
                damped[i * n + i] += lambda * (jtj[i * n + i] + 1e-12);
            }
            let rhs: Vec<f64> = jtr.iter().map(|x| -x).collect();
            let Some(step) = solve_dense(damped, rhs) else {
                lambda *= 10.0;
                continue;
            };
            let cand: Vec<f64> = u.iter().zip(&step).map(|(x, s)| x + s).collect();
            let cand_r = overlap_residuals(reals, targets, &cand);
            let cand_cost: f64 = cand_r.iter().map(|x| x * x).sum();
            if cand_cost < cost {
                let step_sq: f64 = step.iter().map(|s| s * s).sum();
                u = cand;
                r = cand_r;
                cost = cand_cost;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if step_sq < 1e-30 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                break;
            }
        }
        if !improved {
            converged = cost < 1e-20;
            break;
        }
    }
    let score = residual_score(reals, targets, &u);
    (u, score, converged || score < 1e-24)
}

// --- direct GM optimization -------------------------------------------------

/// Options shared by the multistart optimizers.
#[derive(Debug, Clone, Copy)]
pub struct GmOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for GmOptions {
    fn default() -> Self {
        GmOptions {
            restarts: 32,
            max_iters: 5000,
            seed: 0,
        }
    }
}

/// GM of a symmetric state.
#[derive(Debug, Clone)]
pub struct GmResult {
    /// Maximal squared product overlap.
    pub lambda_sq: f64,
    /// `-log2(lambda_sq)`, in bits.
    pub gm_bits: f64,
    /// Likelihood lower bound on the GM, in bits.
    pub bound_bits: f64,
    /// The likelihood bound is attained (frequencies compatible).
    pub saturated: bool,
    /// Additivity certified (saturation, pure likelihood maximum, half
    /// sphere, or at most three distinct kets).
    pub additive: bool,
    /// Best product-state factor found.
    pub witness: PureState,
}

/// One multiplicative fixed-point ascent from `phi0`; returns the overlap
/// and the final state.
fn ascend_overlap(
    s: &SymmetricState,
    phi0: PureState,
    max_iters: usize,
) -> Result<(f64, PureState)> {
    let kets = s.multiset().kets();
    let mults = s.multiset().mults();
    let dim = s.dim();
    let mut phi = phi0;
    let mut overlap = product_overlap(s, &phi)?;
    for _ in 0..max_iters {
        // M(phi) = sum_j n_j |psi_j><psi_j| / max(q_j, delta)
        let mut m = CMat::zeros(dim, dim);
        for (ket, &n) in kets.iter().zip(mults) {
            let q = phi.vec().inner(ket)?.norm_sqr();
            m.add_outer(ket, n as f64 / q.max(OVERLAP_GUARD));
        }
        let direction = m.mul_vec(phi.vec());
        if direction.norm() < 1e-300 {
            break;
        }
        let full = PureState::normalize(&direction)?;
        let full_overlap = product_overlap(s, &full)?;
        if full_overlap >= overlap {
            if full_overlap - overlap < GM_STEP_TOL {
                phi = full;
                overlap = full_overlap;
                break;
            }
            phi = full;
            overlap = full_overlap;
            continue;
        }
        // damped step toward the fixed-point direction
        let mut t = 0.5f64;
        let mut accepted = false;
        while t > 1e-6 {
            let blended = phi.vec().axpy(Complex64::new(t, 0.0), full.vec());
            let cand = PureState::normalize(&blended)?;
            let cand_overlap = product_overlap(s, &cand)?;
            if cand_overlap > overlap {
                let gain = cand_overlap - overlap;
                phi = cand;
                overlap = cand_overlap;
                accepted = true;
                if gain < GM_STEP_TOL {
                    accepted = false; // stationary
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok((overlap, phi))
}

fn optimizer_seeds(s: &SymmetricState, opts: &GmOptions) -> Vec<PureState> {
    let mut seeds: Vec<PureState> = Vec::new();
    for ket in s.multiset().kets() {
        if let Ok(p) = PureState::normalize(ket) {
            seeds.push(p);
        }
    }
    let dim = s.dim();
    for i in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(0x676d_0000 + i as u64);
        seeds.push(PureState::random(dim, &mut rng));
    }
    seeds
}

/// All distinct product-state factors attaining the maximal overlap (within
/// `1e-9` of the best restart), canonical phase, best first.
pub fn closest_product_candidates(s: &SymmetricState, opts: &GmOptions) -> Result<Vec<PureState>> {
    let seeds = optimizer_seeds(s, opts);
    let runs = exec::map_indexed(seeds.len(), |i| {
        ascend_overlap(s, seeds[i].clone(), opts.max_iters)
    });
    let mut results = Vec::new();
    for r in runs {
        results.push(r?);
    }
    let best = results
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut winners: Vec<(f64, PureState)> = results
        .into_iter()
        .filter(|(v, _)| *v >= best - 1e-9)
        .map(|(v, p)| (v, p.canonicalized()))
        .collect();
    winners.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut distinct: Vec<PureState> = Vec::new();
    for (_, cand) in winners {
        if distinct
            .iter()
            .all(|p| p.fidelity(&cand).unwrap() < 1.0 - 1e-6)
        {
            distinct.push(cand);
        }
    }
    Ok(distinct)
}

/// Compute the GM of a symmetric state by multistart fixed-point iteration,
/// flagging bound saturation and certified additivity.
pub fn gm_optimize(s: &SymmetricState) -> Result<GmResult> {
    gm_optimize_with(s, &GmOptions::default())
}

pub fn gm_optimize_with(s: &SymmetricState, opts: &GmOptions) -> Result<GmResult> {
    let seeds = optimizer_seeds(s, opts);
    let runs = exec::map_indexed(seeds.len(), |i| {
        ascend_overlap(s, seeds[i].clone(), opts.max_iters)
    });
    let mut best: Option<(f64, PureState)> = None;
    for r in runs {
        let (v, p) = r?;
        if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
            best = Some((v, p));
        }
    }
    let (lambda_sq, witness) = best.expect("at least one seed");
    let gm_bits = -log2(lambda_sq.max(1e-300));
    let povm = RankOnePovm::from_multiset(s.multiset())?;
    let bound_bits = gm_lower_bound(&povm)?;
    let saturated = (gm_bits - bound_bits).abs() < SATURATION_TOL;
    let additive = saturated || additivity_certify(s)?;
    Ok(GmResult {
        lambda_sq,
        gm_bits,
        bound_bits,
        saturated,
        additive,
        witness: witness.canonicalized(),
    })
}

/// Which certificate established additivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdditivityRoute {
    /// At most three distinct kets in the multiset.
    FewDistinctKets,
    /// Qubit state with Majorana points inside a closed half sphere.
    HalfSphere,
    /// The likelihood maximum is attained at a pure state.
    PureLikelihoodMax,
}

impl AdditivityRoute {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdditivityRoute::FewDistinctKets => "few-distinct-kets",
            AdditivityRoute::HalfSphere => "half-sphere",
            AdditivityRoute::PureLikelihoodMax => "pure-likelihood-max",
        }
    }
}

/// Sound-but-incomplete additivity certificate; reports the route that
/// fired, or `None` when nothing certifies (which never means "not
/// additive").
pub fn additivity_certificate(s: &SymmetricState) -> Result<Option<AdditivityRoute>> {
    if s.multiset().distinct() <= 3 {
        return Ok(Some(AdditivityRoute::FewDistinctKets));
    }
    if s.dim() == 2 {
        let points: Result<Vec<BlochVector>> = s
            .multiset()
            .kets()
            .iter()
            .map(|k| PureState::normalize(k)?.bloch())
            .collect();
        if half_sphere_check(&points?).within_half_sphere {
            return Ok(Some(AdditivityRoute::HalfSphere));
        }
    }
    let povm = RankOnePovm::from_multiset(s.multiset())?;
    if ml_maximize(&povm)?.is_pure_max {
        return Ok(Some(AdditivityRoute::PureLikelihoodMax));
    }
    Ok(None)
}

/// True when some additivity certificate applies.
pub fn additivity_certify(s: &SymmetricState) -> Result<bool> {
    Ok(additivity_certificate(s)?.is_some())
}

// --- pairwise tensor products ------------------------------------------------

/// GM (squared overlap) of the pair-site tensor product of two symmetric
/// states: party `k` holds the pair `(A_k, B_k)`.
///
/// Dense expansion over the `d1 d2`-dimensional pair space, then symmetric
/// rank-one approximation by shifted power iteration.
pub fn gm_tensor_product(s1: &SymmetricState, s2: &SymmetricState) -> Result<f64> {
    gm_tensor_product_with(s1, s2, &GmOptions {
        restarts: 64,
        ..GmOptions::default()
    })
}

pub fn gm_tensor_product_with(
    s1: &SymmetricState,
    s2: &SymmetricState,
    opts: &GmOptions,
) -> Result<f64> {
    if s1.total() != s2.total() {
        return Err(Error::Invalid(format!(
            "party counts differ: {} vs {}",
            s1.total(),
            s2.total()
        )));
    }
    let n = s1.total() as usize;
    let d1 = s1.dim();
    let d2 = s2.dim();
    if d1 * d2 > 16 || n > 4 {
        return Err(Error::TooLarge(format!(
            "pair space {}x{} with N = {} exceeds the dense limit",
            d1, d2, n
        )));
    }
    let t1 = crate::symmetric::dense_expand(s1)?;
    let t2 = crate::symmetric::dense_expand(s2)?;
    let dd = d1 * d2;
    let size = dd.pow(n as u32);
    let mut tensor = vec![Complex64::new(0.0, 0.0); size];
    for (idx, slot) in tensor.iter_mut().enumerate() {
        let mut rem = idx;
        let mut a_idx = 0usize;
        let mut b_idx = 0usize;
        let mut digits = vec![0usize; n];
        for k in (0..n).rev() {
            digits[k] = rem % dd;
            rem /= dd;
        }
        for &digit in &digits {
            a_idx = a_idx * d1 + digit / d2;
            b_idx = b_idx * d2 + digit % d2;
        }
        *slot = t1.get(a_idx) * t2.get(b_idx);
    }
    Ok(symmetric_rank_one_max(&tensor, dd, n, opts))
}

/// Largest `|T . v^N|^2` over unit vectors, by shifted symmetric power
/// iteration with multistart.
fn symmetric_rank_one_max(tensor: &[Complex64], dim: usize, order: usize, opts: &GmOptions) -> f64 {
    let runs = exec::map_indexed(opts.restarts.max(1), |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(0x7470_0000 + i as u64);
        let mut v: Vec<Complex64> = PureState::random(dim, &mut rng)
            .vec()
            .entries()
            .to_vec();
        let mut shift = 0.0f64;
        let mut best = 0.0f64;
        for _ in 0..opts.max_iters.min(2000) {
            let w = contract_all_but_one(tensor, dim, order, &v);
            let f: Complex64 = w.iter().zip(&v).map(|(wi, vi)| wi * vi).sum();
            let fabs = f.norm();
            if fabs <= best - 1e-15 {
                shift = (shift * 2.0).max(1.0);
            } else {
                if fabs - best < 1e-14 && shift < 1e-12 {
                    best = best.max(fabs);
                    break;
                }
                best = best.max(fabs);
                shift *= 0.5;
                if shift < 1e-3 {
                    shift = 0.0;
                }
            }
            // u = conj(w) + shift * v, with u phase-aligned to v
            let mut u: Vec<Complex64> = w.iter().map(|z| z.conj()).collect();
            let align: Complex64 = v.iter().zip(&u).map(|(vi, ui)| vi.conj() * ui).sum();
            if align.norm() > 1e-300 {
                let phase = align.conj() / align.norm();
                for z in u.iter_mut() {
                    *z *= phase;
                }
            }
            for (ui, vi) in u.iter_mut().zip(&v) {
                *ui += vi * shift;
            }
            let norm: f64 = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                break;
            }
            for z in u.iter_mut() {
                *z /= norm;
            }
            v = u;
        }
        best
    });
    runs.into_iter().fold(0.0, f64::max).powi(2)
}

/// `w_i = sum T[i, i_2 .. i_N] v_{i_2} .. v_{i_N}` by contracting the last
/// axis `N - 1` times.
fn contract_all_but_one(
    tensor: &[Complex64],
    dim: usize,
    order: usize,
    v: &[Complex64],
) -> Vec<Complex64> {
    let mut cur = tensor.to_vec();
    for _ in 0..(order - 1) {
        let rows = cur.len() / dim;
        let mut next = vec![Complex64::new(0.0, 0.0); rows];
        for (r, slot) in next.iter_mut().enumerate() {
            let base = r * dim;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                acc += cur[base + j] * vj;
            }
            *slot = acc;
        }
        cur = next;
    }
    cur
}
