//! Measurement families: MUBs in prime dimension, the Heisenberg–Weyl
//! group, and HW-covariant SIC-POVMs for d = 2 and the d = 3 one-parameter
//! fiducial family, together with the GM of the symmetric states they
//! generate.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::gm::{
    additivity_certify, compatibility_targets, gm_lower_bound, gm_optimize_with, GmOptions,
    GmResult, RankOnePovm,
};
use crate::linalg::{CMat, CVec, PureState};
use crate::permanent::{factorial, gram};
use crate::symmetric::{build_symmetric, KetMultiset};
use crate::tol::{MUB_TOL, SATURATION_TOL, SIC_TOL};

const LN_2: f64 = std::f64::consts::LN_2;

fn log2(x: f64) -> f64 {
    x.ln() / LN_2
}

fn log2_factorial(n: u32) -> f64 {
    (1..=n as u64).map(|k| (k as f64).ln()).sum::<f64>() / LN_2
}

fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Phase and cyclic-shift operators on the computational basis:
/// `Z|e_k> = w^k |e_k>`, `X|e_k> = |e_{k+1 mod d}>`, `w = e^{2 pi i / d}`.
#[derive(Debug, Clone)]
pub struct HwOperators {
    x: CMat,
    z: CMat,
    dim: usize,
}

impl HwOperators {
    pub fn new(dim: usize) -> Self {
        let mut x = CMat::zeros(dim, dim);
        let mut z = CMat::zeros(dim, dim);
        for k in 0..dim {
            x.set((k + 1) % dim, k, Complex64::new(1.0, 0.0));
            z.set(
                k,
                k,
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / dim as f64),
            );
        }
        HwOperators { x, z, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> &CMat {
        &self.x
    }

    pub fn z(&self) -> &CMat {
        &self.z
    }

    /// Apply `X^{k1} Z^{k2}` without building the matrix product.
    pub fn displace(&self, k1: u32, k2: u32, psi: &CVec) -> CVec {
        let d = self.dim;
        let mut shifted = vec![Complex64::new(0.0, 0.0); d];
        for j in 0..d {
            let phase = Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (j as f64 * k2 as f64 % d as f64) / d as f64,
            );
            shifted[(j + k1 as usize) % d] = phase * psi.get(j);
        }
        CVec::new(shifted)
    }
}

/// Up to `d + 1` mutually unbiased orthonormal bases in prime dimension.
#[derive(Debug, Clone)]
pub struct MubSet {
    dim: usize,
    bases: Vec<Vec<CVec>>,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[Vec<CVec>] {
        &self.bases
    }

    pub fn count(&self) -> usize {
        self.bases.len()
    }

    pub fn all_kets(&self) -> Vec<CVec> {
        self.bases.iter().flatten().cloned().collect()
    }

    /// Check orthonormality within each basis and unbiasedness across bases:
    /// `|<e^j_k|e^l_m>|^2 = (1/d)(1 - delta_jl) + delta_jl delta_km`.
    pub fn verify(&self) -> Result<()> {
        let d = self.dim as f64;
        for (j, bj) in self.bases.iter().enumerate() {
            for (l, bl) in self.bases.iter().enumerate() {
                for (k, ek) in bj.iter().enumerate() {
                    for (m, em) in bl.iter().enumerate() {
                        let got = ek.inner(em)?.norm_sqr();
                        let expect = if j == l {
                            if k == m {
                                1.0
                            } else {
                                0.0
                            }
                        } else {
                            1.0 / d
                        };
                        if (got - expect).abs() > MUB_TOL {
                            return Err(Error::Verification(format!(
                                "MUB overlap ({},{})x({},{}) = {} (expected {})",
                                j, k, l, m, got, expect
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Build `b <= d + 1` MUBs for prime `d`: the Z eigenbasis followed by the
/// eigenbases of `X Z^a` for `a = 0 .. d-1`.
///
/// Eigenvectors come in closed form: the component `j` of vector `m` in the
/// `X Z^a` eigenbasis has phase `2 pi [a j(j-1)/2 - j(a(d-1)/2 + m)] / d`
/// over `1/sqrt(d)`. Phases are fixed by the real-positive first component.
pub fn build_mubs(d: usize, b: usize) -> Result<MubSet> {
    if !is_prime(d) {
        return Err(Error::NonPrime(d));
    }
    if b == 0 || b > d + 1 {
        return Err(Error::Invalid(format!(
            "basis count {} outside 1..={}",
            b,
            d + 1
        )));
    }
    let mut bases = Vec::with_capacity(b);
    bases.push((0..d).map(|k| CVec::basis(d, k)).collect::<Vec<_>>());
    let inv_sqrt_d = 1.0 / (d as f64).sqrt();
    for a in 0..d {
        if bases.len() == b {
            break;
        }
        let mut basis = Vec::with_capacity(d);
        for m in 0..d {
            let comps: Vec<Complex64> = (0..d)
                .map(|j| {
                    let jf = j as f64;
                    let turns = (a as f64 * jf * (jf - 1.0) / 2.0
                        - jf * (a as f64 * (d as f64 - 1.0) / 2.0 + m as f64))
                        / d as f64;
                    Complex64::from_polar(
                        inv_sqrt_d,
                        2.0 * std::f64::consts::PI * turns.rem_euclid(1.0),
                    )
                })
                .collect();
            basis.push(CVec::new(comps).canonicalized());
        }
        bases.push(basis);
    }
    let set = MubSet { dim: d, bases };
    set.verify()?;
    Ok(set)
}

/// GM (bound) of the symmetric state built from `reps[j]` copies of every
/// ket of basis `j`:  `G >= -log2( N! / (d^N perm(A)) )`.
///
/// The bound is saturated exactly when some pure state is mutually unbiased
/// to all participating kets; a complete set (`b = d + 1`) never admits one.
pub fn mub_state_gm(mubs: &MubSet, reps: &[u32]) -> Result<GmResult> {
    if reps.len() != mubs.count() {
        return Err(Error::Invalid(format!(
            "{} repetition counts for {} bases",
            reps.len(),
            mubs.count()
        )));
    }
    if reps.iter().any(|&n| n == 0) {
        return Err(Error::Invalid("every basis needs n_j >= 1".into()));
    }
    let d = mubs.dim();
    let mut kets = Vec::new();
    let mut mults = Vec::new();
    for (basis, &n) in mubs.bases().iter().zip(reps) {
        for ket in basis {
            kets.push(ket.clone());
            mults.push(n);
        }
    }
    let state = build_symmetric(KetMultiset::new(kets.clone(), mults)?)?;
    let n_total = state.total();
    let gm_bits = -(log2_factorial(n_total) - n_total as f64 * log2(d as f64)
        - log2(state.perm_a()));
    let lambda_sq = 2.0f64.powf(-gm_bits);

    let targets = vec![1.0 / d as f64; kets.len()];
    let outcome = compatibility_targets(&kets, &targets, 32, 0)?;
    let complete_set = mubs.count() == d + 1;
    let saturated = !complete_set && outcome.compatible;
    let witness = match (&outcome.witness, saturated) {
        (Some(w), true) => w.clone(),
        // no MU witness: fall back to the best product state the optimizer finds
        _ => {
            gm_optimize_with(&state, &GmOptions::default())?
                .witness
        }
    };
    let additive = saturated || additivity_certify(&state)?;
    Ok(GmResult {
        lambda_sq,
        gm_bits,
        bound_bits: gm_bits,
        saturated,
        additive,
        witness,
    })
}

/// A verified SIC-POVM: `d^2` normalized kets with
/// `|<psi_j|psi_k>|^2 = (1 + d delta_jk)/(d + 1)`.
#[derive(Debug, Clone)]
pub struct SicPovm {
    dim: usize,
    kets: Vec<CVec>,
    fiducial: CVec,
    labels: Vec<(u32, u32)>,
}

impl SicPovm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kets(&self) -> &[CVec] {
        &self.kets
    }

    pub fn fiducial(&self) -> &CVec {
        &self.fiducial
    }

    /// HW labels `(k1, k2)` in lexicographic order, `(0,0)` = fiducial.
    pub fn labels(&self) -> &[(u32, u32)] {
        &self.labels
    }

    /// The unique (up to equivalence) qubit SIC-POVM, from the fiducial
    /// `sqrt((3+sqrt 3)/6)|e0> + e^{i pi/4} sqrt((3-sqrt 3)/6)|e1>`.
    pub fn qubit() -> Result<SicPovm> {
        let s3 = 3.0f64.sqrt();
        let fiducial = CVec::new(vec![
            Complex64::new(((3.0 + s3) / 6.0).sqrt(), 0.0),
            Complex64::from_polar(((3.0 - s3) / 6.0).sqrt(), std::f64::consts::FRAC_PI_4),
        ]);
        hw_orbit(&PureState::new(fiducial)?)
    }

    /// The d = 3 family from the fiducial `(|e1> - e^{it}|e2>)/sqrt(2)`.
    pub fn qutrit(t: f64) -> Result<SicPovm> {
        let r = 1.0 / 2.0f64.sqrt();
        let fiducial = CVec::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(r, 0.0),
            -Complex64::from_polar(r, t),
        ]);
        hw_orbit(&PureState::new(fiducial)?)
    }
}

/// Heisenberg–Weyl orbit `X^{k1} Z^{k2} |psi>` of a fiducial candidate,
/// verified as a SIC-POVM.
pub fn hw_orbit(fiducial: &PureState) -> Result<SicPovm> {
    let d = fiducial.dim();
    let hw = HwOperators::new(d);
    let mut kets = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for k1 in 0..d as u32 {
        for k2 in 0..d as u32 {
            kets.push(hw.displace(k1, k2, fiducial.vec()));
            labels.push((k1, k2));
        }
    }
    if !verify_sic(&kets) {
        return Err(Error::Verification(format!(
            "HW orbit of the given state is not a SIC-POVM in d = {}",
            d
        )));
    }
    Ok(SicPovm {
        dim: d,
        kets,
        fiducial: fiducial.vec().clone(),
        labels,
    })
}

/// Fiducial test: `| <psi| X^{k1} Z^{k2} |psi> | = 1/sqrt(d+1)` for all
/// `(k1,k2) != (0,0)`, within `1e-9`.
pub fn verify_fiducial(psi: &PureState) -> bool {
    let d = psi.dim();
    let hw = HwOperators::new(d);
    let target = 1.0 / ((d + 1) as f64).sqrt();
    for k1 in 0..d as u32 {
        for k2 in 0..d as u32 {
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let moved = hw.displace(k1, k2, psi.vec());
            let Ok(ip) = psi.vec().inner(&moved) else {
                return false;
            };
            if (ip.norm() - target).abs() > SIC_TOL {
                return false;
            }
        }
    }
    true
}

/// SIC test on a raw ket list: pairwise overlap condition plus the implied
/// resolution `sum_j |psi_j><psi_j| = d I` (asserted as a consistency check).
pub fn verify_sic(kets: &[CVec]) -> bool {
    let m = kets.len();
    let d = (m as f64).sqrt().round() as usize;
    if d * d != m || d == 0 || kets.iter().any(|k| k.dim() != d) {
        return false;
    }
    let cross = 1.0 / (d as f64 + 1.0);
    for j in 0..m {
        for k in j..m {
            let Ok(ip) = kets[j].inner(&kets[k]) else {
                return false;
            };
            let expect = if j == k { 1.0 } else { cross };
            if (ip.norm_sqr() - expect).abs() > SIC_TOL {
                return false;
            }
        }
    }
    let mut pi = CMat::zeros(d, d);
    for ket in kets {
        pi.add_outer(ket, 1.0);
    }
    let target = CMat::identity(d).scaled(Complex64::new(d as f64, 0.0));
    pi.sub(&target).frobenius_norm() <= SIC_TOL
}

/// 2-design identity check on random pure states:
/// `sum_j |<phi|psi_j>|^4 = 2d/(d+1)` and `sum_j |<phi|psi_j>|^2 = d`.
pub fn two_design_check(sic: &SicPovm, trials: usize, seed: u64) -> bool {
    let d = sic.dim() as f64;
    let quartic_target = 2.0 * d / (d + 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0x3264_7367);
    for _ in 0..trials {
        let phi = PureState::random(sic.dim(), &mut rng);
        let mut quadratic = 0.0;
        let mut quartic = 0.0;
        for ket in sic.kets() {
            let q = phi.vec().inner(ket).expect("dims").norm_sqr();
            quadratic += q;
            quartic += q * q;
        }
        if (quadratic - d).abs() > SIC_TOL || (quartic - quartic_target).abs() > SIC_TOL {
            return false;
        }
    }
    true
}

/// GM of the symmetric state generated by a SIC-POVM:
/// `Lambda^2 = d^2! / ((d+1)^{d^2-1} perm(A))`, the closest product states
/// being exactly the `psi_j^{tensor d^2}`.
///
/// The closed form is cross-checked against the direct optimizer within
/// `1e-6`; the returned witness is the optimizer's best factor.
pub fn sic_state_gm(sic: &SicPovm) -> Result<GmResult> {
    if !verify_sic(&sic.kets) {
        return Err(Error::Verification("kets fail the SIC condition".into()));
    }
    let d = sic.dim() as u32;
    let n = d * d;
    let state = build_symmetric(KetMultiset::uniform(sic.kets.clone())?)?;
    let lambda_sq =
        factorial(n) / ((d as f64 + 1.0).powi((n - 1) as i32) * state.perm_a());
    let gm_bits = -log2(lambda_sq);

    let direct = gm_optimize_with(&state, &GmOptions::default())?;
    if (direct.gm_bits - gm_bits).abs() > 1e-6 {
        return Err(Error::Verification(format!(
            "closed form {} bits disagrees with optimizer {} bits",
            gm_bits, direct.gm_bits
        )));
    }
    let povm = RankOnePovm::from_multiset(state.multiset())?;
    let bound_bits = gm_lower_bound(&povm)?;
    let saturated = (gm_bits - bound_bits).abs() < SATURATION_TOL;
    let additive = saturated || additivity_certify(&state)?;
    Ok(GmResult {
        lambda_sq,
        gm_bits,
        bound_bits,
        saturated,
        additive,
        witness: direct.witness,
    })
}

/// One grid point of the d = 3 scan.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub perm_a: f64,
    pub gm_bits: f64,
}

/// Uniform grid of `points >= 2` values covering `[0, pi/3]`.
pub fn sic_scan_grid(points: usize) -> Vec<f64> {
    let n = points.max(2);
    let top = std::f64::consts::FRAC_PI_3;
    (0..n).map(|k| top * k as f64 / (n - 1) as f64).collect()
}

/// Closed-form permanent of the d = 3 SIC Gram matrix,
/// `27/32 (61 - cos 9t)`.
pub fn sic_d3_perm_closed_form(t: f64) -> f64 {
    27.0 / 32.0 * (61.0 - (9.0 * t).cos())
}

/// Scan the d = 3 fiducial family: per grid point the Ryser permanent of the
/// 9x9 Gram matrix and `G(t)` in bits, each row checked against the closed
/// form to relative `1e-9`.
pub fn sic_scan_d3(t_grid: &[f64]) -> Result<Vec<ScanRow>> {
    let rows = exec::map_indexed(t_grid.len(), |i| -> Result<ScanRow> {
        let t = t_grid[i];
        let sic = SicPovm::qutrit(t)?;
        let ms = KetMultiset::uniform(sic.kets().to_vec())?;
        let perm_a = gram(&ms).permanent()?;
        let closed = sic_d3_perm_closed_form(t);
        if (perm_a - closed).abs() > 1e-9 * closed {
            return Err(Error::Verification(format!(
                "t = {}: permanent {} vs closed form {}",
                t, perm_a, closed
            )));
        }
        let gm_bits = -(log2_factorial(9) - 8.0 * log2(4.0) - log2(perm_a));
        Ok(ScanRow { t, perm_a, gm_bits })
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::BlochVector;

    #[test]
    fn hw_commutation_relation() {
        for d in [2usize, 3, 5, 7] {
            let hw = HwOperators::new(d);
            let zx = hw.z().mul(hw.x());
            let xz = hw.x().mul(hw.z());
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
            assert!(
                zx.sub(&xz.scaled(omega)).max_abs() < 1e-14,
                "ZX != wXZ for d = {}",
                d
            );
        }
    }

    #[test]
    fn displace_matches_matrix_product() {
        let d = 5;
        let hw = HwOperators::new(d);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = PureState::random(d, &mut rng);
        for (k1, k2) in [(1u32, 0u32), (0, 1), (3, 4), (2, 2)] {
            let fast = hw.displace(k1, k2, psi.vec());
            let mut op = CMat::identity(d);
            for _ in 0..k2 {
                op = hw.z().mul(&op);
            }
            for _ in 0..k1 {
                op = hw.x().mul(&op);
            }
            let slow = op.mul_vec(psi.vec());
            let diff: f64 = (0..d).map(|i| (fast.get(i) - slow.get(i)).norm()).sum();
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn qubit_mubs_are_pauli_bases() {
        let mubs = build_mubs(2, 3).unwrap();
        mubs.verify().unwrap();
        // basis 0 = Z, basis 1 = X, basis 2 = Y (as Bloch directions)
        let dirs: Vec<BlochVector> = mubs
            .bases()
            .iter()
            .map(|b| PureState::new(b[0].clone()).unwrap().bloch().unwrap())
            .collect();
        assert!(dirs[0].z.abs() > 1.0 - 1e-12);
        assert!(dirs[1].x.abs() > 1.0 - 1e-12);
        assert!(dirs[2].y.abs() > 1.0 - 1e-12);
    }

    #[test]
    fn mubs_verify_for_small_primes() {
        for d in [3usize, 5, 7] {
            let mubs = build_mubs(d, d + 1).unwrap();
            mubs.verify().unwrap();
        }
    }

    #[test]
    fn mubs_reject_composite_dimension() {
        assert!(matches!(build_mubs(4, 2), Err(Error::NonPrime(4))));
        assert!(matches!(build_mubs(6, 2), Err(Error::NonPrime(6))));
        assert!(build_mubs(3, 5).is_err());
    }

    #[test]
    fn mub_state_two_qubit_bases() {
        let mubs = build_mubs(2, 3).unwrap();
        let two = MubSet {
            dim: 2,
            bases: mubs.bases()[..2].to_vec(),
        };
        let res = mub_state_gm(&two, &[1, 1]).unwrap();
        // N = 4, perm = 3 (theta = pi/2 balanced case): G = 1 bit
        assert!((res.gm_bits - 1.0).abs() < 1e-9, "G = {}", res.gm_bits);
        assert!(res.saturated && res.additive);
        let b = res.witness.bloch().unwrap();
        assert!(b.y.abs() > 1.0 - 1e-6, "witness {:?}", b);
    }

    #[test]
    fn mub_state_complete_set_unsaturated() {
        let mubs = build_mubs(3, 4).unwrap();
        let res = mub_state_gm(&mubs, &[1, 1, 1, 1]).unwrap();
        assert!(!res.saturated);
    }

    #[test]
    fn mub_state_single_basis_is_dicke() {
        // one basis reduces to a generalized Dicke state: N = d, perm = 1,
        // bound = -log2(d!/d^d)
        let mubs = build_mubs(3, 1).unwrap();
        let res = mub_state_gm(&mubs, &[1]).unwrap();
        let expect = -(log2_factorial(3) - 3.0 * log2(3.0));
        assert!((res.gm_bits - expect).abs() < 1e-9);
        assert!(res.saturated);
    }

    #[test]
    fn qubit_fiducial_verifies_and_tetrahedron() {
        let sic = SicPovm::qubit().unwrap();
        assert!(verify_fiducial(
            &PureState::new(sic.fiducial().clone()).unwrap()
        ));
        assert!(verify_sic(sic.kets()));
        // four Bloch vectors with pairwise dot -1/3
        let blochs: Vec<BlochVector> = sic
            .kets()
            .iter()
            .map(|k| PureState::new(k.clone()).unwrap().bloch().unwrap())
            .collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!((blochs[i].dot(&blochs[j]) + 1.0 / 3.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn basis_state_is_not_fiducial() {
        let e0 = PureState::new(CVec::basis(2, 0)).unwrap();
        assert!(!verify_fiducial(&e0));
        assert!(hw_orbit(&e0).is_err());
        let e0_d3 = PureState::new(CVec::basis(3, 0)).unwrap();
        assert!(!verify_fiducial(&e0_d3));
    }

    #[test]
    fn repeated_basis_is_not_sic() {
        let mut kets = Vec::new();
        for _ in 0..2 {
            for k in 0..2 {
                kets.push(CVec::basis(2, k));
            }
        }
        assert!(!verify_sic(&kets));
    }

    #[test]
    fn qutrit_family_fiducials() {
        for t in [0.0, std::f64::consts::PI / 7.0, std::f64::consts::FRAC_PI_3] {
            let fid = PureState::new(SicPovm::qutrit(t).unwrap().fiducial().clone()).unwrap();
            assert!(verify_fiducial(&fid), "t = {}", t);
        }
        assert!(verify_sic(
            SicPovm::qutrit(std::f64::consts::PI / 5.0).unwrap().kets()
        ));
    }

    #[test]
    fn two_design_sums() {
        assert!(two_design_check(&SicPovm::qubit().unwrap(), 100, 0));
        assert!(two_design_check(&SicPovm::qutrit(0.4).unwrap(), 50, 0));
        // phi = psi_1 itself: 1 + (d^2-1)/(d+1)^2 = 2d/(d+1)
        for d in [2.0f64, 3.0] {
            let lhs = 1.0 + (d * d - 1.0) / (d + 1.0) / (d + 1.0);
            assert!((lhs - 2.0 * d / (d + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn sic_gm_qubit_constants() {
        let res = sic_state_gm(&SicPovm::qubit().unwrap()).unwrap();
        assert!((res.lambda_sq - 1.0 / 3.0).abs() < 1e-9);
        assert!((res.gm_bits - log2(3.0)).abs() < 1e-9);
        assert!(!res.saturated);
        assert!(!res.additive);
        // witness coincides with a POVM ket
        let sic = SicPovm::qubit().unwrap();
        let best = sic
            .kets()
            .iter()
            .map(|k| {
                res.witness
                    .fidelity(&PureState::new(k.clone()).unwrap())
                    .unwrap()
            })
            .fold(0.0, f64::max);
        assert!(best > 1.0 - 1e-7, "witness fidelity {}", best);
    }

    #[test]
    fn sic_gm_qutrit_endpoints() {
        let res = sic_state_gm(&SicPovm::qutrit(0.0).unwrap()).unwrap();
        assert!((res.gm_bits - log2(64.0 / 7.0)).abs() < 1e-9);
        let res = sic_state_gm(&SicPovm::qutrit(std::f64::consts::FRAC_PI_3).unwrap()).unwrap();
        assert!((res.gm_bits - log2(992.0 / 105.0)).abs() < 1e-9);
    }

    #[test]
    fn scan_values_and_extremes() {
        let grid = sic_scan_grid(121);
        assert_eq!(grid.len(), 121);
        let rows = sic_scan_d3(&grid).unwrap();
        assert!((rows[0].perm_a - 50.625).abs() < 1e-9);
        // t = pi/9 sits at index 40 on the 121-point grid
        assert!((rows[40].t - std::f64::consts::PI / 9.0).abs() < 1e-12);
        assert!((rows[40].perm_a - 27.0 / 32.0 * 62.0).abs() < 1e-9);
        let g0 = rows[0].gm_bits;
        let gmax = rows.last().unwrap().gm_bits;
        for row in &rows {
            assert!(row.gm_bits >= g0 - 1e-12);
            assert!(row.gm_bits <= gmax + 1e-12);
        }
        // orbit equivalence t = 2pi/9 vs t = 0 (index 80)
        assert!((rows[80].gm_bits - g0).abs() < 1e-10);
    }

    #[test]
    fn scan_two_points() {
        let rows = sic_scan_d3(&sic_scan_grid(2)).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].t - 0.0).abs() < 1e-15);
        assert!((rows[1].t - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
    }
}
