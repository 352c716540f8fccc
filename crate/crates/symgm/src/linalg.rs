//! Minimal dense complex linear algebra for small Hilbert spaces.
//!
//! Vectors and matrices own their storage (`Vec<Complex64>`, row-major) and
//! are immutable in normal use; everything here is sized for dimensions up to
//! a few dozen. The Hermitian eigensolver is a cyclic Jacobi sweep, which is
//! plenty at these sizes and has no dependencies.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::tol::NORM_TOL;

/// Dense complex vector (a ket).
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    data: Vec<Complex64>,
}

impl CVec {
    pub fn new(data: Vec<Complex64>) -> Self {
        assert!(!data.is_empty(), "empty vector");
        assert!(
            data.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "non-finite vector entry"
        );
        CVec { data }
    }

    pub fn zeros(dim: usize) -> Self {
        CVec {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis ket `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut v = Self::zeros(dim);
        v.data[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_reals(data: &[f64]) -> Self {
        CVec::new(data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVec) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> CVec {
        CVec::new(self.data.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim());
        CVec::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn axpy(&self, s: Complex64, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim());
        CVec::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// Rescale to unit norm.
    pub fn normalized(&self) -> Result<CVec> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::NotNormalized(n));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Fix the global phase: first entry with modulus above `1e-12` is made
    /// real nonnegative.
    pub fn canonicalized(&self) -> CVec {
        for z in &self.data {
            let m = z.norm();
            if m > 1e-12 {
                let phase = z.conj() / m;
                return self.scaled(phase);
            }
        }
        self.clone()
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    data: Vec<Complex64>,
    rows: usize,
    cols: usize,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        CMat {
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
            rows,
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        CMat {
            data: rows.into_iter().flatten().collect(),
            rows: r,
            cols: c,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> CMat {
        CMat {
            data: self.data.iter().map(|z| z * s).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Accumulate the rank-one update `w |v><v|`.
    pub fn add_outer(&mut self, v: &CVec, w: f64) {
        assert!(self.is_square() && self.rows == v.dim());
        for i in 0..self.rows {
            for j in 0..self.cols {
                let upd = v.get(i) * v.get(j).conj() * w;
                let cur = self.get(i, j);
                self.set(i, j, cur + upd);
            }
        }
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v.get(j);
            }
            out[i] = acc;
        }
        CVec::new(out)
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order and the matching orthonormal
    /// eigenvectors. Errors if the input is not square or departs from
    /// Hermitian symmetry by more than `1e-9` relative to the largest entry.
    pub fn hermitian_eig(&self) -> Result<(Vec<f64>, Vec<CVec>)> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let scale = self.max_abs().max(1.0);
        let defect = self.hermitian_defect();
        if defect > 1e-9 * scale {
            return Err(Error::NotHermitian(defect));
        }
        let n = self.rows;
        let mut a = self.clone();
        // force exact Hermitian symmetry on the working copy
        for i in 0..n {
            let d = a.get(i, i);
            a.set(i, i, Complex64::new(d.re, 0.0));
            for j in (i + 1)..n {
                let m = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
                a.set(i, j, m);
                a.set(j, i, m.conj());
            }
        }
        let mut v = CMat::identity(n);
        let frob = a.frobenius_norm().max(1e-300);
        let target = 1e-14 * frob;
        for _sweep in 0..200 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if (2.0 * off).sqrt() <= target {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let r = apq.norm();
                    if r <= 1e-300 {
                        continue;
                    }
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let phase = apq / r; // e^{i phi}
                    let cot2 = (app - aqq) / (2.0 * r);
                    let t = if cot2 == 0.0 {
                        1.0
                    } else {
                        cot2.signum() / (cot2.abs() + (cot2 * cot2 + 1.0).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let se_pos = phase * s; //  s e^{i phi}
                    let se_neg = phase.conj() * s; //  s e^{-i phi}

                    for k in 0..n {
                        if k == p || k == q {
                            continue;
                        }
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        let new_kp = akp * c + akq * se_neg;
                        let new_kq = akq * c - akp * se_pos;
                        a.set(k, p, new_kp);
                        a.set(k, q, new_kq);
                        a.set(p, k, new_kp.conj());
                        a.set(q, k, new_kq.conj());
                    }
                    let new_pp = app * c * c + 2.0 * r * s * c + aqq * s * s;
                    let new_qq = app * s * s - 2.0 * r * s * c + aqq * c * c;
                    a.set(p, p, Complex64::new(new_pp, 0.0));
                    a.set(q, q, Complex64::new(new_qq, 0.0));
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));

                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, vkp * c + vkq * se_neg);
                        v.set(k, q, vkq * c - vkp * se_pos);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
        let eigenvectors: Vec<CVec> = order
            .iter()
            .map(|&j| CVec::new((0..n).map(|i| v.get(i, j)).collect()))
            .collect();
        Ok((eigenvalues, eigenvectors))
    }
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vec: CVec,
}

impl PureState {
    /// Wrap an already-normalized vector; errors if the norm is off by more
    /// than `1e-12`.
    pub fn new(vec: CVec) -> Result<Self> {
        let n = vec.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(PureState { vec })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalize(vec: &CVec) -> Result<Self> {
        Ok(PureState {
            vec: vec.normalized()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn vec(&self) -> &CVec {
        &self.vec
    }

    /// Squared overlap `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.vec.inner(&other.vec)?.norm_sqr())
    }

    pub fn canonicalized(&self) -> PureState {
        PureState {
            vec: self.vec.canonicalized(),
        }
    }

    /// Haar-like random state: i.i.d. complex normal entries, normalized.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> PureState {
        loop {
            let mut data = Vec::with_capacity(dim);
            for _ in 0..dim {
                let (x, y) = normal_pair(rng);
                data.push(Complex64::new(x, y));
            }
            let v = CVec::new(data);
            if v.norm() > 1e-6 {
                return PureState {
                    vec: v.normalized().unwrap(),
                };
            }
        }
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::DimMismatch(self.dim(), 2));
        }
        let a0 = self.vec.get(0);
        let a1 = self.vec.get(1);
        let cross = a0.conj() * a1;
        Ok(BlochVector {
            x: 2.0 * cross.re,
            y: 2.0 * cross.im,
            z: a0.norm_sqr() - a1.norm_sqr(),
        })
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.rows(), mat.cols()));
        }
        let defect = mat.hermitian_defect();
        if defect > NORM_TOL * mat.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Invalid(format!("trace {} is not 1", tr)));
        }
        let (evals, _) = mat.hermitian_eig()?;
        if evals.iter().any(|&e| e < -1e-10) {
            return Err(Error::Invalid(format!(
                "not positive semidefinite: min eigenvalue {:.3e}",
                evals[0]
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn pure(state: &PureState) -> Self {
        let mut m = CMat::zeros(state.dim(), state.dim());
        m.add_outer(state.vec(), 1.0);
        DensityMatrix { mat: m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: CMat::identity(dim).scaled(Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.mat.get(i, j) * self.mat.get(j, i)).re;
            }
        }
        acc
    }

    /// `<psi|rho|psi>` for an arbitrary (possibly subnormalized) ket.
    pub fn expectation(&self, psi: &CVec) -> Result<f64> {
        Ok(psi.inner(&self.mat.mul_vec(psi))?.re)
    }
}

/// Real three-vector inside the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> BlochVector {
        BlochVector::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn add(&self, other: &BlochVector) -> BlochVector {
        BlochVector::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn cross(&self, other: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn normalized(&self) -> Option<BlochVector> {
        let n = self.norm();
        if n < 1e-14 {
            None
        } else {
            Some(self.scaled(1.0 / n))
        }
    }

    /// Qubit state with this unit Bloch vector; errors if `| |r| - 1 |` exceeds `1e-10`.
    pub fn to_state(&self) -> Result<PureState> {
        let n = self.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnitBloch(n));
        }
        let theta = (self.z / n).clamp(-1.0, 1.0).acos();
        let phi = self.y.atan2(self.x);
        let a0 = Complex64::new((theta / 2.0).cos(), 0.0);
        let a1 = Complex64::from_polar((theta / 2.0).sin(), phi);
        PureState::normalize(&CVec::new(vec![a0, a1]))
    }
}

/// One standard-normal pair via Box–Muller.
pub(crate) fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let a = 2.0 * std::f64::consts::PI * u2;
    (r * a.cos(), r * a.sin())
}

/// Uniform random point on the unit sphere.
pub(crate) fn random_unit_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    loop {
        let (x, y) = normal_pair(rng);
        let (z, _) = normal_pair(rng);
        if let Some(u) = BlochVector::new(x, y, z).normalized() {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::EIG_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_on_basis_kets() {
        let e0 = CVec::basis(3, 0);
        let e1 = CVec::basis(3, 1);
        assert_eq!(e0.inner(&e0).unwrap(), c(1.0, 0.0));
        assert_eq!(e0.inner(&e1).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_with_rotated_ket() {
        // <0|theta+> = cos(theta/2); at theta = pi/2 this is 1/sqrt(2)
        let theta = std::f64::consts::FRAC_PI_2;
        let plus = CVec::from_reals(&[(theta / 2.0).cos(), (theta / 2.0).sin()]);
        let e0 = CVec::basis(2, 0);
        let got = e0.inner(&plus).unwrap();
        assert!((got.re - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn inner_conjugate_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = PureState::random(4, &mut rng);
            let b = PureState::random(4, &mut rng);
            let ab = a.vec().inner(b.vec()).unwrap();
            let ba = b.vec().inner(a.vec()).unwrap();
            assert!((ab - ba.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn inner_dim_mismatch_errors() {
        let a = CVec::basis(2, 0);
        let b = CVec::basis(3, 0);
        assert!(matches!(a.inner(&b), Err(Error::DimMismatch(2, 3))));
    }

    #[test]
    fn eig_identity() {
        let (evals, _) = CMat::identity(3).hermitian_eig().unwrap();
        for e in evals {
            assert!((e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_sigma_z() {
        let mut sz = CMat::zeros(2, 2);
        sz.set(0, 0, c(1.0, 0.0));
        sz.set(1, 1, c(-1.0, 0.0));
        let (evals, vecs) = sz.hermitian_eig().unwrap();
        assert!((evals[0] + 1.0).abs() < 1e-14);
        assert!((evals[1] - 1.0).abs() < 1e-14);
        // ascending order puts |1> first
        assert!(vecs[0].get(1).norm() > 0.999);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 5, 8] {
            let mut m = CMat::zeros(n, n);
            for i in 0..n {
                let (x, _) = normal_pair(&mut rng);
                m.set(i, i, c(x, 0.0));
                for j in (i + 1)..n {
                    let (x, y) = normal_pair(&mut rng);
                    m.set(i, j, c(x, y));
                    m.set(j, i, c(x, -y));
                }
            }
            let (evals, vecs) = m.hermitian_eig().unwrap();
            // residual A v = lambda v
            for (lam, v) in evals.iter().zip(&vecs) {
                let av = m.mul_vec(v);
                let lv = v.scaled(c(*lam, 0.0));
                let res: f64 = (0..n).map(|i| (av.get(i) - lv.get(i)).norm_sqr()).sum();
                assert!(res.sqrt() < EIG_TOL, "residual {}", res.sqrt());
            }
            // orthonormality
            for i in 0..n {
                for j in 0..n {
                    let ip = vecs[i].inner(&vecs[j]).unwrap();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip.norm() - expect).abs() < 1e-10);
                }
            }
            // reconstruction sum lambda_i v_i v_i^dag
            let mut rec = CMat::zeros(n, n);
            for (lam, v) in evals.iter().zip(&vecs) {
                rec.add_outer(v, *lam);
            }
            assert!(rec.sub(&m).frobenius_norm() < EIG_TOL);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = CMat::zeros(2, 2);
        m.set(0, 1, c(1.0, 0.0));
        assert!(matches!(m.hermitian_eig(), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn bloch_poles_and_tilt() {
        let up = BlochVector::new(0.0, 0.0, 1.0).to_state().unwrap();
        assert!(up.fidelity(&PureState::new(CVec::basis(2, 0)).unwrap()).unwrap() > 1.0 - 1e-14);

        let theta = 0.7f64;
        let tilted = BlochVector::new(theta.sin(), 0.0, theta.cos())
            .to_state()
            .unwrap();
        let expect = PureState::normalize(&CVec::from_reals(&[
            (theta / 2.0).cos(),
            (theta / 2.0).sin(),
        ]))
        .unwrap();
        assert!(tilted.fidelity(&expect).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn bloch_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let r = random_unit_bloch(&mut rng);
            let s = r.to_state().unwrap();
            let back = s.bloch().unwrap();
            assert!((back.x - r.x).abs() < 1e-12);
            assert!((back.y - r.y).abs() < 1e-12);
            assert!((back.z - r.z).abs() < 1e-12);
            let again = back.to_state().unwrap();
            assert!(s.fidelity(&again).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn bloch_rejects_non_unit() {
        assert!(BlochVector::new(0.0, 0.0, 0.5).to_state().is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMat::identity(2)).is_err()); // trace 2
        let ok = DensityMatrix::maximally_mixed(4);
        assert!((ok.purity() - 0.25).abs() < 1e-14);
        let s = PureState::new(CVec::basis(2, 0)).unwrap();
        assert!((DensityMatrix::pure(&s).purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn canonical_phase_makes_first_entry_real() {
        let v = CVec::new(vec![c(0.0, 0.6), c(0.8, 0.0)]).canonicalized();
        assert!(v.get(0).im.abs() < 1e-15 && v.get(0).re > 0.0);
    }
}
