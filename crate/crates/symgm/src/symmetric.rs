//! Symmetrized product states stored implicitly as ket multisets.
//!
//! A [`KetMultiset`] lists distinct (possibly subnormalized) kets with
//! positive multiplicities. Projecting the corresponding tensor product onto
//! the symmetric subspace and normalizing gives the [`SymmetricState`]; the
//! normalization constant is `sqrt(N!/perm(A))` with `A` the Gram matrix of
//! the expanded list. Product-state overlaps then come in closed form, so
//! nothing downstream ever needs the `d^N`-dimensional expansion — it exists
//! ([`dense_expand`]) only for verification at small sizes.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CVec, PureState};
use crate::permanent::{factorial, gram};

/// Distinct kets with multiplicities; the implicit description of a
/// symmetrized product state.
#[derive(Debug, Clone, PartialEq)]
pub struct KetMultiset {
    kets: Vec<CVec>,
    mults: Vec<u32>,
    dim: usize,
}

impl KetMultiset {
    /// Build a multiset, validating dimensions and norms and merging entries
    /// that are equal up to a global phase.
    pub fn new(kets: Vec<CVec>, mults: Vec<u32>) -> Result<Self> {
        if kets.is_empty() || kets.len() != mults.len() {
            return Err(Error::InvalidMultiset(format!(
                "{} kets vs {} multiplicities",
                kets.len(),
                mults.len()
            )));
        }
        if mults.iter().any(|&m| m == 0) {
            return Err(Error::InvalidMultiset("zero multiplicity".into()));
        }
        let dim = kets[0].dim();
        let mut merged_kets: Vec<CVec> = Vec::new();
        let mut merged_mults: Vec<u32> = Vec::new();
        for (ket, mult) in kets.into_iter().zip(mults) {
            if ket.dim() != dim {
                return Err(Error::DimMismatch(ket.dim(), dim));
            }
            let norm = ket.norm();
            if norm <= 0.0 || norm > 1.0 + 1e-12 {
                return Err(Error::InvalidMultiset(format!(
                    "ket norm {} outside (0, 1]",
                    norm
                )));
            }
            let mut absorbed = false;
            for (prev, pm) in merged_kets.iter().zip(merged_mults.iter_mut()) {
                let pn = prev.norm();
                // equal up to phase: saturated Cauchy-Schwarz with equal norms
                if (pn - norm).abs() <= 1e-12
                    && prev.inner(&ket)?.norm() >= pn * norm * (1.0 - 1e-12)
                {
                    *pm += mult;
                    absorbed = true;
                    break;
                }
            }
            if !absorbed {
                merged_kets.push(ket);
                merged_mults.push(mult);
            }
        }
        Ok(KetMultiset {
            kets: merged_kets,
            mults: merged_mults,
            dim,
        })
    }

    /// Multiset with every ket counted once.
    pub fn uniform(kets: Vec<CVec>) -> Result<Self> {
        let n = kets.len();
        Self::new(kets, vec![1; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kets(&self) -> &[CVec] {
        &self.kets
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn distinct(&self) -> usize {
        self.kets.len()
    }

    /// Total particle number `N`.
    pub fn total(&self) -> u32 {
        self.mults.iter().sum()
    }

    /// The kets repeated with multiplicity, in multiset order.
    pub fn expanded(&self) -> Vec<&CVec> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (ket, &m) in self.kets.iter().zip(&self.mults) {
            for _ in 0..m {
                out.push(ket);
            }
        }
        out
    }
}

/// Normalized symmetrization of a ket multiset.
#[derive(Debug, Clone)]
pub struct SymmetricState {
    ms: KetMultiset,
    norm_const: f64,
    perm_a: f64,
}

impl SymmetricState {
    pub fn multiset(&self) -> &KetMultiset {
        &self.ms
    }

    pub fn dim(&self) -> usize {
        self.ms.dim()
    }

    pub fn total(&self) -> u32 {
        self.ms.total()
    }

    /// Normalization constant `c = sqrt(N!/perm(A))`.
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// Permanent of the Gram matrix of the expanded multiset.
    pub fn perm_a(&self) -> f64 {
        self.perm_a
    }
}

/// Symmetrize and normalize a ket multiset.
pub fn build_symmetric(ms: KetMultiset) -> Result<SymmetricState> {
    let perm_a = gram(&ms).permanent()?;
    if perm_a <= 1e-300 {
        return Err(Error::InvalidMultiset(format!(
            "Gram permanent {} is numerically degenerate",
            perm_a
        )));
    }
    let n = ms.total();
    let norm_const = (factorial(n) / perm_a).sqrt();
    Ok(SymmetricState {
        ms,
        norm_const,
        perm_a,
    })
}

/// Squared overlap of the symmetric state with the product state
/// `|phi>^{tensor N}`:  `(N!/perm(A)) prod_j |<phi|psi_j>|^{2 n_j}`.
///
/// This equals the simultaneous-detection probability of outcome `phi` at
/// every site; maximizing it over `phi` gives the squared GM overlap.
pub fn product_overlap(s: &SymmetricState, phi: &PureState) -> Result<f64> {
    if phi.dim() != s.dim() {
        return Err(Error::DimMismatch(phi.dim(), s.dim()));
    }
    let mut prod = 1.0f64;
    for (ket, &m) in s.ms.kets().iter().zip(s.ms.mults()) {
        let q = phi.vec().inner(ket)?.norm_sqr();
        prod *= q.powi(m as i32);
    }
    Ok(factorial(s.total()) / s.perm_a * prod)
}

/// Overlap `<s1|s2>` of two symmetric states over the same party structure,
/// via the permanent of the cross Gram matrix.
pub fn symmetric_overlap(s1: &SymmetricState, s2: &SymmetricState) -> Result<Complex64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimMismatch(s1.dim(), s2.dim()));
    }
    if s1.total() != s2.total() {
        return Err(Error::DimMismatch(
            s1.total() as usize,
            s2.total() as usize,
        ));
    }
    let a = s1.ms.expanded();
    let b = s2.ms.expanded();
    let n = a.len();
    let mut cross = crate::linalg::CMat::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            cross.set(j, k, a[j].inner(b[k])?);
        }
    }
    let p = crate::permanent::permanent_auto(&cross)?;
    Ok(p * s1.norm_const * s2.norm_const / factorial(n as u32))
}

const DENSE_MAX: u64 = 1 << 20;

/// Expand to the full `d^N` tensor (party 0 = most significant index digit).
///
/// Amplitudes are computed once per sorted index multiset as a permanent of
/// the ket-component matrix, then scattered to all index orderings.
pub fn dense_expand(s: &SymmetricState) -> Result<CVec> {
    let d = s.dim() as u64;
    let n = s.total() as usize;
    let size = d
        .checked_pow(n as u32)
        .filter(|&sz| sz <= DENSE_MAX)
        .ok_or_else(|| Error::TooLarge(format!("d^N = {}^{} exceeds {}", d, n, DENSE_MAX)))?;
    let expanded = s.ms.expanded();
    let scale = s.norm_const / factorial(n as u32);

    // one amplitude per non-decreasing index tuple
    let mut amps: HashMap<Vec<u8>, Complex64> = HashMap::new();
    let mut key: Vec<u8> = vec![0; n];
    loop {
        let mut b = crate::linalg::CMat::zeros(n, n);
        for (row, &i) in key.iter().enumerate() {
            for (col, ket) in expanded.iter().enumerate() {
                b.set(row, col, ket.get(i as usize));
            }
        }
        let p = crate::permanent::permanent_auto(&b)?;
        amps.insert(key.clone(), p * scale);
        // bump the rightmost digit below d-1 and level everything after it
        match key.iter().rposition(|&x| (x as u64) < d - 1) {
            Some(pos) => {
                let v = key[pos] + 1;
                for slot in key.iter_mut().skip(pos) {
                    *slot = v;
                }
            }
            None => break,
        }
    }

    let mut data = vec![Complex64::new(0.0, 0.0); size as usize];
    let mut digits: Vec<u8> = vec![0; n];
    for (idx, slot) in data.iter_mut().enumerate() {
        let mut rem = idx as u64;
        for k in (0..n).rev() {
            digits[k] = (rem % d) as u8;
            rem /= d;
        }
        let mut sorted = digits.clone();
        sorted.sort_unstable();
        *slot = amps[&sorted];
    }
    Ok(CVec::new(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_multiset(rng: &mut ChaCha8Rng, dim: usize, max_n: u32) -> KetMultiset {
        let distinct = rng.gen_range(1..=3usize);
        let kets: Vec<CVec> = (0..distinct)
            .map(|_| PureState::random(dim, rng).vec().clone())
            .collect();
        let mut mults = vec![1u32; distinct];
        let mut total = distinct as u32;
        while total < max_n && rng.gen_bool(0.6) {
            let i = rng.gen_range(0..distinct);
            mults[i] += 1;
            total += 1;
        }
        KetMultiset::new(kets, mults).unwrap()
    }

    #[test]
    fn norm_const_examples() {
        let s = build_symmetric(KetMultiset::new(vec![CVec::basis(2, 0)], vec![3]).unwrap())
            .unwrap();
        assert!((s.norm_const() - 1.0).abs() < 1e-12);

        let s = build_symmetric(
            KetMultiset::new(vec![CVec::basis(2, 0), CVec::basis(2, 1)], vec![1, 1]).unwrap(),
        )
        .unwrap();
        assert!((s.norm_const() - 2.0f64.sqrt()).abs() < 1e-12);

        let sic = crate::povm::SicPovm::qubit().unwrap();
        let s = build_symmetric(KetMultiset::uniform(sic.kets().to_vec()).unwrap()).unwrap();
        assert!((s.perm_a() - 8.0 / 3.0).abs() < 1e-12);
        assert!((s.norm_const() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn phase_equal_kets_are_merged() {
        let a = CVec::basis(2, 0);
        let b = a.scaled(Complex64::from_polar(1.0, 1.2));
        let ms = KetMultiset::new(vec![a, b], vec![1, 2]).unwrap();
        assert_eq!(ms.distinct(), 1);
        assert_eq!(ms.mults(), &[3]);
    }

    #[test]
    fn multiset_rejects_bad_input() {
        assert!(KetMultiset::new(vec![], vec![]).is_err());
        assert!(KetMultiset::new(vec![CVec::basis(2, 0)], vec![0]).is_err());
        assert!(KetMultiset::new(vec![CVec::zeros(2)], vec![1]).is_err());
        let oversized = CVec::from_reals(&[2.0, 0.0]);
        assert!(KetMultiset::new(vec![oversized], vec![1]).is_err());
    }

    #[test]
    fn dense_bell_and_w() {
        let bell = dense_expand(
            &build_symmetric(
                KetMultiset::new(vec![CVec::basis(2, 0), CVec::basis(2, 1)], vec![1, 1]).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((bell.get(0) - c(0.0, 0.0)).norm() < 1e-12);
        assert!((bell.get(1) - c(r, 0.0)).norm() < 1e-12);
        assert!((bell.get(2) - c(r, 0.0)).norm() < 1e-12);
        assert!((bell.get(3) - c(0.0, 0.0)).norm() < 1e-12);

        let w = dense_expand(
            &build_symmetric(
                KetMultiset::new(vec![CVec::basis(2, 0), CVec::basis(2, 1)], vec![2, 1]).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let r3 = 1.0 / 3.0f64.sqrt();
        for (idx, expect) in [
            (0, 0.0),
            (1, r3),
            (2, r3),
            (3, 0.0),
            (4, r3),
            (5, 0.0),
            (6, 0.0),
            (7, 0.0),
        ] {
            assert!((w.get(idx) - c(expect, 0.0)).norm() < 1e-12, "idx {}", idx);
        }
    }

    #[test]
    fn dense_is_normalized_and_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let ms = random_multiset(&mut rng, 2, 5);
            let s = build_symmetric(ms).unwrap();
            let t = dense_expand(&s).unwrap();
            assert!((t.norm() - 1.0).abs() < 1e-8);

            let d = s.dim();
            let n = s.total() as usize;
            // swapping any two parties leaves the tensor unchanged
            let size = d.pow(n as u32);
            for p in 0..n {
                for q in (p + 1)..n {
                    for idx in 0..size {
                        let mut digits = vec![0usize; n];
                        let mut rem = idx;
                        for k in (0..n).rev() {
                            digits[k] = rem % d;
                            rem /= d;
                        }
                        digits.swap(p, q);
                        let mut swapped = 0usize;
                        for k in 0..n {
                            swapped = swapped * d + digits[k];
                        }
                        assert_eq!(t.get(idx), t.get(swapped));
                    }
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let s = build_symmetric(KetMultiset::new(vec![CVec::basis(2, 0)], vec![4]).unwrap())
            .unwrap();
        let phi = PureState::new(CVec::basis(2, 0)).unwrap();
        assert!((product_overlap(&s, &phi).unwrap() - 1.0).abs() < 1e-12);

        // W state against phi = sqrt(2/3)|0> + sqrt(1/3)|1>
        let w = build_symmetric(
            KetMultiset::new(vec![CVec::basis(2, 0), CVec::basis(2, 1)], vec![2, 1]).unwrap(),
        )
        .unwrap();
        let phi =
            PureState::normalize(&CVec::from_reals(&[(2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()]))
                .unwrap();
        assert!((product_overlap(&w, &phi).unwrap() - 4.0 / 9.0).abs() < 1e-12);

        // qubit SIC state against one of its own kets
        let sic = crate::povm::SicPovm::qubit().unwrap();
        let s = build_symmetric(KetMultiset::uniform(sic.kets().to_vec()).unwrap()).unwrap();
        let phi = PureState::normalize(&sic.kets()[1]).unwrap();
        assert!((product_overlap(&s, &phi).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn product_overlap_matches_dense_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..5 {
            let ms = random_multiset(&mut rng, 2, 4);
            let s = build_symmetric(ms).unwrap();
            let t = dense_expand(&s).unwrap();
            let d = s.dim();
            let n = s.total() as usize;
            for _ in 0..50 {
                let phi = PureState::random(d, &mut rng);
                // <phi^{ox N} | T>
                let mut acc = c(0.0, 0.0);
                for idx in 0..t.dim() {
                    let mut rem = idx;
                    let mut coef = c(1.0, 0.0);
                    for _ in 0..n {
                        let digit = rem % d;
                        rem /= d;
                        coef *= phi.vec().get(digit).conj();
                    }
                    acc += coef * t.get(idx);
                }
                let dense = acc.norm_sqr();
                let closed = product_overlap(&s, &phi).unwrap();
                assert!((dense - closed).abs() < 1e-9, "{} vs {}", dense, closed);
            }
        }
    }

    #[test]
    fn product_overlap_stays_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let ms = random_multiset(&mut rng, 3, 5);
            let s = build_symmetric(ms).unwrap();
            for _ in 0..1000 {
                let phi = PureState::random(3, &mut rng);
                let v = product_overlap(&s, &phi).unwrap();
                assert!((-1e-12..=1.0 + 1e-9).contains(&v), "overlap {}", v);
            }
        }
    }

    #[test]
    fn symmetric_overlap_normalization_and_cross() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let s = build_symmetric(random_multiset(&mut rng, 2, 5)).unwrap();
            let self_ov = symmetric_overlap(&s, &s).unwrap();
            assert!((self_ov.re - 1.0).abs() < 1e-9 && self_ov.im.abs() < 1e-10);
        }
        // cross overlap agrees with the dense inner product
        let s1 = build_symmetric(random_multiset(&mut rng, 2, 4)).unwrap();
        let mut s2 = build_symmetric(random_multiset(&mut rng, 2, 4)).unwrap();
        while s2.total() != s1.total() {
            s2 = build_symmetric(random_multiset(&mut rng, 2, 4)).unwrap();
        }
        let d1 = dense_expand(&s1).unwrap();
        let d2 = dense_expand(&s2).unwrap();
        let dense = d1.inner(&d2).unwrap();
        let closed = symmetric_overlap(&s1, &s2).unwrap();
        assert!((dense - closed).norm() < 1e-9);
    }

    #[test]
    fn dense_expand_size_guard() {
        let s = build_symmetric(KetMultiset::new(vec![CVec::basis(2, 0)], vec![21]).unwrap())
            .unwrap();
        assert!(matches!(dense_expand(&s), Err(Error::TooLarge(_))));
    }
}
