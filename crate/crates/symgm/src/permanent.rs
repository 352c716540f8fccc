//! Matrix permanents.
//!
//! [`permanent_ryser`] is the exact inclusion–exclusion evaluation with
//! Gray-code row-sum updates, O(2^n n). The subset range splits into fixed
//! chunks, so [`permanent_ryser_par`] distributes chunks over rayon and
//! reduces them in index order; sequential and parallel builds agree up to
//! reassociation across the (fixed) chunk boundaries.
//!
//! [`permanent_dicke`] evaluates the permanent of the Gram matrix of a
//! two-basis qubit multiset in polynomial time through a constrained
//! quadruple-multinomial sum; the generic Ryser routine doubles as its
//! oracle in the tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{CMat, CVec};
use crate::symmetric::KetMultiset;

/// Largest matrix size accepted by the exact permanent.
pub const RYSER_MAX_N: usize = 30;

const PAR_THRESHOLD: usize = 14;
const CHUNK_BITS: u64 = 16;

/// Gram matrix of a ket multiset, expanded with multiplicity.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    mat: CMat,
    source: KetMultiset,
}

impl GramMatrix {
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn source(&self) -> &KetMultiset {
        &self.source
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    /// Permanent of the Gram matrix as a real number.
    ///
    /// Gram matrices are positive semidefinite, so the permanent is real and
    /// nonnegative; this asserts both within `1e-9` and strips the imaginary
    /// part.
    pub fn permanent(&self) -> Result<f64> {
        let p = permanent_auto(&self.mat)?;
        let scale = p.norm().max(1.0);
        if p.im.abs() > 1e-9 * scale || p.re < -1e-9 * scale {
            return Err(Error::Invalid(format!(
                "Gram permanent is not real nonnegative: {}",
                p
            )));
        }
        Ok(p.re.max(0.0))
    }
}

/// Assemble the Gram matrix `A_jk = <a_j|a_k>` of the expanded ket list.
pub fn gram(ms: &KetMultiset) -> GramMatrix {
    let expanded = ms.expanded();
    let n = expanded.len();
    let mut mat = CMat::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let v = expanded[j].inner(expanded[k]).expect("equal dims");
            mat.set(j, k, v);
            mat.set(k, j, v.conj());
        }
    }
    GramMatrix {
        mat,
        source: ms.clone(),
    }
}

/// Ryser term sum over the Gray-code positions `k_lo..k_hi` (1-based subsets).
///
/// Initializes the row sums for the subset at `k_lo` directly, then walks the
/// Gray sequence. Cost O((k_hi - k_lo) n + n^2).
fn ryser_range(m: &CMat, k_lo: u64, k_hi: u64) -> Complex64 {
    let n = m.rows();
    let g0 = k_lo ^ (k_lo >> 1);
    let mut sums = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        if g0 >> j & 1 == 1 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += m.get(i, j);
            }
        }
    }
    let term = |subset: u64, sums: &[Complex64]| -> Complex64 {
        let prod: Complex64 = sums.iter().product();
        if (n as u32 - subset.count_ones()) % 2 == 1 {
            -prod
        } else {
            prod
        }
    };
    let mut acc = term(g0, &sums);
    let mut gray = g0;
    for k in (k_lo + 1)..k_hi {
        let j = k.trailing_zeros() as usize;
        let bit = 1u64 << j;
        gray ^= bit;
        if gray & bit != 0 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += m.get(i, j);
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= m.get(i, j);
            }
        }
        acc += term(gray, &sums);
    }
    acc
}

fn check_ryser_input(m: &CMat) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if n > RYSER_MAX_N {
        return Err(Error::PermanentTooLarge(n, RYSER_MAX_N));
    }
    Ok(n)
}

/// Exact permanent by Ryser's formula, sequential.
pub fn permanent_ryser(m: &CMat) -> Result<Complex64> {
    let n = check_ryser_input(m)?;
    Ok(ryser_range(m, 1, 1u64 << n))
}

/// Exact permanent by Ryser's formula, chunked over the rayon pool.
#[cfg(feature = "parallel")]
pub fn permanent_ryser_par(m: &CMat) -> Result<Complex64> {
    let n = check_ryser_input(m)?;
    let total = (1u64 << n) - 1;
    let chunk = 1u64 << CHUNK_BITS;
    let chunks = total.div_ceil(chunk) as usize;
    let parts = exec::map_indexed(chunks, |c| {
        let k_lo = 1 + c as u64 * chunk;
        let k_hi = (k_lo + chunk).min(1u64 << n);
        ryser_range(m, k_lo, k_hi)
    });
    Ok(parts.into_iter().sum())
}

/// Pick the parallel kernel when it is available and the matrix is large
/// enough to amortize the chunk setup.
pub(crate) fn permanent_auto(m: &CMat) -> Result<Complex64> {
    #[cfg(feature = "parallel")]
    {
        if m.rows() >= PAR_THRESHOLD && m.is_square() {
            return permanent_ryser_par(m);
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = PAR_THRESHOLD;
        let _ = CHUNK_BITS;
        let _ = exec::map_indexed(0, |_| ());
    }
    permanent_ryser(m)
}

/// Occupation numbers of a two-basis qubit multiset: `n_jk` copies of the
/// basis-`j` ket `k`, where basis 0 is `{|0>, |1>}` and basis 1 is the
/// eigenbasis of `sin(theta) x + cos(theta) z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeCounts {
    pub n00: u32,
    pub n01: u32,
    pub n10: u32,
    pub n11: u32,
    pub theta: f64,
}

impl DickeCounts {
    pub fn new(n00: u32, n01: u32, n10: u32, n11: u32, theta: f64) -> Result<Self> {
        if n00 + n01 + n10 + n11 == 0 {
            return Err(Error::Invalid("all counts are zero".into()));
        }
        Ok(DickeCounts {
            n00,
            n01,
            n10,
            n11,
            theta,
        })
    }

    pub fn total(&self) -> u32 {
        self.n00 + self.n01 + self.n10 + self.n11
    }

    /// The four kets `|0>, |1>, |theta+>, |theta->` with these multiplicities.
    pub fn multiset(&self) -> Result<KetMultiset> {
        let half = self.theta / 2.0;
        let zero = CVec::basis(2, 0);
        let one = CVec::basis(2, 1);
        let plus = CVec::from_reals(&[half.cos(), half.sin()]);
        let minus = CVec::from_reals(&[half.sin(), -half.cos()]);
        let mut kets = Vec::new();
        let mut mults = Vec::new();
        for (ket, n) in [
            (zero, self.n00),
            (one, self.n01),
            (plus, self.n10),
            (minus, self.n11),
        ] {
            if n > 0 {
                kets.push(ket);
                mults.push(n);
            }
        }
        KetMultiset::new(kets, mults)
    }
}

const EXACT_MULTINOMIAL_MAX: u32 = 20;

fn ln_factorial(n: u32) -> f64 {
    (1..=n as u64).map(|k| (k as f64).ln()).sum()
}

/// Multinomial coefficient `n! / (p0! p1! p2!)` with `p0+p1+p2 = n`.
///
/// Exact integer arithmetic up to n = 20, log-factorials above.
fn multinomial(n: u32, parts: [u32; 3]) -> f64 {
    debug_assert_eq!(parts.iter().sum::<u32>(), n);
    if n <= EXACT_MULTINOMIAL_MAX {
        let mut num: u128 = 1;
        let mut k = 0u128;
        for &p in &parts {
            for i in 1..=p as u128 {
                k += 1;
                num = num * k / i; // binomial prefix products stay integral
            }
        }
        num as f64
    } else {
        (ln_factorial(n) - parts.iter().map(|&p| ln_factorial(p)).sum::<f64>()).exp()
    }
}

/// Permanent of the two-basis Gram matrix in polynomial time.
///
/// Constrained sum over nonnegative `{a, b, c, f, g}`:
/// `a+b <= n00`, `c+f <= n01`, `a+c <= n10`, `b+f <= n11`,
/// `g <= a+b`, `g <= a+c`, `f+g >= a`. Infeasible constraint sets
/// contribute nothing (empty sum = 0).
pub fn permanent_dicke(counts: &DickeCounts) -> f64 {
    let DickeCounts {
        n00,
        n01,
        n10,
        n11,
        theta,
    } = *counts;
    let cos_h = (theta / 2.0).cos();
    let sin_h = (theta / 2.0).sin();
    let prefactor = factorial(n00) * factorial(n01) * factorial(n10) * factorial(n11);
    let mut total = 0.0f64;
    for a in 0..=n00.min(n10) {
        for b in 0..=(n00 - a).min(n11) {
            for c in 0..=n01.min(n10 - a) {
                for f in 0..=(n01 - c).min(n11 - b) {
                    let g_lo = a.saturating_sub(f);
                    let g_hi = (a + b).min(a + c);
                    for g in g_lo..=g_hi {
                        let sign = if (a + g) % 2 == 0 { 1.0 } else { -1.0 };
                        let weight = cos_h.powi(2 * (f + g) as i32)
                            * sin_h.powi(2 * (a + b + c) as i32 - 2 * g as i32);
                        let m = multinomial(n00, [a, b, n00 - a - b])
                            * multinomial(n01, [c, f, n01 - c - f])
                            * multinomial(n10, [g, a + c - g, n10 - a - c])
                            * multinomial(n11, [a + b - g, f + g - a, n11 - b - f]);
                        total += sign * weight * m;
                    }
                }
            }
        }
    }
    prefactor * total
}

/// `n!` as f64: exact integer arithmetic up to n = 25, log-factorials above.
pub fn factorial(n: u32) -> f64 {
    if n <= 25 {
        (1..=n as u128).product::<u128>() as f64
    } else {
        ln_factorial(n).exp()
    }
}
