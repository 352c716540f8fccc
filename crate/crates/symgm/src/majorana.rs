//! Majorana representation of symmetric multiqubit states.
//!
//! A pure symmetric N-qubit state factors (uniquely up to permutation and
//! phases) into N single-qubit kets; their Bloch vectors are the Majorana
//! points. For a multiset state with kets `(alpha_j, beta_j)` the points are
//! the roots of `prod_j (alpha_j z - beta_j)^{n_j}` pulled back to the
//! sphere by inverse stereographic projection from the south pole; a degree
//! deficiency of k puts k points at the south pole itself.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{random_unit_bloch, BlochVector, CVec};
use crate::roots::all_roots;
use crate::symmetric::{build_symmetric, symmetric_overlap, KetMultiset, SymmetricState};
use crate::tol::HALF_SPHERE_TOL;

/// Majorana points of a symmetric qubit state.
#[derive(Debug, Clone)]
pub struct MajoranaPoints {
    points: Vec<BlochVector>,
    /// Fidelity between the source state and the state rebuilt from the
    /// points; at least `1 - 1e-7` by construction.
    round_trip_fidelity: f64,
}

impl MajoranaPoints {
    pub fn points(&self) -> &[BlochVector] {
        &self.points
    }

    pub fn round_trip_fidelity(&self) -> f64 {
        self.round_trip_fidelity
    }

    /// Rebuild the symmetric state from the points.
    pub fn resymmetrize(&self) -> Result<SymmetricState> {
        let kets: Result<Vec<CVec>> = self
            .points
            .iter()
            .map(|p| Ok(p.to_state()?.vec().clone()))
            .collect();
        build_symmetric(KetMultiset::uniform(kets?)?)
    }
}

/// Leading coefficients at or below this fraction of the largest coefficient
/// count as a degree deficiency (south-pole points).
const DEFICIENCY_TOL: f64 = 1e-13;

/// Extract the N Majorana points of a symmetric qubit state.
pub fn majorana_extract(s: &SymmetricState) -> Result<MajoranaPoints> {
    if s.dim() != 2 {
        return Err(Error::DimMismatch(s.dim(), 2));
    }
    let n = s.total() as usize;
    // expand prod_j (alpha_j z - beta_j)^{n_j}, ascending coefficients
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for (ket, &mult) in s.multiset().kets().iter().zip(s.multiset().mults()) {
        let alpha = ket.get(0);
        let beta = ket.get(1);
        for _ in 0..mult {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k] -= c * beta;
                next[k + 1] += c * alpha;
            }
            coeffs = next;
        }
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut points = Vec::with_capacity(n);
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= DEFICIENCY_TOL * scale {
        coeffs.pop();
        points.push(BlochVector::new(0.0, 0.0, -1.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_6a6f);
    for z in all_roots(&coeffs, &mut rng)? {
        let denom = 1.0 + z.norm_sqr();
        points.push(BlochVector::new(
            2.0 * z.re / denom,
            2.0 * z.im / denom,
            (1.0 - z.norm_sqr()) / denom,
        ));
    }
    debug_assert_eq!(points.len(), n);
    // stable presentation order: descending latitude, then longitude
    points.sort_by(|a, b| {
        b.z.partial_cmp(&a.z)
            .unwrap()
            .then(a.y.atan2(a.x).partial_cmp(&b.y.atan2(b.x)).unwrap())
    });
    let extracted = MajoranaPoints {
        points,
        round_trip_fidelity: 0.0,
    };
    let rebuilt = extracted.resymmetrize()?;
    let fidelity = symmetric_overlap(s, &rebuilt)?.norm_sqr();
    if fidelity < 1.0 - 1e-7 {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: 1.0 - fidelity,
        });
    }
    Ok(MajoranaPoints {
        round_trip_fidelity: fidelity,
        ..extracted
    })
}

/// Result of the closed-half-sphere test.
#[derive(Debug, Clone, Copy)]
pub struct HalfSphereOutcome {
    /// There is a unit `n` with `n . r_j >= -1e-9` for every point.
    pub within_half_sphere: bool,
    /// A maximizer of `min_j n . r_j`, present when the test passes.
    pub witness: Option<BlochVector>,
    /// The maximal `min_j n . r_j` found.
    pub margin: f64,
}

fn min_dot(n: &BlochVector, points: &[BlochVector]) -> f64 {
    points
        .iter()
        .map(|r| n.dot(r))
        .fold(f64::INFINITY, f64::min)
}

/// Decide whether the points fit in a closed half sphere.
///
/// The maximizer of `min_j n . r_j` has one, two, or three active points, so
/// the exact optimum lies among the points themselves, normalized pair sums,
/// and normals of point-difference planes; those candidates are enumerated
/// and a projected supergradient ascent (200 restarts, 500 steps) runs on
/// top as a safety net for degenerate configurations.
pub fn half_sphere_check(points: &[BlochVector]) -> HalfSphereOutcome {
    if points.is_empty() {
        return HalfSphereOutcome {
            within_half_sphere: true,
            witness: Some(BlochVector::new(0.0, 0.0, 1.0)),
            margin: 1.0,
        };
    }
    let mut best_n = points[0];
    let mut best = min_dot(&best_n, points);
    let mut consider = |n: BlochVector| {
        let v = min_dot(&n, points);
        if v > best {
            best = v;
            best_n = n;
        }
    };
    for (i, ri) in points.iter().enumerate() {
        consider(*ri);
        for rj in points.iter().skip(i + 1) {
            if let Some(n) = ri.add(rj).normalized() {
                consider(n);
            }
            if let Some(n) = ri.cross(rj).normalized() {
                consider(n);
                consider(n.scaled(-1.0));
            }
        }
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            for k in (j + 1)..points.len() {
                let dij = points[i].add(&points[j].scaled(-1.0));
                let dik = points[i].add(&points[k].scaled(-1.0));
                if let Some(n) = dij.cross(&dik).normalized() {
                    consider(n);
                    consider(n.scaled(-1.0));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6873_6368);
    for _restart in 0..200 {
        let mut n = random_unit_bloch(&mut rng);
        for step in 0..500 {
            let mut worst = f64::INFINITY;
            let mut grad = points[0];
            for r in points {
                let d = n.dot(r);
                if d < worst {
                    worst = d;
                    grad = *r;
                }
            }
            let gamma = 1.0 / (step as f64 + 2.0);
            match n.add(&grad.scaled(gamma)).normalized() {
                Some(next) => n = next,
                None => n = random_unit_bloch(&mut rng),
            }
        }
        consider(n);
    }
    let within = best >= -HALF_SPHERE_TOL;
    HalfSphereOutcome {
        within_half_sphere: within,
        witness: if within { Some(best_n) } else { None },
        margin: best,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PureState;

    fn dicke_201() -> SymmetricState {
        build_symmetric(
            KetMultiset::new(vec![CVec::basis(2, 0), CVec::basis(2, 1)], vec![2, 1]).unwrap(),
        )
        .unwrap()
    }

    fn tetrahedron() -> Vec<BlochVector> {
        let s = 1.0 / 3.0f64.sqrt();
        vec![
            BlochVector::new(s, s, s),
            BlochVector::new(s, -s, -s),
            BlochVector::new(-s, s, -s),
            BlochVector::new(-s, -s, s),
        ]
    }

    #[test]
    fn dicke_points_are_poles() {
        let pts = majorana_extract(&dicke_201()).unwrap();
        assert_eq!(pts.points().len(), 3);
        let north = pts.points().iter().filter(|p| p.z > 0.999).count();
        let south = pts.points().iter().filter(|p| p.z < -0.999).count();
        assert_eq!((north, south), (2, 1));
        assert!(pts.round_trip_fidelity() >= 1.0 - 1e-9);
    }

    #[test]
    fn product_state_points_collapse() {
        let s = build_symmetric(KetMultiset::new(vec![CVec::basis(2, 0)], vec![5]).unwrap())
            .unwrap();
        let pts = majorana_extract(&s).unwrap();
        assert!(pts.points().iter().all(|p| p.z > 1.0 - 1e-9));
    }

    #[test]
    fn ghz_points_are_equatorial_third_roots() {
        // state built from the expected points; extraction must recover them
        let kets: Vec<CVec> = (0..3)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                BlochVector::new(phi.cos(), phi.sin(), 0.0)
                    .to_state()
                    .unwrap()
                    .vec()
                    .clone()
            })
            .collect();
        let s = build_symmetric(KetMultiset::uniform(kets).unwrap()).unwrap();

        // sanity: this is GHZ_3 = (|000> + |111>)/sqrt(2) up to phase
        let dense = crate::symmetric::dense_expand(&s).unwrap();
        assert!((dense.get(0).norm() - 1.0 / 2.0f64.sqrt()).abs() < 1e-9);
        assert!((dense.get(7).norm() - 1.0 / 2.0f64.sqrt()).abs() < 1e-9);
        for idx in 1..7 {
            assert!(dense.get(idx).norm() < 1e-9);
        }

        let pts = majorana_extract(&s).unwrap();
        for p in pts.points() {
            assert!(p.z.abs() < 1e-7, "not equatorial: {:?}", p);
        }
        // pairwise angles of 120 degrees
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!((pts.points()[i].dot(&pts.points()[j]) + 0.5).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn random_round_trips() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..40 {
            let distinct = rng.gen_range(1..=3usize);
            let kets: Vec<CVec> = (0..distinct)
                .map(|_| PureState::random(2, &mut rng).vec().clone())
                .collect();
            let mut mults = vec![1u32; distinct];
            let mut total = distinct as u32;
            while total < 6 && rng.gen_bool(0.5) {
                mults[rng.gen_range(0..distinct)] += 1;
                total += 1;
            }
            let s = build_symmetric(KetMultiset::new(kets, mults).unwrap()).unwrap();
            let pts = majorana_extract(&s).unwrap();
            assert!(
                pts.round_trip_fidelity() >= 1.0 - 1e-7,
                "fidelity {}",
                pts.round_trip_fidelity()
            );
        }
    }

    #[test]
    fn half_sphere_trivial_and_tetrahedron() {
        let north = vec![BlochVector::new(0.0, 0.0, 1.0); 4];
        let out = half_sphere_check(&north);
        assert!(out.within_half_sphere);
        let w = out.witness.unwrap();
        assert!(w.z > 1.0 - 1e-9);

        let out = half_sphere_check(&tetrahedron());
        assert!(!out.within_half_sphere);
        assert!(out.witness.is_none());
        assert!((out.margin + 1.0 / 3.0).abs() < 1e-9, "margin {}", out.margin);
    }

    #[test]
    fn any_three_points_fit_a_half_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..300 {
            let pts: Vec<BlochVector> = (0..3).map(|_| random_unit_bloch(&mut rng)).collect();
            let out = half_sphere_check(&pts);
            assert!(out.within_half_sphere, "margin {}", out.margin);
            let w = out.witness.unwrap();
            assert!(min_dot(&w, &pts) >= -HALF_SPHERE_TOL);
        }
    }
}
