//! State-file schema shared with the CLI.
//!
//! A multiset state is a JSON object
//! `{"dim": d, "kets": [[[re,im], ...], ...], "mults": [n_j, ...]}`:
//! one amplitude-pair list per ket, decimal numbers throughout.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::symmetric::KetMultiset;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub kets: Vec<Vec<[f64; 2]>>,
    pub mults: Vec<u32>,
}

impl StateFile {
    pub fn from_multiset(ms: &KetMultiset) -> Self {
        StateFile {
            dim: ms.dim(),
            kets: ms.kets().iter().map(ket_to_pairs).collect(),
            mults: ms.mults().to_vec(),
        }
    }

    pub fn into_multiset(self) -> Result<KetMultiset> {
        let mut kets = Vec::with_capacity(self.kets.len());
        for raw in &self.kets {
            if raw.len() != self.dim {
                return Err(Error::Invalid(format!(
                    "ket has {} amplitudes, dim is {}",
                    raw.len(),
                    self.dim
                )));
            }
            kets.push(CVec::new(
                raw.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
            ));
        }
        KetMultiset::new(kets, self.mults)
    }
}

pub fn ket_to_pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.entries().iter().map(|z| [z.re, z.im]).collect()
}

pub fn multiset_from_json(text: &str) -> Result<KetMultiset> {
    let file: StateFile = serde_json::from_str(text)?;
    file.into_multiset()
}

pub fn multiset_to_json(ms: &KetMultiset) -> String {
    serde_json::to_string_pretty(&StateFile::from_multiset(ms)).expect("serializable")
}

pub fn load_multiset(path: &Path) -> Result<KetMultiset> {
    multiset_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_multiset(path: &Path, ms: &KetMultiset) -> Result<()> {
    Ok(std::fs::write(path, multiset_to_json(ms))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PureState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kets: Vec<CVec> = (0..3)
            .map(|_| PureState::random(3, &mut rng).vec().clone())
            .collect();
        let ms = KetMultiset::new(kets, vec![2, 1, 3]).unwrap();
        let back = multiset_from_json(&multiset_to_json(&ms)).unwrap();
        assert_eq!(ms, back);
    }

    #[test]
    fn parse_failures() {
        assert!(multiset_from_json("not json").is_err());
        assert!(multiset_from_json(r#"{"dim": 2, "kets": [[[1,0]]], "mults": [1]}"#).is_err());
    }

    #[test]
    fn literal_schema_parses() {
        let text = r#"{
            "dim": 2,
            "kets": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
            "mults": [2, 1]
        }"#;
        let ms = multiset_from_json(text).unwrap();
        assert_eq!(ms.total(), 3);
        assert_eq!(ms.dim(), 2);
    }
}
