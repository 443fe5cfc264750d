//! Cylinder return times on a full shift and symbolic itineraries.

use serde::{Deserialize, Serialize};

use crate::dynamics::{MapKind, MapSpec, TorusPoint};
use crate::error::{Error, Result};

/// Orbit points closer than this to a cell boundary raise the boundary flag.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A nonempty finite word over `{0, …, m−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::param("word must be nonempty"));
        }
        Ok(Self(symbols))
    }

    /// Parses a string of decimal digits, e.g. `"0101"`.
    pub fn parse(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(|| Error::param(format!("bad symbol {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sep = if self.0.iter().any(|&s| s > 9) { " " } else { "" };
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

/// Least `k ≥ 1` such that `symbols[k..]` is a prefix of `symbols`; the word
/// length when the word has no proper self-overlap.
///
/// This is the smallest period of the word, `n − (longest proper border)`,
/// computed with the prefix function. A two-sided cylinder indexed
/// `−m..n` is passed as its full word; the overlap rule is the same.
pub fn tau_word(word: &Word, _two_sided: bool) -> usize {
    let s = word.symbols();
    let n = s.len();
    let mut border = vec![0usize; n];
    for i in 1..n {
        let mut b = border[i - 1];
        while b > 0 && s[i] != s[b] {
            b = border[b - 1];
        }
        if s[i] == s[b] {
            b += 1;
        }
        border[i] = b;
    }
    n - border[n - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Partition {
    /// `[0, ½)`, `[½, 1)`; doubling map only.
    BinaryMarkov,
    /// Each coordinate cut into `m` equal cells; symbol `Σ cellᵢ·mⁱ`.
    Grid { m: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Itinerary {
    pub word: Word,
    /// Some orbit point was within [`BOUNDARY_TOL`] of a cell boundary.
    pub boundary: bool,
}

/// Cells visited by `x, f(x), …, f^{n−1}(x)`. Cells are left-closed.
pub fn itinerary(map: &MapSpec, x: &TorusPoint, n: usize, partition: Partition) -> Result<Itinerary> {
    map.check_dim(x)?;
    if n == 0 {
        return Err(Error::param("itinerary length must be at least 1"));
    }
    let m = match partition {
        Partition::BinaryMarkov => {
            if map.kind() != MapKind::Doubling1d {
                return Err(Error::Unsupported(
                    "the binary Markov partition is defined for doubling_1d only".into(),
                ));
            }
            2
        }
        Partition::Grid { m } => {
            if m < 2 {
                return Err(Error::param("grid partition needs m ≥ 2"));
            }
            m
        }
    };
    let mf = m as f64;
    let mut symbols = Vec::with_capacity(n);
    let mut boundary = false;
    let mut p = *x;
    for j in 0..n {
        if j > 0 {
            p = map.step(&p);
        }
        let mut sym: u64 = 0;
        let mut weight: u64 = 1;
        for &c in p.coords() {
            let scaled = c * mf;
            let cell = (scaled.floor() as u64).min(m as u64 - 1);
            let frac = scaled - scaled.floor();
            if frac.min(1.0 - frac) / mf < BOUNDARY_TOL {
                boundary = true;
            }
            sym += cell * weight;
            weight *= m as u64;
        }
        symbols.push(u32::try_from(sym).map_err(|_| Error::param("alphabet too large"))?);
    }
    Ok(Itinerary {
        word: Word::new(symbols)?,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(tau_word(&w("00000"), false), 1);
        assert_eq!(tau_word(&w("0101"), false), 2);
        assert_eq!(tau_word(&w("0011"), false), 4);
        assert_eq!(tau_word(&w("0"), false), 1);
        assert_eq!(tau_word(&w("010"), true), 2);
    }

    #[test]
    fn empty_word_rejected() {
        assert!(Word::new(vec![]).is_err());
    }

    #[test]
    fn doubling_itineraries() {
        let d = MapSpec::doubling();
        let it = itinerary(&d, &TorusPoint::new(&[1.0 / 3.0]).unwrap(), 4, Partition::BinaryMarkov).unwrap();
        assert_eq!(it.word, w("0101"));
        let it = itinerary(&d, &TorusPoint::new(&[0.0]).unwrap(), 5, Partition::BinaryMarkov).unwrap();
        assert_eq!(it.word, w("00000"));
        assert!(it.boundary);
        let it = itinerary(&d, &TorusPoint::new(&[0.8]).unwrap(), 3, Partition::BinaryMarkov).unwrap();
        assert_eq!(it.word, w("110"));
    }

    #[test]
    fn markov_partition_only_for_doubling() {
        let x = TorusPoint::new(&[0.1, 0.2]).unwrap();
        assert!(itinerary(&MapSpec::cat_map(), &x, 3, Partition::BinaryMarkov).is_err());
        let it = itinerary(&MapSpec::cat_map(), &x, 2, Partition::Grid { m: 2 }).unwrap();
        // (0.1, 0.2) → cells (0, 0); f = (0.4, 0.3) → (0, 0).
        assert_eq!(it.word.symbols(), &[0, 0]);
    }
}
