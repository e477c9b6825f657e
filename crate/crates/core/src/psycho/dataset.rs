use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Response counts at one stimulus level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    /// Stimulus value (translation gain).
    #[serde(rename = "gain")]
    pub x: f64,
    /// Presentations.
    pub n: u64,
    /// "Greater" responses.
    pub k: u64,
}

impl Level {
    pub fn proportion(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Per-level counts for one group, sorted by stimulus with distinct stimulus values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Level>", into = "Vec<Level>")]
pub struct ResponseDataset {
    levels: Vec<Level>,
}

impl ResponseDataset {
    pub fn new(mut levels: Vec<Level>) -> Result<Self> {
        for l in &levels {
            if !l.x.is_finite() {
                return Err(Error::Dataset(format!("non-finite stimulus value {}", l.x)));
            }
            if l.n == 0 {
                return Err(Error::Dataset(format!("level {} has n = 0", l.x)));
            }
            if l.k > l.n {
                return Err(Error::Dataset(format!(
                    "level {} has k = {} > n = {}",
                    l.x, l.k, l.n
                )));
            }
        }
        levels.sort_by(|a, b| a.x.total_cmp(&b.x));
        if let Some(w) = levels.windows(2).find(|w| w[0].x == w[1].x) {
            return Err(Error::Dataset(format!(
                "duplicate stimulus level {}",
                w[0].x
            )));
        }
        Ok(Self { levels })
    }

    /// Aggregates individual binary responses `(stimulus, said_greater)`.
    ///
    /// Stimuli closer than 1e-9 are pooled into one level.
    pub fn from_responses<I>(responses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, bool)>,
    {
        let mut levels: Vec<Level> = Vec::new();
        for (x, greater) in responses {
            match levels.iter_mut().find(|l| (l.x - x).abs() < 1e-9) {
                Some(l) => {
                    l.n += 1;
                    l.k += greater as u64;
                }
                None => levels.push(Level {
                    x,
                    n: 1,
                    k: greater as u64,
                }),
            }
        }
        Self::new(levels)
    }

    /// Reads a `gain,n,k` CSV.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let levels = rdr
            .deserialize()
            .collect::<Result<Vec<Level>, csv::Error>>()?;
        Self::new(levels)
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for l in &self.levels {
            w.serialize(l)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn total_trials(&self) -> u64 {
        self.levels.iter().map(|l| l.n).sum()
    }

    pub fn x_range(&self) -> (f64, f64) {
        let first = self.levels.first().map_or(0.0, |l| l.x);
        let last = self.levels.last().map_or(0.0, |l| l.x);
        (first, last)
    }

    pub(crate) fn with_counts(&self, ks: &[u64]) -> Self {
        let levels = self
            .levels
            .iter()
            .zip(ks)
            .map(|(l, &k)| Level { k, ..*l })
            .collect();
        Self { levels }
    }
}

impl TryFrom<Vec<Level>> for ResponseDataset {
    type Error = Error;

    fn try_from(levels: Vec<Level>) -> Result<Self> {
        Self::new(levels)
    }
}

impl From<ResponseDataset> for Vec<Level> {
    fn from(d: ResponseDataset) -> Self {
        d.levels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_validates() {
        let d = ResponseDataset::new(vec![
            Level { x: 1.2, n: 5, k: 4 },
            Level { x: 0.8, n: 5, k: 1 },
        ])
        .unwrap();
        assert_eq!(d.levels()[0].x, 0.8);
        assert!(ResponseDataset::new(vec![Level { x: 1.0, n: 3, k: 4 }]).is_err());
        assert!(ResponseDataset::new(vec![Level { x: 1.0, n: 0, k: 0 }]).is_err());
        assert!(ResponseDataset::new(vec![
            Level { x: 1.0, n: 3, k: 1 },
            Level { x: 1.0, n: 3, k: 2 }
        ])
        .is_err());
    }

    #[test]
    fn aggregates_responses() {
        let d = ResponseDataset::from_responses([
            (1.1, true),
            (0.9, false),
            (1.1, false),
            (0.5 + 6.0 * 0.1, true),
        ])
        .unwrap();
        assert_eq!(d.levels().len(), 2);
        assert_eq!(d.levels()[1], Level { x: 1.1, n: 3, k: 2 });
    }

    #[test]
    fn csv_round_trip() {
        let text = "gain,n,k\n0.5,10,0\n1.0,10,5\n1.5,10,10\n";
        let d = ResponseDataset::from_csv(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        d.to_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }
}
