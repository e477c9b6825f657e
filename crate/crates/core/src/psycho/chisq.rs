use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: u32,
    pub n: u64,
    pub p_value: f64,
}

/// Pearson chi-square test of independence on a 2x2 table, without continuity correction.
///
/// `table` is `[[a, b], [c, d]]` with rows as conditions and columns as outcomes.
pub fn chi_square_2x2(table: [[u64; 2]; 2]) -> Result<ChiSquare> {
    let [[a, b], [c, d]] = table.map(|r| r.map(|v| v as f64));
    let margins = [a + b, c + d, a + c, b + d];
    if margins.contains(&0.0) {
        return Err(Error::ZeroMarginal);
    }
    let n = a + b + c + d;
    let cross = a * d - b * c;
    let statistic = n * cross * cross / margins.iter().product::<f64>();
    let p_value = ChiSquared::new(1.0)
        .map(|dist| dist.sf(statistic))
        .unwrap_or(f64::NAN);
    Ok(ChiSquare {
        statistic,
        df: 1,
        n: n as u64,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn load_condition_table() {
        let r = chi_square_2x2([[4, 10], [10, 4]]).unwrap();
        assert_abs_diff_eq!(r.statistic, 5.143, epsilon = 1e-3);
        assert_eq!(r.n, 28);
        assert_eq!(r.df, 1);
        assert!(r.p_value < 0.05);
    }

    #[test]
    fn independence_and_perfect_association() {
        assert_eq!(chi_square_2x2([[5, 5], [5, 5]]).unwrap().statistic, 0.0);
        assert_abs_diff_eq!(chi_square_2x2([[10, 0], [0, 10]]).unwrap().statistic, 20.0);
    }

    #[test]
    fn zero_margin_is_rejected() {
        assert!(matches!(
            chi_square_2x2([[0, 0], [3, 4]]),
            Err(Error::ZeroMarginal)
        ));
        assert!(matches!(
            chi_square_2x2([[0, 5], [0, 4]]),
            Err(Error::ZeroMarginal)
        ));
    }
}
