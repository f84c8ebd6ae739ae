use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Descriptives {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); `None` below two values.
    pub sd: Option<f64>,
    pub median: f64,
}

impl Descriptives {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Descriptives {
                n,
                mean: f64::NAN,
                sd: None,
                median: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = (n > 1).then(|| (values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64).sqrt());
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Descriptives { n, mean, sd, median }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic() {
        let d = Descriptives::of(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!(d.mean, 2.5);
        assert_eq!(d.median, 2.5);
        assert!((d.sd.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let one = Descriptives::of(&[3.0]);
        assert_eq!((one.median, one.sd), (3.0, None));
    }
}
