use crate::error::{Error, Result};

/// Holm step-down adjustment. Output is in input order.
///
/// With p sorted ascending, the j-th smallest (1-based) becomes
/// `min(1, max_{i <= j} (m - i + 1) p_(i))`.
pub fn holm_adjust(p_values: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::invalid(format!("p-value {bad} is outside [0, 1]")));
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    // stable sort keeps input order among equal p-values
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        let scaled = ((m - rank) as f64 * p_values[idx]).min(1.0);
        running = running.max(scaled);
        adjusted[idx] = running;
    }
    Ok(adjusted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_dimension_family() {
        assert_eq!(holm_adjust(&[0.39, 0.51, 0.04, 0.91]).unwrap(), [1.0, 1.0, 0.16, 1.0]);
    }

    #[test]
    fn small_cases() {
        assert_eq!(holm_adjust(&[0.2]).unwrap(), [0.2]);
        let v = holm_adjust(&[0.01, 0.01, 0.01]).unwrap();
        assert!(v.iter().all(|x| (x - 0.03).abs() < 1e-15));
        assert!(holm_adjust(&[]).unwrap().is_empty());
        assert!(holm_adjust(&[1.2]).is_err());
        assert!(holm_adjust(&[f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn bounded_and_monotone(p in proptest::collection::vec(0.0f64..=1.0, 1..12)) {
            let adj = holm_adjust(&p).unwrap();
            for (raw, a) in p.iter().zip(&adj) {
                prop_assert!(*a >= *raw && *a <= 1.0);
            }
            let mut pairs: Vec<(f64, f64)> = p.iter().copied().zip(adj.iter().copied()).collect();
            pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
            for w in pairs.windows(2) {
                prop_assert!(w[1].1 >= w[0].1);
            }
        }
    }
}
