/// Density at which `values` first falls through `level`, by linear
/// interpolation between the bracketing grid points. `None` if the series
/// never crosses from `>= level` to `< level`.
pub fn crossing_point(densities: &[f64], values: &[f64], level: f64) -> Option<f64> {
    assert_eq!(densities.len(), values.len(), "one value per density");
    (0..values.len().saturating_sub(1)).find_map(|i| {
        let (y0, y1) = (values[i], values[i + 1]);
        if y0 >= level && y1 < level {
            let t = (y0 - level) / (y0 - y1);
            Some(densities[i] + t * (densities[i + 1] - densities[i]))
        } else {
            None
        }
    })
}

/// Density of the smallest value; the first one on ties.
pub fn argmin(densities: &[f64], values: &[f64]) -> Option<f64> {
    assert_eq!(densities.len(), values.len(), "one value per density");
    (0..values.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .map(|i| densities[i])
}

pub fn argmax(densities: &[f64], values: &[f64]) -> Option<f64> {
    assert_eq!(densities.len(), values.len(), "one value per density");
    (0..values.len())
        .rev()
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .map(|i| densities[i])
}

/// True when `values` is nonincreasing (`decreasing = true`) or
/// nondecreasing, allowing each step to go the wrong way by at most
/// `tolerance`.
pub fn is_monotone_within(values: &[f64], decreasing: bool, tolerance: f64) -> bool {
    values.windows(2).all(|w| {
        let step = if decreasing { w[1] - w[0] } else { w[0] - w[1] };
        step <= tolerance
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolated_crossing() {
        let x = [3.0, 4.0, 5.0, 6.0];
        let y = [1.0, 0.8, 0.2, 0.0];
        assert!((crossing_point(&x, &y, 0.5).unwrap() - 4.5).abs() < 1e-12);
        assert_eq!(crossing_point(&x, &[1.0, 0.5, 0.2, 0.0], 0.5), Some(4.0));
        assert_eq!(crossing_point(&x, &[1.0; 4], 0.5), None);
        assert_eq!(crossing_point(&[], &[], 0.5), None);
    }

    #[test]
    fn extrema() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(argmin(&x, &[3.0, 1.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(argmax(&x, &[3.0, 5.0, 5.0, 2.0]), Some(2.0));
        assert_eq!(argmin(&[], &[]), None);
    }

    #[test]
    fn monotonicity() {
        assert!(is_monotone_within(&[1.0, 0.9, 0.91, 0.5], true, 0.02));
        assert!(!is_monotone_within(&[1.0, 0.9, 0.95, 0.5], true, 0.02));
        assert!(is_monotone_within(&[0.1, 0.5, 0.49], false, 0.02));
    }
}
