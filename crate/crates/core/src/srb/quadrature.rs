use super::SrbCurve;

/// Composite trapezoidal rule over sampled points. Fewer than two points
/// integrate to zero.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "trapezoid: x and y lengths differ");
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0)
        .sum()
}

/// Schedule Risk Value: area under the baseline over its control grid.
pub fn srv(curve: &SrbCurve) -> f64 {
    let xs: Vec<f64> = curve.points.iter().map(|p| f64::from(p.t)).collect();
    let ys: Vec<f64> = curve.points.iter().map(|p| p.variance).collect();
    trapezoid(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srb::SrbPoint;

    fn curve(values: &[(u32, f64)]) -> SrbCurve {
        SrbCurve {
            label: "c".into(),
            points: values
                .iter()
                .map(|&(t, v)| SrbPoint {
                    t,
                    variance: v,
                    mean: 0.0,
                    sd: v.sqrt(),
                })
                .collect(),
            replications: 2,
            seed: 0,
        }
    }

    #[test]
    fn zero_curve() {
        assert_eq!(srv(&curve(&[(0, 0.0), (1, 0.0), (5, 0.0)])), 0.0);
        assert_eq!(srv(&curve(&[(0, 0.0)])), 0.0);
    }

    #[test]
    fn constant_is_rectangle() {
        let c = curve(&[(0, 2.5), (3, 2.5), (4, 2.5), (10, 2.5)]);
        assert!((srv(&c) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn linear_is_exact() {
        let pts: Vec<(u32, f64)> = (0..=8).map(|t| (t, 8.0 - t as f64)).collect();
        assert!((srv(&curve(&pts)) - 32.0).abs() < 1e-12);
    }

    #[test]
    fn serial_chain_points() {
        // Exact baseline of the (4, sd 1) -> (3, sd 1) chain on the unit grid.
        let v = [2.0, 1.5625, 1.25, 1.0625, 1.0, 4.0 / 9.0, 1.0 / 9.0, 0.0];
        let pts: Vec<(u32, f64)> = v.iter().enumerate().map(|(t, &x)| (t as u32, x)).collect();
        // 1.0 + 1.5625 + 1.25 + 1.0625 + 1.0 + 4/9 + 1/9 = 6.430555...
        assert!((srv(&curve(&pts)) - 6.430_555_555_555_555).abs() < 1e-12);
    }
}
