//! Least-squares line fitting shared by the exponent-regression paths.

/// Fit `y = slope * x + intercept`; returns `(slope, intercept, max_residual)`.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0f64, f64::max);
    (slope, intercept, max_residual)
}
