use super::NumericsError;

/// Central-difference gradient of a scalar function.
///
/// Component `k` is `(f(x + h e_k) - f(x - h e_k)) / (2h)`. This is the
/// verification oracle for the model's analytic gradients and must stay
/// independent of them.
pub fn finite_diff_grad<F>(mut f: F, x: &[f64], h: f64) -> Result<Vec<f64>, NumericsError>
where
    F: FnMut(&[f64]) -> f64,
{
    if h <= 0.0 || h.is_nan() {
        return Err(NumericsError::Domain(format!(
            "step size must be positive, got h={h}"
        )));
    }
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let orig = probe[k];
        probe[k] = orig + h;
        let fp = f(&probe);
        probe[k] = orig - h;
        let fm = f(&probe);
        probe[k] = orig;
        if !fp.is_finite() || !fm.is_finite() {
            return Err(NumericsError::NonFinite(format!(
                "function evaluation while probing component {k} (f+ = {fp}, f- = {fm})"
            )));
        }
        grad.push((fp - fm) / (2.0 * h));
    }
    Ok(grad)
}
