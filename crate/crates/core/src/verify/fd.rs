use crate::scalar::Scalar;

/// Relative step for first derivatives.
pub const FD_STEP: f64 = 1e-5;
/// Relative step of the gradient oracle used to cross-check analytic gradients.
pub const FD_GRADIENT_STEP: f64 = 1e-6;

/// Central difference `∂f/∂a_i` with step `rel_step * a_i`.
pub fn central_partial<T, F>(f: F, a: &[T], i: usize, rel_step: f64) -> T
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let h = T::lit(rel_step) * a[i].abs().max(T::min_positive_value());
    let mut x = a.to_vec();
    x[i] = a[i] + h;
    let up = f(&x);
    x[i] = a[i] - h;
    let dn = f(&x);
    // use the representable step actually taken
    let step = (a[i] + h) - (a[i] - h);
    (up - dn) / step
}

pub fn fd_gradient<T, F>(f: F, a: &[T], rel_step: f64) -> Vec<T>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    (0..a.len())
        .map(|i| central_partial(&f, a, i, rel_step))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic() {
        let g = fd_gradient(|a: &[f64]| a[0] * a[0] + 3.0 * a[0] * a[1], &[1.5, 2.0], FD_STEP);
        assert!((g[0] - (3.0 + 6.0)).abs() < 1e-8);
        assert!((g[1] - 4.5).abs() < 1e-8);
    }
}
