use nalgebra::DMatrix;

const TAYLOR_DEGREE: usize = 13;

/// Matrix exponential by scaling and squaring: halve until the 1-norm is at
/// most 1/2, sum the degree-13 Taylor polynomial (Horner form), square back.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = norm1(a);
    let mut levels = 0i32;
    while norm / 2f64.powi(levels) > 0.5 {
        levels += 1;
    }
    let b = a / 2f64.powi(levels);
    let id = DMatrix::<f64>::identity(n, n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &id + (&b * &acc) / k as f64;
    }
    for _ in 0..levels {
        acc = &acc * &acc;
    }
    acc
}

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_generator() {
        let t = 1.3_f64;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&a);
        let want = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!((e - want).amax() < 1e-13);
    }

    #[test]
    fn large_argument_uses_squaring() {
        let a = DMatrix::from_row_slice(1, 1, &[20.0]);
        let e = expm(&a)[(0, 0)];
        assert!((e / 20f64.exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_is_exact_polynomial() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        let e = expm(&a);
        assert_eq!(e, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 0.0, 1.0]));
    }
}
