use crate::error::{Error, Result};

/// Composite Simpson rule over uniformly spaced values `f[0..n]` with
/// spacing `h`. `f[0]` is the value at the left endpoint, which callers pass
/// as the continuous limit when the integrand is singular-looking there.
/// An odd number of panels closes with a Simpson 3/8 block.
pub fn simpson_open(f: &[f64], h: f64) -> Result<f64> {
    let n = f.len();
    if n < 3 {
        return Err(Error::TooFewNodes { got: n, need: 3 });
    }
    let panels = n - 1;
    let (even_end, tail) = if panels % 2 == 0 {
        (panels, false)
    } else {
        (panels - 3, true)
    };
    let mut acc = 0.0;
    let mut k = 0;
    while k < even_end {
        acc += f[k] + 4.0 * f[k + 1] + f[k + 2];
        k += 2;
    }
    acc *= h / 3.0;
    if tail {
        let k = even_end;
        acc += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    }
    Ok(acc)
}

/// Simpson rule on a single interval of width `h` with its midpoint value.
pub fn simpson_panel(f0: f64, f_mid: f64, f1: f64, h: f64) -> f64 {
    h / 6.0 * (f0 + 4.0 * f_mid + f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn sample(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> (Vec<f64>, f64) {
        let h = (b - a) / (n - 1) as f64;
        ((0..n).map(|i| f(a + i as f64 * h)).collect(), h)
    }

    #[test]
    fn cubic_is_exact() {
        for n in [3, 4, 5, 6, 9, 10] {
            let (f, h) = sample(n, 0.0, 0.5, |t| -12.0 * t * t * t);
            assert!((simpson_open(&f, h).unwrap() + 0.1875).abs() < 1e-15, "n={n}");
        }
    }

    #[test]
    fn zero_integrand() {
        assert_eq!(simpson_open(&[0.0; 7], 0.1).unwrap(), 0.0);
    }

    #[test]
    fn quintic_error_is_fourth_order() {
        // composite Simpson bound h^4 max|f''''| / 180 with f'''' = 120 t
        let (f, h) = sample(65, 0.0, 1.0, |t| t.powi(5));
        let e64 = (simpson_open(&f, h).unwrap() - 1.0 / 6.0).abs();
        assert!(e64 <= h.powi(4) * 120.0 / 180.0);
        let (f, h) = sample(257, 0.0, 1.0, |t| t.powi(5));
        let e256 = (simpson_open(&f, h).unwrap() - 1.0 / 6.0).abs();
        assert!(e256 <= 1e-9);
        assert!((e64 / e256 - 256.0).abs() < 1.0);
    }

    #[test]
    fn too_few_nodes() {
        assert_eq!(
            simpson_open(&[0.0, 1.0], 0.1),
            Err(Error::TooFewNodes { got: 2, need: 3 })
        );
    }

    #[test]
    fn single_panel() {
        let v = simpson_panel(0.0, 0.125, 1.0, 1.0);
        assert!((v - 0.25).abs() < 1e-15);
    }
}
