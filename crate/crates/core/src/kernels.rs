//! Entire kernels `C(z) = cos √z` and `S(z) = sin √z / √z`.
//!
//! Both are even functions of √z, hence entire in z: any branch of the
//! square root gives the same value. Near the origin the trig forms lose
//! digits to cancellation, so a Maclaurin series takes over for small |z|.

use num_complex::Complex64;

const SERIES_RADIUS: f64 = 0.25;

/// cos √z, entire in z.
pub fn cos_sqrt(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        // sum_{n>=0} (-z)^n / (2n)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..=12 {
            let n = n as f64;
            term *= -z / ((2.0 * n - 1.0) * (2.0 * n));
            sum += term;
            if term.norm() < 1e-20 {
                break;
            }
        }
        sum
    } else {
        z.sqrt().cos()
    }
}

/// sin √z / √z, entire in z.
pub fn sinc_sqrt(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        // sum_{n>=0} (-z)^n / (2n+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..=12 {
            let n = n as f64;
            term *= -z / ((2.0 * n) * (2.0 * n + 1.0));
            sum += term;
            if term.norm() < 1e-20 {
                break;
            }
        }
        sum
    } else {
        let s = z.sqrt();
        s.sin() / s
    }
}

/// d/dz cos √z = -S(z) / 2.
pub fn cos_sqrt_prime(z: Complex64) -> Complex64 {
    -0.5 * sinc_sqrt(z)
}

/// d/dz [sin √z / √z] = (C(z) - S(z)) / (2z), extended through z = 0.
pub fn sinc_sqrt_prime(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        // sum_{n>=1} (-1)^n n z^{n-1} / (2n+1)!
        let mut sum = Complex64::new(-1.0 / 6.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut factorial_inv = 1.0 / 6.0; // 1/(2n+1)! at n = 1
        let mut sign = -1.0;
        for n in 2..=12 {
            let nf = n as f64;
            pow *= z;
            factorial_inv /= (2.0 * nf) * (2.0 * nf + 1.0);
            sign = -sign;
            let term = pow * (sign * nf * factorial_inv);
            sum += term;
            if term.norm() < 1e-20 {
                break;
            }
        }
        sum
    } else {
        (cos_sqrt(z) - sinc_sqrt(z)) / (2.0 * z)
    }
}
