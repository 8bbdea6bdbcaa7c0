//! Adaptive Gauss–Kronrod quadrature (7–15 pair) for complex-valued
//! integrands on real intervals, plus fixed 10-point Gauss–Legendre panels
//! used by the contour integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half; the center is handled apart)
const XGK: [f64; 7] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
];
const WGK: [f64; 7] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
];
const WGK_CENTER: f64 = 0.209482141084728;
// embedded 7-point Gauss weights, paired with XGK[1], XGK[3], XGK[5]
const WG: [f64; 3] = [0.129484966168870, 0.279705391489277, 0.381830050505119];
const WG_CENTER: f64 = 0.417959183673469;

// 10-point Gauss–Legendre rule on [-1, 1]
const XGL: [f64; 5] = [
    0.148874338981631,
    0.433395394129247,
    0.679409568299024,
    0.865063366688985,
    0.973906528517172,
];
const WGL: [f64; 5] = [
    0.295524224714753,
    0.269266719309996,
    0.219086362515982,
    0.149451349150581,
    0.066671344308688,
];

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK_CENTER * fc;
    let mut gauss = WG_CENTER * fc;
    for j in 0..7 {
        let fa = f(c - h * XGK[j])?;
        let fb = f(c + h * XGK[j])?;
        kronrod += WGK[j] * (fa + fb);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fa + fb);
        }
    }
    kronrod *= h;
    gauss *= h;
    Ok((kronrod, (kronrod - gauss).norm()))
}

/// Adaptive Gauss–Kronrod integration of a complex-valued function over
/// `[a, b]` to absolute tolerance `tol`. Splits the worst interval first.
pub fn adaptive_gk<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let first = gk15(&mut f, a, b)?;
    let mut intervals: Vec<(f64, f64, Complex64, f64)> = vec![(a, b, first.0, first.1)];
    let mut total_err = first.1;
    let mut splits = 0usize;
    while total_err > tol {
        splits += 1;
        if splits > 5_000 {
            return Err(Error::QuadratureNotConverged { value: total_err });
        }
        // split the interval with the largest error estimate
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (ia, ib, _, ie) = intervals.swap_remove(idx);
        if (ib - ia).abs() < 1e-15 * (1.0 + ia.abs() + ib.abs()) {
            return Err(Error::QuadratureNotConverged { value: total_err });
        }
        let m = 0.5 * (ia + ib);
        let left = gk15(&mut f, ia, m)?;
        let right = gk15(&mut f, m, ib)?;
        total_err = total_err - ie + left.1 + right.1;
        intervals.push((ia, m, left.0, left.1));
        intervals.push((m, ib, right.0, right.1));
    }
    Ok(intervals.iter().map(|t| t.2).sum())
}

/// Composite 10-point Gauss–Legendre integral of a complex line integrand
/// along the straight segment from `za` to `zb`, using `panels` equal panels.
pub fn gauss_legendre_segment<F>(
    f: &mut F,
    za: Complex64,
    zb: Complex64,
    panels: usize,
) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let step = (zb - za) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let pa = za + step * p as f64;
        let c = pa + 0.5 * step;
        let h = 0.5 * step;
        for j in 0..5 {
            total += WGL[j] * (f(c - h * XGL[j])? + f(c + h * XGL[j])?) * h;
        }
    }
    Ok(total)
}

/// Adaptive composite Gauss–Legendre along a straight segment: panels are
/// bisected where two refinement levels disagree, which concentrates work
/// near poles of the integrand close to the path.
pub fn adaptive_gl_segment<F>(
    f: &mut F,
    za: Complex64,
    zb: Complex64,
    tol: f64,
) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    fn recurse<F>(
        f: &mut F,
        za: Complex64,
        zb: Complex64,
        coarse: Complex64,
        tol: f64,
        depth: usize,
    ) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        let mid = 0.5 * (za + zb);
        let left = gauss_legendre_segment(f, za, mid, 1)?;
        let right = gauss_legendre_segment(f, mid, zb, 1)?;
        let fine = left + right;
        if (fine - coarse).norm() <= tol {
            return Ok(fine);
        }
        if depth >= 48 {
            return Err(Error::QuadratureNotConverged {
                value: (fine - coarse).norm(),
            });
        }
        let a = recurse(f, za, mid, left, 0.5 * tol, depth + 1)?;
        let b = recurse(f, mid, zb, right, 0.5 * tol, depth + 1)?;
        Ok(a + b)
    }
    let coarse = gauss_legendre_segment(f, za, zb, 1)?;
    recurse(f, za, zb, coarse, tol, 0)
}
