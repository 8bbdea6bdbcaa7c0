//! Locates all zeros of an entire function inside a rectangle, with
//! argument-principle counts, Newton refinement, multiplicity detection
//! and spectral classification.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::adaptive_gl_segment;

/// Tolerance for "on the axis" classification decisions.
pub const AXIS_TOL: f64 = 1e-9;
/// Zeros closer than this to a contour force a dilation retry.
const EDGE_CLEARANCE: f64 = 1e-6;
const MAX_DILATIONS: usize = 5;
/// Points sampled per edge for the clearance check.
const EDGE_SAMPLES: usize = 128;

/// A function handle returning (F(k), F'(k)).
pub trait EntireFn {
    fn eval(&self, k: Complex64) -> Result<(Complex64, Complex64)>;
}

impl<F> EntireFn for F
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)>,
{
    fn eval(&self, k: Complex64) -> Result<(Complex64, Complex64)> {
        self(k)
    }
}

/// Axis-aligned rectangle in the complex k-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max)
            || [re_min, re_max, im_min, im_max]
                .iter()
                .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "degenerate rectangle [{re_min},{re_max}]x[{im_min},{im_max}]"
            )));
        }
        Ok(Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re_min <= z.re && z.re <= self.re_max && self.im_min <= z.im && z.im <= self.im_max
    }

    pub fn contains_disk(&self, center: Complex64, r: f64) -> bool {
        center.re - r >= self.re_min
            && center.re + r <= self.re_max
            && center.im - r >= self.im_min
            && center.im + r <= self.im_max
    }

    pub fn dilate(&self, factor: f64) -> Rect {
        let c = self.center();
        Rect {
            re_min: c.re + (self.re_min - c.re) * factor,
            re_max: c.re + (self.re_max - c.re) * factor,
            im_min: c.im + (self.im_min - c.im) * factor,
            im_max: c.im + (self.im_max - c.im) * factor,
        }
    }

    /// Counterclockwise corner list, starting at the lower left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// Classification of a located zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralKind {
    /// On the positive imaginary axis: bound state k = i|E|^{1/2}.
    Eigenvalue,
    /// Strictly below the real axis, off the imaginary axis.
    Resonance,
    /// On the real axis (within tolerance), k = 0 included.
    RealResonance,
    /// On the negative imaginary axis.
    Antibound,
}

/// One zero of the selected entire function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub k: Complex64,
    pub multiplicity: u32,
    pub kind: SpectralKind,
}

/// A rectangle together with the verified-complete list of zeros inside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumWindow {
    pub rect: Rect,
    pub points: Vec<SpectralPoint>,
    /// Top-level argument-principle count over the rectangle.
    pub total_count: i64,
    /// True iff the multiplicities of the located zeros add up to the count.
    pub complete: bool,
}

pub fn classify(k: Complex64) -> SpectralKind {
    if k.im.abs() <= AXIS_TOL {
        SpectralKind::RealResonance
    } else if k.im > 0.0 {
        SpectralKind::Eigenvalue
    } else if k.re.abs() <= AXIS_TOL {
        SpectralKind::Antibound
    } else {
        SpectralKind::Resonance
    }
}

/// Clearance demanded of a contour; relative to the rectangle so that the
/// tiny multiplicity-recount boxes are not rejected out of hand.
fn clearance_threshold(rect: &Rect) -> f64 {
    EDGE_CLEARANCE.min(1e-3 * rect.diameter())
}

/// Minimum over sampled contour points of the first-order distance proxy
/// |F| / |F'|; small values flag a zero close to the path.
fn min_clearance<F: EntireFn + ?Sized>(f: &F, rect: &Rect) -> Result<f64> {
    let corners = rect.corners();
    let mut min = f64::INFINITY;
    for e in 0..4 {
        let (za, zb) = (corners[e], corners[(e + 1) % 4]);
        for i in 0..EDGE_SAMPLES {
            let t = (i as f64 + 0.5) / EDGE_SAMPLES as f64;
            let z = za + (zb - za) * t;
            let (v, dv) = f.eval(z)?;
            if v.norm() == 0.0 {
                return Ok(0.0);
            }
            let proxy = v.norm() / dv.norm().max(1e-300);
            if proxy < min {
                min = proxy;
            }
        }
    }
    Ok(min)
}

/// Raw argument-principle count over the rectangle boundary; errs if the
/// unrounded value is not within 0.1 of an integer.
fn contour_count<F: EntireFn + ?Sized>(f: &F, rect: &Rect) -> Result<i64> {
    let corners = rect.corners();
    let mut total = Complex64::new(0.0, 0.0);
    for e in 0..4 {
        let (za, zb) = (corners[e], corners[(e + 1) % 4]);
        total += adaptive_gl_segment(
            &mut |z| {
                let (v, dv) = f.eval(z)?;
                Ok(dv / v)
            },
            za,
            zb,
            5e-3,
        )?;
    }
    let winding = total / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let n = winding.re.round();
    if (winding.re - n).abs() > 0.1 || winding.im.abs() > 0.1 || n < 0.0 {
        return Err(Error::QuadratureNotConverged { value: winding.re });
    }
    Ok(n as i64)
}

/// Counts zeros of `f` in `rect` with multiplicity. If a zero sits too
/// close to the contour, the rectangle is dilated by a random factor in
/// [1+1e-4, 1+1e-3] and retried (up to 5 times).
pub fn count_zeros<F: EntireFn + ?Sized>(
    f: &F,
    rect: &Rect,
    rng: &mut ChaCha8Rng,
) -> Result<i64> {
    Ok(count_zeros_adjusted(f, rect, rng)?.0)
}

fn count_zeros_adjusted<F: EntireFn + ?Sized>(
    f: &F,
    rect: &Rect,
    rng: &mut ChaCha8Rng,
) -> Result<(i64, Rect)> {
    let mut r = *rect;
    for attempt in 0..=MAX_DILATIONS {
        if min_clearance(f, &r)? >= clearance_threshold(&r) {
            match contour_count(f, &r) {
                Ok(n) => return Ok((n, r)),
                Err(e @ Error::Overflow { .. }) => return Err(e),
                // a zero the edge samples missed spoiled the winding
                // integral; dilate and retry like a flagged clearance
                Err(_) => {}
            }
        }
        if attempt == MAX_DILATIONS {
            break;
        }
        r = r.dilate(1.0 + rng.gen_range(1e-4..1e-3));
    }
    Err(Error::ZeroOnContour {
        retries: MAX_DILATIONS,
    })
}

/// Picks a split coordinate near the middle of [lo, hi] such that the grid
/// line keeps clear of zeros (probed by the |F|/|F'| proxy along the line).
fn pick_split<F: EntireFn + ?Sized>(
    f: &F,
    rect: &Rect,
    vertical: bool,
    jitter: bool,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let (lo, hi) = if vertical {
        (rect.re_min, rect.re_max)
    } else {
        (rect.im_min, rect.im_max)
    };
    let mid = 0.5 * (lo + hi);
    let span = hi - lo;
    let threshold = clearance_threshold(rect);
    for attempt in 0..12 {
        let cand = if attempt == 0 && !jitter {
            mid
        } else {
            mid + span * rng.gen_range(-0.15..0.15)
        };
        let mut ok = true;
        for i in 0..EDGE_SAMPLES {
            let t = (i as f64 + 0.5) / EDGE_SAMPLES as f64;
            let z = if vertical {
                Complex64::new(cand, rect.im_min + t * (rect.im_max - rect.im_min))
            } else {
                Complex64::new(rect.re_min + t * (rect.re_max - rect.re_min), cand)
            };
            let (v, dv) = f.eval(z)?;
            if v.norm() / dv.norm().max(1e-300) < threshold {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(cand);
        }
    }
    Err(Error::ZeroOnContour {
        retries: MAX_DILATIONS,
    })
}

/// Newton refinement from the rectangle center, falling back to a
/// shrinking grid descent on |F| confined to the rectangle. The
/// argument-principle count guarantees the zero lies inside, so any
/// converged point outside the (slightly padded) rectangle is rejected
/// rather than trusted.
fn refine_root<F: EntireFn + ?Sized>(f: &F, rect: &Rect, tol: f64) -> Result<Complex64> {
    let pad = 16.0 * tol;
    let accept = Rect {
        re_min: rect.re_min - pad,
        re_max: rect.re_max + pad,
        im_min: rect.im_min - pad,
        im_max: rect.im_max + pad,
    };
    let newton = |mut k: Complex64| -> Result<Option<Complex64>> {
        for _ in 0..300 {
            let (v, dv) = f.eval(k)?;
            if dv.norm() == 0.0 {
                return Ok(None);
            }
            let step = v / dv;
            k -= step;
            if !accept.contains(k) {
                return Ok(None);
            }
            if step.norm() < 0.5 * tol {
                return Ok(Some(k));
            }
        }
        Ok(None)
    };
    if let Some(k) = newton(rect.center())? {
        return Ok(k);
    }
    // fallback: shrinking 9x9 grid descent on |F| inside the rectangle,
    // with a Newton polish attempt from each new center
    let mut center = rect.center();
    let mut half_re = 0.5 * (rect.re_max - rect.re_min);
    let mut half_im = 0.5 * (rect.im_max - rect.im_min);
    while half_re.max(half_im) > 0.25 * tol {
        let mut best = (f64::INFINITY, center);
        for i in -4i32..=4 {
            for j in -4i32..=4 {
                let z = center
                    + Complex64::new(i as f64 * half_re / 4.0, j as f64 * half_im / 4.0);
                if !accept.contains(z) {
                    continue;
                }
                let (v, _) = f.eval(z)?;
                if v.norm() < best.0 {
                    best = (v.norm(), z);
                }
            }
        }
        center = best.1;
        half_re *= 0.45;
        half_im *= 0.45;
        if let Some(k) = newton(center)? {
            return Ok(k);
        }
    }
    Err(Error::NonConvergedNewton {
        start: rect.center(),
    })
}

fn locate_recursive<F: EntireFn + ?Sized>(
    f: &F,
    rect: &Rect,
    count: i64,
    tol: f64,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<(Complex64, u32)>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let small = rect.diameter() < 64.0 * tol;
    if count == 1 || small {
        // a zero just outside the rectangle can pin the descent to a corner;
        // in that case keep subdividing, which cuts the attractor away
        match refine_root(f, rect, tol) {
            Ok(root) => {
                // multiplicity from a re-count in a small disk around the root
                let disk = Rect {
                    re_min: root.re - 8.0 * tol,
                    re_max: root.re + 8.0 * tol,
                    im_min: root.im - 8.0 * tol,
                    im_max: root.im + 8.0 * tol,
                };
                let (m, _) = count_zeros_adjusted(f, &disk, rng)?;
                out.push((root, m.max(1) as u32));
                return Ok(());
            }
            Err(e @ Error::NonConvergedNewton { .. }) if !small => {
                let _ = e;
            }
            Err(e) => return Err(e),
        }
    }
    // quadrisection with zero-avoiding split lines; the clearance probe can
    // miss a zero the winding integral then trips over, so splits that fail
    // to partition the count are re-drawn with forced jitter
    for attempt in 0..5 {
        let xs = pick_split(f, rect, true, attempt > 0, rng)?;
        let ys = pick_split(f, rect, false, attempt > 0, rng)?;
        let children = [
            Rect {
                re_max: xs,
                im_max: ys,
                ..*rect
            },
            Rect {
                re_min: xs,
                im_max: ys,
                ..*rect
            },
            Rect {
                re_max: xs,
                im_min: ys,
                ..*rect
            },
            Rect {
                re_min: xs,
                im_min: ys,
                ..*rect
            },
        ];
        let counts: Result<Vec<i64>> = children.iter().map(|c| contour_count(f, c)).collect();
        match counts {
            Ok(counts) if counts.iter().sum::<i64>() == count => {
                for (child, &c) in children.iter().zip(&counts) {
                    locate_recursive(f, child, c, tol, rng, out)?;
                }
                return Ok(());
            }
            _ => continue, // split line grazed a zero; re-jitter
        }
    }
    Err(Error::ZeroOnContour {
        retries: MAX_DILATIONS,
    })
}

/// Locates every zero of `f` inside `window` to tolerance `tol`. The seed
/// drives the contour-dilation and split-jitter randomness.
pub fn locate_zeros<F: EntireFn + ?Sized>(
    f: &F,
    window: &Rect,
    tol: f64,
    seed: u64,
) -> Result<SpectrumWindow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (total, used_rect) = count_zeros_adjusted(f, window, &mut rng)?;
    let mut raw = Vec::new();
    locate_recursive(f, &used_rect, total, tol, &mut rng, &mut raw)?;
    // merge duplicates that refined to the same root from adjacent boxes
    raw.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    let mut merged: Vec<(Complex64, u32)> = Vec::new();
    for (k, m) in raw {
        match merged.last_mut() {
            Some(last) if (last.0 - k).norm() <= 16.0 * tol => {
                // same zero seen twice; keep one copy (the recount already
                // reflects the full multiplicity)
                last.1 = last.1.max(m);
            }
            _ => merged.push((k, m)),
        }
    }
    let points: Vec<SpectralPoint> = merged
        .into_iter()
        .map(|(k, m)| SpectralPoint {
            k,
            multiplicity: m,
            kind: classify(k),
        })
        .collect();
    let sum: i64 = points.iter().map(|p| p.multiplicity as i64).sum();
    Ok(SpectrumWindow {
        rect: used_rect,
        points,
        total_count: total,
        complete: sum == total,
    })
}

/// Number of zeros of modulus ≤ r, with multiplicity, from a complete
/// window that covers the disk.
pub fn counting_function(window: &SpectrumWindow, r: f64) -> Result<u32> {
    if !window.complete || !window.rect.contains_disk(Complex64::new(0.0, 0.0), r) {
        return Err(Error::IncompleteCoverage);
    }
    Ok(window
        .points
        .iter()
        .filter(|p| p.k.norm() <= r)
        .map(|p| p.multiplicity)
        .sum())
}
