//! Independent oracle for the Jost solution: the iterated-integral series
//! for `y(x,k) = e^{-ikx} ψ₊(x,k)`,
//!
//! `y = 1 + Σ y_n`, `y_n(x) = ∫_x^γ G(t-x,k) q(t) y_{n-1}(t) dt`,
//! `G(t,k) = sin(kt)/k · e^{ikt}`,
//!
//! with the term-by-term envelope `|y_n(x)| ≤ h^n/n! · e^{2(γ-x)v₋}`,
//! `h = Q / max{1,|k|}`, asserted for every computed term. Each level is
//! sampled on piecewise Chebyshev meshes and integrated by adaptive
//! Gauss–Kronrod with per-level tolerance `tol / 2^n`.
//!
//! This path never touches the transfer matrices, so it can certify them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::PiecewisePotential;
use crate::quad::adaptive_gk;

const MAX_TERMS: usize = 160;
const CHEB_ORDER: usize = 16;

/// The series value at one (x, k) with its terms and certified tail bound.
#[derive(Debug, Clone)]
pub struct NeumannSeriesResult {
    pub value: Complex64,
    /// `terms[n]` is `y_{n+1}(x, k)`.
    pub terms: Vec<Complex64>,
    /// Tail of the `h^n/n!` envelope beyond the computed terms.
    pub truncation_bound: f64,
    pub h: f64,
    pub v_minus: f64,
}

/// One level of the series, stored as Chebyshev–Lobatto samples on a
/// shared mesh over `[0, γ]`.
#[derive(Clone)]
struct ChebLevel {
    subs: Vec<SubCheb>,
}

#[derive(Clone)]
struct SubCheb {
    a: f64,
    b: f64,
    /// values at x_j = a + (b-a)(1 - cos(jπ/N))/2
    vals: Vec<Complex64>,
}

impl SubCheb {
    fn nodes(a: f64, b: f64) -> Vec<f64> {
        (0..=CHEB_ORDER)
            .map(|j| {
                let t = (j as f64 * std::f64::consts::PI / CHEB_ORDER as f64).cos();
                a + (b - a) * (1.0 - t) / 2.0
            })
            .collect()
    }

    fn eval(&self, x: f64) -> Complex64 {
        // barycentric interpolation at Chebyshev–Lobatto points
        let n = CHEB_ORDER;
        let t = 1.0 - 2.0 * (x - self.a) / (self.b - self.a); // back to cos grid
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..=n {
            let xj = (j as f64 * std::f64::consts::PI / n as f64).cos();
            let d = t - xj;
            if d.abs() < 1e-14 {
                return self.vals[j];
            }
            let mut wj = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                wj *= 0.5;
            }
            num += self.vals[j] * (wj / d);
            den += wj / d;
        }
        num / den
    }
}

impl ChebLevel {
    fn eval(&self, x: f64) -> Complex64 {
        let idx = self
            .subs
            .partition_point(|s| s.b < x)
            .min(self.subs.len() - 1);
        self.subs[idx].eval(x)
    }
}

struct SeriesBuilder<'a> {
    p: &'a PiecewisePotential,
    k: Complex64,
    gamma: f64,
    /// mesh edges: breakpoints plus oscillation-resolving subdivisions
    edges: Vec<f64>,
}

impl<'a> SeriesBuilder<'a> {
    fn new(p: &'a PiecewisePotential, k: Complex64) -> Self {
        let gamma = p.gamma();
        let mut cuts: Vec<f64> = vec![0.0, gamma];
        cuts.extend(p.breakpoints().iter().copied().filter(|&x| x > 0.0 && x < gamma));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        // resolve the e^{2ikt} oscillation: a few radians per subinterval
        let max_len = 1.5 / k.norm().max(1.0);
        let mut edges = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let n = (((b - a) / max_len).ceil() as usize).max(1);
            for i in 0..n {
                edges.push(a + (b - a) * i as f64 / n as f64);
            }
        }
        edges.push(gamma);
        SeriesBuilder { p, k, gamma, edges }
    }

    fn q_at(&self, t: f64) -> f64 {
        let bp = self.p.breakpoints();
        if bp.is_empty() || t < bp[0] || t >= bp[bp.len() - 1] {
            return 0.0;
        }
        let j = bp.partition_point(|&x| x <= t) - 1;
        self.p.values()[j.min(self.p.values().len() - 1)]
    }

    /// kernel G(t, k) = sin(kt)/k · e^{ikt}, entire in k
    fn kernel(&self, t: f64) -> Complex64 {
        let k = self.k;
        if k.norm() * t < 1e-8 {
            // G = t + O(k t²); series of (e^{2ikt}-1)/(2ik)
            let ikt = Complex64::new(0.0, 1.0) * k * t;
            return t * (1.0 + ikt + 2.0 * ikt * ikt / 3.0);
        }
        let kt = k * t;
        kt.sin() / k * (Complex64::new(0.0, 1.0) * kt).exp()
    }

    /// y_n(x) = ∫_x^γ G(t-x) q(t) prev(t) dt, split at mesh edges
    fn term_at(&self, x: f64, prev: &ChebLevel, tol: f64) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut a = x;
        let segs: Vec<f64> = self
            .p
            .breakpoints()
            .iter()
            .copied()
            .filter(|&e| e > x && e < self.gamma)
            .chain(std::iter::once(self.gamma))
            .collect();
        let nseg = segs.len().max(1);
        for &b in &segs {
            total += adaptive_gk(
                |t| Ok(self.kernel(t - x) * self.q_at(t) * prev.eval(t)),
                a,
                b,
                tol / nseg as f64,
            )?;
            a = b;
        }
        Ok(total)
    }

    fn level(&self, prev: &ChebLevel, tol: f64) -> Result<ChebLevel> {
        let mut subs = Vec::with_capacity(self.edges.len() - 1);
        for w in self.edges.windows(2) {
            let nodes = SubCheb::nodes(w[0], w[1]);
            let mut vals = Vec::with_capacity(nodes.len());
            for &x in &nodes {
                vals.push(self.term_at(x, prev, tol)?);
            }
            subs.push(SubCheb {
                a: w[0],
                b: w[1],
                vals,
            });
        }
        Ok(ChebLevel { subs })
    }

    fn constant_level(&self, c: Complex64) -> ChebLevel {
        let subs = self
            .edges
            .windows(2)
            .map(|w| SubCheb {
                a: w[0],
                b: w[1],
                vals: vec![c; CHEB_ORDER + 1],
            })
            .collect();
        ChebLevel { subs }
    }
}

/// All series levels at one k, reusable for several x and for the
/// Wronskian integral.
pub struct NeumannSeries<'a> {
    builder: SeriesBuilder<'a>,
    levels: Vec<ChebLevel>,
    pub h: f64,
    pub v_minus: f64,
}

impl<'a> NeumannSeries<'a> {
    /// Builds levels until the envelope tail at x = 0 drops below `tol`.
    pub fn build(p: &'a PiecewisePotential, k: Complex64, tol: f64) -> Result<Self> {
        if p.support_start() < 0.0 {
            return Err(Error::InvalidParameter(
                "series oracle requires supp q ⊂ [0, γ]".into(),
            ));
        }
        let c = p.constants();
        let v_minus = (k.im.abs() - k.im) / 2.0;
        let h = c.q_const / k.norm().max(1.0);
        let builder = SeriesBuilder::new(p, k);
        let mut levels = Vec::new();
        if p.is_zero() {
            return Ok(NeumannSeries {
                builder,
                levels,
                h,
                v_minus,
            });
        }
        let prefactor = (2.0 * c.gamma * v_minus).exp();
        let mut envelope = 1.0; // h^n / n!
        let mut prev = builder.constant_level(Complex64::new(1.0, 0.0));
        for n in 1..=MAX_TERMS {
            envelope *= h / n as f64;
            // tail of Σ h^m/m! beyond n-1 terms
            let tail = prefactor * envelope * h.exp();
            if tail < tol {
                break;
            }
            if n == MAX_TERMS {
                return Err(Error::EnvelopeNotReached {
                    tol,
                    max_terms: MAX_TERMS,
                });
            }
            let quad_tol = (tol / 2f64.powi(n as i32)).max(envelope * prefactor * 1e-12);
            let level = builder.level(&prev, quad_tol.max(1e-18))?;
            prev = level.clone();
            levels.push(level);
        }
        Ok(NeumannSeries {
            builder,
            levels,
            h,
            v_minus,
        })
    }

    /// y(x, k) with per-term envelope checks and the certified tail.
    pub fn evaluate_at(&self, x: f64) -> NeumannSeriesResult {
        let gamma = self.builder.gamma;
        let mut value = Complex64::new(1.0, 0.0);
        let mut terms = Vec::with_capacity(self.levels.len());
        let mut envelope = 1.0;
        let prefactor = (2.0 * (gamma - x) * self.v_minus).exp();
        for (i, level) in self.levels.iter().enumerate() {
            let n = i + 1;
            envelope *= self.h / n as f64;
            let t = level.eval(x);
            let bound = envelope * prefactor;
            assert!(
                t.norm() <= bound * (1.0 + 1e-6) + 1e-12,
                "term {n} envelope violated at x = {x}: |y_n| = {} > {}",
                t.norm(),
                bound
            );
            value += t;
            terms.push(t);
        }
        let n = self.levels.len();
        let tail = if self.builder.p.is_zero() {
            0.0
        } else {
            envelope * self.h / (n as f64 + 1.0) * self.h.exp() * prefactor
        };
        NeumannSeriesResult {
            value,
            terms,
            truncation_bound: tail,
            h: self.h,
            v_minus: self.v_minus,
        }
    }

    /// w(k) through the series: `w = 2ik - q₀ - ∫_0^γ q (y - 1) dt`.
    pub fn wronskian(&self, tol: f64) -> Result<Complex64> {
        let k = self.builder.k;
        let c = self.builder.p.constants();
        let two_ik = 2.0 * Complex64::new(0.0, 1.0) * k;
        if self.builder.p.is_zero() {
            return Ok(two_ik);
        }
        let gamma = self.builder.gamma;
        let mut integral = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        let bp: Vec<f64> = self
            .builder
            .p
            .breakpoints()
            .iter()
            .copied()
            .filter(|&e| e > 0.0 && e < gamma)
            .chain(std::iter::once(gamma))
            .collect();
        for &b in &bp {
            integral += adaptive_gk(
                |t| {
                    let y1 = self
                        .levels
                        .iter()
                        .fold(Complex64::new(0.0, 0.0), |acc, l| acc + l.eval(t));
                    Ok(self.builder.q_at(t) * y1)
                },
                a,
                b,
                tol / bp.len() as f64,
            )?;
            a = b;
        }
        Ok(two_ik - c.q0 - integral)
    }
}

/// One-shot evaluation of the series at (x, k).
pub fn neumann_series(
    p: &PiecewisePotential,
    x: f64,
    k: Complex64,
    tol: f64,
) -> Result<NeumannSeriesResult> {
    if !(0.0..=p.gamma() + 1e-12).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "x = {x} outside [0, γ = {}]",
            p.gamma()
        )));
    }
    let series = NeumannSeries::build(p, k, tol)?;
    Ok(series.evaluate_at(x))
}
