//! Jost solutions, Wronskian and scattering quantities for piecewise
//! constant potentials, by exact transfer matrices over the pieces.
//!
//! On a piece where q is the constant `q_j`, solutions of
//! `-f'' + q_j f = k² f` propagate by an entire 2×2 matrix built from
//! `C(z) = cos √z` and `S(z) = sin √z / √z` at `z = (k² - q_j) Δ²`.
//! Everything stays entire in k; there is no branch cut anywhere.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{cos_sqrt, cos_sqrt_prime, sinc_sqrt, sinc_sqrt_prime};
use crate::potential::{OperatorCase, PiecewisePotential};

const OVERFLOW_LIMIT: f64 = 1e280;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Values of the Jost solution and derived entire functions at one k.
#[derive(Debug, Clone, Copy)]
pub struct JostEvaluation {
    pub k: Complex64,
    /// ψ₊(0, k)
    pub psi0: Complex64,
    /// ψ₊'(0, k)
    pub dpsi0: Complex64,
    /// ∂ψ₊(0, k)/∂k
    pub psi0_dk: Complex64,
    /// ∂ψ₊'(0, k)/∂k
    pub dpsi0_dk: Complex64,
    /// Wronskian w(k) = {ψ₋, ψ₊}
    pub w: Complex64,
    /// s(k) = {ψ₊(·, k), ψ₋(·, -k)}
    pub s: Complex64,
    /// dw/dk
    pub dw: Complex64,
}

/// Entire propagator of (f, f') across a step of signed length `dx` with
/// constant potential value `q`, together with its k-derivative.
#[derive(Debug, Clone, Copy)]
pub struct EntirePieceMatrix {
    pub m: [[Complex64; 2]; 2],
    pub dm_dk: [[Complex64; 2]; 2],
}

impl EntirePieceMatrix {
    pub fn new(k: Complex64, q: f64, dx: f64) -> Self {
        let z = k * k - q;
        let zeta = z * (dx * dx);
        let c = cos_sqrt(zeta);
        let s = sinc_sqrt(zeta);
        let cp = cos_sqrt_prime(zeta);
        let sp = sinc_sqrt_prime(zeta);
        let dz_dk = 2.0 * k;
        // d/dz of each entry, then chain rule through z
        let dx2 = dx * dx;
        let dx3 = dx2 * dx;
        Self {
            m: [[c, dx * s], [-z * dx * s, c]],
            dm_dk: [
                [dz_dk * dx2 * cp, dz_dk * dx3 * sp],
                [dz_dk * (-dx * s - z * dx3 * sp), dz_dk * dx2 * cp],
            ],
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    fn apply(&self, f: Complex64, df: Complex64) -> (Complex64, Complex64) {
        (
            self.m[0][0] * f + self.m[0][1] * df,
            self.m[1][0] * f + self.m[1][1] * df,
        )
    }
}

/// State (f, f', ∂f/∂k, ∂f'/∂k) propagated through the pieces.
#[derive(Debug, Clone, Copy)]
struct State {
    f: Complex64,
    df: Complex64,
    f_k: Complex64,
    df_k: Complex64,
}

impl State {
    fn step(&self, mat: &EntirePieceMatrix) -> State {
        let (f, df) = mat.apply(self.f, self.df);
        let (f_k, df_k) = mat.apply(self.f_k, self.df_k);
        let extra_f = mat.dm_dk[0][0] * self.f + mat.dm_dk[0][1] * self.df;
        let extra_df = mat.dm_dk[1][0] * self.f + mat.dm_dk[1][1] * self.df;
        State {
            f,
            df,
            f_k: f_k + extra_f,
            df_k: df_k + extra_df,
        }
    }

    fn overflows(&self) -> bool {
        // NaN (from inf - inf) must flag as well, hence the negated form
        !(self.f.norm() <= OVERFLOW_LIMIT
            && self.df.norm() <= OVERFLOW_LIMIT
            && self.f_k.norm() <= OVERFLOW_LIMIT
            && self.df_k.norm() <= OVERFLOW_LIMIT)
    }
}

/// Evaluates ψ₊(0,k), ψ₊'(0,k), w(k), s(k) and analytic k-derivatives.
///
/// ψ₊ equals `e^{ikx}` to the right of the support and is propagated
/// backwards through the pieces. The support may start at a negative
/// x₀ (centered even extensions); the Wronskian is then
/// `w = e^{-ik x₀} (ik ψ₊(x₀) + ψ₊'(x₀))`, which reduces to
/// `w = ik ψ₊(0) + ψ₊'(0)` for supp q ⊂ [0, γ].
pub fn evaluate(p: &PiecewisePotential, k: Complex64) -> Result<JostEvaluation> {
    let overflow = |_| Error::Overflow { k };

    if p.is_zero() {
        return Ok(JostEvaluation {
            k,
            psi0: Complex64::new(1.0, 0.0),
            dpsi0: I * k,
            psi0_dk: Complex64::new(0.0, 0.0),
            dpsi0_dk: I,
            w: 2.0 * I * k,
            s: Complex64::new(0.0, 0.0),
            dw: 2.0 * I,
        });
    }

    let bp = p.breakpoints();
    let vals = p.values();
    let x0 = bp[0];
    let x_end = bp[bp.len() - 1];

    // starting data at the right edge of the support
    let e = (I * k * x_end).exp();
    let mut state = State {
        f: e,
        df: I * k * e,
        f_k: I * x_end * e,
        df_k: I * e + I * k * (I * x_end * e),
    };

    // values at x = 0, captured during the backward sweep
    let mut at_zero: Option<State> = None;
    if x_end <= 0.0 {
        // support entirely to the left of 0: free continuation gives e^{ikx}
        at_zero = Some(State {
            f: Complex64::new(1.0, 0.0),
            df: I * k,
            f_k: Complex64::new(0.0, 0.0),
            df_k: I,
        });
    }

    for j in (0..vals.len()).rev() {
        let (a, b) = (bp[j], bp[j + 1]);
        if a < 0.0 && 0.0 < b {
            // split at 0 to record ψ₊(0), ψ₊'(0)
            let m1 = EntirePieceMatrix::new(k, vals[j], -b);
            state = state.step(&m1);
            at_zero = Some(state);
            let m2 = EntirePieceMatrix::new(k, vals[j], a);
            state = state.step(&m2);
        } else {
            let m = EntirePieceMatrix::new(k, vals[j], a - b);
            state = state.step(&m);
            if a == 0.0 {
                at_zero = Some(state);
            }
        }
        if state.overflows() {
            return Err(overflow(()));
        }
    }

    let at_x0 = state;
    let at_zero = match at_zero {
        Some(s) => s,
        None => {
            // x0 > 0: free propagation from x0 down to 0
            let m = EntirePieceMatrix::new(k, 0.0, -x0);
            at_x0.step(&m)
        }
    };

    // w = e^{-ik x0} (ik ψ₊(x0) + ψ₊'(x0)); s = e^{ik x0} (ik ψ₊(x0) - ψ₊'(x0))
    let em = (-I * k * x0).exp();
    let ep = (I * k * x0).exp();
    let w = em * (I * k * at_x0.f + at_x0.df);
    let s = ep * (I * k * at_x0.f - at_x0.df);
    let dw = em
        * (-I * x0 * (I * k * at_x0.f + at_x0.df)
            + (I * at_x0.f + I * k * at_x0.f_k + at_x0.df_k));
    if !(w.norm() <= OVERFLOW_LIMIT && s.norm() <= OVERFLOW_LIMIT) {
        return Err(overflow(()));
    }

    Ok(JostEvaluation {
        k,
        psi0: at_zero.f,
        dpsi0: at_zero.df,
        psi0_dk: at_zero.f_k,
        dpsi0_dk: at_zero.df_k,
        w,
        s,
        dw,
    })
}

/// w(k) - 2ik + q₀, with the envelope bounds of the fundamental-solution
/// estimates asserted:
/// `|w_*| ≤ ||q|| h e^{h + 2γ v₋}` and `|w_*| ≤ (Q²/|k|₁) e^{Q/|k|₁ + 2γ v₋}`.
pub fn w_star(p: &PiecewisePotential, k: Complex64) -> Result<Complex64> {
    let c = p.constants();
    let ev = evaluate(p, k)?;
    let ws = ev.w - 2.0 * I * k + c.q0;

    let v_minus = (k.im.abs() - k.im) / 2.0;
    let k1 = k.norm().max(1.0);
    let h = c.q_const / k1;
    let slack = 1.0 + 1e-9;
    let env1 = c.norm_l1 * h * (h + 2.0 * c.gamma * v_minus).exp();
    let env2 = (c.q_const * c.q_const / k1) * (c.q_const / k1 + 2.0 * c.gamma * v_minus).exp();
    if env1.is_finite() {
        assert!(
            ws.norm() <= env1 * slack + 1e-12,
            "w_* envelope violated at k = {k}: |w_*| = {} > {}",
            ws.norm(),
            env1
        );
    }
    if env2.is_finite() {
        assert!(
            ws.norm() <= env2 * slack + 1e-12,
            "w_* Q-form envelope violated at k = {k}: |w_*| = {} > {}",
            ws.norm(),
            env2
        );
    }
    Ok(ws)
}

/// Scattering matrix at real k ≠ 0 for a line-case potential:
/// entries `1/a = 2ik/w` on the diagonal and `r_± = s(∓k)/w(k)` off it.
pub fn scattering_matrix(p: &PiecewisePotential, k: f64) -> Result<[[Complex64; 2]; 2]> {
    if p.case() != OperatorCase::Line {
        return Err(Error::InvalidParameter(
            "scattering matrix requires the line case".into(),
        ));
    }
    if k == 0.0 {
        return Err(Error::InvalidParameter(
            "scattering matrix requires k != 0".into(),
        ));
    }
    let kc = Complex64::new(k, 0.0);
    let ev = evaluate(p, kc)?;
    let ev_neg = evaluate(p, -kc)?;
    let a_inv = 2.0 * I * kc / ev.w;
    let r_minus = ev_neg.s / ev.w;
    let r_plus = ev.s / ev.w;
    Ok([[a_inv, r_minus], [r_plus, a_inv]])
}

/// The entire function whose zeros are the spectrum for the given case:
/// w for the line, ψ₊(0,·) for Dirichlet, ψ₊'(0,·) for Neumann.
/// Returns (F(k), F'(k)).
pub fn spectral_function(
    p: &PiecewisePotential,
) -> impl Fn(Complex64) -> Result<(Complex64, Complex64)> + '_ {
    let case = p.case();
    move |k| {
        let ev = evaluate(p, k)?;
        Ok(match case {
            OperatorCase::Line => (ev.w, ev.dw),
            OperatorCase::DirichletHalfLine => (ev.psi0, ev.psi0_dk),
            OperatorCase::NeumannHalfLine => (ev.dpsi0, ev.dpsi0_dk),
        })
    }
}
