//! Compactly supported piecewise-constant potentials and their derived
//! constants.
//!
//! A potential is stored as an ordered list of constant pieces on
//! `[x_0, x_M]` and is identically zero outside. The derived constants
//! (support diameter, L1 norm, weighted norm) feed every bound downstream.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which operator the potential perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorCase {
    /// Whole line.
    Line,
    /// Half-line with f(0) = 0.
    #[serde(rename = "dirichlet")]
    DirichletHalfLine,
    /// Half-line with f'(0) = 0.
    #[serde(rename = "neumann")]
    NeumannHalfLine,
}

impl OperatorCase {
    pub fn is_half_line(self) -> bool {
        !matches!(self, OperatorCase::Line)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorCase::Line => "line",
            OperatorCase::DirichletHalfLine => "dirichlet",
            OperatorCase::NeumannHalfLine => "neumann",
        }
    }
}

/// A real potential that is constant on each `[x_{j-1}, x_j)` and zero
/// outside `[x_0, x_M]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePotential {
    /// Strictly increasing `x_0 < x_1 < ... < x_M`; empty for q = 0.
    breakpoints: Vec<f64>,
    /// Piece values `q_1 ... q_M` (one fewer than breakpoints).
    values: Vec<f64>,
    case: OperatorCase,
}

/// Norms and constants of a potential in canonical position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialConstants {
    /// Support diameter: `x_M - x_0` on the line, `x_M` on the half-line.
    pub gamma: f64,
    /// `∫ |q| dt`
    pub norm_l1: f64,
    /// `∫ t |q(t)| dt` after shifting the support into `[0, γ]`.
    pub norm_weighted: f64,
    /// `∫ q dt`
    pub q0: f64,
    /// `max{ ||q||, ||q||_1 }`
    pub q_const: f64,
}

impl PiecewisePotential {
    pub fn new(case: OperatorCase, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() {
            if !values.is_empty() {
                return Err(Error::InvalidPotential(
                    "values must be empty when breakpoints are empty".into(),
                ));
            }
        } else {
            if breakpoints.len() != values.len() + 1 {
                return Err(Error::InvalidPotential(format!(
                    "expected {} values for {} breakpoints, got {}",
                    breakpoints.len() - 1,
                    breakpoints.len(),
                    values.len()
                )));
            }
            if breakpoints.iter().any(|x| !x.is_finite())
                || values.iter().any(|q| !q.is_finite())
            {
                return Err(Error::InvalidPotential(
                    "breakpoints and values must be finite".into(),
                ));
            }
            if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPotential(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
            if case.is_half_line() && breakpoints[0] < 0.0 {
                return Err(Error::InvalidPotential(
                    "half-line potentials require x_0 >= 0".into(),
                ));
            }
        }
        Ok(PiecewisePotential {
            breakpoints,
            values,
            case,
        })
    }

    /// The potential q = 0.
    pub fn zero(case: OperatorCase) -> Self {
        PiecewisePotential {
            breakpoints: Vec::new(),
            values: Vec::new(),
            case,
        }
    }

    pub fn case(&self) -> OperatorCase {
        self.case
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_pieces(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support_start(&self) -> f64 {
        self.breakpoints.first().copied().unwrap_or(0.0)
    }

    pub fn support_end(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// Support diameter in the paper's sense: `x_M - x_0` on the line,
    /// `sup supp q` on the half-line.
    pub fn gamma(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if self.case.is_half_line() {
            self.support_end()
        } else {
            self.support_end() - self.support_start()
        }
    }

    pub fn with_case(&self, case: OperatorCase) -> Result<Self> {
        PiecewisePotential::new(case, self.breakpoints.clone(), self.values.clone())
    }

    /// Canonical form: zero-valued edge pieces trimmed, and (line case only)
    /// translated so the support starts at 0. Zeros of the Wronskian are
    /// unchanged by the translation. Returns the potential and the shift.
    ///
    /// Half-line potentials are never translated: the boundary condition
    /// pins x = 0, and their support already sits in `[0, γ]`.
    pub fn canonicalize(&self) -> (Self, f64) {
        let mut first = 0;
        let mut last = self.values.len();
        while first < last && self.values[first] == 0.0 {
            first += 1;
        }
        while last > first && self.values[last - 1] == 0.0 {
            last -= 1;
        }
        if first == last {
            return (PiecewisePotential::zero(self.case), 0.0);
        }
        let shift = if self.case.is_half_line() {
            0.0
        } else {
            self.breakpoints[first]
        };
        let breakpoints = self.breakpoints[first..=last]
            .iter()
            .map(|x| x - shift)
            .collect();
        let values = self.values[first..last].to_vec();
        (
            PiecewisePotential {
                breakpoints,
                values,
                case: self.case,
            },
            shift,
        )
    }

    pub fn is_canonical(&self) -> bool {
        let (canon, shift) = self.canonicalize();
        shift == 0.0 && canon == *self
    }

    /// Exact closed-form piecewise integrals of `|q|`, `t|q|` and `q`.
    /// The weighted norm is taken relative to the start of the support, i.e.
    /// after the canonical shift to `[0, γ]`.
    pub fn constants(&self) -> PotentialConstants {
        let x0 = if self.case.is_half_line() {
            0.0
        } else {
            self.support_start()
        };
        let mut norm_l1 = 0.0;
        let mut norm_weighted = 0.0;
        let mut q0 = 0.0;
        for (w, &q) in self.breakpoints.windows(2).zip(&self.values) {
            let (a, b) = (w[0] - x0, w[1] - x0);
            norm_l1 += q.abs() * (b - a);
            norm_weighted += q.abs() * (b * b - a * a) / 2.0;
            q0 += q * (b - a);
        }
        PotentialConstants {
            gamma: self.gamma(),
            norm_l1,
            norm_weighted,
            q0,
            q_const: norm_l1.max(norm_weighted),
        }
    }

    /// Even extension `q~(x) = q(|x|)` of a half-line potential, as a line
    /// potential on `[-γ, γ]`, together with the constant
    /// `Q~ = 2 ||q|| max{1, γ}` of the shifted potential `q~(x - γ)`.
    pub fn even_extension(&self) -> Result<(Self, f64)> {
        if !self.case.is_half_line() {
            return Err(Error::InvalidParameter(
                "even extension requires a half-line potential".into(),
            ));
        }
        if self.is_zero() {
            return Ok((PiecewisePotential::zero(OperatorCase::Line), 0.0));
        }
        let x0 = self.support_start();
        let mut breakpoints: Vec<f64> = self.breakpoints.iter().rev().map(|x| -x).collect();
        let mut values: Vec<f64> = self.values.iter().rev().copied().collect();
        if x0 > 0.0 {
            // bridge the reflected gap (-x0, x0) with an explicit zero piece
            values.push(0.0);
        } else {
            breakpoints.pop();
        }
        breakpoints.extend_from_slice(&self.breakpoints);
        values.extend_from_slice(&self.values);
        let tilde = PiecewisePotential::new(OperatorCase::Line, breakpoints, values)?;
        let norm_l1 = self.constants().norm_l1;
        let wt_q = 2.0 * norm_l1 * self.gamma().max(1.0);
        Ok((tilde, wt_q))
    }

    /// Unit-support rescaling `(x, k, q) -> (x/γ, γk, γ²q)`: the returned
    /// potential has γ = 1 and its spectral parameter is `γ k`.
    pub fn rescale_to_unit_support(&self) -> Result<Self> {
        let g = self.gamma();
        if g <= 0.0 {
            return Err(Error::InvalidParameter(
                "cannot rescale a potential with empty support".into(),
            ));
        }
        let breakpoints = self.breakpoints.iter().map(|x| x / g).collect();
        let values = self.values.iter().map(|q| q * g * g).collect();
        PiecewisePotential::new(self.case, breakpoints, values)
    }
}
