//! Collar and tube volumes for closed totally geodesic hypersurfaces in
//! hyperbolic 4-manifolds.
//!
//! * `r(x) = ln coth(x/2)`, the collar radius function, an involution.
//! * `V(r) = 4π ∫₀^r sinh²t dt = π(sinh 2r - 2r)`, the volume of a
//!   hyperbolic 3-ball.
//! * `d₄(A) = ½·(V∘r)⁻¹(A/2)` and `c₄(A) = ½·(V∘r)⁻¹(A)`.
//! * `𝒱′(A) = 2A ∫₀^{d₄(A)} cosh³t dt = 2A(sinh d + sinh³d / 3)`.
//!
//! A manifold with Euler characteristic χ has volume `(4π²/3)χ`; `K`
//! disjoint hypersurfaces of 3-volume `A` need at least `K·𝒱′(A)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Slack below which `required > available` is not called a contradiction.
pub const CONTRADICTION_SLACK: f64 = 1e-6;
/// Absolute tolerance of the bisection for `(V∘r)⁻¹`.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

fn require_positive(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive and finite, got {x}")))
    }
}

/// `r(x) = ln coth(x/2)`, evaluated as `ln(1+e^-x) - ln(1-e^-x)`. The
/// second logarithm goes through `ln_1p` for large `x` and through `expm1`
/// for small `x`, so neither end loses precision.
pub fn collar_radius(x: f64) -> Result<f64> {
    require_positive(x, "x")?;
    let e = (-x).exp();
    let ln_one_minus_e = if x > std::f64::consts::LN_2 {
        (-e).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    };
    Ok(e.ln_1p() - ln_one_minus_e)
}

/// `V(r) = π(sinh 2r - 2r)`, with a series near 0 where the closed form
/// cancels.
pub fn ball_volume(r: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative and finite, got {r}")));
    }
    if r < 1e-2 {
        // sinh 2r - 2r = Σ_{n≥1} (2r)^{2n+1} / (2n+1)!
        let u = 2.0 * r;
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = 0.0;
        let mut n = 1.0;
        while term > sum * 1e-18 && n < 20.0 {
            sum += term;
            term *= u2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
            n += 1.0;
        }
        return Ok(PI * sum);
    }
    Ok(PI * ((2.0 * r).sinh() - 2.0 * r))
}

fn v_of_r(x: f64) -> f64 {
    ball_volume(collar_radius(x).expect("x > 0")).expect("r >= 0")
}

/// The `x > 0` with `V(r(x)) = target`. `V∘r` decreases from `+∞` to 0,
/// so the solution exists and is unique for every positive target.
fn invert_v_of_r(target: f64) -> Result<f64> {
    require_positive(target, "volume")?;
    let (mut lo, mut hi) = (1e-12f64, 50.0f64);
    while v_of_r(lo) < target {
        lo /= 16.0;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::Domain(format!("volume {target} too large to invert")));
        }
    }
    while v_of_r(hi) > target {
        hi *= 2.0;
        if !hi.is_finite() || hi > 700.0 {
            return Err(Error::Domain(format!("volume {target} too small to invert")));
        }
    }
    while hi - lo > BISECTION_TOLERANCE * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if v_of_r(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `d₄(A) = ½·(V∘r)⁻¹(A/2)`.
pub fn d4(a: f64) -> Result<f64> {
    require_positive(a, "A")?;
    Ok(0.5 * invert_v_of_r(a / 2.0)?)
}

/// `c₄(A) = ½·(V∘r)⁻¹(A) = d₄(2A)`. Since `V∘r` is decreasing,
/// `c₄(A) < d₄(A)`.
pub fn c4(a: f64) -> Result<f64> {
    d4(2.0 * a)
}

/// `∫₀^d cosh³t dt = sinh d + sinh³d / 3`.
pub fn cosh_cubed_integral(d: f64) -> f64 {
    let s = d.sinh();
    s + s * s * s / 3.0
}

/// `𝒱′(A) = 2A(sinh d + sinh³d / 3)` with `d = d₄(A)`.
pub fn tube_volume(a: f64) -> Result<f64> {
    let d = d4(a)?;
    Ok(2.0 * a * cosh_cubed_integral(d))
}

/// Volume of a finite-volume hyperbolic 4-manifold of Euler characteristic
/// χ: `(4π²/3)χ`.
pub fn volume_from_euler(chi: u64) -> f64 {
    4.0 * PI * PI / 3.0 * chi as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollarProfile {
    #[serde(rename = "A")]
    pub a: f64,
    pub d4: f64,
    pub c4: f64,
    pub tube_volume: f64,
}

pub fn collar_profile(a: f64) -> Result<CollarProfile> {
    Ok(CollarProfile {
        a,
        d4: d4(a)?,
        c4: c4(a)?,
        tube_volume: tube_volume(a)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionVerdict {
    pub chi: u64,
    pub copies: u64,
    #[serde(rename = "A")]
    pub a: f64,
    pub tube_volume: f64,
    pub available: f64,
    pub required: f64,
    pub contradiction: bool,
}

/// Compares `(4π²/3)χ` with `K·𝒱′(A)`. The contradiction flag is raised
/// only when the requirement exceeds the volume by more than
/// [`CONTRADICTION_SLACK`], so rounding cannot produce one.
pub fn volume_obstruction(chi: u64, copies: u64, a: f64) -> Result<ObstructionVerdict> {
    if chi == 0 || copies == 0 {
        return Err(Error::Domain(format!(
            "Euler characteristic and copy count must be positive, got chi = {chi}, K = {copies}"
        )));
    }
    let tube = tube_volume(a)?;
    let available = volume_from_euler(chi);
    let required = copies as f64 * tube;
    Ok(ObstructionVerdict {
        chi,
        copies,
        a,
        tube_volume: tube,
        available,
        required,
        contradiction: required > available + CONTRADICTION_SLACK,
    })
}
