use serde::Serialize;

use crate::error::{Error, Result};

/// The critical weight `9/5`.
pub const U_CRITICAL: f64 = 9.0 / 5.0;
/// Radius of convergence `4/27` of the block generating function.
pub const Y_CRITICAL: f64 = 4.0 / 27.0;
/// Width of the band around `9/5` flagged as numerically near-critical.
pub const NEAR_CRITICAL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    pub fn of(u: f64) -> Regime {
        if u < U_CRITICAL {
            Regime::Subcritical
        } else if u == U_CRITICAL {
            Regime::Critical
        } else {
            Regime::Supercritical
        }
    }
}

/// `B(y)`, `B'(y)`, `B''(y)` on `[0, 4/27]`; `B''` is infinite at `4/27`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BValues {
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Cubic satisfied by `B(y)`.
pub fn cubic(y: f64, b: f64) -> f64 {
    b * b * b - b * b - 18.0 * y * b + 27.0 * y * y + 16.0 * y
}

/// The roots of the cubic are `4s - 3s^2` over the three solutions of
/// `s^2 (1 - s) = y`; the combinatorial branch is the one with
/// `s in [2/3, 1]`, on which `B' = 2/s` and `B'' = 2 / (s^3 (3s - 2))`.
/// This branch parameter is what we solve for.
pub fn branch_parameter(y: f64) -> Result<f64> {
    if !(0.0..=Y_CRITICAL).contains(&y) {
        return Err(Error::InvalidParameter(format!("y = {y} outside [0, 4/27]")));
    }
    if y == Y_CRITICAL {
        return Ok(2.0 / 3.0);
    }
    // g(s) = s^2 - s^3 decreases on [2/3, 1]; bisect then polish
    let g = |s: f64| s * s * (1.0 - s);
    let (mut lo, mut hi) = (2.0 / 3.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..4 {
        let d = 2.0 * s - 3.0 * s * s;
        if d.abs() < 1e-300 {
            break;
        }
        let next = s - (g(s) - y) / d;
        if !(2.0 / 3.0..=1.0).contains(&next) {
            break;
        }
        s = next;
    }
    Ok(s)
}

fn b_from_branch(s: f64) -> BValues {
    let b2 = if s == 2.0 / 3.0 { f64::INFINITY } else { 2.0 / (s * s * s * (3.0 * s - 2.0)) };
    BValues { b: 4.0 * s - 3.0 * s * s, b1: 2.0 / s, b2 }
}

pub fn b_values(y: f64) -> Result<BValues> {
    if y == Y_CRITICAL {
        return Ok(BValues { b: 4.0 / 3.0, b1: 3.0, b2: f64::INFINITY });
    }
    Ok(b_from_branch(branch_parameter(y)?))
}

/// `y(u)`: `4/27` up to `u = 9/5`, then `(1 - sqrt(1 - 1/u)) (1 - 1/u)`.
pub fn y_of_u(u: f64) -> Result<f64> {
    check_u(u)?;
    if u <= U_CRITICAL {
        Ok(Y_CRITICAL)
    } else {
        let s = (1.0 - 1.0 / u).sqrt();
        Ok((1.0 - s) * s * s)
    }
}

/// The weight at which the offspring law built on `y` is critical:
/// `u = 1 / (2 y B'(y) - B(y) + 1)`.
pub fn critical_weight(y: f64) -> Result<f64> {
    let v = b_values(y)?;
    Ok(1.0 / (2.0 * y * v.b1 - v.b + 1.0))
}

fn check_u(u: f64) -> Result<()> {
    if u.is_finite() && u > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("u must be positive and finite, got {u}")))
    }
}

/// Scalar constants of the block-size law for a given weight `u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseParams {
    pub u: f64,
    pub regime: Regime,
    pub near_critical: bool,
    pub y: f64,
    pub b: f64,
    pub b1: f64,
    /// Infinite at `y = 4/27`.
    #[serde(serialize_with = "finite_or_null")]
    pub b2: f64,
    /// `1 + u (B(y) - 1)`: normalisation of the offspring law.
    pub m_rho: f64,
    /// Mean offspring `E(u) = 2 u y B'(y) / M_rho`.
    pub mean: f64,
    /// Offspring variance, finite only above `9/5`.
    pub variance: Option<f64>,
    /// Closed form `(3u - 3 + 2 sqrt(u (u - 1))) / (5u - 9)` of the variance.
    pub variance_closed: Option<f64>,
    /// Tail constant: `mu(2j) ~ c j^(-5/2) w^(-j)`.
    pub c: f64,
    /// `4 / (27 y)`; equals 1 up to `9/5`.
    pub w: f64,
}

fn finite_or_null<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

impl PhaseParams {
    pub fn new(u: f64) -> Result<Self> {
        check_u(u)?;
        let regime = Regime::of(u);
        let (y, v) = if u <= U_CRITICAL {
            (Y_CRITICAL, b_values(Y_CRITICAL)?)
        } else {
            let s = (1.0 - 1.0 / u).sqrt();
            ((1.0 - s) * s * s, b_from_branch(s))
        };
        let m_rho = 1.0 + u * (v.b - 1.0);
        let mean = 2.0 * u * y * v.b1 / m_rho;
        let (variance, variance_closed) = if regime == Regime::Supercritical {
            let var = 1.0 + 4.0 * u * y * y * v.b2 / m_rho;
            let closed = (3.0 * u - 3.0 + 2.0 * (u * (u - 1.0)).sqrt()) / (5.0 * u - 9.0);
            (Some(var), Some(closed))
        } else {
            (None, None)
        };
        let c = (3.0 / std::f64::consts::PI).sqrt() * (2.0 / 27.0) * u / m_rho;
        Ok(PhaseParams {
            u,
            regime,
            near_critical: (u - U_CRITICAL).abs() < NEAR_CRITICAL,
            y,
            b: v.b,
            b1: v.b1,
            b2: v.b2,
            m_rho,
            mean,
            variance,
            variance_closed,
            c,
            w: 4.0 / (27.0 * y),
        })
    }

    pub fn sigma(&self) -> Option<f64> {
        self.variance.map(f64::sqrt)
    }
}

/// Mean offspring below `9/5` in closed form, `8u / (3 (3 + u))`.
pub fn subcritical_mean(u: f64) -> f64 {
    8.0 * u / (3.0 * (3.0 + u))
}

/// Exact subcritical mean for rational `u < 9/5`.
pub fn subcritical_mean_exact(u: &num_rational::BigRational) -> num_rational::BigRational {
    use num_bigint::BigInt;
    let k = |x: i64| num_rational::BigRational::from_integer(BigInt::from(x));
    k(8) * u / (k(3) * (k(3) + u))
}

/// Distance scaling constant of the subcritical regime,
/// `(9 (3 + u) / (8 (9 - 5u)))^(1/4)`.
pub fn subcritical_distance_constant(u: f64) -> Result<f64> {
    check_u(u)?;
    if u >= U_CRITICAL {
        return Err(Error::InvalidParameter(format!("u = {u} is not subcritical")));
    }
    Ok((9.0 * (3.0 + u) / (8.0 * (9.0 - 5.0 * u))).powf(0.25))
}

/// Distance scaling constant `(3 / (8k))^(1/4)` of uniform simple
/// quadrangulations with `k` faces.
pub fn simple_quad_distance_constant(k: f64) -> f64 {
    (3.0 / (8.0 * k)).powf(0.25)
}
