//! Phase-space interference: the semiclassical photon-number distribution.
//!
//! The probability of outcome m for the state S(r)|n> is the squared overlap
//! of two phase-space bands: the circular band of |m> and the elliptical band
//! of the squeezed state. The bands cross (for r > 0) in four congruent
//! diamond-shaped regions; each contributes an amplitude sqrt(A) with a phase
//! given by the enclosed action areas. Their coherent sum is
//!
//!   W_mn = 2 sqrt(A) [cos(phi) + cos(phi')],   P(m) = W_mn^2,
//!
//! with phi + phi' = (m - n) pi, so odd m - n cancels exactly and even m - n
//! doubles: W_mn = 4 sqrt(A) cos(phi).

use crate::distribution::{Distribution, EntryFlag, Method};
use crate::error::{Result, SqzError};
use crate::real::Real;
use crate::wkb_engine::WkbState;

/// Below this value of the crossing-slope difference |dp'| the overlap area
/// diverges and the stationary-phase approximation is meaningless.
pub const TANGENCY_SLOPE_FLOOR: f64 = 1e-9;

/// Geometry of the crossing between the number-state band of outcome m and
/// the squeezed band of S(r)|n>, in the first quadrant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapGeometry<T> {
    pub m: usize,
    pub n: usize,
    pub r: T,
    /// Position of the band crossing, 0 when not allowed.
    pub x_c: T,
    /// Area of one crossing diamond divided by 2 pi hbar per band period,
    /// i.e. the single-crossing probability weight A.
    pub area: T,
    /// Interference phase at the positive crossing.
    pub phi: T,
    /// Interference phase at the reflected crossing; phi + phi' = (m - n) pi.
    pub phi_prime: T,
    /// Whether the bands cross at all: (2n+1) e^{-2r} <= 2m+1 <= (2n+1) e^{2r}.
    pub allowed: bool,
}

fn check_positive_squeezing<T: Real>(r: T) -> Result<()> {
    if r <= T::zero() {
        return Err(SqzError::DegenerateSqueezing {
            r: r.to_f64().unwrap(),
        });
    }
    Ok(())
}

/// Position x_c >= 0 where the orbit of |m> crosses the squeezed orbit of
/// S(r)|n>:
///
///   x_c = sqrt( ((2n+1) e^{2r} - (2m+1)) / (e^{4r} - 1) ).
///
/// Fails with [`SqzError::DegenerateSqueezing`] for r <= 0 (the bands are
/// concentric circles) and [`SqzError::NoCrossing`] when 2m+1 lies outside
/// the allowed window [(2n+1) e^{-2r}, (2n+1) e^{2r}].
pub fn crossing_point<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    check_positive_squeezing(r)?;
    let e2r = (r + r).exp();
    let q = T::from_us(2 * m + 1);
    let band = T::from_us(2 * n + 1);
    let lo = band / e2r;
    let hi = band * e2r;
    if q < lo || q > hi {
        return Err(SqzError::NoCrossing {
            m,
            n,
            r: r.to_f64().unwrap(),
        });
    }
    let num = (hi - q).max(T::zero());
    Ok((num / (e2r * e2r - T::one())).sqrt())
}

/// Single-crossing probability weight
///
///   A = 2 pi / (T_m T_n p_c^2 |dp'|),
///
/// where T_m = 2 pi and T_n = 2 pi e^{-2r} are the band periods, p_c is the
/// momentum of the crossing and |dp'| = x_c (e^{4r} - 1) / p_c the difference
/// of the band slopes there. Fails with [`SqzError::TangencyDivergence`] when
/// the crossing degenerates (window edge: x_c -> 0 or p_c -> 0).
pub fn overlap_area<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    let x_c = crossing_point(m, n, r)?;
    let tangency = || SqzError::TangencyDivergence {
        m,
        n,
        r: r.to_f64().unwrap(),
    };
    let q = T::from_us(2 * m + 1);
    let p_c_sq = q - x_c * x_c;
    if p_c_sq <= T::zero() {
        return Err(tangency());
    }
    let p_c = p_c_sq.sqrt();
    let e2r = (r + r).exp();
    let dp = x_c * (e2r * e2r - T::one()) / p_c;
    if dp < T::from_f64c(TANGENCY_SLOPE_FLOOR) {
        return Err(tangency());
    }
    let two_pi = (T::one() + T::one()) * T::PI();
    let t_m = two_pi;
    let t_n = two_pi / e2r;
    Ok(two_pi / (t_m * t_n * p_c_sq * dp))
}

/// Interference phases (phi, phi') at the two crossings on the x > 0 and
/// x < 0 sides:
///
///   phi  = S0_m(x_c) - S_n(x_c) - pi/4,
///   phi' = S0_m(-x_c) - S_n(-x_c) + pi/4,
///
/// where S0_m is the action of the unsqueezed band of |m> and S_n that of
/// the squeezed band. They satisfy phi + phi' = (m - n) pi.
pub fn interference_phases<T: Real>(m: usize, n: usize, r: T) -> Result<(T, T)> {
    let x_c = crossing_point(m, n, r)?;
    let outer = WkbState::new(m, T::zero());
    let inner = WkbState::new(n, r);
    // the crossing lies inside both bands analytically; clamp the one-ulp
    // excursions that exp/sqrt rounding can produce at the window edge
    let xo = x_c.min(outer.epsilon);
    let xi = x_c.min(inner.epsilon);
    let quarter_pi = T::PI() * T::from_f64c(0.25);
    let phi = outer.action(xo)? - inner.action(xi)? - quarter_pi;
    let phi_prime = outer.action(-xo)? - inner.action(-xi)? + quarter_pi;
    Ok((phi, phi_prime))
}

/// Full crossing geometry for one outcome. Outside the allowed window this
/// returns `allowed = false` with zeroed geometry rather than an error;
/// tangency and r <= 0 still fail.
pub fn overlap_geometry<T: Real>(m: usize, n: usize, r: T) -> Result<OverlapGeometry<T>> {
    match crossing_point(m, n, r) {
        Err(SqzError::NoCrossing { .. }) => Ok(OverlapGeometry {
            m,
            n,
            r,
            x_c: T::zero(),
            area: T::zero(),
            phi: T::zero(),
            phi_prime: T::zero(),
            allowed: false,
        }),
        Err(e) => Err(e),
        Ok(x_c) => {
            let area = overlap_area(m, n, r)?;
            let (phi, phi_prime) = interference_phases(m, n, r)?;
            Ok(OverlapGeometry {
                m,
                n,
                r,
                x_c,
                area,
                phi,
                phi_prime,
                allowed: true,
            })
        }
    }
}

/// Semiclassical overlap amplitude W_mn = 4 sqrt(A) cos(phi) for even m - n.
/// Exactly 0 for odd m - n (the two crossings cancel) and outside the
/// allowed window. Fails at tangency and for r <= 0.
pub fn wkb_amplitude<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    check_positive_squeezing(r)?;
    if (m + n) % 2 == 1 {
        return Ok(T::zero());
    }
    match overlap_geometry(m, n, r)? {
        g if !g.allowed => Ok(T::zero()),
        g => {
            let four = T::from_f64c(4.0);
            Ok(four * g.area.sqrt() * g.phi.cos())
        }
    }
}

/// Semiclassical photon-number distribution P(m) = W_mn^2 for
/// m = 0..=m_max.
///
/// Entries at a tangency are reported as 0 with [`EntryFlag::Tangency`];
/// entries whose computed value exceeds 1 keep the value and carry the same
/// flag (the formula has broken down there). Odd-parity and out-of-window
/// entries are exact zeros with no flag.
pub fn wkb_distribution<T: Real>(n: usize, r: T, m_max: usize) -> Result<Distribution<T>> {
    check_positive_squeezing(r)?;
    let mut values = Vec::with_capacity(m_max + 1);
    let mut flags = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if (m + n) % 2 == 1 {
            values.push(T::zero());
            flags.push(None);
            continue;
        }
        match wkb_amplitude(m, n, r) {
            Ok(w) => {
                let p = w * w;
                flags.push(if p > T::one() {
                    Some(EntryFlag::Tangency)
                } else {
                    None
                });
                values.push(p);
            }
            Err(SqzError::TangencyDivergence { .. }) => {
                values.push(T::zero());
                flags.push(Some(EntryFlag::Tangency));
            }
            Err(e) => return Err(e),
        }
    }
    let e2r = (r + r).exp().to_f64().unwrap();
    let band = (2 * n + 1) as f64;
    let notes = vec![format!(
        "allowed window: {:.6} <= 2m+1 <= {:.6}",
        band / e2r,
        band * e2r
    )];
    Ok(Distribution {
        n,
        r,
        method: Method::Wkb,
        values,
        flags,
        notes,
    })
}
