//! Phase-space route to the photon statistics: band integrals of the Wigner
//! function, and the closed-form estimate that replaces them at high
//! squeezing.

use crate::distribution::{Distribution, EntryFlag, Method};
use crate::error::Result;
use crate::real::{Dd, Real};
use crate::special_fn::{exp_laguerre_chain, hermite_function, integrate_adaptive};

/// Absolute tolerance requested from the angular integral in [`ring_area`].
pub const RING_INTEGRAL_TOLERANCE: f64 = 1e-10;

/// Antiderivative of u -> e^{-u} L_n(2u):
///
///   G_n(u) = -e^{-u} [ L_n(2u) + 2 (-1)^n sum_{k<n} (-1)^k L_k(2u) ].
///
/// Every term e^{-u} L_k(2u) is bounded by 1, so the chain is evaluated in
/// scaled form and the alternating sum accumulated in double-double.
fn ring_antiderivative<T: Real>(n: usize, u: T) -> T {
    let mut alternating = Dd::zero();
    let mut top = T::zero();
    exp_laguerre_chain(n, u, |k, term| {
        let t = term.collapse();
        if k == n {
            top = t;
        } else if k % 2 == 0 {
            alternating = alternating.add_t(t);
        } else {
            alternating = alternating.sub_t(t);
        }
    });
    let two = T::one() + T::one();
    let sign = if n.is_multiple_of(2) { two } else { -two };
    -alternating.mul_t(sign).add_t(top).to_t()
}

/// Half the integral of the Wigner function of S(r)|n> over the m-th band
/// 2m <= x^2 + p^2 <= 2m + 2.
///
/// In polar coordinates the radial integral is closed (see
/// `ring_antiderivative`); only the angular average is numerical:
///
///   area = ((-1)^n / pi) sum... = ((-1)^n / pi)
///          int_0^{pi/2} [G_n(2(m+1) g) - G_n(2m g)] / g  dtheta,
///   g(theta) = e^{2r} cos^2(theta) + e^{-2r} sin^2(theta).
///
/// The areas partition the total Wigner mass: sum_m 2 area(m) = 1. A single
/// band integral can be negative wherever the Wigner function is.
pub fn ring_area<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    let e2r = (r + r).exp();
    let em2r = (-(r + r)).exp();
    let lo = T::from_us(2 * m);
    let hi = T::from_us(2 * m + 2);
    let tol = T::from_f64c(RING_INTEGRAL_TOLERANCE).max(T::epsilon() * T::from_f64c(32.0));
    let integral = integrate_adaptive(
        |theta: T| {
            let c = theta.cos();
            let s = theta.sin();
            let g = e2r * c * c + em2r * s * s;
            (ring_antiderivative(n, hi * g) - ring_antiderivative(n, lo * g)) / g
        },
        T::zero(),
        T::PI() * T::from_f64c(0.5),
        tol,
    )?;
    let signed = if n.is_multiple_of(2) { integral } else { -integral };
    Ok(signed / T::PI())
}

/// Closed-form high-squeezing estimate of P(m): the momentum density of the
/// state, assumed smooth across one band, times the band width, with the
/// parity factor concentrating the weight on every other outcome:
///
///   P(m) = 4 e^{-r} h_n(sqrt(2m+1) e^{-r})^2 (sqrt(2m+2) - sqrt(2m))
///
/// at even m - n and exactly 0 otherwise. The width difference is
/// rationalized and the Hermite square kept in normalized form, so the value
/// never overflows; it is algebraically identical to the textbook expression
/// with H_n^2 e^{-y^2} / (sqrt(pi) 2^n n!) written out.
pub fn cohen_closed_form<T: Real>(m: usize, n: usize, r: T) -> T {
    if (m + n) % 2 == 1 {
        return T::zero();
    }
    let h = hermite_function(n, (-r).exp() * T::from_us(2 * m + 1).sqrt());
    let two = T::one() + T::one();
    let width = two / (T::from_us(2 * m + 2).sqrt() + T::from_us(2 * m).sqrt());
    (two + two) * (-r).exp() * h * h * width
}

/// Distribution of [`cohen_closed_form`] values for m = 0..=m_max.
///
/// Entries above 1 are kept as computed but flagged: outside its regime
/// (r below about 1) the smooth-band assumption can overshoot. A note records
/// the regime violation.
pub fn cohen_distribution<T: Real>(n: usize, r: T, m_max: usize) -> Distribution<T> {
    let mut values = Vec::with_capacity(m_max + 1);
    let mut flags = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let p = cohen_closed_form(m, n, r);
        flags.push(if p > T::one() {
            Some(EntryFlag::Tangency)
        } else {
            None
        });
        values.push(p);
    }
    let mut notes = vec!["momentum density spread over uniform phase-space bands".to_string()];
    if r < T::one() {
        notes.push(format!(
            "squeezing r = {r} is below the high-squeezing regime r >= 1; values are indicative only"
        ));
    }
    Distribution {
        n,
        r,
        method: Method::CohenClosedForm,
        values,
        flags,
        notes,
    }
}

/// Distribution from the exact band integrals: P(m) = 4 ring_area(m, n, r) at
/// even m - n and exactly 0 otherwise.
///
/// Unlike [`cohen_distribution`] this makes no smoothness assumption about
/// the Wigner function across a band; it is the reference the closed form
/// approximates. Band integrals over Wigner-negative regions can produce
/// values outside [0, 1], which are kept but flagged.
pub fn wigner_ring_distribution<T: Real>(n: usize, r: T, m_max: usize) -> Result<Distribution<T>> {
    let four = T::from_f64c(4.0);
    let mut values = Vec::with_capacity(m_max + 1);
    let mut flags = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if (m + n) % 2 == 1 {
            values.push(T::zero());
            flags.push(None);
            continue;
        }
        let p = four * ring_area(m, n, r)?;
        flags.push(if p < T::zero() || p > T::one() {
            Some(EntryFlag::Tangency)
        } else {
            None
        });
        values.push(p);
    }
    let notes = vec![format!(
        "Wigner band integrals, absolute tolerance {RING_INTEGRAL_TOLERANCE:.0e}"
    )];
    Ok(Distribution {
        n,
        r,
        method: Method::WignerRing,
        values,
        flags,
        notes,
    })
}
