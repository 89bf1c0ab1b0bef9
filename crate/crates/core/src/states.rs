//! Squeezed number states and their phase-space representations.
//!
//! The state S(r)|n> has position wavefunction e^{r/2} h_n(e^r x): squeezing
//! contracts position by e^{-r} and dilates momentum by e^r (for r > 0). Its
//! Wigner function is the number-state Wigner function evaluated on squeezed
//! coordinates, so it lives on an elliptical band around the classical orbit.

use crate::real::Real;
use crate::special_fn::{exp_laguerre_scaled, hermite_function};

/// The state S(r)|n>, squeeze parameter r applied to number state |n>.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedNumberState<T> {
    pub n: usize,
    pub r: T,
}

impl<T: Real> SqueezedNumberState<T> {
    pub fn new(n: usize, r: T) -> Self {
        Self { n, r }
    }

    /// Classical turning point of the squeezed orbit in position,
    /// e^{-r} sqrt(2n+1).
    pub fn turning_point(&self) -> T {
        (-self.r).exp() * T::from_us(2 * self.n + 1).sqrt()
    }

    /// Classical period of the squeezed orbit, 2 pi e^{-2r}. The unsqueezed
    /// oscillator period is 2 pi in these units; squeezing rescales the time
    /// a trajectory spends per unit of position range.
    pub fn period(&self) -> T {
        let two = T::one() + T::one();
        two * T::PI() * (-(self.r + self.r)).exp()
    }

    /// Position wavefunction e^{r/2} h_n(e^r x).
    pub fn psi_position(&self, x: T) -> T {
        let half = T::from_f64c(0.5);
        (self.r * half).exp() * hermite_function(self.n, self.r.exp() * x)
    }

    /// Momentum wavefunction e^{-r/2} h_n(e^{-r} p), up to the global phase
    /// i^{-n} of the Fourier transform (irrelevant for densities).
    pub fn psi_momentum(&self, p: T) -> T {
        let half = T::from_f64c(0.5);
        (-self.r * half).exp() * hermite_function(self.n, (-self.r).exp() * p)
    }

    /// Wigner function W(x, p) = ((-1)^n / pi) e^{-u} L_n(2u) with
    /// u = e^{2r} x^2 + e^{-2r} p^2. Bounded by 1/pi in magnitude.
    pub fn wigner(&self, x: T, p: T) -> T {
        let e2r = (self.r + self.r).exp();
        let u = e2r * x * x + p * p / e2r;
        let sign = if self.n.is_multiple_of(2) { T::one() } else { -T::one() };
        sign * exp_laguerre_scaled(self.n, u).collapse() / T::PI()
    }
}
