//! Semiclassical (WKB) machinery for squeezed number states.
//!
//! The squeezed orbit e^{2r} x^2 + e^{-2r} p^2 = 2n+1 has position turning
//! points at +/- epsilon with epsilon = e^{-r} sqrt(2n+1). Between them the
//! classical momentum branch, the action integral from the right turning
//! point, and the primitive WKB wavefunction all have closed forms; only the
//! finite-n normalization constant requires quadrature, and it is cached.

use crate::cache;
use crate::error::{Result, SqzError};
use crate::real::Real;
use crate::special_fn::integrate_adaptive;

/// Default guard band around the turning points, as a fraction of epsilon.
/// The primitive WKB form diverges like p^{-1/2} there and stops being
/// pointwise meaningful well before the divergence.
pub const DEFAULT_GUARD_FRACTION: f64 = 1e-3;

/// Semiclassical view of the state S(r)|n>.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WkbState<T> {
    pub n: usize,
    pub r: T,
    /// Position turning point e^{-r} sqrt(2n+1).
    pub epsilon: T,
    /// Classical period 2 pi e^{-2r}.
    pub period: T,
}

impl<T: Real> WkbState<T> {
    pub fn new(n: usize, r: T) -> Self {
        let two = T::one() + T::one();
        Self {
            n,
            r,
            epsilon: (-r).exp() * T::from_us(2 * n + 1).sqrt(),
            period: two * T::PI() * (-(r + r)).exp(),
        }
    }

    /// Positive classical momentum branch p(x) = e^{2r} sqrt(epsilon^2 - x^2).
    pub fn classical_momentum(&self, x: T) -> Result<T> {
        let eps = self.epsilon;
        if x.abs() > eps {
            return Err(SqzError::ClassicallyForbidden {
                x: x.to_f64().unwrap(),
                epsilon: eps.to_f64().unwrap(),
            });
        }
        let d = (eps * eps - x * x).max(T::zero());
        Ok((self.r + self.r).exp() * d.sqrt())
    }

    /// Action integral S(x) = integral_x^epsilon p dx', in closed form
    /// e^{2r} [ (epsilon^2/2) arccos(x/epsilon) - (x/2) sqrt(epsilon^2 - x^2) ].
    ///
    /// S(epsilon) = 0, S(-epsilon) = (n + 1/2) pi, S(0) = pi/4 + n pi/2.
    pub fn action(&self, x: T) -> Result<T> {
        let eps = self.epsilon;
        if x.abs() > eps {
            return Err(SqzError::ClassicallyForbidden {
                x: x.to_f64().unwrap(),
                epsilon: eps.to_f64().unwrap(),
            });
        }
        let half = T::from_f64c(0.5);
        let ratio = (x / eps).min(T::one()).max(-T::one());
        let root = (eps * eps - x * x).max(T::zero()).sqrt();
        let s = half * eps * eps * ratio.acos() - half * x * root;
        Ok((self.r + self.r).exp() * s)
    }

    /// Primitive WKB wavefunction with the default turning-point guard band
    /// (a fraction 1e-3 of epsilon).
    pub fn wkb_wavefunction(&self, x: T) -> Result<T> {
        self.wkb_wavefunction_with_guard(x, T::from_f64c(DEFAULT_GUARD_FRACTION) * self.epsilon)
    }

    /// Primitive WKB wavefunction
    ///
    ///   Phi(x) = (2 / C_n) cos(S(x) - pi/4) / sqrt(period * p(x)),
    ///
    /// where C_n^2 is the finite-n normalization constant (-> 1 as n grows).
    /// With that constant the L2 norm is exactly 1 for every r. Rejects
    /// points outside the allowed region and inside the guard band around
    /// the turning points, where the primitive form is not meaningful.
    pub fn wkb_wavefunction_with_guard(&self, x: T, guard: T) -> Result<T> {
        let eps = self.epsilon;
        if x.abs() >= eps {
            return Err(SqzError::ClassicallyForbidden {
                x: x.to_f64().unwrap(),
                epsilon: eps.to_f64().unwrap(),
            });
        }
        if x.abs() > eps - guard {
            return Err(SqzError::TurningPointRegion {
                x: x.to_f64().unwrap(),
                epsilon: eps.to_f64().unwrap(),
            });
        }
        let c_sq = norm_constant_sq::<T>(self.n)?;
        let p = self.classical_momentum(x)?;
        let s = self.action(x)?;
        let quarter_pi = T::PI() * T::from_f64c(0.25);
        let two = T::one() + T::one();
        Ok(two / c_sq.sqrt() * (s - quarter_pi).cos() / (self.period * p).sqrt())
    }

    /// Squared norm of the primitive WKB wavefunction over the allowed
    /// region, 1 + e^{-2r} (C_n^2 - 1): the unit-norm convention above means
    /// the residual oscillatory integral of cos(2S)/p carries the correction.
    /// Approaches 1 from above as n grows, slowly (~ n^{-1/3}).
    pub fn normalization_correction(&self) -> Result<T> {
        let c_sq = norm_constant_sq::<T>(self.n)?;
        Ok(T::one() + (-(self.r + self.r)).exp() * (c_sq - T::one()))
    }
}

/// Finite-n WKB normalization constant C_n^2 = 1 + J_n, where J_n is the
/// oscillatory integral (1/pi) integral_{-pi/2}^{pi/2}
/// sin(2 S_n(eps sin theta)) d theta for the unsqueezed (r = 0) action.
/// Independent of r; cached per n.
pub fn norm_constant_sq<T: Real>(n: usize) -> Result<T> {
    let v = cache::get_or_build("wkb-norm-sq", n as u64, || {
        let st = WkbState::<T>::new(n, T::zero());
        let eps = st.epsilon;
        let two = T::one() + T::one();
        let tol = T::from_f64c(1e-11).max(T::epsilon() * T::from_f64c(128.0));
        let half_pi = T::PI() * T::from_f64c(0.5);
        // integrand is even in theta; sin theta keeps arguments strictly
        // inside the allowed region except at the harmless endpoint S = 0
        let j = integrate_adaptive(
            |theta: T| {
                let x = eps * theta.sin();
                let s = st.action(x).unwrap_or(T::zero());
                ((s + s).sin()) * two / T::PI()
            },
            T::zero(),
            half_pi,
            tol,
        )?;
        Ok(T::one() + j)
    })?;
    Ok(*v)
}
