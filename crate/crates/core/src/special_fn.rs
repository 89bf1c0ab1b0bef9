//! Orthogonal-polynomial primitives and quadrature.
//!
//! The central object is the normalized Hermite function
//! h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}, evaluated by the
//! three-term recurrence h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
//! All chains run on (mantissa, binary exponent) pairs so that deep-forbidden
//! starting values like h_0(63) ~ e^{-2000} never flush to zero mid-chain;
//! the exponent is only applied when a value leaves the chain.

use crate::cache;
use crate::error::{Result, SqzError};
use crate::real::{ln2_dd, ln_pi_quarter_dd, Dd, Real, Scaled};
use std::sync::Arc;

/// Largest Gauss-Hermite order the builder accepts. Chosen as the power of
/// two covering the default-order formula (m + n + 40, capped at 4000) used
/// by the exact overlap integrals.
pub const MAX_GAUSS_HERMITE_ORDER: usize = 4096;

const ADAPTIVE_INTERVAL_BUDGET: usize = 100_000;
const ADAPTIVE_MAX_DEPTH: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    GaussHermite,
    AdaptiveInterval,
}

/// Immutable Gauss-Hermite rule.
///
/// `weights` are the standard weights w_k for integrals of the form
/// integral f(x) e^{-x^2} dx = sum w_k f(x_k). The internally stored scaled
/// weights (w_k e^{x_k^2}, kept as mantissa/exponent in double-double) serve
/// integrands that already contain their own Gaussian; they stay meaningful
/// at orders where e^{-x_k^2} underflows.
#[derive(Clone, Debug)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub kind: QuadratureKind,
    nodes_lo: Vec<T>,
    weights_scaled: Vec<(Dd<T>, i32)>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Node with its double-double correction term.
    pub fn node_dd(&self, i: usize) -> Dd<T> {
        Dd {
            hi: self.nodes[i],
            lo: self.nodes_lo[i],
        }
    }

    /// Scaled weight w_k e^{x_k^2} as (double-double mantissa, binary exponent).
    pub fn scaled_weight(&self, i: usize) -> (Dd<T>, i32) {
        self.weights_scaled[i]
    }
}

/// exp(a) as (mantissa, binary exponent) with the mantissa in [1, 2^SCALE_BITS).
pub(crate) fn exp_scaled_dd<T: Real>(a: Dd<T>) -> (Dd<T>, i32) {
    let q = T::SCALE_BITS;
    let q_ln2 = T::from_f64c(q as f64) * T::LN_2();
    let steps = (a.hi / q_ln2).floor().to_f64().unwrap();
    // saturate far outside any representable range; the collapsed value is
    // then 0 or inf regardless of the mantissa
    let e_bits = (steps * q as f64).clamp(-1.0e9, 1.0e9) as i32;
    let reduced = a.sub(ln2_dd::<T>().mul_t(T::from_f64c(e_bits as f64)));
    (reduced.exp(), e_bits)
}

/// h_0(x) = pi^{-1/4} e^{-x^2/2} as (double-double mantissa, binary exponent).
pub(crate) fn h0_scaled_dd<T: Real>(x: Dd<T>) -> (Dd<T>, i32) {
    let half = T::from_f64c(0.5);
    let l0 = x.sqr().mul_t(-half).sub(ln_pi_quarter_dd::<T>());
    exp_scaled_dd(l0)
}

/// Recurrence coefficients a_k = sqrt(2/(k+1)), b_k = sqrt(k/(k+1)) for
/// k = 0..kmax in double-double.
pub(crate) fn hermite_coeffs_dd<T: Real>(kmax: usize) -> (Vec<Dd<T>>, Vec<Dd<T>>) {
    let two = Dd::from_t(T::one() + T::one());
    let mut ca = Vec::with_capacity(kmax);
    let mut cb = Vec::with_capacity(kmax);
    for k in 0..kmax {
        let kp1 = T::from_us(k + 1);
        ca.push(two.div_t(kp1).sqrt());
        cb.push(Dd::from_t(T::from_us(k)).div_t(kp1).sqrt());
    }
    (ca, cb)
}

/// (h_n(x), h_{n-1}(x), shared binary exponent) in double-double.
pub(crate) fn hermite_pair_scaled_dd<T: Real>(
    n: usize,
    x: Dd<T>,
    ca: &[Dd<T>],
    cb: &[Dd<T>],
) -> (Dd<T>, Dd<T>, i32) {
    let (mut h, mut e) = h0_scaled_dd(x);
    let mut hm1 = Dd::zero();
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    for k in 0..n {
        let next = x.mul(h).mul(ca[k]).sub(hm1.mul(cb[k]));
        hm1 = h;
        h = next;
        let mag = h.hi.abs().max(hm1.hi.abs());
        if mag > bound_hi {
            h = h.ldexp(-T::SCALE_BITS);
            hm1 = hm1.ldexp(-T::SCALE_BITS);
            e += T::SCALE_BITS;
        } else if mag > T::zero() && mag < bound_lo {
            h = h.ldexp(T::SCALE_BITS);
            hm1 = hm1.ldexp(T::SCALE_BITS);
            e -= T::SCALE_BITS;
        }
    }
    (h, hm1, e)
}

/// (h_n(x), h_{n-1}(x), shared binary exponent) in the base scalar. The
/// starting value is reduced in double-double so its relative error does not
/// inherit the x^2/2 cancellation.
pub(crate) fn hermite_pair_scaled<T: Real>(n: usize, x: T) -> (T, T, i32) {
    let (h0, mut e) = h0_scaled_dd(Dd::from_t(x));
    let mut h = h0.to_t();
    let mut hm1 = T::zero();
    let two = T::one() + T::one();
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    for k in 0..n {
        let kp1 = T::from_us(k + 1);
        let a = (two / kp1).sqrt();
        let b = (T::from_us(k) / kp1).sqrt();
        let next = x * a * h - b * hm1;
        hm1 = h;
        h = next;
        let mag = h.abs().max(hm1.abs());
        if mag > bound_hi {
            h = h.ldexp(-T::SCALE_BITS);
            hm1 = hm1.ldexp(-T::SCALE_BITS);
            e += T::SCALE_BITS;
        } else if mag > T::zero() && mag < bound_lo {
            h = h.ldexp(T::SCALE_BITS);
            hm1 = hm1.ldexp(T::SCALE_BITS);
            e -= T::SCALE_BITS;
        }
    }
    (h, hm1, e)
}

/// Normalized Hermite function h_n(x). Never overflows; underflows to 0
/// gracefully far outside the classically allowed region.
pub fn hermite_function<T: Real>(n: usize, x: T) -> T {
    let (h, _, e) = hermite_pair_scaled(n, x);
    h.ldexp(e)
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
pub fn laguerre<T: Real>(n: usize, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut lm1 = T::one();
    let mut l = T::one() - x;
    for k in 1..n {
        let kt = T::from_us(k);
        let next = ((T::from_us(2 * k + 1) - x) * l - kt * lm1) / (kt + T::one());
        lm1 = l;
        l = next;
    }
    l
}

/// Runs t_k = e^{-u} L_k(2u) for k = 0..=n, invoking the sink with each value
/// as a scaled pair. The shared Gaussian is folded into the k = 0 start, so
/// the chain stays representable for u far beyond the range of exp.
pub(crate) fn exp_laguerre_chain<T: Real, F: FnMut(usize, Scaled<T>)>(n: usize, u: T, mut sink: F) {
    let (m0, mut e) = exp_scaled_dd(Dd::from_t(-u));
    let mut t = m0.to_t();
    let mut tm1 = T::zero();
    let y = u + u;
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    sink(0, Scaled { mant: t, exp: e });
    for k in 0..n {
        let next = if k == 0 {
            (T::one() - y) * t
        } else {
            let kt = T::from_us(k);
            ((T::from_us(2 * k + 1) - y) * t - kt * tm1) / (kt + T::one())
        };
        tm1 = t;
        t = next;
        let mag = t.abs().max(tm1.abs());
        if mag > bound_hi {
            t = t.ldexp(-T::SCALE_BITS);
            tm1 = tm1.ldexp(-T::SCALE_BITS);
            e += T::SCALE_BITS;
        } else if mag > T::zero() && mag < bound_lo {
            t = t.ldexp(T::SCALE_BITS);
            tm1 = tm1.ldexp(T::SCALE_BITS);
            e -= T::SCALE_BITS;
        }
        sink(k + 1, Scaled { mant: t, exp: e });
    }
}

/// e^{-u} L_n(2u) as a scaled value.
pub(crate) fn exp_laguerre_scaled<T: Real>(n: usize, u: T) -> Scaled<T> {
    let mut out = Scaled::zero();
    exp_laguerre_chain(n, u, |k, v| {
        if k == n {
            out = v;
        }
    });
    out
}

/// Cached Gauss-Hermite rule of the given order.
pub fn gauss_hermite_rule<T: Real>(order: usize) -> Result<Arc<QuadratureRule<T>>> {
    cache::get_or_build("gauss-hermite", order as u64, || build_gauss_hermite(order))
}

fn build_gauss_hermite<T: Real>(order: usize) -> Result<QuadratureRule<T>> {
    if order == 0 || order > MAX_GAUSS_HERMITE_ORDER {
        return Err(SqzError::QuadratureOrderExceeded {
            requested: order,
            cap: MAX_GAUSS_HERMITE_ORDER,
        });
    }
    let n = order;
    let half = n.div_ceil(2);
    let nt = T::from_us(n);
    let sqrt_2n = (nt + nt).sqrt();
    let tol = T::from_f64c(1e-14).max(T::epsilon() * T::from_f64c(4.0));

    // positive roots of h_n, found largest-first by Newton iteration from
    // asymptotic initial guesses
    let mut roots: Vec<T> = Vec::with_capacity(half);
    for i in 0..half {
        if n % 2 == 1 && i == half - 1 {
            roots.push(T::zero());
            break;
        }
        let mut z = match i {
            0 => {
                let w = nt + nt + T::one();
                w.sqrt() - T::from_f64c(1.85575) * w.powf(T::from_f64c(-1.0 / 6.0))
            }
            // outer-root spacing from the first two Airy-function zeros:
            // (a2 - a1) 2^{-1/3} (2N+1)^{-1/6}; stays accurate at orders
            // in the thousands where power-law fits in N drift off
            1 => {
                let w = nt + nt + T::one();
                roots[0] - T::from_f64c(1.38885) * w.powf(T::from_f64c(-1.0 / 6.0))
            }
            2 => T::from_f64c(1.86) * roots[1] - T::from_f64c(0.86) * roots[0],
            3 => T::from_f64c(1.91) * roots[2] - T::from_f64c(0.91) * roots[1],
            _ => (roots[i - 1] + roots[i - 1]) - roots[i - 2],
        };
        let mut converged = false;
        let mut prev_step = T::infinity();
        for _ in 0..200 {
            let (h, hm1, _) = hermite_pair_scaled(n, z);
            // h_n'(x) = sqrt(2n) h_{n-1}(x) - x h_n(x), same shared exponent
            let dz = h / (sqrt_2n * hm1 - z * h);
            z -= dz;
            let a = dz.abs();
            let scale = T::one().max(z.abs());
            if a <= tol * scale {
                converged = true;
                break;
            }
            // at large orders the chain noise floor (~ sqrt(order) eps) can
            // sit just above tol; once steps stop shrinking the root is as
            // good as this stage gets, and the double-double refinement
            // below recovers the rest
            if a < T::from_f64c(1e-8) * scale && a >= prev_step {
                converged = true;
                break;
            }
            prev_step = a;
        }
        if !converged {
            return Err(SqzError::NonConvergence {
                achieved: f64::NAN,
                requested: tol.to_f64().unwrap(),
            });
        }
        roots.push(z);
    }

    // double-double refinement and weights
    let (ca, cb) = hermite_coeffs_dd::<T>(n);
    let sqrt_2n_dd = Dd::from_t(nt + nt).sqrt();
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    let mut half_nodes: Vec<Dd<T>> = Vec::with_capacity(half);
    let mut half_weights: Vec<(Dd<T>, i32)> = Vec::with_capacity(half);
    let mut half_std: Vec<T> = Vec::with_capacity(half);
    for &z in &roots {
        let mut x = Dd::from_t(z);
        for _ in 0..2 {
            let (h, hm1, _) = hermite_pair_scaled_dd(n, x, &ca, &cb);
            let denom = sqrt_2n_dd.mul(hm1).sub(x.mul(h));
            x = x.sub(h.div(denom));
        }
        let (_, hm1, e) = hermite_pair_scaled_dd(n, x, &ca, &cb);
        let mut mant = hm1.sqr().mul_t(nt).recip();
        let mut e_w = -2 * e;
        while mant.hi.abs() > bound_hi {
            mant = mant.ldexp(-T::SCALE_BITS);
            e_w += T::SCALE_BITS;
        }
        while mant.hi != T::zero() && mant.hi.abs() < bound_lo {
            mant = mant.ldexp(T::SCALE_BITS);
            e_w -= T::SCALE_BITS;
        }
        let xt = x.to_t();
        let std_w = mant.to_t().ldexp(e_w) * (-(xt * xt)).exp();
        half_nodes.push(x);
        half_weights.push((mant, e_w));
        half_std.push(std_w);
    }

    // mirror to the full ascending rule
    let mut nodes = vec![T::zero(); n];
    let mut nodes_lo = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let mut weights_scaled = vec![(Dd::zero(), 0i32); n];
    for i in 0..half {
        let x = half_nodes[i];
        nodes[i] = -x.hi;
        nodes_lo[i] = -x.lo;
        weights[i] = half_std[i];
        weights_scaled[i] = half_weights[i];
        nodes[n - 1 - i] = x.hi;
        nodes_lo[n - 1 - i] = x.lo;
        weights[n - 1 - i] = half_std[i];
        weights_scaled[n - 1 - i] = half_weights[i];
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: QuadratureKind::GaussHermite,
        nodes_lo,
        weights_scaled,
    })
}

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
///
/// Non-finite samples (integrable endpoint behavior) are treated as zero and
/// localized by subdivision. Fails with the achieved error estimate when the
/// subdivision budget runs out before the tolerance is met.
pub fn integrate_adaptive<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    if a > b {
        return integrate_adaptive(f, b, a, tol).map(|v| -v);
    }
    let eval = |x: T| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    let half = T::from_f64c(0.5);
    let sixth = T::from_f64c(1.0 / 6.0);
    let fifteen = T::from_f64c(15.0);
    let simpson = |fa: T, fm: T, fb: T, len: T| len * sixth * (fa + (fm + fm + fm + fm) + fb);

    struct Frame<T> {
        a: T,
        b: T,
        fa: T,
        fm: T,
        fb: T,
        s: T,
        tol: T,
        depth: u32,
    }
    let fa = eval(a);
    let fb = eval(b);
    let m0 = (a + b) * half;
    let fm = eval(m0);
    let s0 = simpson(fa, fm, fb, b - a);
    let mut stack = vec![Frame {
        a,
        b,
        fa,
        fm,
        fb,
        s: s0,
        tol,
        depth: 0,
    }];
    let mut acc = T::zero();
    let mut err = T::zero();
    let mut processed = 0usize;
    while let Some(fr) = stack.pop() {
        processed += 1;
        let m = (fr.a + fr.b) * half;
        let lm = (fr.a + m) * half;
        let rm = (m + fr.b) * half;
        let flm = eval(lm);
        let frm = eval(rm);
        let hl = m - fr.a;
        let sl = simpson(fr.fa, flm, fr.fm, hl);
        let sr = simpson(fr.fm, frm, fr.fb, fr.b - m);
        let delta = (sl + sr) - fr.s;
        let out_of_budget = processed >= ADAPTIVE_INTERVAL_BUDGET;
        if delta.abs() <= fifteen * fr.tol || fr.depth >= ADAPTIVE_MAX_DEPTH || out_of_budget {
            acc += sl + sr + delta / fifteen;
            err += delta.abs() / fifteen;
            if out_of_budget {
                // finish remaining intervals non-adaptively and report
                let mut rest_tol = T::zero();
                for fr in stack.drain(..) {
                    acc += fr.s;
                    rest_tol += fr.tol;
                }
                let achieved = err + rest_tol;
                if achieved > tol {
                    return Err(SqzError::NonConvergence {
                        achieved: achieved.to_f64().unwrap(),
                        requested: tol.to_f64().unwrap(),
                    });
                }
            }
        } else {
            let t2 = fr.tol * half;
            stack.push(Frame {
                a: fr.a,
                b: m,
                fa: fr.fa,
                fm: flm,
                fb: fr.fm,
                s: sl,
                tol: t2,
                depth: fr.depth + 1,
            });
            stack.push(Frame {
                a: m,
                b: fr.b,
                fa: fr.fm,
                fm: frm,
                fb: fr.fb,
                s: sr,
                tol: t2,
                depth: fr.depth + 1,
            });
        }
    }
    if err > tol * T::from_f64c(4.0) {
        return Err(SqzError::NonConvergence {
            achieved: err.to_f64().unwrap(),
            requested: tol.to_f64().unwrap(),
        });
    }
    Ok(acc)
}
