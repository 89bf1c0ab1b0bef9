//! Exact photon-number amplitudes and distributions.
//!
//! The overlap of outcome |m> with the state S(r)|n> is
//!
//!   W_mn = integral h_m(x) e^{r/2} h_n(e^r x) dx.
//!
//! Substituting x = t s with s = sqrt(2 / (1 + e^{2r})) merges the two
//! Gaussians into exactly e^{-t^2}, leaving a degree m+n polynomial, so a
//! Gauss-Hermite rule of order N with 2N-1 >= m+n integrates it exactly.
//! Everything downstream (probabilities, partial sums) squares W_mn.
//!
//! Two independent engines compute the same numbers: quadrature (above) and
//! a three-term recurrence in the outcome index m, run upward through the
//! classically allowed window and matched to a backward (Miller) tail beyond
//! it, where upward recursion is unstable.

use crate::distribution::{Distribution, EntryFlag, Method};
use crate::error::{Result, SqzError};
use crate::real::{Dd, Real};
use crate::special_fn::{
    gauss_hermite_rule, h0_scaled_dd, hermite_coeffs_dd, hermite_pair_scaled_dd,
};

/// Probabilities below this are reported as exact 0 with a
/// [`EntryFlag::Clamped`] flag.
pub fn clamp_threshold<T: Real>() -> T {
    let t = T::from_f64c(1e-300);
    if t > T::zero() {
        t
    } else {
        T::min_positive_value() * T::from_f64c(1e8)
    }
}

/// Relative-comparison floor for the recurrence tail convergence check.
fn tiny_floor<T: Real>() -> T {
    clamp_threshold::<T>()
}

fn quadrature_order(degree: usize) -> Result<usize> {
    use crate::special_fn::MAX_GAUSS_HERMITE_ORDER;
    let needed = (degree + 40).max(64);
    if needed > MAX_GAUSS_HERMITE_ORDER {
        return Err(SqzError::QuadratureOrderExceeded {
            requested: needed,
            cap: MAX_GAUSS_HERMITE_ORDER,
        });
    }
    Ok(needed.next_power_of_two().min(MAX_GAUSS_HERMITE_ORDER))
}

struct OverlapFrame<T> {
    s: Dd<T>,
    er: Dd<T>,
    prefactor: Dd<T>,
}

impl<T: Real> OverlapFrame<T> {
    fn new(r: T) -> Self {
        let half = T::from_f64c(0.5);
        let e2r = Dd::from_t(r + r).exp();
        let s = Dd::from_t(T::one() + T::one())
            .div(Dd::one().add(e2r))
            .sqrt();
        Self {
            s,
            er: Dd::from_t(r).exp(),
            prefactor: s.mul(Dd::from_t(r * half).exp()),
        }
    }
}

fn renorm_dd<T: Real>(v: &mut Dd<T>, e: &mut i32) {
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    while v.hi.abs() > bound_hi {
        *v = v.ldexp(-T::SCALE_BITS);
        *e += T::SCALE_BITS;
    }
    while v.hi != T::zero() && v.hi.abs() < bound_lo {
        *v = v.ldexp(T::SCALE_BITS);
        *e -= T::SCALE_BITS;
    }
}

/// Exact overlap amplitude by quadrature, with no parity or r = 0 shortcuts:
/// the full oscillatory sum is evaluated as-is. Useful for verifying that
/// the quadrature itself reproduces the identities the shortcuts assume.
pub fn exact_amplitude_raw<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    let rule = gauss_hermite_rule::<T>(quadrature_order(m + n)?)?;
    let frame = OverlapFrame::new(r);
    let (ca, cb) = hermite_coeffs_dd::<T>(m.max(n).max(1));
    let mut total = Dd::zero();
    for k in 0..rule.order() {
        let t = rule.node_dd(k);
        let y = t.mul(frame.s);
        let z = y.mul(frame.er);
        let (hm, _, e_m) = hermite_pair_scaled_dd(m, y, &ca, &cb);
        let (hn, _, e_n) = hermite_pair_scaled_dd(n, z, &ca, &cb);
        let (w, e_w) = rule.scaled_weight(k);
        let mut pre = w.mul(hm);
        let mut e_pre = e_w + e_m;
        renorm_dd(&mut pre, &mut e_pre);
        total = total.add(pre.mul(hn).ldexp(e_pre + e_n));
    }
    Ok(frame.prefactor.mul(total).to_t())
}

/// Exact overlap amplitude W_mn by quadrature. Parity zeros (odd m + n) and
/// the r = 0 identity are returned exactly. Handles r of either sign; the
/// operator identity W_mn(r) = W_nm(-r) holds and is testable against this
/// function directly.
pub fn exact_amplitude<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    if r == T::zero() {
        return Ok(if m == n { T::one() } else { T::zero() });
    }
    if (m + n) % 2 == 1 {
        return Ok(T::zero());
    }
    exact_amplitude_raw(m, n, r)
}

/// All signed amplitudes W_mn for m = 0..=m_max, by quadrature. One Hermite
/// chain per node serves every m, so the batch costs little more than the
/// largest single amplitude.
///
/// The oscillatory node sum cancels to ~1e-31 absolute (double-double), so
/// entries with |W| below that are noise; the recurrence engine resolves
/// such deep-tail magnitudes exactly and should be preferred there.
pub fn exact_amplitudes<T: Real>(n: usize, r: T, m_max: usize) -> Result<Vec<T>> {
    if r == T::zero() {
        let mut out = vec![T::zero(); m_max + 1];
        if n <= m_max {
            out[n] = T::one();
        }
        return Ok(out);
    }
    let rule = gauss_hermite_rule::<T>(quadrature_order(m_max + n)?)?;
    let frame = OverlapFrame::new(r);
    let (ca, cb) = hermite_coeffs_dd::<T>(m_max.max(n).max(1));
    let par = n % 2;
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    let mut acc = vec![Dd::zero(); m_max + 1];
    for k in 0..rule.order() {
        let t = rule.node_dd(k);
        let y = t.mul(frame.s);
        let z = y.mul(frame.er);
        let (hn, _, e_n) = hermite_pair_scaled_dd(n, z, &ca, &cb);
        let (w, e_w) = rule.scaled_weight(k);
        let mut pre = w.mul(hn);
        let mut e_pre = e_w + e_n;
        renorm_dd(&mut pre, &mut e_pre);
        let (mut h, mut e_h) = h0_scaled_dd(y);
        let mut hm1 = Dd::zero();
        if par == 0 {
            acc[0] = acc[0].add(pre.mul(h).ldexp(e_pre + e_h));
        }
        for m in 1..=m_max {
            let next = y.mul(h).mul(ca[m - 1]).sub(hm1.mul(cb[m - 1]));
            hm1 = h;
            h = next;
            let mag = h.hi.abs().max(hm1.hi.abs());
            if mag > bound_hi {
                h = h.ldexp(-T::SCALE_BITS);
                hm1 = hm1.ldexp(-T::SCALE_BITS);
                e_h += T::SCALE_BITS;
            } else if mag > T::zero() && mag < bound_lo {
                h = h.ldexp(T::SCALE_BITS);
                hm1 = hm1.ldexp(T::SCALE_BITS);
                e_h -= T::SCALE_BITS;
            }
            if m % 2 == par {
                acc[m] = acc[m].add(pre.mul(h).ldexp(e_pre + e_h));
            }
        }
    }
    let mut out = vec![T::zero(); m_max + 1];
    for m in (par..=m_max).step_by(2) {
        out[m] = frame.prefactor.mul(acc[m]).to_t();
    }
    Ok(out)
}

/// Seed of the outcome-index recurrence: the lowest parity-allowed
/// amplitude, divided by the global prefactor e^{r/2}. Closed form from the
/// generating function of the overlaps; the odd-n seed is a two-term
/// combination of even seeds one level up and down.
fn rec_seed<T: Real>(n: usize, alpha: T) -> (usize, T) {
    let one = T::one();
    let two = one + one;
    if n.is_multiple_of(2) {
        let a2 = alpha * alpha;
        let beta = (a2 - one) / (a2 + one);
        let mut i = (two / (a2 + one)).sqrt();
        for j in 1..=n / 2 {
            let jt = T::from_us(j);
            i *= beta * ((jt + jt - one) / (jt + jt)).sqrt();
        }
        (0, i)
    } else {
        let half = T::from_f64c(0.5);
        let i_up = rec_seed(n + 1, alpha).1;
        let i_dn = rec_seed(n - 1, alpha).1;
        let i1 = (two.sqrt() / alpha)
            * ((T::from_us(n + 1) * half).sqrt() * i_up + (T::from_us(n) * half).sqrt() * i_dn);
        (1, i1)
    }
}

struct RecCoeffs<T> {
    band: T,
    a4m1: T,
}

impl<T: Real> RecCoeffs<T> {
    fn new(n: usize, alpha: T) -> Self {
        let a2 = alpha * alpha;
        Self {
            band: a2 * T::from_us(2 * n + 1),
            a4m1: a2 * a2 - T::one(),
        }
    }

    /// (C1, Cdn, Cup) at index k: C1 I_k = Cdn I_{k-2} + Cup I_{k+2}.
    fn at(&self, k: usize) -> (T, T, T) {
        let one = T::one();
        let half = T::from_f64c(0.5);
        let kt = T::from_us(k);
        let c1 = self.band - T::from_us(2 * k + 1) - (kt + half) * self.a4m1;
        let cdn = if k >= 2 {
            half * self.a4m1 * (kt * (kt - one)).sqrt()
        } else {
            T::zero()
        };
        let cup = half * self.a4m1 * ((kt + one) * (kt + one + one)).sqrt();
        (c1, cdn, cup)
    }
}

/// All signed amplitudes for m = 0..=m_max by the outcome-index recurrence.
/// Requires r > 0 (callers map r < 0 through the swap identity and r = 0 to
/// the Kronecker delta).
fn recurrence_batch<T: Real>(n: usize, r: T, m_max: usize) -> Result<Vec<T>> {
    let alpha = r.exp();
    let (m0, i0) = rec_seed(n, alpha);
    let pref = (r * T::from_f64c(0.5)).exp();
    let mut out = vec![T::zero(); m_max + 1];
    if m_max < m0 {
        return Ok(out);
    }
    let coeffs = RecCoeffs::new(n, alpha);
    let mtop = (((2 * n + 1) as f64) * (alpha * alpha).to_f64().unwrap() - 1.0) / 2.0;
    let q = T::SCALE_BITS;
    let bound_hi = T::one().ldexp(q);

    // scaled entries (mantissa, exponent in bits) indexed by m
    let mut res: Vec<Option<(T, i32)>> = vec![None; m_max + 1];
    res[m0] = Some((i0, 0));
    let mut icur = i0;
    let mut iprev = T::zero();
    let mut off = 0i32;
    let mut k = m0;
    while k + 2 <= m_max {
        let (c1, cdn, cup) = coeffs.at(k);
        let inew = (c1 * icur - cdn * iprev) / cup;
        iprev = icur;
        icur = inew;
        k += 2;
        if icur.abs() > bound_hi {
            icur = icur.ldexp(-q);
            iprev = iprev.ldexp(-q);
            off += q;
        }
        res[k] = Some((icur, off));
        if k as f64 > mtop + 4.0 {
            break;
        }
    }
    let kup = k;
    let m_last = m_max - (m_max - m0) % 2;

    if kup < m_last {
        // anchor: largest healthy upward entry inside the window
        let lo = kup.saturating_sub(80);
        let mut anchor = m0;
        let mut best = i0.abs();
        let mut mm = m0;
        while mm <= kup {
            if (mm as f64) <= mtop && mm >= lo {
                if let Some((v, _)) = res[mm] {
                    if v.abs() >= best {
                        best = v.abs();
                        anchor = mm;
                    }
                }
            }
            mm += 2;
        }
        let (ra, roff) = res[anchor].expect("anchor below upward coverage");

        let mut delta = 40 + (m_last as isize - mtop as isize).max(0) as usize / 8;
        let floor = tiny_floor::<T>();
        let rel = T::from_f64c(1e-11);
        let mut prev_tail: Option<Vec<Option<(T, i32)>>> = None;
        loop {
            let mut top = m_last + delta;
            top += (top - m0) % 2;
            let mut ih = T::zero();
            let mut ihp = T::from_f64c(1e-250).max(T::min_positive_value() * T::from_f64c(1e10));
            let mut soff = 0i32;
            let mut tail: Vec<Option<(T, i32)>> = vec![None; m_max + 1];
            let mut ta: Option<(T, i32)> = None;
            let mut kk = top;
            while kk >= anchor && kk >= 2 {
                let (c1, cdn, cup) = coeffs.at(kk);
                let ilow = if cdn == T::zero() {
                    T::zero()
                } else {
                    (c1 * ihp - cup * ih) / cdn
                };
                ih = ihp;
                ihp = ilow;
                kk -= 2;
                if ihp.abs() > bound_hi {
                    ihp = ihp.ldexp(-q);
                    ih = ih.ldexp(-q);
                    soff += q;
                }
                if kk <= m_max {
                    tail[kk] = Some((ihp, soff));
                }
                if kk == anchor {
                    ta = Some((ihp, soff));
                }
            }
            let (tav, toff) = match ta {
                Some(t) if t.0 != T::zero() => t,
                _ => {
                    delta *= 2;
                    if delta > 8192 {
                        return Err(SqzError::RecurrenceUnstable {
                            m: m_max,
                            n,
                            r: r.to_f64().unwrap(),
                        });
                    }
                    continue;
                }
            };
            let scale = ra / tav;
            let sc_off = roff - toff;
            if !scale.is_finite() {
                delta *= 2;
                if delta > 8192 {
                    return Err(SqzError::RecurrenceUnstable {
                        m: m_max,
                        n,
                        r: r.to_f64().unwrap(),
                    });
                }
                continue;
            }
            let mut cur: Vec<Option<(T, i32)>> = vec![None; m_max + 1];
            let mut mm = m_last;
            while mm > kup {
                if let Some((v, o)) = tail[mm] {
                    let mut sv = v * scale;
                    let mut so = o + sc_off;
                    renorm_scalar(&mut sv, &mut so);
                    cur[mm] = Some((sv, so));
                }
                if mm < 2 {
                    break;
                }
                mm -= 2;
            }
            if let Some(prev) = &prev_tail {
                let mut ok = true;
                for probe in [Some(m_last), m_last.checked_sub(2)] {
                    let Some(p) = probe else { continue };
                    if p <= kup {
                        continue;
                    }
                    if let (Some((v1, o1)), Some((v0, o0))) = (cur[p], prev[p]) {
                        let x1 = v1.ldexp(o1);
                        let x0 = v0.ldexp(o0);
                        if (x1 - x0).abs() > rel * x1.abs().max(floor) {
                            ok = false;
                        }
                    } else {
                        ok = false;
                    }
                }
                if ok {
                    for mm in 0..=m_max {
                        if cur[mm].is_some() {
                            res[mm] = cur[mm];
                        }
                    }
                    break;
                }
            }
            prev_tail = Some(cur);
            delta *= 2;
            if delta > 8192 {
                return Err(SqzError::RecurrenceUnstable {
                    m: m_max,
                    n,
                    r: r.to_f64().unwrap(),
                });
            }
        }
    }

    let mut mm = m0;
    while mm <= m_max {
        if let Some((v, o)) = res[mm] {
            out[mm] = (v * pref).ldexp(o);
        }
        mm += 2;
    }
    Ok(out)
}

fn renorm_scalar<T: Real>(v: &mut T, e: &mut i32) {
    let bound_hi = T::one().ldexp(T::SCALE_BITS);
    let bound_lo = T::one().ldexp(-T::SCALE_BITS);
    while v.abs() > bound_hi {
        *v = v.ldexp(-T::SCALE_BITS);
        *e += T::SCALE_BITS;
    }
    while *v != T::zero() && v.abs() < bound_lo {
        *v = v.ldexp(T::SCALE_BITS);
        *e -= T::SCALE_BITS;
    }
}

/// Exact overlap amplitude by the outcome-index recurrence. Negative r maps
/// through the swap identity W_mn(r) = W_nm(-r); r = 0 is the Kronecker
/// delta.
pub fn exact_amplitude_recurrence<T: Real>(m: usize, n: usize, r: T) -> Result<T> {
    if r == T::zero() {
        return Ok(if m == n { T::one() } else { T::zero() });
    }
    if (m + n) % 2 == 1 {
        return Ok(T::zero());
    }
    if r < T::zero() {
        return exact_amplitude_recurrence(n, m, -r);
    }
    Ok(recurrence_batch(n, r, m)?[m])
}

/// All signed amplitudes for m = 0..=m_max by the recurrence engine. For
/// r < 0 the swap identity turns each entry into a short recurrence over the
/// (small) index n, so the batch stays cheap.
pub fn exact_amplitudes_recurrence<T: Real>(n: usize, r: T, m_max: usize) -> Result<Vec<T>> {
    if r == T::zero() {
        let mut out = vec![T::zero(); m_max + 1];
        if n <= m_max {
            out[n] = T::one();
        }
        return Ok(out);
    }
    if r > T::zero() {
        return recurrence_batch(n, r, m_max);
    }
    let mut out = vec![T::zero(); m_max + 1];
    for m in (n % 2..=m_max).step_by(2) {
        out[m] = exact_amplitude_recurrence(m, n, r)?;
    }
    Ok(out)
}

fn distribution_from_amplitudes<T: Real>(
    n: usize,
    r: T,
    amps: Vec<T>,
    method: Method,
    engine_note: String,
) -> Distribution<T> {
    let thr = clamp_threshold::<T>();
    let par = n % 2;
    let mut values = Vec::with_capacity(amps.len());
    let mut flags = Vec::with_capacity(amps.len());
    for (m, w) in amps.iter().enumerate() {
        if r != T::zero() && m % 2 == par {
            let p = *w * *w;
            if p < thr {
                values.push(T::zero());
                flags.push(Some(EntryFlag::Clamped));
            } else {
                values.push(p);
                flags.push(None);
            }
        } else {
            // parity zeros (and the r = 0 delta) are exact
            values.push(*w * *w);
            flags.push(None);
        }
    }
    let sum: T = values.iter().copied().sum();
    let notes = vec![
        engine_note,
        format!(
            "partial sum over computed range: {:.12e}",
            sum.to_f64().unwrap()
        ),
    ];
    Distribution {
        n,
        r,
        method,
        values,
        flags,
        notes,
    }
}

/// Exact distribution P(m) = W_mn^2 for m = 0..=m_max by quadrature.
pub fn exact_distribution<T: Real>(n: usize, r: T, m_max: usize) -> Result<Distribution<T>> {
    let amps = exact_amplitudes(n, r, m_max)?;
    let note = if r == T::zero() {
        "zero squeezing: Kronecker delta".to_string()
    } else {
        format!("gauss-hermite order {}", quadrature_order(m_max + n)?)
    };
    Ok(distribution_from_amplitudes(
        n,
        r,
        amps,
        Method::ExactQuadrature,
        note,
    ))
}

/// Exact distribution by the outcome-index recurrence.
pub fn exact_distribution_recurrence<T: Real>(
    n: usize,
    r: T,
    m_max: usize,
) -> Result<Distribution<T>> {
    let amps = exact_amplitudes_recurrence(n, r, m_max)?;
    let note = "three-term recurrence in the outcome index".to_string();
    Ok(distribution_from_amplitudes(
        n,
        r,
        amps,
        Method::ExactRecurrence,
        note,
    ))
}
