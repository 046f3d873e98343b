//! Tanh-sinh quadrature and the orthogonality integrals.
//!
//! The orthogonality relations for the Stieltjes-Wigert and q-Laguerre
//! families integrate over `(0, inf)` against weights that become
//! Gaussians after the substitution `x = e^t`. The driver scans the
//! log-integrand to pick a finite window in `t` whose tails are below the
//! working truncation target, then applies double-exponential (tanh-sinh)
//! quadrature on that window. Node contributions are combined by pairwise
//! tree reduction so the summation order is deterministic.

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::qfunctions::{stieltjes_wigert, weight_qlaguerre, weight_sw};
use crate::qseries::{qpoch_finite, QPoint};
use rug::{Complex, Float};

/// Outcome of a quadrature run.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Float,
    /// Difference between the last two refinement levels.
    pub error_estimate: Float,
    pub evaluations: usize,
}

/// One entry of an orthogonality check: the measured integral of
/// `p_m p_n w` against the closed-form target.
#[derive(Debug, Clone)]
pub struct OrthogonalityCheck {
    pub m: u64,
    pub n: u64,
    pub integral: Float,
    pub target: Float,
    /// The larger of the two diagonal targets; off-diagonal entries are
    /// judged relative to this scale.
    pub scale: Float,
    pub abs_err: Float,
}

impl OrthogonalityCheck {
    /// `|integral - target| <= tol * scale`.
    pub fn passes(&self, tol: f64) -> bool {
        let prec = self.scale.prec();
        self.abs_err <= Float::with_val(prec, &self.scale * Float::with_val(prec, tol))
    }
}

/// Sums a slice by pairwise tree reduction (deterministic regardless of
/// how the values were produced).
pub fn pairwise_sum(values: &[Float], prec: u32) -> Float {
    match values.len() {
        0 => Float::new(prec),
        1 => values[0].clone(),
        len => {
            let mid = len / 2;
            pairwise_sum(&values[..mid], prec) + pairwise_sum(&values[mid..], prec)
        }
    }
}

/// Tanh-sinh quadrature of `f` over the finite interval `[a, b]`.
///
/// Refines `h -> h/2` until two successive levels agree to
/// `2^{-tol_bits}` relative, or errors out at the level cap. The abscissas
/// near the endpoints are formed through the stable `1 - tanh` expression,
/// so integrable endpoint singularities are never evaluated at `a` or `b`
/// themselves.
pub fn tanh_sinh<F>(
    f: F,
    a: &Float,
    b: &Float,
    tol_bits: u32,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Result<Float>,
{
    if !(b > a) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    let prec = ctx.working_prec();
    let half = Float::with_val(prec, 1) / 2u32;
    let radius = Float::with_val(prec, b - a) * &half;
    let pi_half = Float::with_val(prec, ctx.pi()) * &half;
    // abscissa parameter cutoff: node weights beyond s_max decay like
    // exp(-(pi/2) sinh s), pushed below the working truncation target
    let s_max = (0.45 * (ctx.working_prec() as f64 + 40.0)).asinh();
    let tol = Float::with_val(prec, Float::i_exp(1, -(tol_bits as i32)));

    // contribution of the node at parameter s (plus its mirror for s > 0)
    let node = |s: &Float| -> Result<Float> {
        let sinh_s = Float::with_val(prec, s.sinh_ref());
        let cosh_s = Float::with_val(prec, s.cosh_ref());
        let u = Float::with_val(prec, &pi_half * &sinh_s);
        let tanh_u = Float::with_val(prec, u.tanh_ref());
        let sech2_u = {
            let c = Float::with_val(prec, u.cosh_ref());
            Float::with_val(prec, c.square_ref()).recip()
        };
        // 1 - tanh u, without cancellation
        let omt = Float::with_val(prec, &sech2_u / Float::with_val(prec, 1u32 + &tanh_u));
        let w = Float::with_val(prec, &pi_half * &cosh_s) * &sech2_u * &radius;
        let x_plus = Float::with_val(prec, b - Float::with_val(prec, &radius * &omt));
        let mut total = Float::with_val(prec, f(&x_plus)? * &w);
        if !s.is_zero() {
            let x_minus = Float::with_val(prec, a + Float::with_val(prec, &radius * &omt));
            total += Float::with_val(prec, f(&x_minus)? * &w);
        }
        Ok(total)
    };

    let mut evaluations = 0usize;
    let mut h = Float::with_val(prec, 1);
    // level 0 at h = 1
    let mut parts = Vec::new();
    let mut k = 0u32;
    loop {
        let s = Float::with_val(prec, &h * k);
        if s > s_max {
            break;
        }
        parts.push(node(&s)?);
        evaluations += if k == 0 { 1 } else { 2 };
        k += 1;
    }
    let mut sum = pairwise_sum(&parts, prec) * &h;
    let mut delta = Float::new(prec);
    for level in 1..=14u32 {
        h >>= 1;
        let mut odd_parts = Vec::new();
        let mut k = 1u32;
        loop {
            let s = Float::with_val(prec, &h * k);
            if s > s_max {
                break;
            }
            odd_parts.push(node(&s)?);
            evaluations += 2;
            k += 2;
        }
        let refined =
            Float::with_val(prec, &sum / 2u32) + pairwise_sum(&odd_parts, prec) * &h;
        delta = Float::with_val(prec, &refined - &sum).abs();
        let scale = Float::with_val(prec, refined.abs_ref()).max(&Float::with_val(prec, 1e-30));
        sum = refined;
        if level >= 3 && delta <= Float::with_val(prec, &scale * &tol) {
            return Ok(QuadratureResult {
                value: sum,
                error_estimate: delta,
                evaluations,
            });
        }
    }
    Err(Error::Resource(format!(
        "tanh-sinh did not converge within 14 levels (last delta {delta:e})"
    )))
}

/// Integrates `f` over `(0, inf)` through `x = e^t`. The window in `t` is
/// found by scanning `ln |f(e^t) e^t|` on a coarse grid (far to the left,
/// to cover power-law tails `x^{alpha+1}`) and keeping everything within
/// `precision_bits + 16` bits of the peak.
pub fn integrate_half_line<F>(f: F, tol_bits: u32, ctx: &PrecisionContext) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Result<Float>,
{
    let prec = ctx.working_prec();
    // integrand in the t variable
    let g = |t: &Float| -> Result<Float> {
        let x = Float::with_val(prec, t.exp_ref());
        Ok(Float::with_val(prec, f(&x)? * &x))
    };

    // scan the log-integrand
    let ln2 = Float::with_val(prec, 2u32).ln();
    let cutoff = Float::with_val(prec, &ln2 * (ctx.precision_bits() + 16));
    let mut log_abs = Vec::new();
    let step = 4i64;
    let scan_lo = -(4 * ctx.precision_bits() as i64 + 128);
    let scan_hi = 96i64;
    let mut ti = scan_lo;
    let mut grid = Vec::new();
    while ti <= scan_hi {
        grid.push(ti);
        let v = g(&ctx.float(ti))?;
        let la = if v.is_zero() {
            Float::with_val(prec, rug::float::Special::NegInfinity)
        } else {
            Float::with_val(prec, v.abs_ref()).ln()
        };
        log_abs.push(la);
        ti += step;
    }
    let peak_idx = log_abs
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Domain("empty scan".into()))?;
    let peak = log_abs[peak_idx].clone();
    if peak.is_infinite() {
        return Err(Error::Domain("integrand vanishes on the whole scan".into()));
    }
    let floor = Float::with_val(prec, &peak - &cutoff);
    let mut lo = peak_idx;
    while lo > 0 && log_abs[lo - 1] > floor {
        lo -= 1;
    }
    let mut hi = peak_idx;
    while hi + 1 < log_abs.len() && log_abs[hi + 1] > floor {
        hi += 1;
    }
    if lo == 0 || hi + 1 == log_abs.len() {
        return Err(Error::Domain(
            "integrand tail still significant at the scan boundary".into(),
        ));
    }
    // one extra step of margin on each side
    let a = ctx.float(grid[lo] - step);
    let b = ctx.float(grid[hi] + step);
    tanh_sinh(g, &a, &b, tol_bits, ctx)
}

fn real_part(v: &crate::logc::LogComplex, prec: u32) -> Float {
    Float::with_val(prec, v.to_complex().real())
}

/// The reversed q-Laguerre sum
/// `Lhat_n(x) = sum_k q^{k^2+alpha k} (-x)^k (q^{alpha+1};q)_n
///              / ((q;q)_k (q;q)_{n-k} (q^{alpha+1};q)_k)`.
///
/// This is the form the orthogonality relation holds for; it is tied to
/// [`q_laguerre`] by the reflection
/// `L_n(x) = (-x q^{n+alpha})^n Lhat_n(q^{-2n-2alpha}/x)`,
/// which follows from reindexing `k -> n-k` in either sum.
pub(crate) fn q_laguerre_orthogonal(
    x: &Float,
    n: u64,
    alpha: f64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is not above -1")));
    }
    let prec = ctx.working_prec();
    let alpha_f = ctx.float(alpha);
    let q_alpha1 = qp.q_pow(&Float::with_val(prec, &alpha_f + 1u32));
    let qq = crate::qfunctions::poch_prefix(qp.q(), qp, n, prec);
    let qa = crate::qfunctions::poch_prefix(&q_alpha1, qp, n, prec);
    let mut sum = Float::new(prec);
    let mut minus_x_pow = Float::with_val(prec, 1);
    for k in 0..=n {
        let kf = Float::with_val(prec, k);
        let expo = Float::with_val(prec, kf.square_ref()) + Float::with_val(prec, &alpha_f * &kf);
        let qpow = Float::with_val(prec, expo * qp.log_q()).exp();
        let den = Float::with_val(prec, &qq[k as usize] * &qq[(n - k) as usize])
            * &qa[k as usize];
        let num = Float::with_val(prec, &qpow * &qa[n as usize]);
        sum += Float::with_val(prec, &minus_x_pow * &num) / den;
        minus_x_pow *= Float::with_val(prec, -x);
    }
    Ok(sum)
}

/// Measures `int_0^inf S_m S_n w_sw dx` against `q^{-n} delta_{mn} / (q;q)_n`.
pub fn sw_orthogonality(
    m: u64,
    n: u64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<OrthogonalityCheck> {
    let prec = ctx.working_prec();
    let integrand = |x: &Float| -> Result<Float> {
        let xc = Complex::with_val(prec, (x, &Float::new(prec)));
        let sm = real_part(&stieltjes_wigert(&xc, m, qp, ctx)?, prec);
        let sn = real_part(&stieltjes_wigert(&xc, n, qp, ctx)?, prec);
        let w = weight_sw(x, qp)?;
        Ok(Float::with_val(prec, &sm * &sn) * &w.value)
    };
    let q = integrate_half_line(integrand, 96, ctx)?;
    let diag = |k: u64| -> Float {
        let qq_k = Float::with_val(
            prec,
            qpoch_finite(&Complex::with_val(prec, (qp.q(), &Float::new(prec))), qp, k).real(),
        );
        let qk = Float::with_val(prec, qp.log_q() * Float::with_val(prec, k)).exp();
        Float::with_val(prec, qk.recip_ref()) / qq_k
    };
    let target = if m == n { diag(n) } else { Float::new(prec) };
    let scale = diag(m).max(&diag(n));
    let abs_err = Float::with_val(prec, &q.value - &target).abs();
    Ok(OrthogonalityCheck {
        m,
        n,
        integral: q.value,
        target,
        scale,
        abs_err,
    })
}

/// Measures `int_0^inf L_m L_n w_ql dx` against
/// `(q^{alpha+1};q)_n delta_{mn} / (q^n (q;q)_n)`.
pub fn qlaguerre_orthogonality(
    m: u64,
    n: u64,
    alpha: f64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<OrthogonalityCheck> {
    let prec = ctx.working_prec();
    let integrand = |x: &Float| -> Result<Float> {
        let lm = q_laguerre_orthogonal(x, m, alpha, qp, ctx)?;
        let ln = q_laguerre_orthogonal(x, n, alpha, qp, ctx)?;
        let w = weight_qlaguerre(x, alpha, qp, ctx)?;
        Ok(Float::with_val(prec, &lm * &ln) * &w.value)
    };
    let q = integrate_half_line(integrand, 96, ctx)?;
    let alpha_f = ctx.float(alpha);
    let q_alpha1 = qp.q_pow(&Float::with_val(prec, &alpha_f + 1u32));
    let diag = |k: u64| -> Float {
        let qa_k = Float::with_val(
            prec,
            qpoch_finite(
                &Complex::with_val(prec, (&q_alpha1, &Float::new(prec))),
                qp,
                k,
            )
            .real(),
        );
        let qq_k = Float::with_val(
            prec,
            qpoch_finite(&Complex::with_val(prec, (qp.q(), &Float::new(prec))), qp, k).real(),
        );
        let qk = Float::with_val(prec, qp.log_q() * Float::with_val(prec, k)).exp();
        qa_k / Float::with_val(prec, &qk * &qq_k)
    };
    let target = if m == n { diag(n) } else { Float::new(prec) };
    let scale = diag(m).max(&diag(n));
    let abs_err = Float::with_val(prec, &q.value - &target).abs();
    Ok(OrthogonalityCheck {
        m,
        n,
        integral: q.value,
        target,
        scale,
        abs_err,
    })
}
