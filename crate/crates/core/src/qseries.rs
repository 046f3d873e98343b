//! q-shifted factorials, certified remainders and the base series.
//!
//! The infinite product `(a;q)_inf` is truncated with its own tail
//! certificate: the index `K` is chosen so that `|a| q^K < eps (1 - q)`,
//! and the tail bound `|r_1| <= 2 |a| q^K / (1 - q)` then guarantees the
//! relative truncation error is below target precision.

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use rug::ops::Pow;
use rug::{Complex, Float};

/// Validated nome data: `q` in `(0, 1)` together with the cached `ln q`
/// and the equivalent `tau` on the upper half plane (`q = e^{pi i tau}`).
#[derive(Debug, Clone)]
pub struct QPoint {
    q: Float,
    log_q: Float,
    tau: Complex,
}

impl QPoint {
    pub fn new(q: Float) -> Result<Self> {
        if !(q.is_finite() && q > 0u32 && q < 1u32) {
            return Err(Error::Domain(format!("q = {q} is not in (0, 1)")));
        }
        let prec = q.prec();
        let log_q = Float::with_val(prec, q.ln_ref());
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        // q = e^{pi i tau}  with  tau = -i ln q / pi  purely imaginary
        let tau = Complex::with_val(prec, (Float::new(prec), -log_q.clone() / pi));
        Ok(Self { q, log_q, tau })
    }

    pub fn from_f64(q: f64, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(ctx.float(q))
    }

    /// Nome `q = exp(-c pi n^{-a})`; `c` is 1 or 2 depending on the
    /// theorem family.
    pub fn from_scaled(c: u32, n: u64, a_exp: f64, ctx: &PrecisionContext) -> Result<Self> {
        let na = ctx.float(n).pow(ctx.float(-a_exp));
        let q = (-ctx.pi() * na * c).exp();
        Self::new(q)
    }

    pub fn q(&self) -> &Float {
        &self.q
    }

    pub fn log_q(&self) -> &Float {
        &self.log_q
    }

    pub fn tau(&self) -> &Complex {
        &self.tau
    }

    pub fn one_minus_q(&self) -> Float {
        Float::with_val(self.q.prec(), 1u32 - &self.q)
    }

    /// `q^x` for real `x`, via `exp(x ln q)`.
    pub fn q_pow(&self, x: &Float) -> Float {
        Float::with_val(self.q.prec(), x * &self.log_q).exp()
    }
}

/// A Lemma-certified remainder `r_1` or `r_2` together with the bound
/// `2 |a| q^n / (1 - q)` it must satisfy.
#[derive(Debug, Clone)]
pub struct RemainderReport {
    pub value: Complex,
    pub bound: Float,
    pub satisfied: bool,
}

impl RemainderReport {
    fn new(value: Complex, bound: Float) -> Self {
        let abs = Float::with_val(bound.prec(), value.abs_ref());
        let satisfied = abs <= bound;
        Self {
            value,
            bound,
            satisfied,
        }
    }
}

/// Finite q-shifted factorial `(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k)`.
pub fn qpoch_finite(a: &Complex, qp: &QPoint, n: u64) -> Complex {
    let prec = qp.q().prec();
    let mut acc = Complex::with_val(prec, (1, 0));
    let mut aqk = a.clone();
    for _ in 0..n {
        let factor = Complex::with_val(prec, 1u32 - &aqk);
        acc *= factor;
        aqk *= qp.q();
    }
    acc
}

/// Infinite product `(a; w)_inf` with a complex nome, `|w| < 1`.
///
/// A factor that is exactly zero makes the product exactly zero; a nonzero
/// factor with magnitude below `2^{-precision_bits}` is rejected instead of
/// being silently cancelled, since these products appear in denominators.
pub(crate) fn poch_inf_complex(a: &Complex, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    let abs_w = Float::with_val(prec, w.abs_ref());
    if abs_w >= 1u32 {
        return Err(Error::Domain(format!("|nome| = {abs_w} is not below 1")));
    }
    let abs_a = Float::with_val(prec, a.abs_ref());
    if abs_a.is_zero() {
        return Ok(Complex::with_val(prec, (1, 0)));
    }
    // |a| |w|^K < eps (1 - |w|) makes the Lemma-1 tail below target precision.
    let target = ctx.eps() * Float::with_val(prec, 1u32 - &abs_w);
    let k_bound = ((Float::with_val(prec, target.ln_ref())
        - Float::with_val(prec, abs_a.ln_ref()))
        / Float::with_val(prec, abs_w.ln_ref()))
    .ceil()
    .to_f64();
    let k_max = if k_bound.is_finite() && k_bound > 0.0 {
        k_bound as usize + 1
    } else {
        1
    };
    if k_max > ctx.max_terms() {
        return Err(Error::Resource(format!(
            "(a;w)_inf needs {k_max} factors, cap is {}",
            ctx.max_terms()
        )));
    }
    let near_zero = Float::with_val(prec, 2u32).pow(-(ctx.precision_bits() as i32));
    let mut acc = Complex::with_val(prec, (1, 0));
    let mut awk = a.clone();
    for k in 0..k_max {
        let factor = Complex::with_val(prec, 1u32 - &awk);
        if factor.real().is_zero() && factor.imag().is_zero() {
            return Ok(Complex::new(prec));
        }
        if Float::with_val(prec, factor.abs_ref()) < near_zero {
            return Err(Error::Singularity(format!(
                "near-zero factor |1 - a w^{k}| below 2^-{}",
                ctx.precision_bits()
            )));
        }
        acc *= factor;
        awk *= w;
    }
    Ok(acc)
}

/// `(a;q)_inf` for the real nome of `qp`, truncated self-certifyingly.
pub fn qpoch_infinite(a: &Complex, qp: &QPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let w = Complex::with_val(ctx.working_prec(), (qp.q(), &Float::new(qp.q().prec())));
    poch_inf_complex(a, &w, ctx)
}

fn lemma1_gate(a: &Complex, qp: &QPoint, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_prec();
    let abs_a = Float::with_val(prec, a.abs_ref());
    let qn = Float::with_val(prec, qp.q().pow(n as u32));
    let ratio = abs_a * &qn / qp.one_minus_q();
    let half = Float::with_val(prec, 0.5);
    if !(ratio < half) {
        return Err(Error::Domain(format!(
            "|a| q^n / (1 - q) = {ratio} is not below 1/2"
        )));
    }
    // bound 2 |a| q^n / (1 - q)
    Ok(ratio * 2u32)
}

/// Remainder `r_1(a; n) = (a q^n; q)_inf - 1` with its certified bound.
pub fn remainder_r1(a: &Complex, qp: &QPoint, n: u64, ctx: &PrecisionContext) -> Result<RemainderReport> {
    let bound = lemma1_gate(a, qp, n, ctx)?;
    let prec = ctx.working_prec();
    let aqn = Complex::with_val(prec, a * Float::with_val(prec, qp.q().pow(n as u32)));
    let mut value = qpoch_infinite(&aqn, qp, ctx)?;
    value -= 1u32;
    Ok(RemainderReport::new(value, bound))
}

/// Remainder `r_2(a; n) = 1 / (a q^n; q)_inf - 1` with its certified bound.
pub fn remainder_r2(a: &Complex, qp: &QPoint, n: u64, ctx: &PrecisionContext) -> Result<RemainderReport> {
    let bound = lemma1_gate(a, qp, n, ctx)?;
    let prec = ctx.working_prec();
    let aqn = Complex::with_val(prec, a * Float::with_val(prec, qp.q().pow(n as u32)));
    let p = qpoch_infinite(&aqn, qp, ctx)?;
    if p.real().is_zero() && p.imag().is_zero() {
        return Err(Error::Singularity("(a q^n; q)_inf vanishes".into()));
    }
    let mut value = Complex::with_val(prec, p.recip_ref());
    value -= 1u32;
    Ok(RemainderReport::new(value, bound))
}

/// q-binomial series `sum_k (a;q)_k / (q;q)_k z^k = (a z; q)_inf / (z; q)_inf`
/// for `|z| < 1`.
pub fn qbinomial_series(
    a: &Complex,
    z: &Complex,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let prec = ctx.working_prec();
    let abs_z = Float::with_val(prec, z.abs_ref());
    if !(abs_z < 1u32) {
        return Err(Error::Domain(format!("|z| = {abs_z} is not below 1")));
    }
    let eps = ctx.eps();
    let mut sum = Complex::with_val(prec, (1, 0));
    // c_{k+1} = c_k (1 - a q^k) / (1 - q^{k+1}) z
    let mut term = Complex::with_val(prec, (1, 0));
    let mut qk = Float::with_val(prec, 1);
    for k in 0..ctx.max_terms() {
        let aqk = Complex::with_val(prec, a * &qk);
        qk *= qp.q();
        let num = Complex::with_val(prec, 1u32 - &aqk);
        let den = Complex::with_val(prec, 1u32 - &qk);
        term *= num;
        term /= den;
        term *= z;
        sum += &term;
        // geometric tail certificate once the term ratio settles below 1
        let rho = Float::with_val(
            prec,
            &abs_z * (Float::with_val(prec, aqk.abs_ref()) + 1u32)
                / Float::with_val(prec, 1u32 - &qk),
        );
        if rho < 1u32 {
            let tail = Float::with_val(prec, term.abs_ref()) * &rho
                / Float::with_val(prec, 1u32 - &rho);
            let scale = Float::with_val(prec, sum.abs_ref());
            if tail <= Float::with_val(prec, &eps * &scale) && k > 2 {
                return Ok(sum);
            }
        }
    }
    Err(Error::Resource(
        "q-binomial series did not converge within max_terms".into(),
    ))
}

/// Euler's series `sum_k q^{k(k-1)/2} (-z)^k / (q;q)_k = (z; q)_inf`,
/// entire in `z`.
pub fn euler_series(z: &Complex, qp: &QPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    let eps = ctx.eps();
    let mut sum = Complex::with_val(prec, (1, 0));
    let mut term = Complex::with_val(prec, (1, 0));
    let mut qk = Float::with_val(prec, 1); // q^k
    let mut max_abs = Float::with_val(prec, 1);
    for _ in 0..ctx.max_terms() {
        // t_{k+1} = t_k * (-z) q^k / (1 - q^{k+1})
        let num = Complex::with_val(prec, -(z.clone() * &qk));
        qk *= qp.q();
        let den = Float::with_val(prec, 1u32 - &qk);
        term *= num;
        term /= &den;
        sum += &term;
        let abs_t = Float::with_val(prec, term.abs_ref());
        if abs_t > max_abs {
            max_abs = abs_t.clone();
        }
        // ratio of consecutive terms is |z| q^k / (1 - q^{k+1})
        let rho = Float::with_val(prec, z.abs_ref()) * &qk / &den;
        if rho < 0.5 {
            let tail = abs_t * &rho / Float::with_val(prec, 1u32 - &rho);
            if tail <= Float::with_val(prec, &eps * &max_abs) {
                return Ok(sum);
            }
        }
    }
    Err(Error::Resource(
        "Euler series did not converge within max_terms".into(),
    ))
}

/// Parity `chi(n) = n - 2 floor(n/2)`, i.e. 1 for odd `n`, 0 for even.
pub fn chi(n: u64) -> u64 {
    debug_assert!(n >= 1);
    n - 2 * (n / 2)
}
