//! The six target functions, their weights and orthonormal forms.
//!
//! Every function returns a [`LogComplex`]: in the theorem regimes the
//! values reach magnitudes like `exp(pi n^{-a} (n^a u + n)^2)`, so the
//! log-scaled representation is the only honest return type. Each function
//! also has a direct high-precision path that the asymptotics module uses
//! as its oracle.

use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::precision::PrecisionContext;
use crate::qseries::{qpoch_infinite, QPoint};
use rug::{Complex, Float};

/// Degree and optional parameters of a polynomial family member.
#[derive(Debug, Clone)]
pub struct PolynomialSpec {
    pub n: u64,
    pub alpha: Option<f64>,
    pub nu: Option<f64>,
}

impl PolynomialSpec {
    pub fn degree(n: u64) -> Self {
        Self {
            n,
            alpha: None,
            nu: None,
        }
    }

    pub fn laguerre(n: u64, alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} is not above -1")));
        }
        Ok(Self {
            n,
            alpha: Some(alpha),
            nu: None,
        })
    }
}

/// A weight evaluation: the plain value and its logarithm, computed
/// directly so that far-tail points do not underflow through `exp`.
#[derive(Debug, Clone)]
pub struct WeightValue {
    pub x: Float,
    pub value: Float,
    pub log_value: Float,
}

/// Euler's q-exponential `E_q(z) = (-z; q)_inf`.
pub fn euler_eq(z: &Complex, qp: &QPoint, ctx: &PrecisionContext) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let minus_z = Complex::with_val(prec, -z);
    let p = qpoch_infinite(&minus_z, qp, ctx)?;
    Ok(LogComplex::from_complex(&p))
}

/// q-Gamma function `Gamma_q(x) = (q;q)_inf / (q^x;q)_inf (1-q)^{1-x}`
/// for real `x`.
pub fn q_gamma(x: &Float, qp: &QPoint, ctx: &PrecisionContext) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let qx = qp.q_pow(x);
    let qx_c = Complex::with_val(prec, (&qx, &Float::new(prec)));
    let denom = qpoch_infinite(&qx_c, qp, ctx).map_err(|e| match e {
        Error::Singularity(_) => {
            Error::Singularity(format!("Gamma_q pole: (q^x;q)_inf vanishes at x = {x}"))
        }
        other => other,
    })?;
    if denom.real().is_zero() && denom.imag().is_zero() {
        return Err(Error::Singularity(format!(
            "Gamma_q pole: (q^x;q)_inf = 0 at x = {x}"
        )));
    }
    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let numer = qpoch_infinite(&q_c, qp, ctx)?;
    // (1-q)^{1-x} through the real logarithm
    let log_pow = Float::with_val(prec, 1u32 - x) * qp.one_minus_q().ln();
    let ratio = LogComplex::from_complex(&Complex::with_val(prec, numer / denom));
    Ok(ratio.mul(&LogComplex::new(log_pow, Float::new(prec))))
}

/// Ramanujan's function `A_q(z) = sum_k q^{k^2} (-z)^k / (q;q)_k`, entire.
pub fn ramanujan_aq(z: &Complex, qp: &QPoint, ctx: &PrecisionContext) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let eps = ctx.eps();
    let mut sum = Complex::with_val(prec, (1, 0));
    let mut term = Complex::with_val(prec, (1, 0));
    let mut max_abs = Float::with_val(prec, 1);
    // q^{2k+1} maintained incrementally; q^{k+1} for the Pochhammer factor
    let mut q_odd = Float::with_val(prec, qp.q());
    let mut qk1 = Float::with_val(prec, qp.q());
    let q_sq = Float::with_val(prec, qp.q().square_ref());
    let abs_z = Float::with_val(prec, z.abs_ref());
    for _ in 0..ctx.max_terms() {
        // t_{k+1} = t_k q^{2k+1} (-z) / (1 - q^{k+1})
        let den = Float::with_val(prec, 1u32 - &qk1);
        term *= Complex::with_val(prec, -z);
        term *= &q_odd;
        term /= &den;
        sum += &term;
        let abs_t = Float::with_val(prec, term.abs_ref());
        if abs_t > max_abs {
            max_abs = abs_t.clone();
        }
        // ratio of the next term; decreasing in k, certifies the tail
        let rho = Float::with_val(prec, &q_odd * &q_sq) * &abs_z
            / Float::with_val(prec, 1u32 - Float::with_val(prec, &qk1 * qp.q()));
        if rho < 0.5 {
            let tail = Float::with_val(prec, &abs_t * &rho) / Float::with_val(prec, 1u32 - &rho);
            if tail <= Float::with_val(prec, &eps * &max_abs) {
                return Ok(LogComplex::from_complex(&sum));
            }
        }
        q_odd *= &q_sq;
        qk1 *= qp.q();
    }
    Err(Error::Resource(
        "A_q series did not converge within max_terms".into(),
    ))
}

/// Jackson's second q-Bessel function `J_nu^{(2)}(z; q)`; `z^nu` on the
/// principal branch.
pub fn jackson_j2(
    z: &Complex,
    nu: f64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    if !(nu > -1.0) {
        return Err(Error::Domain(format!("nu = {nu} is not above -1")));
    }
    let prec = ctx.working_prec();
    let nu_f = ctx.float(nu);
    let q_nu1 = qp.q_pow(&Float::with_val(prec, &nu_f + 1u32));
    let q_nu1_c = Complex::with_val(prec, (&q_nu1, &Float::new(prec)));
    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let pref = Complex::with_val(
        prec,
        qpoch_infinite(&q_nu1_c, qp, ctx)? / qpoch_infinite(&q_c, qp, ctx)?,
    );

    if z.real().is_zero() && z.imag().is_zero() {
        return if nu == 0.0 {
            Ok(LogComplex::from_complex(&pref))
        } else if nu > 0.0 {
            Ok(LogComplex::zero(ctx))
        } else {
            Err(Error::Singularity(format!(
                "(z/2)^nu diverges at z = 0 for nu = {nu}"
            )))
        };
    }

    let half_z = Complex::with_val(prec, z / 2u32);
    let log_half_z = Complex::with_val(prec, half_z.ln_ref());
    let eps = ctx.eps();
    // t_0 = (z/2)^nu
    let mut term = Complex::with_val(prec, &log_half_z * &nu_f).exp();
    let mut sum = term.clone();
    let mut max_abs = Float::with_val(prec, term.abs_ref());
    let half_z_sq = Complex::with_val(prec, half_z.square_ref());
    let abs_hz_sq = Float::with_val(prec, half_z_sq.abs_ref());
    // q^{nu + 2k + 1}, q^{k+1}, q^{nu + k + 1} maintained incrementally
    let mut q_shift = qp.q_pow(&Float::with_val(prec, &nu_f + 1u32));
    let mut qk1 = Float::with_val(prec, qp.q());
    let mut q_nu_k1 = q_nu1.clone();
    let q_sq = Float::with_val(prec, qp.q().square_ref());
    for _ in 0..ctx.max_terms() {
        // t_{k+1} = -t_k (z/2)^2 q^{nu+2k+1} / ((1 - q^{k+1})(1 - q^{nu+k+1}))
        let den = Float::with_val(prec, 1u32 - &qk1) * Float::with_val(prec, 1u32 - &q_nu_k1);
        term *= Complex::with_val(prec, -&half_z_sq);
        term *= &q_shift;
        term /= &den;
        sum += &term;
        let abs_t = Float::with_val(prec, term.abs_ref());
        if abs_t > max_abs {
            max_abs = abs_t.clone();
        }
        let next_den = Float::with_val(prec, 1u32 - Float::with_val(prec, &qk1 * qp.q()))
            * Float::with_val(prec, 1u32 - Float::with_val(prec, &q_nu_k1 * qp.q()));
        let rho = Float::with_val(prec, &q_shift * &q_sq) * &abs_hz_sq / next_den;
        if rho < 0.5 {
            let tail = Float::with_val(prec, &abs_t * &rho) / Float::with_val(prec, 1u32 - &rho);
            if tail <= Float::with_val(prec, &eps * &max_abs) {
                let total = Complex::with_val(prec, pref * sum);
                return Ok(LogComplex::from_complex(&total));
            }
        }
        q_shift *= &q_sq;
        qk1 *= qp.q();
        q_nu_k1 *= qp.q();
    }
    Err(Error::Resource(
        "J_nu^(2) series did not converge within max_terms".into(),
    ))
}

/// Prefix products `(c;q)_j` for `j = 0..=n`.
pub(crate) fn poch_prefix(c: &Float, qp: &QPoint, n: u64, prec: u32) -> Vec<Float> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Float::with_val(prec, 1));
    let mut cqk = c.clone();
    for _ in 0..n {
        let last = out.last().unwrap().clone();
        out.push(last * Float::with_val(prec, 1u32 - &cqk));
        cqk *= qp.q();
    }
    out
}

/// Stieltjes-Wigert polynomial
/// `S_n(x;q) = sum_{k=0}^n q^{k^2} (-x)^k / ((q;q)_k (q;q)_{n-k})`,
/// an exact finite sum.
pub fn stieltjes_wigert(
    x: &Complex,
    n: u64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let qq = poch_prefix(qp.q(), qp, n, prec);
    let mut sum = Complex::new(prec);
    let mut minus_x_pow = Complex::with_val(prec, (1, 0));
    for k in 0..=n {
        let k2 = Float::with_val(prec, k) * Float::with_val(prec, k);
        let qk2 = Float::with_val(prec, &k2 * qp.log_q()).exp();
        let den = Float::with_val(prec, &qq[k as usize] * &qq[(n - k) as usize]);
        let term = Complex::with_val(prec, &minus_x_pow * &qk2) / den;
        sum += term;
        minus_x_pow *= Complex::with_val(prec, -x);
    }
    Ok(LogComplex::from_complex(&sum))
}

/// q-Laguerre polynomial `L_n^{(alpha)}(x;q)` (exact finite sum).
pub fn q_laguerre(
    x: &Complex,
    spec: &PolynomialSpec,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    let alpha = spec
        .alpha
        .ok_or_else(|| Error::Config("PolynomialSpec has no alpha".into()))?;
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is not above -1")));
    }
    let n = spec.n;
    let prec = ctx.working_prec();
    let alpha_f = ctx.float(alpha);
    let q_alpha1 = qp.q_pow(&Float::with_val(prec, &alpha_f + 1u32));
    let qq = poch_prefix(qp.q(), qp, n, prec);
    let qa = poch_prefix(&q_alpha1, qp, n, prec);
    let mut sum = Complex::new(prec);
    let mut minus_x_pow = Complex::with_val(prec, (1, 0));
    for k in 0..=n {
        let kf = Float::with_val(prec, k);
        // q^{k^2 + alpha k}
        let expo = Float::with_val(prec, kf.square_ref()) + Float::with_val(prec, &alpha_f * &kf);
        let qpow = Float::with_val(prec, expo * qp.log_q()).exp();
        let den = Float::with_val(prec, &qq[k as usize] * &qq[(n - k) as usize])
            * &qa[(n - k) as usize];
        let num = Float::with_val(prec, &qpow * &qa[n as usize]);
        let term = Complex::with_val(prec, &minus_x_pow * &num) / den;
        sum += term;
        minus_x_pow *= Complex::with_val(prec, -x);
    }
    Ok(LogComplex::from_complex(&sum))
}

/// Log-normal Stieltjes-Wigert weight
/// `w_sw(x) = sqrt(-1/(2 pi ln q)) exp([ln(x/sqrt q)]^2 / (2 ln q))`.
pub fn weight_sw(x: &Float, qp: &QPoint) -> Result<WeightValue> {
    if !(*x > 0u32) {
        return Err(Error::Domain(format!("x = {x} is not positive")));
    }
    let prec = qp.q().prec();
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let norm = (Float::with_val(prec, -1) / (Float::with_val(prec, &pi * qp.log_q()) * 2u32)).sqrt();
    // ln(x / sqrt q) = ln x - (ln q)/2
    let t = Float::with_val(prec, x.ln_ref()) - Float::with_val(prec, qp.log_q() / 2u32);
    let log_value = Float::with_val(prec, t.square_ref())
        / Float::with_val(prec, qp.log_q() * 2u32)
        + Float::with_val(prec, norm.ln_ref());
    let value = Float::with_val(prec, log_value.exp_ref());
    Ok(WeightValue {
        x: x.clone(),
        value,
        log_value,
    })
}

/// q-Laguerre weight
/// `w_ql(x) = -sin(pi alpha)/pi (q;q)_inf / (q^{-alpha};q)_inf x^alpha / (-x;q)_inf`.
///
/// At integer `alpha` the prefactor is 0/0 and the operation refuses to
/// guess the limit.
pub fn weight_qlaguerre(
    x: &Float,
    alpha: f64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<WeightValue> {
    if !(*x > 0u32) {
        return Err(Error::Domain(format!("x = {x} is not positive")));
    }
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is not above -1")));
    }
    if alpha.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "integer alpha = {alpha}: the weight prefactor is 0/0"
        )));
    }
    let prec = ctx.working_prec();
    let pi = ctx.pi();
    let alpha_f = ctx.float(alpha);
    let q_neg_alpha = qp.q_pow(&Float::with_val(prec, -&alpha_f));
    let qna_c = Complex::with_val(prec, (&q_neg_alpha, &Float::new(prec)));
    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let minus_x = Complex::with_val(prec, (Float::with_val(prec, -x), Float::new(prec)));
    let qq = qpoch_infinite(&q_c, qp, ctx)?;
    let qna = qpoch_infinite(&qna_c, qp, ctx)?;
    let mx = qpoch_infinite(&minus_x, qp, ctx)?;
    if (qna.real().is_zero() && qna.imag().is_zero())
        || (mx.real().is_zero() && mx.imag().is_zero())
    {
        return Err(Error::Singularity("weight denominator vanishes".into()));
    }
    let sin_pa = Float::with_val(prec, &pi * &alpha_f).sin();
    let pref = -(Float::with_val(prec, &sin_pa / &pi));
    let x_alpha_log = Float::with_val(prec, &alpha_f * Float::with_val(prec, x.ln_ref()));
    let ratio = Float::with_val(prec, qq.real() / qna.real());
    let value = Float::with_val(prec, &pref * &ratio)
        * Float::with_val(prec, x_alpha_log.exp_ref())
        / Float::with_val(prec, mx.real());
    let log_value = Float::with_val(prec, value.abs_ref()).ln();
    Ok(WeightValue {
        x: x.clone(),
        value,
        log_value,
    })
}

/// Orthonormal Stieltjes-Wigert function
/// `s_n(x;q) = sqrt(q^n (q;q)_n w_sw(x)) S_n(x;q)`.
pub fn orthonormal_sw(
    x: &Float,
    n: u64,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let w = weight_sw(x, qp)?;
    let qqn = poch_prefix(qp.q(), qp, n, prec)[n as usize].clone();
    // log of q^n (q;q)_n w(x), all positive
    let log_factor = Float::with_val(prec, qp.log_q() * Float::with_val(prec, n))
        + Float::with_val(prec, qqn.ln_ref())
        + &w.log_value;
    let half = Float::with_val(prec, log_factor / 2u32);
    let xc = Complex::with_val(prec, (x, &Float::new(prec)));
    let s = stieltjes_wigert(&xc, n, qp, ctx)?;
    Ok(s.mul(&LogComplex::new(half, Float::new(prec))))
}

/// Orthonormal q-Laguerre function
/// `l_n(x;q) = sqrt(q^n (q;q)_n / (q^{alpha+1};q)_n w_ql(x)) L_n^{(alpha)}(x;q)`.
pub fn orthonormal_qlaguerre(
    x: &Float,
    spec: &PolynomialSpec,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    let alpha = spec
        .alpha
        .ok_or_else(|| Error::Config("PolynomialSpec has no alpha".into()))?;
    let n = spec.n;
    let prec = ctx.working_prec();
    let w = weight_qlaguerre(x, alpha, qp, ctx)?;
    let alpha_f = ctx.float(alpha);
    let q_alpha1 = qp.q_pow(&Float::with_val(prec, &alpha_f + 1u32));
    let qqn = poch_prefix(qp.q(), qp, n, prec)[n as usize].clone();
    let qan = poch_prefix(&q_alpha1, qp, n, prec)[n as usize].clone();
    // q^n (q;q)_n / (q^{alpha+1};q)_n * w(x); w may be negative in general
    let factor = Float::with_val(prec, qp.log_q() * Float::with_val(prec, n)).exp()
        * Float::with_val(prec, &qqn / &qan)
        * &w.value;
    let root = LogComplex::from_real(&factor).sqrt();
    let xc = Complex::with_val(prec, (x, &Float::new(prec)));
    let l = q_laguerre(&xc, spec, qp, ctx)?;
    Ok(l.mul(&root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::euler_series;
    use rug::ops::Pow;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn tol(bits: i32) -> Float {
        Float::with_val(320, 2).pow(bits)
    }

    fn lc_rel(a: &LogComplex, b: &LogComplex) -> Float {
        a.rel_dev(b).unwrap()
    }

    #[test]
    fn euler_eq_matches_series() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let one = euler_eq(&x.complex((0, 0)), &qp, &x).unwrap();
        assert!(one.log_mag().is_zero() && one.phase().is_zero());

        // product vs series at z = 1: E_q(1) = (-1;q)_inf
        let prod = euler_eq(&x.complex((1, 0)), &qp, &x).unwrap();
        let ser = euler_series(&x.complex((-1, 0)), &qp, &x).unwrap();
        let ser = LogComplex::from_complex(&ser);
        assert!(lc_rel(&prod, &ser) < tol(-246));
    }

    #[test]
    fn q_gamma_small_integers() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let g1 = q_gamma(&x.float(1), &qp, &x).unwrap();
        assert!(lc_rel(&g1, &LogComplex::one(&x)) < tol(-250));
        let g2 = q_gamma(&x.float(2), &qp, &x).unwrap();
        assert!(lc_rel(&g2, &LogComplex::one(&x)) < tol(-250));
    }

    #[test]
    fn q_gamma_pole_at_nonpositive_integers() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        assert!(matches!(
            q_gamma(&x.float(0), &qp, &x),
            Err(Error::Singularity(_))
        ));
        assert!(matches!(
            q_gamma(&x.float(-2), &qp, &x),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn ramanujan_aq_matches_naive_sum() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let one = ramanujan_aq(&x.complex((0, 0)), &qp, &x).unwrap();
        assert!(one.log_mag().is_zero());

        let z = x.complex((0.7, 0.2));
        let got = ramanujan_aq(&z, &qp, &x).unwrap();
        // naive term-by-term oracle
        let prec = x.working_prec();
        let mut oracle = Complex::new(prec);
        let mut qqk = Float::with_val(prec, 1);
        for k in 0u32..200 {
            if k > 0 {
                qqk *= Float::with_val(prec, 1u32 - Float::with_val(prec, qp.q().pow(k)));
            }
            let t = Complex::with_val(prec, -&z).pow(k)
                * Float::with_val(prec, qp.q().pow(k * k))
                / &qqk;
            oracle += Complex::with_val(prec, t);
        }
        let oracle = LogComplex::from_complex(&oracle);
        assert!(lc_rel(&got, &oracle) < tol(-246));
    }

    #[test]
    fn jackson_j2_at_zero() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let z0 = x.complex((0, 0));
        let v = jackson_j2(&z0, 0.0, &qp, &x).unwrap();
        assert!(lc_rel(&v, &LogComplex::one(&x)) < tol(-250));
        let v = jackson_j2(&z0, 0.5, &qp, &x).unwrap();
        assert!(v.is_zero());
        assert!(jackson_j2(&x.complex((1, 0)), -1.0, &qp, &x).is_err());
    }

    #[test]
    fn stieltjes_wigert_low_degrees() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let s0 = stieltjes_wigert(&x.complex((3, 0)), 0, &qp, &x).unwrap();
        assert!(lc_rel(&s0, &LogComplex::one(&x)) < tol(-250));
        // S_1(3; 1/2) = (1 - q x)/(1 - q) = -1
        let s1 = stieltjes_wigert(&x.complex((3, 0)), 1, &qp, &x).unwrap();
        let minus_one = LogComplex::from_real(&x.float(-1));
        assert!(lc_rel(&s1, &minus_one) < tol(-246));
    }

    #[test]
    fn q_laguerre_low_degrees() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let spec0 = PolynomialSpec::laguerre(0, 0.5).unwrap();
        let l0 = q_laguerre(&x.complex((2, 1)), &spec0, &qp, &x).unwrap();
        assert!(lc_rel(&l0, &LogComplex::one(&x)) < tol(-250));

        // x = 0, n = 3: only k = 0 survives, giving 1/(q;q)_3
        let spec3 = PolynomialSpec::laguerre(3, 0.5).unwrap();
        let l = q_laguerre(&x.complex((0, 0)), &spec3, &qp, &x).unwrap();
        let prec = x.working_prec();
        let mut qq3 = Float::with_val(prec, 1);
        for k in 1u32..=3 {
            qq3 *= Float::with_val(prec, 1u32 - Float::with_val(prec, qp.q().pow(k)));
        }
        let expect = LogComplex::from_real(&Float::with_val(prec, qq3.recip_ref()));
        assert!(lc_rel(&l, &expect) < tol(-246));

        assert!(q_laguerre(&x.complex((1, 0)), &PolynomialSpec::degree(2), &qp, &x).is_err());
    }

    #[test]
    fn weight_sw_values() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let prec = x.working_prec();
        // at x = sqrt(q) the squared-log exponent vanishes
        let sq = Float::with_val(prec, qp.q().sqrt_ref());
        let w = weight_sw(&sq, &qp).unwrap();
        let norm = (Float::with_val(prec, -1)
            / (Float::with_val(prec, x.pi() * qp.log_q()) * 2u32))
            .sqrt();
        let d = Float::with_val(prec, &w.value - &norm).abs();
        assert!(d < tol(-250));

        // q = 1/2, x = 1: exp((ln sqrt 2)^2 / (2 ln(1/2))) * norm
        let w = weight_sw(&x.float(1), &qp).unwrap();
        let t = Float::with_val(prec, 2u32).ln() / 2u32;
        let expect = (Float::with_val(prec, t.square_ref())
            / Float::with_val(prec, qp.log_q() * 2u32))
        .exp()
            * &norm;
        let d = Float::with_val(prec, &w.value - &expect).abs();
        assert!(d < tol(-250));

        assert!(weight_sw(&x.float(0), &qp).is_err());
        assert!(weight_sw(&x.float(-1), &qp).is_err());
    }

    #[test]
    fn weight_qlaguerre_sign_and_decay() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let w1 = weight_qlaguerre(&x.float(1), 0.5, &qp, &x).unwrap();
        assert!(w1.value > 0u32);
        let w_big = weight_qlaguerre(&x.float(1e6), 0.5, &qp, &x).unwrap();
        assert!(Float::with_val(288, w_big.value.abs_ref()) < w1.value);
        assert!(weight_qlaguerre(&x.float(1), 1.0, &qp, &x).is_err());
        assert!(weight_qlaguerre(&x.float(1), 0.0, &qp, &x).is_err());
    }

    #[test]
    fn orthonormal_degree_zero_is_sqrt_weight() {
        let x = ctx();
        let qp = QPoint::from_f64(0.5, &x).unwrap();
        let pt = x.float(1.5);
        let s0 = orthonormal_sw(&pt, 0, &qp, &x).unwrap();
        let w = weight_sw(&pt, &qp).unwrap();
        let expect = LogComplex::from_real(&w.value).sqrt();
        assert!(lc_rel(&s0, &expect) < tol(-246));

        let spec = PolynomialSpec::laguerre(0, 0.5).unwrap();
        let l0 = orthonormal_qlaguerre(&pt, &spec, &qp, &x).unwrap();
        let w = weight_qlaguerre(&pt, 0.5, &qp, &x).unwrap();
        let expect = LogComplex::from_real(&w.value).sqrt();
        assert!(lc_rel(&l0, &expect) < tol(-246));
    }

    #[test]
    fn reflection_identities_link_euler_eq_to_theta() {
        // E_q(q^{-n+1/2} e^{2 pi u}) (q, -q^{n+1/2} e^{-2 pi u}; q)_inf
        //   = q^{-n^2/2} e^{2 pi n u} theta_3(e^{2 pi u}; q^{1/2})
        // and the theta_4 twin with the (-1)^n sign.
        use crate::theta::{theta_series, ModularPoint, ThetaKind};
        let x = ctx();
        let prec = x.working_prec();
        let t = tol(-(x.precision_bits() as i32) + 12);
        for q in [0.3f64, 0.5] {
            let qp = QPoint::from_f64(q, &x).unwrap();
            for n in [1u64, 4, 9, 12] {
                for u in [-1.0f64, -0.3, 0.0, 0.45, 1.0] {
                    let e2u = (x.float(u) * x.pi() * 2u32).exp();
                    // q^{-n+1/2}
                    let shift = qp.q_pow(&(x.float(0.5) - x.float(n)));
                    let arg = Complex::with_val(prec, (&shift * &e2u, &Float::new(prec)));

                    let sqrt_q = Float::with_val(prec, qp.q().sqrt_ref());
                    let nome = Complex::with_val(prec, (&sqrt_q, &Float::new(prec)));
                    let z = Complex::with_val(prec, (&e2u, &Float::new(prec)));
                    let mpnt = ModularPoint::from_z_nome(&z, &nome, &x).unwrap();

                    // common scale q^{-n^2/2} e^{2 pi n u}
                    let n2 = Float::with_val(prec, n) * Float::with_val(prec, n);
                    let scale_log = Float::with_val(prec, &n2 * qp.log_q()) / -2i32
                        + x.pi() * x.float(u) * x.float(n) * 2u32;
                    let scale = LogComplex::new(scale_log, Float::new(prec));

                    let e2u_neg = Float::with_val(prec, e2u.recip_ref());
                    let qn_half = qp.q_pow(&(x.float(n) + x.float(0.5)));
                    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
                    let qq = qpoch_infinite(&q_c, &qp, &x).unwrap();

                    // Eq with positive argument against theta_3
                    let lhs = euler_eq(&arg, &qp, &x).unwrap();
                    let tail = Complex::with_val(
                        prec,
                        (-(Float::with_val(prec, &qn_half * &e2u_neg)), Float::new(prec)),
                    );
                    let den = Complex::with_val(
                        prec,
                        &qq * qpoch_infinite(&tail, &qp, &x).unwrap(),
                    );
                    let th3 = theta_series(ThetaKind::Three, &mpnt, &x).unwrap();
                    let rhs = scale
                        .mul(&LogComplex::from_complex(&th3))
                        .div(&LogComplex::from_complex(&den))
                        .unwrap();
                    assert!(lhs.rel_dev(&rhs).unwrap() < t, "theta3 case q={q} n={n} u={u}");

                    // Eq with negative argument against theta_4
                    let lhs = euler_eq(&Complex::with_val(prec, -&arg), &qp, &x)
                        .unwrap();
                    let tail = Complex::with_val(
                        prec,
                        (Float::with_val(prec, &qn_half * &e2u_neg), Float::new(prec)),
                    );
                    let den = Complex::with_val(
                        prec,
                        &qq * qpoch_infinite(&tail, &qp, &x).unwrap(),
                    );
                    let th4 = theta_series(ThetaKind::Four, &mpnt, &x).unwrap();
                    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
                    let rhs = scale
                        .mul(&LogComplex::from_complex(&th4))
                        .mul(&LogComplex::from_real(&x.float(sign)))
                        .div(&LogComplex::from_complex(&den))
                        .unwrap();
                    assert!(lhs.rel_dev(&rhs).unwrap() < t, "theta4 case q={q} n={n} u={u}");
                }
            }
        }
    }
}
