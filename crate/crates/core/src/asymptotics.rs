//! Exact theta representations with certified bounds, closed-form main
//! terms for the scaled limits, and rate fits.
//!
//! Two layers are verified here. The exact layer rewrites each function at
//! geometrically shifted arguments as a theta value plus a measured
//! residual `e(n)` that must stay inside a closed-form envelope; this is an
//! identity, valid at every admissible `(z, q, n)`. The scaled layer pins
//! `q` to `n` through a nome rule `q = exp(-c pi n^{-a})` and compares the
//! directly evaluated function against a closed-form main term whose
//! relative deviation must vanish at a stated exponential rate in `n^a`.

use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::precision::PrecisionContext;
use crate::qfunctions::{
    euler_eq, jackson_j2, orthonormal_qlaguerre, orthonormal_sw, q_gamma, q_laguerre,
    ramanujan_aq, stieltjes_wigert, PolynomialSpec,
};
use crate::qseries::{chi, qpoch_infinite, QPoint};
use crate::theta::{theta, ModularPoint, ThetaKind};
use rug::{Complex, Float};

/// How the nome is tied to `n` in a scaled regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NomeRule {
    /// `q = exp(-2 pi n^{-a})`
    TwoPi,
    /// `q = exp(-pi n^{-a})`
    Pi,
}

impl NomeRule {
    fn multiplier(self) -> u32 {
        match self {
            NomeRule::TwoPi => 2,
            NomeRule::Pi => 1,
        }
    }
}

/// A point of a scaled limit: degree/shift `n`, scaling exponent `a`,
/// window coordinate `u`, the nome rule, and the optional extra
/// parameters some families carry.
#[derive(Debug, Clone)]
pub struct ScaledRegime {
    n: u64,
    a_exp: f64,
    u: f64,
    nome_rule: NomeRule,
    pub nu: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
}

impl ScaledRegime {
    pub fn new(n: u64, a_exp: f64, u: f64, nome_rule: NomeRule) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if !(a_exp > 0.0 && a_exp < 0.5) {
            return Err(Error::Domain(format!(
                "a = {a_exp} is outside (0, 1/2)"
            )));
        }
        if !u.is_finite() {
            return Err(Error::Domain(format!("u = {u} is not finite")));
        }
        Ok(Self {
            n,
            a_exp,
            u,
            nome_rule,
            nu: None,
            alpha: None,
            gamma: None,
        })
    }

    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        if !(nu > -1.0) {
            return Err(Error::Domain(format!("nu = {nu} is not above -1")));
        }
        self.nu = Some(nu);
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} is not above -1")));
        }
        self.alpha = Some(alpha);
        Ok(self)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a_exp(&self) -> f64 {
        self.a_exp
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn nome_rule(&self) -> NomeRule {
        self.nome_rule
    }

    /// The `q` this regime pins: `exp(-c pi n^{-a})`.
    pub fn qpoint(&self, ctx: &PrecisionContext) -> Result<QPoint> {
        QPoint::from_scaled(self.nome_rule.multiplier(), self.n, self.a_exp, ctx)
    }
}

/// An exact rewrite of a function value as
/// `scale * (theta_4(..) + e(n))` with a certified envelope on `|e(n)|`.
#[derive(Debug, Clone)]
pub struct ThetaRepResult {
    /// The function value, directly evaluated.
    pub lhs: LogComplex,
    /// The theta value of the representation.
    pub theta_term: Complex,
    /// The measured residual `e(n)`.
    pub residual: Complex,
    /// The closed-form bound on `|e(n)|`.
    pub bound: Float,
    pub satisfied: bool,
}

/// `theta_k(z; nome)` for a positive-real-axis style complex `z`.
fn theta_z_nome(
    kind: ThetaKind,
    z: &Complex,
    qp: &QPoint,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let prec = ctx.working_prec();
    let nome = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let p = ModularPoint::from_z_nome(z, &nome, ctx)?;
    theta(kind, &p, ctx)
}

/// Shared tail of every representation check: divides the direct value by
/// the representation's scale, measures `e(n)` against the theta term and
/// the envelope.
fn finish_rep(
    lhs: LogComplex,
    scale: LogComplex,
    theta_term: Complex,
    bound: Float,
    ctx: &PrecisionContext,
) -> Result<ThetaRepResult> {
    let prec = ctx.working_prec();
    let ratio = lhs.div(&scale)?;
    let residual = Complex::with_val(prec, ratio.to_complex() - &theta_term);
    let abs_res = Float::with_val(prec, residual.abs_ref());
    let satisfied = abs_res <= bound;
    Ok(ThetaRepResult {
        lhs,
        theta_term,
        residual,
        bound,
        satisfied,
    })
}

fn require_nonzero(z: &Complex) -> Result<()> {
    if z.real().is_zero() && z.imag().is_zero() {
        return Err(Error::Domain("z must be nonzero".into()));
    }
    Ok(())
}

/// Gate `2 q^{n/2} / (1 - q) < 1` for the entire-function representations.
fn gate_half(qp: &QPoint, n: u64, ctx: &PrecisionContext) -> Result<()> {
    let prec = ctx.working_prec();
    let e = Float::with_val(prec, qp.log_q() * Float::with_val(prec, n)) / 2u32;
    let v = Float::with_val(prec, e.exp_ref()) * 2u32 / qp.one_minus_q();
    if v < 1u32 {
        Ok(())
    } else {
        Err(Error::Regime(format!(
            "n = {n} below the regime gate: 2 q^(n/2)/(1-q) = {v:.3} >= 1"
        )))
    }
}

/// Gate `2 q^{n/4} / (1 - q) < 1` for the polynomial representations.
fn gate_quarter(qp: &QPoint, n: u64, ctx: &PrecisionContext) -> Result<()> {
    let prec = ctx.working_prec();
    let e = Float::with_val(prec, qp.log_q() * Float::with_val(prec, n)) / 4u32;
    let v = Float::with_val(prec, e.exp_ref()) * 2u32 / qp.one_minus_q();
    if v < 1u32 {
        Ok(())
    } else {
        Err(Error::Regime(format!(
            "n = {n} below the regime gate: 2 q^(n/4)/(1-q) = {v:.3} >= 1"
        )))
    }
}

/// `q^x` as a positive Float for integer-combination exponents.
fn q_pow_f(qp: &QPoint, x: &Float) -> Float {
    let prec = x.prec();
    Float::with_val(prec, x * qp.log_q()).exp()
}

/// Envelope brace for the entire-function representations:
/// `q^{n/2}/(1-q) + q^{floor(n/2)^2} / |z|^{floor(n/2)}`.
fn brace_half(z: &Complex, qp: &QPoint, n: u64, prec: u32) -> Float {
    let abs_z = Float::with_val(prec, z.abs_ref());
    let half_n = Float::with_val(prec, n) / 2u32;
    let t1 = q_pow_f(qp, &half_n) / qp.one_minus_q();
    let fl = Float::with_val(prec, n / 2);
    let log_abs_z = Float::with_val(prec, abs_z.ln_ref());
    let t2 = q_pow_f(qp, &Float::with_val(prec, fl.square_ref()))
        / Float::with_val(prec, &log_abs_z * &fl).exp();
    t1 + t2
}

/// Envelope brace for the polynomial representations:
/// `q^{n/4}/(1-q) + |z|^m q^{m^2 - chi m} + q^{m^2 + chi m}/|z|^m`,
/// `m = floor(n/4)`.
fn brace_quarter(z: &Complex, qp: &QPoint, n: u64, prec: u32) -> Float {
    let abs_z = Float::with_val(prec, z.abs_ref());
    let log_abs_z = Float::with_val(prec, abs_z.ln_ref());
    let quarter_n = Float::with_val(prec, n) / 4u32;
    let t1 = q_pow_f(qp, &quarter_n) / qp.one_minus_q();
    let m = Float::with_val(prec, n / 4);
    let m2 = Float::with_val(prec, m.square_ref());
    let cm = Float::with_val(prec, &m * Float::with_val(prec, chi(n)));
    let zm = Float::with_val(prec, &log_abs_z * &m).exp();
    let t2 = q_pow_f(qp, &Float::with_val(prec, &m2 - &cm)) * &zm;
    let t3 = q_pow_f(qp, &Float::with_val(prec, &m2 + &cm)) / &zm;
    Float::with_val(prec, &t1 + &t2) + t3
}

/// `theta_3(1/|z|; q)` as a positive real number.
fn theta3_env(z: &Complex, qp: &QPoint, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_prec();
    let abs_z = Float::with_val(prec, z.abs_ref());
    let arg = Float::with_val(prec, abs_z.recip_ref());
    let t = theta_z_nome(
        ThetaKind::Three,
        &Complex::with_val(prec, (&arg, &Float::new(prec))),
        qp,
        ctx,
    )?;
    Ok(Float::with_val(prec, t.real()))
}

/// `theta_3(q^{chi(n)}/|z|; q)` as a positive real number.
fn theta3_env_chi(z: &Complex, qp: &QPoint, n: u64, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.working_prec();
    let abs_z = Float::with_val(prec, z.abs_ref());
    let arg = Float::with_val(prec, abs_z.recip_ref())
        * q_pow_f(qp, &Float::with_val(prec, chi(n)));
    let t = theta_z_nome(
        ThetaKind::Three,
        &Complex::with_val(prec, (&arg, &Float::new(prec))),
        qp,
        ctx,
    )?;
    Ok(Float::with_val(prec, t.real()))
}

/// `A_q(q^{-2n} z) = (-z)^n { theta_4(1/z; q) + e(n) } / ((q;q)_inf q^{n^2})`
/// with `|e(n)| <= 4 theta_3(1/|z|; q) { q^{n/2}/(1-q) + q^{floor(n/2)^2}/|z|^{floor(n/2)} }`.
pub fn aq_theta_rep(
    z: &Complex,
    qp: &QPoint,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<ThetaRepResult> {
    require_nonzero(z)?;
    gate_half(qp, n, ctx)?;
    let prec = ctx.working_prec();
    let arg = Complex::with_val(
        prec,
        z * q_pow_f(qp, &(Float::with_val(prec, n) * -2i32)),
    );
    let lhs = ramanujan_aq(&arg, qp, ctx)?;

    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let qq = qpoch_infinite(&q_c, qp, ctx)?;
    let n2 = Float::with_val(prec, n) * Float::with_val(prec, n);
    // (-z)^n / ((q;q)_inf q^{n^2})
    let scale = LogComplex::from_complex(&Complex::with_val(prec, -z))
        .pow_i64(n as i64)
        .div(&LogComplex::from_complex(&qq))?
        .div(&LogComplex::new(
            Float::with_val(prec, &n2 * qp.log_q()),
            Float::new(prec),
        ))?;

    let z_inv = Complex::with_val(prec, z.recip_ref());
    let theta_term = theta_z_nome(ThetaKind::Four, &z_inv, qp, ctx)?;
    let bound = theta3_env(z, qp, ctx)? * brace_half(z, qp, n, prec) * 4u32;
    finish_rep(lhs, scale, theta_term, bound, ctx)
}

/// `J_nu^{(2)}(2 sqrt(z q^{-2n-nu}); q)
///   = z^{n+nu/2} { theta_4(1/z; q) + e(n) } / ((-1)^n (q;q)_inf^2 q^{n^2+n nu+nu^2/2})`
/// with the same brace as the `A_q` representation and constant 12.
pub fn bessel_theta_rep(
    z: &Complex,
    nu: f64,
    qp: &QPoint,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<ThetaRepResult> {
    require_nonzero(z)?;
    if !(nu > -1.0) {
        return Err(Error::Domain(format!("nu = {nu} is not above -1")));
    }
    gate_half(qp, n, ctx)?;
    let prec = ctx.working_prec();
    let nu_f = ctx.float(nu);
    let n_f = Float::with_val(prec, n);
    // 2 sqrt(z q^{-2n-nu}), principal square root
    let shift = q_pow_f(
        qp,
        &(-(Float::with_val(prec, &n_f * 2u32) + &nu_f)),
    );
    let arg = Complex::with_val(prec, Complex::with_val(prec, z * &shift).sqrt() * 2u32);
    let lhs = jackson_j2(&arg, nu, qp, ctx)?;

    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let qq2 = LogComplex::from_complex(&qpoch_infinite(&q_c, qp, ctx)?).pow_i64(2);
    // z^{n + nu/2} on the principal branch
    let log_z = Complex::with_val(prec, z.ln_ref());
    let expo = Float::with_val(prec, &n_f + Float::with_val(prec, &nu_f / 2u32));
    let z_pow = LogComplex::from_complex(&Complex::with_val(prec, &log_z * &expo).exp());
    // q^{n^2 + n nu + nu^2/2}
    let q_exp = Float::with_val(prec, n_f.square_ref())
        + Float::with_val(prec, &n_f * &nu_f)
        + Float::with_val(prec, Float::with_val(prec, nu_f.square_ref()) / 2u32);
    let sign_phase = if n % 2 == 1 {
        ctx.pi()
    } else {
        Float::new(prec)
    };
    let scale = z_pow
        .div(&qq2)?
        .div(&LogComplex::new(
            Float::with_val(prec, &q_exp * qp.log_q()),
            Float::new(prec),
        ))?
        .mul(&LogComplex::new(Float::new(prec), sign_phase));

    let z_inv = Complex::with_val(prec, z.recip_ref());
    let theta_term = theta_z_nome(ThetaKind::Four, &z_inv, qp, ctx)?;
    let bound = theta3_env(z, qp, ctx)? * brace_half(z, qp, n, prec) * 12u32;
    finish_rep(lhs, scale, theta_term, bound, ctx)
}

/// Shared scale for the two polynomial representations:
/// `(-z)^{floor(n/2)} / ((q;q)_inf^2 q^{floor(n/2) floor((n+1)/2)})`.
fn poly_rep_scale(
    z: &Complex,
    qp: &QPoint,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let q_c = Complex::with_val(prec, (qp.q(), &Float::new(prec)));
    let qq2 = LogComplex::from_complex(&qpoch_infinite(&q_c, qp, ctx)?).pow_i64(2);
    let fl = (n / 2) as i64;
    let fl1 = ((n + 1) / 2) as i64;
    let q_exp = Float::with_val(prec, fl) * Float::with_val(prec, fl1);
    LogComplex::from_complex(&Complex::with_val(prec, -z))
        .pow_i64(fl)
        .div(&qq2)?
        .div(&LogComplex::new(
            Float::with_val(prec, &q_exp * qp.log_q()),
            Float::new(prec),
        ))
}

/// `S_n(z q^{-n}; q) = (-z)^{floor(n/2)} { theta_4(q^{chi(n)}/z; q) + e(n) }
///   / ((q;q)_inf^2 q^{floor(n/2) floor((n+1)/2)})`
/// with the three-term brace and constant 12.
pub fn sw_theta_rep(
    z: &Complex,
    qp: &QPoint,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<ThetaRepResult> {
    require_nonzero(z)?;
    gate_quarter(qp, n, ctx)?;
    let prec = ctx.working_prec();
    let arg = Complex::with_val(prec, z * q_pow_f(qp, &(-Float::with_val(prec, n))));
    let lhs = stieltjes_wigert(&arg, n, qp, ctx)?;
    let scale = poly_rep_scale(z, qp, n, ctx)?;
    let theta_arg = Complex::with_val(
        prec,
        Complex::with_val(prec, z.recip_ref()) * q_pow_f(qp, &Float::with_val(prec, chi(n))),
    );
    let theta_term = theta_z_nome(ThetaKind::Four, &theta_arg, qp, ctx)?;
    let bound = theta3_env_chi(z, qp, n, ctx)? * brace_quarter(z, qp, n, prec) * 12u32;
    finish_rep(lhs, scale, theta_term, bound, ctx)
}

/// `L_n^{(alpha)}(z q^{-n-alpha}; q)`, same shape as the Stieltjes-Wigert
/// representation with constant 60.
pub fn laguerre_theta_rep(
    z: &Complex,
    alpha: f64,
    qp: &QPoint,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<ThetaRepResult> {
    require_nonzero(z)?;
    gate_quarter(qp, n, ctx)?;
    let prec = ctx.working_prec();
    let alpha_f = ctx.float(alpha);
    let shift = q_pow_f(qp, &(-(Float::with_val(prec, n) + &alpha_f)));
    let arg = Complex::with_val(prec, z * &shift);
    let spec = PolynomialSpec::laguerre(n, alpha)?;
    let lhs = q_laguerre(&arg, &spec, qp, ctx)?;
    let scale = poly_rep_scale(z, qp, n, ctx)?;
    let theta_arg = Complex::with_val(
        prec,
        Complex::with_val(prec, z.recip_ref()) * q_pow_f(qp, &Float::with_val(prec, chi(n))),
    );
    let theta_term = theta_z_nome(ThetaKind::Four, &theta_arg, qp, ctx)?;
    let bound = theta3_env_chi(z, qp, n, ctx)? * brace_quarter(z, qp, n, prec) * 60u32;
    finish_rep(lhs, scale, theta_term, bound, ctx)
}

/// The fourteen scaled-limit cases. The `id` strings double as the CLI
/// target identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MainTermCase {
    EulerPlus,
    EulerMinus,
    GammaFalling,
    GammaRising,
    RamanujanMinus,
    RamanujanPlus,
    BesselImaginary,
    BesselReal,
    SwMinus,
    SwPlus,
    SwOrthonormal,
    LaguerreMinus,
    LaguerrePlus,
    LaguerreOrthonormal,
}

impl MainTermCase {
    pub const ALL: [MainTermCase; 14] = [
        MainTermCase::EulerPlus,
        MainTermCase::EulerMinus,
        MainTermCase::GammaFalling,
        MainTermCase::GammaRising,
        MainTermCase::RamanujanMinus,
        MainTermCase::RamanujanPlus,
        MainTermCase::BesselImaginary,
        MainTermCase::BesselReal,
        MainTermCase::SwMinus,
        MainTermCase::SwPlus,
        MainTermCase::SwOrthonormal,
        MainTermCase::LaguerreMinus,
        MainTermCase::LaguerrePlus,
        MainTermCase::LaguerreOrthonormal,
    ];

    /// The CLI identifier of this case.
    pub fn id(self) -> &'static str {
        match self {
            MainTermCase::EulerPlus => "2.2",
            MainTermCase::EulerMinus => "2.3",
            MainTermCase::GammaFalling => "2.5",
            MainTermCase::GammaRising => "2.6",
            MainTermCase::RamanujanMinus => "2.11",
            MainTermCase::RamanujanPlus => "2.12",
            MainTermCase::BesselImaginary => "2.17",
            MainTermCase::BesselReal => "2.18",
            MainTermCase::SwMinus => "2.23",
            MainTermCase::SwPlus => "2.25",
            MainTermCase::SwOrthonormal => "2.26",
            MainTermCase::LaguerreMinus => "2.31",
            MainTermCase::LaguerrePlus => "2.32",
            MainTermCase::LaguerreOrthonormal => "2.33",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::Config(format!("unknown case id: {id}")))
    }

    /// The theorem this case belongs to (CLI identifier).
    pub fn theorem_id(self) -> &'static str {
        match self {
            MainTermCase::EulerPlus | MainTermCase::EulerMinus => "2.1",
            MainTermCase::GammaFalling | MainTermCase::GammaRising => "2.2",
            MainTermCase::RamanujanMinus | MainTermCase::RamanujanPlus => "2.3",
            MainTermCase::BesselImaginary | MainTermCase::BesselReal => "2.4",
            MainTermCase::SwMinus | MainTermCase::SwPlus | MainTermCase::SwOrthonormal => "2.5",
            MainTermCase::LaguerreMinus
            | MainTermCase::LaguerrePlus
            | MainTermCase::LaguerreOrthonormal => "2.6",
        }
    }

    /// All scaled cases attached to a theorem identifier.
    pub fn for_theorem(theorem_id: &str) -> Result<Vec<Self>> {
        let v: Vec<Self> = Self::ALL
            .into_iter()
            .filter(|c| c.theorem_id() == theorem_id)
            .collect();
        if v.is_empty() {
            return Err(Error::Config(format!(
                "unknown theorem id: {theorem_id}"
            )));
        }
        Ok(v)
    }

    pub fn nome_rule(self) -> NomeRule {
        match self {
            MainTermCase::RamanujanMinus
            | MainTermCase::RamanujanPlus
            | MainTermCase::BesselImaginary
            | MainTermCase::BesselReal => NomeRule::Pi,
            _ => NomeRule::TwoPi,
        }
    }

    /// The stated decay-rate coefficient `c` in `O(exp(-c pi n^a))`.
    pub fn rate_coefficient(self) -> f64 {
        match self {
            MainTermCase::EulerPlus
            | MainTermCase::RamanujanMinus
            | MainTermCase::BesselImaginary => 1.0,
            MainTermCase::EulerMinus
            | MainTermCase::GammaFalling
            | MainTermCase::GammaRising
            | MainTermCase::RamanujanPlus
            | MainTermCase::BesselReal => 2.0,
            MainTermCase::SwMinus | MainTermCase::LaguerreMinus => 0.5,
            MainTermCase::SwPlus
            | MainTermCase::SwOrthonormal
            | MainTermCase::LaguerrePlus
            | MainTermCase::LaguerreOrthonormal => 1.0,
        }
    }

    pub fn needs_nu(self) -> bool {
        matches!(
            self,
            MainTermCase::BesselImaginary | MainTermCase::BesselReal
        )
    }

    pub fn needs_alpha(self) -> bool {
        matches!(
            self,
            MainTermCase::LaguerreMinus
                | MainTermCase::LaguerrePlus
                | MainTermCase::LaguerreOrthonormal
        )
    }
}

/// Derived quantities of a regime point, at working precision:
/// `A = n^a`, `B = n^{-a}`, `A u + n`, and `X = pi B (A u + n)^2`.
struct Scales {
    a_cap: Float,
    b: Float,
    n_f: Float,
    u_f: Float,
    au_n: Float,
    x_big: Float,
    pi: Float,
}

fn scales(r: &ScaledRegime, ctx: &PrecisionContext) -> Scales {
    let prec = ctx.working_prec();
    let n_f = ctx.float(r.n);
    let ln_n = Float::with_val(prec, n_f.ln_ref());
    let a_cap = Float::with_val(prec, &ln_n * ctx.float(r.a_exp)).exp();
    let b = Float::with_val(prec, a_cap.recip_ref());
    let u_f = ctx.float(r.u);
    let au_n = Float::with_val(prec, &a_cap * &u_f) + &n_f;
    let pi = ctx.pi();
    let x_big = Float::with_val(prec, &pi * &b) * Float::with_val(prec, au_n.square_ref());
    Scales {
        a_cap,
        b,
        n_f,
        u_f,
        au_n,
        x_big,
        pi,
    }
}

/// A closed-form main term, split into the non-oscillatory prefactor and
/// the cosine factor (1 when the formula has none).
#[derive(Debug, Clone)]
pub struct MainTerm {
    pub value: LogComplex,
    pub prefactor: LogComplex,
    pub oscillatory_factor: Float,
}

fn require_param(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("regime is missing {name}")))
}

/// The closed-form main term of a scaled case at a regime point.
pub fn main_term(case: MainTermCase, r: &ScaledRegime, ctx: &PrecisionContext) -> Result<MainTerm> {
    if r.nome_rule != case.nome_rule() {
        return Err(Error::Config(format!(
            "case {} expects nome rule {:?}",
            case.id(),
            case.nome_rule()
        )));
    }
    let prec = ctx.working_prec();
    let s = scales(r, ctx);
    let qp = r.qpoint(ctx)?;
    let f = |v: f64| ctx.float(v);
    let ln2 = Float::with_val(prec, 2u32).ln();
    // pi/12 (A - B) style combos assembled per case below
    let pi_a = Float::with_val(prec, &s.pi * &s.a_cap);
    let pi_b = Float::with_val(prec, &s.pi * &s.b);
    let ln_a = Float::with_val(prec, s.a_cap.ln_ref());
    let cos_pau =
        Float::with_val(prec, Float::with_val(prec, &s.pi * &s.a_cap) * &s.u_f).cos();
    let cos_half = Float::with_val(prec, Float::with_val(prec, &s.pi * &s.au_n) / 2u32).cos();
    let sign_phase = |odd: bool| -> Float {
        if odd {
            ctx.pi()
        } else {
            Float::new(prec)
        }
    };
    let odd = r.n % 2 == 1;

    let (log_mag, phase, osc): (Float, Float, Option<Float>) = match case {
        MainTermCase::EulerPlus => {
            // exp{X + pi/12 (A - B)}
            let lm = Float::with_val(prec, &s.x_big + Float::with_val(prec, &pi_a - &pi_b) / 12u32);
            (lm, Float::new(prec), None)
        }
        MainTermCase::EulerMinus => {
            // 2 exp(X) cos(pi A u) / ((-1)^n exp{pi/12 (2A + B)})
            let lm = Float::with_val(prec, &ln2 + &s.x_big)
                - Float::with_val(prec, Float::with_val(prec, &pi_a * 2u32) + &pi_b) / 12u32;
            (lm, sign_phase(odd), Some(cos_pau))
        }
        MainTermCase::GammaFalling => {
            // 2 (-1)^n exp(X) cos(pi A u)
            //   / (sqrt A exp(pi A/12 + pi B/6) (1-q)^{n + A u + 1/2})
            let expo = Float::with_val(prec, &s.au_n + f(0.5));
            let lm = Float::with_val(prec, &ln2 + &s.x_big)
                - Float::with_val(prec, &ln_a / 2u32)
                - Float::with_val(prec, &pi_a / 12u32)
                - Float::with_val(prec, &pi_b / 6u32)
                - Float::with_val(prec, &expo * qp.one_minus_q().ln());
            (lm, sign_phase(odd), Some(cos_pau))
        }
        MainTermCase::GammaRising => {
            // exp(pi A/12 - pi B/12) / (sqrt A (1-q)^{1/2 - n - A u})
            let expo = Float::with_val(prec, f(0.5) - &s.au_n);
            let lm = Float::with_val(prec, Float::with_val(prec, &pi_a - &pi_b) / 12u32)
                - Float::with_val(prec, &ln_a / 2u32)
                - Float::with_val(prec, &expo * qp.one_minus_q().ln());
            (lm, Float::new(prec), None)
        }
        MainTermCase::RamanujanMinus => {
            // exp(X) / (sqrt 2 exp{pi B/24 - pi A/6})
            let lm = Float::with_val(prec, &s.x_big)
                - Float::with_val(prec, &ln2 / 2u32)
                - Float::with_val(prec, &pi_b / 24u32)
                + Float::with_val(prec, &pi_a / 6u32);
            (lm, Float::new(prec), None)
        }
        MainTermCase::RamanujanPlus => {
            // sqrt 2 exp(X) cos(pi A u) / ((-1)^n exp pi{A/12 + B/24})
            let lm = Float::with_val(prec, &s.x_big)
                + Float::with_val(prec, &ln2 / 2u32)
                - Float::with_val(prec, &pi_a / 12u32)
                - Float::with_val(prec, &pi_b / 24u32);
            (lm, sign_phase(odd), Some(cos_pau))
        }
        MainTermCase::BesselImaginary | MainTermCase::BesselReal => {
            let nu = require_param(r.nu, "nu")?;
            let nu_f = f(nu);
            let shifted = Float::with_val(prec, &s.au_n + Float::with_val(prec, &nu_f / 2u32));
            let x_nu = Float::with_val(prec, &pi_b * Float::with_val(prec, shifted.square_ref()));
            let nu2 = Float::with_val(prec, nu_f.square_ref());
            let pbn2_4 = Float::with_val(prec, &pi_b * &nu2) / 4u32;
            if case == MainTermCase::BesselImaginary {
                // i^nu exp{X'} / (2 sqrt A exp pi{B/12 - A/3 - B nu^2/4})
                let lm = Float::with_val(prec, &x_nu - &ln2)
                    - Float::with_val(prec, &ln_a / 2u32)
                    - Float::with_val(prec, &pi_b / 12u32)
                    + Float::with_val(prec, &pi_a / 3u32)
                    + &pbn2_4;
                let ph = Float::with_val(prec, &s.pi * &nu_f) / 2u32;
                (lm, ph, None)
            } else {
                // exp{X'} cos(pi A u) / ((-1)^n sqrt A exp pi{B/12 - A/12 - nu^2 B/4})
                let lm = Float::with_val(prec, &x_nu)
                    - Float::with_val(prec, &ln_a / 2u32)
                    - Float::with_val(prec, &pi_b / 12u32)
                    + Float::with_val(prec, &pi_a / 12u32)
                    + &pbn2_4;
                (lm, sign_phase(odd), Some(cos_pau))
            }
        }
        MainTermCase::SwMinus | MainTermCase::LaguerreMinus => {
            // exp{X/2} / (sqrt(2A) exp{pi B/6 - pi A/6})
            let lm = Float::with_val(prec, &s.x_big / 2u32)
                - Float::with_val(prec, Float::with_val(prec, &ln2 + &ln_a) / 2u32)
                - Float::with_val(prec, &pi_b / 6u32)
                + Float::with_val(prec, &pi_a / 6u32);
            (lm, Float::new(prec), None)
        }
        MainTermCase::SwPlus => {
            // sqrt(2/A) exp{X/2} cos(pi/2 (A u + n)) / exp{pi B/6 - pi A/24}
            let lm = Float::with_val(prec, &s.x_big / 2u32)
                + Float::with_val(prec, Float::with_val(prec, &ln2 - &ln_a) / 2u32)
                - Float::with_val(prec, &pi_b / 6u32)
                + Float::with_val(prec, &pi_a / 24u32);
            (lm, Float::new(prec), Some(cos_half.clone()))
        }
        MainTermCase::SwOrthonormal => {
            // exp(-u pi/2) cos(pi/2 (A u + n)) / (sqrt pi exp(3 pi n^{1-a}/2 + pi B/4))
            let n1a = Float::with_val(prec, &s.n_f * &s.b);
            let lm = -(Float::with_val(prec, &s.u_f * &s.pi) / 2u32)
                - Float::with_val(prec, s.pi.ln_ref()) / 2u32
                - Float::with_val(prec, Float::with_val(prec, &s.pi * &n1a) * 3u32) / 2u32
                - Float::with_val(prec, &pi_b / 4u32);
            (lm, Float::new(prec), Some(cos_half.clone()))
        }
        MainTermCase::LaguerrePlus => {
            // sqrt(2/A) exp{X/2} cos(pi/2 (A u + n)) / exp{pi B/6 - pi A/24}
            let lm = Float::with_val(prec, &s.x_big / 2u32)
                + Float::with_val(prec, Float::with_val(prec, &ln2 - &ln_a) / 2u32)
                - Float::with_val(prec, &pi_b / 6u32)
                + Float::with_val(prec, &pi_a / 24u32);
            (lm, Float::new(prec), Some(cos_half.clone()))
        }
        MainTermCase::LaguerreOrthonormal => {
            // exp(-pi u/2) cos(pi/2 (A u + n)) / (sqrt pi
            //   exp{pi/2 (3 n^{1-a} + 2 alpha B + B/2)}); at alpha = 0 this
            //   degenerates to the orthonormal Stieltjes-Wigert main term
            let alpha = require_param(r.alpha, "alpha")?;
            let al = f(alpha);
            let n1a = Float::with_val(prec, &s.n_f * &s.b);
            let inner = Float::with_val(prec, &n1a * 3u32)
                + Float::with_val(prec, Float::with_val(prec, &al * &s.b) * 2u32)
                + Float::with_val(prec, &s.b / 2u32);
            let lm = -(Float::with_val(prec, &s.u_f * &s.pi) / 2u32)
                - Float::with_val(prec, s.pi.ln_ref()) / 2u32
                - Float::with_val(prec, Float::with_val(prec, &s.pi * &inner) / 2u32);
            (lm, Float::new(prec), Some(cos_half.clone()))
        }
    };

    let prefactor = LogComplex::new(log_mag, phase);
    let (value, osc_out) = match osc {
        Some(c) => (prefactor.mul(&LogComplex::from_real(&c)), c),
        None => (prefactor.clone(), Float::with_val(prec, 1)),
    };
    Ok(MainTerm {
        value,
        prefactor,
        oscillatory_factor: osc_out,
    })
}

/// Directly evaluates the left side of a scaled case at a regime point.
pub fn direct_value(
    case: MainTermCase,
    r: &ScaledRegime,
    ctx: &PrecisionContext,
) -> Result<LogComplex> {
    let prec = ctx.working_prec();
    let s = scales(r, ctx);
    let qp = r.qpoint(ctx)?;
    let two_pi = Float::with_val(prec, &s.pi * 2u32);
    // 2 pi (u + n^{1-a}) = 2 pi B (A u + n)
    let base = Float::with_val(prec, &two_pi * &s.b) * &s.au_n;
    match case {
        MainTermCase::EulerPlus | MainTermCase::EulerMinus => {
            // exp{2 pi (u + n^{1-a} - B/2)}
            let e = Float::with_val(prec, &base - Float::with_val(prec, &s.pi * &s.b)).exp();
            let z = if case == MainTermCase::EulerMinus {
                Complex::with_val(prec, (-e, Float::new(prec)))
            } else {
                Complex::with_val(prec, (e, Float::new(prec)))
            };
            euler_eq(&z, &qp, ctx)
        }
        MainTermCase::GammaFalling => {
            let x = Float::with_val(prec, ctx.float(0.5) - &s.au_n);
            q_gamma(&x, &qp, ctx)?.recip()
        }
        MainTermCase::GammaRising => {
            let x = Float::with_val(prec, ctx.float(0.5) + &s.au_n);
            q_gamma(&x, &qp, ctx)?.recip()
        }
        MainTermCase::RamanujanMinus | MainTermCase::RamanujanPlus => {
            let e = Float::with_val(prec, base.exp_ref());
            let z = if case == MainTermCase::RamanujanMinus {
                Complex::with_val(prec, (-e, Float::new(prec)))
            } else {
                Complex::with_val(prec, (e, Float::new(prec)))
            };
            ramanujan_aq(&z, &qp, ctx)
        }
        MainTermCase::BesselImaginary | MainTermCase::BesselReal => {
            let nu = require_param(r.nu, "nu")?;
            // 2 exp{pi (u + n^{1-a} + nu B/2)}
            let nu_shift = Float::with_val(prec, ctx.float(nu) * &s.b) / 2u32;
            let e = (Float::with_val(prec, &base / 2u32)
                + Float::with_val(prec, &s.pi * &nu_shift))
            .exp()
                * 2u32;
            let z = if case == MainTermCase::BesselImaginary {
                Complex::with_val(prec, (&Float::new(prec), &e))
            } else {
                Complex::with_val(prec, (&e, &Float::new(prec)))
            };
            jackson_j2(&z, nu, &qp, ctx)
        }
        MainTermCase::SwMinus | MainTermCase::SwPlus => {
            let e = Float::with_val(prec, base.exp_ref());
            let z = if case == MainTermCase::SwMinus {
                Complex::with_val(prec, (-e, Float::new(prec)))
            } else {
                Complex::with_val(prec, (e, Float::new(prec)))
            };
            stieltjes_wigert(&z, r.n, &qp, ctx)
        }
        MainTermCase::SwOrthonormal => {
            let e = Float::with_val(prec, base.exp_ref());
            orthonormal_sw(&e, r.n, &qp, ctx)
        }
        MainTermCase::LaguerreMinus | MainTermCase::LaguerrePlus => {
            let alpha = require_param(r.alpha, "alpha")?;
            // exp{2 pi (u + n^{1-a} + alpha B)}
            let e = (Float::with_val(prec, &base)
                + Float::with_val(prec, Float::with_val(prec, ctx.float(alpha) * &s.b) * &two_pi))
            .exp();
            let z = if case == MainTermCase::LaguerreMinus {
                Complex::with_val(prec, (-e, Float::new(prec)))
            } else {
                Complex::with_val(prec, (e, Float::new(prec)))
            };
            let spec = PolynomialSpec::laguerre(r.n, alpha)?;
            q_laguerre(&z, &spec, &qp, ctx)
        }
        MainTermCase::LaguerreOrthonormal => {
            let alpha = require_param(r.alpha, "alpha")?;
            let e = (Float::with_val(prec, &base)
                + Float::with_val(prec, Float::with_val(prec, ctx.float(alpha) * &s.b) * &two_pi))
            .exp();
            let spec = PolynomialSpec::laguerre(r.n, alpha)?;
            orthonormal_qlaguerre(&e, &spec, &qp, ctx)
        }
    }
}

/// A direct-versus-main-term comparison at one regime point.
#[derive(Debug, Clone)]
pub struct AsymptoticComparison {
    pub direct: LogComplex,
    pub main_term: LogComplex,
    /// Relative deviation; switches to an absolute comparison scaled by
    /// the non-oscillatory prefactor when `|oscillatory_factor| <= 0.1`.
    pub rel_dev: Float,
    /// The stated decay rate `c pi n^a` of the error term.
    pub stated_rate: Float,
    pub oscillatory_factor: Float,
}

/// Evaluates one scaled case directly and against its main term.
pub fn compare_asymptotic(
    case: MainTermCase,
    r: &ScaledRegime,
    ctx: &PrecisionContext,
) -> Result<AsymptoticComparison> {
    let prec = ctx.working_prec();
    let direct = direct_value(case, r, ctx)?;
    let mt = main_term(case, r, ctx)?;
    let osc_small = Float::with_val(prec, mt.oscillatory_factor.abs_ref()) <= 0.1;
    let rel_dev = if osc_small {
        // near a cosine zero the relative form is ill-posed; measure
        // |direct/prefactor - cos| instead
        let ratio = direct.div(&mt.prefactor)?.to_complex();
        let diff = Complex::with_val(prec, ratio - &mt.oscillatory_factor);
        Float::with_val(prec, diff.abs_ref())
    } else {
        direct.rel_dev(&mt.value)?
    };
    let s = scales(r, ctx);
    let stated_rate =
        Float::with_val(prec, &s.pi * &s.a_cap) * ctx.float(case.rate_coefficient());
    Ok(AsymptoticComparison {
        direct,
        main_term: mt.value,
        rel_dev,
        stated_rate,
        oscillatory_factor: mt.oscillatory_factor,
    })
}

/// Least-squares fit of `ln rel_dev` against `n^a` across a degree list.
#[derive(Debug, Clone)]
pub struct RateFit {
    /// Fitted slope; the stated rates predict `-c pi`.
    pub slope: Float,
    pub intercept: Float,
    /// The fitted points `(n^a, ln rel_dev)`.
    pub points: Vec<(Float, Float)>,
}

pub fn rate_fit(
    case: MainTermCase,
    a_exp: f64,
    u: f64,
    ns: &[u64],
    nu: Option<f64>,
    alpha: Option<f64>,
    ctx: &PrecisionContext,
) -> Result<RateFit> {
    if ns.len() < 2 {
        return Err(Error::Config("rate fit needs at least two degrees".into()));
    }
    let prec = ctx.working_prec();
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut r = ScaledRegime::new(n, a_exp, u, case.nome_rule())?;
        if case.needs_nu() {
            r = r.with_nu(require_param(nu, "nu")?)?;
        }
        if case.needs_alpha() {
            r = r.with_alpha(require_param(alpha, "alpha")?)?;
        }
        let cmp = compare_asymptotic(case, &r, ctx)?;
        if cmp.rel_dev.is_zero() {
            return Err(Error::Domain(format!(
                "rel_dev is exactly zero at n = {n}; cannot take its logarithm"
            )));
        }
        let x = scales(&r, ctx).a_cap;
        let y = Float::with_val(prec, cmp.rel_dev.ln_ref());
        points.push((x, y));
    }
    // ordinary least squares
    let m = Float::with_val(prec, points.len() as u32);
    let sx = points
        .iter()
        .fold(Float::new(prec), |acc, (x, _)| acc + x);
    let sy = points
        .iter()
        .fold(Float::new(prec), |acc, (_, y)| acc + y);
    let sxx = points.iter().fold(Float::new(prec), |acc, (x, _)| {
        acc + Float::with_val(prec, x.square_ref())
    });
    let sxy = points.iter().fold(Float::new(prec), |acc, (x, y)| {
        acc + Float::with_val(prec, x * y)
    });
    let det = Float::with_val(prec, &m * &sxx) - Float::with_val(prec, sx.square_ref());
    if det.is_zero() {
        return Err(Error::Domain("degenerate rate-fit abscissas".into()));
    }
    let slope = (Float::with_val(prec, &m * &sxy) - Float::with_val(prec, &sx * &sy)) / &det;
    let intercept = (Float::with_val(prec, &sxx * &sy) - Float::with_val(prec, &sx * &sxy)) / &det;
    Ok(RateFit {
        slope,
        intercept,
        points,
    })
}
