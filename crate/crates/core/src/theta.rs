//! Dedekind eta and Jacobi theta functions.
//!
//! Each theta function has two independent evaluation paths (defining
//! series and triple product) plus the modular transformations that swap a
//! slow nome for a fast one. The adaptive entry points switch to the
//! transformed path when `Im tau` is small, since the defining series needs
//! roughly `sqrt(precision / Im tau)` terms.

use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::precision::PrecisionContext;
use crate::qseries::poch_inf_complex;
use rug::ops::Pow;
use rug::{Complex, Float};

/// Argument data in the `v | tau` convention: `z = e^{2 pi i v}`,
/// `q = e^{pi i tau}`, `Im tau > 0`.
#[derive(Debug, Clone)]
pub struct ModularPoint {
    v: Complex,
    tau: Complex,
}

impl ModularPoint {
    pub fn new(v: Complex, tau: Complex) -> Result<Self> {
        if !(*tau.imag() > 0u32) {
            return Err(Error::Domain(format!(
                "Im(tau) = {} is not positive",
                tau.imag()
            )));
        }
        Ok(Self { v, tau })
    }

    /// Thin adapter for the `(z; q)` calling convention: solves
    /// `z = e^{2 pi i v}` with `Re v` in the fundamental strip
    /// `(-1/2, 1/2]` (principal logarithm).
    pub fn from_z_nome(z: &Complex, nome: &Complex, ctx: &PrecisionContext) -> Result<Self> {
        let prec = ctx.working_prec();
        if z.real().is_zero() && z.imag().is_zero() {
            return Err(Error::Domain("z = 0 has no logarithm".into()));
        }
        let abs_nome = Float::with_val(prec, nome.abs_ref());
        if !(abs_nome < 1u32) && !abs_nome.is_zero() {
            return Err(Error::Domain(format!("|q| = {abs_nome} is not below 1")));
        }
        let two_pi_i = Complex::with_val(prec, (0, 1)) * ctx.pi() * 2u32;
        let v = Complex::with_val(prec, z.ln_ref()) / &two_pi_i;
        // q = e^{pi i tau}: tau = -i ln q / pi
        let tau = Complex::with_val(prec, nome.ln_ref())
            / (Complex::with_val(prec, (0, 1)) * ctx.pi());
        Self::new(Complex::with_val(prec, v), Complex::with_val(prec, tau))
    }

    pub fn v(&self) -> &Complex {
        &self.v
    }

    pub fn tau(&self) -> &Complex {
        &self.tau
    }
}

/// One of the four Jacobi theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub fn index(self) -> u8 {
        match self {
            ThetaKind::One => 1,
            ThetaKind::Two => 2,
            ThetaKind::Three => 3,
            ThetaKind::Four => 4,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        Ok(match i {
            1 => ThetaKind::One,
            2 => ThetaKind::Two,
            3 => ThetaKind::Three,
            4 => ThetaKind::Four,
            _ => return Err(Error::Config(format!("theta kind {i} not in 1..=4"))),
        })
    }
}

fn cis(prec: u32) -> Complex {
    Complex::with_val(prec, (0, 1))
}

/// Defining series, no transformation applied. Converges for any
/// `Im tau > 0` thanks to the Gaussian `q^{k^2}` decay, just slowly for
/// small `Im tau`.
pub fn theta_series(kind: ThetaKind, p: &ModularPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    let pi = ctx.pi();
    let i = cis(prec);
    let eps = ctx.eps();
    let i_pi_tau = Complex::with_val(prec, &i * p.tau()) * &pi;
    let two_pi_i_v = Complex::with_val(prec, &i * p.v()) * &pi * 2u32;
    let im_tau = Float::with_val(prec, p.tau().imag());
    let abs_im_v = Float::with_val(prec, p.v().imag().abs_ref());
    // magnitude of the k-th term is at most e^{-pi Im(tau) k^2 + 2 pi k |Im v| + pi |Im v|}
    let peak = Float::with_val(prec, &abs_im_v / &im_tau).to_f64().ceil() as usize + 1;

    let mut sum = Complex::new(prec);
    let mut max_abs = Float::with_val(prec, 0);
    let half = Float::with_val(prec, 0.5);
    for k in 0..ctx.max_terms() {
        let kf = Float::with_val(prec, k as u64);
        let term = match kind {
            ThetaKind::Three | ThetaKind::Four => {
                if k == 0 {
                    Complex::with_val(prec, (1, 0))
                } else {
                    let gauss = Complex::with_val(prec, &i_pi_tau * Float::with_val(prec, (k as u64) * (k as u64)));
                    let osc = Complex::with_val(prec, &two_pi_i_v * &kf);
                    let t = Complex::with_val(prec, &gauss + &osc).exp()
                        + Complex::with_val(prec, &gauss - &osc).exp();
                    if kind == ThetaKind::Four && k % 2 == 1 {
                        -t
                    } else {
                        Complex::with_val(prec, t)
                    }
                }
            }
            ThetaKind::One | ThetaKind::Two => {
                let kh = Float::with_val(prec, &kf + &half);
                let gauss = Complex::with_val(prec, &i_pi_tau * Float::with_val(prec, kh.square_ref()));
                let osc = Complex::with_val(prec, &two_pi_i_v * &kh);
                let plus = Complex::with_val(prec, &gauss + &osc).exp();
                let minus = Complex::with_val(prec, &gauss - &osc).exp();
                match kind {
                    ThetaKind::Two => plus + minus,
                    // theta_1: -i (-1)^k (e^{+} - e^{-}) summed over k >= 0
                    ThetaKind::One => {
                        let diff = Complex::with_val(prec, plus - minus);
                        let signed = if k % 2 == 1 { -diff } else { diff };
                        Complex::with_val(prec, signed * Complex::with_val(prec, (0, -1)))
                    }
                    _ => unreachable!(),
                }
            }
        };
        sum += &term;
        let abs_t = Float::with_val(prec, term.abs_ref());
        if abs_t > max_abs {
            max_abs = abs_t.clone();
        }
        if k >= peak {
            // certified envelope for everything past k
            let kf1 = Float::with_val(prec, (k + 1) as u64);
            let exponent = Float::with_val(
                prec,
                -(Float::with_val(prec, &im_tau * Float::with_val(prec, kf1.square_ref())))
                    + Float::with_val(prec, &abs_im_v * &kf1) * 2u32
                    + &abs_im_v,
            ) * &pi;
            let envelope = exponent.exp() * 4u32;
            let scale = Float::with_val(prec, &max_abs + 1u32);
            if envelope <= Float::with_val(prec, &eps * &scale) {
                return Ok(sum);
            }
        }
    }
    Err(Error::Resource(
        "theta series did not converge within max_terms".into(),
    ))
}

/// `sqrt(tau / i)` on the principal branch; positive real for `tau` on the
/// positive imaginary axis.
fn sqrt_tau_over_i(tau: &Complex, prec: u32) -> Complex {
    let ratio = Complex::with_val(prec, tau * cis(prec).recip());
    ratio.sqrt()
}

/// Transformation data for evaluating kind `k` at `(V, T)` through the
/// point `(v, tau) = (-V/T, -1/T)`: returns the mapped kind and the full
/// prefactor including the extra `-i` for kind 1.
fn transform_data(
    kind: ThetaKind,
    v_outer: &Complex,
    tau_outer: &Complex,
    ctx: &PrecisionContext,
) -> (ThetaKind, ModularPoint, Complex) {
    let prec = ctx.working_prec();
    let tau_inner = Complex::with_val(prec, tau_outer.recip_ref()).neg();
    let v_inner = Complex::with_val(prec, v_outer / tau_outer).neg();
    let pi = ctx.pi();
    // e^{pi i v^2 / tau} with the inner variables
    let expo = Complex::with_val(prec, v_inner.square_ref());
    let expo = Complex::with_val(prec, &expo / &tau_inner);
    let mut pref = Complex::with_val(prec, cis(prec) * &expo * &pi).exp();
    pref *= sqrt_tau_over_i(&tau_inner, prec);
    let mapped = match kind {
        ThetaKind::One => {
            pref *= Complex::with_val(prec, (0, -1));
            ThetaKind::One
        }
        ThetaKind::Two => ThetaKind::Four,
        ThetaKind::Three => ThetaKind::Three,
        ThetaKind::Four => ThetaKind::Two,
    };
    let inner = ModularPoint {
        v: v_inner,
        tau: tau_inner,
    };
    (mapped, inner, pref)
}

use std::ops::Neg;

/// Jacobi theta function, switching to the modular transformation when
/// `Im tau < 1/2`.
pub fn theta(kind: ThetaKind, p: &ModularPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    let im = Float::with_val(prec, p.tau().imag());
    if im < 0.5 {
        let (mapped, inner, pref) = transform_data(kind, p.v(), p.tau(), ctx);
        // only worthwhile when the flip actually raises Im tau
        if *inner.tau().imag() > im {
            let inner_val = theta_series(mapped, &inner, ctx)?;
            return Ok(Complex::with_val(prec, pref * inner_val));
        }
    }
    theta_series(kind, p, ctx)
}

/// Triple-product evaluation (products in the nome squared).
pub fn theta_triple_product(
    kind: ThetaKind,
    p: &ModularPoint,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let prec = ctx.working_prec();
    let pi = ctx.pi();
    let i = cis(prec);
    // q = e^{pi i tau}
    let q = (Complex::with_val(prec, &i * p.tau()) * &pi).exp();
    let q2 = Complex::with_val(prec, q.square_ref());
    let z_plus = (Complex::with_val(prec, &i * p.v()) * &pi * 2u32).exp();
    let z_minus = Complex::with_val(prec, z_plus.recip_ref());
    let qq = poch_inf_complex(&q2, &q2, ctx)?;
    let pi_v = Complex::with_val(prec, p.v() * &pi);
    let value = match kind {
        ThetaKind::One => {
            let a = Complex::with_val(prec, &q2 * &z_plus);
            let b = Complex::with_val(prec, &q2 * &z_minus);
            let q_quarter = Complex::with_val(prec, q.sqrt_ref()).sqrt();
            Complex::with_val(prec, pi_v.sin_ref())
                * q_quarter
                * 2u32
                * qq
                * poch_inf_complex(&a, &q2, ctx)?
                * poch_inf_complex(&b, &q2, ctx)?
        }
        ThetaKind::Two => {
            let a = Complex::with_val(prec, &q2 * &z_plus).neg();
            let b = Complex::with_val(prec, &q2 * &z_minus).neg();
            let q_quarter = Complex::with_val(prec, q.sqrt_ref()).sqrt();
            Complex::with_val(prec, pi_v.cos_ref())
                * q_quarter
                * 2u32
                * qq
                * poch_inf_complex(&a, &q2, ctx)?
                * poch_inf_complex(&b, &q2, ctx)?
        }
        ThetaKind::Three => {
            let a = Complex::with_val(prec, &q * &z_plus).neg();
            let b = Complex::with_val(prec, &q * &z_minus).neg();
            qq * poch_inf_complex(&a, &q2, ctx)? * poch_inf_complex(&b, &q2, ctx)?
        }
        ThetaKind::Four => {
            let a = Complex::with_val(prec, &q * &z_plus);
            let b = Complex::with_val(prec, &q * &z_minus);
            qq * poch_inf_complex(&a, &q2, ctx)? * poch_inf_complex(&b, &q2, ctx)?
        }
    };
    Ok(Complex::with_val(prec, value))
}

/// `theta_kind(v / tau | -1/tau)` computed from the right-hand sides of the
/// modular transformations (prefactor `sqrt(tau/i) e^{pi i v^2 / tau}` and
/// the kind swap `2 <-> 4`).
pub fn theta_modular(kind: ThetaKind, p: &ModularPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    let pi = ctx.pi();
    let expo = Complex::with_val(prec, p.v().square_ref());
    let expo = Complex::with_val(prec, &expo / p.tau());
    let mut pref = Complex::with_val(prec, cis(prec) * &expo * &pi).exp();
    pref *= sqrt_tau_over_i(p.tau(), prec);
    let (mapped, extra_i) = match kind {
        ThetaKind::One => (ThetaKind::One, true),
        ThetaKind::Two => (ThetaKind::Four, false),
        ThetaKind::Three => (ThetaKind::Three, false),
        ThetaKind::Four => (ThetaKind::Two, false),
    };
    if extra_i {
        pref *= Complex::with_val(prec, (0, -1));
    }
    let inner = theta(mapped, p, ctx)?;
    Ok(Complex::with_val(prec, pref * inner))
}

/// Dedekind eta by the defining product, no transformation.
pub fn dedekind_eta_product(tau: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    if !(*tau.imag() > 0u32) {
        return Err(Error::Domain(format!(
            "Im(tau) = {} is not positive",
            tau.imag()
        )));
    }
    let pi = ctx.pi();
    let i = cis(prec);
    let w = (Complex::with_val(prec, &i * tau) * &pi * 2u32).exp();
    let head = (Complex::with_val(prec, &i * tau) * &pi / 12u32).exp();
    let prod = poch_inf_complex(&w, &w, ctx)?;
    Ok(Complex::with_val(prec, head * prod))
}

/// Dedekind eta; below `Im tau = 1` the identity
/// `eta(-1/tau) = sqrt(tau/i) eta(tau)` is applied first so the product
/// runs at the larger imaginary part.
pub fn dedekind_eta(tau: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.working_prec();
    if !(*tau.imag() > 0u32) {
        return Err(Error::Domain(format!(
            "Im(tau) = {} is not positive",
            tau.imag()
        )));
    }
    let im = Float::with_val(prec, tau.imag());
    if im < 1u32 {
        let flipped = Complex::with_val(prec, tau.recip_ref()).neg();
        if *flipped.imag() > im {
            // eta(tau) = sqrt(flipped / i) * eta(flipped)  with flipped = -1/tau
            let pref = sqrt_tau_over_i(&flipped, prec);
            let inner = dedekind_eta_product(&flipped, ctx)?;
            return Ok(Complex::with_val(prec, pref * inner));
        }
    }
    dedekind_eta_product(tau, ctx)
}

/// Scaled `(q;q)_inf` report at `q = e^{-2 pi / (gamma n^a)}`: direct value,
/// the `sqrt(gamma n^a) exp{(pi/12)((gamma n^a)^{-1} - gamma n^a)}` main
/// term, the measured deviation and the `e^{-2 pi gamma n^a}` envelope.
#[derive(Debug, Clone)]
pub struct EtaAsymptoticReport {
    pub gamma: f64,
    pub a_exp: f64,
    pub n: u64,
    pub direct: LogComplex,
    pub main_term: LogComplex,
    pub rel_dev: Float,
    pub envelope: Float,
}

pub fn qq_infinity_scaled(
    gamma: f64,
    a_exp: f64,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<EtaAsymptoticReport> {
    if !(a_exp > 0.0 && a_exp < 1.0) {
        return Err(Error::Domain(format!("a = {a_exp} is not in (0, 1)")));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma = {gamma} is not positive")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let prec = ctx.working_prec();
    let pi = ctx.pi();
    let gna = ctx.float(gamma) * ctx.float(n).pow(ctx.float(a_exp));
    let t = Float::with_val(prec, gna.recip_ref()); // q = e^{-2 pi t}
    // (q;q)_inf = eta(i t) e^{pi t / 12}; the eta evaluation flips to i/t
    let tau = Complex::with_val(prec, (Float::new(prec), t.clone()));
    let eta = dedekind_eta(&tau, ctx)?;
    let head = (Float::with_val(prec, &pi * &t) / 12u32).exp();
    let direct = LogComplex::from_complex(&Complex::with_val(prec, eta * head));

    let main_mag = Float::with_val(
        prec,
        (Float::with_val(prec, t.clone()) - &gna) * &pi / 12u32,
    )
    .exp()
        * Float::with_val(prec, gna.sqrt_ref());
    let main_term = LogComplex::from_real(&main_mag);
    let rel_dev = direct.rel_dev(&main_term)?;
    let envelope = (-(Float::with_val(prec, &pi * &gna) * 2u32)).exp();
    Ok(EtaAsymptoticReport {
        gamma,
        a_exp,
        n,
        direct,
        main_term,
        rel_dev,
        envelope,
    })
}
