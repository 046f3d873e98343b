//! Log-scaled complex values.
//!
//! A [`LogComplex`] stores a complex number as `(log_mag, phase)` with
//! `log_mag = ln |z|` (negative infinity encodes zero) and
//! `phase = arg z` kept in `(-pi, pi]`. Values such as
//! `exp(pi n^{-a} (n^a u + n)^2)` live here so that the comparator behind
//! every `1 + O(.)` check can divide them without overflow.

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use rug::{Complex, Float};

#[derive(Debug, Clone, PartialEq)]
pub struct LogComplex {
    log_mag: Float,
    phase: Float,
}

impl LogComplex {
    /// Wraps `phase` into `(-pi, pi]`.
    fn wrap_phase(mut phase: Float) -> Float {
        let prec = phase.prec();
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let two_pi = Float::with_val(prec, &pi * 2u32);
        if phase > pi || phase <= -pi.clone() {
            let turns = Float::with_val(prec, &phase / &two_pi).round();
            phase -= turns * &two_pi;
            // rounding can leave the result just outside the half-open interval
            if phase > pi {
                phase -= &two_pi;
            } else if phase <= -pi.clone() {
                phase += &two_pi;
            }
        }
        phase
    }

    pub fn new(log_mag: Float, phase: Float) -> Self {
        if log_mag.is_infinite() && log_mag.is_sign_negative() {
            let prec = phase.prec();
            return Self::zero_with_prec(prec.max(log_mag.prec()));
        }
        Self {
            log_mag,
            phase: Self::wrap_phase(phase),
        }
    }

    fn zero_with_prec(prec: u32) -> Self {
        let mut log_mag = Float::new(prec);
        log_mag.assign(rug::float::Special::NegInfinity);
        Self {
            log_mag,
            phase: Float::new(prec),
        }
    }

    /// The zero value: `log_mag = -inf`, `phase = 0`.
    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::zero_with_prec(ctx.working_prec())
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self {
            log_mag: ctx.float(0),
            phase: ctx.float(0),
        }
    }

    pub fn from_complex(z: &Complex) -> Self {
        let prec = z.real().prec().max(z.imag().prec());
        if z.real().is_zero() && z.imag().is_zero() {
            return Self::zero_with_prec(prec);
        }
        let abs = Float::with_val(prec, z.abs_ref());
        let phase = Float::with_val(prec, z.arg_ref());
        Self {
            log_mag: abs.ln(),
            phase: Self::wrap_phase(phase),
        }
    }

    pub fn from_real(x: &Float) -> Self {
        let prec = x.prec();
        if x.is_zero() {
            return Self::zero_with_prec(prec);
        }
        let log_mag = Float::with_val(prec, x.abs_ref()).ln();
        let phase = if x.is_sign_negative() {
            Float::with_val(prec, rug::float::Constant::Pi)
        } else {
            Float::new(prec)
        };
        Self { log_mag, phase }
    }

    pub fn log_mag(&self) -> &Float {
        &self.log_mag
    }

    pub fn phase(&self) -> &Float {
        &self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag.is_infinite() && self.log_mag.is_sign_negative()
    }

    /// Round-trip to an ordinary complex value. Exact to working precision
    /// whenever `|log_mag|` is within the exponent range (about `2^62`).
    pub fn to_complex(&self) -> Complex {
        let prec = self.log_mag.prec();
        if self.is_zero() {
            return Complex::new(prec);
        }
        let mag = Float::with_val(prec, self.log_mag.exp_ref());
        let (sin, cos) = Float::with_val(prec, &self.phase).sin_cos(Float::new(prec));
        Complex::with_val(prec, (&cos * &mag, &sin * &mag))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero_with_prec(self.log_mag.prec());
        }
        let prec = self.log_mag.prec().max(rhs.log_mag.prec());
        Self::new(
            Float::with_val(prec, &self.log_mag + &rhs.log_mag),
            Float::with_val(prec, &self.phase + &rhs.phase),
        )
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero LogComplex".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero_with_prec(self.log_mag.prec()));
        }
        let prec = self.log_mag.prec().max(rhs.log_mag.prec());
        Ok(Self::new(
            Float::with_val(prec, &self.log_mag - &rhs.log_mag),
            Float::with_val(prec, &self.phase - &rhs.phase),
        ))
    }

    /// Principal square root: halves `log_mag` and `phase`.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.log_mag.prec();
        Self {
            log_mag: Float::with_val(prec, &self.log_mag / 2u32),
            phase: Float::with_val(prec, &self.phase / 2u32),
        }
    }

    /// Integer power; the phase is wrapped once at the end.
    pub fn pow_i64(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.log_mag.prec();
        Self::new(
            Float::with_val(prec, &self.log_mag * k),
            Float::with_val(prec, &self.phase * k),
        )
    }

    pub fn recip(&self) -> Result<Self> {
        let prec = self.log_mag.prec();
        LogComplex::new(Float::with_val(prec, 0), Float::new(prec)).div(self)
    }

    /// `|self / rhs - 1|`, evaluated after exact cancellation of the shared
    /// log-magnitude so that astronomically large operands compare cleanly.
    pub fn rel_dev(&self, rhs: &Self) -> Result<Float> {
        if rhs.is_zero() {
            return Err(Error::Domain("rel_dev against zero".into()));
        }
        let prec = self.log_mag.prec().max(rhs.log_mag.prec());
        if self.is_zero() {
            return Ok(Float::with_val(prec, 1));
        }
        let ratio = self.div(rhs)?;
        let mut w = ratio.to_complex();
        w -= 1u32;
        Ok(Float::with_val(prec, w.abs_ref()))
    }
}

use rug::Assign;
