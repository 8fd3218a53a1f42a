//! Exact scalar arithmetic.
//!
//! Every quantity in this crate is either a *log-scale* extended rational
//! ([`ExtReal`], the value of a logarithm, closed under negation) or a
//! *multiplicative* nonnegative extended quantity implementing [`Value`].
//! Two backings of [`Value`] exist: [`MulRat`] stores the quantity itself as
//! an exact rational (distances, cross-ratios of rational semi-metrics) and
//! [`LogRat`] stores its exact rational logarithm (quantities of the form
//! `e^q` arising from Gromov products, which are irrational as rationals).
//! The two backings are distinct types on purpose: a comparison across
//! backings has no exact answer, so the type system forbids it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Error produced when decoding a scalar from its string form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {kind} literal: {text:?}")]
pub struct ValueParseError {
    pub kind: &'static str,
    pub text: String,
}

/// Parses `"p"` or `"p/q"` (optionally signed, whitespace-tolerant) into
/// an exact rational; `kind` names the expected scalar in error messages.
pub fn parse_rational(kind: &'static str, s: &str) -> Result<BigRational, ValueParseError> {
    let err = || ValueParseError {
        kind,
        text: s.to_string(),
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num = BigInt::from_str(s.trim()).map_err(|_| err())?;
            Ok(BigRational::from_integer(num))
        }
    }
}

/// An extended real number on the logarithmic scale: a rational, `+inf` or
/// `-inf`.  Sums of opposite infinities are undefined and surface as `None`
/// from [`ExtReal::checked_add`]; callers must branch on that flag rather
/// than treat it as an error.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtReal {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExtReal::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `num/den`; panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExtReal::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtReal::Finite(q) => Some(q),
            _ => None,
        }
    }

    /// `self + rhs`, with `None` exactly when the summands are opposite
    /// infinities.
    pub fn checked_add(&self, rhs: &ExtReal) -> Option<ExtReal> {
        use ExtReal::*;
        match (self, rhs) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
        }
    }

    pub fn checked_sub(&self, rhs: &ExtReal) -> Option<ExtReal> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(q) => ExtReal::Finite(-q),
        }
    }

    pub fn abs(&self) -> ExtReal {
        match self {
            ExtReal::NegInf | ExtReal::PosInf => ExtReal::PosInf,
            ExtReal::Finite(q) => ExtReal::Finite(q.abs()),
        }
    }

    pub fn halve(&self) -> ExtReal {
        match self {
            ExtReal::Finite(q) => ExtReal::Finite(q / BigRational::from_integer(BigInt::from(2))),
            inf => inf.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = ValueParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" => Ok(ExtReal::PosInf),
            "-inf" => Ok(ExtReal::NegInf),
            other => Ok(ExtReal::Finite(parse_rational("extended real", other)?)),
        }
    }
}

/// Which exact backing a [`Value`] uses; recorded in serialized tables so the
/// reader interprets the entry strings on the right scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Multiplicative,
    Logarithmic,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Multiplicative => "multiplicative",
            Scale::Logarithmic => "log",
        }
    }
}

/// A nonnegative extended quantity with exact multiplication: the value
/// domain of distances and of multiplicative cross-ratio coordinates.
///
/// Finite positive values form a group under multiplication; `0` and `inf`
/// are absorbing, and the mixed product `0 * inf` is undefined (`None`).
/// The order is total with `0 < finite < inf`.
pub trait Value:
    Clone + PartialEq + Eq + PartialOrd + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const SCALE: Scale;

    fn zero() -> Self;
    fn one() -> Self;
    fn infinity() -> Self;

    fn is_zero(&self) -> bool;
    fn is_infinite(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn is_finite_positive(&self) -> bool {
        !self.is_zero() && !self.is_infinite()
    }

    /// `self * rhs`; `None` exactly for `0 * inf`.
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;

    /// Multiplicative inverse; swaps `0` and `inf`.
    fn recip(&self) -> Self;

    /// `self / rhs`; `None` exactly for `0 / 0` and `inf / inf`.
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_mul(&rhs.recip())
    }

    /// Some exact value strictly between two distinct finite positive values;
    /// used when sampling radii between consecutive thresholds.
    fn between(&self, other: &Self) -> Self;

    /// Natural logarithm as a float, for presentation only.
    fn log_f64(&self) -> f64;

    /// Canonical string form: the value itself (`0`, `p/q`, `inf`) on the
    /// multiplicative scale, its logarithm (`-inf`, `r`, `inf`) on the log
    /// scale.
    fn encode(&self) -> String;
    fn decode(s: &str) -> Result<Self, ValueParseError>;
}

/// Multiplicative backing: the quantity itself as an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MulRat {
    Zero,
    Pos(BigRational),
    Inf,
}

impl MulRat {
    /// Builds from a rational; rejects negatives, maps `0` to `Zero`.
    pub fn from_rational(q: BigRational) -> Result<Self, ValueParseError> {
        if q.is_negative() {
            return Err(ValueParseError {
                kind: "multiplicative value",
                text: q.to_string(),
            });
        }
        if q.is_zero() {
            Ok(MulRat::Zero)
        } else {
            Ok(MulRat::Pos(q))
        }
    }

    /// Exact positive rational `num/den`; panics if the quotient is not
    /// nonnegative or `den` is zero.  Convenience for fixtures.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        MulRat::from_rational(q).expect("negative ratio")
    }

    pub fn from_int(n: u64) -> Self {
        if n == 0 {
            MulRat::Zero
        } else {
            MulRat::Pos(BigRational::from_integer(BigInt::from(n)))
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            MulRat::Pos(q) => Some(q),
            _ => None,
        }
    }
}

impl PartialOrd for MulRat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MulRat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        use MulRat::*;
        match (self, other) {
            (Zero, Zero) | (Inf, Inf) => Equal,
            (Zero, _) | (_, Inf) => Less,
            (_, Zero) | (Inf, _) => Greater,
            (Pos(a), Pos(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for MulRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MulRat::Zero => write!(f, "0"),
            MulRat::Inf => write!(f, "inf"),
            MulRat::Pos(q) => write!(f, "{q}"),
        }
    }
}

impl Value for MulRat {
    const SCALE: Scale = Scale::Multiplicative;

    fn zero() -> Self {
        MulRat::Zero
    }

    fn one() -> Self {
        MulRat::Pos(BigRational::one())
    }

    fn infinity() -> Self {
        MulRat::Inf
    }

    fn is_zero(&self) -> bool {
        matches!(self, MulRat::Zero)
    }

    fn is_infinite(&self) -> bool {
        matches!(self, MulRat::Inf)
    }

    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        use MulRat::*;
        match (self, rhs) {
            (Zero, Inf) | (Inf, Zero) => None,
            (Zero, _) | (_, Zero) => Some(Zero),
            (Inf, _) | (_, Inf) => Some(Inf),
            (Pos(a), Pos(b)) => Some(Pos(a * b)),
        }
    }

    fn recip(&self) -> Self {
        match self {
            MulRat::Zero => MulRat::Inf,
            MulRat::Inf => MulRat::Zero,
            MulRat::Pos(q) => MulRat::Pos(q.recip()),
        }
    }

    fn between(&self, other: &Self) -> Self {
        match (self, other) {
            (MulRat::Pos(a), MulRat::Pos(b)) => {
                MulRat::Pos((a + b) / BigRational::from_integer(BigInt::from(2)))
            }
            _ => panic!("between requires finite positive values"),
        }
    }

    fn log_f64(&self) -> f64 {
        match self {
            MulRat::Zero => f64::NEG_INFINITY,
            MulRat::Inf => f64::INFINITY,
            MulRat::Pos(q) => q.to_f64().map(f64::ln).unwrap_or(f64::NAN),
        }
    }

    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Result<Self, ValueParseError> {
        match s.trim() {
            "inf" => Ok(MulRat::Inf),
            other => MulRat::from_rational(parse_rational("multiplicative value", other)?),
        }
    }
}

/// Logarithmic backing: the quantity `e^log` stored by its exact rational
/// logarithm.  `0` is `e^(-inf)` and `inf` is `e^(+inf)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LogRat {
    log: ExtReal,
}

impl LogRat {
    pub fn from_log(log: ExtReal) -> Self {
        LogRat { log }
    }

    pub fn from_log_rational(q: BigRational) -> Self {
        LogRat {
            log: ExtReal::Finite(q),
        }
    }

    pub fn log(&self) -> &ExtReal {
        &self.log
    }

    pub fn sqrt(&self) -> Self {
        LogRat {
            log: self.log.halve(),
        }
    }
}

impl fmt::Display for LogRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.log {
            ExtReal::NegInf => write!(f, "0"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(q) if q.is_zero() => write!(f, "1"),
            ExtReal::Finite(q) => write!(f, "exp({q})"),
        }
    }
}

impl Value for LogRat {
    const SCALE: Scale = Scale::Logarithmic;

    fn zero() -> Self {
        LogRat {
            log: ExtReal::NegInf,
        }
    }

    fn one() -> Self {
        LogRat {
            log: ExtReal::zero(),
        }
    }

    fn infinity() -> Self {
        LogRat {
            log: ExtReal::PosInf,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self.log, ExtReal::NegInf)
    }

    fn is_infinite(&self) -> bool {
        matches!(self.log, ExtReal::PosInf)
    }

    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        // 0 * inf is exactly the undefined sum (-inf) + (+inf) of logarithms.
        self.log.checked_add(&rhs.log).map(LogRat::from_log)
    }

    fn recip(&self) -> Self {
        LogRat {
            log: self.log.neg(),
        }
    }

    fn between(&self, other: &Self) -> Self {
        match (&self.log, &other.log) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => LogRat {
                log: ExtReal::Finite((a + b) / BigRational::from_integer(BigInt::from(2))),
            },
            _ => panic!("between requires finite positive values"),
        }
    }

    fn log_f64(&self) -> f64 {
        self.log.to_f64()
    }

    fn encode(&self) -> String {
        self.log.to_string()
    }

    fn decode(s: &str) -> Result<Self, ValueParseError> {
        Ok(LogRat {
            log: ExtReal::from_str(s)?,
        })
    }
}

/// Evaluates `num[0] * ... * num[k] / (den[0] * ... * den[m])` with symbolic
/// cancellation of `inf/inf` pairs before any arithmetic.  This is how
/// quotients of distances involving an infinitely remote point are computed:
/// the infinite factors always cancel pairwise in well-formed inputs, and the
/// remaining finite factors are multiplied exactly.  `None` signals a
/// genuinely undefined combination (`0 * inf` on one side, or `0/0`).
pub fn eval_fraction<V: Value>(num: &[&V], den: &[&V]) -> Option<V> {
    fn split<V: Value>(factors: &[&V]) -> (usize, usize, Option<V>) {
        let mut zeros = 0;
        let mut infs = 0;
        let mut acc = V::one();
        for f in factors {
            if f.is_zero() {
                zeros += 1;
            } else if f.is_infinite() {
                infs += 1;
            } else {
                acc = acc.checked_mul(f).expect("finite product");
            }
        }
        (zeros, infs, Some(acc))
    }

    let (nz, mut ni, nfin) = split(num);
    let (dz, mut di, dfin) = split(den);
    let cancel = ni.min(di);
    ni -= cancel;
    di -= cancel;

    // An uncancelled infinity together with a zero on the same side is 0*inf.
    if (ni > 0 && nz > 0) || (di > 0 && dz > 0) {
        return None;
    }
    match (nz > 0, ni > 0, dz > 0, di > 0) {
        (true, _, true, _) => None,                 // 0 / 0
        (_, true, _, _) => Some(V::infinity()),     // inf / finite-or-zero
        (true, _, _, _) => Some(V::zero()),         // 0 / finite-or-inf
        (_, _, _, true) => Some(V::zero()),         // finite / inf
        (_, _, true, _) => Some(V::infinity()),     // finite / 0
        _ => nfin?.checked_div(&dfin?),
    }
}
