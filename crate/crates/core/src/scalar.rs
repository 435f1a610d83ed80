//! Exact coefficient arithmetic over fields of characteristic != 2.
//!
//! A [`Scalar`] is an exact rational, a residue in an odd prime field, or a
//! univariate polynomial in the formal parameter `al` over one of those.
//! There is no floating point anywhere in this crate. Polynomial scalars are
//! kept in canonical form (dense ascending coefficients, trailing zeros
//! trimmed, constants collapsed to the base representation), so `==` is exact
//! semantic equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

/// Which base field coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Prime { p: u64 },
}

/// A base field together with the flag that enables the formal parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldContext {
    pub kind: FieldKind,
    #[serde(default)]
    pub symbolic: bool,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldContext {
    pub fn rational() -> Self {
        FieldContext {
            kind: FieldKind::Rational,
            symbolic: false,
        }
    }

    /// A prime field F_p. Characteristic 2 and composite moduli are rejected.
    pub fn prime(p: u64) -> Result<Self, Error> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldContext {
            kind: FieldKind::Prime { p },
            symbolic: false,
        })
    }

    /// Same base field, with the formal parameter `al` available.
    pub fn with_symbolic(mut self) -> Self {
        self.symbolic = true;
        self
    }

    /// 0 for the rationals, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Prime { p } => p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.kind {
            FieldKind::Rational => Scalar::Rat(BigRational::zero()),
            FieldKind::Prime { p } => Scalar::Mod { val: 0, p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, k: i64) -> Scalar {
        match self.kind {
            FieldKind::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(k))),
            FieldKind::Prime { p } => Scalar::Mod {
                val: k.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// num/den as a field element; in F_p the denominator is inverted mod p.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, Error> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// The formal parameter itself. Only available in symbolic contexts.
    pub fn alpha(&self) -> Result<Scalar, Error> {
        if !self.symbolic {
            return Err(Error::NotSymbolic);
        }
        Ok(match self.kind {
            FieldKind::Rational => Scalar::poly_rat(vec![BigRational::zero(), BigRational::one()]),
            FieldKind::Prime { p } => Scalar::poly_mod(vec![0, 1], p),
        })
    }

    /// Checks that a scalar belongs to this field (same base kind, no
    /// polynomial part unless the context is symbolic).
    pub fn admits(&self, s: &Scalar) -> bool {
        match (self.kind, s) {
            (FieldKind::Rational, Scalar::Rat(_)) => true,
            (FieldKind::Rational, Scalar::PolyRat(_)) => self.symbolic,
            (FieldKind::Prime { p }, Scalar::Mod { p: q, .. }) => p == *q,
            (FieldKind::Prime { p }, Scalar::PolyMod { p: q, .. }) => self.symbolic && p == *q,
            _ => false,
        }
    }

    /// Parses the canonical textual form produced by `Display`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, Error> {
        let v = parse_scalar_str(s, self)?;
        if !self.admits(&v) {
            return Err(Error::Parse(format!(
                "scalar `{s}` does not belong to this field context"
            )));
        }
        Ok(v)
    }
}

/// An exact field element, possibly polynomial in the formal parameter `al`.
///
/// Canonical form invariants: `PolyRat`/`PolyMod` always have degree >= 1 and
/// a nonzero leading coefficient; `Mod` values are reduced into `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod { val: u64, p: u64 },
    PolyRat(Vec<BigRational>),
    PolyMod { coeffs: Vec<u64>, p: u64 },
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    mod_pow(a, p - 2, p)
}

impl Scalar {
    fn poly_rat(mut coeffs: Vec<BigRational>) -> Scalar {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        match coeffs.len() {
            0 => Scalar::Rat(BigRational::zero()),
            1 => Scalar::Rat(coeffs.pop().unwrap()),
            _ => Scalar::PolyRat(coeffs),
        }
    }

    fn poly_mod(mut coeffs: Vec<u64>, p: u64) -> Scalar {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        match coeffs.len() {
            0 => Scalar::Mod { val: 0, p },
            1 => Scalar::Mod { val: coeffs[0], p },
            _ => Scalar::PolyMod { coeffs, p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { val, .. } => *val == 0,
            // canonical polys are never constant
            Scalar::PolyRat(_) | Scalar::PolyMod { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { val, .. } => *val == 1,
            _ => false,
        }
    }

    /// Degree in `al`; constants have degree 0.
    pub fn degree(&self) -> usize {
        match self {
            Scalar::Rat(_) | Scalar::Mod { .. } => 0,
            Scalar::PolyRat(c) => c.len() - 1,
            Scalar::PolyMod { coeffs, .. } => coeffs.len() - 1,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    fn rat_coeffs(&self) -> Vec<BigRational> {
        match self {
            Scalar::Rat(r) => vec![r.clone()],
            Scalar::PolyRat(c) => c.clone(),
            _ => panic!("mixed scalar kinds: expected rational family"),
        }
    }

    fn mod_coeffs(&self, p: u64) -> Vec<u64> {
        match self {
            Scalar::Mod { val, p: q } if *q == p => vec![*val],
            Scalar::PolyMod { coeffs, p: q } if *q == p => coeffs.clone(),
            _ => panic!("mixed scalar kinds: expected F_{p} family"),
        }
    }

    fn modulus(&self) -> Option<u64> {
        match self {
            Scalar::Mod { p, .. } | Scalar::PolyMod { p, .. } => Some(*p),
            _ => None,
        }
    }

    pub fn negate_if(self, flip: bool) -> Scalar {
        if flip {
            -self
        } else {
            self
        }
    }

    /// Multiplication by a small integer, used for signs and the `al*(s-1)`
    /// style factors in action tables.
    pub fn scale_i64(&self, k: i64) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r * BigRational::from_integer(BigInt::from(k))),
            Scalar::Mod { val, p } => {
                let km = k.rem_euclid(*p as i64) as u64;
                Scalar::Mod {
                    val: mod_mul(*val, km, *p),
                    p: *p,
                }
            }
            Scalar::PolyRat(c) => {
                let kk = BigRational::from_integer(BigInt::from(k));
                Scalar::poly_rat(c.iter().map(|x| x * &kk).collect())
            }
            Scalar::PolyMod { coeffs, p } => {
                let km = k.rem_euclid(*p as i64) as u64;
                Scalar::poly_mod(coeffs.iter().map(|x| mod_mul(*x, km, *p)).collect(), *p)
            }
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !rhs.is_constant() {
            return Err(Error::NonConstantDivisor);
        }
        Ok(match rhs {
            Scalar::Rat(d) => match self {
                Scalar::Rat(n) => Scalar::Rat(n / d),
                Scalar::PolyRat(c) => Scalar::poly_rat(c.iter().map(|x| x / d).collect()),
                _ => panic!("mixed scalar kinds in division"),
            },
            Scalar::Mod { val, p } => {
                let inv = mod_inv(*val, *p);
                match self {
                    Scalar::Mod { val: n, p: q } if q == p => Scalar::Mod {
                        val: mod_mul(*n, inv, *p),
                        p: *p,
                    },
                    Scalar::PolyMod { coeffs, p: q } if q == p => {
                        Scalar::poly_mod(coeffs.iter().map(|x| mod_mul(*x, inv, *p)).collect(), *p)
                    }
                    _ => panic!("mixed scalar kinds in division"),
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar, Error> {
        let one = match self {
            Scalar::Rat(_) | Scalar::PolyRat(_) => Scalar::Rat(BigRational::one()),
            Scalar::Mod { p, .. } | Scalar::PolyMod { p, .. } => Scalar::Mod { val: 1, p: *p },
        };
        one.checked_div(self)
    }

    /// Substitutes a concrete value for `al` (Horner evaluation).
    pub fn eval_alpha(&self, at: &Scalar) -> Scalar {
        match self {
            Scalar::Rat(_) | Scalar::Mod { .. } => self.clone(),
            Scalar::PolyRat(c) => {
                let mut acc = Scalar::Rat(c.last().unwrap().clone());
                for k in (0..c.len() - 1).rev() {
                    acc = &(&acc * at) + &Scalar::Rat(c[k].clone());
                }
                acc
            }
            Scalar::PolyMod { coeffs, p } => {
                let mut acc = Scalar::Mod {
                    val: *coeffs.last().unwrap(),
                    p: *p,
                };
                for k in (0..coeffs.len() - 1).rev() {
                    acc = &(&acc * at)
                        + &Scalar::Mod {
                            val: coeffs[k],
                            p: *p,
                        };
                }
                acc
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { val: a, p }, Scalar::Mod { val: b, p: q }) if p == q => Scalar::Mod {
                val: (a + b) % p,
                p: *p,
            },
            _ => {
                if let Some(p) = self.modulus().or_else(|| rhs.modulus()) {
                    let a = self.mod_coeffs(p);
                    let b = rhs.mod_coeffs(p);
                    let mut out = vec![0u64; a.len().max(b.len())];
                    for (i, c) in a.into_iter().enumerate() {
                        out[i] = (out[i] + c) % p;
                    }
                    for (i, c) in b.into_iter().enumerate() {
                        out[i] = (out[i] + c) % p;
                    }
                    Scalar::poly_mod(out, p)
                } else {
                    let a = self.rat_coeffs();
                    let b = rhs.rat_coeffs();
                    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
                    for (i, c) in a.into_iter().enumerate() {
                        out[i] += c;
                    }
                    for (i, c) in b.into_iter().enumerate() {
                        out[i] += c;
                    }
                    Scalar::poly_rat(out)
                }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Mod { val, p } => Scalar::Mod {
                val: if val == 0 { 0 } else { p - val },
                p,
            },
            Scalar::PolyRat(c) => Scalar::PolyRat(c.into_iter().map(|x| -x).collect()),
            Scalar::PolyMod { coeffs, p } => Scalar::PolyMod {
                coeffs: coeffs
                    .into_iter()
                    .map(|x| if x == 0 { 0 } else { p - x })
                    .collect(),
                p,
            },
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { val: a, p }, Scalar::Mod { val: b, p: q }) if p == q => Scalar::Mod {
                val: mod_mul(*a, *b, *p),
                p: *p,
            },
            _ => {
                if let Some(p) = self.modulus().or_else(|| rhs.modulus()) {
                    let a = self.mod_coeffs(p);
                    let b = rhs.mod_coeffs(p);
                    let mut out = vec![0u64; a.len() + b.len() - 1];
                    for (i, x) in a.iter().enumerate() {
                        for (j, y) in b.iter().enumerate() {
                            out[i + j] = (out[i + j] + mod_mul(*x, *y, p)) % p;
                        }
                    }
                    Scalar::poly_mod(out, p)
                } else {
                    let a = self.rat_coeffs();
                    let b = rhs.rat_coeffs();
                    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
                    for (i, x) in a.iter().enumerate() {
                        for (j, y) in b.iter().enumerate() {
                            out[i + j] += x * y;
                        }
                    }
                    Scalar::poly_rat(out)
                }
            }
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

fn fmt_rat(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

struct RatDisp<'a>(&'a BigRational);
impl fmt::Display for RatDisp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rat(self.0, f)
    }
}

fn fmt_poly_terms<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, T)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "{c}")?,
            1 => write!(f, "{c}*al")?,
            _ => write!(f, "{c}*al^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => fmt_rat(r, f),
            Scalar::Mod { val, p } => write!(f, "{val} mod {p}"),
            Scalar::PolyRat(c) => fmt_poly_terms(
                f,
                c.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (k, RatDisp(x))),
            ),
            Scalar::PolyMod { coeffs, p } => fmt_poly_terms(
                f,
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(k, x)| (k, format!("{x} mod {p}"))),
            ),
        }
    }
}

fn parse_rat(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

fn parse_base(s: &str, ctx: &FieldContext) -> Result<Scalar, Error> {
    let s = s.trim();
    if let Some((k, p)) = s.split_once(" mod ") {
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in `{s}`")))?;
        let k: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue in `{s}`")))?;
        if ctx.kind != (FieldKind::Prime { p }) {
            return Err(Error::Parse(format!("modulus {p} does not match context")));
        }
        Ok(ctx.from_i64(k))
    } else {
        match ctx.kind {
            FieldKind::Rational => Ok(Scalar::Rat(parse_rat(s)?)),
            // plain integers are accepted as residues in a prime context
            FieldKind::Prime { .. } => {
                let k: i64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue `{s}`")))?;
                Ok(ctx.from_i64(k))
            }
        }
    }
}

fn parse_scalar_str(s: &str, ctx: &FieldContext) -> Result<Scalar, Error> {
    let mut acc = ctx.zero();
    for term in s.split(" + ") {
        let term = term.trim();
        let (base, exp) = if let Some((b, e)) = term.rsplit_once("*al^") {
            let e: usize = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{term}`")))?;
            (b, e)
        } else if let Some(b) = term.strip_suffix("*al") {
            (b, 1)
        } else if term == "al" {
            ("1", 1)
        } else {
            (term, 0)
        };
        let mut c = parse_base(base, ctx)?;
        if exp > 0 {
            let al = ctx.alpha()?;
            for _ in 0..exp {
                c = &c * &al;
            }
        }
        acc = &acc + &c;
    }
    Ok(acc)
}
