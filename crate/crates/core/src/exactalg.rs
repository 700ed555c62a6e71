//! Exact rationals, univariate polynomials over Q, Yun squarefree
//! decomposition and piecewise polynomial integration.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(v: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Rat {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Decimal rendering by long division, for display only.
    pub fn approx(&self, digits: usize) -> String {
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        let int_part = &num / &den;
        let mut rem = &num % &den;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                rem *= 10;
                out.push_str(&(&rem / &den).to_string());
                rem = &rem % &den;
            }
        }
        out
    }
}

impl Default for Rat {
    fn default() -> Rat {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Rat {
        Rat(BigRational::from_integer(v))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Malformed(format!("rational '{}'", s));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(n).map_err(|_| bad())?;
        let den = BigInt::from_str(d).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rat::from_big(num, den))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::I(i) => Ok(Rat::int(i)),
        }
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat { Rat(self.0 $op o.0) }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &'a Rat) -> Rat { Rat(self.0 $op &o.0) }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat { Rat(&self.0 $op o.0) }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, o: &'b Rat) -> Rat { Rat(&self.0 $op &o.0) }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);
rat_binop!(Div, div, /);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        self.0 += &o.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, o: Rat) {
        self.0 += o.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        self.0 -= &o.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, o: &Rat) {
        self.0 *= &o.0;
    }
}

/// Shorthand `r(p, q)` for p/q.
pub fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Affine function c0 + c1·w of the boundary weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub c0: Rat,
    pub c1: Rat,
}

impl Affine {
    pub fn new(c0: Rat, c1: Rat) -> Affine {
        Affine { c0, c1 }
    }

    pub fn constant(c: Rat) -> Affine {
        Affine::new(c, Rat::zero())
    }

    /// Recovers an affine function from its values at w = 0 and w = 1.
    pub fn sample(f: impl Fn(&Rat) -> Rat) -> Affine {
        let v0 = f(&Rat::zero());
        let v1 = f(&Rat::one());
        Affine::new(v0.clone(), v1 - v0)
    }

    pub fn eval(&self, w: &Rat) -> Rat {
        &self.c0 + &(&self.c1 * w)
    }

    pub fn scale(&self, s: &Rat) -> Affine {
        Affine::new(&self.c0 * s, &self.c1 * s)
    }

    pub fn sub(&self, o: &Affine) -> Affine {
        Affine::new(&self.c0 - &o.c0, &self.c1 - &o.c1)
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine::new(&self.c0 + &o.c0, &self.c1 + &o.c1)
    }

    /// Unique zero, or None when the slope vanishes.
    pub fn root(&self) -> Option<Rat> {
        if self.c1.is_zero() {
            None
        } else {
            Some(-(&self.c0 / &self.c1))
        }
    }
}

/// Univariate polynomial over Q, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> UniPoly {
        UniPoly::new(vec![c])
    }

    /// c·X^k
    pub fn monomial(c: Rat, k: usize) -> UniPoly {
        let mut cs = vec![Rat::zero(); k + 1];
        cs[k] = c;
        UniPoly::new(cs)
    }

    /// X - c
    pub fn linear_root(c: &Rat) -> UniPoly {
        UniPoly::new(vec![-c, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> UniPoly {
        let mut cs = vec![Rat::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            cs.push(c / Rat::int(i as i64 + 1));
        }
        UniPoly::new(cs)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::constant(Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let dl = d.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let q = &rem[k + dd] / &dl;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &(&q * dc);
                }
            }
            quo[k] = q;
        }
        rem.truncate(dd);
        (UniPoly::new(quo), UniPoly::new(rem))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &UniPoly) -> UniPoly {
        let (q, rem) = self.div_rem(d);
        assert!(rem.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let (_, rem) = x.div_rem(&y);
            x = y;
            y = rem.monic();
        }
        x
    }

    /// Content-free integer form: same roots, integer coprime coefficients,
    /// positive leading coefficient.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = num_integer::Integer::gcd(&g, v);
        }
        if self.lead().is_negative() {
            g = -g;
        }
        UniPoly::new(ints.into_iter().map(|v| Rat::from(v / &g)).collect())
    }

    pub fn trailing_zero_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// p / X^k where k is the order of vanishing at 0.
    pub fn strip_zero_root(&self) -> UniPoly {
        let k = self.trailing_zero_order();
        UniPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// p(s·X)
    pub fn rescale_var(&self, s: &Rat) -> UniPoly {
        let mut pw = Rat::one();
        let mut cs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            cs.push(c * &pw);
            pw = &pw * s;
        }
        UniPoly::new(cs)
    }

    /// p(q(X))
    pub fn compose(&self, q: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UniPoly::constant(c.clone());
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{}X", mag)?,
                (_, true) => write!(f, "X^{}", i)?,
                (_, false) => write!(f, "{}X^{}", mag, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self)
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<UniPoly, D::Error> {
        Ok(UniPoly::new(Vec::<Rat>::deserialize(d)?))
    }
}

impl<'b> Add<&'b UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &'b UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'b> Sub<&'b UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &'b UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'b> Mul<&'b UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &'b UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut cs = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                cs[i + j] += &(a * b);
            }
        }
        UniPoly::new(cs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(&Rat::int(-1))
    }
}

/// Squarefree factors with multiplicities, listed by strictly increasing multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeDecomposition {
    pub factors: Vec<(UniPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn max_multiplicity(&self) -> u32 {
        self.factors.iter().map(|f| f.1).max().unwrap_or(0)
    }

    /// Product of factor^multiplicity (monic).
    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(Rat::one());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

/// Yun's algorithm. Factors are monic.
pub fn squarefree_decompose(p: &UniPoly) -> Result<SquarefreeDecomposition> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = p.primitive();
    let mut factors = Vec::new();
    if f.degree() == Some(0) {
        return Ok(SquarefreeDecomposition { factors });
    }
    let fp = f.derivative();
    let a0 = UniPoly::gcd(&f, &fp);
    let mut b = f.exact_div(&a0);
    let c = fp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while b.degree().unwrap_or(0) > 0 {
        let a = UniPoly::gcd(&b, &d);
        b = b.exact_div(&a);
        let c_next = d.exact_div(&a);
        d = &c_next - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            factors.push((a.monic(), i));
        }
        i += 1;
    }
    Ok(SquarefreeDecomposition { factors })
}

/// Largest multiplicity of a complex root, optionally skipping the root 0.
pub fn max_root_multiplicity(p: &UniPoly, exclude_zero: bool) -> Result<u32> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = if exclude_zero { p.strip_zero_root() } else { p.clone() };
    Ok(squarefree_decompose(&q)?.max_multiplicity())
}

/// p(X + c)
pub fn shift_substitute(p: &UniPoly, c: &Rat) -> UniPoly {
    p.compose(&UniPoly::new(vec![c.clone(), Rat::one()]))
}

/// Piecewise polynomial on consecutive closed intervals, continuous at breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rat>,
    pieces: Vec<UniPoly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rat>, pieces: Vec<UniPoly>) -> Result<PiecewisePoly> {
        let pw = PiecewisePoly::new_unchecked(breakpoints, pieces)?;
        for i in 1..pw.pieces.len() {
            let x = &pw.breakpoints[i];
            if pw.pieces[i - 1].eval(x) != pw.pieces[i].eval(x) {
                return Err(Error::Discontinuous(x.to_string()));
            }
        }
        Ok(pw)
    }

    /// Skips the continuity check (negative parts and restricted orders can jump).
    pub fn new_unchecked(breakpoints: Vec<Rat>, pieces: Vec<UniPoly>) -> Result<PiecewisePoly> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Malformed("piece count must be breakpoints - 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed("breakpoints must strictly increase".into()));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[UniPoly] {
        &self.pieces
    }

    pub fn lo(&self) -> &Rat {
        &self.breakpoints[0]
    }

    pub fn hi(&self) -> &Rat {
        self.breakpoints.last().unwrap()
    }

    /// Value at x; at an interior breakpoint the left piece is used.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if x < self.lo() || x > self.hi() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let i = self.breakpoints[1..].iter().position(|b| x <= b).unwrap_or(self.pieces.len() - 1);
        Ok(self.pieces[i].eval(x))
    }

    pub fn map_pieces(&self, f: impl Fn(&UniPoly) -> UniPoly) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(f).collect(),
        }
    }

    pub fn derivative(&self) -> PiecewisePoly {
        self.map_pieces(|p| p.derivative())
    }

    /// Pointwise product; both sides must share breakpoints.
    pub fn mul(&self, o: &PiecewisePoly) -> Result<PiecewisePoly> {
        if self.breakpoints != o.breakpoints {
            return Err(Error::Malformed("breakpoint mismatch".into()));
        }
        Ok(PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().zip(&o.pieces).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn add(&self, o: &PiecewisePoly) -> Result<PiecewisePoly> {
        if self.breakpoints != o.breakpoints {
            return Err(Error::Malformed("breakpoint mismatch".into()));
        }
        Ok(PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().zip(&o.pieces).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Exact ∫_lo^hi f.
pub fn integrate_piecewise(f: &PiecewisePoly, lo: &Rat, hi: &Rat) -> Result<Rat> {
    if lo > hi {
        return Err(Error::OutOfDomain(format!("lo {} > hi {}", lo, hi)));
    }
    if lo < f.lo() || hi > f.hi() {
        return Err(Error::OutOfDomain(format!("[{}, {}] outside [{}, {}]", lo, hi, f.lo(), f.hi())));
    }
    let mut total = Rat::zero();
    for (i, p) in f.pieces.iter().enumerate() {
        let a = (&f.breakpoints[i]).max(lo);
        let b = (&f.breakpoints[i + 1]).min(hi);
        if a >= b {
            continue;
        }
        let anti = p.antiderivative();
        total += anti.eval(b) - anti.eval(a);
    }
    Ok(total)
}
