//! Laurent polynomials in `q^{1/2}` with unbounded integer coefficients.
//!
//! Exponents are stored in half units: the key `k` stands for `q^{k/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("normalization needs m >= 2, got {0}")]
    BadArity(i64),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
    #[error("cannot parse polynomial at byte {pos}: {reason}")]
    Parse { pos: usize, reason: String },
}

/// An element of `Z[q^{±1/2}]`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RefinedPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl RefinedPolynomial {
    pub fn zero() -> Self {
        RefinedPolynomial::default()
    }

    pub fn one() -> Self {
        RefinedPolynomial::monomial(0, 1)
    }

    /// `coeff · q^{half_exp/2}`.
    pub fn monomial(half_exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = RefinedPolynomial::zero();
        p.add_term(half_exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(half_exp, coeff)` pairs, merging repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = RefinedPolynomial::zero();
        for (k, c) in terms {
            p.add_term(k, c.into());
        }
        p
    }

    /// Adds `coeff · q^{half_exp/2}` in place.
    pub fn add_term(&mut self, half_exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(half_exp).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&half_exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, half_exp: i64) -> BigInt {
        self.terms.get(&half_exp).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the coefficient of `q^{k/2}` equals that of `q^{-k/2}` for all `k`.
    pub fn is_palindromic(&self) -> bool {
        self.terms
            .iter()
            .all(|(&k, c)| self.terms.get(&-k) == Some(c))
    }

    /// Value at `q = 1`: the sum of all coefficients.
    pub fn evaluate_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True when every stored coefficient is positive.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// `Some(parity)` of the half exponents when they all agree; `None` for
    /// zero or mixed parity.
    pub fn exponent_parity(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|k| k.rem_euclid(2));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return RefinedPolynomial::zero();
        }
        RefinedPolynomial {
            terms: self.terms.iter().map(|(&k, c)| (k, c * factor)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = RefinedPolynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `(q^{1/2} - q^{-1/2})^{m-2} · self`, clearing the refined denominators.
    pub fn mikhalkin_normalization(&self, m: i64) -> Result<Self, PolyError> {
        if m < 2 {
            return Err(PolyError::BadArity(m));
        }
        let factor = RefinedPolynomial::from_terms([(1, 1), (-1, -1)]);
        let n = u32::try_from(m - 2).map_err(|_| PolyError::BadArity(m))?;
        Ok(self * &factor.pow(n))
    }

    /// JSON object mapping the stringified half exponent to the stringified
    /// coefficient, in decreasing exponent order.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| (k.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PolyError> {
        let obj = value
            .as_object()
            .ok_or_else(|| PolyError::Json("expected an object".into()))?;
        let mut p = RefinedPolynomial::zero();
        for (k, c) in obj {
            let half: i64 = k
                .parse()
                .map_err(|_| PolyError::Json(format!("bad exponent key {k:?}")))?;
            let coeff: BigInt = match c {
                serde_json::Value::String(s) => s.parse().ok(),
                serde_json::Value::Number(n) => n.to_string().parse().ok(),
                _ => None,
            }
            .ok_or_else(|| PolyError::Json(format!("bad coefficient for {k:?}")))?;
            p.add_term(half, coeff);
        }
        Ok(p)
    }

    /// Tight rendering used in tables, e.g. `q+7+q^-1` or `q^(1/2)+q^(-1/2)`.
    pub fn to_compact_string(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&k, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative, spaced) {
                (0, true, _) => out.push('-'),
                (0, false, _) => {}
                (_, true, true) => out.push_str(" - "),
                (_, false, true) => out.push_str(" + "),
                (_, true, false) => out.push('-'),
                (_, false, false) => out.push('+'),
            }
            let magnitude = c.abs();
            let power = power_string(k);
            match (power, magnitude.is_one()) {
                (None, _) => out.push_str(&magnitude.to_string()),
                (Some(p), true) => out.push_str(&p),
                (Some(p), false) => {
                    out.push_str(&magnitude.to_string());
                    if spaced {
                        out.push('*');
                    }
                    out.push_str(&p);
                }
            }
        }
        out
    }
}

fn power_string(half_exp: i64) -> Option<String> {
    match half_exp {
        0 => None,
        2 => Some("q".to_string()),
        k if k % 2 == 0 => Some(format!("q^{}", k / 2)),
        k => Some(format!("q^({k}/2)")),
    }
}

/// The q-analog `[a]_q = (q^{a/2} - q^{-a/2}) / (q^{1/2} - q^{-1/2})`.
///
/// For `a > 0` this is `q^{(a-1)/2} + q^{(a-3)/2} + ... + q^{-(a-1)/2}`;
/// `[0]_q = 0` and `[-a]_q = -[a]_q`.
pub fn q_analog(a: i64) -> RefinedPolynomial {
    let sign: BigInt = if a < 0 { -BigInt::one() } else { BigInt::one() };
    let n = a.unsigned_abs() as i64;
    let mut p = RefinedPolynomial::zero();
    let mut k = -(n - 1);
    while k < n {
        p.terms.insert(k, sign.clone());
        k += 2;
    }
    p
}

/// `q^{e} - q^{-e}` for an integer exponent `e`.
pub fn q_difference(e: i64) -> RefinedPolynomial {
    RefinedPolynomial::from_terms([(2 * e, 1), (-2 * e, -1)])
}

/// Spaced human form, e.g. `q^3 + 10*q^2 + 55*q + 172 + 55*q^-1`.
impl fmt::Display for RefinedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

impl<'a> Add<&'a RefinedPolynomial> for &'a RefinedPolynomial {
    type Output = RefinedPolynomial;
    fn add(self, rhs: &RefinedPolynomial) -> RefinedPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RefinedPolynomial {
    type Output = RefinedPolynomial;
    fn add(mut self, rhs: RefinedPolynomial) -> RefinedPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&RefinedPolynomial> for RefinedPolynomial {
    fn add_assign(&mut self, rhs: &RefinedPolynomial) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c.clone());
        }
    }
}

impl Neg for RefinedPolynomial {
    type Output = RefinedPolynomial;
    fn neg(self) -> RefinedPolynomial {
        RefinedPolynomial {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a RefinedPolynomial> for &'a RefinedPolynomial {
    type Output = RefinedPolynomial;
    fn sub(self, rhs: &RefinedPolynomial) -> RefinedPolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c);
        }
        out
    }
}

impl<'a> Mul<&'a RefinedPolynomial> for &'a RefinedPolynomial {
    type Output = RefinedPolynomial;
    fn mul(self, rhs: &RefinedPolynomial) -> RefinedPolynomial {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                *terms.entry(a + b).or_default() += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        RefinedPolynomial { terms }
    }
}

impl Mul for RefinedPolynomial {
    type Output = RefinedPolynomial;
    fn mul(self, rhs: RefinedPolynomial) -> RefinedPolynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for RefinedPolynomial {
    fn sum<I: Iterator<Item = RefinedPolynomial>>(iter: I) -> RefinedPolynomial {
        iter.fold(RefinedPolynomial::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl std::iter::Product for RefinedPolynomial {
    fn product<I: Iterator<Item = RefinedPolynomial>>(iter: I) -> RefinedPolynomial {
        iter.fold(RefinedPolynomial::one(), |acc, p| &acc * &p)
    }
}

/// Parses either rendering, e.g. `q^3 + 10*q^2 + 172` or `q^(3/2)+6q^(1/2)`.
/// Braces are accepted in place of parentheses around exponents.
impl std::str::FromStr for RefinedPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let s: String = s
            .chars()
            .map(|c| match c {
                '{' => '(',
                '}' => ')',
                '\u{2212}' => '-',
                c => c,
            })
            .filter(|c| !c.is_whitespace())
            .collect();
        let bytes = s.as_bytes();
        let err = |pos: usize, reason: &str| PolyError::Parse {
            pos,
            reason: reason.to_string(),
        };
        if s == "0" {
            return Ok(RefinedPolynomial::zero());
        }
        let mut out = RefinedPolynomial::zero();
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let mut sign = BigInt::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if start != 0 {
                return Err(err(i, "expected + or -"));
            }
            let digits = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<BigInt> = (i > digits).then(|| s[digits..i].parse().unwrap());
            if i < bytes.len() && bytes[i] == b'*' {
                if coeff.is_none() {
                    return Err(err(i, "missing coefficient"));
                }
                i += 1;
            }
            let mut half = 0i64;
            if i < bytes.len() && bytes[i] == b'q' {
                i += 1;
                half = 2;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let (e, used) =
                        parse_exponent(&s[i..]).ok_or_else(|| err(i, "bad exponent"))?;
                    half = e;
                    i += used;
                }
            } else if coeff.is_none() {
                return Err(err(i, "expected a coefficient or q"));
            }
            out.add_term(half, sign * coeff.unwrap_or_else(BigInt::one));
        }
        if bytes.is_empty() {
            return Err(err(0, "empty input"));
        }
        Ok(out)
    }
}

/// Exponent after `^`, in half units, and the number of bytes consumed.
fn parse_exponent(s: &str) -> Option<(i64, usize)> {
    let int_prefix = |t: &str| -> Option<(i64, usize)> {
        let neg = t.starts_with('-');
        let body = &t[neg as usize..];
        let n = body.bytes().take_while(u8::is_ascii_digit).count();
        let v: i64 = body[..n].parse().ok()?;
        Some((if neg { -v } else { v }, n + neg as usize))
    };
    if let Some(inner) = s.strip_prefix('(') {
        let (num, used) = int_prefix(inner)?;
        let rest = &inner[used..];
        if rest.starts_with("/2)") {
            Some((num, used + 4))
        } else if rest.starts_with(')') {
            Some((2 * num, used + 2))
        } else {
            None
        }
    } else {
        let (v, used) = int_prefix(s)?;
        Some((2 * v, used))
    }
}
