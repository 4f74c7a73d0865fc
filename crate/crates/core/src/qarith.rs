//! Exact Laurent polynomials in one variable, quantum integers and Gaussian
//! binomial coefficients, plus evaluation at `q = exp(i*pi*m/l)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classical::binom;
use crate::error::{Error, Result};
use crate::level::Level;

/// Integer Laurent polynomial `sum c_e x^e`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// `x + x^{-1}`, the character of `T(1)`.
    pub fn x_plus_inverse() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent, `None` for the zero polynomial.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Invariance under `x -> x^{-1}`.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(e, c)| self.coeffs.get(&-e) == Some(c))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (d_top, d_lead) = divisor.coeffs.iter().next_back()?;
        let d_bottom = divisor.min_exp()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((&top, lead)) = rem.coeffs.iter().next_back() {
            // remaining terms cannot be reached by the divisor's span
            if top - d_top < rem.min_exp().unwrap() - d_bottom {
                return None;
            }
            let (q, r) = lead.div_rem(d_lead);
            if !r.is_zero() {
                return None;
            }
            let shift = top - d_top;
            rem -= &divisor.scale(&q).shift(shift);
            quot.add_term(shift, q);
        }
        Some(quot)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(*e as i32))
            .sum()
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(e, c)| x.powi(*e as i32) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let unit = mag.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}x")?,
                (e, true) => write!(f, "x^{e}")?,
                (e, false) => write!(f, "{mag}x^{e}")?,
            }
        }
        Ok(())
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                *acc.entry(ea + eb).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs: acc }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// `(x^n - x^{-n}) / (x - x^{-1})`, i.e. the quantum integer `[n]`.
///
/// Negative `n` gives `-[-n]`.
pub fn quantum_number(n: i64) -> LaurentPoly {
    let (sign, n) = if n < 0 { (-1, -n) } else { (1, n) };
    LaurentPoly::from_terms((0..n).map(|j| (n - 1 - 2 * j, sign)))
}

/// `[n]! = [1][2]...[n]`.
pub fn quantum_factorial(n: usize) -> LaurentPoly {
    (1..=n as i64).fold(LaurentPoly::one(), |acc, s| &acc * &quantum_number(s))
}

/// Gaussian binomial `prod_{s=1}^r [m-s+1]/[s]`, valid for every integer `m`.
pub fn gaussian_binomial(m: i64, r: usize) -> LaurentPoly {
    let numerator = (1..=r as i64).fold(LaurentPoly::one(), |acc, s| {
        &acc * &quantum_number(m - s + 1)
    });
    if numerator.is_zero() {
        return numerator;
    }
    numerator
        .div_exact(&quantum_factorial(r))
        .expect("Gaussian binomial numerator is divisible by [r]!")
}

/// `q = exp(i*pi*m/l)` with `l` odd and `m` odd and coprime to `l`, so that `q^l = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootOfUnity {
    l: Level,
    m: i64,
}

impl RootOfUnity {
    pub fn new(l: Level, m: i64) -> Result<Self> {
        let li = l.get() as i64;
        if m.gcd(&(2 * li)) != 1 {
            return Err(Error::NotCoprime { l: l.get(), m });
        }
        Ok(Self { l, m })
    }

    /// The default choice `m = 1`.
    pub fn principal(l: Level) -> Self {
        Self { l, m: 1 }
    }

    pub fn level(&self) -> Level {
        self.l
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// `q^e`, with the angle reduced modulo `2*pi` before evaluation.
    pub fn power(&self, e: i64) -> Complex64 {
        let two_l = 2 * self.l.get() as i64;
        let r = (self.m * e).rem_euclid(two_l);
        Complex64::from_polar(1.0, PI * r as f64 / self.l.get() as f64)
    }
}

/// Coefficients of the cyclotomic polynomial `Phi_n`, lowest degree first.
fn cyclotomic(n: usize) -> Vec<BigInt> {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = BigInt::from(-1);
    poly[n] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = divide_monic(&poly, &cyclotomic(d)).0;
    }
    poly
}

/// Quotient and remainder of `a` by the monic polynomial `b`.
fn divide_monic(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![BigInt::zero()], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (quot, rem)
}

/// Evaluate `p` at the root of unity `q`.
///
/// The polynomial is first reduced exactly modulo `Phi_{2l}`, the minimal polynomial of `q`,
/// so that large cancelling coefficients never reach floating point.
pub fn specialize(p: &LaurentPoly, q: &RootOfUnity) -> Complex64 {
    let two_l = 2 * q.l.get();
    let mut folded = vec![BigInt::zero(); two_l];
    for (e, c) in p.terms() {
        folded[e.rem_euclid(two_l as i64) as usize] += c;
    }
    let (_, reduced) = divide_monic(&folded, &cyclotomic(two_l));
    reduced
        .iter()
        .enumerate()
        .map(|(e, c)| q.power(e as i64) * c.to_f64().unwrap_or(f64::NAN))
        .sum()
}

fn sign(exponent: i64) -> i64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Value of `[m choose l]` at `q = exp(i*pi/l)`: `(-1)^{m+1} m_1` where `m = l*m_1 + m_0`.
pub fn qbinom_l_at_root(l: Level, m: i64) -> i64 {
    let m1 = m.div_euclid(l.get() as i64);
    sign(m + 1) * m1
}

/// Largest absolute deviation between the exact Gaussian binomials evaluated at
/// `q = exp(i*pi/l)` and their factorized forms:
///
/// * `[m choose r] = (-1)^{(m0 r1 - m1 r0) + (m1+1) r1} C(m1, r1) [m0 choose r0]`
///   for `0 <= r <= m <= m_max`;
/// * `[lp]! / ([l]!)^p = p! (-1)^{p(p-1)/2}` for `p <= m_max / l`.
pub fn check_qbinom_identities(l: Level, m_max: usize) -> f64 {
    let q = RootOfUnity::principal(l);
    let li = l.get() as i64;
    let mut worst: f64 = 0.0;

    // [m0 choose r0] only ever needs 0 <= m0, r0 < l
    let small: Vec<Vec<Complex64>> = (0..li)
        .map(|m0| {
            (0..li as usize)
                .map(|r0| specialize(&gaussian_binomial(m0, r0), &q))
                .collect()
        })
        .collect();

    for m in 0..=m_max as i64 {
        let (m1, m0) = (m.div_euclid(li), m.rem_euclid(li));
        for r in 0..=m {
            let (r1, r0) = (r.div_euclid(li), r.rem_euclid(li));
            let exact = specialize(&gaussian_binomial(m, r as usize), &q);
            let c = binom(m1 as usize, r1).to_f64().unwrap();
            let factored = small[m0 as usize][r0 as usize]
                * (sign(m0 * r1 - m1 * r0 + (m1 + 1) * r1) as f64 * c);
            worst = worst.max((exact - factored).norm());
        }
    }

    for p in 0..=(m_max / l.get()) as i64 {
        // [lp]!/([l]!)^p telescopes into a product of [il choose l]
        let ratio = (1..=p).fold(LaurentPoly::one(), |acc, i| {
            &acc * &gaussian_binomial(i * li, l.get())
        });
        let factorial: f64 = (1..=p).map(|i| i as f64).product();
        let expected = sign(p * (p - 1) / 2) as f64 * factorial;
        worst = worst.max((specialize(&ratio, &q) - Complex64::new(expected, 0.0)).norm());
    }
    worst
}
