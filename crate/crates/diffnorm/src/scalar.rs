//! Coefficient fields for differential polynomials.
//!
//! Everything generic in this crate is parameterized by [`DiffField`], a field
//! equipped with a derivation. Three implementations are provided:
//!
//! * [`num::BigRational`] — exact rationals with the zero derivation (the
//!   constant base field),
//! * [`RatT`] — rational functions in `t` over the rationals, with `t' = 1`
//!   (time mode),
//! * [`C64`] — complex doubles carrying a zero tolerance, for the float
//!   fallback when exact root finding fails.
//!
//! [`RootField`] extends the trait with univariate root extraction, which is
//! the only place the exact and float backends genuinely differ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, BigUint, Integer, Signed, ToPrimitive};
use num_traits::{One, Zero};

/// A field with a derivation, suitable as the coefficient domain of a
/// differential polynomial ring.
///
/// The derivation is zero on constant fields; `RatT` carries `d/dt`. The
/// `display_*` hooks let the polynomial formatter produce text that reparses.
pub trait DiffField:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    /// Derivation on the base field.
    fn derive(&self) -> Self;

    fn from_int(n: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// Multiplicative inverse; `None` exactly for zero.
    fn try_inverse(&self) -> Option<Self>;

    /// Whether formatting should pull out a leading minus sign.
    fn display_negative(&self) -> bool;

    /// Whether `Display` output must be parenthesized inside a product.
    fn display_needs_parens(&self) -> bool {
        false
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// `n!` as a field element.
pub fn factorial<K: DiffField>(n: u32) -> K {
    let mut acc = K::one();
    for k in 2..=n {
        acc = acc * K::from_int(i64::from(k));
    }
    acc
}

impl DiffField for BigRational {
    fn derive(&self) -> Self {
        BigRational::zero()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn display_negative(&self) -> bool {
        self.is_negative()
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials in t over Q.
// ---------------------------------------------------------------------------

/// Dense univariate polynomial in `t` with rational coefficients.
///
/// Coefficients are stored lowest degree first with no trailing zeros; the
/// zero polynomial is the empty vector. Used both as the numerator/denominator
/// of [`RatT`] and as the shift polynomials `s_i(t)` returned by the
/// polynomial-shift search.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TPoly {
    coeffs: Vec<BigRational>,
}

impl TPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn zero() -> Self {
        TPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        TPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        TPoly::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        TPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_int(n: i64) -> Self {
        TPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        TPoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return TPoly::zero();
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Formal derivative with respect to `t`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return TPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * BigRational::from_integer(BigInt::from(k)));
        }
        TPoly::new(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "TPoly division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        // `rem` carries no trailing zeros, so its last entry is nonzero and
        // each pass cancels it exactly.
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lead;
            for (j, c) in d.coeffs.iter().enumerate() {
                let v = &q * c;
                rem[k + j] -= v;
            }
            quo[k] = q;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (TPoly::new(quo), TPoly::new(rem))
    }

    /// Monic gcd via the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scaled so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => TPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = if c.is_negative() { -c } else { c.clone() };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Rational functions in t.
// ---------------------------------------------------------------------------

/// Rational function in `t` over the rationals, the time-mode base field.
///
/// Kept reduced (coprime numerator/denominator) with a monic denominator; the
/// derivation is `d/dt`, so `t' = 1` holds by construction.
#[derive(Clone, PartialEq, Debug)]
pub struct RatT {
    num: TPoly,
    den: TPoly,
}

impl RatT {
    pub fn new(num: TPoly, den: TPoly) -> Self {
        assert!(!den.is_zero(), "RatT with zero denominator");
        if num.is_zero() {
            return RatT {
                num: TPoly::zero(),
                den: TPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip();
        RatT {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_tpoly(p: TPoly) -> Self {
        RatT {
            num: p,
            den: TPoly::one(),
        }
    }

    /// The element `t`.
    pub fn t() -> Self {
        RatT::from_tpoly(TPoly::t())
    }

    pub fn numerator(&self) -> &TPoly {
        &self.num
    }

    pub fn denominator(&self) -> &TPoly {
        &self.den
    }

    /// `Some` when the denominator is trivial.
    pub fn as_tpoly(&self) -> Option<&TPoly> {
        self.den.is_one().then_some(&self.num)
    }
}

impl Add for RatT {
    type Output = RatT;
    fn add(self, rhs: RatT) -> RatT {
        RatT::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for RatT {
    type Output = RatT;
    fn sub(self, rhs: RatT) -> RatT {
        self + (-rhs)
    }
}

impl Mul for RatT {
    type Output = RatT;
    fn mul(self, rhs: RatT) -> RatT {
        RatT::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for RatT {
    type Output = RatT;
    fn div(self, rhs: RatT) -> RatT {
        assert!(!rhs.is_zero(), "RatT division by zero");
        RatT::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }
}

impl Neg for RatT {
    type Output = RatT;
    fn neg(self) -> RatT {
        RatT {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Zero for RatT {
    fn zero() -> Self {
        RatT {
            num: TPoly::zero(),
            den: TPoly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatT {
    fn one() -> Self {
        RatT {
            num: TPoly::one(),
            den: TPoly::one(),
        }
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl fmt::Display for RatT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl DiffField for RatT {
    fn derive(&self) -> Self {
        // Quotient rule; the constructor reduces the result.
        let n = self.num.derivative().mul(&self.den);
        let m = self.num.mul(&self.den.derivative());
        RatT::new(n.sub(&m), self.den.mul(&self.den))
    }

    fn from_int(n: i64) -> Self {
        RatT::from_tpoly(TPoly::from_int(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        RatT::from_tpoly(TPoly::constant(r.clone()))
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatT::new(self.den.clone(), self.num.clone()))
        }
    }

    fn display_negative(&self) -> bool {
        // Denominator is monic, so the numerator's leading coefficient decides.
        self.num.leading().is_some_and(Signed::is_negative)
    }

    fn display_needs_parens(&self) -> bool {
        !self.den.is_one() || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }
}

// ---------------------------------------------------------------------------
// Complex doubles with tolerance.
// ---------------------------------------------------------------------------

/// Default zero tolerance for [`C64`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Complex double carrying the zero tolerance used for comparisons.
///
/// Tolerances propagate through arithmetic as the max of the operands, so a
/// computation started at a configured tolerance keeps it without any global
/// state.
#[derive(Clone, Copy, Debug)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
    pub tol: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 {
            re,
            im,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(re: f64, im: f64, tol: f64) -> Self {
        C64 { re, im, tol }
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn from_rational_tol(r: &BigRational, tol: f64) -> Self {
        let re = r.numer().to_f64().unwrap_or(f64::INFINITY) / r.denom().to_f64().unwrap_or(1.0);
        C64::with_tol(re, 0.0, tol)
    }
}

impl Add for C64 {
    type Output = C64;
    fn add(self, o: C64) -> C64 {
        C64::with_tol(self.re + o.re, self.im + o.im, self.tol.max(o.tol))
    }
}

impl Sub for C64 {
    type Output = C64;
    fn sub(self, o: C64) -> C64 {
        C64::with_tol(self.re - o.re, self.im - o.im, self.tol.max(o.tol))
    }
}

impl Mul for C64 {
    type Output = C64;
    fn mul(self, o: C64) -> C64 {
        C64::with_tol(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
            self.tol.max(o.tol),
        )
    }
}

impl Div for C64 {
    type Output = C64;
    fn div(self, o: C64) -> C64 {
        // Smith's algorithm, to stay stable for wide magnitude ranges.
        let tol = self.tol.max(o.tol);
        if o.re.abs() >= o.im.abs() {
            let r = o.im / o.re;
            let d = o.re + o.im * r;
            C64::with_tol((self.re + self.im * r) / d, (self.im - self.re * r) / d, tol)
        } else {
            let r = o.re / o.im;
            let d = o.re * r + o.im;
            C64::with_tol((self.re * r + self.im) / d, (self.im * r - self.re) / d, tol)
        }
    }
}

impl Neg for C64 {
    type Output = C64;
    fn neg(self) -> C64 {
        C64::with_tol(-self.re, -self.im, self.tol)
    }
}

impl PartialEq for C64 {
    fn eq(&self, other: &Self) -> bool {
        (*self - *other).norm() <= self.tol.max(other.tol)
    }
}

impl Zero for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() <= self.tol
    }
}

impl One for C64 {
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
}

impl fmt::Display for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{:?}", self.re)
        } else if self.im < 0.0 {
            write!(f, "{:?}-{:?}i", self.re, -self.im)
        } else {
            write!(f, "{:?}+{:?}i", self.re, self.im)
        }
    }
}

impl DiffField for C64 {
    fn derive(&self) -> Self {
        C64::with_tol(0.0, 0.0, self.tol)
    }

    fn from_int(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }

    fn from_rational(r: &BigRational) -> Self {
        C64::from_rational_tol(r, DEFAULT_TOL)
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(C64::one() / *self)
        }
    }

    fn display_negative(&self) -> bool {
        self.re < 0.0 || (self.re == 0.0 && self.im < 0.0)
    }

    fn display_needs_parens(&self) -> bool {
        self.im != 0.0
    }
}

// ---------------------------------------------------------------------------
// Root extraction.
// ---------------------------------------------------------------------------

/// Field with univariate root extraction, the backend-specific piece of the
/// series-extension step.
///
/// Roots come back sorted smallest-first by `(|r|, value)` so a fixed input
/// always selects the same root.
pub trait RootField: DiffField {
    /// Distinct roots of `c_0 + c_1 Y + ... + c_n Y^n` available in this
    /// field. The polynomial must not be identically zero.
    fn univariate_roots(coeffs: &[Self]) -> Vec<Self>;

    fn backend_name() -> &'static str;
}

impl RootField for BigRational {
    fn univariate_roots(coeffs: &[Self]) -> Vec<Self> {
        let mut cs: Vec<BigRational> = coeffs.to_vec();
        while cs.last().is_some_and(Zero::is_zero) {
            cs.pop();
        }
        if cs.len() <= 1 {
            return vec![];
        }
        let mut roots = Vec::new();
        // Factor out Y^k first: zero is a root iff the constant term vanishes.
        let k = cs.iter().take_while(|c| c.is_zero()).count();
        if k > 0 {
            roots.push(BigRational::zero());
            cs.drain(..k);
        }
        if cs.len() > 1 {
            // Clear denominators to an integer polynomial.
            let mut lcm = BigInt::one();
            for c in &cs {
                lcm = lcm.lcm(c.denom());
            }
            let ints: Vec<BigInt> = cs
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect();
            let a0 = ints.first().unwrap().magnitude().clone();
            let an = ints.last().unwrap().magnitude().clone();
            for p in divisors(&a0) {
                for q in divisors(&an) {
                    if p.gcd(&q) != BigUint::one() {
                        continue;
                    }
                    for sign in [1i64, -1] {
                        let cand = BigRational::new(
                            BigInt::from(p.clone()) * BigInt::from(sign),
                            BigInt::from(q.clone()),
                        );
                        if eval_rat(&ints, &cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort_by(|a, b| {
            a.abs()
                .cmp(&b.abs())
                .then_with(|| a.cmp(b))
        });
        roots
    }

    fn backend_name() -> &'static str {
        "exact"
    }
}

fn eval_rat(ints: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in ints.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// All positive divisors of `n` (n >= 1), via trial division plus Pollard rho.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    factorize(n.clone(), &mut factors);
    factors.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in factors {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in merged {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

fn factorize(mut n: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n <= BigUint::one() {
        return;
    }
    for small in 2u64..=4096 {
        let p = BigUint::from(small);
        if &p * &p > n {
            break;
        }
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push((n, 1));
        return;
    }
    let d = pollard_rho(&n);
    factorize(d.clone(), out);
    factorize(n / d, out);
}

fn is_probable_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        while d == one {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
        c += &one;
    }
}

impl RootField for C64 {
    fn univariate_roots(coeffs: &[Self]) -> Vec<Self> {
        let tol = coeffs.iter().map(|c| c.tol).fold(DEFAULT_TOL, f64::max);
        let mut cs: Vec<C64> = coeffs.to_vec();
        while cs.last().is_some_and(|c| c.is_zero()) {
            cs.pop();
        }
        if cs.len() <= 1 {
            return vec![];
        }
        // Monic normalization, then Durand-Kerner from the usual spiral of
        // start points.
        let lead = *cs.last().unwrap();
        let monic: Vec<C64> = cs.iter().map(|c| *c / lead).collect();
        let n = monic.len() - 1;
        let seed = C64::with_tol(0.4, 0.9, tol);
        let mut zs: Vec<C64> = (0..n)
            .map(|k| seed.pow_u32(k as u32 + 1))
            .collect();
        let eval = |z: C64| {
            let mut acc = C64::with_tol(0.0, 0.0, tol);
            for c in monic.iter().rev() {
                acc = acc * z + *c;
            }
            acc
        };
        for _ in 0..500 {
            let mut delta: f64 = 0.0;
            for k in 0..n {
                let mut denom = C64::with_tol(1.0, 0.0, tol);
                for j in 0..n {
                    if j != k {
                        denom = denom * (zs[k] - zs[j]);
                    }
                }
                if denom.norm() == 0.0 {
                    // Coincident iterates; nudge instead of dividing by zero.
                    zs[k] = zs[k] + C64::with_tol(1e-6, 1e-6, tol);
                    delta = f64::INFINITY;
                    continue;
                }
                let step = eval(zs[k]) / denom;
                zs[k] = zs[k] - step;
                delta = delta.max(step.norm());
            }
            if delta < tol * 1e-3 {
                break;
            }
        }
        let mut roots: Vec<C64> = Vec::new();
        for z in zs {
            if !roots.iter().any(|r| (*r - z).norm() <= tol.max(1e-12) * 10.0) {
                roots.push(z);
            }
        }
        // Magnitude ties must resolve by real part even when the computed
        // norms differ in the last few ulps (e.g. the pair ±√2), so compare
        // with the working tolerance before falling through.
        let fuzzy = |x: f64, y: f64| {
            if (x - y).abs() <= tol.max(1e-12) * 10.0 {
                std::cmp::Ordering::Equal
            } else {
                x.partial_cmp(&y).unwrap()
            }
        };
        roots.sort_by(|a, b| {
            fuzzy(a.norm(), b.norm())
                .then(fuzzy(a.re, b.re))
                .then(fuzzy(a.im, b.im))
        });
        roots
    }

    fn backend_name() -> &'static str {
        "float"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn tpoly_div_rem_and_gcd() {
        // (t^2 - 1) = (t - 1)(t + 1)
        let p = TPoly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]);
        let d = TPoly::new(vec![q(-1, 1), q(1, 1)]);
        let (quo, rem) = p.div_rem(&d);
        assert!(rem.is_zero());
        assert_eq!(quo, TPoly::new(vec![q(1, 1), q(1, 1)]));

        let a = p.mul(&TPoly::t());
        let g = a.gcd(&p);
        assert_eq!(g, p.monic());
    }

    #[test]
    fn ratt_reduces_and_derives() {
        // (t^2 - 1)/(t - 1) reduces to t + 1.
        let num = TPoly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]);
        let den = TPoly::new(vec![q(-1, 1), q(1, 1)]);
        let r = RatT::new(num, den);
        assert_eq!(r.as_tpoly(), Some(&TPoly::new(vec![q(1, 1), q(1, 1)])));

        // (1/t)' = -1/t^2
        let inv_t = RatT::new(TPoly::one(), TPoly::t());
        let d = inv_t.derive();
        assert_eq!(d.numerator(), &TPoly::from_int(-1));
        assert_eq!(d.denominator(), &TPoly::t().mul(&TPoly::t()));

        assert!(RatT::t().derive().is_one());
    }

    #[test]
    fn factorial_matches() {
        assert_eq!(factorial::<BigRational>(5), q(120, 1));
        assert_eq!(factorial::<BigRational>(0), q(1, 1));
    }

    #[test]
    fn rational_roots_basic() {
        // 6Y^2 - 5Y + 1 = (2Y - 1)(3Y - 1): roots 1/2, 1/3.
        let roots =
            BigRational::univariate_roots(&[q(1, 1), q(-5, 1), q(6, 1)]);
        assert_eq!(roots, vec![q(1, 3), q(1, 2)]);

        // Y^2 - 2: no rational roots.
        assert!(BigRational::univariate_roots(&[q(-2, 1), q(0, 1), q(1, 1)]).is_empty());

        // Y^3 + Y^2: roots 0 and -1, sorted by magnitude.
        let roots =
            BigRational::univariate_roots(&[q(0, 1), q(0, 1), q(1, 1), q(1, 1)]);
        assert_eq!(roots, vec![q(0, 1), q(-1, 1)]);
    }

    #[test]
    fn rational_roots_sort_negative_first_on_ties() {
        // Y^2 - 4: roots -2 and 2; same magnitude, the negative one leads.
        let roots = BigRational::univariate_roots(&[q(-4, 1), q(0, 1), q(1, 1)]);
        assert_eq!(roots, vec![q(-2, 1), q(2, 1)]);
    }

    #[test]
    fn complex_roots_of_unity() {
        // Y^2 + 1 = 0: roots ±i, sorted by (|.|, re, im) so -i first.
        let roots = C64::univariate_roots(&[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ]);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - C64::new(0.0, -1.0)).norm() < 1e-7);
        assert!((roots[1] - C64::new(0.0, 1.0)).norm() < 1e-7);
    }

    #[test]
    fn big_factor_roots() {
        // (Y - 1009)(Y + 10007): factor enumeration has to satisfy p | a0
        // with a0 a product of two primes past the small-prime table.
        let roots = BigRational::univariate_roots(&[
            q(-1009i64 * 10007, 1),
            q(10007 - 1009, 1),
            q(1, 1),
        ]);
        assert!(roots.contains(&q(1009, 1)));
        assert!(roots.contains(&q(-10007, 1)));
    }

    #[test]
    fn c64_display_is_compact() {
        assert_eq!(C64::new(1.5, 0.0).to_string(), "1.5");
        assert_eq!(C64::new(0.5, -2.0).to_string(), "0.5-2.0i");
    }
}
