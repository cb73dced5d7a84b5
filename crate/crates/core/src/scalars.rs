//! Roots of unity, q-numbers and a concrete splitting field.
//!
//! Roots of unity are kept symbolic as `(order, exponent)` pairs. Full field
//! arithmetic is only needed for linear algebra (subspace spans and
//! symmetrizer ranks) and lives in [`SplittingField`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    BadCharacteristic(u32),
    #[error("root of unity of order {order} does not exist in characteristic {p}")]
    Collapse { order: u32, p: u32 },
    #[error("order {order} does not divide the conductor {conductor}")]
    NotInField { order: u32, conductor: u32 },
    #[error("cannot parse scalar literal `{0}`")]
    Parse(String),
    #[error("splitting field too large: {0} elements")]
    FieldTooLarge(u64),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Characteristic of the ground field: 0 or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic(u32);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    pub fn new(p: u32) -> Result<Self, ScalarError> {
        if p == 0 || is_prime(p) {
            Ok(Characteristic(p))
        } else {
            Err(ScalarError::BadCharacteristic(p))
        }
    }

    pub fn p(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Largest divisor of `n` coprime to the characteristic.
    pub fn coprime_part(self, mut n: u32) -> u32 {
        if self.0 > 0 {
            while n % self.0 == 0 {
                n /= self.0;
            }
        }
        n
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The root of unity `zeta_order^exponent`, stored gcd-reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u32,
    exp: u32,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exp: 0 };

    /// `zeta_d^k` reduced to lowest terms. No characteristic check.
    pub fn new(d: u32, k: i64) -> Self {
        assert!(d > 0, "root of unity needs a positive order");
        let k = k.rem_euclid(d as i64) as u32;
        let g = d.gcd(&k);
        RootOfUnity {
            order: d / g,
            exp: k / g,
        }
    }

    /// `zeta_d^k` in characteristic `ch`; rejects orders divisible by `p`.
    pub fn in_char(d: u32, k: i64, ch: Characteristic) -> Result<Self, ScalarError> {
        let q = Self::new(d, k);
        if q.valid_in(ch) {
            Ok(q)
        } else {
            Err(ScalarError::Collapse {
                order: q.order,
                p: ch.p(),
            })
        }
    }

    pub fn zeta(d: u32) -> Self {
        Self::new(d, 1)
    }

    /// The scalar `-1` of the field; equals `1` in characteristic 2.
    pub fn minus_one(ch: Characteristic) -> Self {
        if ch.p() == 2 {
            Self::ONE
        } else {
            RootOfUnity { order: 2, exp: 1 }
        }
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_one(self) -> bool {
        self.order == 1
    }

    pub fn valid_in(self, ch: Characteristic) -> bool {
        ch.p() == 0 || self.order % ch.p() != 0
    }

    pub fn mul(self, other: Self) -> Self {
        let l = self.order.lcm(&other.order);
        let k = self.exp as i64 * (l / self.order) as i64 + other.exp as i64 * (l / other.order) as i64;
        Self::new(l, k)
    }

    pub fn inv(self) -> Self {
        Self::new(self.order, -(self.exp as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        Self::new(self.order, (self.exp as i64 * e.rem_euclid(self.order as i64)) % self.order as i64)
    }

    pub fn div(self, other: Self) -> Self {
        self.mul(other.inv())
    }

    pub fn neg(self, ch: Characteristic) -> Self {
        self.mul(Self::minus_one(ch))
    }

    pub fn product<I: IntoIterator<Item = RootOfUnity>>(it: I) -> Self {
        it.into_iter().fold(Self::ONE, |a, b| a.mul(b))
    }

    /// Parses `1`, `-1`, `zeta(n,k)` or `-zeta(n,k)` in characteristic `ch`.
    pub fn parse(s: &str, ch: Characteristic) -> Result<Self, ScalarError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ScalarError::Parse(s.to_string());
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.as_str()),
        };
        let q = if body == "1" {
            Self::ONE
        } else if let Some(inner) = body.strip_prefix("zeta(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = inner.split(',');
            let n: u32 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            let k: i64 = parts.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            if parts.next().is_some() || n == 0 {
                return Err(err());
            }
            Self::in_char(n, k, ch)?
        } else {
            return Err(err());
        };
        let q = if neg { q.neg(ch) } else { q };
        if q.valid_in(ch) {
            Ok(q)
        } else {
            Err(ScalarError::Collapse { order: q.order, p: ch.p() })
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (d, k) => write!(f, "zeta({},{})", d, k),
        }
    }
}

impl FromStr for RootOfUnity {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, Characteristic::ZERO)
    }
}

/// Whether `(m)_q = 1 + q + ... + q^(m-1)` vanishes. `(0)_q = 0`.
pub fn q_number(m: u32, q: RootOfUnity, ch: Characteristic) -> bool {
    if m == 0 {
        return true;
    }
    if !q.is_one() {
        m % q.order() == 0
    } else {
        ch.p() > 0 && m % ch.p() == 0
    }
}

/// Whether `(i)_q != 0` for all `1 <= i <= m`.
pub fn q_factorial_nonzero(m: u32, q: RootOfUnity, ch: Characteristic) -> bool {
    (1..=m).all(|i| !q_number(i, q, ch))
}

/// Smallest `n >= 1` with `(n)_q = 0`; `None` stands for infinity.
pub fn height(q: RootOfUnity, ch: Characteristic) -> Option<u32> {
    if !q.is_one() {
        Some(q.order())
    } else if ch.p() > 0 {
        Some(ch.p())
    } else {
        None
    }
}

/// Element of a [`SplittingField`]. Cyclotomic elements carry the
/// coefficients of a reduced polynomial in `zeta_M`; finite-field elements
/// are base-`p` encoded coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Cyc(Vec<BigRational>),
    Fin(u32),
}

#[derive(Debug, Clone)]
enum Repr {
    Cyclotomic {
        m: u32,
        modulus: Vec<BigInt>,
        powers: Vec<FieldElement>,
    },
    Finite {
        p: u32,
        k: u32,
        q: u32,
        modulus: Vec<u32>,
        exp: Vec<u32>,
        log: Vec<u32>,
    },
}

/// A field of characteristic `ch` containing all roots of unity whose order
/// divides the conductor.
#[derive(Debug, Clone)]
pub struct SplittingField {
    ch: Characteristic,
    conductor: u32,
    repr: Repr,
}

const MAX_FINITE_FIELD: u64 = 1 << 20;

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = div_exact_int(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / lead;
        for j in 0..=db {
            rem[i + j] -= &c * &b[j];
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn poly_rem_mod_p(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    let inv_lead = mod_inv(f[df], p);
    while r.len() > df {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * inv_lead % p;
            let off = r.len() - 1 - df;
            for j in 0..=df {
                r[off + j] = (r[off + j] + p - c * f[j] % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn multiplicative_order_mod(p: u32, n: u32) -> u32 {
    if n == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = p % n;
    while x != 1 {
        x = x * p % n;
        k += 1;
    }
    k
}

impl SplittingField {
    /// Field containing the `conductor`-th roots of unity. In characteristic
    /// `p` only the part of the conductor coprime to `p` matters.
    pub fn new(ch: Characteristic, conductor: u32) -> Result<Self, ScalarError> {
        let conductor = conductor.max(1);
        if ch.is_zero() {
            let m = conductor.lcm(&2);
            let modulus = cyclotomic_polynomial(m);
            let deg = modulus.len() - 1;
            let mut field = SplittingField {
                ch,
                conductor,
                repr: Repr::Cyclotomic {
                    m,
                    modulus,
                    powers: Vec::new(),
                },
            };
            let mut powers = Vec::with_capacity(m as usize);
            for j in 0..m as usize {
                let mut coeffs = vec![BigInt::zero(); j + 1];
                coeffs[j] = BigInt::one();
                powers.push(field.reduce_int(coeffs, deg));
            }
            if let Repr::Cyclotomic { powers: pw, .. } = &mut field.repr {
                *pw = powers;
            }
            Ok(field)
        } else {
            let p = ch.p();
            let n = ch.coprime_part(conductor);
            let k = multiplicative_order_mod(p, n);
            let q64 = (p as u64).pow(k);
            if q64 > MAX_FINITE_FIELD {
                return Err(ScalarError::FieldTooLarge(q64));
            }
            let q = q64 as u32;
            let phi: Vec<u32> = cyclotomic_polynomial(n)
                .iter()
                .map(|c| {
                    let r = c % BigInt::from(p);
                    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                    r.try_into().unwrap()
                })
                .collect();
            let modulus = Self::first_factor(&phi, p, k);
            let mut field = SplittingField {
                ch,
                conductor,
                repr: Repr::Finite {
                    p,
                    k,
                    q,
                    modulus,
                    exp: Vec::new(),
                    log: Vec::new(),
                },
            };
            field.build_tables();
            Ok(field)
        }
    }

    /// Lexicographically first monic degree-`k` divisor of `phi` mod `p`,
    /// ordering candidates by `(c_{k-1}, ..., c_0)`.
    fn first_factor(phi: &[u32], p: u32, k: u32) -> Vec<u32> {
        let total = (p as u64).pow(k);
        for idx in 0..total {
            // idx in base p, most significant digit = c_{k-1}.
            let mut f = vec![0u32; k as usize + 1];
            f[k as usize] = 1;
            let mut x = idx;
            for i in 0..k as usize {
                f[i] = (x % p as u64) as u32;
                x /= p as u64;
            }
            if poly_rem_mod_p(phi, &f, p).iter().all(|&c| c == 0) {
                return f;
            }
        }
        unreachable!("cyclotomic polynomial has a factor of degree ord_n(p)")
    }

    fn build_tables(&mut self) {
        let (p, k, q, modulus) = match &self.repr {
            Repr::Finite { p, k, q, modulus, .. } => (*p, *k, *q, modulus.clone()),
            _ => unreachable!(),
        };
        let decode = |x: u32| -> Vec<u32> {
            let mut v = vec![0u32; k as usize];
            let mut y = x;
            for c in v.iter_mut() {
                *c = y % p;
                y /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let polymul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut r = vec![0u32; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem_mod_p(&r, &modulus, p);
            r.resize(k as usize, 0);
            r
        };
        for g in 1..q {
            let gv = decode(g);
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut cur = decode(1);
            loop {
                exp.push(encode(&cur));
                cur = polymul(&cur, &gv);
                if encode(&cur) == 1 {
                    break;
                }
                if exp.len() >= q as usize - 1 {
                    break;
                }
            }
            if exp.len() == q as usize - 1 && encode(&cur) == 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                if let Repr::Finite { exp: e, log: l, .. } = &mut self.repr {
                    *e = exp;
                    *l = log;
                }
                return;
            }
        }
        unreachable!("finite field has a primitive element")
    }

    fn reduce_int(&self, mut coeffs: Vec<BigInt>, deg: usize) -> FieldElement {
        if let Repr::Cyclotomic { modulus, .. } = &self.repr {
            while coeffs.len() > deg {
                let top = coeffs.pop().unwrap();
                if !top.is_zero() {
                    let off = coeffs.len() - deg;
                    for j in 0..deg {
                        coeffs[off + j] -= &top * &modulus[j];
                    }
                }
            }
            coeffs.resize(deg, BigInt::zero());
            FieldElement::Cyc(coeffs.into_iter().map(BigRational::from_integer).collect())
        } else {
            unreachable!()
        }
    }

    pub fn characteristic(&self) -> Characteristic {
        self.ch
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Number of elements for finite fields, `None` in characteristic 0.
    pub fn size(&self) -> Option<u32> {
        match &self.repr {
            Repr::Finite { q, .. } => Some(*q),
            Repr::Cyclotomic { .. } => None,
        }
    }

    /// Monic defining polynomial mod p (lowest coefficient first), finite case.
    pub fn finite_modulus(&self) -> Option<&[u32]> {
        match &self.repr {
            Repr::Finite { modulus, .. } => Some(modulus),
            Repr::Cyclotomic { .. } => None,
        }
    }

    fn degree(&self) -> usize {
        match &self.repr {
            Repr::Cyclotomic { modulus, .. } => modulus.len() - 1,
            Repr::Finite { k, .. } => *k as usize,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match &self.repr {
            Repr::Cyclotomic { .. } => FieldElement::Cyc(vec![BigRational::zero(); self.degree()]),
            Repr::Finite { .. } => FieldElement::Fin(0),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        match &self.repr {
            Repr::Cyclotomic { .. } => {
                let mut v = vec![BigRational::zero(); self.degree()];
                v[0] = BigRational::from_integer(BigInt::from(n));
                FieldElement::Cyc(v)
            }
            Repr::Finite { p, .. } => FieldElement::Fin(n.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Cyc(v) => v.iter().all(|c| c.is_zero()),
            FieldElement::Fin(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        *a == self.one()
    }

    /// The image of a root of unity whose order divides the conductor.
    pub fn embed(&self, r: RootOfUnity) -> Result<FieldElement, ScalarError> {
        let not_in = || ScalarError::NotInField {
            order: r.order(),
            conductor: self.conductor,
        };
        if !r.valid_in(self.ch) {
            return Err(ScalarError::Collapse {
                order: r.order(),
                p: self.ch.p(),
            });
        }
        match &self.repr {
            Repr::Cyclotomic { m, powers, .. } => {
                if m % r.order() != 0 || (self.conductor.lcm(&2) % r.order()) != 0 {
                    return Err(not_in());
                }
                Ok(powers[(r.exponent() * (m / r.order())) as usize].clone())
            }
            Repr::Finite { q, exp, .. } => {
                if (q - 1) % r.order() != 0 {
                    return Err(not_in());
                }
                Ok(FieldElement::Fin(exp[(r.exponent() * ((q - 1) / r.order())) as usize]))
            }
        }
    }

    /// Inverse of [`SplittingField::embed`] on roots of unity.
    pub fn discrete_log(&self, a: &FieldElement) -> Option<RootOfUnity> {
        match (&self.repr, a) {
            (Repr::Cyclotomic { m, powers, .. }, FieldElement::Cyc(_)) => powers
                .iter()
                .position(|x| x == a)
                .map(|j| RootOfUnity::new(*m, j as i64)),
            (Repr::Finite { q, log, .. }, FieldElement::Fin(x)) => {
                if *x == 0 {
                    None
                } else {
                    Some(RootOfUnity::new(q - 1, log[*x as usize] as i64))
                }
            }
            _ => None,
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Cyc(x), FieldElement::Cyc(y)) => {
                FieldElement::Cyc(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            (FieldElement::Fin(x), FieldElement::Fin(y)) => FieldElement::Fin(self.fin_add(*x, *y, false)),
            _ => panic!("mixed field elements"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Cyc(x), FieldElement::Cyc(y)) => {
                FieldElement::Cyc(x.iter().zip(y).map(|(u, v)| u - v).collect())
            }
            (FieldElement::Fin(x), FieldElement::Fin(y)) => FieldElement::Fin(self.fin_add(*x, *y, true)),
            _ => panic!("mixed field elements"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), a)
    }

    fn fin_add(&self, mut x: u32, mut y: u32, subtract: bool) -> u32 {
        let (p, k) = match &self.repr {
            Repr::Finite { p, k, .. } => (*p, *k),
            _ => unreachable!(),
        };
        if p == 2 {
            return x ^ y;
        }
        let mut r = 0u32;
        let mut place = 1u32;
        for _ in 0..k {
            let (a, b) = (x % p, y % p);
            let c = if subtract { (a + p - b) % p } else { (a + b) % p };
            r += c * place;
            place *= p;
            x /= p;
            y /= p;
        }
        r
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Cyc(x), FieldElement::Cyc(y)) => {
                let deg = x.len();
                let xz = x.iter().all(|c| c.is_zero());
                if xz || y.iter().all(|c| c.is_zero()) {
                    return self.zero();
                }
                let mut prod = vec![BigRational::zero(); 2 * deg - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        prod[i + j] += u * v;
                    }
                }
                FieldElement::Cyc(self.reduce_rat(prod))
            }
            (FieldElement::Fin(x), FieldElement::Fin(y)) => {
                if *x == 0 || *y == 0 {
                    return FieldElement::Fin(0);
                }
                match &self.repr {
                    Repr::Finite { q, exp, log, .. } => {
                        let e = (log[*x as usize] as u64 + log[*y as usize] as u64) % (*q as u64 - 1);
                        FieldElement::Fin(exp[e as usize])
                    }
                    _ => unreachable!(),
                }
            }
            _ => panic!("mixed field elements"),
        }
    }

    fn reduce_rat(&self, mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
        let (modulus, deg) = match &self.repr {
            Repr::Cyclotomic { modulus, .. } => (modulus, modulus.len() - 1),
            _ => unreachable!(),
        };
        while coeffs.len() > deg {
            let top = coeffs.pop().unwrap();
            if !top.is_zero() {
                let off = coeffs.len() - deg;
                for j in 0..deg {
                    if !modulus[j].is_zero() {
                        coeffs[off + j] -= &top * BigRational::from_integer(modulus[j].clone());
                    }
                }
            }
        }
        coeffs.resize(deg, BigRational::zero());
        coeffs
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        match (a, &self.repr) {
            (FieldElement::Fin(x), Repr::Finite { q, exp, log, .. }) => {
                let e = (*q - 1 - log[*x as usize]) % (*q - 1);
                Some(FieldElement::Fin(exp[e as usize]))
            }
            (FieldElement::Cyc(x), Repr::Cyclotomic { modulus, .. }) => {
                let m: Vec<BigRational> = modulus.iter().cloned().map(BigRational::from_integer).collect();
                let inv = rat_poly_inverse(x, &m);
                Some(FieldElement::Cyc(self.reduce_rat(inv)))
            }
            _ => panic!("mixed field elements"),
        }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &c * &b[j];
                r[i + j] -= t;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut r = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        r[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        r[i] -= y;
    }
    trim(&mut r);
    r
}

/// Inverse of `a` modulo the irreducible `m` via the extended Euclidean algorithm.
fn rat_poly_inverse(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut t0, mut t1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = rat_poly_divmod(&r0, &r1);
        let t2 = rat_poly_sub(&t0, &rat_poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is a nonzero constant.
    let c = r0[0].clone();
    t0.iter().map(|x| x / &c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(p: u32) -> Characteristic {
        Characteristic::new(p).unwrap()
    }

    #[test]
    fn reduced_storage() {
        assert_eq!(RootOfUnity::new(12, 4), RootOfUnity::new(3, 1));
        assert_eq!(RootOfUnity::new(6, 0), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::new(4, -1), RootOfUnity::new(4, 3));
    }

    #[test]
    fn char_p_collapse_is_an_error() {
        assert!(RootOfUnity::in_char(6, 1, ch(3)).is_err());
        assert!(RootOfUnity::in_char(6, 2, ch(3)).is_err());
        assert_eq!(RootOfUnity::in_char(6, 3, ch(3)).unwrap(), RootOfUnity::new(2, 1));
        assert_eq!(RootOfUnity::minus_one(ch(2)), RootOfUnity::ONE);
    }

    #[test]
    fn q_number_examples() {
        let z6 = RootOfUnity::zeta(6);
        let m1 = RootOfUnity::minus_one(ch(0));
        assert!(q_number(3, z6.neg(ch(0)), ch(0)));
        assert!(q_number(2, m1, ch(0)));
        assert!(q_number(3, RootOfUnity::ONE, ch(3)));
        assert!(!q_number(3, m1, ch(0)));
        assert!(q_number(0, z6, ch(0)));
        assert!(!q_factorial_nonzero(2, m1, ch(0)));
        assert!(q_factorial_nonzero(1, z6, ch(0)));
        assert!(q_factorial_nonzero(5, z6, ch(0)));
    }

    #[test]
    fn heights() {
        assert_eq!(height(RootOfUnity::minus_one(ch(0)), ch(0)), Some(2));
        assert_eq!(height(RootOfUnity::ONE, ch(3)), Some(3));
        assert_eq!(height(RootOfUnity::zeta(6), ch(0)), Some(6));
        assert_eq!(height(RootOfUnity::ONE, ch(0)), None);
    }

    #[test]
    fn parse_literals() {
        assert_eq!(RootOfUnity::parse("-1", ch(0)).unwrap(), RootOfUnity::new(2, 1));
        assert_eq!(RootOfUnity::parse("-1", ch(2)).unwrap(), RootOfUnity::ONE);
        assert_eq!(RootOfUnity::parse("zeta(6, 5)", ch(0)).unwrap(), RootOfUnity::new(6, 5));
        assert_eq!(RootOfUnity::parse("-zeta(3,1)", ch(0)).unwrap(), RootOfUnity::new(6, 5));
        assert!(RootOfUnity::parse("zeta(6,1)", ch(2)).is_err());
        assert!(RootOfUnity::parse("2", ch(0)).is_err());
        for s in ["1", "-1", "zeta(12,5)"] {
            assert_eq!(RootOfUnity::parse(s, ch(0)).unwrap().to_string(), s);
        }
    }

    #[test]
    fn embed_basics() {
        let f = SplittingField::new(ch(0), 2).unwrap();
        assert_eq!(f.embed(RootOfUnity::ONE).unwrap(), f.one());
        assert_eq!(f.embed(RootOfUnity::minus_one(ch(0))).unwrap(), f.from_int(-1));
        let f2 = SplittingField::new(ch(2), 3).unwrap();
        assert_eq!(f2.finite_modulus().unwrap(), &[1, 1, 1]);
        let z = f2.embed(RootOfUnity::zeta(3)).unwrap();
        let val = f2.add(&f2.add(&f2.mul(&z, &z), &z), &f2.one());
        assert!(f2.is_zero(&val));
        assert!(!f2.is_one(&z));
        assert!(f2.embed(RootOfUnity::zeta(4)).is_err());
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn inverses() {
        for p in [0, 2, 3, 5] {
            let f = SplittingField::new(ch(p), 12).unwrap();
            let z = f.embed(RootOfUnity::in_char(ch(p).coprime_part(12), 1, ch(p)).unwrap()).unwrap();
            let a = f.add(&z, &f.from_int(2));
            if f.is_zero(&a) {
                continue;
            }
            let b = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &b)), "char {p}");
        }
    }
}
