use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order we are willing to tabulate.
pub const FIELD_CAP: u64 = 1 << 20;

/// Fields up to this order get a full addition table.
const ADD_TABLE_MAX: u32 = 1024;

/// A field element, stored as the integer code `c0 + c1*p + ... + c(a-1)*p^(a-1)`
/// of its coefficient list in the polynomial model.
///
/// The derived ordering (ascending code) is the deterministic order used for
/// every search over field elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldData {
    p: u32,
    a: u32,
    q: u32,
    /// Monic modulus, little-endian, length a+1.
    modulus: Vec<u32>,
    alpha: Fe,
    /// exp[k] = alpha^k for 0 <= k < q-1.
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// GF(p^a) with a fixed modulus and primitive element.
///
/// Cloning is cheap; the tables live behind an `Arc`.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.a == other.0.a)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.a)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Slow polynomial arithmetic on coefficient vectors; only used while building tables.

fn digits(code: u32, p: u32, a: u32) -> Vec<u32> {
    let mut c = code;
    (0..a)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn poly_mulmod(x: &[u32], y: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let a = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * a];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p as u64;
        }
    }
    for deg in (a..2 * a).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for k in 0..a {
            let sub = c * modulus[k] as u64 % p as u64;
            let idx = deg - a + k;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
    }
    prod[..a].iter().map(|&c| c as u32).collect()
}

fn poly_powmod(x: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let a = modulus.len() - 1;
    let mut result = vec![0u32; a];
    result[0] = 1;
    let mut base = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

/// Remainder of `num` modulo the monic polynomial `den` (both little-endian).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (k, &dk) in den.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + p - (lead * dk) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility by trial division against every monic polynomial of degree <= a/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let a = poly.len() - 1;
    if a <= 1 {
        return a == 1;
    }
    for d in 1..=a / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = digits(code as u32, p, d as u32);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^a) deterministically: the modulus is the monic irreducible with the
    /// smallest code among the non-leading coefficients, alpha the smallest element of
    /// full multiplicative order.
    pub fn new(p: u32, a: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::Input("field degree must be positive".into()));
        }
        let q64 = (p as u64).checked_pow(a).unwrap_or(u64::MAX);
        if q64 > FIELD_CAP {
            return Err(Error::FieldTooLarge { p, a });
        }
        let q = q64 as u32;

        let modulus = if a == 1 {
            // prime field: x - 0, reduction never triggers
            vec![0, 1]
        } else {
            let mut found = None;
            for code in 0..q {
                let mut m = digits(code, p, a);
                m.push(1);
                if m[0] != 0 && is_irreducible(&m, p) {
                    found = Some(m);
                    break;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let mut alpha = None;
        for code in 1..q {
            let x = if a == 1 { vec![code] } else { digits(code, p, a) };
            let one_like = |v: &Vec<u32>| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
            let pw = |e: u64| {
                if a == 1 {
                    vec![mod_pow(code as u64, e, p as u64) as u32]
                } else {
                    poly_powmod(&x, e, &modulus, p)
                }
            };
            if factors.iter().all(|&r| !one_like(&pw(order / r))) {
                alpha = Some(code);
                break;
            }
        }
        let alpha = alpha.unwrap_or(1);

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        let alpha_d = digits(alpha, p, a);
        for k in 0..order as u32 {
            exp.push(cur);
            log[cur as usize] = k;
            cur = if a == 1 {
                ((cur as u64 * alpha as u64) % p as u64) as u32
            } else {
                undigits(&poly_mulmod(&digits(cur, p, a), &alpha_d, &modulus, p), p)
            };
        }

        let add_digits = |x: u32, y: u32| -> u32 {
            let (mut x, mut y) = (x, y);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..a {
                out += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place = place.wrapping_mul(p);
            }
            out
        };
        let neg: Vec<u32> = (0..q)
            .map(|x| {
                let ds: Vec<u32> = digits(x, p, a).into_iter().map(|d| (p - d) % p).collect();
                undigits(&ds, p)
            })
            .collect();
        let add = if q <= ADD_TABLE_MAX {
            let mut t = Vec::with_capacity((q * q) as usize);
            for x in 0..q {
                for y in 0..q {
                    t.push(add_digits(x, y));
                }
            }
            Some(t)
        } else {
            None
        };

        Ok(Field(Arc::new(FieldData { p, a, q, modulus, alpha: Fe(alpha), exp, log, add, neg })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.a
    }

    /// Number of elements p^a.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn alpha(&self) -> Fe {
        self.0.alpha
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() != self.0.a as usize {
            return Err(Error::Input(format!(
                "expected {} coefficients, got {}",
                self.0.a,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::Input(format!("coefficient {c} out of range mod {}", self.0.p)));
        }
        Ok(Fe(undigits(coeffs, self.0.p)))
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        digits(x.0, self.0.p, self.0.a)
    }

    pub fn contains(&self, x: Fe) -> bool {
        x.0 < self.0.q
    }

    #[inline]
    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let d = &self.0;
        if let Some(t) = &d.add {
            return Fe(t[(x.0 * d.q + y.0) as usize]);
        }
        if d.a == 1 {
            return Fe((x.0 + y.0) % d.p);
        }
        let (mut xx, mut yy) = (x.0, y.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..d.a {
            out += ((xx % d.p + yy % d.p) % d.p) * place;
            xx /= d.p;
            yy /= d.p;
            place *= d.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, x: Fe) -> Fe {
        Fe(self.0.neg[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.0 == 0 || y.0 == 0 {
            return Fe::ZERO;
        }
        let d = &self.0;
        let m = d.q - 1;
        let k = (d.log[x.0 as usize] + d.log[y.0 as usize]) % m;
        Fe(d.exp[k as usize])
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let d = &self.0;
        let m = d.q - 1;
        Ok(Fe(d.exp[((m - d.log[x.0 as usize]) % m) as usize]))
    }

    /// Integer power; negative exponents invert (zero to a negative power is an error).
    pub fn pow(&self, x: Fe, e: i64) -> Result<Fe> {
        if x.0 == 0 {
            return match e {
                0 => Ok(Fe::ONE),
                e if e > 0 => Ok(Fe::ZERO),
                _ => Err(Error::ZeroInverse),
            };
        }
        let m = (self.0.q - 1) as i64;
        let k = (self.0.log[x.0 as usize] as i64 * e.rem_euclid(m)).rem_euclid(m);
        Ok(Fe(self.0.exp[k as usize]))
    }

    /// alpha^k for any integer k.
    pub fn alpha_pow(&self, k: i64) -> Fe {
        let m = (self.0.q - 1) as i64;
        Fe(self.0.exp[k.rem_euclid(m) as usize])
    }

    /// Discrete log to base alpha of a nonzero element.
    pub fn log(&self, x: Fe) -> Option<u32> {
        (x.0 != 0).then(|| self.0.log[x.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: Fe) -> Option<u64> {
        let l = self.log(x)? as u64;
        let m = (self.0.q - 1) as u64;
        Some(m / gcd(l, m))
    }

    pub fn is_square(&self, x: Fe) -> bool {
        match self.log(x) {
            None => true,
            Some(l) => self.0.p == 2 || l % 2 == 0,
        }
    }

    /// Elements of the prime subfield GF(p).
    pub fn prime_subfield(&self) -> Vec<Fe> {
        (0..self.0.p).map(Fe).collect()
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Arithmetic operations exposed through [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Neg,
    Pow(i64),
}

/// A field element that remembers its field; arithmetic is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl FieldElement {
    pub fn new(field: &Field, value: Fe) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::Input(format!("{} is not an element of {:?}", value.0, field)));
        }
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Self> {
        Ok(FieldElement { field: field.clone(), value: field.from_coeffs(coeffs)? })
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self { field: self.field.clone(), value: self.field.add(self.value, other.value) })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self { field: self.field.clone(), value: self.field.mul(self.value, other.value) })
    }

    pub fn neg(&self) -> Self {
        Self { field: self.field.clone(), value: self.field.neg(self.value) }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self { field: self.field.clone(), value: self.field.inv(self.value)? })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(Self { field: self.field.clone(), value: self.field.pow(self.value, e)? })
    }
}

/// Applies `op` to `operands`: binary for add/mul, unary otherwise.
pub fn arith(op: ArithOp, operands: &[FieldElement]) -> Result<FieldElement> {
    let arity = match op {
        ArithOp::Add | ArithOp::Mul => 2,
        _ => 1,
    };
    if operands.len() != arity {
        return Err(Error::Input(format!("{op:?} takes {arity} operand(s)")));
    }
    match op {
        ArithOp::Add => operands[0].add(&operands[1]),
        ArithOp::Mul => operands[0].mul(&operands[1]),
        ArithOp::Inv => operands[0].inv(),
        ArithOp::Neg => Ok(operands[0].neg()),
        ArithOp::Pow(e) => operands[0].pow(e),
    }
}

/// The automorphism t -> t^(p^d) of GF(p^a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldAut {
    field: Field,
    d: u32,
}

impl FieldAut {
    pub fn new(field: &Field, d: u32) -> Result<Self> {
        if d >= field.degree() {
            return Err(Error::Input(format!("automorphism exponent {d} must be < {}", field.degree())));
        }
        Ok(FieldAut { field: field.clone(), d })
    }

    pub fn exponent(&self) -> u32 {
        self.d
    }

    pub fn apply(&self, c: Fe) -> Fe {
        let e = (self.field.p() as u64).pow(self.d) as i64;
        self.field.pow(c, e).expect("nonnegative exponent")
    }

    pub fn fixed_subfield(&self) -> Vec<Fe> {
        self.field.elements().filter(|&c| self.apply(c) == c).collect()
    }

    pub fn compose(&self, other: &Self) -> Self {
        FieldAut { field: self.field.clone(), d: (self.d + other.d) % self.field.degree() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_and_generators() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.alpha(), Fe(2));
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.alpha(), Fe(2));
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.alpha(), Fe(3));
    }

    #[test]
    fn gf9_model() {
        let f = Field::new(3, 2).unwrap();
        // t^2 + 1 is the smallest monic irreducible quadratic over GF(3)
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.mult_order(f.alpha()), Some(8));
        assert_eq!(f.pow(f.alpha(), 8).unwrap(), Fe::ONE);
        // brute-force: alpha is the first element of order 8 in code order
        let first = (1..9)
            .map(Fe)
            .find(|&x| (1..=8).find(|&k| f.pow(x, k).unwrap() == Fe::ONE) == Some(8))
            .unwrap();
        assert_eq!(first, f.alpha());
    }

    #[test]
    fn small_arith() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.inv(Fe(3)).unwrap(), Fe(5));
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.pow(Fe(2), 4).unwrap(), Fe::ONE);
        assert_eq!(f5.inv(Fe::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(Field::new(9, 1).unwrap_err(), Error::NotPrime(9));
        assert!(matches!(Field::new(3, 13), Err(Error::FieldTooLarge { .. })));
        assert!(Field::new(0, 1).is_err());
    }

    #[test]
    fn checked_elements_reject_mixing() {
        let f5 = Field::new(5, 1).unwrap();
        let f7 = Field::new(7, 1).unwrap();
        let a = FieldElement::new(&f5, Fe(2)).unwrap();
        let b = FieldElement::new(&f7, Fe(2)).unwrap();
        assert_eq!(arith(ArithOp::Add, &[a.clone(), b]), Err(Error::MixedFields));
        assert_eq!(arith(ArithOp::Pow(4), &[a]).unwrap().value(), Fe::ONE);
    }

    #[test]
    fn frobenius() {
        let f = Field::new(3, 2).unwrap();
        let id = FieldAut::new(&f, 0).unwrap();
        assert!(f.elements().all(|c| id.apply(c) == c));
        let s = FieldAut::new(&f, 1).unwrap();
        assert_eq!(s.apply(f.alpha()), f.pow(f.alpha(), 3).unwrap());
        assert_eq!(s.fixed_subfield(), vec![Fe(0), Fe(1), Fe(2)]);
        assert_eq!(s.compose(&s), id);
    }

    #[test]
    fn serialization_coeffs() {
        let f = Field::new(5, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        }
        assert!(f.from_coeffs(&[5, 0]).is_err());
    }
}
