//! Table-driven arithmetic over small finite fields GF(p^k).
//!
//! Elements are stored as integers in `0..q` whose base-`p` digits are the
//! polynomial coefficients of the element, lowest degree first. The prime
//! subfield GF(p) is therefore exactly the range `0..p`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A field element, encoded as described in the module docs.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_ORDER: usize = 1024;

/// One fixed monic irreducible polynomial per `(p, k)` with `k >= 2` and
/// `p^k <= 1024`, coefficients lowest degree first. For each pair this is the
/// first irreducible polynomial when the lower coefficients are read as a
/// base-`p` integer.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (5, 3, &[1, 1, 0, 1]),
    (5, 4, &[2, 0, 0, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (7, 3, &[2, 0, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 2, &[2, 0, 1]),
    (17, 2, &[3, 0, 1]),
    (19, 2, &[1, 0, 1]),
    (23, 2, &[1, 0, 1]),
    (29, 2, &[2, 0, 1]),
    (31, 2, &[1, 0, 1]),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u32),
    #[error("field of order {p}^{k} exceeds the supported maximum {MAX_ORDER}")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("modulus {given:?} does not match the built-in modulus {builtin:?}")]
    ModulusMismatch { given: Vec<u32>, builtin: Vec<u32> },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("element {value} is outside GF({q})")]
    ElementOutOfRange { value: u32, q: usize },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field axiom violated: {0}")]
    AxiomViolated(String),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Serialized description of a field: `{"p":…, "k":…, "modulus":[c0,…,ck]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

/// GF(p^k) with precomputed addition, multiplication, negation and inverse tables.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for Field {}

// Polynomials over GF(p), lowest degree first, no trailing zeros.
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let lead_inv = mod_inv(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let factor = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - b.len();
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime and small: Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for deg in 1..=k / 2 {
        let count = (p as usize).pow(deg as u32);
        for v in 0..count {
            let mut divisor: Vec<u32> = (0..deg)
                .map(|i| ((v / (p as usize).pow(i as u32)) % p as usize) as u32)
                .collect();
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^k) from the built-in modulus for `(p, k)`.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::InvalidDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::FieldTooLarge { p, k });
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|(mp, mk, _)| *mp == p && *mk == k)
                .map(|(_, _, m)| m.to_vec())
                .expect("built-in modulus table covers every admissible (p, k)")
        };
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible(modulus));
        }
        Ok(Self::from_modulus(p, k, q as usize, modulus))
    }

    /// GF(q) for a prime power `q`.
    pub fn with_order(q: u32) -> Result<Self, FieldError> {
        let p = (2..=q.max(2)).find(|&p| q % p == 0).filter(|_| q >= 2).ok_or(FieldError::NotPrimePower(q))?;
        let mut k = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrimePower(q));
        }
        Self::new(p, k)
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Self, FieldError> {
        let f = Self::new(desc.p, desc.k)?;
        if f.modulus != desc.modulus {
            return Err(FieldError::ModulusMismatch {
                given: desc.modulus.clone(),
                builtin: f.modulus,
            });
        }
        Ok(f)
    }

    fn from_modulus(p: u32, k: u32, q: usize, modulus: Vec<u32>) -> Self {
        let ku = k as usize;
        let digits = |x: usize| -> Vec<u32> {
            (0..ku).map(|i| ((x / (p as usize).pow(i as u32)) % p as usize) as u32).collect()
        };
        let pack = |c: &[u32]| -> usize {
            c.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };
        let all_digits: Vec<Vec<u32>> = (0..q).map(digits).collect();

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let sum: Vec<u32> = all_digits[a]
                    .iter()
                    .zip(&all_digits[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = pack(&sum) as Elem;

                let mut prod = vec![0u32; 2 * ku];
                for (i, &x) in all_digits[a].iter().enumerate() {
                    for (j, &y) in all_digits[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut rem = poly_rem(&prod, &modulus, p);
                rem.resize(ku, 0);
                mul[a * q + b] = pack(&rem) as Elem;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem;
            }
        }
        Self { p, k, q, modulus, add, mul, neg, inv }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc { p: self.p, k: self.k, modulus: self.modulus.clone() }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|x| x as Elem)
    }

    /// Membership in the prime subfield GF(p).
    pub fn in_prime_subfield(&self, a: Elem) -> bool {
        (a as u32) < self.p
    }

    /// Coordinates of `a` over GF(p) in the polynomial basis `1, x, …, x^{k-1}`.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let p = self.p as usize;
        (0..self.k as usize)
            .map(|i| ((a as usize / p.pow(i as u32)) % p) as u32)
            .collect()
    }

    pub fn check_elem(&self, a: u32) -> Result<Elem, FieldError> {
        if (a as usize) < self.q {
            Ok(a as Elem)
        } else {
            Err(FieldError::ElementOutOfRange { value: a, q: self.q })
        }
    }

    /// Exhaustive check of the field axioms on the tables. Cubic in `q`.
    pub fn verify_axioms(&self) -> Result<(), FieldError> {
        let fail = |s: String| Err(FieldError::AxiomViolated(s));
        for a in self.elements() {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail(format!("identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return fail(format!("additive inverse fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv[a as usize]) != 1 {
                return fail(format!("multiplicative inverse fails at {a}"));
            }
            for b in self.elements() {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail(format!("commutativity fails at ({a},{b})"));
                }
                for c in self.elements() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail(format!("additive associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail(format!("multiplicative associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.desc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let desc = FieldDesc::deserialize(deserializer)?;
        Field::from_desc(&desc).map_err(serde::de::Error::custom)
    }
}

/// One symbol of GF(q^d), viewed only as a vector in GF(q)^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtSymbol {
    q: usize,
    coords: Vec<Elem>,
}

impl ExtSymbol {
    pub fn pack(field: &Field, v: &[Elem], d: usize) -> Result<Self, FieldError> {
        if v.len() != d {
            return Err(FieldError::LengthMismatch { expected: d, got: v.len() });
        }
        for &x in v {
            field.check_elem(x as u32)?;
        }
        Ok(Self { q: field.order(), coords: v.to_vec() })
    }

    pub fn unpack(&self) -> Vec<Elem> {
        self.coords.clone()
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn base_order(&self) -> usize {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Number of nonzero GF(q) coordinates.
    pub fn coord_weight(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }
}
