//! Exact scalar arithmetic: the rationals, or a prime field `F_p` with
//! `p <= 97`. The field is chosen per session, so elements carry a runtime
//! tag; mixing elements of different fields is a programming error and
//! panics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub const SUPPORTED_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn modulus(self) -> Option<u64> {
        match self {
            Field::Q => None,
            Field::Fp(p) => Some(p),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => p,
        }
    }

    /// Parses a session field name: `q` or `f<p>` for a supported prime `p`.
    pub fn parse(name: &str) -> Option<Field> {
        let name = name.trim().to_ascii_lowercase();
        if name == "q" {
            return Some(Field::Q);
        }
        let p: u64 = name.strip_prefix('f')?.parse().ok()?;
        SUPPORTED_PRIMES.contains(&p).then_some(Field::Fp(p))
    }

    pub fn zero(self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElem {
        match self {
            Field::Q => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => FieldElem::Fp {
                p,
                v: n.rem_euclid(p as i64) as u64,
            },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Option<FieldElem> {
        if den == 0 {
            return None;
        }
        match self {
            Field::Q => Some(FieldElem::Q(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            Field::Fp(_) => {
                let d = self.from_i64(den);
                if d.is_zero() {
                    None
                } else {
                    Some(self.from_i64(num).div(&d))
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "q"),
            Field::Fp(p) => write!(f, "f{p}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp { p: u64, v: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Q,
            FieldElem::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { p, v: a }, FieldElem::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                FieldElem::Fp {
                    p: *p,
                    v: (a + b) % p,
                }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { p, v } => FieldElem::Fp {
                p: *p,
                v: (p - v) % p,
            },
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { p, v: a }, FieldElem::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "mixed prime fields");
                FieldElem::Fp {
                    p: *p,
                    v: (a * b) % p,
                }
            }
            _ => panic!("mixed fields"),
        }
    }

    pub fn inv(&self) -> FieldElem {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            FieldElem::Q(a) => FieldElem::Q(a.recip()),
            FieldElem::Fp { p, v } => FieldElem::Fp {
                p: *p,
                v: pow_mod(*v, p - 2, *p),
            },
        }
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        self.mul(&other.inv())
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// True if the rational is negative; prime-field residues are never treated
/// as negative so printed polynomials stay canonical per field.
pub fn is_negative(e: &FieldElem) -> bool {
    match e {
        FieldElem::Q(r) => r.is_negative(),
        FieldElem::Fp { .. } => false,
    }
}
