//! Univariate polynomials over a session field, with the exact operations
//! the ideal engine needs: ring arithmetic, gcd/lcm, squarefree parts,
//! complete factorization into monic irreducibles, and the Laurent
//! normalization that turns a generator of an ideal of `K[x, x^-1]` into its
//! canonical representative (monic, nonzero constant term).
//!
//! # Factorization
//!
//! Over `F_p` the factorization is Berlekamp's algorithm: split off the
//! squarefree part, compute the nullspace of the Frobenius map on
//! `F_p[x]/(f)`, and refine the factorization with gcds against `v - c` for
//! a non-constant nullspace element `v` until the number of factors matches
//! the nullspace dimension. Over the rationals the input is cleared to an
//! integer polynomial, rational roots are stripped with the rational root
//! theorem, and what remains is factored by Kronecker interpolation: a
//! degree-`d` divisor is determined by its values on `d + 1` points, and
//! those values must divide the values of `f`, so there are finitely many
//! candidates to test. Both routes are exact; both carry a degree cap
//! because Kronecker's candidate count explodes past desk scale.

use crate::field::{is_negative, Field, FieldElem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_FACTOR_DEGREE_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("operation requires a nonzero polynomial")]
    ZeroInput,
    #[error("degree {0} exceeds the factorization cap {1}")]
    DegreeCap(usize, usize),
}

/// Coefficients in ascending degree; no trailing zeros; zero is the empty
/// sequence. The field tag survives even for the zero polynomial.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn x(field: Field) -> Poly {
        Poly::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElem) -> Poly {
        Poly::from_coeffs(c.field(), vec![c])
    }

    pub fn from_coeffs(field: Field, coeffs: Vec<FieldElem>) -> Poly {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(field: Field, ascending: &[i64]) -> Poly {
        Poly::from_coeffs(
            field,
            ascending.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FieldElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
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

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FieldElem::is_one)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "mixed fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().map(FieldElem::neg).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "mixed fields");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::from_coeffs(self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        assert_eq!(self.field, divisor.field, "mixed fields");
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dlead = divisor.leading().unwrap().clone();
        let dd = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap().div(&dlead);
            let shift = rd - dd;
            quot[shift] = quot[shift].add(&factor);
            let mut sub = vec![self.field.zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.mul(&factor)));
            rem = rem.sub(&Poly::from_coeffs(self.field, sub));
        }
        Ok((Poly::from_coeffs(self.field, quot), rem))
    }

    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.divmod(divisor)?;
        assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.divmod(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.field.from_i64(i as i64)))
            .collect();
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn eval(&self, at: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }
}

/// Monic greatest common divisor; `gcd(f, 0) = monic(f)`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::GcdOfZeros);
    }
    let mut f = a.clone();
    let mut g = b.clone();
    while !g.is_zero() {
        let (_, r) = f.divmod(&g)?;
        f = g;
        g = r;
    }
    Ok(f.monic())
}

/// Monic least common multiple; satisfies `gcd * lcm = monic(a * b)`.
pub fn poly_lcm(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    if a.is_zero() || b.is_zero() {
        return Ok(Poly::zero(a.field()));
    }
    let g = poly_gcd(a, b)?;
    Ok(a.mul(b).div_exact(&g)?.monic())
}

/// Monic product of the distinct irreducible factors of `f`.
///
/// In characteristic zero this is `f / gcd(f, f')`. In characteristic `p`
/// the derivative can vanish: then every exponent in `f` is a multiple of
/// `p`, and since the coefficients of a prime field are fixed by Frobenius,
/// `f(x) = g(x^p)^?` reindexes to `g` with the same coefficients, so the
/// exponents are divided by `p` and the computation recurses. In the mixed
/// case the factors whose multiplicity `p` does not divide are `f / gcd(f,
/// f')`; stripping those factors from `f` entirely leaves the pure
/// `p`-th-power portion, which recurses the same way.
pub fn squarefree_part(f: &Poly) -> Result<Poly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if f.is_constant() {
        return Ok(Poly::one(f.field()));
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        let p = f.field().characteristic() as usize;
        assert!(p > 0, "zero derivative of a nonconstant poly over Q");
        let reduced = Poly::from_coeffs(f.field(), f.coeffs().iter().step_by(p).cloned().collect());
        return squarefree_part(&reduced);
    }
    let g = poly_gcd(f, &deriv)?;
    let outside = f.div_exact(&g)?.monic();
    let mut rest = f.monic();
    loop {
        let d = poly_gcd(&rest, &outside)?;
        if d.is_constant() {
            break;
        }
        rest = rest.div_exact(&d)?.monic();
    }
    if rest.is_constant() {
        return Ok(outside);
    }
    Ok(outside.mul(&squarefree_part(&rest)?).monic())
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients). The product of the factors rebuilds
/// `monic(f)`.
pub fn factor_irreducible(f: &Poly) -> Result<Vec<(Poly, u32)>, PolyError> {
    factor_irreducible_capped(f, DEFAULT_FACTOR_DEGREE_CAP)
}

pub fn factor_irreducible_capped(
    f: &Poly,
    degree_cap: usize,
) -> Result<Vec<(Poly, u32)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let deg = f.degree().unwrap();
    if deg > degree_cap {
        return Err(PolyError::DegreeCap(deg, degree_cap));
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let distinct = match f.field() {
        Field::Q => {
            let sf = squarefree_part(f)?;
            factor_squarefree_rational(&sf)?
        }
        Field::Fp(_) => {
            let sf = squarefree_part(f)?;
            berlekamp_squarefree(&sf)?
        }
    };
    let mut out = Vec::new();
    let mut rest = f.monic();
    for g in distinct {
        let mut mult = 0u32;
        while g.divides(&rest) {
            rest = rest.div_exact(&g)?;
            mult += 1;
        }
        assert!(mult > 0, "claimed factor does not divide");
        out.push((g, mult));
    }
    assert!(rest.is_one(), "factorization incomplete");
    out.sort_by(|a, b| poly_sort_key(&a.0).cmp(&poly_sort_key(&b.0)));
    Ok(out)
}

pub fn is_irreducible(f: &Poly) -> Result<bool, PolyError> {
    if f.is_zero() || f.is_constant() {
        return Ok(false);
    }
    let fs = factor_irreducible(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

fn poly_sort_key(p: &Poly) -> (usize, Vec<String>) {
    (
        p.coeffs().len(),
        p.coeffs().iter().map(|c| c.to_string()).collect(),
    )
}

/// Canonical generator of the Laurent ideal of `f`: divide out the largest
/// power of `x`, then make monic. Constants (units of `K[x, x^-1]`) come
/// back as `1`.
pub fn laurent_canonical(f: &Poly) -> Result<Poly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let shift = f
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero poly has a nonzero coefficient");
    let coeffs = f.coeffs()[shift..].to_vec();
    Ok(Poly::from_coeffs(f.field(), coeffs).monic())
}

/// A fixed small family of monic irreducible polynomials with nonzero
/// constant term, smallest degrees first, deterministic per field. Used to
/// turn a prime frame into concrete sample primes.
pub fn sample_irreducibles(field: Field, max_count: usize) -> Result<Vec<Poly>, PolyError> {
    let mut out = Vec::new();
    let coeff_range: Vec<i64> = match field {
        Field::Q => (-2..=2).collect(),
        Field::Fp(p) => (0..p.min(5) as i64).collect(),
    };
    'outer: for degree in 1..=2usize {
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == degree {
                let mut coeffs = prefix.clone();
                coeffs.push(1);
                if coeffs[0] == 0 {
                    continue;
                }
                let cand = Poly::from_i64s(field, &coeffs);
                if cand.constant_term().is_zero() || !cand.is_monic() {
                    continue;
                }
                if is_irreducible(&cand)? {
                    out.push(cand);
                    if out.len() >= max_count {
                        break 'outer;
                    }
                }
                continue;
            }
            for &c in coeff_range.iter().rev() {
                let mut next = prefix.clone();
                next.push(c);
                stack.push(next);
            }
        }
    }
    Ok(out)
}

// ---- Berlekamp over F_p ----

fn berlekamp_squarefree(f: &Poly) -> Result<Vec<Poly>, PolyError> {
    let p = match f.field() {
        Field::Fp(p) => p,
        Field::Q => unreachable!(),
    };
    let f = f.monic();
    let n = f.degree().unwrap();
    if n == 1 {
        return Ok(vec![f]);
    }
    // Rows of the Frobenius matrix: x^(p*i) mod f, as coefficient vectors.
    let mut rows = Vec::with_capacity(n);
    let xp = pow_mod_poly(&Poly::x(f.field()), p, &f)?;
    let mut cur = Poly::one(f.field());
    for _ in 0..n {
        let row: Vec<FieldElem> = (0..n).map(|i| cur.coeff(i)).collect();
        rows.push(row);
        cur = mul_mod(&cur, &xp, &f)?;
    }
    // Nullspace of (Frobenius - identity), transposed to act on coefficient
    // columns; solved by plain Gauss-Jordan over F_p.
    let field = f.field();
    let mut m = vec![vec![field.zero(); n]; n];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[j][i] = v.clone();
        }
    }
    for i in 0..n {
        m[i][i] = m[i][i].sub(&field.one());
    }
    let basis = nullspace(&m, field);
    let r = basis.len();
    assert!(r >= 1, "nullspace always contains the constants");
    if r == 1 {
        return Ok(vec![f]);
    }
    let mut factors = vec![f.clone()];
    'split: for vec_v in basis.iter() {
        let v = Poly::from_coeffs(field, vec_v.clone());
        if v.is_constant() {
            continue;
        }
        let mut next = Vec::new();
        for g in factors.drain(..) {
            if g.degree() == Some(1) {
                next.push(g);
                continue;
            }
            let mut pieces = Vec::new();
            let mut remaining = g.clone();
            for c in 0..p {
                let shifted = v.sub(&Poly::constant(field.from_i64(c as i64)));
                let d = poly_gcd(&remaining, &shifted)?;
                if !d.is_constant() {
                    remaining = remaining.div_exact(&d)?.monic();
                    pieces.push(d);
                }
                if remaining.is_constant() {
                    break;
                }
            }
            if !remaining.is_constant() {
                pieces.push(remaining.monic());
            }
            next.extend(pieces);
        }
        factors = next;
        if factors.len() == r {
            break 'split;
        }
    }
    assert_eq!(factors.len(), r, "Berlekamp split incomplete");
    Ok(factors)
}

fn mul_mod(a: &Poly, b: &Poly, modulus: &Poly) -> Result<Poly, PolyError> {
    let (_, r) = a.mul(b).divmod(modulus)?;
    Ok(r)
}

fn pow_mod_poly(base: &Poly, mut exp: u64, modulus: &Poly) -> Result<Poly, PolyError> {
    let mut acc = Poly::one(base.field());
    let mut b = {
        let (_, r) = base.divmod(modulus)?;
        r
    };
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, modulus)?;
        }
        b = mul_mod(&b, &b, modulus)?;
        exp >>= 1;
    }
    Ok(acc)
}

fn nullspace(m: &[Vec<FieldElem>], field: Field) -> Vec<Vec<FieldElem>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<FieldElem>> = m.to_vec();
    let mut pivot_col_of_row = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][col].inv();
        for v in a[rank].iter_mut() {
            *v = v.mul(&inv);
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..cols {
                    let t = a[rank][c].mul(&factor);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = a[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

// ---- Rational factorization ----

/// Factors a squarefree monic rational polynomial: clear to a primitive
/// integer polynomial, strip rational roots, then Kronecker for the rest.
fn factor_squarefree_rational(f: &Poly) -> Result<Vec<Poly>, PolyError> {
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let zf = to_integer_poly(f);
    let mut factors = Vec::new();
    let mut rest = zf;
    // Rational roots p/q: p divides the constant term, q the leading one.
    loop {
        if int_degree(&rest) == 0 {
            break;
        }
        let Some(root) = find_rational_root(&rest) else {
            break;
        };
        let lin = Poly::from_coeffs(
            Field::Q,
            vec![
                FieldElem::Q(-root.clone()),
                FieldElem::Q(BigRational::one()),
            ],
        );
        factors.push(lin.clone());
        let q = from_integer_poly(&rest).div_exact(&lin)?;
        rest = to_integer_poly(&q.monic());
    }
    if int_degree(&rest) > 0 {
        factors.extend(kronecker(&rest)?);
    }
    Ok(factors)
}

type ZPoly = Vec<BigInt>;

fn int_degree(f: &ZPoly) -> usize {
    f.len().saturating_sub(1)
}

fn to_integer_poly(f: &Poly) -> ZPoly {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        if let FieldElem::Q(r) = c {
            den = den.lcm(r.denom());
        }
    }
    let mut out: ZPoly = f
        .coeffs()
        .iter()
        .map(|c| match c {
            FieldElem::Q(r) => (r * BigRational::from_integer(den.clone())).to_integer(),
            FieldElem::Fp { .. } => unreachable!(),
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &out {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in out.iter_mut() {
            *c = &*c / &content;
        }
    }
    if out.last().is_some_and(|c| c.is_negative()) {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    out
}

fn from_integer_poly(f: &ZPoly) -> Poly {
    Poly::from_coeffs(
        Field::Q,
        f.iter()
            .map(|c| FieldElem::Q(BigRational::from_integer(c.clone())))
            .collect(),
    )
}

fn int_eval(f: &ZPoly, at: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * at + c;
    }
    acc
}

fn find_rational_root(f: &ZPoly) -> Option<BigRational> {
    let a0 = f.first()?.clone();
    let an = f.last()?.clone();
    if a0.is_zero() {
        return Some(BigRational::zero());
    }
    let ps = divisors(&a0.abs());
    let qs = divisors(&an.abs());
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(p * BigInt::from(sign), q.clone());
                let poly = from_integer_poly(f);
                if poly.eval(&FieldElem::Q(cand.clone())).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let nn = n.abs();
    let mut d = BigInt::one();
    while &d * &d <= nn {
        if (&nn % &d).is_zero() {
            out.push(d.clone());
            let other = &nn / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Kronecker interpolation on a primitive squarefree integer polynomial
/// with no rational roots. Returns monic rational irreducible factors.
fn kronecker(f: &ZPoly) -> Result<Vec<Poly>, PolyError> {
    let n = int_degree(f);
    if n <= 3 {
        // No rational roots and degree at most 3: irreducible.
        return Ok(vec![from_integer_poly(f).monic()]);
    }
    let points: Vec<BigInt> = sample_points(n / 2 + 1);
    let values: Vec<BigInt> = points.iter().map(|x| int_eval(f, x)).collect();
    assert!(values.iter().all(|v| !v.is_zero()), "roots were stripped");
    for d in 2..=n / 2 {
        let pts = &points[..=d];
        let vals = &values[..=d];
        let divisor_lists: Vec<Vec<BigInt>> = vals
            .iter()
            .map(|v| {
                let mut ds = divisors(v);
                let negs: Vec<BigInt> = ds.iter().map(|x| -x).collect();
                ds.extend(negs);
                ds
            })
            .collect();
        let mut choice = vec![0usize; d + 1];
        'candidates: loop {
            let sample: Vec<BigRational> = choice
                .iter()
                .enumerate()
                .map(|(i, &k)| BigRational::from_integer(divisor_lists[i][k].clone()))
                .collect();
            if let Some(g) = interpolate_integer(pts, &sample, d) {
                let gq = from_integer_poly(&g).monic();
                let fq = from_integer_poly(f).monic();
                if gq.degree() == Some(d) && gq.divides(&fq) {
                    let rest = fq.div_exact(&gq)?.monic();
                    let mut out = kronecker(&to_integer_poly(&gq))?;
                    out.extend(kronecker(&to_integer_poly(&rest))?);
                    return Ok(out);
                }
            }
            for i in 0..=d {
                choice[i] += 1;
                if choice[i] < divisor_lists[i].len() {
                    continue 'candidates;
                }
                choice[i] = 0;
            }
            break;
        }
    }
    Ok(vec![from_integer_poly(f).monic()])
}

fn sample_points(count: usize) -> Vec<BigInt> {
    let mut pts = vec![BigInt::zero()];
    let mut k = 1i64;
    while pts.len() < count {
        pts.push(BigInt::from(k));
        if pts.len() < count {
            pts.push(BigInt::from(-k));
        }
        k += 1;
    }
    pts
}

/// Lagrange interpolation; keeps the candidate only if all coefficients are
/// integers and the degree bound holds.
fn interpolate_integer(
    points: &[BigInt],
    values: &[BigRational],
    want_deg: usize,
) -> Option<ZPoly> {
    let field = Field::Q;
    let mut acc = Poly::zero(field);
    for (i, (xi, yi)) in points.iter().zip(values.iter()).enumerate() {
        let mut term = Poly::constant(FieldElem::Q(yi.clone()));
        for (j, xj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = BigRational::from_integer(xi - xj);
            let lin = Poly::from_coeffs(
                field,
                vec![
                    FieldElem::Q(BigRational::from_integer(-xj.clone()) / denom.clone()),
                    FieldElem::Q(denom.recip()),
                ],
            );
            term = term.mul(&lin);
        }
        acc = acc.add(&term);
    }
    if acc.degree() != Some(want_deg) {
        return None;
    }
    let mut out = Vec::with_capacity(acc.coeffs().len());
    for c in acc.coeffs() {
        match c {
            FieldElem::Q(r) if r.denom().is_one() => out.push(r.numer().clone()),
            _ => return None,
        }
    }
    Some(out)
}

// ---- Parsing and printing ----

/// Grammar: sum of products of powers of atoms, where an atom is a number
/// (integer or `a/b`), `x`, or a parenthesized expression. Multiplication
/// may be implicit between a coefficient and `x` (`2x`). The expression is
/// expanded into coefficient form on parse.
pub fn parse_poly(field: Field, text: &str) -> Result<Poly, String> {
    let mut p = PolyParser {
        field,
        chars: text.chars().collect(),
        pos: 0,
    };
    let poly = p.sum()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(format!("unexpected character at offset {}", p.pos));
    }
    Ok(poly)
}

struct PolyParser {
    field: Field,
    chars: Vec<char>,
    pos: usize,
}

impl PolyParser {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn sum(&mut self) -> Result<Poly, String> {
        self.skip_ws();
        let mut negate = false;
        if matches!(self.peek(), Some('+') | Some('-')) {
            negate = self.bump() == Some('-');
        }
        let mut acc = self.product()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = acc.add(&rhs);
                }
                Some('-') => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly, String> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs);
                }
                // Implicit multiplication: `2x`, `2(x+1)`, `x(x+1)`.
                Some('x') | Some('(') => {
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let n = self.integer()?;
            let n: u32 = n
                .try_into()
                .map_err(|_| format!("exponent out of range at offset {}", self.pos))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, String> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.sum()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(format!("expected ')' at offset {}", self.pos));
                }
                Ok(inner)
            }
            Some('x') => {
                self.bump();
                Ok(Poly::x(self.field))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.bump();
                    self.skip_ws();
                    let den = self.integer()?;
                    let elem = self
                        .field
                        .from_ratio(num, den)
                        .ok_or_else(|| format!("bad rational at offset {}", self.pos))?;
                    return Ok(Poly::constant(elem));
                }
                Ok(Poly::constant(self.field.from_i64(num)))
            }
            _ => Err(format!(
                "expected a number, 'x', or '(' at offset {}",
                self.pos
            )),
        }
    }

    fn integer(&mut self) -> Result<i64, String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(format!("expected a number at offset {}", self.pos));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| format!("number out of range at offset {start}"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if is_negative(c) {
                ("-", c.neg())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let mag_is_one = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 => {
                    if mag_is_one {
                        write!(f, "x")?;
                    } else {
                        write!(f, "{mag}*x")?;
                    }
                }
                _ => {
                    if mag_is_one {
                        write!(f, "x^{i}")?;
                    } else {
                        write!(f, "{mag}*x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
