//! Exact arithmetic in O = Z[c], c = 2cos(π/k), inside K = Q(cos π/k).
//!
//! Elements are coefficient vectors in the power basis `1, c, …, c^{d-1}`
//! with `d = φ(2k)/2`, reduced modulo the minimal polynomial `psi` of `c`.
//! Polynomials are stored constant term first.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{f64_to_scaled_ceil, f64_to_scaled_floor, Interval};

/// Working precision (bits) of the first norm evaluation; doubled until decisive.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("k = {0} is too small (need k >= 3)")]
    KTooSmall(u32),
    #[error("elements belong to different fields (k = {0} and k = {1})")]
    ContextMismatch(u32, u32),
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("element has {got} coefficients, field degree is {want}")]
    WrongLength { got: usize, want: usize },
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Euler's totient by trial division.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

// ---------------------------------------------------------------------------
// Integer polynomials
// ---------------------------------------------------------------------------

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial; panics on a nonzero remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let den = trim(den.to_vec());
    assert!(den.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
        return vec![BigInt::zero()];
    }
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd].clone();
        if q.is_zero() {
            continue;
        }
        for (j, c) in den.iter().enumerate() {
            rem[i + j] -= &q * c;
        }
        quot[i] = q;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    trim(quot)
}

/// The cyclotomic polynomial Φ_n, computed by dividing `x^n − 1` by Φ_d for
/// every proper divisor `d` of `n`.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    fn go(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut p = vec![BigInt::zero(); n as usize + 1];
        p[0] = BigInt::from(-1);
        p[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let phi_d = go(d, memo);
                p = poly_div_exact(&p, &phi_d);
            }
        }
        memo.insert(n, p.clone());
        p
    }
    go(n, &mut HashMap::new())
}

/// Rewrites a palindromic polynomial `P(x)` of degree `2d` as `x^d·Q(x + 1/x)`
/// and returns `Q`.
fn palindromic_to_trace(p: &[BigInt]) -> Vec<BigInt> {
    let n = p.len() - 1;
    assert!(n % 2 == 0, "palindromic polynomial of odd degree");
    let d = n / 2;
    // a[j + d] is the coefficient of x^j, j = -d..=d
    let mut a: Vec<BigInt> = p.to_vec();
    let mut q = vec![BigInt::zero(); d + 1];
    for j in (0..=d).rev() {
        let b = a[j + d].clone();
        if b.is_zero() {
            continue;
        }
        // subtract b·(x + 1/x)^j = b·Σ C(j,i) x^{j-2i}
        let mut binom = BigInt::one();
        for i in 0..=j {
            let e = j as isize - 2 * i as isize;
            a[(e + d as isize) as usize] -= &b * &binom;
            binom = binom * BigInt::from(j - i) / BigInt::from(i + 1);
        }
        q[j] = b;
    }
    debug_assert!(a.iter().all(|c| c.is_zero()));
    q
}

// ---------------------------------------------------------------------------
// Field context
// ---------------------------------------------------------------------------

/// A real embedding `c ↦ 2cos(mπ/k)`.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub m: u32,
    pub approx: f64,
    enclosure: Interval,
}

impl Embedding {
    /// Rigorous enclosure of the embedded generator at the default precision.
    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }
}

#[derive(Debug, Clone)]
pub struct FieldContext {
    k: u32,
    psi: Vec<BigInt>,
    embeddings: Vec<Embedding>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// An element of Z[c] tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicInt {
    k: u32,
    coeffs: Vec<BigInt>,
}

impl AlgebraicInt {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(n)` if the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// `true` iff every coefficient is divisible by `m`.
    pub fn divisible_by(&self, m: &BigInt) -> bool {
        self.coeffs.iter().all(|c| (c % m).is_zero())
    }

    /// Sum of absolute coefficient values weighted by `2^j`; bounds every
    /// embedding since `|c_v| ≤ 2`.
    pub fn crude_bound(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| a.abs() << j)
            .sum()
    }
}

impl fmt::Display for AlgebraicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            terms.push(match j {
                0 => a.to_string(),
                1 => format!("{a}c"),
                _ => format!("{a}c^{j}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Residue of an element modulo `M`: coefficients in `[0, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Residue {
    #[serde(serialize_with = "crate::serde_big::big_int")]
    pub modulus: BigInt,
    #[serde(serialize_with = "crate::serde_big::big_ints")]
    pub coeffs: Vec<BigInt>,
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// An element of K with rational coordinates in the power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElem(pub Vec<BigRational>);

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// The element as an algebraic integer, if all coordinates are integers.
    pub fn to_integral(&self, k: u32) -> Option<AlgebraicInt> {
        let coeffs = self
            .0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        Some(AlgebraicInt { k, coeffs })
    }
}

/// Enclosure of the l∞ norm `max_v |x_v|`.
#[derive(Debug, Clone)]
pub struct NormEnclosure {
    pub lo: f64,
    pub hi: f64,
    pub interval: Interval,
}

impl FieldContext {
    pub fn new(k: u32) -> Result<Self, FieldError> {
        if k < 3 {
            return Err(FieldError::KTooSmall(k));
        }
        let psi = palindromic_to_trace(&cyclotomic(2 * k as u64));
        let mut embeddings = Vec::new();
        for m in 1..k {
            if gcd_u64(m as u64, 2 * k as u64) == 1 {
                let approx = 2.0 * (m as f64 * std::f64::consts::PI / k as f64).cos();
                let enclosure = root_enclosure(&psi, approx, DEFAULT_PRECISION);
                embeddings.push(Embedding {
                    m,
                    approx,
                    enclosure,
                });
            }
        }
        let ctx = FieldContext {
            k,
            psi,
            embeddings,
        };
        debug_assert_eq!(ctx.embeddings.len(), ctx.degree());
        Ok(ctx)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Minimal polynomial of c, constant term first.
    pub fn psi(&self) -> &[BigInt] {
        &self.psi
    }

    pub fn degree(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }

    pub fn zero(&self) -> AlgebraicInt {
        self.from_int(0)
    }

    pub fn one(&self) -> AlgebraicInt {
        self.from_int(1)
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> AlgebraicInt {
        let mut coeffs = vec![BigInt::zero(); self.degree()];
        coeffs[0] = n.into();
        AlgebraicInt { k: self.k, coeffs }
    }

    /// The generator c = 2cos(π/k).
    pub fn gen(&self) -> AlgebraicInt {
        self.from_poly(&[BigInt::zero(), BigInt::one()])
    }

    /// Element with the given coordinates; must have exactly `degree` entries.
    pub fn element(&self, coeffs: Vec<BigInt>) -> Result<AlgebraicInt, FieldError> {
        if coeffs.len() != self.degree() {
            return Err(FieldError::WrongLength {
                got: coeffs.len(),
                want: self.degree(),
            });
        }
        Ok(AlgebraicInt { k: self.k, coeffs })
    }

    /// Reduces an arbitrary integer polynomial in c modulo psi.
    pub fn from_poly(&self, poly: &[BigInt]) -> AlgebraicInt {
        AlgebraicInt {
            k: self.k,
            coeffs: self.reduce_poly(poly.to_vec()),
        }
    }

    fn reduce_poly(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for top in (d..p.len()).rev() {
            let q = std::mem::take(&mut p[top]);
            if q.is_zero() {
                continue;
            }
            for j in 0..d {
                p[top - d + j] -= &q * &self.psi[j];
            }
        }
        p.resize(d, BigInt::zero());
        p
    }

    fn check(&self, x: &AlgebraicInt) -> Result<(), FieldError> {
        if x.k != self.k {
            Err(FieldError::ContextMismatch(self.k, x.k))
        } else {
            Ok(())
        }
    }

    pub fn arith(&self, x: &AlgebraicInt, y: &AlgebraicInt, op: ArithOp) -> Result<AlgebraicInt, FieldError> {
        self.check(x)?;
        self.check(y)?;
        if x.k != y.k {
            return Err(FieldError::ContextMismatch(x.k, y.k));
        }
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
        })
    }

    pub fn add(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> AlgebraicInt {
        debug_assert!(x.k == self.k && y.k == self.k);
        AlgebraicInt {
            k: self.k,
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> AlgebraicInt {
        debug_assert!(x.k == self.k && y.k == self.k);
        AlgebraicInt {
            k: self.k,
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self, x: &AlgebraicInt) -> AlgebraicInt {
        AlgebraicInt {
            k: self.k,
            coeffs: x.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, x: &AlgebraicInt, y: &AlgebraicInt) -> AlgebraicInt {
        debug_assert!(x.k == self.k && y.k == self.k);
        if x.is_zero() || y.is_zero() {
            return self.zero();
        }
        AlgebraicInt {
            k: self.k,
            coeffs: self.reduce_poly(poly_mul(&x.coeffs, &y.coeffs)),
        }
    }

    pub fn scale(&self, x: &AlgebraicInt, n: &BigInt) -> AlgebraicInt {
        AlgebraicInt {
            k: self.k,
            coeffs: x.coeffs.iter().map(|a| a * n).collect(),
        }
    }

    pub fn pow(&self, x: &AlgebraicInt, mut e: u32) -> AlgebraicInt {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates the integer polynomial `p` at the element `x` inside the ring.
    pub fn eval_poly(&self, p: &[BigInt], x: &AlgebraicInt) -> AlgebraicInt {
        let mut acc = self.zero();
        for a in p.iter().rev() {
            acc = self.mul(&acc, x);
            acc.coeffs[0] += a;
        }
        acc
    }

    /// Approximate value of `x` under the embedding with index `v`.
    pub fn embed_f64(&self, x: &AlgebraicInt, v: usize) -> f64 {
        let c = self.embeddings[v].approx;
        x.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * c + a.to_f64().unwrap_or(f64::NAN))
    }

    /// Rigorous enclosure of the embedding `x_v` at `prec` bits.
    pub fn embed_interval(&self, x: &AlgebraicInt, v: usize, prec: u32) -> Interval {
        let e = &self.embeddings[v];
        let c = if prec == DEFAULT_PRECISION {
            e.enclosure.clone()
        } else {
            root_enclosure(&self.psi, e.approx, prec)
        };
        let mut acc = Interval::exact_int(&BigInt::zero(), prec);
        for a in x.coeffs.iter().rev() {
            acc = acc.mul(&c).add_int(a);
        }
        acc
    }

    fn norm_at(&self, x: &AlgebraicInt, prec: u32) -> Interval {
        let mut best: Option<Interval> = None;
        for v in 0..self.embeddings.len() {
            let a = self.embed_interval(x, v, prec).abs();
            best = Some(match best {
                None => a,
                Some(b) => b.max(&a),
            });
        }
        best.expect("at least one embedding")
    }

    /// Enclosure of `∥x∥ = max_v |x_v|` with relative width at most 1e-9.
    pub fn linf_norm(&self, x: &AlgebraicInt) -> NormEnclosure {
        let mut prec = DEFAULT_PRECISION;
        loop {
            let iv = self.norm_at(x, prec);
            let (lo, hi) = (iv.lo_f64().max(0.0), iv.hi_f64());
            if hi - lo <= 1e-9 * hi.max(1.0) || prec >= 1 << 14 {
                return NormEnclosure { lo, hi, interval: iv };
            }
            prec *= 2;
        }
    }

    /// Exact comparison of `∥x∥` with a nonnegative integer `n`.
    ///
    /// `∥x∥ = n` forces some `x_v = ±n`, which for a rational `n` happens only
    /// when `x = ±n`; that case is settled symbolically and all others by
    /// refining the enclosure.
    pub fn cmp_norm_int(&self, x: &AlgebraicInt, n: &BigInt) -> Ordering {
        if let Some(a) = x.as_integer() {
            return a.abs().cmp(n);
        }
        if x.crude_bound() < *n {
            return Ordering::Less;
        }
        let mut prec = DEFAULT_PRECISION;
        loop {
            if let Some(ord) = self.norm_at(x, prec).cmp_int(n) {
                return ord;
            }
            prec *= 2;
        }
    }

    /// The field norm `N(x) = ∏_v x_v`, as the determinant of multiplication by `x`.
    pub fn field_norm(&self, x: &AlgebraicInt) -> BigInt {
        let d = self.degree();
        let mut mat: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        let mut basis = self.one();
        let c = self.gen();
        for _ in 0..d {
            mat.push(self.mul(x, &basis).coeffs);
            basis = self.mul(&basis, &c);
        }
        bareiss_det(mat)
    }

    pub fn mod_reduce(&self, x: &AlgebraicInt, modulus: &BigInt) -> Result<Residue, FieldError> {
        if *modulus < BigInt::from(2) {
            return Err(FieldError::BadModulus);
        }
        Ok(Residue {
            modulus: modulus.clone(),
            coeffs: x.coeffs.iter().map(|c| c.mod_floor(modulus)).collect(),
        })
    }

    // --- rational arithmetic in K -------------------------------------------

    pub fn to_field(&self, x: &AlgebraicInt) -> FieldElem {
        FieldElem(x.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn field_zero(&self) -> FieldElem {
        FieldElem(vec![BigRational::zero(); self.degree()])
    }

    pub fn field_add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        FieldElem(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    pub fn field_sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        FieldElem(x.0.iter().zip(&y.0).map(|(a, b)| a - b).collect())
    }

    pub fn field_mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let d = self.degree();
        let mut p = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in x.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.0.iter().enumerate() {
                p[i + j] += a * b;
            }
        }
        for top in (d..p.len()).rev() {
            let q = std::mem::replace(&mut p[top], BigRational::zero());
            if q.is_zero() {
                continue;
            }
            for j in 0..d {
                p[top - d + j] -= &q * BigRational::from_integer(self.psi[j].clone());
            }
        }
        p.truncate(d);
        FieldElem(p)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in Q[x].
    pub fn field_inv(&self, x: &FieldElem) -> Option<FieldElem> {
        if x.is_zero() {
            return None;
        }
        let psi: Vec<BigRational> = self.psi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        // invariant: s_i·x ≡ r_i (mod psi)
        let (mut r0, mut r1) = (psi, qtrim(x.0.clone()));
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = qdivmod(&r0, &r1);
            let s2 = qsub(&s0, &qmul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since psi is irreducible
        if r0.len() != 1 {
            return None;
        }
        let inv_c = r0[0].recip();
        let mut out: Vec<BigRational> = s0.into_iter().map(|a| a * &inv_c).collect();
        out.resize(self.degree(), BigRational::zero());
        Some(FieldElem(out))
    }
}

fn qtrim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
    p
}

fn qmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

fn qsub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    qtrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn qdivmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = qtrim(den.to_vec());
    let mut rem = qtrim(num.to_vec());
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![BigRational::zero()], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = &rem[i + dd] / &lead;
        if q.is_zero() {
            continue;
        }
        for (j, c) in den.iter().enumerate() {
            rem[i + j] -= &q * c;
        }
        quot[i] = q;
    }
    rem.truncate(dd.max(1));
    (qtrim(quot), qtrim(rem))
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Sign of `psi(a / 2^prec)`, exactly.
fn sign_at(psi: &[BigInt], a: &BigInt, prec: u32) -> Ordering {
    let d = psi.len() - 1;
    let mut acc = psi[d].clone();
    for j in (0..d).rev() {
        acc = acc * a + (&psi[j] << (prec as usize * (d - j)));
    }
    acc.sign().cmp_zero()
}

trait SignCmp {
    fn cmp_zero(self) -> Ordering;
}

impl SignCmp for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

/// Isolates the simple root of `psi` near `approx` to an interval of width
/// `2^-prec` by exact bisection.
fn root_enclosure(psi: &[BigInt], approx: f64, prec: u32) -> Interval {
    let mut radius = 1e-7;
    loop {
        let mut lo = f64_to_scaled_floor(approx - radius, prec);
        let mut hi = f64_to_scaled_ceil(approx + radius, prec);
        let (slo, shi) = (sign_at(psi, &lo, prec), sign_at(psi, &hi, prec));
        if slo == Ordering::Equal {
            return Interval::from_scaled(lo.clone(), lo, prec);
        }
        if shi == Ordering::Equal {
            return Interval::from_scaled(hi.clone(), hi, prec);
        }
        if slo != shi {
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi) >> 1;
                match sign_at(psi, &mid, prec) {
                    Ordering::Equal => return Interval::from_scaled(mid.clone(), mid, prec),
                    s if s == slo => lo = mid,
                    _ => hi = mid,
                }
            }
            return Interval::from_scaled(lo, hi, prec);
        }
        radius *= 0.5;
        assert!(radius > 1e-15, "could not isolate root near {approx}");
    }
}

/// Serializable view of a context.
#[derive(Debug, Clone, Serialize)]
pub struct ContextSummary {
    pub k: u32,
    #[serde(serialize_with = "crate::serde_big::big_ints")]
    pub psi: Vec<BigInt>,
    pub degree: usize,
    pub embeddings: Vec<f64>,
}

impl From<&FieldContext> for ContextSummary {
    fn from(ctx: &FieldContext) -> Self {
        ContextSummary {
            k: ctx.k,
            psi: ctx.psi.clone(),
            degree: ctx.degree(),
            embeddings: ctx.embeddings.iter().map(|e| e.approx).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_minimal_polynomials() {
        assert_eq!(FieldContext::new(3).unwrap().psi(), &ints(&[-1, 1])[..]);
        assert_eq!(FieldContext::new(4).unwrap().psi(), &ints(&[-2, 0, 1])[..]);
        assert_eq!(FieldContext::new(5).unwrap().psi(), &ints(&[-1, -1, 1])[..]);
        assert_eq!(FieldContext::new(6).unwrap().psi(), &ints(&[-3, 0, 1])[..]);
        assert_eq!(FieldContext::new(12).unwrap().degree(), 4);
        assert_eq!(FieldContext::new(2).unwrap_err(), FieldError::KTooSmall(2));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = FieldContext::new(5).unwrap();
        let c = f5.gen();
        assert_eq!(f5.mul(&c, &c), f5.add(&c, &f5.one()));
        let f4 = FieldContext::new(4).unwrap();
        let c4 = f4.gen();
        assert_eq!(f4.mul(&c4, &c4), f4.from_int(2));
        assert_eq!(f4.add(&c4, &f4.zero()), c4);
        assert_eq!(
            f4.arith(&c4, &c, ArithOp::Add),
            Err(FieldError::ContextMismatch(4, 5))
        );
    }

    #[test]
    fn norm_examples() {
        let f5 = FieldContext::new(5).unwrap();
        let n = f5.linf_norm(&f5.gen());
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(n.lo <= golden && golden <= n.hi);
        assert!(n.hi - n.lo < 1e-9);
        assert_eq!(f5.linf_norm(&f5.zero()).lo, 0.0);
        let seven = f5.from_int(-7);
        let n7 = f5.linf_norm(&seven);
        assert!(n7.lo <= 7.0 && n7.hi >= 7.0 && n7.hi - n7.lo < 1e-8);
        assert_eq!(f5.cmp_norm_int(&seven, &BigInt::from(7)), Ordering::Equal);
        assert_eq!(f5.cmp_norm_int(&f5.gen(), &BigInt::from(2)), Ordering::Less);
        assert_eq!(f5.cmp_norm_int(&f5.gen(), &BigInt::from(1)), Ordering::Greater);
    }

    #[test]
    fn mod_reduce_examples() {
        let f4 = FieldContext::new(4).unwrap();
        let three = BigInt::from(3);
        let c = f4.gen();
        assert!(f4.mod_reduce(&f4.scale(&c, &three), &three).unwrap().is_zero());
        assert!(!f4.mod_reduce(&c, &three).unwrap().is_zero());
        assert_eq!(f4.mod_reduce(&c, &BigInt::from(1)), Err(FieldError::BadModulus));
        let f5 = FieldContext::new(5).unwrap();
        let c5 = f5.gen();
        let x = f5.sub(&f5.sub(&f5.mul(&c5, &c5), &c5), &f5.one());
        for m in 2..20 {
            assert!(f5.mod_reduce(&x, &BigInt::from(m)).unwrap().is_zero());
        }
    }

    #[test]
    fn field_inverse() {
        for k in [3, 5, 7, 12] {
            let f = FieldContext::new(k).unwrap();
            let x = f.from_poly(&ints(&[3, -1, 2]));
            let xf = f.to_field(&x);
            let inv = f.field_inv(&xf).unwrap();
            let one = f.field_mul(&xf, &inv);
            assert_eq!(one, f.to_field(&f.one()));
        }
    }

    #[test]
    fn field_norm_matches_embeddings() {
        let f = FieldContext::new(7).unwrap();
        let x = f.from_poly(&ints(&[2, 1, -1]));
        let prod: f64 = (0..f.degree()).map(|v| f.embed_f64(&x, v)).product();
        assert!((f.field_norm(&x).to_f64().unwrap() - prod).abs() < 1e-9);
    }

    #[test]
    fn totients() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(30), 8);
        assert_eq!(totient(97), 96);
    }
}
