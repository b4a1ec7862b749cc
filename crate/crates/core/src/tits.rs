//! The Tits representation ρ: W(k) → GL_6(O) and its norm estimates.
//!
//! Matrices act on column vectors in the basis `α_0, …, α_5`, and
//! `ρ(s_1 ⋯ s_n) = ρ(s_1)⋯ρ(s_n)`. Besides the matrix itself we track the
//! coordinates `x` of `ρ(w) − 1` in the basis `E_{a,b} = α_a ⟨α_b | ·⟩`,
//! so that `ρ(w) − 1 = x·B` with `B` the Gram matrix.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{commuting_set, sign_support, CoxeterMatrix, Gen, Order, Partition, Word, WordOracle};
use crate::numberfield::{AlgebraicInt, FieldContext, FieldElem, FieldError};
use crate::serde_big::Num;

pub const RANK: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TitsError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("relation {0} fails")]
    RelationFailed(String),
    #[error("no power up to {cap} is the identity")]
    CapExceeded { cap: u64 },
    #[error("norm bound violated: {0}")]
    BoundViolated(String),
}

/// A 6×6 matrix over O, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat6(Vec<AlgebraicInt>);

impl Mat6 {
    /// Builds a matrix from 36 row-major entries.
    pub fn from_entries(entries: Vec<AlgebraicInt>) -> Self {
        assert_eq!(entries.len(), RANK * RANK);
        Mat6(entries)
    }

    pub fn get(&self, r: usize, c: usize) -> &AlgebraicInt {
        &self.0[r * RANK + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut AlgebraicInt {
        &mut self.0[r * RANK + c]
    }

    pub fn entries(&self) -> &[AlgebraicInt] {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<AlgebraicInt>> {
        self.0.chunks(RANK).map(<[_]>::to_vec).collect()
    }

    /// Nested coefficient arrays, `[row][col][power]`.
    pub fn to_coefficients(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.0
            .chunks(RANK)
            .map(|row| row.iter().map(|x| x.coeffs().to_vec()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(AlgebraicInt::is_zero)
    }
}

impl Serialize for Mat6 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nested: Vec<Vec<Vec<Num>>> = self
            .0
            .chunks(RANK)
            .map(|row| row.iter().map(|x| x.coeffs().iter().map(Num::from).collect()).collect())
            .collect();
        nested.serialize(s)
    }
}

/// ρ(w) together with the E-basis coordinates of ρ(w) − 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitsElement {
    pub matrix: Mat6,
    pub coords: Mat6,
}

#[derive(Debug, Clone)]
pub struct TitsRep {
    ctx: FieldContext,
    gram: Mat6,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub k: u32,
    pub checked: usize,
    /// Least `l` with `(ρ(s_i)ρ(s_{i+2}))^l = 1`, per `i`.
    pub braid_orders: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub checked: usize,
    pub failures: usize,
    #[serde(rename = "maxRatio")]
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerReport {
    pub subset: Word,
    pub t: usize,
    pub commuting_set: Word,
    pub checked: usize,
    pub commuting: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalReport {
    pub checked: usize,
    pub mismatches: usize,
}

/// Gram entry `B(α_i, α_j)` as a small polynomial in c, by index distance.
fn gram_poly(i: usize, j: usize) -> [i64; 2] {
    match (j + RANK - i) % RANK {
        0 => [2, 0],
        1 | 5 => [0, 0],
        2 | 4 => [0, -1],
        _ => [-2, 0],
    }
}

impl TitsRep {
    pub fn new(k: u32) -> Result<Self, TitsError> {
        let ctx = FieldContext::new(k)?;
        let mut entries = Vec::with_capacity(RANK * RANK);
        for i in 0..RANK {
            for j in 0..RANK {
                let [a, b] = gram_poly(i, j);
                entries.push(ctx.from_poly(&[BigInt::from(a), BigInt::from(b)]));
            }
        }
        Ok(TitsRep {
            ctx,
            gram: Mat6(entries),
        })
    }

    pub fn k(&self) -> u32 {
        self.ctx.k()
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn gram(&self) -> &Mat6 {
        &self.gram
    }

    pub fn coxeter_matrix(&self) -> CoxeterMatrix {
        CoxeterMatrix::w_k(self.k() as u64)
    }

    pub fn zero(&self) -> Mat6 {
        Mat6(vec![self.ctx.zero(); RANK * RANK])
    }

    pub fn identity(&self) -> Mat6 {
        let mut m = self.zero();
        for i in 0..RANK {
            *m.get_mut(i, i) = self.ctx.one();
        }
        m
    }

    pub fn is_identity(&self, m: &Mat6) -> bool {
        (0..RANK).all(|r| {
            (0..RANK).all(|c| match m.get(r, c).as_integer() {
                Some(v) => *v == BigInt::from((r == c) as i32),
                None => false,
            })
        })
    }

    pub fn mul(&self, a: &Mat6, b: &Mat6) -> Mat6 {
        let mut out = Vec::with_capacity(RANK * RANK);
        for r in 0..RANK {
            for c in 0..RANK {
                let mut acc = self.ctx.zero();
                for t in 0..RANK {
                    let (x, y) = (a.get(r, t), b.get(t, c));
                    if !x.is_zero() && !y.is_zero() {
                        acc = self.ctx.add(&acc, &self.ctx.mul(x, y));
                    }
                }
                out.push(acc);
            }
        }
        Mat6(out)
    }

    pub fn add(&self, a: &Mat6, b: &Mat6) -> Mat6 {
        Mat6(a.0.iter().zip(&b.0).map(|(x, y)| self.ctx.add(x, y)).collect())
    }

    pub fn sub(&self, a: &Mat6, b: &Mat6) -> Mat6 {
        Mat6(a.0.iter().zip(&b.0).map(|(x, y)| self.ctx.sub(x, y)).collect())
    }

    pub fn scale(&self, a: &Mat6, s: &AlgebraicInt) -> Mat6 {
        Mat6(a.0.iter().map(|x| self.ctx.mul(x, s)).collect())
    }

    pub fn transpose(&self, a: &Mat6) -> Mat6 {
        let mut out = Vec::with_capacity(RANK * RANK);
        for r in 0..RANK {
            for c in 0..RANK {
                out.push(a.get(c, r).clone());
            }
        }
        Mat6(out)
    }

    pub fn pow(&self, a: &Mat6, mut e: u64) -> Mat6 {
        let mut base = a.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `E_{a,b} = α_a ⟨α_b | ·⟩`: row `a` equal to row `b` of the Gram matrix.
    pub fn e_basis(&self, a: usize, b: usize) -> Mat6 {
        let mut m = self.zero();
        for c in 0..RANK {
            *m.get_mut(a, c) = self.gram.get(b, c).clone();
        }
        m
    }

    /// The matrix `x·B` with E-coordinates `x`.
    pub fn from_coords(&self, x: &Mat6) -> Mat6 {
        self.mul(x, &self.gram)
    }

    pub fn generator(&self, i: Gen) -> Mat6 {
        self.sub(&self.identity(), &self.e_basis(i, i))
    }

    pub fn rho(&self, w: &Word) -> Mat6 {
        self.rho_element(w).matrix
    }

    pub fn identity_element(&self) -> TitsElement {
        TitsElement {
            matrix: self.identity(),
            coords: self.zero(),
        }
    }

    /// ρ(w) with E-coordinates, built one generator at a time.
    pub fn rho_element(&self, w: &Word) -> TitsElement {
        let mut e = self.identity_element();
        for &g in w.letters() {
            e = self.right_mul_gen(&e, g);
        }
        e
    }

    /// `e·ρ(s_i)`. Only column `i` of the coordinates and the columns `j`
    /// with `B_{ij} ≠ 0` of the matrix change.
    pub fn right_mul_gen(&self, e: &TitsElement, i: Gen) -> TitsElement {
        let mut matrix = e.matrix.clone();
        let mut coords = e.coords.clone();
        for r in 0..RANK {
            let mi = e.matrix.get(r, i);
            if mi.is_zero() {
                continue;
            }
            for j in 0..RANK {
                let b = self.gram.get(i, j);
                if !b.is_zero() {
                    let v = self.ctx.sub(matrix.get(r, j), &self.ctx.mul(mi, b));
                    *matrix.get_mut(r, j) = v;
                }
            }
            let v = self.ctx.sub(coords.get(r, i), mi);
            *coords.get_mut(r, i) = v;
        }
        TitsElement { matrix, coords }
    }

    /// `ρ(s_i)·e`: only row `i` of both matrices changes.
    pub fn left_mul_gen(&self, i: Gen, e: &TitsElement) -> TitsElement {
        let mut matrix = e.matrix.clone();
        let mut coords = e.coords.clone();
        for c in 0..RANK {
            // ⟨α_i | column c⟩
            let mut m_acc = self.ctx.zero();
            let mut x_acc = self.ctx.zero();
            for t in 0..RANK {
                let b = self.gram.get(i, t);
                if b.is_zero() {
                    continue;
                }
                m_acc = self.ctx.add(&m_acc, &self.ctx.mul(b, e.matrix.get(t, c)));
                x_acc = self.ctx.add(&x_acc, &self.ctx.mul(b, e.coords.get(t, c)));
            }
            *matrix.get_mut(i, c) = self.ctx.sub(matrix.get(i, c), &m_acc);
            // (1 − E_ii)(1 + xB) − 1 = (x − e_i e_iᵀ − e_i e_iᵀ B x) B
            let mut v = self.ctx.sub(coords.get(i, c), &x_acc);
            if c == i {
                v = self.ctx.sub(&v, &self.ctx.one());
            }
            *coords.get_mut(i, c) = v;
        }
        TitsElement { matrix, coords }
    }

    /// Coordinates of a product: `x ∘ y = x + y + x·B·y`.
    pub fn compose_coords(&self, x: &Mat6, y: &Mat6) -> Mat6 {
        let xby = self.mul(&self.mul(x, &self.gram), y);
        self.add(&self.add(x, y), &xby)
    }

    /// E-coordinates of `m − 1`, solved against the Gram matrix over K.
    pub fn solve_coords(&self, m: &Mat6) -> Option<Mat6> {
        let inv = self.gram_inverse()?;
        let a = self.sub(m, &self.identity());
        let mut out = Vec::with_capacity(RANK * RANK);
        for r in 0..RANK {
            for c in 0..RANK {
                let mut acc = self.ctx.field_zero();
                for t in 0..RANK {
                    let p = self.ctx.field_mul(&self.ctx.to_field(a.get(r, t)), &inv[t][c]);
                    acc = self.ctx.field_add(&acc, &p);
                }
                out.push(acc.to_integral(self.k())?);
            }
        }
        Some(Mat6(out))
    }

    /// Inverse of the Gram matrix over K, by Gauss–Jordan elimination.
    pub fn gram_inverse(&self) -> Option<Vec<Vec<FieldElem>>> {
        let f = &self.ctx;
        let mut a: Vec<Vec<FieldElem>> = (0..RANK)
            .map(|r| (0..RANK).map(|c| f.to_field(self.gram.get(r, c))).collect())
            .collect();
        let mut inv: Vec<Vec<FieldElem>> = (0..RANK)
            .map(|r| {
                (0..RANK)
                    .map(|c| f.to_field(&f.from_int((r == c) as i32)))
                    .collect()
            })
            .collect();
        for col in 0..RANK {
            let piv = (col..RANK).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = f.field_inv(&a[col][col])?;
            for c in 0..RANK {
                a[col][c] = f.field_mul(&a[col][c], &p);
                inv[col][c] = f.field_mul(&inv[col][c], &p);
            }
            for r in 0..RANK {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..RANK {
                    let t = f.field_mul(&factor, &a[col][c]);
                    a[r][c] = f.field_sub(&a[r][c], &t);
                    let t = f.field_mul(&factor, &inv[col][c]);
                    inv[r][c] = f.field_sub(&inv[r][c], &t);
                }
            }
        }
        Some(inv)
    }

    /// Determinant by cofactor expansion, memoized over column subsets.
    pub fn det(&self, m: &Mat6) -> AlgebraicInt {
        laplace_det(&self.ctx, &m.rows())
    }

    /// Determinant of the Gram matrix by cofactor expansion.
    pub fn gram_det(&self) -> AlgebraicInt {
        self.det(&self.gram)
    }

    /// Determinant of the Gram matrix as the product of circulant eigenvalues
    /// `λ_j = Σ_d b_d ζ^{jd}`, `ζ = e^{iπ/3}`; every `2cos(πjd/3)` is an integer.
    pub fn gram_det_eigen(&self) -> AlgebraicInt {
        let f = &self.ctx;
        let two_cos = |n: usize| -> i64 { [2, 1, -1, -2, -1, 1][n % 6] };
        let b: Vec<&AlgebraicInt> = (0..RANK).map(|d| self.gram.get(0, d)).collect();
        let mut prod = f.one();
        for j in 0..RANK {
            // b_0 + b_3(−1)^j + Σ_{d=1,2} b_d·2cos(πjd/3)
            let mut lam = f.add(b[0], &f.scale(b[3], &BigInt::from(if j % 2 == 0 { 1 } else { -1 })));
            for d in 1..3 {
                lam = f.add(&lam, &f.scale(b[d], &BigInt::from(two_cos(j * d))));
            }
            prod = f.mul(&prod, &lam);
        }
        prod
    }

    /// `−4c³(2−c)(4+c)²`.
    pub fn gram_det_closed_form(&self) -> AlgebraicInt {
        let f = &self.ctx;
        let c = f.gen();
        let two_minus_c = f.sub(&f.from_int(2), &c);
        let four_plus_c = f.add(&f.from_int(4), &c);
        let mut v = f.scale(&f.pow(&c, 3), &BigInt::from(-4));
        v = f.mul(&v, &two_minus_c);
        f.mul(&v, &f.pow(&four_plus_c, 2))
    }

    /// `ρ(w)ᵀ B ρ(w) = B`.
    pub fn preserves_form(&self, m: &Mat6) -> bool {
        self.mul(&self.mul(&self.transpose(m), &self.gram), m) == self.gram
    }

    /// Checks the 18 defining relations exactly and that `ρ(s_i)ρ(s_{i+2})`
    /// has order exactly `k`.
    pub fn verify_relations(&self) -> Result<RelationReport, TitsError> {
        let k = self.k() as u64;
        let mut checked = 0;
        for i in 0..RANK {
            let s = self.generator(i);
            if !self.is_identity(&self.mul(&s, &s)) {
                return Err(TitsError::RelationFailed(format!("s{}^2", i + 1)));
            }
            checked += 1;
        }
        for i in 0..RANK {
            let st = self.mul(&self.generator(i), &self.generator((i + 1) % RANK));
            if !self.is_identity(&self.pow(&st, 2)) {
                return Err(TitsError::RelationFailed(format!("(s{} s{})^2", i + 1, (i + 1) % RANK + 1)));
            }
            checked += 1;
        }
        let mut braid_orders = Vec::with_capacity(RANK);
        for i in 0..RANK {
            let j = (i + 2) % RANK;
            let st = self.mul(&self.generator(i), &self.generator(j));
            let name = format!("(s{} s{})^{k}", i + 1, j + 1);
            let mut p = self.identity();
            for l in 1..=k {
                p = self.mul(&p, &st);
                if (l < k) == self.is_identity(&p) {
                    return Err(TitsError::RelationFailed(if l < k {
                        format!("{name}: order {l} < {k}")
                    } else {
                        name
                    }));
                }
            }
            braid_orders.push(k);
            checked += 1;
        }
        Ok(RelationReport {
            k: self.k(),
            checked,
            braid_orders,
        })
    }

    /// Least `n ≤ cap` with `ρ(w)^n = 1`.
    pub fn element_order(&self, w: &Word, cap: u64) -> Result<u64, TitsError> {
        self.matrix_order(&self.rho(w), cap)
    }

    pub fn matrix_order(&self, m: &Mat6, cap: u64) -> Result<u64, TitsError> {
        let mut p = m.clone();
        for n in 1..=cap {
            if self.is_identity(&p) {
                return Ok(n);
            }
            p = self.mul(&p, m);
        }
        Err(TitsError::CapExceeded { cap })
    }

    /// Decides `∥x∥ < 3^n` for every coordinate of `x`.
    pub fn coords_below_pow3(&self, x: &Mat6, n: u32) -> bool {
        let bound = BigInt::from(3).pow(n);
        x.entries()
            .iter()
            .all(|a| self.ctx.cmp_norm_int(a, &bound) == Ordering::Less)
    }

    /// Upper bound of the coordinate norm `max ∥x_{ab}∥`.
    pub fn coords_norm_hi(&self, x: &Mat6) -> f64 {
        x.entries()
            .iter()
            .map(|a| if a.is_zero() { 0.0 } else { self.ctx.linf_norm(a).hi })
            .fold(0.0, f64::max)
    }

    /// `F_w = F_{i_1}⋯F_{i_n}`, multiplied out as matrices.
    pub fn f_word(&self, w: &[Gen]) -> Mat6 {
        let mut m = self.identity();
        for &i in w {
            m = self.mul(&m, &self.e_basis(i, i));
        }
        m
    }

    /// `a_w = ∏_t B(α_{i_t}, α_{i_{t+1}})`, the scalar with `F_w = a_w E_{i_1,i_n}`.
    pub fn f_word_scalar(&self, w: &[Gen]) -> AlgebraicInt {
        w.windows(2)
            .fold(self.ctx.one(), |acc, p| self.ctx.mul(&acc, self.gram.get(p[0], p[1])))
    }

    /// For random index words of length `1..=max_len`, checks
    /// `F_w = a_w E_{i_1,i_n}` and `∥a_w∥ ≤ 2^{n−1}`.
    pub fn check_f_words<R: Rng>(&self, samples: usize, max_len: usize, rng: &mut R) -> NormReport {
        let mut report = NormReport {
            checked: 0,
            failures: 0,
            max_ratio: 0.0,
        };
        for _ in 0..samples {
            let n = rng.gen_range(1..=max_len);
            let w: Vec<Gen> = (0..n).map(|_| rng.gen_range(0..RANK)).collect();
            let a = self.f_word_scalar(&w);
            let expected = self.scale(&self.e_basis(w[0], w[n - 1]), &a);
            let bound = BigInt::one() << (n - 1);
            let ok = self.f_word(&w) == expected && self.ctx.cmp_norm_int(&a, &bound) != Ordering::Greater;
            if !a.is_zero() {
                let r = self.ctx.linf_norm(&a).hi / 2f64.powi(n as i32);
                report.max_ratio = report.max_ratio.max(r);
            }
            report.checked += 1;
            report.failures += usize::from(!ok);
        }
        report
    }

    /// Checks `∥ρ(w) − 1∥ < 3^l` for elements given with their lengths.
    pub fn check_norm_growth<'a, I>(&self, elements: I) -> NormReport
    where
        I: IntoIterator<Item = (&'a Mat6, usize)>,
    {
        let mut report = NormReport {
            checked: 0,
            failures: 0,
            max_ratio: 0.0,
        };
        for (x, len) in elements {
            report.checked += 1;
            if !self.coords_below_pow3(x, len as u32) {
                report.failures += 1;
            }
            let r = self.coords_norm_hi(x) / 3f64.powi(len as i32);
            report.max_ratio = report.max_ratio.max(r);
        }
        report
    }

    /// Samples words over `subset` and compares "commutes with ρ(t)" with the
    /// prediction "support lies in I(t)".
    pub fn centralizer_sample<R: Rng>(
        &self,
        subset: &[Gen],
        t: Gen,
        samples: usize,
        max_len: usize,
        rng: &mut R,
    ) -> CentralizerReport {
        let cox = self.coxeter_matrix();
        let it = commuting_set(&cox, subset, t);
        let rt = self.generator(t);
        let mut report = CentralizerReport {
            subset: Word(subset.to_vec()),
            t: t + 1,
            commuting_set: Word(it.clone()),
            checked: 0,
            commuting: 0,
            mismatches: 0,
        };
        for _ in 0..samples {
            let n = rng.gen_range(0..=max_len);
            let w = Word((0..n).map(|_| subset[rng.gen_range(0..subset.len())]).collect());
            let m = self.rho(&w);
            let commutes = self.mul(&m, &rt) == self.mul(&rt, &m);
            let support = sign_support(&w, &cox).map(|s| s.support).unwrap_or_default();
            let predicted = support.iter().all(|g| it.contains(g));
            report.checked += 1;
            report.commuting += usize::from(commutes);
            report.mismatches += usize::from(commutes != predicted);
        }
        report
    }

    /// For blue `t, t'` and a random red word `w`, the conjugates
    /// `σ = t^w`, `τ = t'^w` satisfy `order(στ) = m(t,t')`.
    pub fn gal_sample<R: Rng>(&self, p: &Partition, samples: usize, max_len: usize, rng: &mut R) -> GalReport {
        let cox = self.coxeter_matrix();
        let cap = 2 * self.k() as u64 + 2;
        let mut report = GalReport {
            checked: 0,
            mismatches: 0,
        };
        for _ in 0..samples {
            let t = p.blue[rng.gen_range(0..p.blue.len())];
            let t2 = p.blue[rng.gen_range(0..p.blue.len())];
            let n = rng.gen_range(0..=max_len);
            let w: Vec<Gen> = (0..n).map(|_| p.red[rng.gen_range(0..p.red.len())]).collect();
            let conj = |g: Gen| {
                let mut v = w.iter().rev().copied().collect::<Vec<_>>();
                v.push(g);
                v.extend_from_slice(&w);
                v
            };
            let mut st = conj(t);
            st.extend(conj(t2));
            let got = self.element_order(&Word(st), cap);
            let expected = if t == t2 { Order::Finite(1) } else { cox.m(t, t2) };
            let ok = match (got, expected) {
                (Ok(n), Order::Finite(m)) => n == m,
                (Err(TitsError::CapExceeded { .. }), Order::Infinite) => true,
                _ => false,
            };
            report.checked += 1;
            report.mismatches += usize::from(!ok);
        }
        report
    }
}

impl WordOracle for TitsRep {
    fn is_identity(&self, w: &[Gen]) -> bool {
        TitsRep::is_identity(self, &self.rho(&Word(w.to_vec())))
    }
}

/// Determinant of a square matrix over O by cofactor expansion, with the
/// minors of the leading rows memoized by column subset.
pub fn laplace_det(ctx: &FieldContext, rows: &[Vec<AlgebraicInt>]) -> AlgebraicInt {
    let n = rows.len();
    assert!(n <= 16, "cofactor expansion is exponential in the size");
    let mut minors = vec![ctx.zero(); 1 << n];
    minors[0] = ctx.one();
    for mask in 1usize..1 << n {
        let r = mask.count_ones() as usize - 1;
        let mut acc = ctx.zero();
        for j in 0..n {
            if mask & (1 << j) == 0 || rows[r][j].is_zero() {
                continue;
            }
            let sub = &minors[mask & !(1 << j)];
            if sub.is_zero() {
                continue;
            }
            let term = ctx.mul(&rows[r][j], sub);
            // j sits after the columns of `mask` below it
            let above = (mask >> (j + 1)).count_ones();
            acc = if above % 2 == 0 { ctx.add(&acc, &term) } else { ctx.sub(&acc, &term) };
        }
        minors[mask] = acc;
    }
    minors[(1 << n) - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn basis_vec(rep: &TitsRep, i: usize) -> Mat6 {
        // column vector α_i stored in column 0
        let mut m = rep.zero();
        *m.get_mut(i, 0) = rep.ctx().one();
        m
    }

    #[test]
    fn reflections_on_roots() {
        let rep = TitsRep::new(5).unwrap();
        let f = rep.ctx();
        for i in 0..6 {
            let s = rep.generator(i);
            let neg = rep.mul(&s, &basis_vec(&rep, i));
            assert_eq!(neg, rep.scale(&basis_vec(&rep, i), &f.from_int(-1)));
            let j = (i + 1) % 6;
            assert_eq!(rep.mul(&s, &basis_vec(&rep, j)), basis_vec(&rep, j));
            let j = (i + 2) % 6;
            let expect = rep.add(&basis_vec(&rep, j), &rep.scale(&basis_vec(&rep, i), &f.gen()));
            assert_eq!(rep.mul(&s, &basis_vec(&rep, j)), expect);
        }
    }

    #[test]
    fn gram_determinant_oracles() {
        for k in 3..=8 {
            let rep = TitsRep::new(k).unwrap();
            let d = rep.gram_det();
            assert_eq!(d, rep.gram_det_eigen(), "k={k}");
            assert_eq!(d, rep.gram_det_closed_form(), "k={k}");
        }
        let rep = TitsRep::new(3).unwrap();
        assert_eq!(rep.gram_det(), rep.ctx().from_int(-100));
        let rep = TitsRep::new(4).unwrap();
        let v = rep.ctx().embed_f64(&rep.gram_det(), 0);
        assert!((v + 194.3).abs() < 0.1, "{v}");
    }

    #[test]
    fn relations_and_orders() {
        for k in 3..=6 {
            let rep = TitsRep::new(k).unwrap();
            let r = rep.verify_relations().unwrap();
            assert_eq!(r.checked, 18);
        }
        let rep = TitsRep::new(4).unwrap();
        assert_eq!(rep.element_order(&w("1,2"), 100), Ok(2));
        assert_eq!(rep.element_order(&w("1,3"), 100), Ok(4));
        assert_eq!(rep.element_order(&w("1,4"), 100), Err(TitsError::CapExceeded { cap: 100 }));
        assert!(rep.is_identity(&rep.rho(&Word::default())));
    }

    #[test]
    fn tracked_coordinates_match() {
        let rep = TitsRep::new(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(0..8);
            let word = Word((0..n).map(|_| rng.gen_range(0..6)).collect());
            let e = rep.rho_element(&word);
            assert_eq!(rep.from_coords(&e.coords), rep.sub(&e.matrix, &rep.identity()));
            assert_eq!(rep.solve_coords(&e.matrix).unwrap(), e.coords);
            assert!(rep.preserves_form(&e.matrix));
            // left multiplication agrees with building the longer word
            let g = rng.gen_range(0..6);
            let mut longer = vec![g];
            longer.extend_from_slice(word.letters());
            assert_eq!(rep.left_mul_gen(g, &e), rep.rho_element(&Word(longer)));
        }
    }

    #[test]
    fn coordinate_composition() {
        let rep = TitsRep::new(4).unwrap();
        let a = rep.rho_element(&w("1,3,5,2"));
        let b = rep.rho_element(&w("4,6,1"));
        let ab = rep.rho_element(&w("1,3,5,2,4,6,1"));
        assert_eq!(rep.compose_coords(&a.coords, &b.coords), ab.coords);
    }

    #[test]
    fn generator_norms() {
        let rep = TitsRep::new(4).unwrap();
        let e = rep.rho_element(&w("1"));
        assert_eq!(rep.coords_norm_hi(&e.coords).round(), 1.0);
        let a = rep.sub(&e.matrix, &rep.identity());
        let row: Vec<f64> = (0..6).map(|c| rep.ctx().linf_norm(a.get(0, c)).hi).collect();
        assert!((row.iter().cloned().fold(0.0, f64::max) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn f_words() {
        let rep = TitsRep::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = rep.check_f_words(100, 12, &mut rng);
        assert_eq!(r.failures, 0);
        assert!(r.max_ratio <= 0.5 + 1e-9);
    }

    #[test]
    fn centralizers() {
        let rep = TitsRep::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = rep.centralizer_sample(&[0, 2], 1, 50, 6, &mut rng);
        assert_eq!(r.commuting, r.checked);
        assert_eq!(r.mismatches, 0);
        let r = rep.centralizer_sample(&[1, 3], 0, 50, 6, &mut rng);
        assert_eq!(r.commuting_set, Word(vec![1]));
        assert_eq!(r.mismatches, 0);
        assert!(r.commuting < r.checked);
    }

    #[test]
    fn gal_entries() {
        let rep = TitsRep::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = rep.gal_sample(&Partition::w_k_standard(), 40, 5, &mut rng);
        assert_eq!(r.mismatches, 0);
    }
}
