//! Finite quotients of W(k) given by six generator images, with group orders
//! by a randomized Schreier–Sims algorithm and explicit closure enumeration.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numberfield::totient;
use crate::tits::{TitsRep, RANK};

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;
pub const MEMBERSHIP_TESTS: usize = 100;
/// Largest orbit a stabilizer chain level may hold.
pub const MAX_ORBIT: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("modulus {0} is not prime")]
    UnsupportedModulus(u64),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("point set too large: {0}")]
    TooLarge(String),
    #[error("group has more than {cap} elements")]
    SizeCap { cap: usize },
}

/// A permutation of `0..n`, or an invertible `n×n` matrix over F_p acting on
/// column vectors. Products compose as maps: `(g·h)(x) = g(h(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElem {
    Perm(Vec<u32>),
    Mat { p: u32, n: usize, a: Vec<u32> },
}

fn mat_mul(p: u32, n: usize, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut out = vec![0u32; n * n];
    for r in 0..n {
        for t in 0..n {
            let x = a[r * n + t] as u64;
            if x == 0 {
                continue;
            }
            for c in 0..n {
                let v = (out[r * n + c] as u64 + x * b[t * n + c] as u64) % p;
                out[r * n + c] = v as u32;
            }
        }
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Inverse and determinant over F_p by Gauss–Jordan elimination.
fn mat_inv_det(p: u32, n: usize, a: &[u32]) -> (Option<Vec<u32>>, u32) {
    let pp = p as u64;
    let mut m: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let mut inv: Vec<u64> = (0..n * n).map(|i| (i / n == i % n) as u64).collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return (None, 0);
        };
        if piv != col {
            for c in 0..n {
                m.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
            det = (pp - det) % pp;
        }
        let d = m[col * n + col];
        det = det * d % pp;
        let di = pow_mod(d, pp - 2, pp);
        for c in 0..n {
            m[col * n + c] = m[col * n + c] * di % pp;
            inv[col * n + c] = inv[col * n + c] * di % pp;
        }
        for r in 0..n {
            let f = m[r * n + col];
            if r == col || f == 0 {
                continue;
            }
            for c in 0..n {
                m[r * n + c] = (m[r * n + c] + (pp - f) * m[col * n + c]) % pp;
                inv[r * n + c] = (inv[r * n + c] + (pp - f) * inv[col * n + c]) % pp;
            }
        }
    }
    (Some(inv.into_iter().map(|x| x as u32).collect()), det as u32)
}

impl GroupElem {
    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        match (self, other) {
            (GroupElem::Perm(a), GroupElem::Perm(b)) => GroupElem::Perm(b.iter().map(|&x| a[x as usize]).collect()),
            (GroupElem::Mat { p, n, a }, GroupElem::Mat { a: b, .. }) => GroupElem::Mat {
                p: *p,
                n: *n,
                a: mat_mul(*p, *n, a, b),
            },
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn inverse(&self) -> GroupElem {
        match self {
            GroupElem::Perm(a) => {
                let mut inv = vec![0u32; a.len()];
                for (i, &x) in a.iter().enumerate() {
                    inv[x as usize] = i as u32;
                }
                GroupElem::Perm(inv)
            }
            GroupElem::Mat { p, n, a } => GroupElem::Mat {
                p: *p,
                n: *n,
                a: mat_inv_det(*p, *n, a).0.expect("invertible matrix"),
            },
        }
    }

    pub fn identity_like(&self) -> GroupElem {
        match self {
            GroupElem::Perm(a) => GroupElem::Perm((0..a.len() as u32).collect()),
            GroupElem::Mat { p, n, .. } => GroupElem::Mat {
                p: *p,
                n: *n,
                a: (0..n * n).map(|i| (i / n == i % n) as u32).collect(),
            },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElem::Perm(a) => a.iter().enumerate().all(|(i, &x)| i as u32 == x),
            GroupElem::Mat { n, a, .. } => a.iter().enumerate().all(|(i, &x)| x == (i / n == i % n) as u32),
        }
    }

    /// Image of a point: an index for permutations, a base-`p` encoded vector
    /// for matrices.
    pub fn apply(&self, pt: u128) -> u128 {
        match self {
            GroupElem::Perm(a) => a[pt as usize] as u128,
            GroupElem::Mat { p, n, a } => {
                let pp = *p as u128;
                let mut v = vec![0u64; *n];
                let mut x = pt;
                for d in v.iter_mut() {
                    *d = (x % pp) as u64;
                    x /= pp;
                }
                let mut out: u128 = 0;
                for r in (0..*n).rev() {
                    let mut s = 0u64;
                    for c in 0..*n {
                        s = (s + a[r * n + c] as u64 * v[c]) % *p as u64;
                    }
                    out = out * pp + s as u128;
                }
                out
            }
        }
    }

    /// Candidate base points: every point for permutations, the standard
    /// basis vectors for matrices.
    fn base_candidates(&self) -> Vec<u128> {
        match self {
            GroupElem::Perm(a) => (0..a.len() as u128).collect(),
            GroupElem::Mat { p, n, .. } => (0..*n as u32).map(|j| (*p as u128).pow(j)).collect(),
        }
    }

    /// Sign witness: permutation parity or determinant, as ±1 if defined.
    pub fn sign_witness(&self) -> Option<i8> {
        match self {
            GroupElem::Perm(a) => {
                let mut seen = vec![false; a.len()];
                let mut transpositions = 0usize;
                for i in 0..a.len() {
                    let mut len = 0usize;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = a[j] as usize;
                        len += 1;
                    }
                    transpositions += len.saturating_sub(1);
                }
                Some(if transpositions % 2 == 0 { 1 } else { -1 })
            }
            GroupElem::Mat { p, n, a } => {
                let det = mat_inv_det(*p, *n, a).1;
                if det == 1 {
                    Some(1)
                } else if det == p - 1 {
                    Some(-1)
                } else {
                    None
                }
            }
        }
    }

    /// Least `n ≤ cap` with `g^n = 1`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut g = self.clone();
        for n in 1..=cap {
            if g.is_identity() {
                return Some(n);
            }
            g = g.mul(self);
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Images {
    /// Six permutations of `0..n` as image arrays.
    Permutations(Vec<Vec<u32>>),
    /// Six square matrices over F_p, row-major nested arrays.
    Matrices { prime: u32, gens: Vec<Vec<Vec<u32>>> },
}

/// A finite group with six labelled involutions realizing the relations of
/// W(k), and the generator signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDatum {
    pub k: u32,
    #[serde(flatten)]
    pub images: Images,
    pub signs: Vec<i8>,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl QuotientDatum {
    pub fn from_permutations(k: u32, perms: Vec<Vec<u32>>) -> Self {
        QuotientDatum {
            k,
            images: Images::Permutations(perms),
            signs: vec![-1; RANK],
        }
    }

    /// The reduction of ρ modulo a prime `p`, with each entry of `O/pO`
    /// expanded to its `d×d` multiplication matrix over F_p.
    pub fn from_tits(k: u32, p: u64) -> Result<Self, QuotientError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(QuotientError::UnsupportedModulus(p));
        }
        let rep = TitsRep::new(k).map_err(|e| QuotientError::InvalidDatum(e.to_string()))?;
        let ctx = rep.ctx();
        let d = ctx.degree();
        let n = RANK * d;
        let pb = num_bigint::BigInt::from(p);
        let c = ctx.gen();
        let mut powers = vec![ctx.one()];
        for _ in 1..d {
            let last = powers.last().expect("nonempty").clone();
            powers.push(ctx.mul(&last, &c));
        }
        let mut gens = Vec::with_capacity(RANK);
        for i in 0..RANK {
            let g = rep.generator(i);
            let mut m = vec![vec![0u32; n]; n];
            for r in 0..RANK {
                for col in 0..RANK {
                    let a = g.get(r, col);
                    for (j, pw) in powers.iter().enumerate() {
                        let prod = ctx.mod_reduce(&ctx.mul(a, pw), &pb).expect("p ≥ 2");
                        for (t, v) in prod.coeffs.iter().enumerate() {
                            m[r * d + t][col * d + j] = v.to_u32().expect("reduced below p");
                        }
                    }
                }
            }
            gens.push(m);
        }
        Ok(QuotientDatum {
            k,
            images: Images::Matrices { prime: p as u32, gens },
            signs: vec![-1; RANK],
        })
    }

    pub fn generators(&self) -> Result<Vec<GroupElem>, QuotientError> {
        match &self.images {
            Images::Permutations(perms) => {
                if perms.len() != RANK {
                    return Err(QuotientError::InvalidDatum("need six permutations".into()));
                }
                let n = perms[0].len();
                for p in perms {
                    let mut seen = vec![false; n];
                    if p.len() != n || p.iter().any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true)) {
                        return Err(QuotientError::InvalidDatum("not a permutation".into()));
                    }
                }
                Ok(perms.iter().cloned().map(GroupElem::Perm).collect())
            }
            Images::Matrices { prime, gens } => {
                if !is_prime(*prime as u64) {
                    return Err(QuotientError::UnsupportedModulus(*prime as u64));
                }
                if gens.len() != RANK {
                    return Err(QuotientError::InvalidDatum("need six matrices".into()));
                }
                let n = gens[0].len();
                if (*prime as f64).powi(n as i32) >= 2f64.powi(127) {
                    return Err(QuotientError::TooLarge(format!("{prime}^{n} points")));
                }
                gens.iter()
                    .map(|m| {
                        if m.len() != n || m.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= *prime)) {
                            return Err(QuotientError::InvalidDatum("malformed matrix".into()));
                        }
                        let a: Vec<u32> = m.iter().flatten().copied().collect();
                        if mat_inv_det(*prime, n, &a).0.is_none() {
                            return Err(QuotientError::InvalidDatum("singular matrix".into()));
                        }
                        Ok(GroupElem::Mat { p: *prime, n, a })
                    })
                    .collect()
            }
        }
    }

    /// Checks the defining relations and the generator signs. Returns whether
    /// the parity/determinant witness confirms the sign homomorphism.
    pub fn validate(&self) -> Result<bool, QuotientError> {
        let g = self.generators()?;
        if self.signs.len() != RANK || self.signs.iter().any(|&s| s != -1) {
            return Err(QuotientError::InvalidDatum("generator signs must all be -1".into()));
        }
        for i in 0..RANK {
            if g[i].is_identity() || !g[i].mul(&g[i]).is_identity() {
                return Err(QuotientError::InvalidDatum(format!("σ{} is not an involution", i + 1)));
            }
            let j = (i + 1) % RANK;
            let st = g[i].mul(&g[j]);
            if !st.mul(&st).is_identity() {
                return Err(QuotientError::InvalidDatum(format!("(σ{} σ{})^2 ≠ 1", i + 1, j + 1)));
            }
            let j = (i + 2) % RANK;
            let st = g[i].mul(&g[j]);
            let mut pw = st.identity_like();
            for _ in 0..self.k {
                pw = pw.mul(&st);
            }
            if !pw.is_identity() {
                return Err(QuotientError::InvalidDatum(format!("(σ{} σ{})^{} ≠ 1", i + 1, j + 1, self.k)));
            }
        }
        Ok(g.iter().all(|x| x.sign_witness() == Some(-1)))
    }
}

// ---------------------------------------------------------------------------
// Schreier–Sims
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Level {
    base: u128,
    gens: Vec<usize>,
    /// point → (strong generator index, preimage point); the base maps to itself.
    tree: HashMap<u128, (usize, u128)>,
}

/// A base and strong generating set with Schreier trees.
#[derive(Debug, Clone)]
pub struct StabChain {
    strong: Vec<GroupElem>,
    strong_inv: Vec<GroupElem>,
    levels: Vec<Level>,
    candidates: Vec<u128>,
}

impl StabChain {
    fn new(sample: &GroupElem) -> Self {
        StabChain {
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            candidates: sample.base_candidates(),
        }
    }

    fn rebuild_orbit(&mut self, i: usize) -> Result<(), QuotientError> {
        let level = &mut self.levels[i];
        let mut tree = HashMap::new();
        tree.insert(level.base, (usize::MAX, level.base));
        let mut queue = VecDeque::from([level.base]);
        while let Some(x) = queue.pop_front() {
            for &g in &level.gens {
                let y = self.strong[g].apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = tree.entry(y) {
                    e.insert((g, x));
                    queue.push_back(y);
                }
            }
            if tree.len() > MAX_ORBIT {
                return Err(QuotientError::TooLarge(format!("orbit exceeds {MAX_ORBIT} points")));
            }
        }
        level.tree = tree;
        Ok(())
    }

    /// Strips `g` through the chain; returns the residue and the level at
    /// which it stopped (`levels.len()` if it passed every level).
    pub fn sift(&self, g: &GroupElem) -> (GroupElem, usize) {
        let mut g = g.clone();
        for (i, level) in self.levels.iter().enumerate() {
            let mut beta = g.apply(level.base);
            if !level.tree.contains_key(&beta) {
                return (g, i);
            }
            while beta != level.base {
                let (s, prev) = level.tree[&beta];
                g = self.strong_inv[s].mul(&g);
                beta = prev;
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        let (r, _) = self.sift(g);
        r.is_identity()
    }

    fn add_strong(&mut self, h: GroupElem, level: usize) -> Result<(), QuotientError> {
        let idx = self.strong.len();
        self.strong_inv.push(h.inverse());
        self.strong.push(h);
        if level == self.levels.len() {
            let h = &self.strong[idx];
            let base = *self
                .candidates
                .iter()
                .find(|&&b| h.apply(b) != b)
                .expect("nonidentity element moves a candidate");
            self.levels.push(Level {
                base,
                gens: Vec::new(),
                tree: HashMap::new(),
            });
        }
        for i in 0..=level {
            self.levels[i].gens.push(idx);
            self.rebuild_orbit(i)?;
        }
        Ok(())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.tree.len()))
    }

    pub fn base(&self) -> Vec<u128> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.tree.len()).collect()
    }
}

/// Randomized Schreier–Sims: random elements from product replacement are
/// sifted until `stable` consecutive ones pass.
pub fn schreier_sims(gens: &[GroupElem], seed: u64, stable: usize) -> Result<StabChain, QuotientError> {
    let mut chain = StabChain::new(&gens[0]);
    for g in gens {
        let (r, l) = chain.sift(g);
        if !r.is_identity() {
            chain.add_strong(r, l)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<GroupElem> = (0..gens.len().max(10)).map(|i| gens[i % gens.len()].clone()).collect();
    let mut acc = gens[0].identity_like();
    let step = |pool: &mut Vec<GroupElem>, acc: &mut GroupElem, rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..pool.len());
        let mut j = rng.gen_range(0..pool.len() - 1);
        if j >= i {
            j += 1;
        }
        pool[i] = if rng.gen() { pool[i].mul(&pool[j]) } else { pool[j].mul(&pool[i]) };
        *acc = acc.mul(&pool[i]);
        acc.clone()
    };
    for _ in 0..50 {
        step(&mut pool, &mut acc, &mut rng);
    }
    let mut streak = 0;
    while streak < stable {
        let g = step(&mut pool, &mut acc, &mut rng);
        let (r, l) = chain.sift(&g);
        if r.is_identity() {
            streak += 1;
        } else {
            chain.add_strong(r, l)?;
            streak = 0;
        }
    }
    Ok(chain)
}

/// All group elements in BFS order from the identity with the right
/// multiplication table `right[q][i] = index of q·σ_i`.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    pub elements: Vec<GroupElem>,
    pub right: Vec<[u32; RANK]>,
}

impl CayleyTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn closure(gens: &[GroupElem], cap: usize) -> Result<CayleyTable, QuotientError> {
    assert_eq!(gens.len(), RANK);
    let id = gens[0].identity_like();
    let mut index: HashMap<GroupElem, u32> = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id];
    let mut right: Vec<[u32; RANK]> = Vec::new();
    let mut q = 0;
    while q < elements.len() {
        let mut row = [0u32; RANK];
        for (i, g) in gens.iter().enumerate() {
            let h = elements[q].mul(g);
            row[i] = match index.get(&h) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(QuotientError::SizeCap { cap });
                    }
                    let j = elements.len() as u32;
                    index.insert(h.clone(), j);
                    elements.push(h);
                    j
                }
            };
        }
        right.push(row);
        q += 1;
    }
    Ok(CayleyTable { elements, right })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderReport {
    pub k: u32,
    #[serde(serialize_with = "crate::serde_big::big_uint")]
    pub order: BigUint,
    pub seed: u64,
    pub base_length: usize,
    pub orbit_sizes: Vec<usize>,
    pub membership_tests: usize,
    pub membership_passed: usize,
    pub closure_order: Option<usize>,
    pub log3_order: f64,
    /// `log_3` of `3^{72kφ(2k)}`.
    pub log3_index_bound: u64,
    pub sign_witness: bool,
}

pub fn log3_index_bound(k: u32) -> u64 {
    72 * k as u64 * totient(2 * k as u64)
}

/// Order of the group generated by the datum, with membership sanity tests
/// on random words and, below `closure_cap`, full enumeration.
pub fn quotient_order(datum: &QuotientDatum, seed: u64, closure_cap: usize) -> Result<OrderReport, QuotientError> {
    let sign_witness = datum.validate()?;
    let gens = datum.generators()?;
    let chain = schreier_sims(&gens, seed, 40)?;
    let order = chain.order();

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut passed = 0;
    for _ in 0..MEMBERSHIP_TESTS {
        let len = rng.gen_range(20..80);
        let mut g = gens[0].identity_like();
        for _ in 0..len {
            g = g.mul(&gens[rng.gen_range(0..RANK)]);
        }
        passed += usize::from(chain.contains(&g));
    }
    if passed != MEMBERSHIP_TESTS {
        return Err(QuotientError::VerificationFailed(format!(
            "{passed}/{MEMBERSHIP_TESTS} random words sift"
        )));
    }

    let closure_order = if order <= BigUint::from(closure_cap) {
        let t = closure(&gens, closure_cap)?;
        if BigUint::from(t.len()) != order {
            return Err(QuotientError::VerificationFailed(format!(
                "stabilizer chain gives {order}, closure gives {}",
                t.len()
            )));
        }
        Some(t.len())
    } else {
        None
    };
    let log3_order = log3_big(&order);
    Ok(OrderReport {
        k: datum.k,
        order,
        seed,
        base_length: chain.base().len(),
        orbit_sizes: chain.orbit_sizes(),
        membership_tests: MEMBERSHIP_TESTS,
        membership_passed: passed,
        closure_order,
        log3_order,
        log3_index_bound: log3_index_bound(datum.k),
        sign_witness,
    })
}

fn log3_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    let (top, shift) = if bits > 64 { (n >> (bits - 64), bits - 64) } else { (n.clone(), 0) };
    (top.to_f64().expect("fits").ln() + shift as f64 * 2f64.ln()) / 3f64.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transposition(n: u32, a: u32, b: u32) -> Vec<u32> {
        (0..n).map(|x| if x == a { b } else if x == b { a } else { x }).collect()
    }

    /// S3 × S3 with red generators acting on {0,1,2} and blue on {3,4,5}.
    pub(crate) fn s3_squared() -> QuotientDatum {
        let red = [(0, 1), (1, 2), (0, 2)];
        let blue = [(3, 4), (4, 5), (3, 5)];
        let perms = (0..6)
            .map(|i| {
                let (a, b) = if i % 2 == 0 { red[i / 2] } else { blue[i / 2] };
                transposition(6, a, b)
            })
            .collect();
        QuotientDatum::from_permutations(3, perms)
    }

    #[test]
    fn toy_order_matches_closure() {
        let d = s3_squared();
        assert!(d.validate().unwrap());
        let r = quotient_order(&d, 1, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(r.order, BigUint::from(36u32));
        assert_eq!(r.closure_order, Some(36));
        assert_eq!(r.membership_passed, 100);
    }

    #[test]
    fn relations_are_checked() {
        let mut d = s3_squared();
        if let Images::Permutations(p) = &mut d.images {
            p[1] = transposition(6, 0, 3);
        }
        assert!(matches!(d.validate(), Err(QuotientError::InvalidDatum(_))));
    }

    #[test]
    fn tits_mod_p() {
        let d = QuotientDatum::from_tits(3, 3).unwrap();
        assert!(d.validate().unwrap());
        let a = quotient_order(&d, 1, DEFAULT_CLOSURE_CAP).unwrap();
        let b = quotient_order(&d, 2, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(a.order, b.order);
        assert!(matches!(QuotientDatum::from_tits(3, 9), Err(QuotientError::UnsupportedModulus(9))));
    }

    #[test]
    fn matrix_inverse_and_det() {
        let (inv, det) = mat_inv_det(5, 2, &[1, 2, 3, 4]);
        assert_eq!(det, 3);
        let inv = inv.unwrap();
        assert_eq!(mat_mul(5, 2, &[1, 2, 3, 4], &inv), vec![1, 0, 0, 1]);
    }

    #[test]
    fn bound_exponent() {
        assert_eq!(log3_index_bound(6), 1728);
    }

    #[test]
    fn datum_json_roundtrip() {
        let d = s3_squared();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"permutations\""));
        let back: QuotientDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
