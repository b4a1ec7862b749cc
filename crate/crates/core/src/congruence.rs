//! Balls in the Cayley graph of W(k), reduction of ρ modulo 3^m, and
//! certificates that the congruence kernel avoids a ball.
//!
//! `w` lies in the congruence subgroup at exponent `m` when the E-coordinates
//! of `ρ(w) − 1` are all divisible by `3^m`.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coxeter::{reduce, CoxeterMatrix, Gen, Word};
use crate::tits::{Mat6, TitsElement, TitsError, TitsRep, RANK};

pub const DEFAULT_BALL_CAP: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum CongruenceError {
    #[error(transparent)]
    Tits(#[from] TitsError),
    #[error("ball of radius {radius} exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize, radius: usize },
    #[error("cache file: {0}")]
    Io(String),
    #[error("cache file does not match: {0}")]
    CacheMismatch(String),
    #[error("exponent must be at least 1")]
    BadExponent,
    #[error("exhaustive and analytic certificates disagree: {0}")]
    Inconsistent(String),
}

impl From<std::io::Error> for CongruenceError {
    fn from(e: std::io::Error) -> Self {
        CongruenceError::Io(e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct BallElement {
    pub depth: usize,
    pub witness: Word,
    pub element: TitsElement,
}

/// The ball `B_n` of elements of length at most `n`, in BFS order.
#[derive(Debug, Clone)]
pub struct Ball {
    pub k: u32,
    pub radius: usize,
    pub elements: Vec<BallElement>,
    index: HashMap<Mat6, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheHeader {
    k: u32,
    radius: usize,
    count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheRecord {
    depth: usize,
    witness: Word,
    key: String,
}

/// Stable short hash of a matrix.
pub fn matrix_key(m: &Mat6) -> String {
    let mut h = Sha256::new();
    for x in m.entries() {
        for c in x.coeffs() {
            h.update(c.to_signed_bytes_le());
            h.update([0xff]);
        }
        h.update([0xfe]);
    }
    h.finalize()[..12].iter().map(|b| format!("{b:02x}")).collect()
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `|B_r|` for `r = 0..=radius`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for e in &self.elements {
            sizes[e.depth] += 1;
        }
        for r in 1..sizes.len() {
            sizes[r] += sizes[r - 1];
        }
        sizes
    }

    pub fn find(&self, m: &Mat6) -> Option<&BallElement> {
        self.index.get(m).map(|&i| &self.elements[i])
    }

    /// Every element of depth `d < radius` has its six right neighbours in the
    /// ball at depth `d ± 1`, and `det ρ(w) = (−1)^d`.
    pub fn check_closure(&self, rep: &TitsRep) -> bool {
        self.elements.par_iter().all(|e| {
            let det = rep.det(&e.element.matrix);
            let sign = if e.depth % 2 == 0 { 1 } else { -1 };
            if det != rep.ctx().from_int(sign) {
                return false;
            }
            if e.depth >= self.radius {
                return true;
            }
            (0..RANK).all(|g| {
                let n = rep.right_mul_gen(&e.element, g);
                match self.find(&n.matrix) {
                    Some(f) => f.depth + 1 == e.depth || f.depth == e.depth + 1,
                    None => false,
                }
            })
        })
    }

    pub fn write_cache(&self, path: &Path) -> Result<(), CongruenceError> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        let header = CacheHeader {
            k: self.k,
            radius: self.radius,
            count: self.len(),
        };
        writeln!(out, "{}", serde_json::to_string(&header).expect("header serializes"))?;
        for e in &self.elements {
            let rec = CacheRecord {
                depth: e.depth,
                witness: e.witness.clone(),
                key: matrix_key(&e.element.matrix),
            };
            writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes"))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Rebuilds a ball from its cache file, recomputing every matrix from its
    /// witness word and checking the stored key.
    pub fn read_cache(rep: &TitsRep, path: &Path) -> Result<Ball, CongruenceError> {
        let mut lines = BufReader::new(fs::File::open(path)?).lines();
        let header: CacheHeader = match lines.next() {
            Some(l) => serde_json::from_str(&l?).map_err(|e| CongruenceError::CacheMismatch(e.to_string()))?,
            None => return Err(CongruenceError::CacheMismatch("empty file".into())),
        };
        if header.k != rep.k() {
            return Err(CongruenceError::CacheMismatch(format!("k = {} in file", header.k)));
        }
        let mut records = Vec::with_capacity(header.count);
        for line in lines {
            let rec: CacheRecord =
                serde_json::from_str(&line?).map_err(|e| CongruenceError::CacheMismatch(e.to_string()))?;
            records.push(rec);
        }
        if records.len() != header.count {
            return Err(CongruenceError::CacheMismatch("record count".into()));
        }
        let elements: Vec<BallElement> = records
            .into_par_iter()
            .map(|rec| {
                let element = rep.rho_element(&rec.witness);
                if matrix_key(&element.matrix) != rec.key || rec.witness.len() != rec.depth {
                    return Err(CongruenceError::CacheMismatch(format!("record {}", rec.witness)));
                }
                Ok(BallElement {
                    depth: rec.depth,
                    witness: rec.witness,
                    element,
                })
            })
            .collect::<Result<_, _>>()?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.element.matrix.clone(), i))
            .collect::<HashMap<_, _>>();
        if index.len() != elements.len() {
            return Err(CongruenceError::CacheMismatch("duplicate elements".into()));
        }
        Ok(Ball {
            k: header.k,
            radius: header.radius,
            elements,
            index,
        })
    }
}

/// Breadth-first enumeration of `B_radius` under right multiplication by the
/// generators, deduplicated by exact matrix.
///
/// Frontiers are expanded in parallel; new elements are merged in frontier
/// order so the result does not depend on the thread count.
pub fn ball_enumerate(rep: &TitsRep, radius: usize, cap: usize) -> Result<Ball, CongruenceError> {
    let mut elements = vec![BallElement {
        depth: 0,
        witness: Word::default(),
        element: rep.identity_element(),
    }];
    let mut index: HashMap<Mat6, usize> = HashMap::new();
    index.insert(rep.identity(), 0);
    let mut frontier: Vec<usize> = vec![0];
    for depth in 1..=radius {
        let expanded: Vec<Vec<(Gen, TitsElement)>> = frontier
            .par_iter()
            .map(|&i| {
                let e = &elements[i];
                let last = e.witness.letters().last().copied();
                (0..RANK)
                    .filter(|&g| Some(g) != last)
                    .map(|g| (g, rep.right_mul_gen(&e.element, g)))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (&parent, children) in frontier.iter().zip(expanded) {
            for (g, element) in children {
                if index.contains_key(&element.matrix) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(CongruenceError::CapExceeded { cap, radius });
                }
                let mut witness = elements[parent].witness.clone();
                witness.0.push(g);
                index.insert(element.matrix.clone(), elements.len());
                next.push(elements.len());
                elements.push(BallElement {
                    depth,
                    witness,
                    element,
                });
            }
        }
        frontier = next;
    }
    Ok(Ball {
        k: rep.k(),
        radius,
        elements,
        index,
    })
}

/// Loads the ball from `path` if it holds the same `k` and radius, otherwise
/// enumerates it and writes the file.
pub fn ball_enumerate_cached(rep: &TitsRep, radius: usize, cap: usize, path: &Path) -> Result<Ball, CongruenceError> {
    if path.exists() {
        if let Ok(ball) = Ball::read_cache(rep, path) {
            if ball.radius == radius {
                return Ok(ball);
            }
        }
    }
    let ball = ball_enumerate(rep, radius, cap)?;
    ball.write_cache(path)?;
    Ok(ball)
}

/// `|B_r|` for `r = 0..=radius` by enumerating canonical reduced words, with
/// no use of the representation.
pub fn word_ball_sizes(m: &CoxeterMatrix, radius: usize) -> Vec<usize> {
    let mut level: BTreeSet<Word> = BTreeSet::from([Word::default()]);
    let mut sizes = vec![1];
    for n in 1..=radius {
        let next: BTreeSet<Word> = level
            .par_iter()
            .flat_map_iter(|w| {
                (0..m.size()).filter_map(move |g| {
                    let mut v = w.0.clone();
                    v.push(g);
                    let r = reduce(&Word(v), m, usize::MAX).expect("letters in range");
                    (r.word.len() == n).then_some(r.word)
                })
            })
            .collect();
        sizes.push(sizes[n - 1] + next.len());
        level = next;
    }
    sizes
}

// ---------------------------------------------------------------------------
// Reduction modulo 3^m
// ---------------------------------------------------------------------------

/// A 6×6 matrix with entries in `(Z/M)[c]/psi`, coefficients in `[0, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ModMatrix {
    #[serde(serialize_with = "crate::serde_big::big_int")]
    pub modulus: BigInt,
    pub entries: Vec<Vec<Vec<BigInt>>>,
}

impl ModMatrix {
    fn reduce(rep: &TitsRep, m: &Mat6, modulus: &BigInt) -> ModMatrix {
        let entries = m
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| rep.ctx().mod_reduce(x, modulus).expect("modulus ≥ 2").coeffs)
                    .collect()
            })
            .collect();
        ModMatrix {
            modulus: modulus.clone(),
            entries,
        }
    }

    fn lift(&self, rep: &TitsRep) -> Mat6 {
        let entries = self
            .entries
            .iter()
            .flatten()
            .map(|x| rep.ctx().element(x.clone()).expect("degree matches"))
            .collect();
        Mat6::from_entries(entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().flatten().all(|c| c == &BigInt::from(0))
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(r, row)| {
            row.iter().enumerate().all(|(c, x)| {
                x.iter()
                    .enumerate()
                    .all(|(j, a)| *a == BigInt::from((r == c && j == 0) as i32))
            })
        })
    }
}

/// Image of `w` modulo `3^m`: the matrix `ρ(w)` and the E-coordinates of
/// `ρ(w) − 1`, both reduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceImage {
    pub matrix: ModMatrix,
    pub coords: ModMatrix,
}

impl CongruenceImage {
    /// Membership in the congruence subgroup.
    pub fn is_trivial(&self) -> bool {
        self.coords.is_zero()
    }
}

pub fn pow3(m: u32) -> BigInt {
    BigInt::from(3).pow(m)
}

pub fn image_of(rep: &TitsRep, e: &TitsElement, m: u32) -> CongruenceImage {
    let modulus = pow3(m);
    CongruenceImage {
        matrix: ModMatrix::reduce(rep, &e.matrix, &modulus),
        coords: ModMatrix::reduce(rep, &e.coords, &modulus),
    }
}

pub fn congruence_image(rep: &TitsRep, w: &Word, m: u32) -> Result<CongruenceImage, CongruenceError> {
    if m == 0 {
        return Err(CongruenceError::BadExponent);
    }
    Ok(image_of(rep, &rep.rho_element(w), m))
}

pub fn in_h(rep: &TitsRep, w: &Word, m: u32) -> Result<bool, CongruenceError> {
    Ok(congruence_image(rep, w, m)?.is_trivial())
}

/// Product of two images: matrices multiply, coordinates compose by
/// `x ∘ y = x + y + x·B·y`.
pub fn compose_images(rep: &TitsRep, a: &CongruenceImage, b: &CongruenceImage) -> CongruenceImage {
    let modulus = &a.matrix.modulus;
    let matrix = rep.mul(&a.matrix.lift(rep), &b.matrix.lift(rep));
    let coords = rep.compose_coords(&a.coords.lift(rep), &b.coords.lift(rep));
    CongruenceImage {
        matrix: ModMatrix::reduce(rep, &matrix, modulus),
        coords: ModMatrix::reduce(rep, &coords, modulus),
    }
}

// ---------------------------------------------------------------------------
// Ball avoidance
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AvoidanceCertificate {
    pub k: u32,
    pub m: u32,
    pub radius_checked: usize,
    /// Largest `r ≤ radius_checked` with no nontrivial element of `B_r` in the kernel.
    pub exhaustive_radius: usize,
    /// Radius guaranteed by the norm bound: `m`.
    pub analytic_radius: usize,
    /// Enumerated elements on which `∥ρ(w) − 1∥ < 3^{l(w)}` was confirmed.
    pub norm_checked: usize,
    pub norm_failures: usize,
    pub guaranteed_radius: usize,
    /// Whether the guaranteed radius reaches `4k`.
    pub covers_4k: bool,
    pub pass: bool,
    /// Shortest kernel element found, if any.
    pub kernel_witness: Option<Word>,
}

/// Certifies that no nontrivial element of `B_radius` lies in the kernel of
/// reduction mod `3^m`, exhaustively and through the norm bound.
pub fn ball_avoidance_certificate(rep: &TitsRep, m: u32, ball: &Ball) -> Result<AvoidanceCertificate, CongruenceError> {
    if m == 0 {
        return Err(CongruenceError::BadExponent);
    }
    let modulus = pow3(m);
    let kernel: Option<&BallElement> = ball
        .elements
        .par_iter()
        .filter(|e| e.depth > 0 && e.element.coords.entries().iter().all(|x| x.divisible_by(&modulus)))
        .min_by_key(|e| (e.depth, e.witness.clone()));
    let exhaustive_radius = kernel.map_or(ball.radius, |e| e.depth - 1);

    let norm = rep.check_norm_growth(
        ball.elements
            .iter()
            .filter(|e| e.depth > 0)
            .map(|e| (&e.element.coords, e.depth)),
    );
    if norm.failures > 0 {
        return Err(TitsError::BoundViolated(format!("{} ball elements", norm.failures)).into());
    }
    let analytic_radius = m as usize;
    if let Some(e) = kernel {
        if e.depth <= analytic_radius {
            return Err(CongruenceError::Inconsistent(format!(
                "{} of length {} lies in the kernel mod 3^{m}",
                e.witness, e.depth
            )));
        }
    }
    let guaranteed_radius = analytic_radius.max(exhaustive_radius);
    Ok(AvoidanceCertificate {
        k: rep.k(),
        m,
        radius_checked: ball.radius,
        exhaustive_radius,
        analytic_radius,
        norm_checked: norm.checked,
        norm_failures: norm.failures,
        guaranteed_radius,
        covers_4k: guaranteed_radius >= 4 * rep.k() as usize,
        pass: kernel.is_none(),
        kernel_witness: kernel.map(|e| e.witness.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn small_ball_sizes() {
        for k in 3..=5 {
            let rep = TitsRep::new(k).unwrap();
            let ball = ball_enumerate(&rep, 2, DEFAULT_BALL_CAP).unwrap();
            assert_eq!(ball.sizes(), vec![1, 7, 31]);
            assert!(ball.check_closure(&rep));
        }
    }

    #[test]
    fn word_oracle_agrees() {
        let rep = TitsRep::new(4).unwrap();
        let ball = ball_enumerate(&rep, 4, DEFAULT_BALL_CAP).unwrap();
        assert_eq!(ball.sizes(), word_ball_sizes(&rep.coxeter_matrix(), 4));
    }

    #[test]
    fn girth_four() {
        let rep = TitsRep::new(4).unwrap();
        assert!(rep.is_identity(&rep.rho(&w("1,2,1,2"))));
        let ball = ball_enumerate(&rep, 3, DEFAULT_BALL_CAP).unwrap();
        // no loop of length < 4: every word of length ≤ 3 with no immediate
        // backtrack gives a distinct element or a shorter one
        assert_eq!(ball.sizes()[1], 7);
    }

    #[test]
    fn membership_examples() {
        let rep = TitsRep::new(4).unwrap();
        assert!(in_h(&rep, &Word::default(), 3).unwrap());
        for m in 1..5 {
            assert!(!in_h(&rep, &w("1"), m).unwrap());
        }
        assert!(matches!(in_h(&rep, &w("1"), 0), Err(CongruenceError::BadExponent)));
    }

    #[test]
    fn images_multiply() {
        let rep = TitsRep::new(6).unwrap();
        let a = w("1,3,2,5");
        let b = w("6,4,4,2,1");
        let ab = a.concat(&b);
        let ia = congruence_image(&rep, &a, 2).unwrap();
        let ib = congruence_image(&rep, &b, 2).unwrap();
        assert_eq!(compose_images(&rep, &ia, &ib), congruence_image(&rep, &ab, 2).unwrap());
    }

    #[test]
    fn avoidance_small() {
        let rep = TitsRep::new(4).unwrap();
        let ball = ball_enumerate(&rep, 2, DEFAULT_BALL_CAP).unwrap();
        let cert = ball_avoidance_certificate(&rep, 1, &ball).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.exhaustive_radius, 2);
        assert_eq!(cert.norm_failures, 0);
    }

    #[test]
    fn cache_roundtrip() {
        let rep = TitsRep::new(5).unwrap();
        let ball = ball_enumerate(&rep, 3, DEFAULT_BALL_CAP).unwrap();
        let dir = std::env::temp_dir().join(format!("coxsys-ball-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("b.jsonl");
        ball.write_cache(&path).unwrap();
        let back = Ball::read_cache(&rep, &path).unwrap();
        assert_eq!(back.sizes(), ball.sizes());
        assert_eq!(back.elements.len(), ball.elements.len());
        let other = TitsRep::new(4).unwrap();
        assert!(Ball::read_cache(&other, &path).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
