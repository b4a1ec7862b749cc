//! Tessellated surfaces built from finite quotients of W(k).
//!
//! Tiles are the elements of the quotient `Q`; tile `q` meets `q·σ_i` along
//! its index-`i` side. Corners of type `(i, i+1)` are the cosets
//! `q·⟨σ_i, σ_{i+1}⟩`, and the index-`i` sides line up into closed curves.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics;
use crate::congruence::AvoidanceCertificate;
use crate::coxeter::one_based;
use crate::quotient::{closure, quotient_order, QuotientDatum, QuotientError};
use crate::tits::RANK;

pub const DEFAULT_TILE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    /// `σ_i σ_{i+1} = 1`; `i` is 1-based.
    #[error("CONDITION_11_1_VIOLATED: σ{i}·σ{} = 1", i % RANK + 1)]
    AdjacentCoincide { i: usize },
    /// `(σ_{i-1} σ_{i+1})` has order `l < k`; `i` is the 1-based middle index.
    #[error("CONDITION_11_2_VIOLATED: i = {i}, l = {l}")]
    ShortProduct { i: usize, l: u64 },
    #[error("EARLY_CURVE_CLOSURE: index-{index} curve closed after {steps} sides")]
    EarlyCurveClosure { index: usize, steps: usize },
    #[error("NONORIENTABLE: sign map inconsistent at tile {tile}")]
    Nonorientable { tile: u32 },
    #[error("COUNTS_ONLY: no explicit complex to export")]
    CountsOnly,
    #[error("IO_ERROR: {0}")]
    Io(String),
    #[error("malformed surface: {0}")]
    Malformed(String),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub id: u32,
    /// `+1` for P, `-1` for P̄.
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    #[serde(with = "one_based")]
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    #[serde(with = "one_based")]
    pub index: usize,
    /// Positions in the edge list, in tracing order.
    pub sides: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TessellatedSurface {
    pub k: u32,
    pub f0: u64,
    pub f1: u64,
    pub f2: u64,
    pub genus: u64,
    pub tiles: Vec<Tile>,
    pub edges: Vec<Edge>,
    pub curves: Vec<Curve>,
}

/// What is known about a quotient too large to build explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SurfaceCounts {
    pub k: u32,
    #[serde(serialize_with = "crate::serde_big::big_uint")]
    pub f0: BigUint,
    #[serde(serialize_with = "crate::serde_big::big_uint")]
    pub f1: BigUint,
    #[serde(serialize_with = "crate::serde_big::big_uint")]
    pub f2: BigUint,
    #[serde(serialize_with = "crate::serde_big::big_uint")]
    pub genus: BigUint,
    #[serde(serialize_with = "crate::serde_big::big_uint")]
    pub curve_count: BigUint,
    /// Whether the determinant witness confirms the sign map.
    pub orientability_witness: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceBuild {
    Explicit(TessellatedSurface),
    CountsOnly(SurfaceCounts),
}

impl SurfaceBuild {
    pub fn explicit(&self) -> Result<&TessellatedSurface, SurfaceError> {
        match self {
            SurfaceBuild::Explicit(s) => Ok(s),
            SurfaceBuild::CountsOnly(_) => Err(SurfaceError::CountsOnly),
        }
    }
}

/// Checks the regularity gates on the generator images.
pub fn check_gates(datum: &QuotientDatum) -> Result<(), SurfaceError> {
    let g = datum.generators()?;
    for i in 0..RANK {
        if g[i].mul(&g[(i + 1) % RANK]).is_identity() {
            return Err(SurfaceError::AdjacentCoincide { i: i + 1 });
        }
    }
    for i in 0..RANK {
        let t = g[(i + RANK - 1) % RANK].mul(&g[(i + 1) % RANK]);
        let l = t.order(datum.k as u64).unwrap_or(u64::MAX);
        if l != datum.k as u64 {
            return Err(SurfaceError::ShortProduct { i: i + 1, l });
        }
    }
    Ok(())
}

/// Builds the surface, or a counts-only report when `|Q|` exceeds `tile_cap`.
pub fn build_surface(datum: &QuotientDatum, tile_cap: usize, seed: u64) -> Result<SurfaceBuild, SurfaceError> {
    let witness = datum.validate()?;
    check_gates(datum)?;
    let gens = datum.generators()?;
    let table = match closure(&gens, tile_cap) {
        Ok(t) => t,
        Err(QuotientError::SizeCap { .. }) => {
            let r = quotient_order(datum, seed, 0)?;
            return counts_only(datum.k, r.order, witness).map(SurfaceBuild::CountsOnly);
        }
        Err(e) => return Err(e.into()),
    };
    from_table(datum.k, &table.right).map(SurfaceBuild::Explicit)
}

fn counts_only(k: u32, f2: BigUint, witness: bool) -> Result<SurfaceCounts, SurfaceError> {
    if !(&f2 % 4u32).is_zero() {
        return Err(SurfaceError::Malformed(format!("|Q| = {f2} is not divisible by 4")));
    }
    let f1 = &f2 * 3u32;
    let f0 = &f1 / 2u32;
    let genus = &f2 / 4u32 + 1u32;
    let curve_count = &f1 / (2 * k);
    Ok(SurfaceCounts {
        k,
        f0,
        f1,
        f2,
        genus,
        curve_count,
        orientability_witness: witness,
    })
}

/// Builds the complex from a right-multiplication table `right[q][i] = q·σ_i`.
pub fn from_table(k: u32, right: &[[u32; RANK]]) -> Result<TessellatedSurface, SurfaceError> {
    let n = right.len();
    let signs = two_color(right)?;
    let tiles: Vec<Tile> = (0..n as u32).map(|id| Tile { id, sign: signs[id as usize] }).collect();

    let mut edges = Vec::new();
    let mut edge_of: HashMap<(u32, usize), u32> = HashMap::new();
    for q in 0..n as u32 {
        for i in 0..RANK {
            let r = right[q as usize][i];
            if q < r {
                let id = edges.len() as u32;
                edges.push(Edge { a: q, b: r, index: i });
                edge_of.insert((q, i), id);
                edge_of.insert((r, i), id);
            }
        }
    }

    let curves = trace_curves(k, right, &edges, &edge_of)?;
    let f2 = n as u64;
    let f1 = edges.len() as u64;
    let f0 = vertex_count(right) as u64;
    let chi = f0 as i64 - f1 as i64 + f2 as i64;
    if chi % 2 != 0 || chi > 2 {
        return Err(SurfaceError::Malformed(format!("Euler characteristic {chi}")));
    }
    let genus = ((2 - chi) / 2) as u64;
    if f2 % 4 != 0 || genus != 1 + f2 / 4 {
        return Err(SurfaceError::Malformed(format!("genus {genus} ≠ 1 + {f2}/4")));
    }
    Ok(TessellatedSurface {
        k,
        f0,
        f1,
        f2,
        genus,
        tiles,
        edges,
        curves,
    })
}

fn two_color(right: &[[u32; RANK]]) -> Result<Vec<i8>, SurfaceError> {
    let mut sign = vec![0i8; right.len()];
    if right.is_empty() {
        return Ok(sign);
    }
    sign[0] = 1;
    let mut stack = vec![0u32];
    while let Some(q) = stack.pop() {
        for &r in &right[q as usize] {
            let want = -sign[q as usize];
            match sign[r as usize] {
                0 => {
                    sign[r as usize] = want;
                    stack.push(r);
                }
                s if s != want => return Err(SurfaceError::Nonorientable { tile: r }),
                _ => {}
            }
        }
    }
    if let Some(q) = sign.iter().position(|&s| s == 0) {
        return Err(SurfaceError::Malformed(format!("tile {q} unreachable")));
    }
    Ok(sign)
}

/// Distinct corner cosets `q·⟨σ_i, σ_{i+1}⟩`, each required to have four tiles.
fn vertex_count(right: &[[u32; RANK]]) -> usize {
    let mut seen: HashMap<(usize, [u32; 4]), ()> = HashMap::new();
    for q in 0..right.len() {
        for i in 0..RANK {
            seen.insert((i, corner(right, q as u32, i)), ());
        }
    }
    seen.len()
}

fn corner(right: &[[u32; RANK]], q: u32, i: usize) -> [u32; 4] {
    let j = (i + 1) % RANK;
    let a = right[q as usize][i];
    let b = right[q as usize][j];
    let mut c = [q, a, b, right[a as usize][j]];
    c.sort_unstable();
    c
}

fn trace_curves(
    k: u32,
    right: &[[u32; RANK]],
    edges: &[Edge],
    edge_of: &HashMap<(u32, usize), u32>,
) -> Result<Vec<Curve>, SurfaceError> {
    let target = 2 * k as usize;
    let mut used = vec![false; edges.len()];
    let mut curves = Vec::new();
    for seed in 0..edges.len() {
        if used[seed] {
            continue;
        }
        let i = edges[seed].index;
        let up = (i + 1) % RANK;
        let down = (i + RANK - 1) % RANK;
        let mut anchor = edges[seed].a;
        let mut sides = vec![seed as u32];
        used[seed] = true;
        loop {
            let step = if sides.len() % 2 == 1 { up } else { down };
            anchor = right[anchor as usize][step];
            let e = edge_of[&(anchor, i)];
            if e as usize == seed {
                break;
            }
            if used[e as usize] || sides.len() >= target {
                return Err(SurfaceError::EarlyCurveClosure { index: i + 1, steps: sides.len() });
            }
            used[e as usize] = true;
            sides.push(e);
        }
        if sides.len() != target {
            return Err(SurfaceError::EarlyCurveClosure { index: i + 1, steps: sides.len() });
        }
        curves.push(Curve { index: i, sides });
    }
    Ok(curves)
}

/// Outcome of [`TessellatedSurface::check_invariants`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantReport {
    pub f1_is_3f2: bool,
    pub f0_is_half_f1: bool,
    pub euler_genus: bool,
    pub genus_formula: bool,
    pub corners_have_four_tiles: bool,
    pub curves_have_2k_sides: bool,
    pub side_cover_exact: bool,
    pub signs_alternate: bool,
    pub gauss_bonnet: bool,
}

impl InvariantReport {
    pub fn all(&self) -> bool {
        self.f1_is_3f2
            && self.f0_is_half_f1
            && self.euler_genus
            && self.genus_formula
            && self.corners_have_four_tiles
            && self.curves_have_2k_sides
            && self.side_cover_exact
            && self.signs_alternate
            && self.gauss_bonnet
    }
}

impl TessellatedSurface {
    /// Neighbor table recovered from the edge list.
    pub fn neighbors(&self) -> Result<Vec<[u32; RANK]>, SurfaceError> {
        let n = self.tiles.len();
        let mut nb = vec![[u32::MAX; RANK]; n];
        for e in &self.edges {
            let (a, b) = (e.a as usize, e.b as usize);
            if a >= n || b >= n || e.index >= RANK {
                return Err(SurfaceError::Malformed(format!("edge {e:?} out of range")));
            }
            for (x, y) in [(a, e.b), (b, e.a)] {
                if nb[x][e.index] != u32::MAX {
                    return Err(SurfaceError::Malformed(format!("tile {x} has two index-{} sides", e.index + 1)));
                }
                nb[x][e.index] = y;
            }
        }
        if nb.iter().flatten().any(|&x| x == u32::MAX) {
            return Err(SurfaceError::Malformed("tile with a missing side".into()));
        }
        Ok(nb)
    }

    /// Recomputes every structural invariant from tiles, edges and curves.
    pub fn check_invariants(&self) -> Result<InvariantReport, SurfaceError> {
        let nb = self.neighbors()?;
        let f2 = self.tiles.len() as u64;
        let f1 = self.edges.len() as u64;

        let mut corners: HashMap<(usize, [u32; 4]), usize> = HashMap::new();
        let mut four = true;
        for q in 0..nb.len() as u32 {
            for i in 0..RANK {
                let c = corner(&nb, q, i);
                four &= c.windows(2).all(|w| w[0] != w[1]);
                *corners.entry((i, c)).or_insert(0) += 1;
            }
        }
        four &= corners.values().all(|&m| m == 4);
        let f0 = corners.len() as u64;
        let chi = f0 as i64 - f1 as i64 + f2 as i64;

        let target = 2 * self.k as usize;
        let mut cover = vec![0usize; self.edges.len()];
        let mut lengths = true;
        for c in &self.curves {
            lengths &= c.sides.len() == target;
            for &s in &c.sides {
                match self.edges.get(s as usize) {
                    Some(e) if e.index == c.index => cover[s as usize] += 1,
                    _ => lengths = false,
                }
            }
        }
        let signs = self.edges.iter().all(|e| {
            self.tiles[e.a as usize].sign == -self.tiles[e.b as usize].sign
        });
        let area = f2 as f64 * std::f64::consts::PI;
        let gb = 4.0 * std::f64::consts::PI * (self.genus as f64 - 1.0);
        Ok(InvariantReport {
            f1_is_3f2: f1 == 3 * f2 && self.f1 == f1 && self.f2 == f2,
            f0_is_half_f1: 2 * f0 == f1 && self.f0 == f0,
            euler_genus: 2 - 2 * self.genus as i64 == chi,
            genus_formula: f2 % 4 == 0 && self.genus == 1 + f2 / 4,
            corners_have_four_tiles: four,
            curves_have_2k_sides: lengths,
            side_cover_exact: cover.iter().all(|&m| m == 1),
            signs_alternate: signs,
            gauss_bonnet: (area - gb).abs() <= 1e-9 * area.max(1.0),
        })
    }
}

pub fn export_surface(build: &SurfaceBuild, path: &Path) -> Result<(), SurfaceError> {
    let s = build.explicit()?;
    let text = serde_json::to_string(s).map_err(|e| SurfaceError::Io(e.to_string()))?;
    fs::write(path, text).map_err(|e| SurfaceError::Io(e.to_string()))
}

pub fn import_surface(path: &Path) -> Result<TessellatedSurface, SurfaceError> {
    let text = fs::read_to_string(path).map_err(|e| SurfaceError::Io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| SurfaceError::Malformed(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SystoleReport {
    pub k: u32,
    pub genus: u64,
    pub curve_count: usize,
    /// `6(g−1)/k`.
    pub curve_count_formula: f64,
    /// `2k·arcosh 2`.
    pub curve_length: f64,
    pub area: f64,
    pub gauss_bonnet_area: f64,
    pub gauss_bonnet_consistent: bool,
    /// The bound `57g/(√(ln g)·√(lnlnln g))`, defined for `g ≥ 16`.
    pub count_bound: Option<f64>,
    /// Curves are only certified systoles when an attached certificate reaches `4k`.
    pub certified: bool,
}

pub fn systole_report(s: &TessellatedSurface, certificate: Option<&AvoidanceCertificate>) -> SystoleReport {
    let area = s.f2 as f64 * std::f64::consts::PI;
    let gb = 4.0 * std::f64::consts::PI * (s.genus as f64 - 1.0);
    let certified = certificate.is_some_and(|c| {
        c.k == s.k && c.pass && c.guaranteed_radius >= 4 * s.k as usize
    });
    SystoleReport {
        k: s.k,
        genus: s.genus,
        curve_count: s.curves.len(),
        curve_count_formula: 6.0 * (s.genus as f64 - 1.0) / s.k as f64,
        curve_length: 2.0 * s.k as f64 * 2f64.acosh(),
        area,
        gauss_bonnet_area: gb,
        gauss_bonnet_consistent: (area - gb).abs() <= 1e-9 * area.max(1.0),
        count_bound: asymptotics::fill_bound(s.genus as f64).ok(),
        certified,
    }
}

impl SurfaceCounts {
    pub fn genus_f64(&self) -> f64 {
        self.genus.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{Images, QuotientDatum};

    fn transposition(n: u32, a: u32, b: u32) -> Vec<u32> {
        (0..n).map(|x| if x == a { b } else if x == b { a } else { x }).collect()
    }

    fn s3_squared() -> QuotientDatum {
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
    fn product_of_triangle_quotients() {
        let b = build_surface(&s3_squared(), DEFAULT_TILE_CAP, 1).unwrap();
        let s = b.explicit().unwrap();
        assert_eq!((s.f0, s.f1, s.f2, s.genus), (54, 108, 36, 10));
        assert_eq!(s.curves.len(), 18);
        assert!(s.curves.iter().all(|c| c.sides.len() == 6));
        assert!(s.check_invariants().unwrap().all());
        let r = systole_report(s, None);
        assert_eq!(r.curve_count as f64, r.curve_count_formula);
        assert!(!r.certified);
        assert!(r.count_bound.is_none());
    }

    #[test]
    fn counts_only_above_cap() {
        let b = build_surface(&s3_squared(), 10, 1).unwrap();
        match &b {
            SurfaceBuild::CountsOnly(c) => {
                assert_eq!(c.f2, BigUint::from(36u32));
                assert_eq!(c.genus, BigUint::from(10u32));
                assert_eq!(c.curve_count, BigUint::from(18u32));
            }
            _ => panic!("expected counts only"),
        }
        let path = std::env::temp_dir().join("coxsys_counts_only.json");
        assert_eq!(export_surface(&b, &path), Err(SurfaceError::CountsOnly));
    }

    #[test]
    fn gate_on_short_red_product() {
        // σ1 = σ3 = σ5 makes σ1σ3 trivial, so l = 1
        let mut d = s3_squared();
        if let Images::Permutations(p) = &mut d.images {
            p[2] = p[0].clone();
            p[4] = p[0].clone();
        }
        assert_eq!(check_gates(&d), Err(SurfaceError::ShortProduct { i: 2, l: 1 }));
    }

    #[test]
    fn round_trip() {
        let b = build_surface(&s3_squared(), DEFAULT_TILE_CAP, 1).unwrap();
        let path = std::env::temp_dir().join(format!("coxsys_surface_{}.json", std::process::id()));
        export_surface(&b, &path).unwrap();
        let back = import_surface(&path).unwrap();
        let _ = fs::remove_file(&path);
        assert_eq!(&back, b.explicit().unwrap());
        assert!(back.check_invariants().unwrap().all());
    }

    #[test]
    fn nonorientable_table_is_rejected() {
        // a triangle of tiles cannot be 2-colored
        let right = vec![[1, 2, 1, 2, 1, 2], [0, 2, 0, 2, 0, 2], [1, 0, 1, 0, 1, 0]];
        assert!(matches!(from_table(3, &right), Err(SurfaceError::Nonorientable { .. })));
    }
}
