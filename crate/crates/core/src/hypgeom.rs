//! The right-angled regular hexagon in the upper half-plane, its side
//! reflections, and ray tracing through the tessellation they generate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::tits::RANK;

/// Relative tolerance of the distance formulas.
pub const DIST_TOL: f64 = 1e-12;
/// Two crossings closer than this are treated as one pass through a vertex.
pub const VERTEX_TOL: f64 = 1e-9;
/// Rays meeting a side at a smaller angle are rejected.
pub const MIN_CROSSING_ANGLE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypError {
    #[error("DEGENERATE_GEODESIC: endpoints {0} and {1} coincide")]
    DegenerateGeodesic(f64, f64),
    #[error("point {0} is not in the upper half-plane")]
    NotInHalfPlane(Complex64),
    #[error("CONVERGENCE_FAILED: {0}")]
    ConvergenceFailed(String),
    #[error("VERTEX_AMBIGUITY: sides {0:?} crossed together")]
    VertexAmbiguity(Vec<usize>),
    #[error("start point is not inside the distinguished tile")]
    StartOutside,
    #[error("ray leaves the tile without crossing a side")]
    NoExit,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// `z ↦ (a·w + b)/(c·w + d)` with `w = z̄` for reflections. The determinant
/// is `+1` for orientation-preserving maps and `−1` for reflections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Isometry {
    pub m: [f64; 4],
    pub reflect: bool,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: [1.0, 0.0, 0.0, 1.0], reflect: false }
    }

    /// Scales to `|det| = 1`; the sign of the determinant records orientation.
    pub fn normalized(m: [f64; 4], reflect: bool) -> Self {
        let det = m[0] * m[3] - m[1] * m[2];
        let s = det.abs().sqrt();
        Isometry {
            m: [m[0] / s, m[1] / s, m[2] / s, m[3] / s],
            reflect,
        }
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let w = if self.reflect { z.conj() } else { z };
        let [a, b, c, d] = self.m;
        (w * a + b) / (w * c + d)
    }

    /// Action on the boundary `R ∪ {∞}`, with `∞` as `f64::INFINITY`.
    pub fn apply_boundary(&self, x: f64) -> f64 {
        let [a, b, c, d] = self.m;
        if x.is_infinite() {
            return if c == 0.0 { f64::INFINITY } else { a / c };
        }
        let den = c * x + d;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (a * x + b) / den
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        Isometry {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            reflect: self.reflect != other.reflect,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let [a, b, c, d] = self.m;
        let det = self.det();
        Isometry {
            m: [d / det, -b / det, -c / det, a / det],
            reflect: self.reflect,
        }
    }

    /// Operator-norm distance to the identity, up to the sign ambiguity.
    pub fn distance_to_identity(&self) -> f64 {
        if self.reflect {
            return f64::INFINITY;
        }
        let n = |s: f64| {
            let [a, b, c, d] = self.m;
            let (a, d) = (a - s, d - s);
            // Frobenius bounds the operator norm
            (a * a + b * b + c * c + d * d).sqrt()
        };
        n(1.0).min(n(-1.0))
    }

    /// Rotation about `i` by `alpha`, counter-clockwise.
    pub fn rotation(alpha: f64) -> Self {
        let (s, c) = (alpha / 2.0).sin_cos();
        Isometry { m: [c, s, -s, c], reflect: false }
    }

    /// `z ↦ e^t·z`, translation by `t` along the imaginary axis.
    pub fn dilation(t: f64) -> Self {
        let h = (t / 2.0).exp();
        Isometry { m: [h, 0.0, 0.0, 1.0 / h], reflect: false }
    }

    /// Translation length of an orientation-preserving hyperbolic element.
    pub fn translation_length(&self) -> Option<f64> {
        if self.reflect {
            return None;
        }
        let tr = (self.m[0] + self.m[3]).abs();
        (tr > 2.0).then(|| 2.0 * (tr / 2.0).acosh())
    }
}

/// A geodesic given by its two boundary endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geodesic {
    pub a: f64,
    pub b: f64,
}

impl Geodesic {
    pub fn new(a: f64, b: f64) -> Result<Self, HypError> {
        if a == b || (a.is_infinite() && b.is_infinite()) {
            return Err(HypError::DegenerateGeodesic(a, b));
        }
        Ok(Geodesic { a, b })
    }

    /// The geodesic through two distinct points.
    pub fn through(p: Complex64, q: Complex64) -> Result<Self, HypError> {
        if (p.re - q.re).abs() <= DIST_TOL * (p.norm() + q.norm()) {
            return Geodesic::new(p.re, f64::INFINITY);
        }
        let c = (p.norm_sqr() - q.norm_sqr()) / (2.0 * (p.re - q.re));
        let r = (p - c).norm();
        Geodesic::new(c - r, c + r)
    }

    pub fn image(&self, g: &Isometry) -> Geodesic {
        Geodesic {
            a: g.apply_boundary(self.a),
            b: g.apply_boundary(self.b),
        }
    }

    pub fn reflection(&self) -> Isometry {
        let (a, b) = (self.a, self.b);
        if a.is_infinite() || b.is_infinite() {
            let x = if a.is_infinite() { b } else { a };
            return Isometry { m: [-1.0, 2.0 * x, 0.0, 1.0], reflect: true };
        }
        let c = (a + b) / 2.0;
        let r = (b - a).abs() / 2.0;
        Isometry::normalized([c, r * r - c * c, 1.0, -c], true)
    }

    /// Signed position of `z`: negative inside the semicircle or left of the line.
    pub fn side(&self, z: Complex64) -> f64 {
        let (a, b) = (self.a, self.b);
        if a.is_infinite() || b.is_infinite() {
            let x = if a.is_infinite() { b } else { a };
            return z.re - x;
        }
        let c = (a + b) / 2.0;
        let r = (b - a).abs() / 2.0;
        ((z - c).norm() - r) / r.max(1.0)
    }

    /// Where the imaginary axis `{i·e^t}` crosses this geodesic: `(t, angle)`.
    fn axis_crossing(&self) -> Option<(f64, f64)> {
        let (u, v) = (self.a, self.b);
        if u.is_infinite() || v.is_infinite() || u * v >= 0.0 {
            return None;
        }
        let h = (-u * v).sqrt();
        let r = (v - u).abs() / 2.0;
        Some((h.ln(), (h / r).min(1.0).asin()))
    }
}

pub fn geodesic_distance(p: Complex64, q: Complex64) -> Result<f64, HypError> {
    for z in [p, q] {
        if !(z.im > 0.0) {
            return Err(HypError::NotInHalfPlane(z));
        }
    }
    // 2·asinh(|p−q| / (2√(Im p·Im q))), stable near 0
    Ok(2.0 * ((p - q).norm() / (2.0 * (p.im * q.im).sqrt())).asinh())
}

/// Length of the common perpendicular, or 0 when the lines meet or share an endpoint.
pub fn line_distance(g1: &Geodesic, g2: &Geodesic) -> Result<f64, HypError> {
    let g1 = Geodesic::new(g1.a, g1.b)?;
    let g2 = Geodesic::new(g2.a, g2.b)?;
    // send g1 to the imaginary axis
    let send = |x: f64| -> f64 {
        if x.is_infinite() {
            if g1.a.is_infinite() {
                0.0
            } else if g1.b.is_infinite() {
                f64::INFINITY
            } else {
                1.0
            }
        } else if g1.a.is_infinite() {
            1.0 / (x - g1.b)
        } else if g1.b.is_infinite() {
            x - g1.a
        } else {
            (x - g1.a) / (x - g1.b)
        }
    };
    let (u, v) = (send(g2.a), send(g2.b));
    if u == 0.0 || v == 0.0 || u.is_infinite() || v.is_infinite() || u * v < 0.0 {
        return Ok(0.0);
    }
    let (u, v) = (u.abs().min(v.abs()), u.abs().max(v.abs()));
    Ok(((v + u) / (v - u)).acosh())
}

/// Angle between two geodesics at a common point, in `[0, π/2]`.
pub fn angle_at(g1: &Geodesic, g2: &Geodesic, z: Complex64) -> f64 {
    let tangent = |g: &Geodesic| -> Complex64 {
        if g.a.is_infinite() || g.b.is_infinite() {
            Complex64::new(0.0, 1.0)
        } else {
            let c = (g.a + g.b) / 2.0;
            (z - c) * i()
        }
    };
    let (t1, t2) = (tangent(g1), tangent(g2));
    let cos = (t1.re * t2.re + t1.im * t2.im).abs() / (t1.norm() * t2.norm());
    cos.min(1.0).acos()
}

/// The regular right-angled hexagon centred at `i`, sides indexed
/// anti-clockwise; side `j` (0-based) runs from vertex `j−1` to vertex `j`.
#[derive(Debug, Clone, Serialize)]
pub struct HexagonModel {
    /// Distance from the centre to a vertex.
    pub radius: f64,
    pub vertices: [Complex64; RANK],
    pub sides: [Geodesic; RANK],
    pub reflections: [Isometry; RANK],
    pub side_length: f64,
}

fn hexagon_at(radius: f64) -> Result<([Complex64; RANK], [Geodesic; RANK]), HypError> {
    let top = i() * radius.exp();
    let vertices: [Complex64; RANK] = std::array::from_fn(|j| {
        let alpha = std::f64::consts::FRAC_PI_6 + j as f64 * std::f64::consts::FRAC_PI_3;
        Isometry::rotation(alpha).apply(top)
    });
    let mut sides = [Geodesic { a: 0.0, b: 1.0 }; RANK];
    for j in 0..RANK {
        sides[j] = Geodesic::through(vertices[(j + RANK - 1) % RANK], vertices[j])?;
    }
    Ok((vertices, sides))
}

/// Interior angle at `v` of the geodesic triangle `(p, v, q)`, in `[0, π]`.
pub fn interior_angle(p: Complex64, v: Complex64, q: Complex64) -> f64 {
    // move v to i, then to the disk centre where geodesics through it are straight
    let chart = |z: Complex64| {
        let w = (z - v.re) / v.im;
        (w - i()) / (w + i())
    };
    let (a, b) = (chart(p), chart(q));
    let cos = (a.re * b.re + a.im * b.im) / (a.norm() * b.norm());
    cos.clamp(-1.0, 1.0).acos()
}

fn corner_angle(radius: f64) -> Result<f64, HypError> {
    let (v, _) = hexagon_at(radius)?;
    Ok(interior_angle(v[RANK - 1], v[0], v[1]))
}

pub fn build_hexagon() -> Result<HexagonModel, HypError> {
    // the corner angle falls from 2π/3 toward 0 as the radius grows
    let target = std::f64::consts::FRAC_PI_2;
    let (mut lo, mut hi) = (0.05, 4.0);
    if !(corner_angle(lo)? > target && corner_angle(hi)? < target) {
        return Err(HypError::ConvergenceFailed("root not bracketed".into()));
    }
    let mut iters = 0;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if corner_angle(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > 200 {
            return Err(HypError::ConvergenceFailed("bisection did not settle".into()));
        }
    }
    let radius = 0.5 * (lo + hi);
    let (vertices, sides) = hexagon_at(radius)?;
    let reflections = std::array::from_fn(|j| sides[j].reflection());
    let side_length = geodesic_distance(vertices[0], vertices[1])?;
    Ok(HexagonModel {
        radius,
        vertices,
        sides,
        reflections,
        side_length,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HexagonReport {
    pub cosh_radius: f64,
    pub side_lengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub cosh_side: f64,
    pub max_side_error: f64,
    pub max_angle_error: f64,
    /// `‖s_i² − 1‖` and `‖(s_i s_{i+1})² − 1‖`, maximized over `i`.
    pub max_relation_error: f64,
    /// Translation length of `s_{i−1}s_{i+1}`, per `i`.
    pub translation_lengths: Vec<f64>,
    /// Whether `s_{i−1}s_{i+1}` maps `Δ_i` to itself.
    pub preserves_axis: bool,
    pub max_translation_error: f64,
    pub pass: bool,
}

impl HexagonModel {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let centre = i();
        self.sides
            .iter()
            .all(|s| s.side(z) * s.side(centre).signum() >= -tol)
    }

    pub fn check(&self, tol: f64) -> HexagonReport {
        let l = 2f64.acosh();
        let side_lengths: Vec<f64> = (0..RANK)
            .map(|j| geodesic_distance(self.vertices[(j + RANK - 1) % RANK], self.vertices[j]).unwrap_or(f64::NAN))
            .collect();
        let angles: Vec<f64> = (0..RANK)
            .map(|j| {
                let v = &self.vertices;
                interior_angle(v[(j + RANK - 1) % RANK], v[j], v[(j + 1) % RANK])
            })
            .collect();
        let mut rel = 0f64;
        let mut translation_lengths = Vec::new();
        let mut preserves = true;
        for j in 0..RANK {
            let s = &self.reflections[j];
            let t = &self.reflections[(j + 1) % RANK];
            rel = rel.max(s.compose(s).distance_to_identity());
            let st = s.compose(t);
            rel = rel.max(st.compose(&st).distance_to_identity());
            let g = self.reflections[(j + RANK - 1) % RANK].compose(&self.reflections[(j + 1) % RANK]);
            translation_lengths.push(g.translation_length().unwrap_or(0.0));
            let axis = self.sides[j];
            let img = axis.image(&g);
            let same = |x: f64, y: f64| (x - y).abs() <= 1e-8 * (1.0 + x.abs());
            preserves &= (same(img.a, axis.a) && same(img.b, axis.b)) || (same(img.a, axis.b) && same(img.b, axis.a));
        }
        let max_side_error = side_lengths.iter().map(|x| (x - l).abs()).fold(0.0, f64::max);
        let max_angle_error = angles
            .iter()
            .map(|x| (x - std::f64::consts::FRAC_PI_2).abs())
            .fold(0.0, f64::max);
        let max_translation_error = translation_lengths
            .iter()
            .map(|x| (x - 2.0 * l).abs())
            .fold(0.0, f64::max);
        HexagonReport {
            cosh_radius: self.radius.cosh(),
            cosh_side: self.side_length.cosh(),
            max_side_error,
            max_angle_error,
            max_relation_error: rel,
            preserves_axis: preserves,
            max_translation_error,
            pass: max_side_error <= tol
                && max_angle_error <= tol
                && rel <= tol
                && preserves
                && max_translation_error <= 10.0 * tol,
            side_lengths,
            angles,
            translation_lengths,
        }
    }
}

/// Crossings of a ray: `word[n]` is the 0-based index of the `n`-th curve
/// crossed, at arclength `times[n]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ArcTrace {
    pub word: Vec<usize>,
    pub times: Vec<f64>,
    /// Smallest angle at which the ray met a side.
    pub min_angle: f64,
    /// Each segment's midpoint lies in the tile reached by unfolding.
    pub unfold_consistent: bool,
}

/// Traces the ray from `start ∈ T` leaving at angle `theta` (anti-clockwise
/// from the upward vertical) through `crossings` sides.
pub fn trace_arc(hex: &HexagonModel, start: Complex64, theta: f64, crossings: usize) -> Result<ArcTrace, HypError> {
    if !hex.contains(start, -1e-12) || !(start.im > 0.0) {
        return Err(HypError::StartOutside);
    }
    // frame: the ray is t ↦ i·e^t; `frame` maps T to the current tile in it
    let place = Isometry { m: [start.im.sqrt(), start.re / start.im.sqrt(), 0.0, 1.0 / start.im.sqrt()], reflect: false };
    let ray = place.compose(&Isometry::rotation(theta));
    let mut frame = ray.inverse();
    let mut entered: Vec<usize> = Vec::new();
    let mut word = Vec::with_capacity(crossings);
    let mut times = Vec::with_capacity(crossings);
    let mut clock = 0.0;
    let mut min_angle = f64::INFINITY;
    let mut consistent = true;
    while word.len() < crossings {
        let mut hits: Vec<(f64, f64, usize)> = (0..RANK)
            .filter(|j| !entered.contains(j))
            .filter_map(|j| {
                hex.sides[j]
                    .image(&frame)
                    .axis_crossing()
                    .filter(|&(t, _)| t > 0.0)
                    .map(|(t, a)| (t, a, j))
            })
            .collect();
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        let Some(&(t, _, _)) = hits.first() else {
            return Err(HypError::NoExit);
        };
        let mut group: Vec<(f64, f64, usize)> = hits.iter().copied().filter(|h| h.0 - t <= VERTEX_TOL).collect();
        let back = frame.inverse();
        consistent &= hex.contains(back.apply(i() * (t / 2.0).exp()), 1e-9);
        if group.len() > 2 {
            return Err(HypError::VertexAmbiguity(group.iter().map(|h| h.2).collect()));
        }
        if group.len() == 2 {
            let (a, b) = (group[0].2, group[1].2);
            if (a + 1) % RANK == b {
            } else if (b + 1) % RANK == a {
                group.swap(0, 1);
            } else {
                return Err(HypError::VertexAmbiguity(vec![a, b]));
            }
        }
        let mut step = Isometry::identity();
        entered.clear();
        for &(_, angle, j) in &group {
            min_angle = min_angle.min(angle);
            word.push(j);
            times.push(clock + t);
            step = step.compose(&hex.reflections[j]);
            entered.push(j);
        }
        frame = Isometry::dilation(-t).compose(&frame).compose(&step);
        frame = Isometry::normalized(frame.m, frame.reflect);
        clock += t;
    }
    word.truncate(crossings);
    times.truncate(crossings);
    Ok(ArcTrace {
        word,
        times,
        min_angle,
        unfold_consistent: consistent,
    })
}

fn is_red(j: usize) -> bool {
    j % 2 == 0
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub check: String,
    pub trial: usize,
    pub start: (f64, f64),
    pub theta: f64,
    pub word: Vec<usize>,
    pub from: usize,
    pub to: usize,
    pub length: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckTally {
    pub checked: usize,
    pub counterexamples: usize,
    /// Smallest `length / bound` seen.
    pub min_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LengthReport {
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    pub rejected: usize,
    /// One crossing between sides that are not adjacent: length > L.
    pub nonadjacent_sides: CheckTally,
    /// (a) every subarc of combinatorial length 2 is longer than L.
    pub check_a: CheckTally,
    /// (b) subarcs with 2k same-colour letters are longer than 2kL.
    pub check_b: CheckTally,
    pub unfold_failures: usize,
    pub counterexamples: Vec<Counterexample>,
    pub pass: bool,
}

struct TrialOutcome {
    rejected: usize,
    tallies: [CheckTally; 3],
    unfold_failure: bool,
    counterexamples: Vec<Counterexample>,
}

fn tally() -> CheckTally {
    CheckTally { checked: 0, counterexamples: 0, min_ratio: f64::INFINITY }
}

fn one_trial(hex: &HexagonModel, k: u32, seed: u64, trial: usize) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let l = 2f64.acosh();
    let need = 2 * k as usize;
    let crossings = 6 * need + 8;
    let mut rejected = 0;
    let (start, theta, tr) = loop {
        let z = Isometry::rotation(rng.gen_range(0.0..std::f64::consts::TAU))
            .apply(i() * rng.gen_range(0.0..hex.radius).exp());
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        if !hex.contains(z, -1e-9) {
            continue;
        }
        match trace_arc(hex, z, theta, crossings) {
            Ok(tr) if tr.min_angle >= MIN_CROSSING_ANGLE => break (z, theta, tr),
            _ => rejected += 1,
        }
    };
    let mut tallies = [tally(), tally(), tally()];
    let mut counterexamples = Vec::new();
    let mut record = |which: usize, name: &str, from: usize, to: usize, length: f64, bound: f64| {
        let t = &mut tallies[which];
        t.checked += 1;
        t.min_ratio = t.min_ratio.min(length / bound);
        if !(length > bound) {
            t.counterexamples += 1;
            counterexamples.push(Counterexample {
                check: name.into(),
                trial,
                start: (start.re, start.im),
                theta,
                word: tr.word.clone(),
                from,
                to,
                length,
                bound,
            });
        }
    };
    let (w, t) = (&tr.word, &tr.times);
    for n in 0..w.len() {
        let d = (w[n] + RANK - w.get(n + 1).copied().unwrap_or(w[n])) % RANK;
        if n + 1 < w.len() && d != 1 && d != RANK - 1 {
            record(0, "nonadjacent", n, n + 1, t[n + 1] - t[n], l);
        }
        if n + 2 < w.len() {
            record(1, "a", n, n + 2, t[n + 2] - t[n], l);
        }
        // start on a curve of one colour, stop on the 2k-th later letter of that colour
        let red = is_red(w[n]);
        let mut count = 0;
        for m in n + 1..w.len() {
            if is_red(w[m]) == red {
                count += 1;
                if count == need {
                    record(2, "b", n, m, t[m] - t[n], need as f64 * l);
                    break;
                }
            }
        }
    }
    TrialOutcome {
        rejected,
        tallies,
        unfold_failure: !tr.unfold_consistent,
        counterexamples,
    }
}

/// Monte-Carlo check of the arc-length lower bounds on `trials` random rays.
pub fn length_experiments(hex: &HexagonModel, trials: usize, k: u32, seed: u64) -> LengthReport {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(hex, k, seed, t))
        .collect();
    let mut tallies = [tally(), tally(), tally()];
    let mut rejected = 0;
    let mut unfold_failures = 0;
    let mut counterexamples = Vec::new();
    for o in outcomes {
        rejected += o.rejected;
        unfold_failures += usize::from(o.unfold_failure);
        for (acc, t) in tallies.iter_mut().zip(o.tallies) {
            acc.checked += t.checked;
            acc.counterexamples += t.counterexamples;
            acc.min_ratio = acc.min_ratio.min(t.min_ratio);
        }
        counterexamples.extend(o.counterexamples);
    }
    let [nonadjacent_sides, check_a, check_b] = tallies;
    let pass = counterexamples.is_empty() && unfold_failures == 0 && check_a.checked > 0 && check_b.checked > 0;
    LengthReport {
        k,
        trials,
        seed,
        rejected,
        nonadjacent_sides,
        check_a,
        check_b,
        unfold_failures,
        counterexamples,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        assert!((geodesic_distance(i(), i() * 2.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(geodesic_distance(i(), i()).unwrap(), 0.0);
        let circle = Geodesic::new(-1.0, 1.0).unwrap();
        let axis = Geodesic::new(0.0, f64::INFINITY).unwrap();
        assert_eq!(line_distance(&circle, &axis).unwrap(), 0.0);
        assert!(line_distance(&Geodesic { a: 1.0, b: 1.0 }, &axis).is_err());
        // concentric semicircles of radii 1 and e are ln... apart along the axis
        let big = Geodesic::new(-2.0, 2.0).unwrap();
        assert!((line_distance(&circle, &big).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn hexagon_is_right_angled() {
        let h = build_hexagon().unwrap();
        let r = h.check(1e-9);
        assert!(r.pass, "{r:?}");
        assert!((r.cosh_radius - 3f64.sqrt()).abs() < 1e-9);
        assert!((h.side_length - 1.316_957_896_924_816_6).abs() < 1e-9);
    }

    #[test]
    fn ray_to_side_midpoint() {
        let h = build_hexagon().unwrap();
        // side 1 (index 2) has its midpoint in direction π/2 + π/3 from the centre
        let theta = std::f64::consts::FRAC_PI_3;
        let tr = trace_arc(&h, i(), theta, 3).unwrap();
        assert_eq!(tr.word[0], 1);
        assert!((tr.times[0] - 2f64.sqrt().acosh()).abs() < 1e-9);
        assert!(tr.unfold_consistent);
    }

    #[test]
    fn small_experiment() {
        let h = build_hexagon().unwrap();
        let r = length_experiments(&h, 200, 4, 7);
        assert!(r.pass, "{:?}", r.counterexamples.first());
        let again = length_experiments(&h, 200, 4, 7);
        assert_eq!(r.check_a.min_ratio, again.check_a.min_ratio);
    }
}
