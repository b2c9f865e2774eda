//! Exact simple-laminate fields and their multi-level refinement.
//!
//! A simple laminate between `a` and `b` in direction `ξ0` at scale `ε` has
//! potential
//!
//! ```text
//! V(x) = P(x) + ε^d c' H(⟨x, ξ0⟩ / ε)
//! ```
//!
//! where `B(P) = λa + (1-λ)b`, `B(ξ0) c' = b - a` and `H` is the `d`-fold
//! antiderivative of the profile. On the slab where `⟨x, ξ0⟩/ε` lies in
//! interval `n` of the profile, `V` is a polynomial of degree `d` and
//! `B(V) = b` (`n` even) or `a` (`n` odd).
//!
//! Refinement replaces slabs carrying a target value by rectangles inside
//! them, each holding a fresh laminate whose base `P` is the potential of the
//! slab it sits in. What the rectangles miss keeps the old value and is
//! counted as defect.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::linalg::vector;
use crate::operator::{CertifiedOperator, OperatorFamily};
use crate::{QPoly2, QVector, Rational};

use super::geometry::{clip_strip, dot, half_plane_area, inner_cover, polygon_area, Point, Rect};
use super::profile::{Antiderivative, Profile};
use super::LaminateError;

/// Upper bound on bands tried per slab when covering it with rectangles.
pub const MAX_COVER_BANDS: usize = 1 << 14;

/// One simple laminate, independent of any window.
#[derive(Debug)]
pub struct SimpleLaminate {
    family: Arc<OperatorFamily>,
    a: QVector,
    b: QVector,
    antiderivative: Arc<Antiderivative>,
    xi0: QVector,
    eps: Rational,
    coefficient: Rational,
    base: QPoly2,
}

impl SimpleLaminate {
    /// `base` must satisfy `B(base) = λa + (1-λ)b`, and `B(ξ0)` must be a
    /// nonzero multiple of `b - a`.
    pub fn new(
        family: Arc<OperatorFamily>,
        a: QVector,
        b: QVector,
        antiderivative: Arc<Antiderivative>,
        xi0: QVector,
        eps: Rational,
        base: QPoly2,
    ) -> Result<Self, LaminateError> {
        if a.len() != 3 || b.len() != 3 || xi0.len() != 2 {
            return Err(LaminateError::BadParameter("states must lie in R^3 and ξ0 in R^2".into()));
        }
        if !eps.is_positive() {
            return Err(LaminateError::BadParameter("scale must be positive".into()));
        }
        if antiderivative.order() != family.degree() {
            return Err(LaminateError::BadParameter("antiderivative order differs from operator order".into()));
        }
        let diff = vector::sub(&b, &a);
        let symbol = family.symbol_b(&xi0);
        let coefficient = match vector::multiple_of(&diff, &symbol) {
            Some(c) if !c.is_zero() && !vector::is_zero(&symbol) => c,
            _ => return Err(LaminateError::NotAWaveDirection),
        };
        let lambda = antiderivative.profile().lambda().clone();
        let mean = vector::add(&vector::scale(&a, &lambda), &vector::scale(&b, &(Rational::one() - &lambda)));
        let base_value = family.apply_b_to_poly(&base).map_err(|e| LaminateError::BadParameter(e.to_string()))?;
        if base_value != mean {
            return Err(LaminateError::BadParameter("base potential does not realize the mean value".into()));
        }
        Ok(Self { family, a, b, antiderivative, xi0, eps, coefficient, base })
    }

    pub fn family(&self) -> &OperatorFamily {
        &self.family
    }

    pub fn a(&self) -> &QVector {
        &self.a
    }

    pub fn b(&self) -> &QVector {
        &self.b
    }

    pub fn lambda(&self) -> &Rational {
        self.antiderivative.profile().lambda()
    }

    pub fn xi0(&self) -> &QVector {
        &self.xi0
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    /// `c'` with `B(ξ0) c' = b - a`.
    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn profile(&self) -> &Profile {
        self.antiderivative.profile()
    }

    pub fn phase(&self, p: &[Rational]) -> Rational {
        dot(p, &self.xi0) / &self.eps
    }

    pub fn slab_of(&self, p: &[Rational]) -> i64 {
        self.profile().interval_index(&self.phase(p))
    }

    /// `b` on even slabs (where `h = λ`), `a` on odd ones.
    pub fn value(&self, n: i64) -> &QVector {
        if n % 2 == 0 {
            &self.b
        } else {
            &self.a
        }
    }

    /// Indices of the slabs meeting `rect`.
    pub fn slab_range(&self, rect: &Rect) -> (i64, i64) {
        let phases: Vec<Rational> = rect.corners().iter().map(|c| self.phase(c)).collect();
        let lo = phases.iter().min().expect("four corners");
        let hi = phases.iter().max().expect("four corners");
        (self.profile().interval_index(lo), self.profile().interval_index(hi))
    }

    /// Closure of slab `n` intersected with `rect`.
    pub fn slab_polygon(&self, rect: &Rect, n: i64) -> Vec<Point> {
        let (lo, hi) = self.profile().interval(n);
        clip_strip(rect, &self.xi0, &(&self.eps * lo), &(&self.eps * hi))
    }

    /// The polynomial piece of `V` on slab `n`.
    pub fn potential(&self, n: i64) -> QPoly2 {
        let (lo, _) = self.profile().interval(n);
        let scale = num_traits::pow(self.eps.clone(), self.family.degree()) * &self.coefficient;
        let piece = self.antiderivative.piece(n).scale(&scale);
        let wave = QPoly2::compose_affine(&piece, &(&self.xi0[0] / &self.eps), &(&self.xi0[1] / &self.eps), &-lo);
        self.base.add(&wave)
    }
}

/// A laminate restricted to a window, with some slabs refined further.
#[derive(Debug, Clone)]
pub struct Layer {
    pub window: Rect,
    pub laminate: Arc<SimpleLaminate>,
    pub first: i64,
    pub last: i64,
    /// Refining rectangles of a slab, pairwise interior-disjoint and inside it.
    pub refined: BTreeMap<i64, Vec<Layer>>,
}

impl Layer {
    pub fn new(window: Rect, laminate: Arc<SimpleLaminate>) -> Self {
        let (first, last) = laminate.slab_range(&window);
        Self { window, laminate, first, last, refined: BTreeMap::new() }
    }

    pub fn slabs(&self) -> impl Iterator<Item = i64> {
        self.first..=self.last
    }

    fn value_at(&self, p: &[Rational]) -> QVector {
        let n = self.laminate.slab_of(p);
        if let Some(children) = self.refined.get(&n) {
            if let Some(child) = children.iter().find(|c| c.window.contains(p)) {
                return child.value_at(p);
            }
        }
        self.laminate.value(n).clone()
    }

    /// Area of slab `n` inside the window.
    pub fn slab_area(&self, n: i64) -> Rational {
        polygon_area(&self.laminate.slab_polygon(&self.window, n))
    }

    fn accumulate(&self, out: &mut BTreeMap<QVector, Rational>) {
        let below = |t: Rational| half_plane_area(&self.window, &self.laminate.xi0, &(&self.laminate.eps * t));
        let mut lower = below(self.laminate.profile().interval(self.first).0);
        for n in self.slabs() {
            let upper = below(self.laminate.profile().interval(n).1);
            let mut area = &upper - &lower;
            lower = upper;
            if let Some(children) = self.refined.get(&n) {
                for child in children {
                    area -= child.window.area();
                    child.accumulate(out);
                }
            }
            if !area.is_zero() {
                *out.entry(self.laminate.value(n).clone()).or_insert_with(Rational::zero) += area;
            }
        }
    }

    fn count(&self, stats: &mut FieldStats, depth: usize) {
        stats.slabs += (self.last - self.first + 1) as usize;
        stats.layers += 1;
        stats.depth = stats.depth.max(depth);
        for child in self.refined.values().flatten() {
            child.count(stats, depth + 1);
        }
    }

    fn check_exactness(&self, stride: usize, summary: &mut ExactnessSummary) {
        for n in self.slabs() {
            let value = self.laminate.family().apply_b_to_poly(&self.laminate.potential(n));
            summary.checked += 1;
            match value {
                Ok(v) if &v == self.laminate.value(n) => {}
                _ => summary.failures.push(format!("slab {n} of window {:?}", self.window)),
            }
            if let Some(children) = self.refined.get(&n) {
                for child in children.iter().step_by(stride.max(1)) {
                    child.check_exactness(stride, summary);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FieldStats {
    pub layers: usize,
    pub slabs: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExactnessSummary {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ExactnessSummary {
    pub fn exact(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// A sample of the field on a grid, for export.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub x: Rational,
    pub y: Rational,
    pub value: QVector,
}

/// Piecewise-polynomial potential on a rectangle with piecewise-constant field
/// `v = B(V)`.
#[derive(Debug, Clone)]
pub struct PiecewisePolyField {
    root: Layer,
}

impl PiecewisePolyField {
    pub fn root(&self) -> &Layer {
        &self.root
    }

    pub fn domain(&self) -> &Rect {
        &self.root.window
    }

    pub fn value_at(&self, p: &[Rational]) -> QVector {
        self.root.value_at(p)
    }

    /// Exact area carried by each field value. The areas sum to `|Ω|`.
    pub fn volume_fractions(&self) -> BTreeMap<QVector, Rational> {
        let mut out = BTreeMap::new();
        self.root.accumulate(&mut out);
        out
    }

    pub fn stats(&self) -> FieldStats {
        let mut stats = FieldStats::default();
        self.root.count(&mut stats, 0);
        stats
    }

    /// Checks `B(V) = v` on every slab of the top layer and on every slab of
    /// every `stride`-th refining window.
    pub fn check_exactness(&self, stride: usize) -> ExactnessSummary {
        let mut summary = ExactnessSummary::default();
        self.root.check_exactness(stride, &mut summary);
        summary
    }

    /// Field values at the centres of an `nx × ny` grid of cells.
    pub fn sample_grid(&self, nx: usize, ny: usize) -> Result<Vec<GridRow>, LaminateError> {
        if nx == 0 || ny == 0 {
            return Err(LaminateError::BadParameter("grid resolution must be positive".into()));
        }
        let d = self.domain();
        let mut rows = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = &d.y0 + d.height() * Rational::new((2 * j + 1).into(), (2 * ny).into());
            for i in 0..nx {
                let x = &d.x0 + d.width() * Rational::new((2 * i + 1).into(), (2 * nx).into());
                let value = self.value_at(&[x.clone(), y.clone()]);
                rows.push(GridRow { x, y: y.clone(), value });
            }
        }
        Ok(rows)
    }
}

/// One-level laminate between `a` (fraction `λ`) and `b` on `domain`.
///
/// The base potential is assembled from plane waves at the three `basis`
/// frequencies, whose symbols must span `R^3`.
#[allow(clippy::too_many_arguments)]
pub fn simple_laminate_field(
    family: &OperatorFamily,
    a: &[Rational],
    b: &[Rational],
    lambda: &Rational,
    xi0: &[Rational],
    eps: &Rational,
    domain: &Rect,
    basis: &[QVector; 3],
) -> Result<PiecewisePolyField, LaminateError> {
    let profile = Profile::new(lambda.clone())?;
    let mean = vector::add(&vector::scale(a, lambda), &vector::scale(b, &(Rational::one() - lambda)));
    let base = family
        .potential_polynomial_for_constant(&mean, basis)
        .map_err(|e| LaminateError::BadParameter(e.to_string()))?;
    let antiderivative = Arc::new(Antiderivative::new(profile, family.degree())?);
    let laminate = SimpleLaminate::new(
        Arc::new(family.clone()),
        a.to_vec(),
        b.to_vec(),
        antiderivative,
        xi0.to_vec(),
        eps.clone(),
        base,
    )?;
    Ok(PiecewisePolyField { root: Layer::new(domain.clone(), Arc::new(laminate)) })
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub field: PiecewisePolyField,
    /// Area of the target region left unrefined.
    pub defect_area: Rational,
    /// Total area that carried the target value before refinement.
    pub target_area: Rational,
    pub windows: usize,
}

struct RefineJob<'a> {
    target: &'a [Rational],
    b: &'a [Rational],
    c: &'a [Rational],
    alpha: &'a Rational,
    xi0: &'a [Rational],
    eps: &'a Rational,
    antiderivative: Arc<Antiderivative>,
}

#[derive(Default)]
struct RefineTally {
    defect: Rational,
    target: Rational,
    windows: usize,
}

impl RefineJob<'_> {
    fn refine_slab(&self, layer: &Layer, n: i64) -> Result<(Vec<Layer>, RefineTally), LaminateError> {
        let poly = layer.laminate.slab_polygon(&layer.window, n);
        let area = polygon_area(&poly);
        if area.is_zero() {
            return Ok((Vec::new(), RefineTally::default()));
        }
        let rects = inner_cover(&poly, self.alpha, MAX_COVER_BANDS);
        let covered: Rational = rects.iter().map(Rect::area).sum();
        let sub = Arc::new(SimpleLaminate::new(
            layer.laminate.family.clone(),
            self.b.to_vec(),
            self.c.to_vec(),
            self.antiderivative.clone(),
            self.xi0.to_vec(),
            self.eps.clone(),
            layer.laminate.potential(n),
        )?);
        let windows = rects.len();
        let children = rects.into_iter().map(|r| Layer::new(r, sub.clone())).collect();
        Ok((children, RefineTally { defect: &area - covered, target: area, windows }))
    }

    fn refine_layer(&self, layer: &Layer) -> Result<(Layer, RefineTally), LaminateError> {
        let mut out = layer.clone();
        let mut tally = RefineTally::default();
        let hits: Vec<i64> = layer
            .slabs()
            .filter(|n| !layer.refined.contains_key(n) && layer.laminate.value(*n).as_slice() == self.target)
            .collect();
        let results: Vec<Result<(Vec<Layer>, RefineTally), LaminateError>> = std::thread::scope(|s| {
            let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(hits.len().max(1));
            let chunk = hits.len().div_ceil(workers.max(1)).max(1);
            let handles: Vec<_> = hits
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(|&n| self.refine_slab(layer, n)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("refinement worker")).collect()
        });
        for (n, result) in hits.iter().zip(results) {
            let (children, t) = result?;
            tally.defect += t.defect;
            tally.target += t.target;
            tally.windows += t.windows;
            if !children.is_empty() {
                out.refined.insert(*n, children);
            }
        }
        for (n, children) in &layer.refined {
            let mut margin = polygon_area(&layer.laminate.slab_polygon(&layer.window, *n));
            let mut new_children = Vec::with_capacity(children.len());
            for child in children {
                margin -= child.window.area();
                let (refined, t) = self.refine_layer(child)?;
                tally.defect += t.defect;
                tally.target += t.target;
                tally.windows += t.windows;
                new_children.push(refined);
            }
            if layer.laminate.value(*n).as_slice() == self.target {
                tally.defect += &margin;
                tally.target += margin;
            }
            out.refined.insert(*n, new_children);
        }
        Ok((out, tally))
    }
}

/// Re-laminates the regions carrying `target = s·b + (1-s)·c` between `b`
/// (fraction `s`) and `c`, in direction `xi0` at scale `eps`, on rectangle
/// covers that miss at most a fraction `alpha` of each slab.
#[allow(clippy::too_many_arguments)]
pub fn refine_field(
    field: &PiecewisePolyField,
    target: &[Rational],
    b: &[Rational],
    c: &[Rational],
    s: &Rational,
    alpha: &Rational,
    op: &CertifiedOperator,
    xi0: &[Rational],
    eps: &Rational,
) -> Result<Refinement, LaminateError> {
    if !alpha.is_positive() || *alpha >= Rational::one() {
        return Err(LaminateError::BadParameter("alpha must lie in (0, 1)".into()));
    }
    super::check_split(op, target, b, c, s)?;
    let profile = Profile::new(s.clone())?;
    let antiderivative = Arc::new(Antiderivative::new(profile, op.family().degree())?);
    let job = RefineJob { target, b, c, alpha, xi0, eps, antiderivative };
    let (root, tally) = job.refine_layer(&field.root)?;
    Ok(Refinement {
        field: PiecewisePolyField { root },
        defect_area: tally.defect,
        target_area: tally.target,
        windows: tally.windows,
    })
}

/// Parameters of a fraction correction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rebalance {
    /// Coefficient of the shifted state `a' = a + a_shift·(b - a)`.
    pub a_shift: Rational,
    pub mu: Rational,
    /// Weight with `t·f1 + (1-t)·f2 = λ`.
    pub t: Rational,
}

pub fn rebalance(lambda: &Rational, f1: &Rational, f2: &Rational, s: &Rational) -> Result<Rebalance, LaminateError> {
    let feasible = f1 < lambda && lambda <= f2 && f1 != f2 && s.is_positive() && *s < Rational::one() - lambda;
    if !feasible {
        return Err(LaminateError::InfeasibleFractions);
    }
    let mu = lambda / (Rational::one() - s);
    let t = (f2 - lambda) / (f2 - f1);
    Ok(Rebalance { a_shift: s.clone(), mu, t })
}
