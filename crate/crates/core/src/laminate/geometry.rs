//! Exact planar geometry: axis-aligned rectangles, half-plane clipping,
//! shoelace areas and inner rectangle covers of convex polygons.

use num_traits::{Signed, Zero};

use crate::{format_rational, Rational};

use super::LaminateError;

pub type Point = [Rational; 2];

/// `[x0, x1] × [y0, y1]` with `x0 < x1` and `y0 < y1`. For point location the
/// rectangle is half-open, `[x0, x1) × [y0, y1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Result<Self, LaminateError> {
        if x0 >= x1 || y0 >= y1 {
            return Err(LaminateError::BadParameter(format!(
                "degenerate rectangle [{}, {}] x [{}, {}]",
                format_rational(&x0),
                format_rational(&x1),
                format_rational(&y0),
                format_rational(&y1)
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn unit_square() -> Self {
        Self { x0: Rational::zero(), y0: Rational::zero(), x1: num_traits::One::one(), y1: num_traits::One::one() }
    }

    pub fn width(&self) -> Rational {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> Rational {
        &self.y1 - &self.y0
    }

    pub fn area(&self) -> Rational {
        self.width() * self.height()
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> Vec<Point> {
        vec![
            [self.x0.clone(), self.y0.clone()],
            [self.x1.clone(), self.y0.clone()],
            [self.x1.clone(), self.y1.clone()],
            [self.x0.clone(), self.y1.clone()],
        ]
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.x0 <= p[0] && p[0] < self.x1 && self.y0 <= p[1] && p[1] < self.y1
    }
}

pub fn dot(p: &[Rational], n: &[Rational]) -> Rational {
    &p[0] * &n[0] + &p[1] * &n[1]
}

/// Keeps the part of `poly` where `sign · (⟨p, normal⟩ - offset) ≥ 0`.
pub fn clip_half_plane(poly: &[Point], normal: &[Rational], offset: &Rational, keep_above: bool) -> Vec<Point> {
    let side = |p: &Point| {
        let s = dot(p, normal) - offset;
        if keep_above {
            s
        } else {
            -s
        }
    };
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = &poly[i];
        let next = &poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(cur), side(next));
        if !sc.is_negative() {
            out.push(cur.clone());
        }
        if (sc.is_negative() && sn.is_positive()) || (sc.is_positive() && sn.is_negative()) {
            let t = &sc / (&sc - &sn);
            out.push([&cur[0] + &t * (&next[0] - &cur[0]), &cur[1] + &t * (&next[1] - &cur[1])]);
        }
    }
    out
}

/// `{p ∈ rect : lo ≤ ⟨p, normal⟩ ≤ hi}`.
pub fn clip_strip(rect: &Rect, normal: &[Rational], lo: &Rational, hi: &Rational) -> Vec<Point> {
    let poly = clip_half_plane(&rect.corners(), normal, lo, true);
    clip_half_plane(&poly, normal, hi, false)
}

/// Area of `{p ∈ rect : ⟨p, normal⟩ ≤ c}` in closed form, with
/// `R(s) = max(s, 0)^2` and (after reflecting to nonnegative normal entries)
/// `(R(c) - R(c - αW) - R(c - βH) + R(c - αW - βH)) / (2αβ)`.
pub fn half_plane_area(rect: &Rect, normal: &[Rational], c: &Rational) -> Rational {
    let (w, h) = (rect.width(), rect.height());
    let mut c = c - dot(&[rect.x0.clone(), rect.y0.clone()], normal);
    let mut alpha = normal[0].clone();
    let mut beta = normal[1].clone();
    if alpha.is_negative() {
        alpha = -alpha;
        c += &alpha * &w;
    }
    if beta.is_negative() {
        beta = -beta;
        c += &beta * &h;
    }
    let clamp = |v: Rational, hi: &Rational| {
        if v.is_negative() {
            Rational::zero()
        } else if v > *hi {
            hi.clone()
        } else {
            v
        }
    };
    match (alpha.is_zero(), beta.is_zero()) {
        (true, true) => {
            if c.is_negative() {
                Rational::zero()
            } else {
                rect.area()
            }
        }
        (true, false) => clamp(c / &beta, &h) * w,
        (false, true) => clamp(c / &alpha, &w) * h,
        (false, false) => {
            let ramp = |s: Rational| if s.is_positive() { &s * &s } else { Rational::zero() };
            let aw = &alpha * &w;
            let bh = &beta * &h;
            let num = ramp(c.clone()) - ramp(&c - &aw) - ramp(&c - &bh) + ramp(&c - &aw - &bh);
            num / (Rational::from_integer(2.into()) * alpha * beta)
        }
    }
}

/// Unsigned shoelace area.
pub fn polygon_area(poly: &[Point]) -> Rational {
    if poly.len() < 3 {
        return Rational::zero();
    }
    let mut twice = Rational::zero();
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        twice += &a[0] * &b[1] - &b[0] * &a[1];
    }
    twice.abs() / Rational::from_integer(2.into())
}

/// Extent of a convex polygon along the line `coord[axis] = c`, as `(min, max)`
/// of the other coordinate.
fn section(poly: &[Point], axis: usize, c: &Rational) -> Option<(Rational, Rational)> {
    let other = 1 - axis;
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut take = |v: Rational| {
        if lo.as_ref().is_none_or(|l| v < *l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().is_none_or(|h| v > *h) {
            hi = Some(v);
        }
    };
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        let (da, db) = (&a[axis] - c, &b[axis] - c);
        if da.is_zero() {
            take(a[other].clone());
        }
        if (da.is_negative() && db.is_positive()) || (da.is_positive() && db.is_negative()) {
            let t = &da / (&da - &db);
            take(&a[other] + t * (&b[other] - &a[other]));
        }
    }
    lo.zip(hi)
}

/// `n` equal bands across the polygon along `axis`, each replaced by the
/// largest rectangle that fits between the section extents at its two ends.
/// For a convex polygon every rectangle lies inside it.
fn bands(poly: &[Point], axis: usize, n: usize) -> Vec<Rect> {
    let lo = poly.iter().map(|p| &p[axis]).min().expect("nonempty").clone();
    let hi = poly.iter().map(|p| &p[axis]).max().expect("nonempty").clone();
    let step = (&hi - &lo) / Rational::from_integer(n.into());
    let cuts: Vec<Rational> = (0..=n).map(|i| &lo + &step * Rational::from_integer(i.into())).collect();
    let sections: Vec<_> = cuts.iter().map(|c| section(poly, axis, c)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let (Some((l0, h0)), Some((l1, h1))) = (&sections[i], &sections[i + 1]) else {
            continue;
        };
        let bottom = l0.max(l1).clone();
        let top = h0.min(h1).clone();
        if bottom >= top {
            continue;
        }
        let rect = if axis == 0 {
            Rect::new(cuts[i].clone(), bottom, cuts[i + 1].clone(), top)
        } else {
            Rect::new(bottom, cuts[i].clone(), top, cuts[i + 1].clone())
        };
        out.push(rect.expect("nondegenerate band"));
    }
    out
}

/// Pairwise interior-disjoint rectangles inside the convex polygon `poly`
/// with total area at least `(1 - alpha)·area(poly)`, found by doubling the
/// band count along whichever axis needs fewer rectangles. Gives up after
/// `max_bands` bands and returns the best cover found.
pub fn inner_cover(poly: &[Point], alpha: &Rational, max_bands: usize) -> Vec<Rect> {
    let total = polygon_area(poly);
    if total.is_zero() {
        return Vec::new();
    }
    let need = (Rational::from_integer(1.into()) - alpha) * &total;
    let covered = |rects: &[Rect]| rects.iter().map(Rect::area).fold(Rational::zero(), |a, b| a + b);
    let mut best: Option<(Rational, Vec<Rect>)> = None;
    let mut n = 1;
    while n <= max_bands {
        let mut found: Option<Vec<Rect>> = None;
        for axis in 0..2 {
            let rects = bands(poly, axis, n);
            let area = covered(&rects);
            if area >= need {
                found = Some(rects);
                break;
            }
            if best.as_ref().is_none_or(|(a, _)| area > *a) {
                best = Some((area, rects));
            }
        }
        if let Some(rects) = found {
            return rects;
        }
        n *= 2;
    }
    best.map(|(_, r)| r).unwrap_or_default()
}
