//! Polynomials in one and two variables.
//!
//! [`HomPoly2`] stores a homogeneous form in `(x, y)` with coefficients in
//! descending `x`-degree: index `s` holds the coefficient of `x^(d-s) y^s`.
//! [`UniPoly`] is a dense univariate polynomial in ascending powers, and
//! [`Poly2`] a general bivariate polynomial kept as a sum of homogeneous parts.

use std::fmt;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("cannot differentiate a degree-zero form")]
    DegreeZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("resultant needs both degrees at least one (got {0} and {1})")]
    DegreeTooLow(usize, usize),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("a homogeneous form needs at least one coefficient")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Homogeneous polynomial of degree `d` in two variables.
#[derive(Clone, PartialEq)]
pub struct HomPoly2<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> HomPoly2<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![T::zero(); degree + 1] }
    }

    /// `x^(d-s) y^s` with coefficient `c`.
    pub fn monomial(degree: usize, s: usize, c: T) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[s] = c;
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> &T {
        &self.coeffs[s]
    }

    /// Coefficient of `x^d`.
    pub fn leading_x_coeff(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(T::is_zero)
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        // Horner in the ratio, carried homogeneously.
        let mut acc = T::zero();
        let mut ypow = T::one();
        let d = self.degree();
        // x-powers descend while y-powers ascend; precompute x-powers once.
        let mut xpows = Vec::with_capacity(d + 1);
        xpows.push(T::one());
        for k in 1..=d {
            let next = xpows[k - 1].clone() * x.clone();
            xpows.push(next);
        }
        for (s, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c.clone() * xpows[d - s].clone() * ypow.clone();
            }
            ypow = ypow * y.clone();
        }
        acc
    }

    pub fn eval_at(&self, point: &[T]) -> T {
        self.eval(&point[0], &point[1])
    }

    pub fn partial(&self, axis: Axis) -> Result<Self, PolyError> {
        let d = self.degree();
        if d == 0 {
            return Err(PolyError::DegreeZero);
        }
        let coeffs = match axis {
            Axis::X => (0..d).map(|s| self.coeffs[s].clone() * from_usize::<T>(d - s)).collect(),
            Axis::Y => (1..=d).map(|s| self.coeffs[s].clone() * from_usize::<T>(s)).collect(),
        };
        Ok(Self { coeffs })
    }

    /// `z ↦ p(z, 1)`.
    pub fn dehomogenize(&self) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Inverse of [`dehomogenize`](Self::dehomogenize) at a prescribed degree.
    pub fn homogenize(p: &UniPoly<T>, degree: usize) -> Result<Self, PolyError> {
        let pd = p.degree().unwrap_or(0);
        if pd > degree {
            return Err(PolyError::DegreeMismatch(pd, degree));
        }
        let coeffs = (0..=degree).map(|s| p.coeff(degree - s)).collect();
        Ok(Self { coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_degree(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_degree(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect() })
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![T::zero(); self.degree() + other.degree() + 1];
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[s + t] = coeffs[s + t].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs }
    }

    fn check_same_degree(&self, other: &Self) -> Result<(), PolyError> {
        if self.degree() != other.degree() {
            return Err(PolyError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for HomPoly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| format!("({c})x^{}y^{s}", d - s))
            .collect();
        if terms.is_empty() {
            write!(f, "0 [deg {d}]")
        } else {
            write!(f, "{} [deg {d}]", terms.join(" + "))
        }
    }
}

fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("small integer fits the scalar type")
}

/// Univariate polynomial, ascending powers, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(T::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// Builds `Π (z - r)` scaled by `lead`.
    pub fn from_roots(lead: T, roots: &[T]) -> Self {
        let mut p = Self::constant(lead);
        for r in roots {
            p = p.mul(&Self::new(vec![-r.clone(), T::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> T {
        self.coeffs.get(power).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * from_usize::<T>(i)).collect())
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if sd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, PolyError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Division-free remainder: a positive multiple of `self mod divisor`
    /// (the multiplier is `|lc(divisor)|^(δ+1)`, `δ = deg self - deg divisor`).
    pub fn pseudo_rem(&self, divisor: &Self) -> Result<Self, PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let Some(sd) = self.degree() else {
            return Ok(Self::zero());
        };
        if sd < dd {
            return Ok(self.clone());
        }
        if let Some(r) = T::integral_pseudo_rem(&self.coeffs, &divisor.coeffs) {
            return Ok(Self::new(r));
        }
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let steps = sd - dd + 1;
        for k in (0..steps).rev() {
            let top = rem[k + dd].clone();
            for c in rem.iter_mut().take(k + dd + 1) {
                *c = c.clone() * lead.clone();
            }
            if !top.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - top.clone() * d.clone();
                }
            }
        }
        rem.truncate(dd);
        let r = Self::new(rem);
        Ok(if lead.is_negative() && steps % 2 == 1 { r.scale(&-T::one()) } else { r })
    }

    /// Scales to leading coefficient one (the zero polynomial is returned as is).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(T::one() / l.clone())),
            None => Self::zero(),
        }
    }

    fn normalized(mut self) -> Self {
        T::normalize_content(&mut self.coeffs);
        self
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn count_real_roots(&self) -> usize {
        match self.degree() {
            None => panic!("the zero polynomial vanishes everywhere"),
            Some(0) => return 0,
            _ => {}
        }
        let mut seq = vec![self.clone().normalized(), self.derivative().normalized()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].pseudo_rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-T::one()).normalized());
        }
        let sign_changes = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count();
        // true = positive
        let at_pos_inf = seq.iter().map(|p| p.leading().unwrap().is_positive()).collect();
        let at_neg_inf = seq
            .iter()
            .map(|p| {
                let lead_pos = p.leading().unwrap().is_positive();
                if p.degree().unwrap() % 2 == 0 {
                    lead_pos
                } else {
                    !lead_pos
                }
            })
            .collect();
        sign_changes(at_neg_inf) - sign_changes(at_pos_inf)
    }
}

impl<T: Scalar> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| format!("({c})z^{i}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Monic greatest common divisor by the Euclidean algorithm on
/// pseudo-remainders.
///
/// Each remainder is rescaled through [`Scalar::normalize_content`] (primitive
/// integer content over the rationals), so every step is division-free
/// integer arithmetic.
pub fn gcd_uni<T: Scalar>(a: &UniPoly<T>, b: &UniPoly<T>) -> Result<UniPoly<T>, PolyError> {
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    let mut x = a.clone().normalized();
    let mut y = b.clone().normalized();
    while !y.is_zero() {
        let r = x.pseudo_rem(&y)?.normalized();
        x = y;
        y = r;
    }
    Ok(x.monic())
}

/// Sylvester matrix of `a` (degree m) and `b` (degree n): n shifted rows of
/// `a`'s coefficients followed by m shifted rows of `b`'s, descending powers.
pub fn sylvester_matrix<T: Scalar>(a: &UniPoly<T>, b: &UniPoly<T>) -> Result<Matrix<T>, PolyError> {
    let m = a.degree().unwrap_or(0);
    let n = b.degree().unwrap_or(0);
    if m < 1 || n < 1 {
        return Err(PolyError::DegreeTooLow(m, n));
    }
    let size = m + n;
    let mut s = Matrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in a.coeffs().iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in b.coeffs().iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    Ok(s)
}

/// Resultant as the Sylvester determinant (multi-modular for integral
/// entries, elimination otherwise). Both inputs are first rescaled to
/// primitive form and the scale is restored afterwards, using
/// `res(f·a, g·b) = f^deg(b) g^deg(a) res(a, b)`.
pub fn resultant<T: Scalar>(a: &UniPoly<T>, b: &UniPoly<T>) -> Result<T, PolyError> {
    let (pa, fa) = primitive_with_factor(a);
    let (pb, fb) = primitive_with_factor(b);
    let s = sylvester_matrix(&pa, &pb)?;
    let rows: Vec<Vec<T>> = (0..s.rows()).map(|r| s.row(r).to_vec()).collect();
    let det = match T::integral_determinant_modular(&rows) {
        Some(d) => d,
        None => s.determinant().expect("Sylvester matrix is square"),
    };
    let m = a.degree().unwrap_or(0);
    let n = b.degree().unwrap_or(0);
    let scale = num_traits::pow(fa, n) * num_traits::pow(fb, m);
    Ok(det / scale)
}

/// `(f·p, f)` with `f·p` normalized by [`Scalar::normalize_content`].
fn primitive_with_factor<T: Scalar>(p: &UniPoly<T>) -> (UniPoly<T>, T) {
    let mut coeffs = p.coeffs.clone();
    T::normalize_content(&mut coeffs);
    let factor = match p.coeffs.iter().position(|c| !c.is_zero()) {
        Some(i) => coeffs[i].clone() / p.coeffs[i].clone(),
        None => T::one(),
    };
    (UniPoly::new(coeffs), factor)
}

/// General polynomial in two variables, stored as homogeneous parts of
/// degree `0..=total_degree`.
#[derive(Clone)]
pub struct Poly2<T> {
    parts: Vec<HomPoly2<T>>,
}

/// Equality of polynomials; zero parts above the true degree are ignored.
impl<T: Scalar> PartialEq for Poly2<T> {
    fn eq(&self, other: &Self) -> bool {
        let top = self.max_degree().max(other.max_degree());
        self.padded(top) == other.padded(top)
    }
}

impl<T: Scalar> Poly2<T> {
    pub fn zero(max_degree: usize) -> Self {
        Self { parts: (0..=max_degree).map(HomPoly2::zero).collect() }
    }

    pub fn from_hom(p: HomPoly2<T>) -> Self {
        let d = p.degree();
        let mut out = Self::zero(d);
        out.parts[d] = p;
        out
    }

    pub fn constant(c: T) -> Self {
        Self { parts: vec![HomPoly2 { coeffs: vec![c] }] }
    }

    /// `c0 + cx·x + cy·y`.
    pub fn linear(c0: T, cx: T, cy: T) -> Self {
        Self { parts: vec![HomPoly2 { coeffs: vec![c0] }, HomPoly2 { coeffs: vec![cx, cy] }] }
    }

    /// Storage bound on the degree (the true degree may be lower).
    pub fn max_degree(&self) -> usize {
        self.parts.len() - 1
    }

    /// Actual total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.parts.iter().rposition(|p| !p.is_zero())
    }

    pub fn part(&self, degree: usize) -> Option<&HomPoly2<T>> {
        self.parts.get(degree)
    }

    pub fn parts(&self) -> &[HomPoly2<T>] {
        &self.parts
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.parts.get(i + j).map_or_else(T::zero, |p| p.coeff(j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(HomPoly2::is_zero)
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.parts.iter().fold(T::zero(), |acc, p| acc + p.eval(x, y))
    }

    fn padded(&self, max_degree: usize) -> Vec<HomPoly2<T>> {
        let mut parts = self.parts.clone();
        for k in parts.len()..=max_degree {
            parts.push(HomPoly2::zero(k));
        }
        parts
    }

    pub fn add(&self, other: &Self) -> Self {
        let top = self.max_degree().max(other.max_degree());
        let a = self.padded(top);
        let b = other.padded(top);
        Self { parts: a.iter().zip(&b).map(|(p, q)| p.add(q).expect("same degree")).collect() }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self { parts: self.parts.iter().map(|p| p.scale(factor)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.max_degree() + other.max_degree());
        for a in &self.parts {
            if a.is_zero() {
                continue;
            }
            for b in &other.parts {
                if b.is_zero() {
                    continue;
                }
                let k = a.degree() + b.degree();
                out.parts[k] = out.parts[k].add(&a.mul(b)).expect("same degree");
            }
        }
        out
    }

    /// Composition `u(L(x, y))` of a univariate polynomial with a bivariate `L`.
    pub fn compose(u: &UniPoly<T>, inner: &Self) -> Self {
        let mut acc = Self::zero(0);
        for c in u.coeffs().iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `u(αx + βy + γ)`, by a Taylor shift of `u` followed by binomial
    /// expansion of each power of `αx + βy`.
    pub fn compose_affine(u: &UniPoly<T>, alpha: &T, beta: &T, gamma: &T) -> Self {
        let mut c = u.coeffs().to_vec();
        let n = c.len();
        if n == 0 {
            return Self::zero(0);
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                c[j] = c[j].clone() + gamma.clone() * c[j + 1].clone();
            }
        }
        let mut apow = vec![T::one()];
        let mut bpow = vec![T::one()];
        for k in 1..n {
            apow.push(apow[k - 1].clone() * alpha.clone());
            bpow.push(bpow[k - 1].clone() * beta.clone());
        }
        let mut binom = vec![T::one()];
        let parts = (0..n)
            .map(|k| {
                if k > 0 {
                    let mut next = vec![T::one(); k + 1];
                    for s in 1..k {
                        next[s] = binom[s - 1].clone() + binom[s].clone();
                    }
                    binom = next;
                }
                let coeffs =
                    (0..=k).map(|s| c[k].clone() * binom[s].clone() * apow[k - s].clone() * bpow[s].clone()).collect();
                HomPoly2 { coeffs }
            })
            .collect();
        Self { parts }
    }

    pub fn partial(&self, axis: Axis) -> Self {
        if self.max_degree() == 0 {
            return Self::zero(0);
        }
        Self { parts: self.parts.iter().skip(1).map(|p| p.partial(axis).expect("degree at least one")).collect() }
    }
}

impl<T: Scalar> fmt::Debug for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.parts.iter()).finish()
    }
}
