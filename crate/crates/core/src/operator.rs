//! The operator family `B(ξ) = (q1, q2, q3)(ξ)` and its annihilator
//!
//! ```text
//!        [  0   -q3   q2 ]
//! A(ξ) = [ -q3   0    q1 ]
//!        [ -q2   q1   0  ]
//! ```
//!
//! with the constant-rank certificate, wave-cone membership decisions and the
//! action of `B` on polynomial potentials.
//!
//! `B` acts on a scalar potential `V` as `Σ_s c_s ∂x^(d-s) ∂y^s V` for each
//! component `q = Σ_s c_s x^(d-s) y^s`, so on a degree-`d` monomial it returns
//! the coefficient times `(d-s)! s!`. The plane-wave potential that realizes
//! the symbol is therefore `p_ξ(x) = Σ_I ξ^I / I! · x^I`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{vector, LinalgError};
use crate::poly::{gcd_uni, resultant, HomPoly2, Poly2};
use crate::{QHomPoly2, QMatrix, QPoly2, QUniPoly, QVector, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("components have different degrees ({0:?})")]
    DegreeMismatch([usize; 3]),
    #[error("constant-rank certificate not established: {0}")]
    PreconditionUnverified(String),
    #[error("potential has degree {found}, operator order is {order}")]
    DegreeTooHigh { found: usize, order: usize },
    #[error("basis symbols are linearly dependent")]
    DependentBasis,
    #[error("expected a vector of length {expected}, got {found}")]
    BadLength { expected: usize, found: usize },
}

#[derive(Clone, PartialEq)]
pub struct OperatorFamily {
    q: [QHomPoly2; 3],
}

impl fmt::Debug for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorFamily").field("degree", &self.degree()).finish_non_exhaustive()
    }
}

pub(crate) fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

impl OperatorFamily {
    pub fn new(q: [QHomPoly2; 3]) -> Result<Self, OperatorError> {
        let degrees = [q[0].degree(), q[1].degree(), q[2].degree()];
        if degrees[0] != degrees[1] || degrees[1] != degrees[2] {
            return Err(OperatorError::DegreeMismatch(degrees));
        }
        Ok(Self { q })
    }

    pub fn degree(&self) -> usize {
        self.q[0].degree()
    }

    pub fn components(&self) -> &[QHomPoly2; 3] {
        &self.q
    }

    pub fn component(&self, i: usize) -> &QHomPoly2 {
        &self.q[i]
    }

    /// `(q1(ξ), q2(ξ), q3(ξ))`.
    pub fn symbol_b(&self, xi: &[Rational]) -> QVector {
        self.q.iter().map(|p| p.eval_at(xi)).collect()
    }

    /// The 3×3 symbol of the annihilating operator at `ξ`.
    pub fn symbol_a(&self, xi: &[Rational]) -> QMatrix {
        let [q1, q2, q3] = <[Rational; 3]>::try_from(self.symbol_b(xi)).expect("three components");
        let z = Rational::zero();
        QMatrix::from_rows(&[
            vec![z.clone(), -q3.clone(), q2.clone()],
            vec![-q3, z.clone(), q1.clone()],
            vec![-q2, q1, z],
        ])
        .expect("3x3")
    }

    /// `A(ξ)·B(ξ)` computed as three forms of degree `2d`.
    pub fn symbolic_a_times_b(&self) -> [QHomPoly2; 3] {
        let [q1, q2, q3] = &self.q;
        let row =
            |a: &QHomPoly2, b: &QHomPoly2, c: &QHomPoly2, d: &QHomPoly2| a.mul(b).add(&c.mul(d)).expect("same degree");
        [
            // 0·q1 - q3·q2 + q2·q3
            row(&q3.scale(&-Rational::one()), q2, q2, q3),
            // -q3·q1 + 0·q2 + q1·q3
            row(&q3.scale(&-Rational::one()), q1, q1, q3),
            // -q2·q1 + q1·q2 + 0·q3
            row(&q2.scale(&-Rational::one()), q1, q1, q2),
        ]
    }

    /// Applies the order-`d` operator `B` to a scalar polynomial potential.
    /// Only the degree-`d` part contributes; the result is constant.
    pub fn apply_b_to_poly(&self, potential: &QPoly2) -> Result<QVector, OperatorError> {
        let d = self.degree();
        if let Some(found) = potential.total_degree() {
            if found > d {
                return Err(OperatorError::DegreeTooHigh { found, order: d });
            }
        }
        let Some(top) = potential.part(d) else {
            return Ok(vec![Rational::zero(); 3]);
        };
        let weights: Vec<Rational> = (0..=d).map(|s| factorial(d - s) * factorial(s) * top.coeff(s)).collect();
        Ok(self.q.iter().map(|p| vector::dot(p.coeffs(), &weights)).collect())
    }

    /// `p_ξ = Σ_{|I|=d} ξ^I / I! · x^I`, whose image under `B` is `B(ξ)`.
    pub fn plane_wave_potential(&self, xi: &[Rational]) -> QPoly2 {
        let d = self.degree();
        let mut xpow = vec![Rational::one()];
        let mut ypow = vec![Rational::one()];
        for k in 1..=d {
            xpow.push(&xpow[k - 1] * &xi[0]);
            ypow.push(&ypow[k - 1] * &xi[1]);
        }
        let coeffs = (0..=d).map(|s| &xpow[d - s] * &ypow[s] / (factorial(d - s) * factorial(s))).collect();
        Poly2::from_hom(HomPoly2::new(coeffs).expect("nonempty"))
    }

    /// A degree-`d` polynomial `P` with `B(P) = e`, combined from plane waves
    /// at three nodes whose symbols span `R^3`.
    pub fn potential_polynomial_for_constant(
        &self,
        e: &[Rational],
        basis: &[QVector; 3],
    ) -> Result<QPoly2, OperatorError> {
        if e.len() != 3 {
            return Err(OperatorError::BadLength { expected: 3, found: e.len() });
        }
        let columns: Vec<QVector> = basis.iter().map(|xi| self.symbol_b(xi)).collect();
        let m = QMatrix::from_columns(&columns).expect("3x3");
        let rhs = QMatrix::from_columns(&[e.to_vec()]).expect("3x1");
        let t = m.solve(&rhs).map_err(|err| match err {
            LinalgError::SingularMatrix => OperatorError::DependentBasis,
            other => panic!("unexpected linear algebra failure: {other}"),
        })?;
        let mut out = QPoly2::zero(self.degree());
        for (i, xi) in basis.iter().enumerate() {
            let ti = t.get(i, 0);
            if !ti.is_zero() {
                out = out.add(&self.plane_wave_potential(xi).scale(ti));
            }
        }
        Ok(out)
    }

    /// Sufficient test for balancedness: the sampled symbols span `R^3`.
    pub fn is_balanced(&self, samples: &[QVector]) -> bool {
        if samples.is_empty() {
            return false;
        }
        let columns: Vec<QVector> = samples.iter().map(|xi| self.symbol_b(xi)).collect();
        QMatrix::from_columns(&columns).expect("uniform columns").rank() == 3
    }

    /// Checks that `rank A(ξ) = 2` and `Ker A(ξ) = Im B(ξ)` for every `ξ ≠ 0`.
    ///
    /// For each pair `i < j` the forms `qi`, `qj` must have no common zero on
    /// the circle: no common root of the dehomogenizations (gcd constant,
    /// cross-checked by the resultant) and no common zero in the direction
    /// `(1, 0)` (not both `x^d` coefficients vanish).
    pub fn constant_rank_certificate(&self) -> ConstantRankReport {
        let symbolic_identity_holds = self.symbolic_a_times_b().iter().all(HomPoly2::is_zero);
        let pairs = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|(i, j)| PairCertificate::compute(i, j, &self.q[i], &self.q[j]))
            .collect();
        ConstantRankReport { symbolic_identity_holds, pairs }
    }

    /// Dehomogenized components `Qi(z) = qi(z, 1)`.
    pub fn dehomogenized(&self) -> [QUniPoly; 3] {
        [self.q[0].dehomogenize(), self.q[1].dehomogenize(), self.q[2].dehomogenize()]
    }
}

/// Coprimality certificate for two forms of equal degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    pub gcd: QUniPoly,
    pub gcd_is_constant: bool,
    /// `None` when one dehomogenization is constant (the resultant is undefined).
    pub resultant: Option<Rational>,
    pub leading_x: (Rational, Rational),
    pub common_zero_at_infinity: bool,
}

impl PairCertificate {
    pub fn compute(i: usize, j: usize, a: &QHomPoly2, b: &QHomPoly2) -> Self {
        let (qa, qb) = (a.dehomogenize(), b.dehomogenize());
        let gcd = coprimality_gcd(&qa, &qb);
        let resultant = resultant(&qa, &qb).ok();
        let leading_x = (a.leading_x_coeff().clone(), b.leading_x_coeff().clone());
        Self {
            i,
            j,
            gcd_is_constant: gcd.is_constant(),
            gcd,
            resultant,
            common_zero_at_infinity: leading_x.0.is_zero() && leading_x.1.is_zero(),
            leading_x,
        }
    }

    /// The gcd verdict and the resultant verdict agree (vacuous without a resultant).
    pub fn oracles_agree(&self) -> bool {
        self.resultant.as_ref().is_none_or(|r| !r.is_zero() == self.gcd_is_constant)
    }

    pub fn passes(&self) -> bool {
        self.gcd_is_constant && !self.common_zero_at_infinity && self.oracles_agree()
    }
}

/// gcd with the both-zero case mapped to the zero polynomial (a full common zero set).
fn coprimality_gcd(a: &QUniPoly, b: &QUniPoly) -> QUniPoly {
    gcd_uni(a, b).unwrap_or_else(|_| QUniPoly::zero())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRankReport {
    pub symbolic_identity_holds: bool,
    pub pairs: Vec<PairCertificate>,
}

impl ConstantRankReport {
    pub fn passes(&self) -> bool {
        self.symbolic_identity_holds && self.pairs.iter().all(PairCertificate::passes)
    }

    pub fn summary(&self) -> String {
        let failing: Vec<String> =
            self.pairs.iter().filter(|p| !p.passes()).map(|p| format!("q{}/q{}", p.i + 1, p.j + 1)).collect();
        match (self.symbolic_identity_holds, failing.is_empty()) {
            (true, true) => "PASS".into(),
            (false, _) => "A(ξ)B(ξ) is not identically zero".into(),
            (true, false) => format!("common zeros for pairs {}", failing.join(", ")),
        }
    }
}

/// An operator whose constant-rank certificate passed; the only way to ask
/// wave-cone questions.
#[derive(Debug, Clone)]
pub struct CertifiedOperator {
    family: OperatorFamily,
    report: ConstantRankReport,
}

impl CertifiedOperator {
    pub fn new(family: OperatorFamily) -> Result<Self, OperatorError> {
        let report = family.constant_rank_certificate();
        if !report.passes() {
            return Err(OperatorError::PreconditionUnverified(report.summary()));
        }
        Ok(Self { family, report })
    }

    pub fn family(&self) -> &OperatorFamily {
        &self.family
    }

    pub fn report(&self) -> &ConstantRankReport {
        &self.report
    }

    /// Decides `v ∈ Λ_A = ⋃_{ξ≠0} span B(ξ)`.
    ///
    /// With `k` an index where `v_k ≠ 0`, `v ∥ B(ξ)` iff the two cross forms
    /// `g_ik = qi·v_k - qk·v_i` (`i ≠ k`) vanish at `ξ`. Their common real
    /// zeros off the line `y = 0` are the real roots of the gcd of the
    /// dehomogenizations (counted by a Sturm sequence); the direction `(1, 0)`
    /// is screened through the `x^d` coefficients.
    pub fn wave_cone_member(&self, v: &[Rational]) -> Result<WaveConeVerdict, OperatorError> {
        if v.len() != 3 {
            return Err(OperatorError::BadLength { expected: 3, found: v.len() });
        }
        let Some(k) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(WaveConeVerdict { member: true, witness_direction: None, decision: Decision::ZeroVector });
        };
        let q = self.family.components();
        let mut w = v.to_vec();
        Rational::normalize_content(&mut w);
        let cross: Vec<(usize, QHomPoly2)> = (0..3)
            .filter(|&i| i != k)
            .map(|i| {
                let g = q[i].scale(&w[k]).sub(&q[k].scale(&w[i])).expect("same degree");
                let mut coeffs = g.coeffs().to_vec();
                Rational::normalize_content(&mut coeffs);
                (i, HomPoly2::new(coeffs).expect("nonempty"))
            })
            .collect();
        let pair_label = |i: usize| format!("g{}{}", (i.min(k)) + 1, (i.max(k)) + 1);
        let active: Vec<&(usize, QHomPoly2)> = cross.iter().filter(|(_, g)| !g.is_zero()).collect();
        let labels: Vec<String> = cross.iter().map(|(i, _)| pair_label(*i)).collect();

        if active.is_empty() {
            // B(ξ) ∥ v for every ξ; pick (1, 0).
            return Ok(WaveConeVerdict {
                member: true,
                witness_direction: Some(self.orient(vec![Rational::one(), Rational::zero()], v)),
                decision: Decision::IdenticallyParallel { forms: labels },
            });
        }

        let mut gcd = active[0].1.dehomogenize().monic();
        for (_, g) in &active[1..] {
            gcd = coprimality_gcd(&gcd, &g.dehomogenize());
        }
        let resultant = if active.len() == 2 {
            resultant(&active[0].1.dehomogenize(), &active[1].1.dehomogenize()).ok()
        } else {
            None
        };
        let leading: Vec<Rational> = active.iter().map(|(_, g)| g.leading_x_coeff().clone()).collect();
        let at_infinity = leading.iter().all(Zero::is_zero);
        let real_roots = if gcd.is_zero() { usize::MAX } else { gcd.count_real_roots() };

        let witness_direction = if at_infinity {
            Some(vec![Rational::one(), Rational::zero()])
        } else if gcd.degree() == Some(1) && real_roots > 0 {
            let root = -gcd.coeff(0) / gcd.coeff(1);
            Some(primitive_direction(&root))
        } else {
            None
        };
        let witness_direction = witness_direction.map(|w| self.orient(w, v));
        Ok(WaveConeVerdict {
            member: at_infinity || real_roots > 0,
            witness_direction,
            decision: Decision::CrossForms {
                forms: active.iter().map(|(i, _)| pair_label(*i)).collect(),
                gcd,
                real_roots: if real_roots == usize::MAX { None } else { Some(real_roots) },
                resultant,
                leading_x: leading,
            },
        })
    }
}

impl CertifiedOperator {
    /// Flips `w` when that makes `B(w)` a positive multiple of `v` (possible
    /// only for odd order, where `B(-w) = -B(w)`).
    fn orient(&self, w: QVector, v: &[Rational]) -> QVector {
        let t = vector::multiple_of(v, &self.family.symbol_b(&w));
        match t {
            Some(t) if t.is_negative() && self.family.degree() % 2 == 1 => w.iter().map(|x| -x).collect(),
            _ => w,
        }
    }
}

/// `(root, 1)` scaled to coprime integers with a positive second entry.
fn primitive_direction(root: &Rational) -> QVector {
    let den = root.denom().clone();
    let num = root.numer().clone();
    let (x, y) = if den.is_negative() { (-num, -den) } else { (num, den) };
    vec![Rational::from_integer(x), Rational::from_integer(y)]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    ZeroVector,
    /// Every cross form vanishes identically.
    IdenticallyParallel {
        forms: Vec<String>,
    },
    CrossForms {
        forms: Vec<String>,
        gcd: QUniPoly,
        /// Distinct real roots of the gcd; `None` if the gcd is the zero polynomial.
        real_roots: Option<usize>,
        /// Resultant of the two dehomogenized cross forms, when defined.
        resultant: Option<Rational>,
        leading_x: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveConeVerdict {
    pub member: bool,
    /// A primitive integer `ξ` with `B(ξ) ∥ v`, oriented so that `B(ξ)` is a
    /// positive multiple of `v` when the order is odd. Present whenever the
    /// parallel direction is rational.
    pub witness_direction: Option<QVector>,
    pub decision: Decision,
}

impl WaveConeVerdict {
    /// The gcd verdict and the resultant verdict agree on coprimality.
    pub fn oracles_agree(&self) -> bool {
        match &self.decision {
            Decision::CrossForms { gcd, resultant: Some(r), .. } => !r.is_zero() == gcd.is_constant(),
            _ => true,
        }
    }

    pub fn certificate(&self) -> String {
        match &self.decision {
            Decision::ZeroVector => "zero vector lies in every kernel".into(),
            Decision::IdenticallyParallel { forms } => {
                format!("cross forms {} vanish identically", forms.join(", "))
            }
            Decision::CrossForms { forms, gcd, real_roots, leading_x, .. } => {
                let gcd_txt = if gcd.is_constant() {
                    "1".to_string()
                } else {
                    format!("degree {} with {} real root(s)", gcd.degree().map_or(0, |d| d), real_roots.unwrap_or(0))
                };
                let lead: Vec<String> = leading_x.iter().map(crate::format_rational).collect();
                format!(
                    "gcd of dehomogenized {} is {gcd_txt}; x^d coefficients [{}]",
                    forms.join(", "),
                    lead.join(", ")
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn h(cs: &[i64]) -> QHomPoly2 {
        HomPoly2::new(cs.iter().map(|&c| qi(c)).collect()).unwrap()
    }

    fn linear_family() -> OperatorFamily {
        // (x, y, x + y)
        OperatorFamily::new([h(&[1, 0]), h(&[0, 1]), h(&[1, 1])]).unwrap()
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(matches!(
            OperatorFamily::new([h(&[1, 0]), h(&[0, 1, 0]), h(&[1, 1])]),
            Err(OperatorError::DegreeMismatch(_))
        ));
    }

    #[test]
    fn symbols_vanish_at_origin() {
        let f = linear_family();
        let zero = vec![qi(0), qi(0)];
        assert_eq!(f.symbol_b(&zero), vec![qi(0); 3]);
        assert!(f.symbol_a(&zero).is_zero());
    }

    #[test]
    fn linear_family_is_certified() {
        let f = linear_family();
        let rep = f.constant_rank_certificate();
        assert!(rep.symbolic_identity_holds);
        assert!(rep.passes(), "{rep:?}");
        // q2 = y has zero x-coefficient, but its partners do not
        assert!(rep.pairs.iter().all(|p| !p.common_zero_at_infinity));
    }

    #[test]
    fn repeated_power_family_fails() {
        let x3 = h(&[1, 0, 0, 0]);
        let f = OperatorFamily::new([x3.clone(), x3.clone(), x3]).unwrap();
        let rep = f.constant_rank_certificate();
        assert!(!rep.passes());
        assert!(rep.pairs.iter().all(|p| !p.gcd_is_constant));
        assert!(matches!(CertifiedOperator::new(f), Err(OperatorError::PreconditionUnverified(_))));
    }

    #[test]
    fn common_zero_at_infinity_fails() {
        // y^2 and xy share the direction (1, 0); their dehomogenizations 1 and z are coprime
        let f = OperatorFamily::new([h(&[0, 0, 1]), h(&[0, 1, 0]), h(&[1, 0, 1])]).unwrap();
        let rep = f.constant_rank_certificate();
        assert!(rep.pairs[0].gcd_is_constant);
        assert!(rep.pairs[0].common_zero_at_infinity);
        assert!(!rep.passes());
    }

    #[test]
    fn wave_cone_on_linear_family() {
        let op = CertifiedOperator::new(linear_family()).unwrap();
        assert!(op.wave_cone_member(&[qi(0), qi(0), qi(0)]).unwrap().member);
        // B(2, -3) = (2, -3, -1)
        let v = op.wave_cone_member(&[qi(2), qi(-3), qi(-1)]).unwrap();
        assert!(v.member);
        assert_eq!(v.witness_direction, Some(vec![qi(2), qi(-3)]));
        // third component must equal the sum of the first two
        assert!(!op.wave_cone_member(&[qi(1), qi(1), qi(1)]).unwrap().member);
        // direction (1, 0): B = (1, 0, 1)
        let v = op.wave_cone_member(&[qi(5), qi(0), qi(5)]).unwrap();
        assert!(v.member);
        assert_eq!(v.witness_direction, Some(vec![qi(1), qi(0)]));
    }

    #[test]
    fn complex_common_roots_are_not_members() {
        // q = (x^2 + y^2, xy, x^2 - y^2); v = (1, 0, 1) needs q2 = 0 and q1 = q3, i.e. y = 0 → (x^2, 0, x^2). member.
        let f = OperatorFamily::new([h(&[1, 0, 1]), h(&[0, 1, 0]), h(&[1, 0, -1])]).unwrap();
        let op = CertifiedOperator::new(f).unwrap();
        assert!(op.wave_cone_member(&[qi(1), qi(0), qi(1)]).unwrap().member);
        // v = (0, 0, 1) needs x^2 + y^2 = 0 and xy = 0: only complex solutions exist.
        let verdict = op.wave_cone_member(&[qi(0), qi(0), qi(1)]).unwrap();
        assert!(!verdict.member, "{verdict:?}");
    }

    #[test]
    fn balanced_checks() {
        let f = linear_family();
        let one = vec![vec![qi(1), qi(2)]];
        assert!(!f.is_balanced(&one));
        assert!(!f.is_balanced(&[]));
        // image of (x, y, x + y) lies in the plane v3 = v1 + v2
        let many: Vec<QVector> = (1..6).map(|k| vec![qi(k), qi(k * k - 3)]).collect();
        assert!(!f.is_balanced(&many));
        let g = OperatorFamily::new([h(&[1, 0, 0]), h(&[0, 0, 1]), h(&[0, 1, 0])]).unwrap();
        assert!(g.is_balanced(&[vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]]));
    }

    #[test]
    fn plane_wave_potential_realizes_symbol() {
        let f = OperatorFamily::new([h(&[1, -2, 0, 3]), h(&[0, 1, 1, 0]), h(&[2, 0, 0, -1])]).unwrap();
        let xi = vec![q(3, 2), qi(-5)];
        assert_eq!(f.apply_b_to_poly(&f.plane_wave_potential(&xi)).unwrap(), f.symbol_b(&xi));
    }

    #[test]
    fn low_degree_potentials_are_annihilated() {
        let f = linear_family();
        let c = QPoly2::constant(qi(7));
        assert_eq!(f.apply_b_to_poly(&c).unwrap(), vec![qi(0); 3]);
        let quad = QPoly2::from_hom(h(&[1, 0, 0]));
        assert!(matches!(f.apply_b_to_poly(&quad), Err(OperatorError::DegreeTooHigh { found: 2, order: 1 })));
    }

    #[test]
    fn potential_for_constant_round_trip_and_dependent_basis() {
        let g = OperatorFamily::new([h(&[1, 0, 0]), h(&[0, 0, 1]), h(&[0, 1, 0])]).unwrap();
        let basis = [vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]];
        let e = vec![q(1, 3), qi(-2), q(5, 7)];
        let p = g.potential_polynomial_for_constant(&e, &basis).unwrap();
        assert_eq!(g.apply_b_to_poly(&p).unwrap(), e);
        let zero = g.potential_polynomial_for_constant(&[qi(0), qi(0), qi(0)], &basis).unwrap();
        assert!(zero.is_zero());
        let dependent = [vec![qi(1), qi(0)], vec![qi(2), qi(0)], vec![qi(1), qi(1)]];
        assert_eq!(g.potential_polynomial_for_constant(&e, &dependent), Err(OperatorError::DependentBasis));
    }
}
