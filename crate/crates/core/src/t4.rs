//! T4 configurations: the chain equations
//!
//! ```text
//! a1 = p + k1 c1
//! a2 = p + c1 + k2 c2
//! a3 = p + c1 + c2 + k3 c3
//! a4 = p + c1 + c2 + c3 + k4 c4
//! c1 + c2 + c3 + c4 = 0,   every ki > 1
//! ```
//!
//! their exact solution for `(p, c)` given the points and factors, and the
//! "large" variant where one four-point set is a T4 configuration for three
//! orderings at once.

use num_traits::{One, Zero};

use crate::linalg::{vector, LinalgError};
use crate::operator::CertifiedOperator;
use crate::report::{CheckEntry, Status, VerificationReport};
use crate::{QMatrix, QVector, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum T4Error {
    #[error("the chain system is singular for these factors")]
    SingularSystem,
    #[error("factor k{index} = {value} is not greater than one")]
    FactorTooSmall { index: usize, value: String },
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

/// An ordered quadruple with its T4 data.
#[derive(Debug, Clone, PartialEq)]
pub struct T4Config {
    pub points: [QVector; 4],
    pub p: QVector,
    pub c: [QVector; 4],
    pub k: [Rational; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainCheck {
    pub holds: bool,
    /// Set when some leg is the zero vector (the equations can still hold).
    pub degenerate: bool,
}

impl T4Config {
    /// Right-hand side of chain row `l`: `p + c1 + … + c(l-1) + k_l c_l`.
    pub fn chain_point(&self, l: usize) -> QVector {
        let mut acc = self.p.clone();
        for m in 0..l {
            acc = vector::add(&acc, &self.c[m]);
        }
        vector::add(&acc, &vector::scale(&self.c[l], &self.k[l]))
    }

    /// The staircase corner `p + c1 + … + c_l` (`l = 0` gives `p`).
    pub fn corner(&self, l: usize) -> QVector {
        self.c[..l].iter().fold(self.p.clone(), |acc, c| vector::add(&acc, c))
    }

    pub fn legs_sum(&self) -> QVector {
        self.c.iter().fold(vec![Rational::zero(); self.p.len()], |acc, c| vector::add(&acc, c))
    }
}

pub fn verify_t4_chain(cfg: &T4Config) -> ChainCheck {
    let factors_ok = cfg.k.iter().all(|k| *k > Rational::one());
    let rows_ok = (0..4).all(|l| cfg.chain_point(l) == cfg.points[l]);
    let closure_ok = vector::is_zero(&cfg.legs_sum());
    ChainCheck { holds: factors_ok && rows_ok && closure_ok, degenerate: cfg.c.iter().any(|c| vector::is_zero(c)) }
}

/// Solves the 15 linear equations in `(p, c1, c2, c3, c4)` (that unknown order)
/// for fixed factors.
pub fn solve_t4(points: &[QVector; 4], k: &[Rational; 4]) -> Result<(QVector, [QVector; 4]), T4Error> {
    for (i, ki) in k.iter().enumerate() {
        if *ki <= Rational::one() {
            return Err(T4Error::FactorTooSmall { index: i + 1, value: crate::format_rational(ki) });
        }
    }
    let n = points[0].len();
    if points.iter().any(|a| a.len() != n) {
        return Err(T4Error::Inconsistent("points of different dimensions".into()));
    }
    let size = 5 * n;
    let mut m = QMatrix::zeros(size, size);
    let mut rhs = QMatrix::zeros(size, 1);
    for l in 0..4 {
        for j in 0..n {
            let row = l * n + j;
            m.set(row, j, Rational::one());
            for prior in 0..l {
                m.set(row, (1 + prior) * n + j, Rational::one());
            }
            m.set(row, (1 + l) * n + j, k[l].clone());
            rhs.set(row, 0, points[l][j].clone());
        }
    }
    for j in 0..n {
        let row = 4 * n + j;
        for leg in 0..4 {
            m.set(row, (1 + leg) * n + j, Rational::one());
        }
    }
    let x = m.solve(&rhs).map_err(|e| match e {
        LinalgError::SingularMatrix => T4Error::SingularSystem,
        other => T4Error::Inconsistent(other.to_string()),
    })?;
    let block = |b: usize| -> QVector { (0..n).map(|j| x.get(b * n + j, 0).clone()).collect() };
    let p = block(0);
    let c = [block(1), block(2), block(3), block(4)];
    Ok((p, c))
}

/// Permutation of `{0, 1, 2, 3}`; `map[i]` is the image of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Permutation([usize; 4]);

impl Permutation {
    pub fn new(map: [usize; 4]) -> Result<Self, T4Error> {
        let mut seen = [false; 4];
        for &v in &map {
            if v >= 4 || seen[v] {
                return Err(T4Error::InvalidPermutation(map.to_vec()));
            }
            seen[v] = true;
        }
        Ok(Self(map))
    }

    /// From the conventional 1-based listing `(σ(1), …, σ(4))`.
    pub fn from_one_based(map: [usize; 4]) -> Result<Self, T4Error> {
        if map.contains(&0) {
            return Err(T4Error::InvalidPermutation(map.to_vec()));
        }
        Self::new(map.map(|v| v - 1))
    }

    pub fn one_based(&self) -> [usize; 4] {
        self.0.map(|v| v + 1)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0; 4];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Self(inv)
    }
}

/// Four states that are a T4 configuration for three orderings, with the
/// twelve frequency nodes realizing every leg.
///
/// Node `4·i + l` belongs to leg `c_l` of ordering `i` (all indices 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct LargeT4Data {
    pub states: [QVector; 4],
    pub perms: [Permutation; 3],
    pub configs: [T4Config; 3],
    pub nodes: Vec<QVector>,
}

impl LargeT4Data {
    /// Assembles the configurations from states, orderings, `p`, `c` and `k`.
    pub fn new(
        states: [QVector; 4],
        perms: [Permutation; 3],
        p: [QVector; 3],
        c: [[QVector; 4]; 3],
        k: [[Rational; 4]; 3],
        nodes: Vec<QVector>,
    ) -> Result<Self, T4Error> {
        if nodes.len() != 12 || nodes.iter().any(|n| n.len() != 2) {
            return Err(T4Error::Inconsistent("expected 12 nodes in R^2".into()));
        }
        if states.iter().any(|s| s.len() != 3)
            || p.iter().any(|v| v.len() != 3)
            || c.iter().flatten().any(|v| v.len() != 3)
        {
            return Err(T4Error::Inconsistent("states, p and c must lie in R^3".into()));
        }
        let configs = std::array::from_fn(|i| T4Config {
            points: std::array::from_fn(|l| states[perms[i].apply(l)].clone()),
            p: p[i].clone(),
            c: c[i].clone(),
            k: k[i].clone(),
        });
        Ok(Self { states, perms, configs, nodes })
    }

    pub fn leg(&self, ordering: usize, l: usize) -> &QVector {
        &self.configs[ordering].c[l]
    }

    pub fn node(&self, ordering: usize, l: usize) -> &QVector {
        &self.nodes[4 * ordering + l]
    }

    /// Legs in node order (the right-hand sides of the interpolation problem).
    pub fn legs_in_node_order(&self) -> Vec<QVector> {
        (0..3).flat_map(|i| (0..4).map(move |l| (i, l))).map(|(i, l)| self.leg(i, l).clone()).collect()
    }

    /// `c^{σi}_{σi⁻¹(state)}` for the three orderings: the legs leaving `state`.
    pub fn legs_for_state(&self, state: usize) -> [QVector; 3] {
        std::array::from_fn(|i| self.leg(i, self.perms[i].inverse().apply(state)).clone())
    }

    pub fn independence_matrix(&self, state: usize) -> QMatrix {
        QMatrix::from_columns(&self.legs_for_state(state)).expect("3x3")
    }
}

/// Full structural check of a large T4 configuration against an operator.
pub fn verify_large_t4(data: &LargeT4Data, op: &CertifiedOperator) -> VerificationReport {
    let mut report = VerificationReport::new("large T4 configuration");
    for (i, cfg) in data.configs.iter().enumerate() {
        let ordered = (0..4).all(|l| cfg.points[l] == data.states[data.perms[i].apply(l)]);
        let chain = verify_t4_chain(cfg);
        let mut entry = CheckEntry::new(format!("t4/chain/sigma{}", i + 1), Status::from_bool(ordered && chain.holds))
            .with("ordering", format!("{:?}", data.perms[i].one_based()));
        if chain.degenerate {
            entry = entry.with("degenerate", "zero leg");
        }
        report.push(entry);
    }
    for state in 0..4 {
        let legs = data.legs_for_state(state);
        let det = data.independence_matrix(state).determinant().expect("square");
        let zero_leg = legs.iter().any(|c| vector::is_zero(c));
        report.push(
            CheckEntry::new(format!("t4/independence/a{}", state + 1), Status::from_bool(!det.is_zero() && !zero_leg))
                .with_rational("det", &det),
        );
    }
    for i in 0..3 {
        for l in 0..4 {
            let leg = data.leg(i, l);
            let name = format!("t4/wave-cone/sigma{}/c{}", i + 1, l + 1);
            let entry = match op.wave_cone_member(leg) {
                Ok(v) => {
                    let ok = v.member && !vector::is_zero(leg) && v.oracles_agree();
                    let mut e = CheckEntry::new(name, Status::from_bool(ok)).with("certificate", v.certificate());
                    if let Some(w) = &v.witness_direction {
                        e = e.with_vector("witness", w);
                    }
                    e
                }
                Err(err) => CheckEntry::new(name, Status::Fail).with("error", err.to_string()),
            };
            report.push(entry);
        }
    }
    for i in 0..3 {
        for l in 0..4 {
            let value = op.family().symbol_b(data.node(i, l));
            report.push(
                CheckEntry::new(
                    format!("t4/node/sigma{}/c{}", i + 1, l + 1),
                    Status::from_bool(&value == data.leg(i, l)),
                )
                .with_vector("node", data.node(i, l))
                .with_vector("symbol", &value),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn v(xs: &[i64]) -> QVector {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn identical_points_give_zero_legs() {
        let a = v(&[3, -1, 2]);
        let points = [a.clone(), a.clone(), a.clone(), a.clone()];
        let k = [qi(2), qi(2), qi(2), qi(2)];
        let (p, c) = solve_t4(&points, &k).unwrap();
        assert_eq!(p, a);
        assert!(c.iter().all(|leg| vector::is_zero(leg)));
        let check = verify_t4_chain(&T4Config { points, p, c, k });
        assert!(check.holds);
        assert!(check.degenerate);
    }

    #[test]
    fn small_factor_rejected() {
        let a = v(&[0, 0, 0]);
        let points = [a.clone(), a.clone(), a.clone(), a];
        let err = solve_t4(&points, &[qi(2), qi(1), qi(2), qi(2)]).unwrap_err();
        assert!(matches!(err, T4Error::FactorTooSmall { index: 2, .. }));
    }

    #[test]
    fn permutation_inverse() {
        let s = Permutation::from_one_based([3, 4, 1, 2]).unwrap();
        assert_eq!(s.apply(0), 2);
        let inv = s.inverse();
        for i in 0..4 {
            assert_eq!(inv.apply(s.apply(i)), i);
        }
        assert!(Permutation::from_one_based([1, 1, 2, 3]).is_err());
        assert!(Permutation::from_one_based([0, 1, 2, 3]).is_err());
    }
}
