//! Laminates of finite order as weighted point masses in `R^3`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::linalg::vector;
use crate::operator::CertifiedOperator;
use crate::{QVector, Rational};

use super::{check_split, LaminateError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRecord {
    pub parent: QVector,
    pub b: QVector,
    pub c: QVector,
    pub s: Rational,
    pub lambda_split: Rational,
}

/// A probability measure reached from `δ_root` by elementary splittings.
/// Equal values are merged into a single mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminateTree {
    root: QVector,
    leaves: BTreeMap<QVector, Rational>,
    splits: Vec<SplitRecord>,
}

impl LaminateTree {
    pub fn new(root: QVector) -> Self {
        let leaves = BTreeMap::from([(root.clone(), Rational::one())]);
        Self { root, leaves, splits: Vec::new() }
    }

    pub fn root(&self) -> &QVector {
        &self.root
    }

    pub fn leaves(&self) -> &BTreeMap<QVector, Rational> {
        &self.leaves
    }

    pub fn splits(&self) -> &[SplitRecord] {
        &self.splits
    }

    pub fn weight(&self, value: &[Rational]) -> Rational {
        self.leaves.get(value).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_weight(&self) -> Rational {
        self.leaves.values().sum()
    }

    pub fn barycenter(&self) -> QVector {
        self.leaves
            .iter()
            .fold(vec![Rational::zero(); self.root.len()], |acc, (v, w)| vector::add(&acc, &vector::scale(v, w)))
    }

    /// Moves the fraction `lambda_split` of the mass at `leaf` to `b` and `c`
    /// in proportions `s` and `1 - s`.
    pub fn split(
        &self,
        op: &CertifiedOperator,
        leaf: &[Rational],
        b: &[Rational],
        c: &[Rational],
        s: &Rational,
        lambda_split: &Rational,
    ) -> Result<Self, LaminateError> {
        let Some(mass) = self.leaves.get(leaf) else {
            return Err(LaminateError::UnknownLeaf);
        };
        if !lambda_split.is_positive() || *lambda_split > Rational::one() {
            return Err(LaminateError::IllegalSplit("split fraction must lie in (0, 1]".into()));
        }
        check_split(op, leaf, b, c, s)?;
        let moved = mass * lambda_split;
        let mut next = self.clone();
        let remaining = mass - &moved;
        if remaining.is_zero() {
            next.leaves.remove(leaf);
        } else {
            next.leaves.insert(leaf.to_vec(), remaining);
        }
        *next.leaves.entry(b.to_vec()).or_insert_with(Rational::zero) += &moved * s;
        *next.leaves.entry(c.to_vec()).or_insert_with(Rational::zero) += moved * (Rational::one() - s);
        next.splits.push(SplitRecord {
            parent: leaf.to_vec(),
            b: b.to_vec(),
            c: c.to_vec(),
            s: s.clone(),
            lambda_split: lambda_split.clone(),
        });
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::paper_preset;
    use crate::scalar::{q, qi};
    use crate::verify::solve_coefficients;

    #[test]
    fn first_staircase_split() {
        let data = paper_preset();
        let op = CertifiedOperator::new(solve_coefficients(&data).unwrap()).unwrap();
        let cfg = &data.configs[0];
        let p1 = cfg.corner(1);
        let tree = LaminateTree::new(p1.clone());
        let tree = tree.split(&op, &p1, &data.states[0], &cfg.p, &q(1, 2), &qi(1)).unwrap();
        assert_eq!(tree.weight(&data.states[0]), q(1, 2));
        assert_eq!(tree.weight(&cfg.p), q(1, 2));
        assert_eq!(tree.barycenter(), p1);
        assert_eq!(
            tree.split(&op, &data.states[3], &data.states[0], &cfg.p, &q(1, 2), &qi(1)),
            Err(LaminateError::UnknownLeaf)
        );
    }
}
