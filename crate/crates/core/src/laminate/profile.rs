//! The periodic two-valued profile `h` and its `k`-fold antiderivative `H`.
//!
//! `h = λ` on `[m, m+1-λ)` and `h = -(1-λ)` on `[m+1-λ, m+1)` for every
//! integer `m`. These half-open intervals are numbered by a single index `n`:
//! `2m` for the first, `2m+1` for the second.
//!
//! `H` is piecewise polynomial with the same breakpoints. On interval `n` with
//! left endpoint `ℓ_n`,
//!
//! ```text
//! H(ℓ_n + u) = Σ_{j<k} D_n[j] u^j / j! + h_n u^k / k!
//! ```
//!
//! where `D_n[j] = H^(j)(ℓ_n)`. Starting from `D_0 = 0` at the origin, the
//! vectors are carried across breakpoints in both directions by exact Taylor
//! expansion.

use std::collections::VecDeque;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::operator::factorial;
use crate::{QUniPoly, Rational};

use super::LaminateError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    lambda: Rational,
}

impl Profile {
    pub fn new(lambda: Rational) -> Result<Self, LaminateError> {
        if !lambda.is_positive() || lambda >= Rational::one() {
            return Err(LaminateError::BadParameter(format!(
                "lambda must lie in (0, 1), got {}",
                crate::format_rational(&lambda)
            )));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn high(&self) -> Rational {
        self.lambda.clone()
    }

    pub fn low(&self) -> Rational {
        &self.lambda - Rational::one()
    }

    /// Index of the interval containing `t`.
    pub fn interval_index(&self, t: &Rational) -> i64 {
        let m = t.floor();
        let frac = t - &m;
        let m: i64 = m.to_integer().try_into().expect("interval index fits in i64");
        if frac < Rational::one() - &self.lambda {
            2 * m
        } else {
            2 * m + 1
        }
    }

    /// `[lo, hi)` of interval `n`.
    pub fn interval(&self, n: i64) -> (Rational, Rational) {
        let m = Rational::from_integer(BigInt::from(n.div_euclid(2)));
        let mid = &m + Rational::one() - &self.lambda;
        if n.is_even() {
            (m, mid)
        } else {
            (mid, m + Rational::one())
        }
    }

    /// `h` on interval `n`.
    pub fn value_on(&self, n: i64) -> Rational {
        if n.is_even() {
            self.high()
        } else {
            self.low()
        }
    }

    pub fn h(&self, t: &Rational) -> Rational {
        self.value_on(self.interval_index(t))
    }
}

/// Derivative vectors `D_n` for a contiguous run of intervals, grown on demand.
#[derive(Debug)]
struct Table {
    first: i64,
    vectors: VecDeque<Vec<Rational>>,
}

/// `H` with `H^(k) = h` and `H^(j)(0) = 0` for `j < k`.
#[derive(Debug)]
pub struct Antiderivative {
    profile: Profile,
    order: usize,
    inv_factorials: Vec<Rational>,
    table: Mutex<Table>,
}

impl Antiderivative {
    pub fn new(profile: Profile, order: usize) -> Result<Self, LaminateError> {
        if order == 0 {
            return Err(LaminateError::BadParameter("antiderivative order must be at least 1".into()));
        }
        let inv_factorials = (0..=order).map(|j| factorial(j).recip()).collect();
        let table = Table { first: 0, vectors: VecDeque::from([vec![Rational::zero(); order]]) };
        Ok(Self { profile, order, inv_factorials, table: Mutex::new(table) })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Taylor shift of the piece on interval `n` (given by `d` at one endpoint)
    /// by `w`: the derivative vector at the other endpoint.
    fn shift(&self, d: &[Rational], h: &Rational, w: &Rational) -> Vec<Rational> {
        let k = self.order;
        let mut powers = vec![Rational::one()];
        for j in 1..=k {
            powers.push(&powers[j - 1] * w);
        }
        (0..k)
            .map(|l| {
                let mut acc = h * &powers[k - l] * &self.inv_factorials[k - l];
                for j in l..k {
                    acc += &d[j] * &powers[j - l] * &self.inv_factorials[j - l];
                }
                acc
            })
            .collect()
    }

    /// `D_n`, extending the table as needed.
    pub fn derivatives(&self, n: i64) -> Vec<Rational> {
        let mut table = self.table.lock().expect("table lock");
        while n >= table.first + table.vectors.len() as i64 {
            let last_index = table.first + table.vectors.len() as i64 - 1;
            let (lo, hi) = self.profile.interval(last_index);
            let next =
                self.shift(table.vectors.back().expect("nonempty"), &self.profile.value_on(last_index), &(hi - lo));
            table.vectors.push_back(next);
        }
        while n < table.first {
            let index = table.first - 1;
            let (lo, hi) = self.profile.interval(index);
            let prev = self.shift(table.vectors.front().expect("nonempty"), &self.profile.value_on(index), &(lo - hi));
            table.vectors.push_front(prev);
            table.first = index;
        }
        table.vectors[(n - table.first) as usize].clone()
    }

    /// The piece on interval `n` as a polynomial in `u = t - ℓ_n`.
    pub fn piece(&self, n: i64) -> QUniPoly {
        let d = self.derivatives(n);
        let mut coeffs: Vec<Rational> = d.iter().zip(&self.inv_factorials).map(|(v, f)| v * f).collect();
        coeffs.push(self.profile.value_on(n) * &self.inv_factorials[self.order]);
        QUniPoly::new(coeffs)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let n = self.profile.interval_index(t);
        let (lo, _) = self.profile.interval(n);
        self.piece(n).eval(&(t - lo))
    }

    /// `H^(j)(t)` for `j ≤ k`.
    pub fn derivative_at(&self, j: usize, t: &Rational) -> Rational {
        let n = self.profile.interval_index(t);
        let (lo, _) = self.profile.interval(n);
        let mut p = self.piece(n);
        for _ in 0..j {
            p = p.derivative();
        }
        p.eval(&(t - lo))
    }
}
