//! Integer kernels behind the rational fast paths.

use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Fraction-free elimination; every division is exact.
pub(crate) fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let num = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                row[j] = num / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    if let Some(&b) = BASES.iter().find(|&&b| n.is_multiple_of(b)) {
        return n == b;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The `i`-th prime below `2^62`, counting down.
fn prime(i: usize) -> u64 {
    static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());
    let mut primes = PRIMES.lock().expect("prime table lock");
    while primes.len() <= i {
        let mut candidate = primes.last().map_or((1u64 << 62) - 1, |p| p - 2);
        while !is_prime(candidate) {
            candidate -= 2;
        }
        primes.push(candidate);
    }
    primes[i]
}

fn det_mod(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1;
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if r != k {
            a.swap(r, k);
            det = p - det;
        }
        det = mul_mod(det, a[k][k], p);
        let inv = pow_mod(a[k][k], p - 2, p);
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = mul_mod(a[i][k], inv, p);
            for j in k..n {
                let sub = mul_mod(f, a[k][j], p);
                a[i][j] = if a[i][j] >= sub { a[i][j] - sub } else { a[i][j] + p - sub };
            }
        }
    }
    det
}

/// Determinant by elimination modulo 62-bit primes, recombined with the
/// Chinese remainder theorem once the modulus exceeds twice the Hadamard bound.
pub(crate) fn modular_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    // log2 of the Hadamard bound, rounded up per row
    let bound_bits: u64 = m
        .iter()
        .map(|row| {
            let norm2: BigInt = row.iter().map(|x| x * x).sum();
            norm2.bits() / 2 + 1
        })
        .sum::<u64>()
        + 2;
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut index = 0;
    while modulus.bits() <= bound_bits {
        let p = prime(index);
        index += 1;
        let reduced: Vec<Vec<u64>> = m.iter().map(|row| row.iter().map(|x| residue(x, p)).collect()).collect();
        let r = det_mod(&reduced, p);
        // Garner step: value += modulus · ((r - value) / modulus mod p)
        let current = residue(&value, p);
        let diff = if r >= current { r - current } else { r + p - current };
        let inv = pow_mod(residue(&modulus, p), p - 2, p);
        let t = mul_mod(diff, inv, p);
        value += &modulus * t;
        modulus *= p;
    }
    if &value * 2 > modulus {
        value - modulus
    } else {
        value
    }
}

/// `x mod p` in `[0, p)`.
fn residue(x: &BigInt, p: u64) -> u64 {
    let mut r: u128 = 0;
    for d in x.magnitude().iter_u64_digits().rev() {
        r = ((r << 64) | d as u128) % p as u128;
    }
    let r = r as u64;
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// `|lc(b)|^(δ+1) · a mod b` over the integers, ascending coefficients.
pub(crate) fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b).expect("nonzero divisor");
    let Some(da) = degree(&a) else {
        return Vec::new();
    };
    if da < db {
        return a;
    }
    let lead = &b[db];
    let steps = da - db + 1;
    for k in (0..steps).rev() {
        let top = a[k + db].clone();
        for c in a.iter_mut().take(k + db + 1) {
            *c *= lead;
        }
        if !top.is_zero() {
            for (j, d) in b.iter().take(db + 1).enumerate() {
                a[k + j] -= &top * d;
            }
        }
    }
    a.truncate(db);
    if lead.is_negative() && steps % 2 == 1 {
        for c in &mut a {
            *c = -&*c;
        }
    }
    a
}
