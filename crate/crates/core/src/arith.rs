//! Integer number theory for word-sized unsigned integers: deterministic
//! primality, factorization and multiplicative order.
//!
//! Products are formed in `u128`, so every routine is exact for widths up to 64 bits.

use std::fmt;
use std::hash::Hash;

use num_traits::{PrimInt, Unsigned};

use crate::error::{Error, Result};

/// Unsigned integers of at most 64 bits.
pub trait Word: PrimInt + Unsigned + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    #[inline]
    fn wide(self) -> u128 {
        self.to_u128().expect("unsigned fits u128")
    }

    #[inline]
    fn narrow(v: u128) -> Self {
        Self::from(v).expect("reduced value fits the word")
    }
}

impl Word for u8 {}
impl Word for u16 {}
impl Word for u32 {}
impl Word for u64 {}

#[inline]
pub fn mul_mod<T: Word>(a: T, b: T, m: T) -> T {
    T::narrow(a.wide() * b.wide() % m.wide())
}

pub fn pow_mod<T: Word>(base: T, mut exp: T, m: T) -> T {
    if m == T::one() {
        return T::zero();
    }
    let mut result = T::one();
    let mut b = base % m;
    while exp > T::zero() {
        if exp & T::one() == T::one() {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp = exp >> 1;
    }
    result
}

pub fn gcd<T: Word>(mut a: T, mut b: T) -> T {
    while b != T::zero() {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Strong-pseudoprime bases that decide primality for every n < 3.3e24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin.
pub fn is_prime<T: Word>(n: T) -> bool {
    let n = n.wide() as u64;
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho; `n` odd composite.
fn rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1usize;
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn collect_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            out.push(p);
            collect_factors(n / p, out);
            return;
        }
    }
    let d = rho(n);
    collect_factors(d, out);
    collect_factors(n / d, out);
}

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization<T> {
    pairs: Vec<(T, u32)>,
}

impl<T: Word> Factorization<T> {
    pub fn of(n: T) -> Self {
        assert!(n >= T::one(), "factorize needs n >= 1");
        let mut primes = Vec::new();
        collect_factors(n.wide() as u64, &mut primes);
        primes.sort_unstable();
        let mut pairs: Vec<(T, u32)> = Vec::new();
        for p in primes {
            let p = T::narrow(p as u128);
            match pairs.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => pairs.push((p, 1)),
            }
        }
        Factorization { pairs }
    }

    pub fn pairs(&self) -> &[(T, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = T> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> T {
        self.pairs.iter().fold(T::one(), |acc, &(p, e)| acc * p.pow(e))
    }

    /// Euler's totient of the factored number.
    pub fn totient(&self) -> T {
        self.pairs.iter().fold(T::one(), |acc, &(p, e)| acc * (p - T::one()) * p.pow(e - 1))
    }
}

impl<T: Word> fmt::Display for Factorization<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

pub fn factorize<T: Word>(n: T) -> Factorization<T> {
    Factorization::of(n)
}

/// Least `t >= 1` with `a^t = 1 (mod m)`, found by stripping prime factors off `phi(m)`.
pub fn mult_order<T: Word>(a: T, m: T) -> Result<T> {
    if m < T::one() + T::one() {
        return Err(Error::InvalidArgument(format!("modulus {m} < 2")));
    }
    if gcd(a % m, m) != T::one() {
        return Err(Error::NotCoprime { a: a.wide() as u64, m: m.wide() as u64 });
    }
    let mut t = factorize(m).totient();
    for (p, _) in factorize(t).pairs().to_vec() {
        while t % p == T::zero() && pow_mod(a, t / p, m) == T::one() {
            t = t / p;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(14582937583067568u64);
        assert_eq!(f.pairs(), &[(2, 4), (3, 1), (11, 2), (13, 1), (17, 2), (53, 3), (67, 2)]);
        assert_eq!(f.product(), 14582937583067568);
        assert_eq!(factorize(12u64).pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(97u64).pairs(), &[(97, 1)]);
        assert_eq!(factorize(1u64).pairs(), &[]);
    }

    #[test]
    fn factorize_matches_trial_division() {
        for n in 2u64..5000 {
            assert_eq!(factorize(n).pairs(), trial_division(n).as_slice(), "n={n}");
        }
        for n in [600851475143u64, 999999000001, 4294967291 * 4294967279, (1 << 61) - 1, u64::MAX] {
            let f = factorize(n);
            assert_eq!(f.product(), n);
            assert!(f.primes().all(is_prime));
        }
    }

    #[test]
    fn primality_edge_cases() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        // strong pseudoprimes to small bases
        assert!(!is_prime(3215031751u64));
        assert!(!is_prime(3825123056546413051u64));
        assert!(is_prime(18446744073709551557u64));
        assert!(is_prime(97u32));
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(2u64, 7).unwrap(), 3);
        assert_eq!(mult_order(2u64, 5).unwrap(), 4);
        assert_eq!(mult_order(2u64, 17).unwrap(), 8);
        assert_eq!(mult_order(3u32, 10).unwrap(), 4);
        assert!(matches!(mult_order(2u64, 6), Err(Error::NotCoprime { .. })));
        assert!(mult_order(2u64, 1).is_err());
    }

    #[test]
    fn mult_order_matches_brute_force() {
        for m in 2u64..300 {
            for a in 1..m {
                if gcd(a, m) != 1 {
                    continue;
                }
                let mut t = 1;
                let mut x = a % m;
                while x != 1 {
                    x = x * a % m;
                    t += 1;
                }
                assert_eq!(mult_order(a, m).unwrap(), t, "a={a} m={m}");
            }
        }
    }
}
