//! Primality testing and integer factorization.
//!
//! Miller-Rabin with the first twelve prime bases is deterministic below
//! 3.3 * 10^24; above that it is a strong probable-prime test. Factoring uses
//! trial division by small primes followed by Pollard-Brent.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const TRIAL_LIMIT: u64 = 1 << 12;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += M;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorization of `n > 0` as sorted `(prime, exponent)` pairs.
/// `factorize(1)` is empty.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut rest = n.clone();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        if (&rest % p).is_zero() {
            rest /= p;
            primes.push(BigUint::from(p));
            while (&rest % p).is_zero() {
                rest /= p;
                primes.push(BigUint::from(p));
            }
        }
        if rest.is_one() {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(rest, &mut primes);
    primes.sort();
    let mut grouped: Vec<(BigUint, u32)> = Vec::new();
    for prime in primes {
        match grouped.last_mut() {
            Some((last, e)) if *last == prime => *e += 1,
            _ => grouped.push((prime, 1)),
        }
    }
    grouped
}

/// Largest `e` with `p^e | n`; `n` must be nonzero.
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let mut e = 0;
    let mut rest = n.clone();
    loop {
        let (quot, rem) = rest.div_rem(&BigUint::from(p));
        if !rem.is_zero() {
            return e;
        }
        rest = quot;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit + 1];
        is[0] = false;
        is[1] = false;
        for i in 2..=limit {
            if i * i > limit {
                break;
            }
            if is[i] {
                for j in (i * i..=limit).step_by(i) {
                    is[j] = false;
                }
            }
        }
        is
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let is = sieve(20_000);
        for (n, &expected) in is.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), expected, "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [
            3_215_031_751u64,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
        ] {
            assert!(!is_prime_u64(n));
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn factorize_products_of_large_primes() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let n = &p * &p * &q * BigUint::from(12u32);
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 2),
                (BigUint::from(3u32), 1),
                (q.clone(), 1),
                (p.clone(), 2)
            ]
        );
        assert!(factorize(&BigUint::one()).is_empty());
    }

    #[test]
    fn valuation_counts_powers() {
        assert_eq!(valuation(&BigUint::from(50u32), 5), 2);
        assert_eq!(valuation(&BigUint::from(7u32), 5), 0);
    }
}
