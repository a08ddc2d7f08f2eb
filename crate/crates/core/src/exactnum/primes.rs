//! Primality, factorization and a growable table of primes indexed from 1
//! (`nth_prime(1) == 2`).

use std::sync::RwLock;

const SMALL_LIMIT: u64 = 1 << 16;

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

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Brent's variant of Pollard rho; `n` is odd, composite and > SMALL_LIMIT^2
// has already been excluded from trial division.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factors of `n` with multiplicity, in increasing order. `factorize(1)`
/// and `factorize(0)` are empty.
pub fn factorize(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p < SMALL_LIMIT && p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factor_into(n, &mut out);
    }
    out.sort_unstable();
    out
}

/// Distinct prime factors with exponents.
pub fn factor_exponents(n: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for p in factorize(n) {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

static TABLE: RwLock<Vec<u64>> = RwLock::new(Vec::new());

fn sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn ensure_table<F: Fn(&[u64]) -> bool>(covered: F) {
    if covered(&TABLE.read().expect("prime table poisoned")) {
        return;
    }
    let mut table = TABLE.write().expect("prime table poisoned");
    let mut limit = table.last().copied().unwrap_or(1024).max(1024);
    while !covered(&table) {
        limit *= 2;
        *table = sieve(limit);
    }
}

/// The `k`-th prime, 1-based.
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1, "prime indices start at 1");
    ensure_table(|t| t.len() >= k);
    TABLE.read().expect("prime table poisoned")[k - 1]
}

/// 1-based index of the prime `p`, or `None` if `p` is not prime.
pub fn prime_index(p: u64) -> Option<usize> {
    if !is_prime(p) {
        return None;
    }
    ensure_table(|t| t.last().is_some_and(|&l| l >= p));
    let table = TABLE.read().expect("prime table poisoned");
    table.binary_search(&p).ok().map(|i| i + 1)
}
