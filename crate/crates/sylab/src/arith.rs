//! Small exact integer utilities used throughout the crate.

pub fn gcd(a: u64, b: u64) -> u64 {
    crate::perm::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    crate::perm::lcm(a, b)
}

/// Trial-division factorization, adequate for the magnitudes in this crate.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: u64, p: u64) -> u64 {
    let mut out = 1;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        out *= p;
    }
    out
}

/// p-adic valuation of `n` (n > 0).
pub fn valuation(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn invmod(a: u64, m: u64) -> u64 {
    // m prime in all uses
    powmod(a, m - 2, m)
}

/// Multiplicative order of `a` modulo `m`, gcd(a, m) = 1.
pub fn order_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    // order divides Carmichael(m); scan divisors of the group order via
    // lambda bound = order of the element found by iteration (magnitudes small)
    let mut x = a % m;
    let mut k = 1u64;
    while x != 1 {
        x = mulmod(x, a, m);
        k += 1;
        debug_assert!(k <= m);
    }
    k
}

/// Least primitive root modulo an odd prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fac = factor(p - 1);
    'outer: for g in 2..p {
        for &(q, _) in &fac {
            if powmod(g, (p - 1) / q, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// Smallest prime `l` with `l ≡ 1 (mod e)` and `l > floor`.
pub fn next_prime_one_mod(e: u64, floor: u64) -> u64 {
    let mut l = (floor / e + 1) * e + 1;
    loop {
        if l > floor && is_prime(l) {
            return l;
        }
        l += e;
    }
}

/// Square root modulo an odd prime, if one exists (Tonelli–Shanks with the
/// least nonresidue as the auxiliary, so the result is deterministic).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(a, (p + 1) / 4, p));
    }
    // write p-1 = q * 2^s
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| powmod(z, (p - 1) / 2, p) == p - 1)
        .expect("nonresidue exists");
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factor(244823040), vec![(2, 10), (3, 3), (5, 1), (7, 1), (11, 1), (23, 1)]);
        assert_eq!(p_part(24, 2), 8);
        assert_eq!(p_part(24, 5), 1);
    }

    #[test]
    fn primes() {
        assert!(is_prime(2));
        assert!(is_prime(23));
        assert!(!is_prime(1));
        assert!(!is_prime(20160));
        assert_eq!(next_prime_one_mod(12, 20), 37);
    }

    #[test]
    fn modular() {
        let p = 1000003;
        assert_eq!(mulmod(invmod(77, p), 77, p), 1);
        assert_eq!(order_mod(2, 7), 3);
        assert_eq!(least_primitive_root(7), 3);
        let r = sqrt_mod(2, 7).unwrap();
        assert_eq!(mulmod(r, r, 7), 2);
        assert!(sqrt_mod(3, 7).is_none());
    }
}
