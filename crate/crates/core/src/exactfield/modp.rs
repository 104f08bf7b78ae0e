//! Dense polynomials over a prime field `Z/pZ`, lowest degree first.
//!
//! Shared by the Galois field arithmetic and by the modular gcd in
//! [`super::zpoly`]. Primes may be as large as `2^62`, so products go
//! through `u128`.

use std::sync::OnceLock;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = degree(m).expect("division by zero polynomial");
    let lc_inv = inv_mod(m[dm], p);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let q = mul_mod(r[dr], lc_inv, p);
        let shift = dr - dm;
        for (k, &mk) in m[..=dm].iter().enumerate() {
            r[shift + k] = sub_mod(r[shift + k], mul_mod(q, mk, p), p);
        }
        trim(&mut r);
    }
    r
}

pub fn make_monic(v: &mut Vec<u64>, p: u64) {
    trim(v);
    if let Some(&lc) = v.last() {
        let inv = inv_mod(lc, p);
        for c in v.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
}

/// Monic gcd over `Z/pZ`; the gcd of two zero polynomials is empty.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

/// Extended Euclid: returns `s` with `s * a = 1 (mod m)` when `gcd(a, m) = 1`.
pub fn inverse_mod_poly(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    trim(&mut r0);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let qs = mul(&q, &s1, p);
        let s2 = sub(&s0, &qs, p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let inv = inv_mod(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    out = rem(&out, m, p);
    Some(out)
}

pub fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = degree(m).expect("division by zero polynomial");
    let lc_inv = inv_mod(m[dm], p);
    let mut q = vec![0u64; r.len().saturating_sub(dm).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mul_mod(r[dr], lc_inv, p);
        let shift = dr - dm;
        q[shift] = c;
        for (k, &mk) in m[..=dm].iter().enumerate() {
            r[shift + k] = sub_mod(r[shift + k], mul_mod(c, mk, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(sub_mod(x, y, p));
    }
    trim(&mut out);
    out
}

/// `base^exp mod m` over `Z/pZ`.
pub fn pow_mod_poly(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a polynomial of degree `k >= 1`:
/// no factor of degree `i <= k/2` divides `x^(p^i) - x`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = match degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^i) mod f, built by repeated p-th powers
    let mut xp = rem(&x, f, p);
    for i in 1..=k {
        xp = pow_mod_poly(&xp, p as u128, f, p);
        if i <= k / 2 {
            let diff = sub(&xp, &x, p);
            let g = gcd(&diff, f, p);
            if degree(&g) != Some(0) {
                return false;
            }
        }
    }
    // x^(p^k) must equal x modulo f
    xp == rem(&x, f, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
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

pub fn is_prime(n: u64) -> bool {
    is_prime_u64(n)
}

const TABLE_LEN: usize = 256;

fn prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(TABLE_LEN);
        let mut n: u64 = (1u64 << 62) - 1;
        while out.len() < TABLE_LEN {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

/// Descending primes just below `2^62`: a cached table, then fresh ones.
pub fn large_primes() -> impl Iterator<Item = u64> {
    let table = prime_table();
    let last = *table.last().unwrap();
    table.iter().copied().chain(
        (0..)
            .map(move |k: u64| last - 2 * (k + 1))
            .filter(|&n| is_prime_u64(n)),
    )
}
