//! Dense univariate polynomials over a prime field, coefficients stored low degree first.
//!
//! Only what the field constructor needs: multiplication and reduction modulo a monic
//! polynomial, modular exponentiation, gcd and Rabin's irreducibility test.

#[inline]
pub(crate) fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod_p(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_p(acc, base, p);
        }
        base = mul_mod_p(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub(crate) fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo `f` (any nonzero `f`).
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let df = degree(f).expect("reduction modulo the zero polynomial");
    let lead_inv = inv_mod_p(f[df], p);
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let c = mul_mod_p(r[dr], lead_inv, p);
        let shift = dr - df;
        for (i, &fc) in f[..=df].iter().enumerate() {
            let t = mul_mod_p(c, fc, p);
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_p(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_mod(base: &[u64], mut exp: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalize to monic
    if let Some(d) = degree(&x) {
        let inv = inv_mod_p(x[d], p);
        for c in x.iter_mut() {
            *c = mul_mod_p(*c, inv, p);
        }
    }
    x
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x^(p^k) mod f, by k successive p-th powers.
fn frobenius_power_of_x(k: u32, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[0, 1], f, p);
    for _ in 0..k {
        acc = pow_mod(&acc, p as u128, f, p);
    }
    acc
}

/// Rabin's test: a monic f of degree n is irreducible over F_p iff
/// x^(p^n) = x mod f and gcd(x^(p^(n/l)) - x, f) = 1 for every prime l | n.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(n) = degree(f) else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let full = frobenius_power_of_x(n as u32, f, p);
    if !sub(&full, &rem(&x, f, p), p).is_empty() {
        return false;
    }
    for l in prime_divisors(n as u64) {
        let h = frobenius_power_of_x((n as u64 / l) as u32, f, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

pub(crate) fn prime_factors(n: u64) -> Vec<u64> {
    prime_divisors(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        // no monic factor of degree 1..=deg/2
        let n = degree(f).unwrap();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut t = idx;
                for _ in 0..d {
                    g.push(t % p);
                    t /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for &(p, n) in &[
            (2u64, 2usize),
            (2, 3),
            (2, 4),
            (2, 6),
            (3, 2),
            (3, 3),
            (5, 2),
        ] {
            let count = p.pow(n as u32);
            for idx in 0..count {
                let mut f = Vec::with_capacity(n + 1);
                let mut t = idx;
                for _ in 0..n {
                    f.push(t % p);
                    t /= p;
                }
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    brute_irreducible(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn only_irreducible_quadratic_over_f2() {
        let all: Vec<Vec<u64>> = (0..4u64)
            .map(|i| vec![i & 1, (i >> 1) & 1, 1])
            .filter(|f| is_irreducible(f, 2))
            .collect();
        assert_eq!(all, vec![vec![1, 1, 1]]);
    }
}
