//! Modular and p-adic arithmetic modulo odd prime powers.
//!
//! Residues are `u64` values in `[0, modulus)`. Every product is formed in
//! `u128` before reduction, and moduli are capped below `2^63`, so no
//! intermediate can overflow.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Group orders at or above this use Pohlig-Hellman instead of a linear scan.
pub const DLOG_SCAN_LIMIT: u64 = 1_000_000;

const MAX_MODULUS: u64 = 1 << 63;

/// `p^e` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    e: u32,
    value: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let value = checked_pow(p, e).ok_or(Error::ModulusTooLarge { p, e })?;
        Ok(PrimePower { p, e, value })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Euler's totient `(p-1) p^(e-1)`, or 1 for `e = 0`.
    pub fn totient(&self) -> u64 {
        if self.e == 0 {
            1
        } else {
            (self.p - 1) * (self.value / self.p)
        }
    }

    pub fn reduce(&self, z: i128) -> u64 {
        z.rem_euclid(self.value as i128) as u64
    }
}

/// `p^e` as a plain integer, `None` when it would reach `2^63`.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let v = p.checked_pow(e)?;
    (v < MAX_MODULUS).then_some(v)
}

/// Deterministic trial division.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

/// Square-and-multiply on already reduced inputs.
pub fn pow_mod_u64(base: u64, mut exp: u128, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    result
}

pub fn pow_mod(base: i128, exp: u128, modulus: &PrimePower) -> u64 {
    pow_mod_u64(modulus.reduce(base), exp, modulus.value)
}

/// `S(z, ell) = 1 + z + ... + z^(ell-1)` modulo `n`, with `S(z, 0) = 0`.
///
/// Walks the bits of `ell` from the top using `S(z,2t) = S(z,t)(1+z^t)` and
/// `S(z,2t+1) = S(z,2t) + z^(2t)`.
pub fn s_sum_u64(z: u64, ell: u128, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let z = z % n;
    let mut sum = 0u64;
    let mut zt = 1u64;
    let bits = 128 - ell.leading_zeros();
    for bit in (0..bits).rev() {
        sum = mul_mod(sum, add_mod(1, zt, n), n);
        zt = mul_mod(zt, zt, n);
        if (ell >> bit) & 1 == 1 {
            sum = add_mod(sum, zt, n);
            zt = mul_mod(zt, z, n);
        }
    }
    sum
}

pub fn s_sum(z: i128, ell: u128, modulus: &PrimePower) -> u64 {
    s_sum_u64(modulus.reduce(z), ell, modulus.value)
}

/// Largest `e` with `p^e | x`.
pub fn vp(x: i128, p: u64) -> Result<u32> {
    if x == 0 {
        return Err(Error::ZeroValuation);
    }
    let p = p as i128;
    let mut x = x;
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    Ok(e)
}

/// Valuation of a residue modulo `p^e`, with the zero residue mapped to `e`.
pub fn vp_capped(x: u64, modulus: &PrimePower) -> u32 {
    let x = x % modulus.value;
    if x == 0 {
        modulus.e
    } else {
        vp(x as i128, modulus.p).expect("nonzero")
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in distinct_prime_factors(n) {
        let mut f = 0;
        while n.is_multiple_of(q) {
            n /= q;
            f += 1;
        }
        out.push((q, f));
    }
    out
}

fn check_unit(z: u64, modulus: &PrimePower) -> Result<()> {
    if modulus.e > 0 && z.is_multiple_of(modulus.p) {
        return Err(Error::NotUnit {
            value: z,
            modulus: modulus.value,
        });
    }
    Ok(())
}

/// Inverse of a unit modulo `p^e`.
pub fn inv_mod(z: i128, modulus: &PrimePower) -> Result<u64> {
    let z = modulus.reduce(z);
    check_unit(z, modulus)?;
    Ok(pow_mod_u64(z, modulus.totient() as u128 - 1, modulus.value))
}

/// Multiplicative order of a unit modulo `p^e`.
pub fn mult_order(z: i128, modulus: &PrimePower) -> Result<u64> {
    let z = modulus.reduce(z);
    check_unit(z, modulus)?;
    let n = modulus.value;
    let mut ord = modulus.totient();
    for q in distinct_prime_factors(ord) {
        while ord.is_multiple_of(q) && pow_mod_u64(z, (ord / q) as u128, n) == 1 % n {
            ord /= q;
        }
    }
    Ok(ord)
}

/// The least `u >= 2` generating the units mod `p^2`, reduced mod `modulus`.
///
/// Such a `u` generates the units modulo every power of `p`.
pub fn primitive_root(modulus: &PrimePower) -> Result<u64> {
    if modulus.e == 0 {
        return Err(Error::InvalidArgument(
            "primitive_root needs exponent >= 1".into(),
        ));
    }
    Ok(primitive_root_integer(modulus.p)? % modulus.value)
}

/// The least `u >= 2` generating the units mod `p^2`, as an integer.
pub fn primitive_root_integer(p: u64) -> Result<u64> {
    let sq = PrimePower::new(p, 2)?;
    let target = sq.totient();
    (2..sq.value)
        .find(|&u| u % p != 0 && mult_order(u as i128, &sq).ok() == Some(target))
        .ok_or_else(|| Error::NoSolution(format!("no primitive root mod {p}^2")))
}

/// Least `e >= 0` with `base^e = target (mod p^k)`, or `None` outside `<base>`.
pub fn discrete_log(target: i128, base: i128, modulus: &PrimePower) -> Result<Option<u64>> {
    let order = mult_order(base, modulus)?;
    let t = modulus.reduce(target);
    check_unit(t, modulus)?;
    if order < DLOG_SCAN_LIMIT {
        Ok(discrete_log_scan(
            t,
            modulus.reduce(base),
            modulus.value,
            order,
        ))
    } else {
        Ok(discrete_log_pohlig_hellman(
            t,
            modulus.reduce(base),
            modulus.value,
            order,
        ))
    }
}

/// Linear scan over `base^0, ..., base^(order-1)`.
pub fn discrete_log_scan(target: u64, base: u64, n: u64, order: u64) -> Option<u64> {
    let target = target % n;
    let mut acc = 1 % n;
    for e in 0..order {
        if acc == target {
            return Some(e);
        }
        acc = mul_mod(acc, base, n);
    }
    None
}

/// Pohlig-Hellman in the cyclic subgroup `<base>` of order `order`.
pub fn discrete_log_pohlig_hellman(target: u64, base: u64, n: u64, order: u64) -> Option<u64> {
    // units mod p^k are cyclic, so <base> is the unique subgroup of its order
    if pow_mod_u64(target, order as u128, n) != 1 % n {
        return None;
    }
    let mut residue = 0u128;
    let mut modulus = 1u128;
    for (q, f) in factorize(order) {
        let qf = q.pow(f);
        let g = pow_mod_u64(base, (order / qf) as u128, n);
        let h = pow_mod_u64(target, (order / qf) as u128, n);
        let gamma = pow_mod_u64(g, (qf / q) as u128, n);
        let g_inv = pow_mod_u64(g, (qf - 1) as u128, n);
        let mut x = 0u64;
        let mut qk = 1u64;
        for k in 0..f {
            let hk = mul_mod(h, pow_mod_u64(g_inv, x as u128, n), n);
            let hk = pow_mod_u64(hk, (qf / q / qk) as u128, n);
            let digit = baby_giant(hk, gamma, n, q)?;
            x += digit * qk;
            if k + 1 < f {
                qk *= q;
            }
        }
        residue = crt(residue, modulus, x as u128, qf as u128);
        modulus *= qf as u128;
    }
    Some((residue % modulus) as u64)
}

fn baby_giant(target: u64, base: u64, n: u64, order: u64) -> Option<u64> {
    if order <= 64 {
        return discrete_log_scan(target, base, n, order);
    }
    let step = (order as f64).sqrt().ceil() as u64;
    let mut table = HashMap::with_capacity(step as usize);
    let mut acc = 1 % n;
    for j in 0..step {
        table.entry(acc).or_insert(j);
        acc = mul_mod(acc, base, n);
    }
    let factor = pow_mod_u64(base, (order - step % order) as u128 % order as u128, n);
    let mut gamma = target % n;
    for i in 0..=step {
        if let Some(&j) = table.get(&gamma) {
            let e = i * step + j;
            if e < order {
                return Some(e);
            }
        }
        gamma = mul_mod(gamma, factor, n);
    }
    None
}

fn crt(r1: u128, m1: u128, r2: u128, m2: u128) -> u128 {
    // m1, m2 coprime; brute over the smaller lift count is fine at this scale
    let mut x = r1;
    while x % m2 != r2 % m2 {
        x += m1;
    }
    x
}
