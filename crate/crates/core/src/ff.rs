//! Table-driven arithmetic in GF(p^e).
//!
//! An element with coefficient vector `(c_0, .., c_{e-1})` over GF(p) has code
//! `sum c_i * p^i`. Codes `0` and `1` are the additive and multiplicative
//! identities.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p <= q / p && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // no factor up to sqrt(q)
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(mut code: u64, p: u64, e: u32) -> Vec<u64> {
    (0..e)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

/// Remainder of `f` divided by the monic polynomial `g` over GF(p).
/// Both are little-endian and include their leading coefficient.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - dg;
            for (j, &gj) in g[..dg].iter().enumerate() {
                r[off + j] = (r[off + j] + (p - lead) * gj) % p;
            }
        }
    }
    r
}

fn monic(coeffs: &[u64]) -> Vec<u64> {
    let mut f = coeffs.to_vec();
    f.push(1);
    f
}

/// Trial division by every monic polynomial of degree `1..=e/2`.
fn is_irreducible(p: u64, coeffs: &[u64]) -> bool {
    let e = coeffs.len() as u32;
    let f = monic(coeffs);
    for d in 1..=e / 2 {
        for code in 0..p.pow(d) {
            let g = monic(&digits(code, p, d));
            if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `e` over GF(p) with the smallest
/// code, as its `e` low coefficients. Degree one yields an empty list, meaning
/// plain arithmetic mod `p`.
pub fn find_irreducible(p: u64, e: u32) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::Range("extension degree must be at least 1".into()));
    }
    if e == 1 {
        return Ok(Vec::new());
    }
    let coeffs = (0..p.pow(e))
        .map(|code| digits(code, p, e))
        .find(|c| is_irreducible(p, c))
        .expect("irreducible polynomials exist in every degree");
    Ok(coeffs.into_iter().map(|x| x as u32).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl FieldSpec {
    /// GF(q) with the smallest irreducible modulus.
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let modulus = find_irreducible(p, e)?;
        Self::with_modulus(p, e, &modulus)
    }

    /// GF(p^e) over a caller-supplied modulus; fails with `Reducible` if the
    /// modulus does not define a field.
    pub fn with_modulus(p: u64, e: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= u16::MAX as u64)
            .ok_or_else(|| Error::Range(format!("field order {p}^{e} too large")))?;
        let expect = if e == 1 { 0 } else { e as usize };
        if modulus.len() != expect || modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::Malformed(format!(
                "modulus for GF({p}^{e}) needs {expect} coefficients below {p}"
            )));
        }
        let coeffs: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if e > 1 && !is_irreducible(p, &coeffs) {
            return Err(Error::Reducible {
                p,
                modulus: modulus.to_vec(),
            });
        }
        let (add, mul) = build_tables(p, e, &coeffs);
        Ok(FieldSpec {
            p: p as u32,
            e,
            q: q as u32,
            modulus: modulus.to_vec(),
            add,
            mul,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + y) as usize]
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[(x * self.q + y) as usize]
    }

    /// Row-major `q x q` addition table.
    pub fn add_table(&self) -> &[u32] {
        &self.add
    }

    pub fn mul_table(&self) -> &[u32] {
        &self.mul
    }
}

fn build_tables(p: u64, e: u32, modulus: &[u64]) -> (Vec<u32>, Vec<u32>) {
    let q = p.pow(e) as usize;
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    if e == 1 {
        for x in 0..q {
            for y in 0..q {
                add[x * q + y] = ((x + y) % q) as u32;
                mul[x * q + y] = ((x * y) % q) as u32;
            }
        }
        return (add, mul);
    }

    let dig: Vec<Vec<u64>> = (0..q as u64).map(|c| digits(c, p, e)).collect();
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32;
    for x in 0..q {
        for y in 0..q {
            let s: Vec<u64> = dig[x].iter().zip(&dig[y]).map(|(a, b)| (a + b) % p).collect();
            add[x * q + y] = encode(&s);
        }
    }

    // Multiplication through discrete logs of a primitive element.
    let f = monic(modulus);
    let times = |a: &[u64], b: &[u64]| -> u32 {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        encode(&poly_rem(&prod, &f, p))
    };
    let mut exp = Vec::with_capacity(q - 1);
    for g in 2..q {
        exp.clear();
        let mut cur = 1u32;
        loop {
            exp.push(cur);
            cur = times(&dig[cur as usize], &dig[g]);
            if cur == 1 || exp.len() >= q - 1 {
                break;
            }
        }
        if cur == 1 && exp.len() == q - 1 {
            break;
        }
    }
    let mut log = vec![0usize; q];
    for (i, &v) in exp.iter().enumerate() {
        log[v as usize] = i;
    }
    for x in 1..q {
        for y in 1..q {
            mul[x * q + y] = exp[(log[x] + log[y]) % (q - 1)];
        }
    }
    (add, mul)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        assert_eq!(find_irreducible(2, 1).unwrap(), Vec::<u32>::new());
        assert_eq!(find_irreducible(2, 2).unwrap(), vec![1, 1]);
        assert_eq!(find_irreducible(2, 3).unwrap(), vec![1, 1, 0]);
        assert_eq!(find_irreducible(3, 2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn not_prime() {
        assert_eq!(find_irreducible(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(FieldSpec::new(6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(matches!(
            FieldSpec::with_modulus(2, 2, &[1, 0]),
            Err(Error::Reducible { .. })
        ));
    }

    #[test]
    fn table_values() {
        let f4 = FieldSpec::new(4).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f4.add(2, 2), 0);
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(f5.mul(3, 4), 2);
    }

    #[test]
    fn deterministic() {
        for (p, e) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
            assert_eq!(find_irreducible(p, e).unwrap(), find_irreducible(p, e).unwrap());
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(97), Some((97, 1)));
        assert_eq!(prime_power(12), None);
    }
}
