//! Lower bounds on the number of MOLS of order `n`, closed under three rules:
//!
//! 1. a prime power `q` has `q - 1` MOLS;
//! 2. `N(m1 * m2) >= min(N(m1), N(m2))` (Kronecker product);
//! 3. `N(abc) >= min(N(a) + 1, N(b), N(c))` for `a <= b <= c` (triple product).
//!
//! Every bound comes with a [`BoundProof`] that [`execute_proof`] turns into an
//! explicit transversal design.

use std::collections::HashMap;
use std::fmt;

use crate::designs::{
    extend_rtd, kronecker_mols, mols_from_field_n, mols_from_td, rtd_from_td, td_from_mols,
    ResolvableTD, TransversalDesign,
};
use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::product::{triple_product, CellBudget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofNode {
    PrimePower { p: u64, e: u32 },
    TwoProduct(Box<BoundProof>, Box<BoundProof>),
    TripleProduct(Box<BoundProof>, Box<BoundProof>, Box<BoundProof>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundProof {
    pub node: ProofNode,
    pub order: u64,
    pub value: u64,
}

impl BoundProof {
    pub fn prime_power(p: u64, e: u32) -> Self {
        let q = p.pow(e);
        BoundProof {
            node: ProofNode::PrimePower { p, e },
            order: q,
            value: q - 1,
        }
    }

    pub fn two_product(left: BoundProof, right: BoundProof) -> Self {
        BoundProof {
            order: left.order * right.order,
            value: left.value.min(right.value),
            node: ProofNode::TwoProduct(Box::new(left), Box::new(right)),
        }
    }

    /// Fails with `Order` unless the child orders are non-decreasing.
    pub fn triple_product(a: BoundProof, b: BoundProof, c: BoundProof) -> Result<Self> {
        if !(a.order <= b.order && b.order <= c.order) {
            return Err(Error::Order {
                a: a.order,
                b: b.order,
                c: c.order,
            });
        }
        Ok(BoundProof {
            order: a.order * b.order * c.order,
            value: (a.value + 1).min(b.value).min(c.value),
            node: ProofNode::TripleProduct(Box::new(a), Box::new(b), Box::new(c)),
        })
    }

    /// The unannotated term, e.g. `(triple (pp 2 3) (pp 3 2) (pp 13 1))`.
    pub fn term(&self) -> String {
        let mut s = String::new();
        self.write_term(&mut s, None);
        s
    }

    fn write_term(&self, out: &mut String, note: Option<(u64, u64)>) {
        let close = |out: &mut String| {
            if let Some((o, v)) = note {
                out.push_str(&format!(" :order {o} :value {v}"));
            }
            out.push(')');
        };
        match &self.node {
            ProofNode::PrimePower { p, e } => {
                out.push_str(&format!("(pp {p} {e}"));
            }
            ProofNode::TwoProduct(l, r) => {
                out.push_str("(prod ");
                l.write_term(out, None);
                out.push(' ');
                r.write_term(out, None);
            }
            ProofNode::TripleProduct(a, b, c) => {
                out.push_str("(triple ");
                a.write_term(out, None);
                out.push(' ');
                b.write_term(out, None);
                out.push(' ');
                c.write_term(out, None);
            }
        }
        close(out);
    }
}

/// The term with the root annotated by its order and value:
/// `(triple (pp 2 3) (pp 3 2) (pp 13 1) :order 936 :value 8)`.
impl fmt::Display for BoundProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_term(&mut s, Some((self.order, self.value)));
        f.write_str(&s)
    }
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Merged factorization of a product of factors, checking that the product
/// fits in 64 bits.
pub fn factorize_product(factors: &[u64]) -> Result<(u64, Vec<(u64, u32)>)> {
    if factors.is_empty() || factors.iter().any(|&f| f < 2) {
        return Err(Error::Range("factors must be at least 2".into()));
    }
    let n = factors
        .iter()
        .try_fold(1u64, |acc, &f| acc.checked_mul(f))
        .ok_or_else(|| Error::Range("product exceeds 64 bits".into()))?;
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for &f in factors {
        for (p, e) in factorize(f) {
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, x)) => *x += e,
                None => merged.push((p, e)),
            }
        }
    }
    merged.sort_unstable();
    Ok((n, merged))
}

fn macneish_of(fac: &[(u64, u32)]) -> u64 {
    fac.iter().map(|&(p, e)| p.pow(e) - 1).min().unwrap_or(0)
}

/// `min(q_i - 1)` over the prime-power factorization of `n`.
pub fn macneish_bound(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Range(format!("n = {n} must be at least 2")));
    }
    Ok(macneish_of(&factorize(n)))
}

pub fn macneish_bound_factors(factors: &[u64]) -> Result<u64> {
    let (_, fac) = factorize_product(factors)?;
    Ok(macneish_of(&fac))
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    PrimePower(u64, u32),
    Split(u64, u64),
    Triple(u64, u64, u64),
}

/// Memoized evaluation of the bound recursion. The memo is keyed by order and
/// may be shared across queries.
#[derive(Default)]
pub struct BoundEngine {
    memo: HashMap<u64, (u64, Choice)>,
}

fn divisors(fac: &[(u64, u32)]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in fac {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

fn restrict(fac: &[(u64, u32)], mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &(p, _) in fac {
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    out
}

impl BoundEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn best_bound(&mut self, n: u64) -> Result<BoundProof> {
        if n < 2 {
            return Err(Error::Range(format!("n = {n} must be at least 2")));
        }
        let fac = factorize(n);
        self.solve(n, &fac);
        Ok(self.proof(n))
    }

    /// As [`best_bound`](Self::best_bound) for the product of `factors`,
    /// which need not be prime.
    pub fn best_bound_factors(&mut self, factors: &[u64]) -> Result<BoundProof> {
        let (n, fac) = factorize_product(factors)?;
        self.solve(n, &fac);
        Ok(self.proof(n))
    }

    fn solve(&mut self, n: u64, fac: &[(u64, u32)]) -> u64 {
        if let Some(&(v, _)) = self.memo.get(&n) {
            return v;
        }
        if let [(p, e)] = *fac {
            // splits and triples are bounded by a proper divisor minus one
            self.memo.insert(n, (n - 1, Choice::PrimePower(p, e)));
            return n - 1;
        }
        let divs = divisors(fac);
        let f = |engine: &mut Self, d: u64| engine.solve(d, &restrict(fac, d));

        let mut triple: Option<(u64, Choice)> = None;
        for &a in divs.iter().skip(1) {
            if (a as u128).pow(3) > n as u128 {
                break;
            }
            let rest = n / a;
            let fa = f(self, a);
            for &b in divs.iter().filter(|&&b| b >= a) {
                if (b as u128).pow(2) > rest as u128 {
                    break;
                }
                if !rest.is_multiple_of(b) {
                    continue;
                }
                let c = rest / b;
                let v = (fa + 1).min(f(self, b)).min(f(self, c));
                if triple.is_none_or(|(best, _)| v > best) {
                    triple = Some((v, Choice::Triple(a, b, c)));
                }
            }
        }

        let mut split: Option<(u64, Choice)> = None;
        for &m1 in divs.iter().skip(1) {
            if (m1 as u128).pow(2) > n as u128 {
                break;
            }
            let m2 = n / m1;
            let v = f(self, m1).min(f(self, m2));
            if split.is_none_or(|(best, _)| v > best) {
                split = Some((v, Choice::Split(m1, m2)));
            }
        }

        let best = match (triple, split) {
            (Some(t), Some(s)) => {
                if t.0 >= s.0 {
                    t
                } else {
                    s
                }
            }
            (Some(t), None) => t,
            (None, Some(s)) => s,
            (None, None) => unreachable!("composite orders have a proper split"),
        };
        self.memo.insert(n, best);
        best.0
    }

    fn proof(&self, n: u64) -> BoundProof {
        let (_, choice) = self.memo[&n];
        match choice {
            Choice::PrimePower(p, e) => BoundProof::prime_power(p, e),
            Choice::Split(m1, m2) => BoundProof::two_product(self.proof(m1), self.proof(m2)),
            Choice::Triple(a, b, c) => {
                BoundProof::triple_product(self.proof(a), self.proof(b), self.proof(c))
                    .expect("triples are enumerated in order")
            }
        }
    }
}

/// Best bound reachable by the three rules, with a proof realizing it. Ties
/// prefer the prime-power rule, then the triple product with the
/// lexicographically smallest `(a, b, c)`, then the two-factor split with the
/// smallest `m1`.
pub fn best_bound(n: u64) -> Result<BoundProof> {
    BoundEngine::new().best_bound(n)
}

pub fn best_bound_factors(factors: &[u64]) -> Result<BoundProof> {
    BoundEngine::new().best_bound_factors(factors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: u64,
    pub macneish: u64,
    pub best: u64,
    pub proof: BoundProof,
}

/// Every `n` in `[lo, hi]` whose best bound beats MacNeish.
pub fn improvement_table(lo: u64, hi: u64) -> Result<Vec<TableRow>> {
    if lo < 2 || lo > hi {
        return Err(Error::Range(format!("bad range [{lo}, {hi}]")));
    }
    let mut engine = BoundEngine::new();
    let mut rows = Vec::new();
    for n in lo..=hi {
        let proof = engine.best_bound(n)?;
        let macneish = macneish_bound(n)?;
        if proof.value > macneish {
            rows.push(TableRow {
                n,
                macneish,
                best: proof.value,
                proof,
            });
        }
    }
    Ok(rows)
}

fn k_range(k: usize, max: u64) -> Error {
    Error::KRange {
        k,
        min: 2,
        max: (max as usize).saturating_add(2),
    }
}

/// Realizes `proof` as a TD(k, order) with `2 <= k <= value + 2`.
pub fn execute_proof(
    proof: &BoundProof,
    k: usize,
    budget: CellBudget,
) -> Result<TransversalDesign> {
    if k < 2 || k as u64 > proof.value.saturating_add(2) {
        return Err(k_range(k, proof.value));
    }
    budget.check(proof.order, k as u64)?;
    build(proof, k, budget)
}

fn build(proof: &BoundProof, k: usize, budget: CellBudget) -> Result<TransversalDesign> {
    let n = proof.order as usize;
    if k == 2 {
        return Ok(TransversalDesign::grid(n));
    }
    match &proof.node {
        ProofNode::PrimePower { .. } => {
            let field = FieldSpec::new(proof.order)?;
            td_from_mols(&mols_from_field_n(&field, k - 2), k)
        }
        ProofNode::TwoProduct(l, r) => {
            let left = mols_from_td(&build(l, k, budget)?)?;
            let right = mols_from_td(&build(r, k, budget)?)?;
            td_from_mols(&kronecker_mols(&left, &right), k)
        }
        ProofNode::TripleProduct(a, b, c) => {
            let rtd = construct_triple(a, b, c, k - 1, budget)?;
            extend_rtd(&rtd)
        }
    }
}

/// RTD(k, abc) from proofs of the three factors: a TD(k, a) and the
/// RTD(k, b), RTD(k, c) derived from TD(k + 1, .) designs.
pub fn construct_triple(
    a: &BoundProof,
    b: &BoundProof,
    c: &BoundProof,
    k: usize,
    budget: CellBudget,
) -> Result<ResolvableTD> {
    let max = (a.value + 2).min(b.value + 1).min(c.value + 1);
    if k < 2 || k as u64 > max {
        return Err(Error::KRange {
            k,
            min: 2,
            max: max as usize,
        });
    }
    if !(a.order <= b.order && b.order <= c.order) {
        return Err(Error::Order {
            a: a.order,
            b: b.order,
            c: c.order,
        });
    }
    budget.check(a.order * b.order * c.order, k as u64 + 1)?;
    let td_a = build(a, k, budget)?;
    let rtd_b = rtd_from_td(&build(b, k + 1, budget)?)?;
    let rtd_c = rtd_from_td(&build(c, k + 1, budget)?)?;
    triple_product(&td_a, &rtd_b, &rtd_c, budget)
}
