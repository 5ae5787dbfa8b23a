//! Rees's resolvable product and the three-factor pipeline built on it.
//!
//! Groups of the inner design are identified with Z_m through the element
//! codes. A `(sigma, gamma)` group partition fixes the subgroup `H` of order
//! `sigma` (the multiples of `m / sigma`) and a partition of the inner blocks
//! whose `H`-translates are `gamma`-parallel classes.
//!
//! [`rees_product`] replaces every outer block `A` by a copy of the inner
//! design whose coordinates are shifted by per-group elements of `H`. Within
//! an outer `sigma`-class, the `sigma` blocks through an outer point are
//! matched bijectively to the elements of `H`, which is what turns each inner
//! partition class into a `gamma`-parallel class of the product.

use std::fmt;

use rayon::prelude::*;

use crate::designs::{ResolvableTD, Resolution, TransversalDesign};
use crate::error::{Error, Result};
use crate::verify::verify_group_partition;

/// Limit on `n^2 * k` element slots a construction may allocate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellBudget(pub u64);

impl Default for CellBudget {
    fn default() -> Self {
        CellBudget(1 << 28)
    }
}

impl CellBudget {
    pub fn check(self, n: u64, k: u64) -> Result<()> {
        let cells = (n as u128) * (n as u128) * (k as u128);
        if cells > self.0 as u128 {
            return Err(Error::SizeBudget {
                cells,
                budget: self.0,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    /// `H` trivial, every block in one class: a `(1, m)` partition.
    Unit,
    /// `H = Z_m`, singleton classes: an `(m, 1)` partition.
    Full,
    /// `H` trivial, classes are the parallel classes: a `(1, 1)` partition.
    FromResolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPartition {
    m: usize,
    sigma: usize,
    gamma: usize,
    class_of: Vec<u32>,
    num_classes: usize,
}

impl GroupPartition {
    /// An arbitrary partition; certify it with [`verify_group_partition`].
    pub fn new(m: usize, sigma: usize, gamma: usize, class_of: Vec<u32>) -> Self {
        let num_classes = class_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        GroupPartition {
            m,
            sigma,
            gamma,
            class_of,
            num_classes,
        }
    }

    pub fn unit(inner: &TransversalDesign) -> Self {
        let m = inner.order();
        GroupPartition {
            m,
            sigma: 1,
            gamma: m,
            class_of: vec![0; inner.num_blocks()],
            num_classes: 1,
        }
    }

    pub fn full(inner: &TransversalDesign) -> Self {
        let m = inner.order();
        GroupPartition {
            m,
            sigma: m,
            gamma: 1,
            class_of: (0..inner.num_blocks() as u32).collect(),
            num_classes: inner.num_blocks(),
        }
    }

    pub fn from_resolution(inner: &ResolvableTD) -> Result<Self> {
        let res = inner.resolution();
        let m = inner.td().order();
        if res.num_classes() != m || !res.is_all_ones() {
            return Err(Error::NotResolvable);
        }
        Ok(GroupPartition {
            m,
            sigma: 1,
            gamma: 1,
            class_of: res.class_of().to_vec(),
            num_classes: m,
        })
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self) -> &[u32] {
        &self.class_of
    }

    /// Elements of `H` in ascending order.
    pub fn subgroup(&self) -> impl Iterator<Item = u32> {
        let step = (self.m / self.sigma.max(1)) as u32;
        (0..self.sigma as u32).map(move |j| j * step)
    }
}

/// `res` is required for [`PartitionKind::FromResolution`] and ignored
/// otherwise.
pub fn make_group_partition(
    inner: &TransversalDesign,
    res: Option<&Resolution>,
    kind: PartitionKind,
) -> Result<GroupPartition> {
    match kind {
        PartitionKind::Unit => Ok(GroupPartition::unit(inner)),
        PartitionKind::Full => Ok(GroupPartition::full(inner)),
        PartitionKind::FromResolution => {
            let res = res.ok_or(Error::NotResolvable)?;
            let rtd = ResolvableTD::new(inner.clone(), res.clone())?;
            GroupPartition::from_resolution(&rtd)
        }
    }
}

/// Run-length form of a profile, ascending by multiplicity, printed in the
/// exponential notation `[1^59, 9^5]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpProfile(pub Vec<(usize, usize)>);

impl ExpProfile {
    pub fn of(profile: &[usize]) -> Self {
        let mut sorted = profile.to_vec();
        sorted.sort_unstable();
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for s in sorted {
            match runs.last_mut() {
                Some((v, c)) if *v == s => *c += 1,
                _ => runs.push((s, 1)),
            }
        }
        ExpProfile(runs)
    }

    /// Builds from `(multiplicity, count)` runs, dropping empty runs.
    pub fn from_runs(runs: &[(usize, usize)]) -> Self {
        let flat: Vec<usize> = runs
            .iter()
            .flat_map(|&(s, c)| std::iter::repeat_n(s, c))
            .collect();
        Self::of(&flat)
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|(s, c)| s * c).sum()
    }
}

impl fmt::Display for ExpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (s, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if *c == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{c}")?;
            }
        }
        f.write_str("]")
    }
}

/// Merges classes: new class `j` is the union of the old classes listed in
/// `grouping[j]`, with multiplicity the sum of theirs.
pub fn amalgamate(rtd: &ResolvableTD, grouping: &[Vec<usize>]) -> Result<ResolvableTD> {
    let res = rtd.resolution();
    let t = res.num_classes();
    let mut target = vec![u32::MAX; t];
    let mut profile = Vec::with_capacity(grouping.len());
    for (j, group) in grouping.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::BadGrouping(format!("group {j} is empty")));
        }
        let mut sigma = 0;
        for &c in group {
            if c >= t {
                return Err(Error::BadGrouping(format!("class {c} does not exist")));
            }
            if target[c] != u32::MAX {
                return Err(Error::BadGrouping(format!("class {c} listed twice")));
            }
            target[c] = j as u32;
            sigma += res.profile()[c];
        }
        profile.push(sigma);
    }
    if let Some(c) = target.iter().position(|&x| x == u32::MAX) {
        return Err(Error::BadGrouping(format!("class {c} not listed")));
    }
    let class_of = res.class_of().iter().map(|&c| target[c as usize]).collect();
    ResolvableTD::new(rtd.td().clone(), Resolution::new(profile, class_of)?)
}

pub fn rees_product(
    outer: &ResolvableTD,
    inner: &TransversalDesign,
    parts: &[&GroupPartition],
) -> Result<ResolvableTD> {
    rees_product_with(outer, inner, parts, |_| {})
}

/// [`rees_product`] with a hook that may reorder the outer blocks through a
/// point before they are matched, in order, to the ascending elements of `H`.
/// The identity hook gives the canonical ascending-block-index matching.
pub fn rees_product_with<F>(
    outer: &ResolvableTD,
    inner: &TransversalDesign,
    parts: &[&GroupPartition],
    mut tie_break: F,
) -> Result<ResolvableTD>
where
    F: FnMut(&mut [u32]),
{
    let otd = outer.td();
    let res = outer.resolution();
    let k = otd.groups();
    if inner.groups() != k {
        return Err(Error::IngredientMismatch(format!(
            "outer design has {k} groups, inner has {}",
            inner.groups()
        )));
    }
    let (n, m) = (otd.order(), inner.order());
    let t = res.num_classes();
    if parts.len() != t {
        return Err(Error::ProfileMismatch(format!(
            "{} group partitions for {t} outer classes",
            parts.len()
        )));
    }
    let mut checked: Vec<*const GroupPartition> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        if part.sigma() != res.profile()[i] {
            return Err(Error::ProfileMismatch(format!(
                "class {i} has multiplicity {}, partition has sigma {}",
                res.profile()[i],
                part.sigma()
            )));
        }
        let ptr = *part as *const GroupPartition;
        if !checked.contains(&ptr) {
            let report = verify_group_partition(inner, part);
            if !report.ok() {
                return Err(Error::BadPartition(report.summary()));
            }
            checked.push(ptr);
        }
    }

    let mut members: Vec<Vec<u32>> = vec![Vec::new(); t];
    for (b, &c) in res.class_of().iter().enumerate() {
        members[c as usize].push(b as u32);
    }

    // shift[a*k + g]: element of H attached to outer block a in group g
    let mut shift = vec![0u32; n * n * k];
    let mut through: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, blocks) in members.iter().enumerate() {
        let sigma = res.profile()[i];
        let step = (m / sigma) as u32;
        for g in 0..k {
            through.iter_mut().for_each(Vec::clear);
            for &a in blocks {
                through[otd.block(a as usize)[g] as usize].push(a);
            }
            for (x, list) in through.iter_mut().enumerate() {
                if list.len() != sigma {
                    return Err(Error::InvalidResolution(format!(
                        "class {i} meets point (group {g}, element {x}) {} times, expected {sigma}",
                        list.len()
                    )));
                }
                tie_break(list);
                for (j, &a) in list.iter().enumerate() {
                    shift[a as usize * k + g] = j as u32 * step;
                }
            }
        }
    }

    let mut offsets = Vec::with_capacity(t);
    let mut profile = Vec::new();
    for part in parts {
        offsets.push(profile.len() as u32);
        profile.extend(std::iter::repeat_n(part.gamma(), part.num_classes()));
    }

    let order: Vec<u32> = members.concat();
    let m2 = m * m;
    let mu = m as u32;
    let mut blocks = vec![0u32; n * n * m2 * k];
    let mut class_of = vec![0u32; n * n * m2];
    blocks
        .par_chunks_mut(m2 * k)
        .zip(class_of.par_chunks_mut(m2))
        .zip(order.par_iter())
        .for_each(|((out, labels), &a)| {
            let a = a as usize;
            let ablock = otd.block(a);
            let sh = &shift[a * k..(a + 1) * k];
            let cls = res.class_of()[a] as usize;
            let part = parts[cls];
            let off = offsets[cls];
            for (bi, (dst, label)) in out.chunks_exact_mut(k).zip(labels.iter_mut()).enumerate() {
                let b = inner.block(bi);
                for g in 0..k {
                    dst[g] = ablock[g] * mu + (b[g] + sh[g]) % mu;
                }
                *label = off + part.class_of()[bi];
            }
        });

    ResolvableTD::new(
        TransversalDesign::from_raw(k, n * m, blocks),
        Resolution::new(profile, class_of)?,
    )
}

/// Turns a `[1^x, a^r]` resolution into `[1^(x - r(b-a)), b^r]` by merging
/// each `a`-class with `b - a` one-classes taken from the end of the list of
/// one-classes, in consecutive chunks. The new class order is the surviving
/// one-classes followed by the merged classes.
pub fn reorganize_classes(rtd: &ResolvableTD, b: usize) -> Result<ResolvableTD> {
    let profile = rtd.resolution().profile();
    let ones: Vec<usize> = (0..profile.len()).filter(|&i| profile[i] == 1).collect();
    let big: Vec<usize> = (0..profile.len()).filter(|&i| profile[i] != 1).collect();
    let a = match big.first() {
        None => return Ok(rtd.clone()),
        Some(&i) => profile[i],
    };
    if big.iter().any(|&i| profile[i] != a) {
        return Err(Error::ProfileMismatch(format!(
            "expected profile [1^x, a^r], got {}",
            ExpProfile::of(profile)
        )));
    }
    if b < a {
        return Err(Error::ProfileMismatch(format!("target {b} below class size {a}")));
    }
    let fill = b - a;
    let need = big.len() * fill;
    if ones.len() < need {
        return Err(Error::ProfileMismatch(format!(
            "{} one-classes cannot fill {} classes up to {b}",
            ones.len(),
            big.len()
        )));
    }
    let keep = ones.len() - need;
    let tail = &ones[keep..];
    let mut grouping: Vec<Vec<usize>> = ones[..keep].iter().map(|&c| vec![c]).collect();
    for (j, &c) in big.iter().enumerate() {
        let mut group = vec![c];
        group.extend_from_slice(&tail[j * fill..(j + 1) * fill]);
        grouping.push(group);
    }
    amalgamate(rtd, &grouping)
}

/// Bookkeeping for one run of the three-factor product: `c = a*q + r`, and the
/// class profiles of the three intermediate designs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleProductPlan {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub k: usize,
    pub q: usize,
    pub r: usize,
    /// `[1^r, a^q]` on the TD(k, c).
    pub sigma: ExpProfile,
    /// `[1^(q a^2), a^r]` after the first product.
    pub gamma: ExpProfile,
    /// `[1^(ac - rb), b^r]` after reorganizing.
    pub gamma_prime: ExpProfile,
}

impl TripleProductPlan {
    pub fn new(a: usize, b: usize, c: usize, k: usize) -> Result<Self> {
        if !(2 <= a && a <= b && b <= c) {
            return Err(Error::Order {
                a: a as u64,
                b: b as u64,
                c: c as u64,
            });
        }
        let (q, r) = (c / a, c % a);
        let plan = TripleProductPlan {
            a,
            b,
            c,
            k,
            q,
            r,
            sigma: ExpProfile::from_runs(&[(1, r), (a, q)]),
            gamma: ExpProfile::from_runs(&[(1, q * a * a), (a, r)]),
            gamma_prime: ExpProfile::from_runs(&[(1, a * c - r * b), (b, r)]),
        };
        debug_assert!(a * c > r * b);
        debug_assert_eq!(q * a * a + a * r, a * c);
        debug_assert_eq!(plan.sigma.total(), c);
        debug_assert_eq!(plan.gamma.total(), a * c);
        debug_assert_eq!(plan.gamma_prime.total(), a * c);
        Ok(plan)
    }
}

/// Every design the pipeline passes through.
#[derive(Clone, Debug)]
pub struct TripleProductStages {
    pub plan: TripleProductPlan,
    /// The TD(k, c) with its parallel classes amalgamated to `[1^r, a^q]`.
    pub sigma: ResolvableTD,
    /// TD(k, ac) after the product with TD(k, a).
    pub gamma: ResolvableTD,
    /// The same TD(k, ac) with classes reorganized to `[1^(ac - rb), b^r]`.
    pub gamma_prime: ResolvableTD,
    /// RTD(k, abc).
    pub result: ResolvableTD,
}

pub fn triple_product(
    td_a: &TransversalDesign,
    rtd_b: &ResolvableTD,
    rtd_c: &ResolvableTD,
    budget: CellBudget,
) -> Result<ResolvableTD> {
    triple_product_stages(td_a, rtd_b, rtd_c, budget).map(|s| s.result)
}

/// Builds an RTD(k, abc) from a TD(k, a), an RTD(k, b) and an RTD(k, c).
pub fn triple_product_stages(
    td_a: &TransversalDesign,
    rtd_b: &ResolvableTD,
    rtd_c: &ResolvableTD,
    budget: CellBudget,
) -> Result<TripleProductStages> {
    triple_product_stages_with(td_a, rtd_b, rtd_c, budget, |_| {})
}

/// [`triple_product_stages`] with the tie-break hook of
/// [`rees_product_with`] applied in both products.
pub fn triple_product_stages_with<F>(
    td_a: &TransversalDesign,
    rtd_b: &ResolvableTD,
    rtd_c: &ResolvableTD,
    budget: CellBudget,
    mut tie_break: F,
) -> Result<TripleProductStages>
where
    F: FnMut(&mut [u32]),
{
    let k = td_a.groups();
    if rtd_b.td().groups() != k || rtd_c.td().groups() != k {
        return Err(Error::IngredientMismatch(format!(
            "group counts {k}, {}, {}",
            rtd_b.td().groups(),
            rtd_c.td().groups()
        )));
    }
    let (a, b, c) = (td_a.order(), rtd_b.td().order(), rtd_c.td().order());
    let plan = TripleProductPlan::new(a, b, c, k)?;
    for rtd in [rtd_b, rtd_c] {
        let res = rtd.resolution();
        if res.num_classes() != rtd.td().order() || !res.is_all_ones() {
            return Err(Error::NotResolvable);
        }
    }
    budget.check((a * b * c) as u64, k as u64 + 1)?;

    let (q, r) = (plan.q, plan.r);
    let mut grouping: Vec<Vec<usize>> = (0..r).map(|i| vec![i]).collect();
    grouping.extend((0..q).map(|j| (r + j * a..r + (j + 1) * a).collect()));
    let sigma = amalgamate(rtd_c, &grouping)?;

    let unit = GroupPartition::unit(td_a);
    let full_a = GroupPartition::full(td_a);
    let parts: Vec<&GroupPartition> = sigma
        .resolution()
        .profile()
        .iter()
        .map(|&s| if s == 1 { &unit } else { &full_a })
        .collect();
    let gamma = rees_product_with(&sigma, td_a, &parts, &mut tie_break)?;

    let gamma_prime = reorganize_classes(&gamma, b)?;

    let resolved = GroupPartition::from_resolution(rtd_b)?;
    let full_b = GroupPartition::full(rtd_b.td());
    let parts: Vec<&GroupPartition> = gamma_prime
        .resolution()
        .profile()
        .iter()
        .map(|&s| if s == 1 { &resolved } else { &full_b })
        .collect();
    let result = rees_product_with(&gamma_prime, rtd_b.td(), &parts, &mut tie_break)?;

    Ok(TripleProductStages {
        plan,
        sigma,
        gamma,
        gamma_prime,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{mols_from_field, rtd_from_td, td_from_mols};
    use crate::ff::FieldSpec;
    use crate::verify::{verify_resolution, verify_td};

    fn field_td(q: u64, k: usize) -> TransversalDesign {
        td_from_mols(&mols_from_field(&FieldSpec::new(q).unwrap()), k).unwrap()
    }

    fn field_rtd(q: u64, k: usize) -> ResolvableTD {
        rtd_from_td(&field_td(q, k + 1)).unwrap()
    }

    #[test]
    fn trivial_partitions() {
        let td = field_td(4, 4);
        let unit = make_group_partition(&td, None, PartitionKind::Unit).unwrap();
        assert_eq!((unit.sigma(), unit.gamma(), unit.num_classes()), (1, 4, 1));
        assert!(verify_group_partition(&td, &unit).ok());
        let full = make_group_partition(&td, None, PartitionKind::Full).unwrap();
        assert_eq!((full.sigma(), full.gamma(), full.num_classes()), (4, 1, 16));
        assert!(verify_group_partition(&td, &full).ok());
        assert_eq!(full.subgroup().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn partition_from_resolution() {
        let rtd = field_rtd(3, 3);
        let gp = make_group_partition(rtd.td(), Some(rtd.resolution()), PartitionKind::FromResolution)
            .unwrap();
        assert_eq!((gp.sigma(), gp.gamma(), gp.num_classes()), (1, 1, 3));
        assert!(verify_group_partition(rtd.td(), &gp).ok());

        let merged = amalgamate(&rtd, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(GroupPartition::from_resolution(&merged), Err(Error::NotResolvable));
        assert_eq!(
            make_group_partition(rtd.td(), None, PartitionKind::FromResolution),
            Err(Error::NotResolvable)
        );
    }

    #[test]
    fn nontrivial_subgroup_partition_checked() {
        // pairs of consecutive blocks under H = {0, 2} double-cover points
        let blocks: Vec<u32> = (0..4u32)
            .flat_map(|r| (0..4u32).flat_map(move |c| [r, c, (r + c) % 4]))
            .collect();
        let td = TransversalDesign::new(3, 4, blocks).unwrap();
        let gp = GroupPartition::new(4, 2, 1, (0..16).map(|b| b / 2).collect());
        assert!(!verify_group_partition(&td, &gp).ok());
        let gp = GroupPartition::new(4, 3, 1, (0..16).collect());
        assert!(!verify_group_partition(&td, &gp).ok());
    }

    #[test]
    fn amalgamate_cases() {
        let rtd = field_rtd(5, 3);
        let same = amalgamate(&rtd, &(0..5).map(|i| vec![i]).collect::<Vec<_>>()).unwrap();
        assert_eq!(same, rtd);
        let all = amalgamate(&rtd, &[(0..5).collect()]).unwrap();
        assert_eq!(all.resolution().profile(), &[5]);
        assert!(verify_resolution(&all).ok());
        assert_eq!(all.td(), rtd.td());

        assert!(matches!(amalgamate(&rtd, &[vec![0, 1], vec![1, 2, 3, 4]]), Err(Error::BadGrouping(_))));
        assert!(matches!(amalgamate(&rtd, &[vec![0, 1], vec![2, 3]]), Err(Error::BadGrouping(_))));
        assert!(matches!(amalgamate(&rtd, &[vec![0, 1, 2, 3, 4, 5]]), Err(Error::BadGrouping(_))));
    }

    #[test]
    fn amalgamate_rtd_9_13() {
        let rtd = field_rtd(13, 9);
        let mut grouping: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        grouping.push((5..13).collect());
        let s = amalgamate(&rtd, &grouping).unwrap();
        assert_eq!(ExpProfile::of(s.resolution().profile()).to_string(), "[1^5, 8]");
        assert!(verify_resolution(&s).ok());
    }

    #[test]
    fn rees_of_two_resolvable_designs() {
        for (q, k) in [(2, 2), (3, 3)] {
            let rtd = field_rtd(q, k);
            let gp = GroupPartition::from_resolution(&rtd).unwrap();
            let parts = vec![&gp; q as usize];
            let out = rees_product(&rtd, rtd.td(), &parts).unwrap();
            let n = (q * q) as usize;
            assert_eq!(out.td().order(), n);
            assert_eq!(out.resolution().profile(), vec![1; n].as_slice());
            assert!(verify_td(out.td()).ok());
            assert!(verify_resolution(&out).ok());
        }
    }

    #[test]
    fn rees_errors() {
        let outer = field_rtd(3, 3);
        let inner = field_td(4, 4);
        let gp = GroupPartition::unit(&inner);
        assert!(matches!(
            rees_product(&outer, &inner, &[&gp; 3]),
            Err(Error::IngredientMismatch(_))
        ));
        let inner = field_td(4, 3);
        let full = GroupPartition::full(&inner);
        assert!(matches!(
            rees_product(&outer, &inner, &[&full; 3]),
            Err(Error::ProfileMismatch(_))
        ));
        assert!(matches!(
            rees_product(&outer, &inner, &[&full; 2]),
            Err(Error::ProfileMismatch(_))
        ));
        let bogus = GroupPartition::new(4, 1, 1, vec![0; 16]);
        assert!(matches!(
            rees_product(&outer, &inner, &[&bogus; 3]),
            Err(Error::BadPartition(_))
        ));
    }

    #[test]
    fn reorganize_profiles() {
        // [1^4, 2] on an RTD(2,?) stand-in: amalgamate RTD(3,7) as [1^5, 2]
        let rtd = field_rtd(7, 3);
        let mut grouping: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
        grouping.push(vec![5, 6]);
        let x = amalgamate(&rtd, &grouping).unwrap();
        let y = reorganize_classes(&x, 4).unwrap();
        assert_eq!(ExpProfile::of(y.resolution().profile()).to_string(), "[1^3, 4]");
        // fillers are the highest one-classes
        assert_eq!(y.resolution().class_of(), amalgamate(&x, &[vec![0], vec![1], vec![2], vec![5, 3, 4]]).unwrap().resolution().class_of());
        assert!(verify_resolution(&y).ok());
        assert_eq!(reorganize_classes(&x, 2).unwrap().resolution().profile(), x.resolution().profile());
        assert!(matches!(reorganize_classes(&x, 1), Err(Error::ProfileMismatch(_))));
        assert!(matches!(reorganize_classes(&x, 9), Err(Error::ProfileMismatch(_))));
    }

    #[test]
    fn plan_arithmetic() {
        let p = TripleProductPlan::new(8, 9, 13, 9).unwrap();
        assert_eq!((p.q, p.r), (1, 5));
        assert_eq!(p.sigma.to_string(), "[1^5, 8]");
        assert_eq!(p.gamma.to_string(), "[1^64, 8^5]");
        assert_eq!(p.gamma_prime.to_string(), "[1^59, 9^5]");
        let p = TripleProductPlan::new(2, 3, 4, 3).unwrap();
        assert_eq!((p.q, p.r), (2, 0));
        assert_eq!(p.gamma_prime.to_string(), "[1^8]");
        assert!(matches!(TripleProductPlan::new(3, 2, 5, 3), Err(Error::Order { .. })));
        assert!(matches!(TripleProductPlan::new(1, 2, 5, 3), Err(Error::Order { .. })));
    }

    #[test]
    fn triple_2_3_5() {
        let s = triple_product_stages(&field_td(2, 3), &field_rtd(3, 3), &field_rtd(5, 3), CellBudget::default())
            .unwrap();
        assert_eq!(s.result.td().order(), 30);
        assert!(s.result.resolution().is_all_ones());
        assert_eq!(s.result.resolution().num_classes(), 30);
        assert!(verify_td(s.result.td()).ok());
        assert!(verify_resolution(&s.result).ok());
        for stage in [&s.sigma, &s.gamma, &s.gamma_prime] {
            assert!(verify_resolution(stage).ok());
        }
    }

    #[test]
    fn triple_errors() {
        let budget = CellBudget::default();
        assert!(matches!(
            triple_product(&field_td(4, 3), &field_rtd(3, 3), &field_rtd(5, 3), budget),
            Err(Error::Order { .. })
        ));
        assert!(matches!(
            triple_product(&field_td(2, 3), &field_rtd(3, 2), &field_rtd(5, 3), budget),
            Err(Error::IngredientMismatch(_))
        ));
        assert!(matches!(
            triple_product(&field_td(2, 3), &field_rtd(3, 3), &field_rtd(5, 3), CellBudget(1000)),
            Err(Error::SizeBudget { .. })
        ));
        let c = amalgamate(&field_rtd(5, 3), &[vec![0, 1], vec![2], vec![3], vec![4]]).unwrap();
        assert_eq!(
            triple_product(&field_td(2, 3), &field_rtd(3, 3), &c, budget).unwrap_err(),
            Error::NotResolvable
        );
    }
}
