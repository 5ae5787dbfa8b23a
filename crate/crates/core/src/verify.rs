//! Exact, counting-based certification.
//!
//! Nothing here calls into a constructor. Every check builds coverage
//! counters from the raw data and compares them against the axioms. Failures
//! are aggregated per unit (row, square pair, group pair, class) and carry the
//! first offending witness of that unit.

use std::fmt;

use rayon::prelude::*;

use crate::designs::{LatinSquare, MolsFamily, ResolvableTD, TransversalDesign};
use crate::product::GroupPartition;

/// Upper bound on counter bytes alive at once during a pair-coverage pass.
const COUNTER_MEMORY: usize = 1 << 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    RowRepeat {
        square: usize,
        row: usize,
        symbol: u32,
        count: usize,
    },
    ColumnRepeat {
        square: usize,
        column: usize,
        symbol: u32,
        count: usize,
    },
    SquareOrder {
        square: usize,
        order: usize,
        expected: usize,
    },
    SymbolRange {
        square: usize,
        cell: usize,
        symbol: u32,
    },
    /// Superposing squares `first` and `second` hits `symbols` `count` times.
    PairRepeat {
        first: usize,
        second: usize,
        symbols: (u32, u32),
        count: usize,
        bad_pairs: usize,
    },
    BlockCount {
        expected: usize,
        found: usize,
    },
    EntryRange {
        block: usize,
        group: usize,
        element: u32,
    },
    /// Point pair `(g, e), (h, f)` lies in `count` blocks; `bad_pairs`
    /// element pairs of this group pair are wrong in total.
    PairCoverage {
        groups: (usize, usize),
        elements: (u32, u32),
        count: usize,
        bad_pairs: usize,
    },
    LabelCount {
        expected: usize,
        found: usize,
    },
    ClassIndex {
        block: usize,
        class: u32,
    },
    ProfileSum {
        sum: usize,
        expected: usize,
    },
    ZeroMultiplicity {
        class: usize,
    },
    EmptyClass {
        class: usize,
    },
    PointCoverage {
        class: usize,
        group: usize,
        element: u32,
        count: usize,
        expected: usize,
        bad_points: usize,
    },
    GroupOrder {
        partition: usize,
        design: usize,
    },
    SubgroupOrder {
        sigma: usize,
        m: usize,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Witness::*;
        match self {
            RowRepeat { square, row, symbol, count } => {
                write!(f, "square {square} row {row} repeats symbol {symbol} ({count} times)")
            }
            ColumnRepeat { square, column, symbol, count } => write!(
                f,
                "square {square} column {column} repeats symbol {symbol} ({count} times)"
            ),
            SquareOrder { square, order, expected } => {
                write!(f, "square {square} has order {order}, expected {expected}")
            }
            SymbolRange { square, cell, symbol } => {
                write!(f, "square {square} cell {cell} holds out-of-range symbol {symbol}")
            }
            PairRepeat { first, second, symbols, count, bad_pairs } => write!(
                f,
                "squares {first} and {second} superpose ({}, {}) {count} times ({bad_pairs} repeated pairs)",
                symbols.0, symbols.1
            ),
            BlockCount { expected, found } => write!(f, "expected {expected} blocks, found {found}"),
            EntryRange { block, group, element } => {
                write!(f, "block {block} has out-of-range element {element} in group {group}")
            }
            PairCoverage { groups, elements, count, bad_pairs } => write!(
                f,
                "pair covered {count} times: group {} element {} / group {} element {} ({bad_pairs} bad pairs in this group pair)",
                groups.0, elements.0, groups.1, elements.1
            ),
            LabelCount { expected, found } => {
                write!(f, "expected {expected} class labels, found {found}")
            }
            ClassIndex { block, class } => write!(f, "block {block} has invalid class {class}"),
            ProfileSum { sum, expected } => write!(f, "profile sums to {sum}, expected {expected}"),
            ZeroMultiplicity { class } => write!(f, "class {class} has multiplicity 0"),
            EmptyClass { class } => write!(f, "class {class} is empty"),
            PointCoverage { class, group, element, count, expected, bad_points } => write!(
                f,
                "class {class} covers point (group {group}, element {element}) {count} times, expected {expected} ({bad_points} bad points in this class)"
            ),
            GroupOrder { partition, design } => {
                write!(f, "partition is for order {partition}, design has order {design}")
            }
            SubgroupOrder { sigma, m } => write!(f, "subgroup order {sigma} does not divide {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: &'static str,
    pub witness: Witness,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.witness)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<Failure>,
    /// Number of elementary coverage comparisons performed.
    pub checks: u64,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.failures.extend(other.failures);
        self.checks += other.checks;
    }

    /// One line: `ok` or the first failure plus a count.
    pub fn summary(&self) -> String {
        match self.failures.as_slice() {
            [] => "ok".into(),
            [only] => only.to_string(),
            [first, rest @ ..] => format!("{first} (and {} more failures)", rest.len()),
        }
    }

    fn fail(&mut self, check: &'static str, witness: Witness) {
        self.failures.push(Failure { check, witness });
    }
}

fn latin_failures(idx: usize, sq: &LatinSquare) -> (Vec<Failure>, u64) {
    let n = sq.order();
    let mut out = Vec::new();
    let cells = sq.cells();
    if let Some(cell) = cells.iter().position(|&s| s as usize >= n) {
        out.push(Failure {
            check: "latin",
            witness: Witness::SymbolRange {
                square: idx,
                cell,
                symbol: cells[cell],
            },
        });
        return (out, 0);
    }
    let mut seen = vec![0usize; n];
    for row in 0..n {
        seen.fill(0);
        for c in 0..n {
            seen[cells[row * n + c] as usize] += 1;
        }
        if let Some(symbol) = seen.iter().position(|&x| x > 1) {
            out.push(Failure {
                check: "latin",
                witness: Witness::RowRepeat {
                    square: idx,
                    row,
                    symbol: symbol as u32,
                    count: seen[symbol],
                },
            });
        }
    }
    for column in 0..n {
        seen.fill(0);
        for r in 0..n {
            seen[cells[r * n + column] as usize] += 1;
        }
        if let Some(symbol) = seen.iter().position(|&x| x > 1) {
            out.push(Failure {
                check: "latin",
                witness: Witness::ColumnRepeat {
                    square: idx,
                    column,
                    symbol: symbol as u32,
                    count: seen[symbol],
                },
            });
        }
    }
    (out, 2 * (n * n) as u64)
}

pub fn verify_latin(sq: &LatinSquare) -> VerifyReport {
    let (failures, checks) = latin_failures(0, sq);
    VerifyReport { failures, checks }
}

/// Every square latin, and every pair superposing onto all `n^2` ordered
/// symbol pairs exactly once.
pub fn verify_mols(family: &MolsFamily) -> VerifyReport {
    let squares = family.squares();
    let mut report = VerifyReport::default();
    let Some(first) = squares.first() else {
        return report;
    };
    let n = first.order();
    for (i, sq) in squares.iter().enumerate() {
        if sq.order() != n {
            report.fail(
                "mols",
                Witness::SquareOrder {
                    square: i,
                    order: sq.order(),
                    expected: n,
                },
            );
        }
    }
    if !report.ok() {
        return report;
    }
    let latin: Vec<_> = squares
        .par_iter()
        .enumerate()
        .map(|(i, sq)| latin_failures(i, sq))
        .collect();
    for (failures, checks) in latin {
        report.failures.extend(failures);
        report.checks += checks;
    }
    if !report.ok() {
        // superposition counts are meaningless with out-of-range symbols
        return report;
    }

    let pairs: Vec<(usize, usize)> = (0..squares.len())
        .flat_map(|i| (i + 1..squares.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Option<Failure>> = pairs
        .par_iter()
        .map_init(
            || vec![0u32; n * n],
            |seen, &(i, j)| {
                seen.fill(0);
                for (&s, &t) in squares[i].cells().iter().zip(squares[j].cells()) {
                    seen[s as usize * n + t as usize] += 1;
                }
                let bad_pairs = seen.iter().filter(|&&c| c > 1).count();
                seen.iter().position(|&c| c > 1).map(|idx| Failure {
                    check: "mols",
                    witness: Witness::PairRepeat {
                        first: i,
                        second: j,
                        symbols: ((idx / n) as u32, (idx % n) as u32),
                        count: seen[idx] as usize,
                        bad_pairs,
                    },
                })
            },
        )
        .collect();
    report.failures.extend(results.into_iter().flatten());
    report.checks += (pairs.len() * n * n) as u64;
    report
}

/// Block count, element range, and exactly-once coverage of every cross-group
/// point pair. Group pairs are processed in parallel batches sized so that the
/// live `n^2` counter planes stay under a fixed memory ceiling.
pub fn verify_td(td: &TransversalDesign) -> VerifyReport {
    let (k, n) = (td.groups(), td.order());
    let raw = td.raw_blocks();
    let mut report = VerifyReport::default();
    let found = raw.len() / k.max(1);
    if raw.len() != n * n * k {
        report.fail(
            "td",
            Witness::BlockCount {
                expected: n * n,
                found,
            },
        );
        return report;
    }
    if let Some(pos) = raw.iter().position(|&x| x as usize >= n) {
        report.fail(
            "td",
            Witness::EntryRange {
                block: pos / k,
                group: pos % k,
                element: raw[pos],
            },
        );
        return report;
    }

    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|g| (g + 1..k).map(move |h| (g, h)))
        .collect();
    let batch = (COUNTER_MEMORY / (n * n).max(1)).max(1);
    for chunk in pairs.chunks(batch) {
        let results: Vec<Option<Failure>> = chunk
            .par_iter()
            .map_init(
                || vec![0u8; n * n],
                |plane, &(g, h)| {
                    plane.fill(0);
                    for b in raw.chunks_exact(k) {
                        let idx = b[g] as usize * n + b[h] as usize;
                        plane[idx] = plane[idx].saturating_add(1);
                    }
                    let bad_pairs = plane.iter().filter(|&&c| c != 1).count();
                    // with exactly n^2 blocks an overcovered pair always exists
                    // when any pair is missed
                    let idx = plane
                        .iter()
                        .position(|&c| c > 1)
                        .or_else(|| plane.iter().position(|&c| c != 1))?;
                    Some(Failure {
                        check: "td",
                        witness: Witness::PairCoverage {
                            groups: (g, h),
                            elements: ((idx / n) as u32, (idx % n) as u32),
                            count: plane[idx] as usize,
                            bad_pairs,
                        },
                    })
                },
            )
            .collect();
        report.failures.extend(results.into_iter().flatten());
    }
    report.checks = (pairs.len() * n * n) as u64;
    report
}

/// Block indices grouped by label. Labels must already be range-checked.
fn bucket_by_class(labels: &[u32], classes: usize) -> Vec<Vec<u32>> {
    let mut members = vec![Vec::new(); classes];
    for (b, &c) in labels.iter().enumerate() {
        members[c as usize].push(b as u32);
    }
    members
}

/// Class `i` must cover each point exactly `expected(i)` times, where the
/// coverage of a block set is produced by `emit` (which may translate blocks).
fn class_coverage<E>(
    check: &'static str,
    k: usize,
    n: usize,
    members: &[Vec<u32>],
    expected: &(dyn Fn(usize) -> usize + Sync),
    emit: E,
) -> Vec<Failure>
where
    E: Fn(u32, &mut dyn FnMut(usize, u32)) + Sync,
{
    let results: Vec<Option<Failure>> = members
        .par_iter()
        .enumerate()
        .map_init(
            || vec![0usize; k * n],
            |count, (class, blocks)| {
                count.fill(0);
                for &b in blocks {
                    emit(b, &mut |g, e| count[g * n + e as usize] += 1);
                }
                let want = expected(class);
                let bad_points = count.iter().filter(|&&c| c != want).count();
                let idx = count.iter().position(|&c| c != want)?;
                Some(Failure {
                    check,
                    witness: Witness::PointCoverage {
                        class,
                        group: idx / n,
                        element: (idx % n) as u32,
                        count: count[idx],
                        expected: want,
                        bad_points,
                    },
                })
            },
        )
        .collect();
    results.into_iter().flatten().collect()
}

/// Labels total and in range, profile positive and summing to `n`, and class
/// `i` covering every one of the `k*n` points exactly `profile[i]` times.
pub fn verify_resolution(rtd: &ResolvableTD) -> VerifyReport {
    let td = rtd.td();
    let res = rtd.resolution();
    let (k, n) = (td.groups(), td.order());
    let profile = res.profile();
    let labels = res.class_of();
    let mut report = VerifyReport::default();

    if labels.len() != td.num_blocks() {
        report.fail(
            "res",
            Witness::LabelCount {
                expected: td.num_blocks(),
                found: labels.len(),
            },
        );
    }
    if let Some(block) = labels.iter().position(|&c| c as usize >= profile.len()) {
        report.fail(
            "res",
            Witness::ClassIndex {
                block,
                class: labels[block],
            },
        );
    }
    if let Some(class) = profile.iter().position(|&s| s == 0) {
        report.fail("res", Witness::ZeroMultiplicity { class });
    }
    let sum: usize = profile.iter().sum();
    if sum != n {
        report.fail("res", Witness::ProfileSum { sum, expected: n });
    }
    if !report.ok() {
        return report;
    }
    if let Some(pos) = td.raw_blocks().iter().position(|&x| x as usize >= n) {
        report.fail(
            "res",
            Witness::EntryRange {
                block: pos / k,
                group: pos % k,
                element: td.raw_blocks()[pos],
            },
        );
        return report;
    }

    let members = bucket_by_class(labels, profile.len());
    report.failures = class_coverage(
        "res",
        k,
        n,
        &members,
        &|class| profile[class],
        |b, hit| {
            for (g, &e) in td.block(b as usize).iter().enumerate() {
                hit(g, e);
            }
        },
    );
    report.checks = (profile.len() * k * n) as u64;
    report
}

/// `sigma | m`, the classes partition the blocks, and the translates of each
/// class by the order-`sigma` subgroup of Z_m cover every point `gamma` times.
pub fn verify_group_partition(td: &TransversalDesign, gp: &GroupPartition) -> VerifyReport {
    let (k, m) = (td.groups(), td.order());
    let mut report = VerifyReport::default();
    if gp.order() != m {
        report.fail(
            "partition",
            Witness::GroupOrder {
                partition: gp.order(),
                design: m,
            },
        );
        return report;
    }
    let sigma = gp.sigma();
    if sigma == 0 || m % sigma != 0 {
        report.fail("partition", Witness::SubgroupOrder { sigma, m });
        return report;
    }
    let labels = gp.class_of();
    if labels.len() != td.num_blocks() {
        report.fail(
            "partition",
            Witness::LabelCount {
                expected: td.num_blocks(),
                found: labels.len(),
            },
        );
        return report;
    }
    if let Some(block) = labels.iter().position(|&c| c as usize >= gp.num_classes()) {
        report.fail(
            "partition",
            Witness::ClassIndex {
                block,
                class: labels[block],
            },
        );
        return report;
    }
    let members = bucket_by_class(labels, gp.num_classes());
    for (class, blocks) in members.iter().enumerate() {
        if blocks.is_empty() {
            report.fail("partition", Witness::EmptyClass { class });
        }
    }
    if !report.ok() {
        return report;
    }

    let step = (m / sigma) as u32;
    let gamma = gp.gamma();
    report.failures = class_coverage(
        "partition",
        k,
        m,
        &members,
        &|_| gamma,
        |b, hit| {
            for (g, &e) in td.block(b as usize).iter().enumerate() {
                for j in 0..sigma as u32 {
                    hit(g, (e + j * step) % m as u32);
                }
            }
        },
    );
    report.checks = (gp.num_classes() * k * m) as u64;
    report
}
