//! Latin squares, MOLS families, transversal designs and resolutions, with the
//! conversions between them.
//!
//! A point of a design is a pair (group, element) with element codes `0..n`.
//! Blocks are stored flat: block `i` occupies `blocks[i*k..(i+1)*k]` and its
//! `g`-th entry is the element it meets in group `g`.

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::verify;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    /// Row-major cells; only shape and symbol range are checked here, the
    /// latin property is left to [`verify::verify_latin`].
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self> {
        if n == 0 || cells.len() != n * n {
            return Err(Error::Malformed(format!(
                "square of order {n} needs {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&s| s as usize >= n) {
            return Err(Error::Malformed(format!(
                "symbol {bad} out of range for order {n}"
            )));
        }
        Ok(LatinSquare { n, cells })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("square is not n x n".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.cells[row * self.n..(row + 1) * self.n]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }
}

/// An ordered list of squares of one order. Orthogonality is not enforced on
/// construction; see [`verify::verify_mols`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolsFamily {
    n: usize,
    squares: Vec<LatinSquare>,
}

impl MolsFamily {
    pub fn new(squares: Vec<LatinSquare>) -> Result<Self> {
        let n = squares
            .first()
            .ok_or_else(|| Error::Malformed("empty MOLS family".into()))?
            .order();
        if squares.iter().any(|s| s.order() != n) {
            return Err(Error::Malformed("squares of different orders".into()));
        }
        Ok(MolsFamily { n, squares })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn into_squares(self) -> Vec<LatinSquare> {
        self.squares
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalDesign {
    k: usize,
    n: usize,
    blocks: Vec<u32>,
}

impl TransversalDesign {
    /// Checks block count and element range. The pair-coverage axiom is
    /// certified separately by [`verify::verify_td`].
    pub fn new(k: usize, n: usize, blocks: Vec<u32>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::Malformed(format!("degenerate TD({k},{n})")));
        }
        if blocks.len() != n * n * k {
            return Err(Error::Malformed(format!(
                "TD({k},{n}) needs {} blocks, got {} entries",
                n * n,
                blocks.len()
            )));
        }
        if let Some(&bad) = blocks.iter().find(|&&x| x as usize >= n) {
            return Err(Error::Malformed(format!("element {bad} out of range for n={n}")));
        }
        Ok(TransversalDesign { k, n, blocks })
    }

    pub(crate) fn from_raw(k: usize, n: usize, blocks: Vec<u32>) -> Self {
        debug_assert_eq!(blocks.len(), n * n * k);
        TransversalDesign { k, n, blocks }
    }

    /// TD(2,n): all `n^2` cells of the grid.
    pub fn grid(n: usize) -> Self {
        let blocks = (0..n as u32)
            .flat_map(|r| (0..n as u32).flat_map(move |c| [r, c]))
            .collect();
        TransversalDesign { k: 2, n, blocks }
    }

    pub fn groups(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn block(&self, i: usize) -> &[u32] {
        &self.blocks[i * self.k..(i + 1) * self.k]
    }

    pub fn blocks(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.blocks.chunks_exact(self.k)
    }

    pub fn raw_blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn into_raw_blocks(self) -> Vec<u32> {
        self.blocks
    }
}

/// Partition of a design's blocks into classes, class `i` meant to cover
/// every point exactly `profile[i]` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    profile: Vec<usize>,
    class_of: Vec<u32>,
}

impl Resolution {
    pub fn new(profile: Vec<usize>, class_of: Vec<u32>) -> Result<Self> {
        if profile.is_empty() || profile.contains(&0) {
            return Err(Error::InvalidResolution(
                "profile entries must be positive".into(),
            ));
        }
        if let Some(&bad) = class_of.iter().find(|&&c| c as usize >= profile.len()) {
            return Err(Error::InvalidResolution(format!(
                "class index {bad} with only {} classes",
                profile.len()
            )));
        }
        Ok(Resolution { profile, class_of })
    }

    pub fn num_classes(&self) -> usize {
        self.profile.len()
    }

    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    pub fn class_of(&self) -> &[u32] {
        &self.class_of
    }

    pub fn is_all_ones(&self) -> bool {
        self.profile.iter().all(|&s| s == 1)
    }

    pub fn into_parts(self) -> (Vec<usize>, Vec<u32>) {
        (self.profile, self.class_of)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvableTD {
    td: TransversalDesign,
    res: Resolution,
}

impl ResolvableTD {
    /// Pairs a design with a resolution of its blocks. Coverage is certified
    /// by [`verify::verify_resolution`].
    pub fn new(td: TransversalDesign, res: Resolution) -> Result<Self> {
        if res.class_of.len() != td.num_blocks() {
            return Err(Error::InvalidResolution(format!(
                "{} class labels for {} blocks",
                res.class_of.len(),
                td.num_blocks()
            )));
        }
        Ok(ResolvableTD { td, res })
    }

    pub fn td(&self) -> &TransversalDesign {
        &self.td
    }

    pub fn resolution(&self) -> &Resolution {
        &self.res
    }

    pub fn into_parts(self) -> (TransversalDesign, Resolution) {
        (self.td, self.res)
    }
}

/// All `q - 1` squares `L[r][c] = a*r + c` over GF(q), one per nonzero `a`
/// in ascending code order.
pub fn mols_from_field(field: &FieldSpec) -> MolsFamily {
    mols_from_field_n(field, field.order() as usize - 1)
}

/// The first `count` squares of [`mols_from_field`].
pub fn mols_from_field_n(field: &FieldSpec, count: usize) -> MolsFamily {
    let q = field.order();
    assert!(q >= 2 && count >= 1 && count < q as usize);
    let squares = (1..=count as u32)
        .map(|a| {
            let cells = (0..q)
                .flat_map(|r| {
                    let ar = field.mul(a, r);
                    (0..q).map(move |c| field.add(ar, c))
                })
                .collect();
            LatinSquare {
                n: q as usize,
                cells,
            }
        })
        .collect();
    MolsFamily {
        n: q as usize,
        squares,
    }
}

/// Row, column and the first `k - 2` symbol groups; blocks in row-major cell
/// order.
pub fn td_from_mols(family: &MolsFamily, k: usize) -> Result<TransversalDesign> {
    let max = family.len() + 2;
    if !(2..=max).contains(&k) {
        return Err(Error::KRange { k, min: 2, max });
    }
    let n = family.order();
    let used = &family.squares()[..k - 2];
    let mut blocks = Vec::with_capacity(n * n * k);
    for r in 0..n {
        for c in 0..n {
            blocks.push(r as u32);
            blocks.push(c as u32);
            blocks.extend(used.iter().map(|sq| sq.get(r, c)));
        }
    }
    Ok(TransversalDesign { k, n, blocks })
}

pub fn mols_from_td(td: &TransversalDesign) -> Result<MolsFamily> {
    if td.groups() < 3 {
        return Err(Error::KRange {
            k: td.groups(),
            min: 3,
            max: usize::MAX,
        });
    }
    let report = verify::verify_td(td);
    if !report.ok() {
        return Err(Error::InvalidTd(report.summary()));
    }
    let n = td.order();
    let mut cells = vec![vec![0u32; n * n]; td.groups() - 2];
    for b in td.blocks() {
        let cell = b[0] as usize * n + b[1] as usize;
        for (sq, &s) in cells.iter_mut().zip(&b[2..]) {
            sq[cell] = s;
        }
    }
    let squares = cells.into_iter().map(|cells| LatinSquare { n, cells }).collect();
    Ok(MolsFamily { n, squares })
}

/// Drops the last group of a TD(k+1,n); the dropped element becomes the
/// parallel-class index.
pub fn rtd_from_td(td: &TransversalDesign) -> Result<ResolvableTD> {
    let k1 = td.groups();
    if k1 < 3 {
        return Err(Error::KRange {
            k: k1,
            min: 3,
            max: usize::MAX,
        });
    }
    let report = verify::verify_td(td);
    if !report.ok() {
        return Err(Error::InvalidTd(report.summary()));
    }
    let k = k1 - 1;
    let mut blocks = Vec::with_capacity(td.num_blocks() * k);
    let mut class_of = Vec::with_capacity(td.num_blocks());
    for b in td.blocks() {
        blocks.extend_from_slice(&b[..k]);
        class_of.push(b[k]);
    }
    Ok(ResolvableTD {
        td: TransversalDesign {
            k,
            n: td.order(),
            blocks,
        },
        res: Resolution {
            profile: vec![1; td.order()],
            class_of,
        },
    })
}

/// Adds a new last group whose element is the block's parallel class.
pub fn extend_rtd(rtd: &ResolvableTD) -> Result<TransversalDesign> {
    let res = rtd.resolution();
    let n = rtd.td().order();
    if res.num_classes() != n || !res.is_all_ones() {
        return Err(Error::ProfileMismatch(format!(
            "extension needs profile [1^{n}], got {} classes with sum {}",
            res.num_classes(),
            res.profile().iter().sum::<usize>()
        )));
    }
    let k = rtd.td().groups();
    let mut blocks = Vec::with_capacity(n * n * (k + 1));
    for (b, &cls) in rtd.td().blocks().zip(res.class_of()) {
        blocks.extend_from_slice(b);
        blocks.push(cls);
    }
    Ok(TransversalDesign { k: k + 1, n, blocks })
}

/// Square `i` is `A_i (x) B_i`; cell `(r1*n + r2, c1*n + c2)` carries symbol
/// `A_i[r1][c1] * n + B_i[r2][c2]`.
pub fn kronecker_mols(a: &MolsFamily, b: &MolsFamily) -> MolsFamily {
    let (m, n) = (a.order(), b.order());
    let mn = m * n;
    let squares = a
        .squares()
        .iter()
        .zip(b.squares())
        .map(|(sa, sb)| {
            let mut cells = vec![0u32; mn * mn];
            for r1 in 0..m {
                for r2 in 0..n {
                    let row = &mut cells[(r1 * n + r2) * mn..(r1 * n + r2 + 1) * mn];
                    for c1 in 0..m {
                        let hi = sa.get(r1, c1) * n as u32;
                        for c2 in 0..n {
                            row[c1 * n + c2] = hi + sb.get(r2, c2);
                        }
                    }
                }
            }
            LatinSquare { n: mn, cells }
        })
        .collect();
    MolsFamily { n: mn, squares }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_latin, verify_mols, verify_resolution, verify_td};

    fn field_family(q: u64) -> MolsFamily {
        mols_from_field(&FieldSpec::new(q).unwrap())
    }

    #[test]
    fn field_squares_small() {
        let f2 = field_family(2);
        assert_eq!(f2.len(), 1);
        assert_eq!(f2.squares()[0].cells(), &[0, 1, 1, 0]);

        let f3 = field_family(3);
        assert_eq!(f3.squares()[0].cells(), &[0, 1, 2, 1, 2, 0, 2, 0, 1]);
        assert_eq!(f3.squares()[1].cells(), &[0, 1, 2, 2, 0, 1, 1, 2, 0]);
        assert!(verify_mols(&f3).ok());

        let f4 = field_family(4);
        assert_eq!(f4.len(), 3);
        assert!(verify_mols(&f4).ok());
    }

    #[test]
    fn td_from_order_two_square() {
        let td = td_from_mols(&field_family(2), 3).unwrap();
        assert_eq!(td.raw_blocks(), &[0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0]);
        assert!(verify_td(&td).ok());
    }

    #[test]
    fn td_k2_is_grid() {
        let td = td_from_mols(&field_family(3), 2).unwrap();
        assert_eq!(td, TransversalDesign::grid(3));
        assert!(verify_td(&td).ok());
    }

    #[test]
    fn td_k_range() {
        let f = field_family(3);
        assert!(matches!(td_from_mols(&f, 5), Err(Error::KRange { .. })));
        assert!(matches!(td_from_mols(&f, 1), Err(Error::KRange { .. })));
        let td = td_from_mols(&f, 4).unwrap();
        assert_eq!(td.num_blocks(), 9);
        assert!(verify_td(&td).ok());
    }

    #[test]
    fn mols_from_td_rejects_invalid() {
        let td = td_from_mols(&field_family(3), 4).unwrap();
        let mut raw = td.into_raw_blocks();
        raw.swap(2, 6);
        let bad = TransversalDesign::new(4, 3, raw).unwrap();
        assert!(matches!(mols_from_td(&bad), Err(Error::InvalidTd(_))));
    }

    #[test]
    fn rtd_of_td32() {
        let td = td_from_mols(&field_family(2), 3).unwrap();
        let rtd = rtd_from_td(&td).unwrap();
        assert_eq!(rtd.td().raw_blocks(), &[0, 0, 0, 1, 1, 0, 1, 1]);
        assert_eq!(rtd.resolution().class_of(), &[0, 1, 1, 0]);
        assert_eq!(rtd.resolution().profile(), &[1, 1]);
        assert!(verify_resolution(&rtd).ok());
        assert_eq!(extend_rtd(&rtd).unwrap(), td);
    }

    #[test]
    fn rtd_of_td43() {
        let td = td_from_mols(&field_family(3), 4).unwrap();
        let rtd = rtd_from_td(&td).unwrap();
        assert_eq!(rtd.resolution().num_classes(), 3);
        assert!(verify_resolution(&rtd).ok());
    }

    #[test]
    fn extend_needs_parallel_classes() {
        let td = td_from_mols(&field_family(3), 4).unwrap();
        let rtd = rtd_from_td(&td).unwrap();
        let merged = ResolvableTD::new(
            rtd.td().clone(),
            Resolution::new(vec![3], vec![0; 9]).unwrap(),
        )
        .unwrap();
        assert!(matches!(extend_rtd(&merged), Err(Error::ProfileMismatch(_))));
    }

    #[test]
    fn kronecker_small() {
        let k6 = kronecker_mols(&field_family(2), &field_family(3));
        assert_eq!(k6.len(), 1);
        assert_eq!(k6.order(), 6);
        assert!(verify_latin(&k6.squares()[0]).ok());

        let k9 = kronecker_mols(&field_family(3), &field_family(3));
        assert_eq!(k9.len(), 2);
        assert!(verify_mols(&k9).ok());
    }

    #[test]
    fn shape_checks() {
        assert!(LatinSquare::new(2, vec![0, 1, 1]).is_err());
        assert!(LatinSquare::new(2, vec![0, 1, 1, 2]).is_err());
        assert!(TransversalDesign::new(3, 2, vec![0; 11]).is_err());
        assert!(Resolution::new(vec![1, 0], vec![]).is_err());
        assert!(MolsFamily::new(vec![]).is_err());
    }
}
