//! Line-oriented text formats for MOLS families and transversal designs.
//!
//! ```text
//! %MOLS 1                 %TD 1
//! n=<n> k=<k>             k=<k> n=<n>
//! <n rows of square 0>    <n^2 blocks, k elements each, sorted>
//!                         [%RES t=<t>
//! <n rows of square 1>     profile <s_1> .. <s_t>
//! ...                      <n^2 class indices, one per block line>]
//! ```
//!
//! Numbers are ASCII decimal separated by single spaces and every line ends in
//! LF. Writers sort blocks lexicographically so that equal designs produce
//! identical bytes; the reader accepts blocks in any order.

use std::io::{self, Write};

use crate::designs::{LatinSquare, MolsFamily, Resolution, ResolvableTD, TransversalDesign};
use crate::error::{Error, Result};

fn write_row<W: Write>(w: &mut W, row: &[u32]) -> io::Result<()> {
    let mut line = String::with_capacity(row.len() * 4);
    for (i, x) in row.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        line.push_str(&x.to_string());
    }
    line.push('\n');
    w.write_all(line.as_bytes())
}

pub fn write_mols<W: Write>(w: &mut W, family: &MolsFamily) -> io::Result<()> {
    let n = family.order();
    writeln!(w, "%MOLS 1")?;
    writeln!(w, "n={n} k={}", family.len())?;
    for (i, sq) in family.squares().iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        for r in 0..n {
            write_row(w, sq.row(r))?;
        }
    }
    Ok(())
}

/// Writes the design with blocks in lexicographic order; class labels, if
/// given, follow the same permutation.
pub fn write_td<W: Write>(
    w: &mut W,
    td: &TransversalDesign,
    res: Option<&Resolution>,
) -> io::Result<()> {
    let mut order: Vec<usize> = (0..td.num_blocks()).collect();
    order.sort_by(|&x, &y| td.block(x).cmp(td.block(y)));
    writeln!(w, "%TD 1")?;
    writeln!(w, "k={} n={}", td.groups(), td.order())?;
    for &b in &order {
        write_row(w, td.block(b))?;
    }
    if let Some(res) = res {
        writeln!(w, "%RES t={}", res.num_classes())?;
        let profile: Vec<u32> = res.profile().iter().map(|&s| s as u32).collect();
        w.write_all(b"profile")?;
        if !profile.is_empty() {
            w.write_all(b" ")?;
        }
        write_row(w, &profile)?;
        for &b in &order {
            writeln!(w, "{}", res.class_of()[b])?;
        }
    }
    Ok(())
}

pub fn mols_to_string(family: &MolsFamily) -> String {
    let mut buf = Vec::new();
    write_mols(&mut buf, family).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn td_to_string(td: &TransversalDesign, res: Option<&Resolution>) -> String {
    let mut buf = Vec::new();
    write_td(&mut buf, td, res).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Either kind of file, distinguished by its first line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DesignFile {
    Mols(MolsFamily),
    Td(TransversalDesign, Option<Resolution>),
}

impl DesignFile {
    pub fn into_resolvable(self) -> Option<ResolvableTD> {
        match self {
            DesignFile::Td(td, Some(res)) => ResolvableTD::new(td, res).ok(),
            _ => None,
        }
    }
}

pub fn parse(text: &str) -> Result<DesignFile> {
    match text.lines().next() {
        Some(l) if l.starts_with("%MOLS") => parse_mols(text).map(DesignFile::Mols),
        Some(l) if l.starts_with("%TD") => {
            parse_td(text).map(|(td, res)| DesignFile::Td(td, res))
        }
        _ => Err(perr(1, "bad header: expected `%MOLS 1` or `%TD 1`")),
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let (i, l) = self.inner.next()?;
        self.last = i + 1;
        Some((i + 1, l))
    }
}

/// Parses `key=<value>` pairs in a fixed order.
fn parse_dims(line: usize, text: &str, keys: [&str; 2]) -> Result<[usize; 2]> {
    let bad = || perr(line, format!("bad dimensions line: expected `{}=<int> {}=<int>`", keys[0], keys[1]));
    let mut out = [0usize; 2];
    let mut parts = text.split(' ');
    for (slot, key) in out.iter_mut().zip(keys) {
        let tok = parts.next().ok_or_else(bad)?;
        let val = tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')).ok_or_else(bad)?;
        *slot = val.parse().map_err(|_| bad())?;
    }
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_numbers(line: usize, text: &str, arity: usize, bound: usize, out: &mut Vec<u32>) -> Result<()> {
    let mut count = 0;
    for tok in text.split(' ') {
        let v: u64 = tok
            .parse()
            .map_err(|_| perr(line, format!("not a number: `{tok}`")))?;
        if v >= bound as u64 {
            return Err(perr(line, format!("out-of-range entry {v} (must be below {bound})")));
        }
        out.push(v as u32);
        count += 1;
    }
    if count != arity {
        return Err(perr(line, format!("expected {arity} entries, found {count}")));
    }
    Ok(())
}

pub fn parse_mols(text: &str) -> Result<MolsFamily> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, "%MOLS 1")) => {}
        _ => return Err(perr(1, "bad header: expected `%MOLS 1`")),
    }
    let (no, dims) = lines.next().ok_or_else(|| perr(2, "missing dimensions line"))?;
    let [n, k] = parse_dims(no, dims, ["n", "k"])?;
    if n == 0 || k == 0 {
        return Err(perr(no, "n and k must be positive"));
    }
    let mut squares = Vec::with_capacity(k);
    for s in 0..k {
        if s > 0 {
            match lines.next() {
                Some((_, "")) => {}
                Some((no, _)) => return Err(perr(no, "expected blank line between squares")),
                None => {
                    return Err(perr(lines.last + 1, format!("expected {k} squares, found {s}")))
                }
            }
        }
        let mut cells = Vec::with_capacity(n * n);
        for r in 0..n {
            let (no, row) = lines.next().ok_or_else(|| {
                perr(lines.last + 1, format!("square {s} ends after {r} of {n} rows"))
            })?;
            parse_numbers(no, row, n, n, &mut cells)?;
        }
        squares.push(LatinSquare::new(n, cells)?);
    }
    if let Some((no, _)) = lines.next() {
        return Err(perr(no, format!("trailing content after {k} squares")));
    }
    MolsFamily::new(squares)
}

pub fn parse_td(text: &str) -> Result<(TransversalDesign, Option<Resolution>)> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, "%TD 1")) => {}
        _ => return Err(perr(1, "bad header: expected `%TD 1`")),
    }
    let (no, dims) = lines.next().ok_or_else(|| perr(2, "missing dimensions line"))?;
    let [k, n] = parse_dims(no, dims, ["k", "n"])?;
    if n == 0 || k == 0 {
        return Err(perr(no, "k and n must be positive"));
    }
    let expected = n
        .checked_mul(n)
        .filter(|b| b.checked_mul(k).is_some())
        .ok_or_else(|| perr(no, "design too large"))?;

    let mut blocks = Vec::with_capacity(expected * k);
    let mut found = 0;
    let mut res_line = None;
    while let Some((no, line)) = lines.next() {
        if let Some(rest) = line.strip_prefix("%RES") {
            res_line = Some((no, rest));
            break;
        }
        if found == expected {
            return Err(perr(no, format!("wrong block count: more than {expected} blocks")));
        }
        parse_numbers(no, line, k, n, &mut blocks)?;
        found += 1;
    }
    if found != expected {
        return Err(perr(
            lines.last + 1,
            format!("wrong block count: expected {expected}, found {found}"),
        ));
    }
    let td = TransversalDesign::new(k, n, blocks)?;

    let Some((no, rest)) = res_line else {
        return Ok((td, None));
    };
    let inconsistent = |line: usize, msg: String| perr(line, format!("inconsistent %RES section: {msg}"));
    let t: usize = rest
        .strip_prefix(" t=")
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .ok_or_else(|| inconsistent(no, "expected `%RES t=<t>` with t >= 1".into()))?;
    let (pno, pline) = lines
        .next()
        .ok_or_else(|| inconsistent(no + 1, "missing profile line".into()))?;
    let sigmas = pline
        .strip_prefix("profile ")
        .ok_or_else(|| inconsistent(pno, "expected `profile <s_1> .. <s_t>`".into()))?;
    let mut profile = Vec::with_capacity(t);
    for tok in sigmas.split(' ') {
        let s: usize = tok
            .parse()
            .map_err(|_| inconsistent(pno, format!("bad multiplicity `{tok}`")))?;
        if s == 0 {
            return Err(inconsistent(pno, "zero multiplicity".into()));
        }
        profile.push(s);
    }
    if profile.len() != t {
        return Err(inconsistent(
            pno,
            format!("t={t} but profile lists {} classes", profile.len()),
        ));
    }
    let mut labels = Vec::with_capacity(expected);
    while let Some((no, line)) = lines.next() {
        if labels.len() == expected {
            return Err(inconsistent(no, format!("more than {expected} class labels")));
        }
        let c: u64 = line
            .parse()
            .map_err(|_| inconsistent(no, format!("bad class label `{line}`")))?;
        if c >= t as u64 {
            return Err(inconsistent(no, format!("class label {c} with t={t}")));
        }
        labels.push(c as u32);
    }
    if labels.len() != expected {
        return Err(inconsistent(
            lines.last + 1,
            format!("expected {expected} class labels, found {}", labels.len()),
        ));
    }
    Ok((td, Some(Resolution::new(profile, labels)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TD32: &str = "%TD 1\nk=3 n=2\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n";

    #[test]
    fn td_exact_bytes() {
        let (td, res) = parse_td(TD32).unwrap();
        assert!(res.is_none());
        assert_eq!(td_to_string(&td, None), TD32);
    }

    #[test]
    fn td_sorted_on_write() {
        let shuffled = "%TD 1\nk=3 n=2\n1 1 0\n0 1 1\n1 0 1\n0 0 0\n";
        let (td, _) = parse_td(shuffled).unwrap();
        assert_eq!(td_to_string(&td, None), TD32);
    }

    #[test]
    fn resolution_follows_sort() {
        let text = "%TD 1\nk=2 n=2\n1 1\n0 1\n1 0\n0 0\n%RES t=2\nprofile 1 1\n0\n1\n1\n0\n";
        let (td, res) = parse_td(text).unwrap();
        assert_eq!(
            td_to_string(&td, res.as_ref()),
            "%TD 1\nk=2 n=2\n0 0\n0 1\n1 0\n1 1\n%RES t=2\nprofile 1 1\n0\n1\n1\n0\n"
        );
    }

    #[test]
    fn mols_exact_bytes() {
        let text = "%MOLS 1\nn=3 k=2\n0 1 2\n1 2 0\n2 0 1\n\n0 1 2\n2 0 1\n1 2 0\n";
        let fam = parse_mols(text).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(mols_to_string(&fam), text);
    }

    fn msg(r: Result<impl std::fmt::Debug>) -> String {
        match r {
            Err(Error::Parse { msg, .. }) => msg,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn td_diagnostics() {
        assert!(msg(parse_td("%TD 2\nk=3 n=2\n")).starts_with("bad header"));
        assert!(msg(parse_td("%TD 1\nn=2 k=3\n")).starts_with("bad dimensions"));
        assert!(msg(parse_td("%TD 1\nk=3 n=2\n0 0 0\n0 1 1\n1 0 2\n1 1 0\n")).starts_with("out-of-range"));
        assert!(msg(parse_td("%TD 1\nk=3 n=2\n0 0 0\n0 1 1\n1 0 1\n")).starts_with("wrong block count"));
        assert!(msg(parse_td(&format!("{TD32}0 0 0\n"))).starts_with("wrong block count"));
        assert!(msg(parse_td("%TD 1\nk=3 n=2\n0 0\n0 1 1\n1 0 1\n1 1 0\n")).starts_with("expected 3 entries"));
        for res in [
            "%RES t=2\nprofile 1\n0\n1\n1\n0\n",
            "%RES t=2\nprofile 1 1\n0\n1\n2\n0\n",
            "%RES t=2\nprofile 1 1\n0\n1\n1\n",
            "%RES t=2\nprofile 1 0\n0\n1\n1\n0\n",
            "%RES\nprofile 1 1\n0\n1\n1\n0\n",
        ] {
            let text = format!("{TD32}{res}");
            assert!(msg(parse_td(&text)).starts_with("inconsistent %RES"), "{res}");
        }
    }

    #[test]
    fn mols_diagnostics() {
        assert!(msg(parse_mols("%MOLS\nn=2 k=1\n0 1\n1 0\n")).starts_with("bad header"));
        assert!(msg(parse_mols("%MOLS 1\nn=2 k=2\n0 1\n1 0\n0 1\n1 0\n")).starts_with("expected blank"));
        assert!(msg(parse_mols("%MOLS 1\nn=2 k=1\n0 1\n")).contains("ends after"));
        assert!(msg(parse_mols("%MOLS 1\nn=2 k=1\n0 1\n1 0\n\n")).starts_with("trailing"));
        assert!(msg(parse_mols("%MOLS 1\nn=2 k=1\n0 1\n1 x\n")).starts_with("not a number"));
    }

    #[test]
    fn dispatch_on_header() {
        assert!(matches!(parse(TD32), Ok(DesignFile::Td(_, None))));
        assert!(matches!(parse("%MOLS 1\nn=1 k=1\n0\n"), Ok(DesignFile::Mols(_))));
        assert!(parse("hello\n").is_err());
    }
}
