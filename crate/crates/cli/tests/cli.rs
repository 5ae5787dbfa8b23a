use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mols(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mols"))
        .args(args)
        .env_remove("MOLS_BUDGET")
        .output()
        .expect("spawn mols")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bound_936_with_proof() {
    let o = mols(&["bound", "936", "--proof"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "8\n(triple (pp 2 3) (pp 3 2) (pp 13 1) :order 936 :value 8)\n"
    );
    let o = mols(&["bound", "--factors", "2^3,9,13"]);
    assert_eq!(stdout(&o), "8\n");
}

#[test]
fn construct_extend_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("td30.txt");
    let o = mols(&["construct", "--factors", "2,3,5", "--k", "3", "--extend", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("%TD 1\nk=4 n=30\n"));
    assert_eq!(text.lines().count(), 2 + 900);
    let o = mols(&["verify", p(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("ok"));
}

#[test]
fn corrupted_design_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("td.txt");
    assert_eq!(code(&mols(&["construct", "--n", "12", "--auto", "--out", p(&out)])), 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    // point the first block's last entry at a different element
    let mut first: Vec<u32> = lines[2].split(' ').map(|x| x.parse().unwrap()).collect();
    let last = first.len() - 1;
    first[last] = (first[last] + 1) % 12;
    lines[2] = first.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = mols(&["verify", p(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("pair covered"), "{}", stdout(&o));
}

#[test]
fn parse_and_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "%TD 2\nk=3 n=2\n").unwrap();
    let o = mols(&["verify", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad header"));
    assert!(o.stdout.is_empty());

    fs::write(&bad, "%TD 1\nk=3 n=2\n0 0 0\n0 1 1\n1 0 1\n").unwrap();
    let o = mols(&["verify", p(&bad)]);
    assert_eq!(code(&o), 2);

    assert_eq!(code(&mols(&["bound", "12", "--frobnicate"])), 2);
    assert_eq!(code(&mols(&["field", "6"])), 2);
    assert_eq!(code(&mols(&["bound", "--factors", "2^x"])), 2);
}

#[test]
fn budget_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("td.txt");
    let o = mols(&["construct", "--n", "936", "--auto", "--out", p(&out), "--budget", "100000"]);
    assert_eq!(code(&o), 3);
    assert!(!out.exists());
    let o = Command::new(env!("CARGO_BIN_EXE_mols"))
        .args(["construct", "--factors", "2,3,5", "--out", p(&out)])
        .env("MOLS_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn re_emission_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let rtd = dir.path().join("rtd.txt");
    assert_eq!(code(&mols(&["construct", "--factors", "2,3,3", "--out", p(&rtd)])), 0);
    let text = fs::read_to_string(&rtd).unwrap();
    assert!(text.contains("%RES t="));
    assert_eq!(code(&mols(&["verify", p(&rtd), "--level", "res"])), 0);

    let again = dir.path().join("again.txt");
    let o = mols(&["convert", "--from", "td", "--to", "td", "--in", p(&rtd), "--out", p(&again)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&again).unwrap(), text.as_bytes());

    let td = dir.path().join("td7.txt");
    let mols_file = dir.path().join("m.txt");
    let back = dir.path().join("back.txt");
    assert_eq!(code(&mols(&["construct", "--n", "7", "--auto", "--out", p(&td)])), 0);
    let o = mols(&["convert", "--from", "td", "--to", "mols", "--in", p(&td), "--out", p(&mols_file)]);
    assert_eq!(code(&o), 0);
    let o = mols(&["convert", "--from", "mols", "--to", "mols", "--in", p(&mols_file), "--out", p(&back)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&mols_file).unwrap(), fs::read(&back).unwrap());
    assert_eq!(code(&mols(&["verify", p(&back)])), 0);
    let o = mols(&["convert", "--from", "mols", "--to", "td", "--in", p(&back), "--out", p(&again)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&again).unwrap(), fs::read(&td).unwrap());
}

#[test]
fn resolvable_round_trip_and_extension() {
    let dir = tempfile::tempdir().unwrap();
    let field = mols(&["field", "9", "--print-tables"]);
    assert_eq!(code(&field), 0);
    let out = stdout(&field);
    assert!(out.starts_with("p 3\ne 2\nmodulus 1 0 1\nadd\n"));
    assert_eq!(out.lines().count(), 3 + 2 * 10);

    let td = dir.path().join("td.txt");
    assert_eq!(code(&mols(&["construct", "--n", "9", "--auto", "--k", "5", "--out", p(&td)])), 0);
    let rtd = dir.path().join("rtd.txt");
    let o = mols(&["convert", "--from", "td", "--to", "rtd", "--in", p(&td), "--out", p(&rtd)]);
    assert_eq!(code(&o), 0);
    let copy = dir.path().join("copy.txt");
    let o = mols(&["convert", "--from", "td", "--to", "td", "--extend", "--in", p(&rtd), "--out", p(&copy)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&copy).unwrap(), fs::read(&td).unwrap());
}

#[test]
fn table_rows_are_tsv() {
    let o = mols(&["table", "--min", "930", "--max", "940"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("936\t7\t8\t(triple (pp 2 3) (pp 3 2) (pp 13 1))\n"));
    assert!(out.lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn help_documents_formats() {
    let o = mols(&["--help"]);
    let out = stdout(&o);
    for needle in ["%MOLS 1", "%TD 1", "%RES t=", "(triple P P P)", ":order O :value V"] {
        assert!(out.contains(needle), "missing {needle}");
    }
}
