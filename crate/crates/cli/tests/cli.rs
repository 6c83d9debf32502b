use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rss"))
        .args(args)
        .output()
        .expect("run rss")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn split(dir: &TempDir, input: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.path().join("shares");
    let mut args = vec!["split", "--k", "5", "--n", "7", "--out", s(&out)];
    args.extend_from_slice(extra);
    args.push(s(input));
    let o = rss(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn share(out: &Path, stem: &str, x: u64) -> PathBuf {
    out.join(format!("{stem}.s{x}.rss"))
}

fn write(dir: &TempDir, name: &str, data: &[u8]) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, data).unwrap();
    p
}

#[test]
fn fourteen_bytes_make_two_chunks() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "msg.txt", b"fourteen bytes");
    let out = split(&dir, &input, &[]);
    for x in 5..=11 {
        let text = fs::read_to_string(share(&out, "msg", x)).unwrap();
        assert!(text.contains("\nchunks=2\n"), "{text}");
        assert!(text.contains(&format!("\nx={x}\n")));
    }
    assert_eq!(fs::read_dir(&out).unwrap().count(), 7);
}

#[test]
fn any_five_of_seven_restore_the_file() {
    let dir = TempDir::new().unwrap();
    let data: Vec<u8> = (0..1000u32).map(|i| (i * 7 % 251) as u8).collect();
    let input = write(&dir, "data.bin", &data);
    let out = split(&dir, &input, &[]);
    for drop in [(5, 6), (7, 11), (9, 10)] {
        let restored = dir.path().join(format!("r{}{}", drop.0, drop.1));
        let mut args = vec![
            "reconstruct".to_string(),
            "--out".into(),
            s(&restored).into(),
        ];
        for x in (5..=11).filter(|&x| x != drop.0 && x != drop.1) {
            args.push(s(&share(&out, "data", x)).into());
        }
        let o = Command::new(env!("CARGO_BIN_EXE_rss"))
            .args(&args)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(fs::read(&restored).unwrap(), data);
    }
}

#[test]
fn hidden_payload_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "cover.txt", &[b'c'; 300]);
    let aux = write(&dir, "aux.bin", b"\x00\x01secret note\xff");
    let out = split(&dir, &input, &["--hide", s(&aux), "--embed-digest"]);
    let restored = dir.path().join("restored.txt");
    let hidden = dir.path().join("hidden.bin");
    let shares: Vec<PathBuf> = (6..=10).map(|x| share(&out, "cover", x)).collect();
    let mut args = vec![
        "reconstruct",
        "--check-digest",
        "--out",
        s(&restored),
        "--hidden-out",
        s(&hidden),
    ];
    args.extend(shares.iter().map(|p| s(p)));
    let o = rss(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(&restored).unwrap(), vec![b'c'; 300]);
    assert_eq!(fs::read(&hidden).unwrap(), fs::read(&aux).unwrap());

    // default hidden path
    let restored2 = dir.path().join("again.txt");
    let mut args = vec!["reconstruct", "--out", s(&restored2)];
    args.extend(shares.iter().map(|p| s(p)));
    assert!(rss(&args).status.success());
    assert_eq!(
        fs::read(dir.path().join("again.txt.hidden")).unwrap(),
        fs::read(&aux).unwrap()
    );
}

#[test]
fn seeded_split_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "m.txt", b"deterministic please");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = rss(&[
            "split",
            "--k",
            "3",
            "--n",
            "4",
            "--seed",
            "c0ffee",
            "--out",
            s(out),
            s(&input),
        ]);
        assert!(o.status.success());
        assert!(String::from_utf8_lossy(&o.stderr).contains("WARNING"));
    }
    for x in 3..=6 {
        assert_eq!(
            fs::read(share(&a, "m", x)).unwrap(),
            fs::read(share(&b, "m", x)).unwrap()
        );
    }
    let c = dir.path().join("c");
    rss(&[
        "split",
        "--k",
        "3",
        "--n",
        "4",
        "--seed",
        "c0ffef",
        "--out",
        s(&c),
        s(&input),
    ]);
    assert_ne!(
        fs::read(share(&a, "m", 3)).unwrap(),
        fs::read(share(&c, "m", 3)).unwrap()
    );
    let bad = rss(&[
        "split",
        "--k",
        "3",
        "--n",
        "4",
        "--seed",
        "xyz",
        "--out",
        s(&c),
        s(&input),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn tampered_share_exits_4() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.txt", b"integrity matters a great deal");
    let out = split(&dir, &input, &[]);
    let victim = share(&out, "t", 7);
    let text = fs::read_to_string(&victim).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let last = lines.len() - 1;
    let y: u64 = lines[last].parse().unwrap();
    lines[last] = ((y + 1) % ((1u64 << 61) - 1)).to_string();
    fs::write(&victim, lines.join("\n") + "\n").unwrap();

    let restored = dir.path().join("r.txt");
    let mut args = vec!["reconstruct", "--out", s(&restored)];
    let shares: Vec<PathBuf> = (5..=10).map(|x| share(&out, "t", x)).collect();
    args.extend(shares.iter().map(|p| s(p)));
    let o = rss(&args);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(!restored.exists());
}

#[test]
fn exactly_k_with_tampered_share_fails_digest_check() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", &[0x5a; 210]);
    let out = split(&dir, &input, &["--embed-digest"]);
    let victim = share(&out, "d", 9);
    let text = fs::read_to_string(&victim).unwrap();
    let tampered = text.replacen("\n---\n", "\n---\n1", 1);
    fs::write(&victim, tampered).unwrap();
    let restored = dir.path().join("r.txt");
    let mut args = vec!["reconstruct", "--check-digest", "--out", s(&restored)];
    let shares: Vec<PathBuf> = (5..=9).map(|x| share(&out, "d", x)).collect();
    args.extend(shares.iter().map(|p| s(p)));
    let o = rss(&args);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(!restored.exists());
}

#[test]
fn four_of_seven_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "f.txt", b"threshold");
    let out = split(&dir, &input, &[]);
    let restored = dir.path().join("r.txt");
    let mut args = vec!["reconstruct", "--out", s(&restored)];
    let shares: Vec<PathBuf> = (5..=8).map(|x| share(&out, "f", x)).collect();
    args.extend(shares.iter().map(|p| s(p)));
    let o = rss(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("insufficient"));
    assert!(!restored.exists());
}

#[test]
fn duplicate_and_mismatched_shares_exit_2() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", b"duplicates");
    let out = split(&dir, &input, &[]);
    let restored = dir.path().join("r.txt");
    let five = s(&share(&out, "g", 5)).to_string();
    let six = s(&share(&out, "g", 6)).to_string();
    let seven = s(&share(&out, "g", 7)).to_string();
    let eight = s(&share(&out, "g", 8)).to_string();
    let o = rss(&[
        "reconstruct",
        "--out",
        s(&restored),
        &five,
        &six,
        &seven,
        &eight,
        &five,
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));

    // a share from a different split has a different header
    let other_dir = TempDir::new().unwrap();
    let other_in = write(&other_dir, "g.txt", b"another message, longer");
    let other_out = split(&other_dir, &other_in, &[]);
    let foreign = s(&share(&other_out, "g", 9)).to_string();
    let o = rss(&[
        "reconstruct",
        "--out",
        s(&restored),
        &five,
        &six,
        &seven,
        &eight,
        &foreign,
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!restored.exists());
}

#[test]
fn validation_and_io_exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "h.txt", b"0123456789abcd");
    let out = dir.path().join("o");
    // n < k
    assert_eq!(
        rss(&["split", "--k", "5", "--n", "4", "--out", s(&out), s(&input)])
            .status
            .code(),
        Some(2)
    );
    // not prime, and too small for 7-byte chunks
    assert_eq!(
        rss(&[
            "split",
            "--k",
            "3",
            "--n",
            "4",
            "--prime",
            "1000",
            "--out",
            s(&out),
            s(&input)
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        rss(&[
            "split",
            "--k",
            "3",
            "--n",
            "4",
            "--prime",
            "131",
            "--out",
            s(&out),
            s(&input)
        ])
        .status
        .code(),
        Some(2)
    );
    // capacity: 2 chunks, k = 3 leaves 7 bytes
    let aux = write(&dir, "aux", &[1; 8]);
    let o = rss(&[
        "split",
        "--k",
        "3",
        "--n",
        "4",
        "--hide",
        s(&aux),
        "--out",
        s(&out),
        s(&input),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(
        msg.contains("15 bytes required") && msg.contains("14 available"),
        "{msg}"
    );
    assert!(!out.exists() || fs::read_dir(&out).unwrap().count() == 0);
    // missing input
    let missing = dir.path().join("nope");
    assert_eq!(
        rss(&[
            "split",
            "--k",
            "3",
            "--n",
            "4",
            "--out",
            s(&out),
            s(&missing)
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        rss(&["reconstruct", "--out", s(&out), s(&missing)])
            .status
            .code(),
        Some(3)
    );
    // usage
    assert_eq!(rss(&["split", "--k", "3"]).status.code(), Some(2));
    assert_eq!(rss(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_hidden_write_removes_message_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "cover.txt", &[b'z'; 100]);
    let aux = write(&dir, "aux", b"hidden!");
    let out = split(&dir, &input, &["--hide", s(&aux)]);
    let restored = dir.path().join("r.txt");
    let unwritable = dir.path().join("no/such/dir/h.bin");
    let mut args = vec![
        "reconstruct",
        "--out",
        s(&restored),
        "--hidden-out",
        s(&unwritable),
    ];
    let shares: Vec<PathBuf> = (5..=9).map(|x| share(&out, "cover", x)).collect();
    args.extend(shares.iter().map(|p| s(p)));
    let o = rss(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(!restored.exists());
}

#[test]
fn inspect_dumps_header() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", b"inspect me, please!!");
    let out = split(&dir, &input, &["--embed-digest"]);
    let path = share(&out, "i", 6);
    let o = rss(&["inspect", s(&path)]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for field in [
        "scheme:  recursive",
        "k:       5",
        "n:       7",
        "x:       6",
        "chunks:  3",
        "msglen:  20",
        "auxlen:  0",
        "digest:  sha256",
    ] {
        assert!(text.contains(field), "{field} missing from\n{text}");
    }
    assert!(!text.contains("values:"));

    let o = rss(&["inspect", "--full", s(&path)]);
    let text = String::from_utf8(o.stdout).unwrap();
    let after: Vec<&str> = text.split("values:\n").nth(1).unwrap().lines().collect();
    assert_eq!(after.len(), 3);

    let bogus = write(&dir, "bogus.rss", b"NOPE\n");
    assert_eq!(rss(&["inspect", s(&bogus)]).status.code(), Some(2));
}

#[test]
fn xor2_three_level_example() {
    let dir = TempDir::new().unwrap();
    let secrets = write(&dir, "three.txt", b"1\n01\n1011\n");
    let out = dir.path().join("x");
    let o = rss(&[
        "xor2",
        "split",
        "--base-bit",
        "0",
        "--out",
        s(&out),
        s(&secrets),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let one = out.join("three.x1.rss");
    let two = out.join("three.x2.rss");
    assert_eq!(
        fs::read_to_string(&one).unwrap(),
        "RSS1\nscheme=xor2\nlevels=3\nindex=1\n---\n2\n"
    );
    assert_eq!(
        fs::read_to_string(&two).unwrap(),
        "RSS1\nscheme=xor2\nlevels=3\nindex=2\n---\n9\n"
    );
    let o = rss(&["inspect", "--full", s(&one)]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("share:   0010"));

    let joined = dir.path().join("joined.txt");
    // argument order does not matter
    let o = rss(&["xor2", "join", "--out", s(&joined), s(&two), s(&one)]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&joined).unwrap(), "1\n01\n1011\n");
}

#[test]
fn xor2_random_round_trip_and_errors() {
    let dir = TempDir::new().unwrap();
    let mut text = String::new();
    let mut state = 0x9e3779b97f4a7c15u64;
    for level in 0..8 {
        for _ in 0..(1 << level) {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            text.push(if state & 1 == 1 { '1' } else { '0' });
        }
        text.push('\n');
    }
    let secrets = write(&dir, "many.txt", text.as_bytes());
    let out = dir.path().join("x");
    assert!(rss(&["xor2", "split", "--out", s(&out), s(&secrets)])
        .status
        .success());
    let joined = dir.path().join("j.txt");
    let o = rss(&[
        "xor2",
        "join",
        "--out",
        s(&joined),
        s(&out.join("many.x1.rss")),
        s(&out.join("many.x2.rss")),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&joined).unwrap(), text);

    let bad = write(&dir, "bad.txt", b"1\n011\n");
    assert_eq!(
        rss(&["xor2", "split", "--out", s(&out), s(&bad)])
            .status
            .code(),
        Some(2)
    );
    let o = rss(&[
        "xor2",
        "join",
        "--out",
        s(&joined),
        s(&out.join("many.x1.rss")),
        s(&out.join("many.x1.rss")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
