use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

const ALGOS: [&str; 3] = ["lz77", "lz77c", "lz78"];

fn lzsuf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lzsuf"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Binary de Bruijn sequence of order `k` (Lyndon-word concatenation).
fn de_bruijn(k: usize) -> Vec<u8> {
    let mut a = vec![0u8; k + 1];
    let mut out = Vec::new();
    fn gen(t: usize, p: usize, k: usize, a: &mut [u8], out: &mut Vec<u8>) {
        if t > k {
            if k.is_multiple_of(p) {
                out.extend(a[1..=p].iter().map(|&d| b'0' + d));
            }
            return;
        }
        a[t] = a[t - p];
        gen(t + 1, p, k, a, out);
        for d in a[t - p] + 1..2 {
            a[t] = d;
            gen(t + 1, t, k, a, out);
        }
    }
    gen(1, 1, k, &mut a, &mut out);
    out
}

fn corpus() -> Vec<(String, Vec<u8>)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut c = vec![
        ("single".to_string(), b"a".to_vec()),
        ("zero-byte".to_string(), vec![0u8]),
        ("run".to_string(), vec![b'a'; 5000]),
        ("de-bruijn-10".to_string(), de_bruijn(10)),
        ("all-bytes".to_string(), (0..=255u8).chain((0..=255u8).rev()).collect()),
    ];
    for f in ["src/lz77.rs", "src/sst.rs", "src/cli.rs", "Cargo.toml"] {
        c.push((f.to_string(), fs::read(root.join(f)).unwrap()));
    }
    c
}

fn round_trip(dir: &Path, name: &str, data: &[u8], algo: &str) {
    let input: PathBuf = dir.join("input");
    let packed = dir.join("packed");
    let back = dir.join("back");
    fs::write(&input, data).unwrap();
    let out = lzsuf(&[
        "compress",
        "--algo",
        algo,
        "--epsilon",
        "1/2",
        input.to_str().unwrap(),
        "--output",
        packed.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{name}/{algo}: {out:?}");
    let out = lzsuf(&[
        "decompress",
        "--strip-sentinel",
        packed.to_str().unwrap(),
        "--output",
        back.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{name}/{algo}: {out:?}");
    assert!(fs::read(&back).unwrap() == data, "{name}/{algo} differs");
}

#[test]
fn de_bruijn_is_complete() {
    let s = de_bruijn(4);
    assert_eq!(s.len(), 16);
    let mut cyc = s.clone();
    cyc.extend_from_slice(&s[..3]);
    let mut seen: Vec<_> = cyc.windows(4).collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 16);
}

#[test]
fn corpus_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (name, data) in corpus() {
        for algo in ALGOS {
            round_trip(dir.path(), &name, &data, algo);
        }
    }
}

#[test]
fn verify_and_stats_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t");
    fs::write(&p, b"aaabaabaaabaa").unwrap();
    let p = p.to_str().unwrap();
    for algo in ALGOS {
        assert_eq!(lzsuf(&["verify", "--algo", algo, p]).status.code(), Some(0));
        let bad = lzsuf(&["verify", "--algo", algo, "--fault-inject", p]);
        assert_eq!(bad.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&bad.stderr).contains("mismatch at factor"));
        let stats = lzsuf(&["stats", "--algo", algo, "--epsilon", "1/8", p]);
        assert_eq!(stats.status.code(), Some(0));
        let text = String::from_utf8(stats.stdout).unwrap();
        assert!(text.contains("space.arena_budget="), "{text}");
        assert!(!text.contains("=fail"), "{text}");
    }
    assert_eq!(lzsuf(&["compress"]).status.code(), Some(2));
    assert_eq!(lzsuf(&["compress", "--epsilon", "0/1", p]).status.code(), Some(2));
    assert_eq!(lzsuf(&["decompress", "/no/such/file"]).status.code(), Some(3));
}

#[test]
fn truncated_stream_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    let packed = dir.path().join("packed");
    fs::write(&input, b"abracadabra abracadabra").unwrap();
    let ok = lzsuf(&[
        "compress",
        input.to_str().unwrap(),
        "-o",
        packed.to_str().unwrap(),
    ]);
    assert!(ok.status.success());
    let mut bytes = fs::read(&packed).unwrap();
    bytes.pop();
    fs::write(&packed, &bytes).unwrap();
    let out = lzsuf(&["decompress", packed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
