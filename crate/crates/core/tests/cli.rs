use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::thread;
use std::time::Duration;

fn qcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcstern"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn keygen_sign_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (key, sk, pk, msg, sig) = (
        p(dir.path(), "k"),
        p(dir.path(), "k.sk"),
        p(dir.path(), "k.pk"),
        p(dir.path(), "m"),
        p(dir.path(), "s"),
    );
    std::fs::write(&msg, b"hello").unwrap();

    let o = qcs(&[
        "keygen",
        "--paramset",
        "QCS-128-s1",
        "--out",
        &key,
        "--seed",
        "000102030405060708090a0b0c0d0e0f",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("98 bytes") && out.contains("179.25 bytes"), "{out}");

    let o = qcs(&["sign", "--sk", &sk, "--pk", &pk, "--msg", &msg, "--out", &sig]);
    assert_eq!(code(&o), 0);
    let o = qcs(&["verify", "--pk", &pk, "--msg", &msg, "--sig", &sig]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "accept"));

    let mut bytes = std::fs::read(&sig).unwrap();
    bytes[100] ^= 4;
    std::fs::write(&sig, &bytes).unwrap();
    assert_eq!(
        code(&qcs(&["verify", "--pk", &pk, "--msg", &msg, "--sig", &sig])),
        1
    );
    std::fs::write(&sig, b"garbage").unwrap();
    assert_eq!(
        code(&qcs(&["verify", "--pk", &pk, "--msg", &msg, "--sig", &sig])),
        1
    );

    assert_eq!(
        code(&qcs(&[
            "verify",
            "--pk",
            &p(dir.path(), "missing"),
            "--msg",
            &msg,
            "--sig",
            &sig
        ])),
        2
    );
    assert_eq!(code(&qcs(&["keygen", "--paramset", "nope", "--out", &key])), 2);
    assert_eq!(code(&qcs(&["keygen", "--out", &key, "--seed", "abcd"])), 2);
    assert_eq!(code(&qcs(&["frobnicate"])), 2);
}

#[test]
fn seeded_keygen_and_signing_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let seed = "ffeeddccbbaa99887766554433221100";
    for k in ["a", "b"] {
        assert_eq!(
            code(&qcs(&[
                "keygen",
                "--paramset",
                "TOY",
                "--out",
                &p(dir.path(), k),
                "--seed",
                seed
            ])),
            0
        );
    }
    let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.pk"), read("b.pk"));
    assert_eq!(read("a.sk"), read("b.sk"));
    std::fs::write(dir.path().join("m"), b"x").unwrap();
    for s in ["s1", "s2"] {
        let o = qcs(&[
            "sign",
            "--sk",
            &p(dir.path(), "a.sk"),
            "--pk",
            &p(dir.path(), "a.pk"),
            "--msg",
            &p(dir.path(), "m"),
            "--out",
            &p(dir.path(), s),
            "--seed",
            seed,
        ]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(read("s1"), read("s2"));
}

#[test]
fn no_opt_signatures_are_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| p(dir.path(), n);
    assert_eq!(
        code(&qcs(&["keygen", "--paramset", "QCS-128-s4", "--out", &d("k")])),
        0
    );
    std::fs::write(d("m"), b"msg").unwrap();
    let (sk, pk, m, s) = (d("k.sk"), d("k.pk"), d("m"), d("s"));
    let mut sizes = Vec::new();
    for extra in [
        vec![],
        vec!["--no-opt", "cw"],
        vec!["--no-opt", "seed-pairing", "--no-opt", "commit-aggregation"],
    ] {
        let mut args = vec!["sign", "--sk", &sk, "--pk", &pk, "--msg", &m, "--out", &s];
        args.extend(extra.iter().copied());
        assert_eq!(code(&qcs(&args)), 0);
        assert_eq!(
            code(&qcs(&[
                "verify",
                "--pk",
                &d("k.pk"),
                "--msg",
                &d("m"),
                "--sig",
                &d("s")
            ])),
            0
        );
        sizes.push(std::fs::metadata(d("s")).unwrap().len());
    }
    assert!(sizes[0] < sizes[1] && sizes[0] < sizes[2], "{sizes:?}");
    assert_eq!(
        code(&qcs(&[
            "sign",
            "--sk",
            &d("k.sk"),
            "--pk",
            &d("k.pk"),
            "--msg",
            &d("m"),
            "--out",
            &d("s"),
            "--no-opt",
            "bogus"
        ])),
        2
    );
}

#[test]
fn params_reports() {
    let o = qcs(&["params", "--paramset", "QCS-128-s20", "--format", "kv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for line in [
        "alpha_star=32",
        "delta_soundness=129",
        "delta_kz=141",
        "delta_selected=141",
        "sqrt_n_margin_bits=6.8364",
    ] {
        assert!(out.lines().any(|l| l == line), "{line} missing:\n{out}");
    }
    let o = qcs(&["params", "--k", "653", "--w", "137", "--s", "4"]);
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.starts_with("delta_selected") && l.trim_end().ends_with("145")),
        "{out}"
    );
    assert_eq!(code(&qcs(&["params", "--k", "10", "--w", "9"])), 2);
}

#[test]
fn bench_prints_sizes_and_timings() {
    let o = qcs(&[
        "bench",
        "--paramset",
        "TOY",
        "--iterations",
        "50",
        "--seed",
        "00000000000000000000000000000000",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for key in [
        "size mean",
        "size min / max",
        "expected (exact)",
        "expected (formula)",
        "sign",
        "verify",
    ] {
        assert!(out.contains(key), "{key}:\n{out}");
    }
}

#[test]
fn identify_over_tcp_and_replay_log() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| p(dir.path(), n);
    // TOY would let a wrong secret through once in 16 runs
    assert_eq!(
        code(&qcs(&["keygen", "--paramset", "QCS-128-s1", "--out", &d("k")])),
        0
    );
    assert_eq!(
        code(&qcs(&[
            "keygen",
            "--paramset",
            "QCS-128-s1",
            "--out",
            &d("other")
        ])),
        0
    );
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let addr = format!("127.0.0.1:{port}");
    let verifier = Command::new(env!("CARGO_BIN_EXE_qcstern"))
        .args([
            "identify",
            "--role",
            "verifier",
            "--listen",
            &addr,
            "--pk",
            &d("k.pk"),
            "--sessions",
            "2",
            "--transcript-log",
            &d("t"),
        ])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let connect = |sk: &str| {
        for _ in 0..100 {
            let o = qcs(&[
                "identify",
                "--role",
                "prover",
                "--connect",
                &addr,
                "--pk",
                &d("k.pk"),
                "--sk",
                &d(sk),
            ]);
            if code(&o) != 2 {
                return o;
            }
            thread::sleep(Duration::from_millis(50));
        }
        panic!("verifier never came up");
    };
    assert_eq!(code(&connect("k.sk")), 0);
    // a prover with the wrong secret is turned down
    assert_eq!(code(&connect("other.sk")), 1);
    let out = verifier.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("session 0: accept") && text.contains("session 1:"),
        "{text}"
    );

    let o = qcs(&["verify", "--pk", &d("k.pk"), "--transcript", &d("t.0")]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "accept"));
    assert_eq!(
        code(&qcs(&[
            "verify",
            "--pk",
            &d("other.pk"),
            "--transcript",
            &d("t.0")
        ])),
        1
    );
}
