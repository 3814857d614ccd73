use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn twave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twave"))
        .args(args)
        .env_remove("TWAVE_JOBS")
        .output()
        .expect("binary runs")
}

fn model(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

// Rows of a CSV on stdout, after the provenance line, keyed by header.
fn rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# twave "));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let body = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, body)
}

fn column<'a>(header: &[String], body: &'a [Vec<String>], name: &str) -> Vec<&'a str> {
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    body.iter().map(|r| r[k].as_str()).collect()
}

fn is_hex64(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase())
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("twave-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn check_gp_passes_with_header() {
    let o = twave(&["check", "--model", "gp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    let parts: Vec<&str> = first.split(' ').collect();
    assert_eq!(parts.len(), 5, "{first}");
    assert_eq!(&parts[..3], ["#", "twave", env!("CARGO_PKG_VERSION")]);
    assert!(is_hex64(parts[3].strip_prefix("model=").unwrap()));
    assert!(is_hex64(parts[4].strip_prefix("config=").unwrap()));
    let (h, b) = rows(&text);
    assert!(column(&h, &b, "verdict").iter().all(|v| *v == "Pass"));
}

#[test]
fn check_model_file() {
    let o = twave(&["check", "--model", &model("example55.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, b) = rows(&stdout(&o));
    let ids = column(&h, &b, "assumption");
    let verdicts = column(&h, &b, "verdict");
    for id in ["A1", "B1"] {
        let k = ids.iter().position(|x| *x == id).unwrap();
        assert_eq!(verdicts[k], "Pass");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = temp_dir("bad");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "[model\nkind = ").unwrap();
    let o = twave(&["check", "--model", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));

    let o = twave(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = twave(&["check", "--model", "no-such-model"]);
    assert_eq!(o.status.code(), Some(2));

    let unknown = dir.join("unknown.toml");
    std::fs::write(&unknown, "model = \"gp\"\nbogus = 1\n").unwrap();
    let o = twave(&["run", "--config", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn profile_writes_csv_and_json() {
    let dir = temp_dir("profile");
    let o = twave(&["profile", "--model", "gp", "--c", "1.0", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("profile.json")).unwrap()).unwrap();
    let e = json["data"]["energy"].as_f64().unwrap();
    assert!((e - 2.0 / 3.0).abs() < 1e-6, "{e}");
    let csv = std::fs::read_to_string(dir.join("profile.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), json["twave"]["header"].as_str().unwrap());
    let (h, b) = rows(&csv);
    assert_eq!(h, ["x", "rho", "theta", "re_psi", "im_psi"]);
    assert_eq!(b.len(), 8001);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn profile_precondition_and_degenerate_exits() {
    let o = twave(&["profile", "--model", "gp", "--c", "1.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("supersonic speed"), "{}", stderr(&o));

    let o = twave(&["profile", "--model", &model("example43.toml"), "--c", "1.2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("degenerate turning point"), "{}", stderr(&o));
}

#[test]
fn dispersion_passes_the_oracle() {
    let o = twave(&["dispersion", "--model", "gp", "--c-min", "0.05", "--c-max", "1.35", "--n", "25"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, b) = rows(&stdout(&o));
    assert_eq!(b.len(), 25);
    assert!(column(&h, &b, "oracle_ok").iter().all(|v| *v == "true"));
}

#[test]
fn emin1_is_subsonic() {
    let o = twave(&["emin1", "--model", "gp", "--p-grid", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, b) = rows(&stdout(&o));
    assert_eq!(b.len(), 65);
    let p = column(&h, &b, "p");
    let below = column(&h, &b, "below_sqrt2_p");
    for (p, below) in p.iter().zip(below) {
        if p.parse::<f64>().unwrap() >= 0.05 {
            assert_eq!(below, "true", "p = {p}");
        }
    }
}

#[test]
fn scan2d_energies_are_monotone() {
    let o = twave(&[
        "scan2d", "--model", "gp", "--p", "1.0", "--lambda", "0.05:4:geometric:12", "--nx", "129", "--ny", "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, b) = rows(&stdout(&o));
    let lam = column(&h, &b, "lambda");
    let e = column(&h, &b, "energy");
    let failed = column(&h, &b, "failed");
    let mut pts: Vec<(f64, f64)> = (0..b.len())
        .filter(|&k| failed[k] == "false")
        .map(|k| (lam[k].parse().unwrap(), e[k].parse().unwrap()))
        .collect();
    // The smallest periods may hit the black-soliton regime and be marked failed.
    assert!(pts.len() >= 9, "{}", pts.len());
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(pts.windows(2).all(|w| w[0].1 <= w[1].1 + 1e-8), "{pts:?}");
}

#[test]
fn outputs_are_deterministic_and_jobs_independent() {
    let args = ["dispersion", "--model", "example56", "--c-min", "0.1", "--c-max", "1.3", "--n", "40"];
    let base = twave(&args);
    assert_eq!(base.status.code(), Some(0));
    let again = twave(&args);
    assert_eq!(base.stdout, again.stdout);
    let mut with_flag = vec!["--jobs", "2"];
    with_flag.extend(args);
    assert_eq!(twave(&with_flag).stdout, base.stdout);
    let with_env = Command::new(env!("CARGO_BIN_EXE_twave"))
        .args(args)
        .env("TWAVE_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(with_env.status.code(), Some(0));
    assert_eq!(with_env.stdout, base.stdout);
    let bad_env = Command::new(env!("CARGO_BIN_EXE_twave"))
        .args(args)
        .env("TWAVE_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn run_config_resolves_relative_models_and_hashes_content() {
    let dir = temp_dir("run");
    std::fs::copy(model("example43.toml"), dir.join("contact.toml")).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "model = \"contact.toml\"\nseed = 3\n[profile]\nc = 1.0\npoints = 801\n").unwrap();
    let out = dir.join("out");
    let o = twave(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = std::fs::read_to_string(out.join("profile.csv")).unwrap();

    // The same model given by builtin name hashes identically.
    std::fs::write(&cfg, "model = \"example43\"\nseed = 3\n[profile]\nc = 1.0\npoints = 801\n").unwrap();
    let o = twave(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let second = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    assert_eq!(first, second);

    // A different seed changes the config hash only.
    std::fs::write(&cfg, "model = \"example43\"\nseed = 4\n[profile]\nc = 1.0\npoints = 801\n").unwrap();
    let o = twave(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let third = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    let head = |s: &str| s.lines().next().unwrap().to_string();
    assert_ne!(head(&first), head(&third));
    assert_eq!(head(&first).split(' ').nth(3), head(&third).split(' ').nth(3));
    assert_eq!(first.lines().skip(1).collect::<Vec<_>>(), third.lines().skip(1).collect::<Vec<_>>());
    std::fs::remove_dir_all(dir).unwrap();
}
