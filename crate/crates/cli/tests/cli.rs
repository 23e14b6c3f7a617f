use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn movingwell(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_movingwell"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Carpet {
    nx: usize,
    nt: usize,
    densities: Vec<f64>,
}

fn read_binary(path: &Path) -> Carpet {
    let b = fs::read(path).unwrap();
    assert_eq!(&b[..4], b"QWCP");
    assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
    let nx = u64::from_le_bytes(b[8..16].try_into().unwrap()) as usize;
    let nt = u64::from_le_bytes(b[16..24].try_into().unwrap()) as usize;
    let densities: Vec<f64> = b[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    assert_eq!(densities.len(), nx * nt);
    Carpet { nx, nt, densities }
}

/// (t, x_lo, x_hi) per slice from the sidecar.
fn read_slices(path: &Path) -> Vec<(f64, f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| l.strip_prefix("slice = "))
        .map(|rest| {
            let v: Vec<f64> = rest.split(',').map(|s| s.parse().unwrap()).collect();
            (v[1], v[2], v[3])
        })
        .collect()
}

/// Relative positions of the two highest local maxima.
fn peaks(row: &[f64]) -> (f64, f64) {
    let mut m: Vec<(f64, usize)> = (1..row.len() - 1)
        .filter(|&i| row[i] > row[i - 1] && row[i] >= row[i + 1])
        .map(|i| (row[i], i))
        .collect();
    m.sort_by(|a, b| b.0.total_cmp(&a.0));
    let rel = |i: usize| i as f64 / (row.len() - 1) as f64;
    let (a, b) = (rel(m[0].1), rel(m[1].1));
    (a.min(b), a.max(b))
}

fn assert_double_revival(dir: &Path, name: &str, t_expect: f64, width_expect: f64) {
    let carpet = read_binary(&dir.join(format!("{name}.bin")));
    let slices = read_slices(&dir.join(format!("{name}.meta")));
    assert_eq!(slices.len(), carpet.nt);
    let k = (0..carpet.nt)
        .min_by(|&a, &b| {
            (slices[a].0 - t_expect)
                .abs()
                .total_cmp(&(slices[b].0 - t_expect).abs())
        })
        .unwrap();
    let (t, lo, hi) = slices[k];
    assert!((t - t_expect).abs() <= 0.02 * t_expect, "slice time {t}");
    assert!(
        ((hi - lo) - width_expect).abs() <= 0.02 * width_expect,
        "width {}",
        hi - lo
    );
    let row = &carpet.densities[k * carpet.nx..(k + 1) * carpet.nx];
    let (a, b) = peaks(row);
    assert!((a - 0.3).abs() <= 0.02 && (b - 0.7).abs() <= 0.02, "peaks {a} {b}");
}

#[test]
fn fig4_preset_shows_double_revival() {
    let dir = tempfile::tempdir().unwrap();
    let out = movingwell(dir.path(), &["--preset", "fig4", "simulate"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("65 slices x 1024 points"));
    assert_double_revival(dir.path(), "fig4", 2.75e-15, 1e-9);
    let csv = fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x,re,im,density"));
    assert_eq!(lines.count(), 65 * 1024);
}

#[test]
fn fig8_preset_revives_in_two_nanometre_well() {
    let dir = tempfile::tempdir().unwrap();
    let out = movingwell(dir.path(), &["--preset", "fig8", "simulate"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_double_revival(dir.path(), "fig8", 5.5e-15, 2e-9);
}

#[test]
fn fig10_preset_is_slowly_accelerating() {
    let dir = tempfile::tempdir().unwrap();
    let out = movingwell(dir.path(), &["--preset", "fig10", "check", "--t1", "1.1e-14"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("verdict: pass"), "{}", stdout(&out));
}

#[test]
fn config_errors_exit_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "trajectory = fixed\nw0 = 1\nwidht = 2\n").unwrap();
    let out = movingwell(dir.path(), &["--config", "bad.cfg", "check", "--t1", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("bad.cfg:3: unknown key `widht`"),
        "{}",
        stderr(&out)
    );

    fs::write(dir.path().join("broken.cfg"), "trajectory = fixed\n\nw0 1\n").unwrap();
    let out = movingwell(dir.path(), &["--config", "broken.cfg", "check", "--t1", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("broken.cfg:3:"));

    let out = movingwell(
        dir.path(),
        &["--preset", "fig4", "--units", "natural", "check", "--t1", "1"],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = movingwell(dir.path(), &["check", "--t1", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn collision_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.cfg"),
        "trajectory = linear\nw0 = 1\nv2 = -1\nn_points = 128\nsteps_per_unit = 256\nt_max = 2\nn_t = 5\n",
    )
    .unwrap();
    let out = movingwell(dir.path(), &["--config", "c.cfg", "simulate"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

fn t_rev_line(s: &str) -> f64 {
    s.lines()
        .find_map(|l| l.strip_prefix("t_rev = "))
        .expect("t_rev line")
        .parse()
        .unwrap()
}

#[test]
fn revive_static_nanometre_box() {
    let dir = tempfile::tempdir().unwrap();
    let out = movingwell(
        dir.path(),
        &["--preset", "fig4", "revive", "1", "2", "--field", "half.csv"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let t = t_rev_line(&stdout(&out));
    assert!((t - 2.75e-15).abs() <= 1e-3 * 2.75e-15, "{t}");
    let text = fs::read_to_string(dir.path().join("half.csv")).unwrap();
    assert!(text.starts_with("x,re,im,density\n"));
    assert_eq!(text.lines().count(), 1 + 1024);
}

const NATURAL_EXPANDING: &str = "units = natural\ntrajectory = linear\nw0 = 1\nv2 = 1\nn_points = 512\n";

#[test]
fn unreachable_revival_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.cfg"), NATURAL_EXPANDING).unwrap();
    let out = movingwell(dir.path(), &["--config", "e.cfg", "revive", "2", "1"]);
    assert_eq!(out.status.code(), Some(5));
    // sup tau' = pi / 2
    assert!(
        stderr(&out).contains("supremum is 1.5707963267948966e0"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn revive_zero_echoes_packet() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("s.cfg"),
        "trajectory = fixed\nw0 = 1\nn_points = 401\npacket_center = 0.4\npacket_width = 0.05\n",
    )
    .unwrap();
    let out = movingwell(
        dir.path(),
        &["--config", "s.cfg", "revive", "0", "1", "--field", "echo.csv"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!((t_rev_line(&stdout(&out))).abs() < 1e-300);
    let text = fs::read_to_string(dir.path().join("echo.csv")).unwrap();
    let (c, s) = (0.4, 0.05);
    for line in text.lines().skip(2).take(398) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let gauss = (-(v[0] - c).powi(2) / (2.0 * s * s)).exp() / (2.0 * PI * s * s).sqrt();
        assert!((v[3] - gauss).abs() < 1e-9 * 8.0, "x={} {} vs {}", v[0], v[3], gauss);
        assert!(v[2].abs() < 1e-12);
    }
}

#[test]
fn schedule_static_natural_box() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("s.cfg"),
        "units = natural\ntrajectory = fixed\nw0 = 1\n",
    )
    .unwrap();
    let out = movingwell(
        dir.path(),
        &["--config", "s.cfg", "schedule", "--q-max", "3", "--t-max", "1"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p/q,tau_prime,t_rev"));
    let rows: Vec<(String, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].to_string(), cols[2].parse().unwrap())
        })
        .collect();
    let names: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    // reachable tau' run up to pi/2 at t = 1
    assert_eq!(names, ["1/3", "1/2", "2/3", "1/1", "4/3", "3/2"]);
    for ((_, t), tp) in rows.iter().zip([1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 4.0 / 3.0, 1.5]) {
        assert!((t - 2.0 * tp / PI).abs() < 1e-12);
    }
}

#[test]
fn transform_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.cfg"), NATURAL_EXPANDING).unwrap();
    let out = movingwell(
        dir.path(),
        &["--config", "e.cfg", "revive", "1", "3", "--field", "lab.csv"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let t = t_rev_line(&stdout(&out)).to_string();
    let there = movingwell(
        dir.path(),
        &[
            "--config",
            "e.cfg",
            "transform",
            "--direction",
            "to-comoving",
            "--t",
            &t,
            "--input",
            "lab.csv",
            "--output",
            "co.csv",
        ],
    );
    assert!(there.status.success(), "{}", stderr(&there));
    assert!(fs::read_to_string(dir.path().join("co.csv")).unwrap().starts_with("y,"));
    let back = movingwell(
        dir.path(),
        &[
            "--config",
            "e.cfg",
            "transform",
            "--direction",
            "to-lab",
            "--t",
            &t,
            "--input",
            "co.csv",
            "--output",
            "back.csv",
        ],
    );
    assert!(back.status.success(), "{}", stderr(&back));
    let parse = |name: &str| -> Vec<Vec<f64>> {
        fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    };
    let (a, b) = (parse("lab.csv"), parse("back.csv"));
    assert_eq!(a.len(), b.len());
    let worst = a
        .iter()
        .zip(&b)
        .map(|(u, v)| (u[1] - v[1]).hypot(u[2] - v[2]))
        .fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst}");

    // wrong frame for the direction is an input error
    let wrong = movingwell(
        dir.path(),
        &[
            "--config",
            "e.cfg",
            "transform",
            "--direction",
            "to-lab",
            "--t",
            &t,
            "--input",
            "lab.csv",
            "--output",
            "x.csv",
        ],
    );
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn check_linear_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.cfg"), NATURAL_EXPANDING).unwrap();
    let out = movingwell(dir.path(), &["--config", "e.cfg", "check", "--t1", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("max margin r = 0.000000e0"), "{text}");
    assert!(text.contains("verdict: pass"));
}

const SMALL: &str = "trajectory = sinusoidal\nw0 = 1\namplitude = 0.1\nomega = 2\n\
                     n_points = 128\nsteps_per_unit = 512\nt_max = 0.5\nn_t = 9\noutput = run\n";

#[test]
fn binary_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.cfg"), SMALL).unwrap();
    let first = movingwell(dir.path(), &["--config", "s.cfg", "simulate"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let a = fs::read(dir.path().join("run.bin")).unwrap();
    let again = movingwell(dir.path(), &["--config", "s.cfg", "simulate"]);
    assert!(again.status.success());
    assert_eq!(a, fs::read(dir.path().join("run.bin")).unwrap());
    let carpet = read_binary(&dir.path().join("run.bin"));
    assert_eq!((carpet.nx, carpet.nt), (128, 9));
}

#[test]
fn sweep_matches_individual_runs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.cfg"), SMALL).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_movingwell"))
        .args(["--config", "s.cfg", "simulate", "--sweep", "omega=1,2,3"])
        .current_dir(dir.path())
        .env("MOVINGWELL_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 3);
    let single = movingwell(dir.path(), &["--config", "s.cfg", "simulate"]);
    assert!(single.status.success());
    assert_eq!(
        fs::read(dir.path().join("run-omega-2.bin")).unwrap(),
        fs::read(dir.path().join("run.bin")).unwrap()
    );
    for w in ["1", "3"] {
        assert!(dir.path().join(format!("run-omega-{w}.meta")).exists());
    }
    let bad = movingwell(dir.path(), &["--config", "s.cfg", "simulate", "--sweep", "omegaa=1,2"]);
    assert_eq!(bad.status.code(), Some(2));
}
