use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use debm::report::{read_mv_dump, read_report, read_trace};
use debm_core::trace::CellTag;

fn debm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_fsa_on_static_clip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = debm(&[
        "run", "--algo", "fsa", "--format", "synth", "--input", "static", "--frames", "10", "--width", "64",
        "--height", "64", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("(9 infinite)"));
    let report = read_report(&out).unwrap();
    assert_eq!(report.infinite_psnr_frames, 9);
    assert_eq!(report.mean_psnr, None);
    assert_eq!(report.per_frame.len(), 9);
}

#[test]
fn fsa_self_comparison() {
    // Blocks at (0|16, 0|16): windows of 64, 120, 120 and 225 candidates.
    let o = debm(&[
        "compare", "--algos", "fsa,fsa", "--format", "synth", "--input", "random-texture", "--motion", "1,2",
        "--frames", "3", "--width", "46", "--height", "46", "--block-size", "16",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cols: Vec<_> = row.split_whitespace().collect();
        assert_eq!(cols[2], "0.000");
        assert_eq!(cols[3], "132.250");
    }
}

#[test]
fn run_debm_uses_few_search_points_and_writes_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let dump = dir.path().join("mv.csv");
    let o = debm(&[
        "run", "--format", "synth", "--input", "random-texture", "--motion", "3,-2", "--frames", "6", "--seed",
        "5", "--out", s(&out), "--mv-dump", s(&dump),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let records = read_mv_dump(&dump).unwrap();
    assert_eq!(records.len(), 5 * 99);
    let mean = records.iter().map(|r| r.evaluations as f64).sum::<f64>() / records.len() as f64;
    assert!(mean < 25.0, "{mean}");
}

#[test]
fn compare_all_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.json");
    let o = debm(&[
        "compare", "--format", "synth", "--input", "random-texture", "--motion", "2,1", "--frames", "4", "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    let mut ranks: Vec<u64> = rows.iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    ranks.sort_unstable();
    assert_eq!(ranks, [1, 2, 3, 4]);
    assert_eq!(rows[0]["algorithm"], "fsa");
    assert_eq!(rows[0]["d_psnr"], 0.0);
}

#[test]
fn compare_against_stored_reference() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("fsa.json");
    let common = ["--format", "synth", "--input", "random-texture", "--motion", "1,0", "--frames", "3"];
    let mut args = vec!["run", "--algo", "fsa", "--out", s(&reference)];
    args.extend(common);
    assert!(debm(&args).status.success());
    let mut args = vec!["compare", "--algos", "tss", "--reference", s(&reference)];
    args.extend(common);
    let o = debm(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("tss"));

    let mut args = vec!["compare", "--algos", "tss,ds"];
    args.extend(common);
    let o = debm(&args);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("reference"));
}

#[test]
fn trace_fsa_and_debm() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["--format", "synth", "--input", "random-texture", "--motion", "3,-2", "--frames", "3"];
    for (algo, file) in [("fsa", "fsa.json"), ("debm", "debm.json")] {
        let out = dir.path().join(file);
        let mut args = vec!["trace", "--algo", algo, "--trace-block", "64,48", "--frame", "2", "--out", s(&out)];
        args.extend(common);
        let o = debm(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let doc = read_trace(&out).unwrap();
        assert_eq!(doc.rows.len(), 15);
        assert!(doc.rows.iter().all(|r| r.len() == 15));
        let evaluated = doc.trace.count(CellTag::Evaluated);
        let cells = evaluated + doc.trace.count(CellTag::Estimated) + doc.trace.count(CellTag::Unvisited);
        assert_eq!(cells, 225);
        assert_eq!(doc.trace.minimum, doc.mv);
        assert_eq!(doc.rows.iter().flat_map(|r| r.chars()).filter(|&c| c == 'M').count(), 1);
        if algo == "fsa" {
            assert_eq!(evaluated, 225);
            assert_eq!((doc.mv.u, doc.mv.v, doc.sad), (3, -2, 0));
        } else {
            assert!((5..=40).contains(&evaluated));
            assert_eq!(doc.trace.eval_counts.iter().sum::<u32>(), doc.evaluations);
        }
    }
}

#[test]
fn trace_rejects_misaligned_block() {
    let o = debm(&["trace", "--format", "synth", "--input", "static", "--trace-block", "10,16"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("valid anchors") && err.contains("x in {0, 16"), "{err}");
}

#[test]
fn failures_exit_nonzero_and_leave_no_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let missing = dir.path().join("missing.y4m");
    let o = debm(&["run", "--input", s(&missing), "--out", s(&out)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.y4m"));
    assert!(!out.exists());

    // The dump path cannot be created, so the report written first is removed.
    let dump = dir.path().join("no/such/dir/mv.csv");
    let o = debm(&[
        "run", "--format", "synth", "--input", "static", "--frames", "2", "--out", s(&out), "--mv-dump", s(&dump),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn motion_beyond_search_range_is_rejected() {
    let o = debm(&["run", "--format", "synth", "--input", "translate", "--motion", "8,0"]);
    assert!(!o.status.success());
    let o = debm(&["run", "--format", "synth", "--input", "translate", "--motion", "3,0", "--search-range", "2"]);
    assert!(!o.status.success());
}

#[test]
fn y4m_raw_and_pgm_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (w, h, n) = (48usize, 32usize, 3usize);
    let frames: Vec<Vec<u8>> =
        (0..n).map(|t| (0..w * h).map(|i| ((i * 7 + t * 13) % 251) as u8).collect()).collect();
    let chroma = vec![128u8; w * h / 2];

    let mut y4m = format!("YUV4MPEG2 W{w} H{h} F25:1 Ip A1:1 C420jpeg\n").into_bytes();
    let mut raw = Vec::new();
    for (t, f) in frames.iter().enumerate() {
        y4m.extend_from_slice(b"FRAME\n");
        y4m.extend_from_slice(f);
        y4m.extend_from_slice(&chroma);
        raw.extend_from_slice(f);
        raw.extend_from_slice(&chroma);
        let mut pgm = format!("P5\n{w} {h}\n255\n").into_bytes();
        pgm.extend_from_slice(f);
        fs::write(dir.path().join(format!("f{t:03}.pgm")), pgm).unwrap();
    }
    fs::write(dir.path().join("a.y4m"), y4m).unwrap();
    fs::write(dir.path().join("a.yuv"), raw).unwrap();

    let run = |extra: &[&str]| {
        let out = dir.path().join(format!("r{}.json", extra.len()));
        let mut args = vec!["run", "--algo", "tss", "--block-size", "8", "--out", s(&out)];
        args.extend(extra);
        let o = debm(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        read_report(&out).unwrap()
    };
    let y = run(&["--format", "y4m", "--input", s(&dir.path().join("a.y4m"))]);
    let pattern = dir.path().join("f%03d.pgm");
    let p = run(&["--format", "pgm", "--input", s(&pattern)]);
    let r = run(&["--format", "raw", "--input", s(&dir.path().join("a.yuv")), "--width", "48", "--height", "32"]);
    assert_eq!(y.per_frame.len(), 2);
    assert_eq!(y.per_frame, p.per_frame);
    assert_eq!(y.per_frame, r.per_frame);
}
