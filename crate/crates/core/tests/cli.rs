use std::process::Command;

fn pcg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pcg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn analyze_reports_outcome_region_invariant() {
    let (code, out) = pcg(&[
        "analyze",
        "--numeric",
        "4",
        "--losing",
        "1",
        "--heaps",
        "5,1",
    ]);
    assert_eq!(code, 0);
    assert!(
        out.contains("outcome P")
            && out.contains("region Threshold")
            && out.contains("invariant 1")
    );
}

#[test]
fn verify_compression() {
    let (code, out) = pcg(&[
        "verify",
        "compression",
        "--N",
        "15",
        "--g",
        "2",
        "--bound",
        "8",
        "--n",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("512 positions, 0 counterexamples"));
}

#[test]
fn verify_json_is_a_list_of_reports() {
    let (code, out) = pcg(&["verify", "aes", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["suite"], "aes");
    assert_eq!(v[0]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn table_reproduction() {
    let (code, out) = pcg(&[
        "table", "--N", "15", "--g", "2", "--field", "0x11B", "--m", "6",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("| Compression modulus | 4 | 255 | 6 |"));
    assert!(out.contains("| Decomposition | [4] | [3, 5, 17] | [2, 3] |"));
}

#[test]
fn density_and_period_csv() {
    let dir = std::env::temp_dir().join(format!("pcg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let density = dir.join("density.csv");
    let (code, _) = pcg(&[
        "density",
        "--field",
        "0xB",
        "--n",
        "2",
        "--csv",
        density.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&density).unwrap();
    assert!(text.starts_with("spec,n,bound,total,losing,ratio,predicted\n"));
    assert!(text.contains(",2,,49,7,"));

    let period = dir.join("period.csv");
    let (code, _) = pcg(&[
        "period",
        "--numeric",
        "4",
        "--heaps",
        "3",
        "--j",
        "1",
        "--x-max",
        "16",
        "--game-tree",
        "--csv",
        period.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&period).unwrap();
    assert!(text.starts_with("context,j,x,outcome_x,outcome_x_plus_m,equal\n3,1,5,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn play_from_the_command_line() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcg"))
        .args(["play", "--numeric", "4", "--heaps", "5,3"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"2 1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Engine: heap 1 -> 3, now (3,3)"));
    assert!(text.contains("Engine wins"));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(pcg(&["analyze", "--numeric", "4"]).0, 2);
    assert_eq!(
        pcg(&["verify", "compression", "--N", "15", "--g", "3"]).0,
        2
    );
}
