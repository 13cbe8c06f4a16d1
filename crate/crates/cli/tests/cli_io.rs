//! File formats, exit codes, and error reporting of the command line.

use std::fs;
use std::process::Command;

fn gyrolab(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gyrolab"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

const Z4_TBL: &str = "gyrotable v1 n=4\n# name: Z4\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n";

#[test]
fn table_round_trip_plain_and_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z4.tbl"), Z4_TBL).unwrap();
    // quotient by the trivial subgroup rewrites the carrier unchanged.
    let out = gyrolab(
        dir.path(),
        &["quotient", "--table", "z4.tbl", "--sub", "0", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(0));
    let rewritten = fs::read_to_string(dir.path().join("quotient.tbl")).unwrap();
    assert!(rewritten.contains("gyrotable v1 n=4"));
    assert!(rewritten.contains("1 2 3 0"));

    // The written table re-parses to the identical carrier.
    let out = gyrolab(
        dir.path(),
        &["verify", "--table", "quotient.tbl", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(0));

    // The JSON mirror parses to the same table.
    let out = gyrolab(
        dir.path(),
        &[
            "quotient",
            "--table",
            "quotient.json",
            "--sub",
            "0",
            "--out",
            "sub",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let again = fs::read_to_string(dir.path().join("sub/quotient.tbl")).unwrap();
    let body = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&rewritten), body(&again));
}

#[test]
fn malformed_files_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.tbl"), "gyrotable v1 n=2\n0 1\n1 x\n").unwrap();
    let out = gyrolab(dir.path(), &["verify", "--table", "bad.tbl", "--out", "."]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("3:3"), "want line:col in {stderr}");

    fs::write(dir.path().join("oor.tbl"), "gyrotable v1 n=2\n0 1\n1 5\n").unwrap();
    let out = gyrolab(dir.path(), &["verify", "--table", "oor.tbl", "--out", "."]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));

    fs::write(
        dir.path().join("short.tbl"),
        "gyrotable v1 n=3\n0 1 2\n1 2 0\n",
    )
    .unwrap();
    let out = gyrolab(
        dir.path(),
        &["verify", "--table", "short.tbl", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_gyrogroup_tables_verify_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Parses fine, but entry (1,1) = 3 breaks the structure.
    fs::write(
        dir.path().join("corrupt.tbl"),
        "gyrotable v1 n=4\n0 1 2 3\n1 3 3 0\n2 3 0 1\n3 0 1 2\n",
    )
    .unwrap();
    let out = gyrolab(
        dir.path(),
        &["verify", "--table", "corrupt.tbl", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(doc["verdict"], "fail");
    // Some failing property carries a counterexample.
    let failing = doc["report"]["properties"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["status"] == "fail")
        .expect("a failing property");
    assert!(failing["counterexample"].is_object());

    // But other commands refuse the corrupt table as input.
    let out = gyrolab(
        dir.path(),
        &[
            "cosets",
            "--table",
            "corrupt.tbl",
            "--sub",
            "0,2",
            "--out",
            ".",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // No carrier selected.
    let out = gyrolab(dir.path(), &["verify", "--out", "."]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown subcommand (clap handles this one).
    let out = gyrolab(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Two carriers at once.
    let out = gyrolab(
        dir.path(),
        &["verify", "--mobius", "--cyclic", "4", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(2));
    // Probe at the identity is a rejected precondition.
    let out = gyrolab(
        dir.path(),
        &[
            "probe", "--mobius", "--x", "0", "--radius", "0.5", "--out", ".",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verification_failures_exit_one_with_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    // A non-subgyrogroup answer is a failed check.
    let out = gyrolab(
        dir.path(),
        &["subgyro", "--cyclic", "4", "--set", "0,1", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(dir.path().join("subgyro.json").exists());

    // The ill-defined quotient over an L-subgyrogroup of the first
    // non-degenerate order-8 fixture.
    let search = gyrolab(
        dir.path(),
        &[
            "search", "--order", "8", "--budget", "1000000", "--out", ".",
        ],
    );
    assert_eq!(search.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("search.json")).unwrap()).unwrap();
    assert_eq!(doc["complete"], false);
    // Budget exhaustion is strict-fatal.
    let strict = gyrolab(
        dir.path(),
        &[
            "search", "--order", "8", "--budget", "1000000", "--strict", "--out", ".",
        ],
    );
    assert_eq!(strict.status.code(), Some(1));

    // Every written table re-parses and re-validates.
    let reread = gyrolab(
        dir.path(),
        &["verify", "--table", "search-8-0.tbl", "--out", "sub"],
    );
    assert_eq!(reread.status.code(), Some(0));
}

#[test]
fn metric_artifact_carries_the_rho_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = gyrolab(
        dir.path(),
        &[
            "metric",
            "--cyclic",
            "4",
            "--sets",
            "0,1,2,3;0,2;0",
            "--out",
            ".",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("metric.json")).unwrap()).unwrap();
    assert_eq!(doc["subgroup"], serde_json::json!([0]));
    // Each element is its own coset; the distance from 0 to 1 doubles the
    // unit prenorm value.
    assert_eq!(doc["rho"][0][0], 0.0);
    assert_eq!(doc["rho"][0][1], 2.0);
    assert_eq!(doc["rho"][1][0], 2.0);
}

#[test]
fn product_carriers_verify_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = gyrolab(
        dir.path(),
        &["verify", "--product", "cyclic:4,cyclic:2", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(doc["carrier"]["kind"], "product");
    assert_eq!(doc["degenerate"], true);

    let out = gyrolab(
        dir.path(),
        &[
            "verify",
            "--product",
            "cyclic:4,mobius",
            "--samples",
            "1000",
            "--out",
            ".",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(doc["degenerate"], false);
    assert!(doc["degeneracy_witness"].is_array());
}

#[test]
fn finite_chains_and_artifacts_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = gyrolab(
        dir.path(),
        &[
            "chain",
            "--cyclic",
            "4",
            "--sets",
            "0,1,2,3;0,2;0",
            "--check",
            "prenorm",
            "--out",
            ".",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("chain.json")).unwrap()).unwrap();
    assert_eq!(doc["verdict"], "pass");

    let out = gyrolab(dir.path(), &["gyr-table", "--klein", "--out", "."]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("gyr-table.json")).unwrap())
            .unwrap();
    assert_eq!(doc["degenerate"], true);
    assert_eq!(doc["gyrations"][1][2][3], 3);

    let out = gyrolab(
        dir.path(),
        &["setcheck", "--cyclic", "4", "--exhaustive", "--out", "."],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("setcheck.json")).unwrap())
            .unwrap();
    assert_eq!(doc["triples_checked"], 4096);
    assert_eq!(doc["all_equivalent"], true);
}

#[test]
fn level_set_grid_csv_has_fixed_formatting() {
    let dir = tempfile::tempdir().unwrap();
    let out = gyrolab(
        dir.path(),
        &[
            "prenorm",
            "--mobius",
            "--depth",
            "5",
            "--grid",
            "16",
            "--sup-samples",
            "100",
            "--budget",
            "50",
            "--out",
            ".",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("prenorm-grid.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,N"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("prenorm.json")).unwrap())
            .unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u64, doc["grid_points"].as_u64().unwrap());
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        for field in fields {
            let v: f64 = field.parse().unwrap();
            // Fixed decimal with 12 significant digits round-trips within
            // one unit in the last place.
            assert!((v.abs() <= 2.0) && field.len() >= 12, "{field}");
        }
    }
}

#[test]
fn gyrolab_out_env_var_sets_the_default_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("artifacts");
    let out = Command::new(env!("CARGO_BIN_EXE_gyrolab"))
        .current_dir(dir.path())
        .env("GYROLAB_OUT", &target)
        .args(["verify", "--cyclic", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(target.join("verify.json").exists());
}
