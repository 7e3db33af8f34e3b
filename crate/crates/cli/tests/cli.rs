use std::process::Command;

fn quatvar(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quatvar")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn constants_json() {
    let (code, out) = quatvar(&["constants"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["constants"]["theta_norm_sq"], 0.5);
}

#[test]
fn verify_fix_prop() {
    let (code, out) = quatvar(&["verify", "fix-prop", "--N", "2", "--samples", "50"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["params"]["config"]["ramified_prime"], 23);
    assert!(v["params"]["build"].as_str().unwrap().starts_with("0.1.0"));
}

#[test]
fn theta_csv() {
    let (code, out) = quatvar(&["theta", "--dmax", "20"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "D,mu_E1,mu_E2,mu_E3,muPsi_a,muPsi_b");
    assert!(lines.next().unwrap().starts_with("0,3,3,3,"));
}

#[test]
fn exit_codes() {
    assert_eq!(quatvar(&["--ramified-prime", "31", "classset"]).0, 2);
    assert_eq!(quatvar(&["--ramified-prime", "29", "classset"]).0, 2);
    assert_eq!(quatvar(&["verify", "seesaw", "--N", "5"]).0, 2);
    assert_eq!(quatvar(&["no-such-command"]).0, 2);
}
