// Copyright 2026 The qacc-lab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qacc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qacc")).args(args).current_dir(dir).output().expect("spawn qacc")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn fixtures() -> TempDir {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "h.qc", "circuit n=1 aux=0\nlayer { H[0] }\n");
    write(d.path(), "x.qc", "circuit n=1 aux=0 context=rat2\nlayer { X[0] }\n");
    write(d.path(), "bad.qc", "circuit n=1 aux=0\nlayer { H[0]; H[0] }\n");
    write(d.path(), "syntax.qc", "circuit n=1 aux=0\nlayer { H(0) }\n");
    write(d.path(), "wide.qc", "circuit n=21 aux=0\n");
    let mut deep = String::from("circuit n=2 aux=0\n");
    for _ in 0..11 {
        deep.push_str("cnotlayer { 0->1 }\n");
    }
    write(d.path(), "deep.qc", &deep);
    let table: Vec<String> = (0..512u32).map(|v| (v ^ 1).to_string()).collect();
    let lines: Vec<String> = (0..9).map(|l| l.to_string()).collect();
    write(d.path(), "perm9.qc", &format!("circuit n=9 aux=0\nlayer {{ PERM[{} : {}] }}\n", lines.join(","), table.join(",")));
    d
}

#[test]
fn exit_code_matrix() {
    let d = fixtures();
    let cases: [(&[&str], i32); 20] = [
        (&["accept", "--circuit", "h.qc", "--input", "0", "--target", "1", "--mode", "N"], 0),
        (&["accept", "--circuit", "x.qc", "--input", "0", "--target", "0", "--mode", "N"], 1),
        (&["accept", "--circuit", "h.qc", "--input", "0", "--target", "1", "--mode", "E"], 1),
        (&["accept", "--circuit", "h.qc", "--input", "0", "--target", "1", "--mode", "B"], 2),
        (&["accept", "--circuit", "x.qc", "--input", "0", "--target", "1", "--mode", "B"], 0),
        (&["check", "--builder", "modq_from_mq", "--n", "3", "--q", "3"], 0),
        (&["check", "--builder", "no_such_builder", "--n", "1", "--q", "3"], 2),
        (&["check", "--builder", "modq_from_mq", "--n", "2", "--q", "1"], 2),
        (&["check", "--builder", "mq_via_conjugation", "--n", "5", "--q", "5"], 3),
        (&["simulate", "--circuit", "h.qc", "--input", "0"], 0),
        (&["simulate", "--circuit", "missing.qc", "--input", "0"], 2),
        (&["simulate", "--circuit", "syntax.qc", "--input", "0"], 2),
        (&["simulate", "--circuit", "bad.qc", "--input", "0"], 2),
        (&["simulate", "--circuit", "wide.qc", "--input", "000000000000000000000"], 3),
        (&["amplitude", "--circuit", "h.qc", "--input", "01", "--target", "1"], 2),
        (&["graph", "--circuit", "deep.qc", "--input", "10", "--target", "10", "--method", "dp"], 0),
        (&["graph", "--circuit", "deep.qc", "--input", "10", "--target", "10", "--method", "paths"], 3),
        (&["metrics", "--circuit", "perm9.qc", "--input", "000000000"], 3),
        (&["build", "--builder", "f_from_fq", "--n", "2", "--q", "3"], 0),
        (&["simulate", "--circuit", "h.qc", "--input", "0", "--frobnicate"], 2),
    ];
    for (args, code) in cases {
        let out = qacc(args, d.path());
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn accept_prints_decision() {
    let d = fixtures();
    let out = qacc(&["accept", "--circuit", "h.qc", "--input", "0", "--target", "1", "--mode", "N"], d.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "accept\n");
    let out = qacc(&["check", "--builder", "modq_from_mq", "--n", "3", "--q", "3"], d.path());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("equivalent\n"));
}

#[test]
fn diagnostics_carry_positions() {
    let d = fixtures();
    let out = qacc(&["simulate", "--circuit", "syntax.qc", "--input", "0"], d.path());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2:10:"), "{err}");
    assert!(err.contains("expected `[`"), "{err}");
}

#[test]
fn dp_and_paths_agree() {
    let d = fixtures();
    write(d.path(), "mix.qc", "circuit n=3 aux=0\nlayer { H[0]; H[2] }\ncnotlayer { 0->1 }\nlayer { TOF[0,1->2] }\nlayer { H[1] }\n");
    for z in ["000", "011", "101", "110", "111"] {
        let dp = qacc(&["graph", "--circuit", "mix.qc", "--input", "001", "--target", z, "--method", "dp", "--json"], d.path());
        let paths = qacc(&["graph", "--circuit", "mix.qc", "--input", "001", "--target", z, "--method", "paths", "--json"], d.path());
        let a: serde_json::Value = serde_json::from_slice(&dp.stdout).unwrap();
        let b: serde_json::Value = serde_json::from_slice(&paths.stdout).unwrap();
        assert_eq!(a["amplitude"], b["amplitude"], "z={z}");
        let sim = qacc(&["amplitude", "--circuit", "mix.qc", "--input", "001", "--target", z, "--json"], d.path());
        let s: serde_json::Value = serde_json::from_slice(&sim.stdout).unwrap();
        assert_eq!(a["amplitude"]["scalar"], s["amplitude"]["scalar"], "z={z}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let d = fixtures();
    write(d.path(), "mix.qc", "circuit n=3 aux=1\nlayer { H[0]; H[2] }\ncnotlayer { 0->1; 2->3 }\nlayer { FAN[1,3<-2] }\n");
    let runs: [&[&str]; 5] = [
        &["simulate", "--circuit", "mix.qc", "--input", "101", "--json"],
        &["metrics", "--circuit", "mix.qc", "--input", "101", "--json"],
        &["graph", "--circuit", "mix.qc", "--input", "101", "--json"],
        &["check", "--builder", "mq_from_modq", "--n", "2", "--q", "3", "--json"],
        &["build", "--builder", "modhat", "--n", "2", "--q", "3", "--r", "1"],
    ];
    for args in runs {
        let a = qacc(args, d.path());
        let b = qacc(args, d.path());
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn context_file_is_resolved_next_to_circuit() {
    let d = fixtures();
    let sub = d.path().join("sub");
    std::fs::create_dir(&sub).unwrap();
    let ctx = qacc_core::algebra::AlgebraContext::rational(2).unwrap();
    write(&sub, "ctx.json", &qacc_core::algebra::json::context_to_json(&ctx));
    write(&sub, "c.qc", "circuit n=1 aux=0 context=\"ctx.json\"\nlayer { U [[0,1],[1,0]] [0] }\n");
    let out = qacc(&["accept", "--circuit", "sub/c.qc", "--input", "0", "--target", "1", "--mode", "B"], d.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
