mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{planted_synonym_lexicon, write_file};

fn etymograph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etymograph"))
        .args(args)
        .current_dir(dir)
        .env_remove("ETYMOGRAPH_CONFIG")
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const TINY: &str =
    "wood\tmu\nforest\tmu mu\ngrove\tmu lin\nlake\tshui\nriver\tshui chuan\nstream\tshui chuan\n";

#[test]
fn stats_two_line_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "lex.tsv", "木\t木\n林\t木 木\n");
    let o = etymograph(dir.path(), &["stats", "--lexicon", "lex.tsv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["word_count"], 2);
    assert_eq!(v["edge_count"], 2);
}

#[test]
fn missing_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = etymograph(dir.path(), &["stats", "--lexicon", "absent.tsv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.tsv"), "{}", stderr(&o));
    assert!(stderr(&o).contains("read lexicon"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(etymograph(dir.path(), &["unknown"]).status.code(), Some(2));
    assert_eq!(
        etymograph(dir.path(), &["embed", "--k", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        etymograph(dir.path(), &["eval", "--coverage", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        etymograph(dir.path(), &["sweep", "--dims", "4,,8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(etymograph(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn embed_tiny_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "lex.tsv", TINY);
    let o = etymograph(
        dir.path(),
        &[
            "embed",
            "--lexicon",
            "lex.tsv",
            "--k",
            "2",
            "--out",
            "v.txt",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("v.txt")).unwrap();
    assert_eq!(text.lines().next(), Some("6 2"));
    assert_eq!(text.lines().count(), 7);
    let meta = std::fs::read_to_string(dir.path().join("v.txt.meta")).unwrap();
    assert!(meta.contains("source_graph_hash="));
    assert!(meta.contains("config.k=2"));
}

#[test]
fn embed_rank_out_of_range() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "lex.tsv", TINY);
    let o = etymograph(
        dir.path(),
        &[
            "embed",
            "--lexicon",
            "lex.tsv",
            "--k",
            "9",
            "--out",
            "v.txt",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("factorize"));
    assert!(stderr(&o).contains("outside [1, 4]"), "{}", stderr(&o));
}

#[test]
fn embed_and_eval_are_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let (text, pairs) = planted_synonym_lexicon(1);
    write_file(dir.path(), "lex.tsv", &text);
    let syn: String = pairs.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect();
    write_file(dir.path(), "syn.tsv", &syn);
    for out in ["a.txt", "b.txt"] {
        let o = etymograph(
            dir.path(),
            &[
                "embed",
                "--lexicon",
                "lex.tsv",
                "--k",
                "16",
                "--seed",
                "3",
                "--threads",
                "1",
                "--out",
                out,
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.txt"), read("b.txt"));
    assert_eq!(read("a.txt.meta"), read("b.txt.meta"));

    for out in ["r1.json", "r2.json"] {
        let o = etymograph(
            dir.path(),
            &[
                "eval",
                "--embeddings",
                "a.txt",
                "--synonyms",
                "syn.tsv",
                "--n-random",
                "5000",
                "--out",
                out,
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(read("r1.json"), read("r2.json"));
    assert_eq!(read("r1.dot.random.csv"), read("r2.dot.random.csv"));
    assert_eq!(read("r1.dot.synonyms.csv"), read("r2.dot.synonyms.csv"));
    let report: serde_json::Value = serde_json::from_slice(&read("r1.json")).unwrap();
    assert_eq!(report["provenance"], "sidecar");
    assert_eq!(report["reports"].as_array().unwrap().len(), 1);
}

#[test]
fn external_embeddings_report_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let mut vectors = String::from("120 3\n");
    for i in 0..120 {
        let x = i as f64;
        vectors.push_str(&format!(
            "w{i} {} {} {}\n",
            (x * 0.7).sin(),
            (x * 1.3).cos(),
            (x * 0.1).sin() + 0.5
        ));
    }
    write_file(dir.path(), "ext.txt", &vectors);
    write_file(dir.path(), "syn.tsv", "w1\tw2\nw3\tw4\nw5\tmissing\n");
    let o = etymograph(
        dir.path(),
        &[
            "eval",
            "--embeddings",
            "ext.txt",
            "--synonyms",
            "syn.tsv",
            "--n-random",
            "2000",
            "--mode",
            "cosine",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["provenance"], "external");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports[0]["mode"], "cosine");
    assert_eq!(reports[1]["mode"], "dot");
    assert_eq!(reports[0]["synonym_stats"]["dropped_oov"], 1);
}

#[test]
fn sweep_dims_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (text, pairs) = planted_synonym_lexicon(2);
    write_file(dir.path(), "lex.tsv", &text);
    let syn: String = pairs.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect();
    write_file(dir.path(), "syn.tsv", &syn);
    let one = etymograph(
        dir.path(),
        &[
            "sweep",
            "--lexicon",
            "lex.tsv",
            "--synonyms",
            "syn.tsv",
            "--dims",
            "4",
        ],
    );
    assert!(one.status.success(), "{}", stderr(&one));
    assert_eq!(stdout(&one).lines().count(), 2);
    let two = etymograph(
        dir.path(),
        &[
            "sweep",
            "--lexicon",
            "lex.tsv",
            "--synonyms",
            "syn.tsv",
            "--dims",
            "8,4",
            "--out",
            "s.csv",
        ],
    );
    assert!(two.status.success(), "{}", stderr(&two));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let ks: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ks, ["4", "8"]);
    let meta = std::fs::read_to_string(dir.path().join("s.csv.meta")).unwrap();
    assert!(meta.contains("dims=4,8"));
}

#[test]
fn bench_generated_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let o = etymograph(
        dir.path(),
        &[
            "bench",
            "--generate",
            "200x400",
            "--density",
            "0.02",
            "--dims",
            "4,8,16",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] > 0.0));
    assert!(rows.windows(2).all(|w| w[1][2] <= w[0][2]));
}

#[test]
fn config_file_and_env_precedence() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "lex.tsv", TINY);
    write_file(
        dir.path(),
        "run.conf",
        "lexicon=lex.tsv\nk=3\nout=from_config.txt\n",
    );
    let o = Command::new(env!("CARGO_BIN_EXE_etymograph"))
        .args(["embed", "--k", "2"])
        .current_dir(dir.path())
        .env("ETYMOGRAPH_CONFIG", "run.conf")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("from_config.txt")).unwrap();
    assert!(text.starts_with("6 2\n"));

    write_file(dir.path(), "bad.conf", "k=3\nflavour=sweet\n");
    let o = etymograph(
        dir.path(),
        &["stats", "--lexicon", "lex.tsv", "--config", "bad.conf"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
}
