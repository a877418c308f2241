use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use etymograph_ffi::*;

const LEXICON: &str =
    "wood\tmu\nforest\tmu mu\ngrove\tmu lin\nlake\tshui\nriver\tshui chuan\nstream\tshui chuan\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = etg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn graph() -> *mut EtgGraph {
    let mut g = ptr::null_mut();
    let text = c(LEXICON);
    assert_eq!(
        unsafe { etg_graph_from_string(text.as_ptr(), false, &mut g) },
        EtgStatus::Ok
    );
    g
}

fn embed(g: *const EtgGraph, k: usize) -> *mut EtgEmbeddings {
    let mut options = etg_embed_options_default();
    options.k = k;
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { etg_embed(g, &options, &mut e) },
        EtgStatus::Ok,
        "{}",
        last_error()
    );
    e
}

#[test]
fn graph_counts_and_stats() {
    let g = graph();
    let (mut w, mut r, mut e) = (0, 0, 0);
    unsafe {
        assert_eq!(etg_graph_counts(g, &mut w, &mut r, &mut e), EtgStatus::Ok);
        assert_eq!((w, r, e), (6, 4, 9));
        let mut json = ptr::null_mut();
        assert_eq!(etg_graph_stats_json(g, &mut json), EtgStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        etg_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["word_count"], 6);
        assert_eq!(v["edge_count"], 9);
        etg_graph_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut g = ptr::null_mut();
    let missing = c("/nonexistent/lexicon.tsv");
    unsafe {
        assert_eq!(
            etg_graph_from_file(missing.as_ptr(), false, &mut g),
            EtgStatus::Io
        );
        assert!(g.is_null());
        assert_eq!(
            etg_graph_from_string(ptr::null(), false, &mut g),
            EtgStatus::NullPointer
        );
        assert!(last_error().contains("text"));
        let bad = c("word-without-tab\n");
        assert_eq!(
            etg_graph_from_string(bad.as_ptr(), false, &mut g),
            EtgStatus::Parse
        );
        assert!(last_error().contains("line 1"), "{}", last_error());
    }
    let g = graph();
    let mut options = etg_embed_options_default();
    options.k = 99;
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(etg_embed(g, &options, &mut e), EtgStatus::InvalidArgument);
        assert!(last_error().contains("k = 99"));
        etg_graph_free(g);
    }
}

#[test]
fn embed_vectors_and_similarity() {
    let g = graph();
    let e = embed(g, 2);
    unsafe {
        let (mut len, mut dim) = (0, 0);
        assert_eq!(etg_embeddings_shape(e, &mut len, &mut dim), EtgStatus::Ok);
        assert_eq!((len, dim), (6, 2));

        let mut buf = [0.0f64; 2];
        let river = c("river");
        let stream = c("stream");
        assert_eq!(
            etg_embeddings_vector(e, river.as_ptr(), buf.as_mut_ptr(), 2),
            EtgStatus::Ok
        );
        let mut small = [0.0f64; 1];
        assert_eq!(
            etg_embeddings_vector(e, river.as_ptr(), small.as_mut_ptr(), 1),
            EtgStatus::BufferTooSmall
        );

        // identical root sets give identical vectors, so cosine similarity 1
        let mut s = 0.0;
        assert_eq!(
            etg_similarity(e, river.as_ptr(), stream.as_ptr(), EtgMode::Cosine, &mut s),
            EtgStatus::Ok
        );
        assert!((s - 1.0).abs() < 1e-12);
        let mut dot = 0.0;
        assert_eq!(
            etg_similarity(e, river.as_ptr(), stream.as_ptr(), EtgMode::Dot, &mut dot),
            EtgStatus::Ok
        );
        assert!((dot - (buf[0] * buf[0] + buf[1] * buf[1])).abs() < 1e-12);

        let unknown = c("ocean");
        assert_eq!(
            etg_similarity(e, river.as_ptr(), unknown.as_ptr(), EtgMode::Dot, &mut s),
            EtgStatus::UnknownWord
        );
        etg_embeddings_free(e);
        etg_graph_free(g);
    }
}

#[test]
fn save_load_and_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = c(dir.path().join("v.txt").to_str().unwrap());
    let synonyms_path = dir.path().join("syn.tsv");
    std::fs::write(&synonyms_path, "river\tstream\nforest\tgrove\n").unwrap();
    let synonyms = c(synonyms_path.to_str().unwrap());

    let g = graph();
    let e = embed(g, 2);
    unsafe {
        assert_eq!(etg_embeddings_save(e, vectors.as_ptr()), EtgStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(
            etg_embeddings_load(vectors.as_ptr(), &mut loaded),
            EtgStatus::Ok
        );
        let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
        let w = c("grove");
        etg_embeddings_vector(e, w.as_ptr(), a.as_mut_ptr(), 2);
        etg_embeddings_vector(loaded, w.as_ptr(), b.as_mut_ptr(), 2);
        assert_eq!(a, b);

        let mut json = ptr::null_mut();
        let status = etg_evaluate_json(
            loaded,
            synonyms.as_ptr(),
            500,
            7,
            EtgMode::Dot,
            0.99,
            &mut json,
        );
        assert_eq!(status, EtgStatus::Ok, "{}", last_error());
        let report: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        etg_string_free(json);
        assert_eq!(report["synonym_pairs"], 2);
        assert_eq!(report["k"], 2);

        let status = etg_evaluate_json(
            loaded,
            synonyms.as_ptr(),
            500,
            7,
            EtgMode::Dot,
            1.5,
            &mut json,
        );
        assert_eq!(status, EtgStatus::InvalidArgument);

        etg_embeddings_free(loaded);
        etg_embeddings_free(e);
        etg_graph_free(g);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        etg_graph_free(ptr::null_mut());
        etg_embeddings_free(ptr::null_mut());
        etg_string_free(ptr::null_mut());
    }
}

/// Compiles a small C program against the generated header and the static
/// library and runs it.
#[test]
fn c_program_links_against_header() {
    let crate_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = crate_dir.join("include");
    let header = std::fs::read_to_string(header_dir.join("etymograph.h")).unwrap();
    for name in [
        "etg_graph_from_string",
        "etg_embed",
        "etg_similarity",
        "etg_last_error_message",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }

    // target/<profile>/deps/<this test> → target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libetymograph_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <math.h>
#include "etymograph.h"

int main(void) {
    EtgGraph *g = NULL;
    if (etg_graph_from_string("river\tshui chuan\nstream\tshui chuan\nwood\tmu\n", false, &g) != ETG_STATUS_OK) return 1;
    size_t words = 0;
    etg_graph_counts(g, &words, NULL, NULL);
    if (words != 3) return 2;
    EtgEmbedOptions o = etg_embed_options_default();
    o.k = 2;
    EtgEmbeddings *e = NULL;
    if (etg_embed(g, &o, &e) != ETG_STATUS_OK) return 3;
    double s = 0.0;
    if (etg_similarity(e, "river", "stream", ETG_MODE_COSINE, &s) != ETG_STATUS_OK) return 4;
    if (fabs(s - 1.0) > 1e-12) return 5;
    if (etg_similarity(e, "river", "sea", ETG_MODE_DOT, &s) != ETG_STATUS_UNKNOWN_WORD) return 6;
    printf("%s\n", etg_last_error_message());
    etg_embeddings_free(e);
    etg_graph_free(g);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler (cc) is required for this test");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "C program exited with {:?}",
        out.status.code()
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("sea"));
}
