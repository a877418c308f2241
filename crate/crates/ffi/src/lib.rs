//! C ABI for etymograph.
//!
//! Every function returns an [`EtgStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`etg_last_error_message`]. Handles are opaque and must be released with
//! their `_free` function; strings returned by the library with
//! [`etg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use etymograph::embeddings::{
    load_embeddings, save_embeddings, similarity, EmbeddingSet, SimilarityMode,
};
use etymograph::eval::{evaluate, read_synonym_file};
use etymograph::graph::{
    biadjacency, build_graph, graph_stats, parse_lexicon, read_lexicon_file, EtymologicalGraph,
    LexiconFormat, RootSplit,
};
use etymograph::linalg::{truncated_svd, Parallelism, SvdOptions};
use etymograph::Error;

/// Opaque lexicon graph.
pub struct EtgGraph(EtymologicalGraph);

/// Opaque set of word (or root) vectors.
pub struct EtgEmbeddings(EmbeddingSet);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    UnknownWord = 6,
    ZeroNorm = 7,
    Empty = 8,
    Numerical = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtgMode {
    Dot = 0,
    Cosine = 1,
}

impl From<EtgMode> for SimilarityMode {
    fn from(m: EtgMode) -> Self {
        match m {
            EtgMode::Dot => SimilarityMode::Dot,
            EtgMode::Cosine => SimilarityMode::Cosine,
        }
    }
}

/// Factorization settings for [`etg_embed`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EtgEmbedOptions {
    pub k: usize,
    pub seed: u64,
    pub oversampling: usize,
    pub power_iterations: usize,
    /// 0 = one per core, 1 = sequential and bit-reproducible
    pub threads: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EtgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => EtgStatus::Io,
            Error::Parse { .. } | Error::MalformedMatrix(_) => EtgStatus::Parse,
            Error::InvalidUtf8 { .. } => EtgStatus::InvalidUtf8,
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => {
                EtgStatus::InvalidArgument
            }
            Error::EmptyGraph | Error::EmptySample => EtgStatus::Empty,
            Error::UnknownWord(_) => EtgStatus::UnknownWord,
            Error::ZeroNorm(_) => EtgStatus::ZeroNorm,
            Error::Numerical(_) => EtgStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn null_pointer(name: &str) -> Failure {
    Failure(EtgStatus::NullPointer, format!("{name} is null"))
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `body`, recording the message of any failure or panic.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EtgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EtgStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            EtgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null_pointer(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(EtgStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null_pointer(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null_pointer(name));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| {
        Failure(
            EtgStatus::InvalidArgument,
            "string contains a NUL byte".into(),
        )
    })
}

fn format_for(char_roots: bool) -> LexiconFormat {
    LexiconFormat {
        split: if char_roots {
            RootSplit::Characters
        } else {
            RootSplit::Whitespace
        },
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn etg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Reads a `word<TAB>roots` lexicon file and builds its graph.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn etg_graph_from_file(
    path: *const c_char,
    char_roots: bool,
    out: *mut *mut EtgGraph,
) -> EtgStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let lexicon = read_lexicon_file(path, &format_for(char_roots))?;
        let graph = build_graph(&lexicon.entries)?;
        write_out(out, Box::into_raw(Box::new(EtgGraph(graph))), "out")
    })
}

/// Builds a graph from lexicon text held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn etg_graph_from_string(
    text: *const c_char,
    char_roots: bool,
    out: *mut *mut EtgGraph,
) -> EtgStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let lexicon = parse_lexicon(text.as_bytes(), &format_for(char_roots))?;
        let graph = build_graph(&lexicon.entries)?;
        write_out(out, Box::into_raw(Box::new(EtgGraph(graph))), "out")
    })
}

/// # Safety
/// `graph` must come from this library and not be freed already; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn etg_graph_free(graph: *mut EtgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Word, root and edge counts; any of the out pointers may be NULL.
///
/// # Safety
/// `graph` must be a live handle; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn etg_graph_counts(
    graph: *const EtgGraph,
    words: *mut usize,
    roots: *mut usize,
    edges: *mut usize,
) -> EtgStatus {
    guard(|| {
        let g = &ref_arg(graph, "graph")?.0;
        for (out, value) in [
            (words, g.word_count()),
            (roots, g.root_count()),
            (edges, g.edge_count()),
        ] {
            if !out.is_null() {
                out.write(value);
            }
        }
        Ok(())
    })
}

/// Graph statistics as a JSON object. Free the string with [`etg_string_free`].
///
/// # Safety
/// `graph` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn etg_graph_stats_json(
    graph: *const EtgGraph,
    out: *mut *mut c_char,
) -> EtgStatus {
    guard(|| {
        let g = &ref_arg(graph, "graph")?.0;
        let json = serde_json::to_string(&graph_stats(g))
            .map_err(|e| Failure(EtgStatus::Io, e.to_string()))?;
        write_out(out, into_c_string(json)?, "out")
    })
}

/// Default factorization settings: k = 300, seed 42, oversampling 10,
/// 4 power iterations, sequential.
#[no_mangle]
pub extern "C" fn etg_embed_options_default() -> EtgEmbedOptions {
    let d = SvdOptions::default();
    EtgEmbedOptions {
        k: 300,
        seed: 42,
        oversampling: d.oversampling,
        power_iterations: d.power_iterations,
        threads: 1,
    }
}

/// Factorizes the graph's biadjacency matrix and returns the word vectors.
///
/// # Safety
/// `graph` must be a live handle, `options` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn etg_embed(
    graph: *const EtgGraph,
    options: *const EtgEmbedOptions,
    out: *mut *mut EtgEmbeddings,
) -> EtgStatus {
    guard(|| {
        let g = &ref_arg(graph, "graph")?.0;
        let o = *ref_arg(options, "options")?;
        let svd_options = SvdOptions {
            oversampling: o.oversampling,
            power_iterations: o.power_iterations,
            parallelism: Parallelism::from_threads(o.threads),
        };
        let b = biadjacency(g)?;
        let svd = svd_options
            .parallelism
            .install(|| truncated_svd(&b.matrix, o.k, o.seed, &svd_options))?;
        let mut set = etymograph::embeddings::derive_embeddings(&svd, &b.word_index)?;
        set.provenance.source_graph_hash = Some(g.content_hash());
        write_out(out, Box::into_raw(Box::new(EtgEmbeddings(set))), "out")
    })
}

/// Loads vectors in the `N k` text format (plus `.meta` sidecar if present).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn etg_embeddings_load(
    path: *const c_char,
    out: *mut *mut EtgEmbeddings,
) -> EtgStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let (set, _) = load_embeddings(path)?;
        write_out(out, Box::into_raw(Box::new(EtgEmbeddings(set))), "out")
    })
}

/// Writes vectors to `path` and provenance to `path.meta`.
///
/// # Safety
/// `embeddings` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn etg_embeddings_save(
    embeddings: *const EtgEmbeddings,
    path: *const c_char,
) -> EtgStatus {
    guard(|| {
        let e = &ref_arg(embeddings, "embeddings")?.0;
        let path = str_arg(path, "path")?;
        save_embeddings(e, path)?;
        Ok(())
    })
}

/// # Safety
/// `embeddings` must come from this library and not be freed already; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn etg_embeddings_free(embeddings: *mut EtgEmbeddings) {
    if !embeddings.is_null() {
        drop(Box::from_raw(embeddings));
    }
}

/// Number of words and vector dimension; either out pointer may be NULL.
///
/// # Safety
/// `embeddings` must be a live handle; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn etg_embeddings_shape(
    embeddings: *const EtgEmbeddings,
    len: *mut usize,
    dimension: *mut usize,
) -> EtgStatus {
    guard(|| {
        let e = &ref_arg(embeddings, "embeddings")?.0;
        if !len.is_null() {
            len.write(e.len());
        }
        if !dimension.is_null() {
            dimension.write(e.dimension());
        }
        Ok(())
    })
}

/// Copies the vector of `word` into `buf`, which must hold at least
/// `dimension` doubles.
///
/// # Safety
/// `embeddings` must be a live handle, `word` a NUL-terminated string and
/// `buf` writable for `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn etg_embeddings_vector(
    embeddings: *const EtgEmbeddings,
    word: *const c_char,
    buf: *mut f64,
    buf_len: usize,
) -> EtgStatus {
    guard(|| {
        let e = &ref_arg(embeddings, "embeddings")?.0;
        let v = e.vector(str_arg(word, "word")?)?;
        if buf.is_null() {
            return Err(null_pointer("buf"));
        }
        if buf_len < v.len() {
            return Err(Failure(
                EtgStatus::BufferTooSmall,
                format!("buffer holds {buf_len} values, vector has {}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// Similarity of two words.
///
/// # Safety
/// `embeddings` must be a live handle, the words NUL-terminated strings and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn etg_similarity(
    embeddings: *const EtgEmbeddings,
    word1: *const c_char,
    word2: *const c_char,
    mode: EtgMode,
    out: *mut f64,
) -> EtgStatus {
    guard(|| {
        let e = &ref_arg(embeddings, "embeddings")?.0;
        let score = similarity(
            e,
            str_arg(word1, "word1")?,
            str_arg(word2, "word2")?,
            mode.into(),
        )?;
        write_out(out, score.value, "out")
    })
}

/// Evaluates the vectors against a synonym file and returns the report as
/// JSON. Free the string with [`etg_string_free`].
///
/// # Safety
/// `embeddings` must be a live handle, `synonyms_path` a NUL-terminated
/// string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn etg_evaluate_json(
    embeddings: *const EtgEmbeddings,
    synonyms_path: *const c_char,
    n_random: usize,
    seed: u64,
    mode: EtgMode,
    coverage: f64,
    out: *mut *mut c_char,
) -> EtgStatus {
    guard(|| {
        let e = &ref_arg(embeddings, "embeddings")?.0;
        let synonyms = read_synonym_file(str_arg(synonyms_path, "synonyms_path")?, e)?;
        let report = evaluate(e, &synonyms, n_random, seed, mode.into(), coverage)?;
        let json =
            serde_json::to_string(&report).map_err(|e| Failure(EtgStatus::Io, e.to_string()))?;
        write_out(out, into_c_string(json)?, "out")
    })
}

/// # Safety
/// `s` must be a string returned by this library and not freed already; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn etg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
