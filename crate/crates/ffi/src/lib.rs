//! C interface to `holoattr`.
//!
//! Maps and stable graphs are opaque handles owned by the caller and
//! released with the matching `*_free` function. Points of C^2 cross the
//! boundary as four doubles `{re x, im x, re y, im y}`. Every fallible call
//! returns an [`HaStatus`]; the message of the last failure on the calling
//! thread is available from [`ha_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holoattr::basin::sphere_map;
use holoattr::linalg::c;
use holoattr::parabolic::{characteristic_directions, expansion_check, DirectionSet, HomogeneousQuadratic};
use holoattr::stable::{graph_residual, local_stable_graph, GraphOptions, LocalGraph};
use holoattr::{find_fixed_point, AutoChain, Classification, Error, Map2, MapSpec, NewtonOptions, Point2};

/// Result codes. `HA_STATUS_OK` is zero; domain failures follow the
/// library's error conditions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MapFormat = 3,
    InvalidParams = 4,
    Overflow = 5,
    NoConvergence = 6,
    SingularDifferential = 7,
    NotASaddle = 8,
    DeltaTooLarge = 9,
    NotTangentToIdentity = 10,
    PoleHit = 11,
    NotInvertible = 12,
    BufferTooSmall = 13,
    Panic = 14,
    Other = 15,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaClassification {
    Attracting = 0,
    Repelling = 1,
    Saddle = 2,
    TangentToIdentity = 3,
    NeutralOther = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HaFixedPoint {
    pub location: [f64; 4],
    /// `{re l1, im l1, re l2, im l2}`, increasing modulus.
    pub eigenvalues: [f64; 4],
    pub classification: HaClassification,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HaExpansionReport {
    pub admissible: usize,
    pub violations: usize,
    pub min_ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HaDirection {
    pub direction: [f64; 4],
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub degenerate: bool,
    pub residual: f64,
}

/// A polynomial automorphism or forward-only polynomial map.
pub struct HaMap(MapSpec);

/// A local stable graph together with the map it was computed for.
pub struct HaGraph {
    graph: LocalGraph,
    chain: AutoChain,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let s = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> HaStatus {
    match e {
        Error::MapFormat(_) => HaStatus::MapFormat,
        Error::InvalidParams(_) => HaStatus::InvalidParams,
        Error::Overflow { .. } => HaStatus::Overflow,
        Error::NoConvergence { .. } => HaStatus::NoConvergence,
        Error::SingularDifferential { .. } => HaStatus::SingularDifferential,
        Error::NotASaddle { .. } => HaStatus::NotASaddle,
        Error::DeltaTooLarge { .. } => HaStatus::DeltaTooLarge,
        Error::NotTangentToIdentity { .. } => HaStatus::NotTangentToIdentity,
        Error::PoleHit { .. } => HaStatus::PoleHit,
        Error::NotInvertible => HaStatus::NotInvertible,
        _ => HaStatus::Other,
    }
}

fn fail(e: Error) -> HaStatus {
    set_error(&format!("{}: {e}", e.name()));
    status_of(&e)
}

fn guard(f: impl FnOnce() -> HaStatus) -> HaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside holoattr");
            HaStatus::Panic
        }
    }
}

fn null() -> HaStatus {
    set_error("null pointer argument");
    HaStatus::NullPointer
}

unsafe fn read_point(p: *const f64) -> Point2 {
    let s = std::slice::from_raw_parts(p, 4);
    Point2::from_reals([s[0], s[1], s[2], s[3]])
}

unsafe fn write_point(p: *mut f64, z: Point2) {
    let s = std::slice::from_raw_parts_mut(p, 4);
    s.copy_from_slice(&z.to_reals());
}

fn classification_code(c: Classification) -> HaClassification {
    match c {
        Classification::Attracting => HaClassification::Attracting,
        Classification::Repelling => HaClassification::Repelling,
        Classification::Saddle => HaClassification::Saddle,
        Classification::TangentToIdentity => HaClassification::TangentToIdentity,
        Classification::NeutralOther => HaClassification::NeutralOther,
    }
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn ha_status_name(status: HaStatus) -> *const c_char {
    let s: &'static CStr = match status {
        HaStatus::Ok => c"Ok",
        HaStatus::NullPointer => c"NullPointer",
        HaStatus::InvalidUtf8 => c"InvalidUtf8",
        HaStatus::MapFormat => c"MapFormat",
        HaStatus::InvalidParams => c"InvalidParams",
        HaStatus::Overflow => c"Overflow",
        HaStatus::NoConvergence => c"NoConvergence",
        HaStatus::SingularDifferential => c"SingularDifferential",
        HaStatus::NotASaddle => c"NotASaddle",
        HaStatus::DeltaTooLarge => c"DeltaTooLarge",
        HaStatus::NotTangentToIdentity => c"NotTangentToIdentity",
        HaStatus::PoleHit => c"PoleHit",
        HaStatus::NotInvertible => c"NotInvertible",
        HaStatus::BufferTooSmall => c"BufferTooSmall",
        HaStatus::Panic => c"Panic",
        HaStatus::Other => c"Other",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread. Valid until the next call
/// into the library from the same thread.
#[no_mangle]
pub extern "C" fn ha_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a map definition (JSON text).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ha_map_from_json(json: *const c_char, out: *mut *mut HaMap) -> HaStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return null();
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            set_error("map definition is not UTF-8");
            return HaStatus::InvalidUtf8;
        };
        match MapSpec::from_json_str(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(HaMap(m)));
                HaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `(x, y) -> (x^2 + c - y, x)`.
#[no_mangle]
pub extern "C" fn ha_map_henon(c: f64) -> *mut HaMap {
    Box::into_raw(Box::new(HaMap(MapSpec::Automorphism(AutoChain::henon(c)))))
}

/// # Safety
/// `map` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ha_map_free(map: *mut HaMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Evaluates the map at `input[4]`, writing `output[4]`.
///
/// # Safety
/// `map` must be a live handle; `input` and `output` must hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn ha_map_apply(map: *const HaMap, input: *const f64, output: *mut f64) -> HaStatus {
    guard(|| {
        if map.is_null() || input.is_null() || output.is_null() {
            return null();
        }
        match (*map).0.apply(read_point(input)) {
            Ok(w) => {
                write_point(output, w);
                HaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Newton search from `seed[4]`.
///
/// # Safety
/// `map` must be a live handle, `seed` must hold four doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn ha_fixed_point(map: *const HaMap, seed: *const f64, out: *mut HaFixedPoint) -> HaStatus {
    guard(|| {
        if map.is_null() || seed.is_null() || out.is_null() {
            return null();
        }
        match find_fixed_point(&(*map).0, read_point(seed), NewtonOptions::default()) {
            Ok(fp) => {
                let [l1, l2] = fp.eigenvalues;
                *out = HaFixedPoint {
                    location: fp.location.to_reals(),
                    eigenvalues: [l1.re, l1.im, l2.re, l2.im],
                    classification: classification_code(fp.classification),
                    residual: fp.residual,
                };
                HaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Local stable graph of the saddle found from `seed[4]`, over the disc of
/// radius `delta`.
///
/// # Safety
/// `map` must be a live handle, `seed` must hold four doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn ha_stable_graph(
    map: *const HaMap,
    seed: *const f64,
    delta: f64,
    out: *mut *mut HaGraph,
) -> HaStatus {
    guard(|| {
        if map.is_null() || seed.is_null() || out.is_null() {
            return null();
        }
        *out = ptr::null_mut();
        let chain = match (*map).0.as_automorphism() {
            Ok(c) => c.clone(),
            Err(e) => return fail(e),
        };
        let result = find_fixed_point(&chain, read_point(seed), NewtonOptions::default()).and_then(|fp| {
            let opts = GraphOptions {
                delta,
                ..GraphOptions::default()
            };
            local_stable_graph(&chain, &fp, opts)
        });
        match result {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(HaGraph { graph, chain }));
                HaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Invariance residual of the graph under its map.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ha_graph_residual(graph: *const HaGraph) -> f64 {
    if graph.is_null() {
        return f64::NAN;
    }
    let g = &*graph;
    graph_residual(&g.chain, &g.graph)
}

/// Number of graph-transform iterations used.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ha_graph_iterations(graph: *const HaGraph) -> usize {
    if graph.is_null() {
        return 0;
    }
    (*graph).graph.iterations
}

/// Number of sample points of the graph.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ha_graph_len(graph: *const HaGraph) -> usize {
    if graph.is_null() {
        return 0;
    }
    (*graph).graph.grid.len()
}

/// Copies up to `cap` sample points into `buf` (four doubles each);
/// `written` receives the number of points.
///
/// # Safety
/// `graph` must be a live handle and `buf` must hold `4 * cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ha_graph_points(graph: *const HaGraph, buf: *mut f64, cap: usize, written: *mut usize) -> HaStatus {
    guard(|| {
        if graph.is_null() || buf.is_null() || written.is_null() {
            return null();
        }
        let pts = (*graph).graph.points();
        if pts.len() > cap {
            *written = pts.len();
            set_error("buffer too small");
            return HaStatus::BufferTooSmall;
        }
        for (k, p) in pts.iter().enumerate() {
            write_point(buf.add(4 * k), *p);
        }
        *written = pts.len();
        HaStatus::Ok
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ha_graph_free(graph: *mut HaGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// `m`-th iterate of `z -> z / (1 + z)` in closed form.
///
/// # Safety
/// `out_re` and `out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ha_sphere_map(m: u64, z_re: f64, z_im: f64, out_re: *mut f64, out_im: *mut f64) -> HaStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return null();
        }
        match sphere_map(m, c(z_re, z_im)) {
            Ok(w) => {
                *out_re = w.re;
                *out_im = w.im;
                HaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Sampled expansion inequality of the blow-up map at sector width `epsilon`.
///
/// # Safety
/// `map` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ha_expansion_check(
    map: *const HaMap,
    epsilon: f64,
    trials: usize,
    seed: u64,
    out: *mut HaExpansionReport,
) -> HaStatus {
    guard(|| {
        if map.is_null() || out.is_null() {
            return null();
        }
        match expansion_check(&(*map).0, epsilon, trials, seed) {
            Ok(r) => {
                *out = HaExpansionReport {
                    admissible: r.admissible,
                    violations: r.violations,
                    min_ratio: r.min_ratio,
                };
                HaStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Characteristic directions of `(x^2 + 2xy + c y^2, -2xy - y^2)`.
/// Writes up to `cap` entries; `count` receives the number found, or
/// `SIZE_MAX` when every direction is characteristic.
///
/// # Safety
/// `buf` must hold `cap` entries and `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ha_normal_form_directions(
    c_re: f64,
    c_im: f64,
    buf: *mut HaDirection,
    cap: usize,
    count: *mut usize,
) -> HaStatus {
    guard(|| {
        if count.is_null() || (cap > 0 && buf.is_null()) {
            return null();
        }
        let set = characteristic_directions(&HomogeneousQuadratic::normal_form(c(c_re, c_im)));
        let dirs = match &set {
            DirectionSet::AllDirections => {
                *count = usize::MAX;
                return HaStatus::Ok;
            }
            DirectionSet::Directions(d) => d,
        };
        *count = dirs.len();
        if dirs.len() > cap {
            set_error("buffer too small");
            return HaStatus::BufferTooSmall;
        }
        for (k, d) in dirs.iter().enumerate() {
            *buf.add(k) = HaDirection {
                direction: d.direction.to_reals(),
                lambda_re: d.lambda.re,
                lambda_im: d.lambda.im,
                degenerate: d.degenerate,
                residual: d.residual,
            };
        }
        HaStatus::Ok
    })
}
