//! C ABI over the `nonrational` library.
//!
//! Objects are opaque handles freed by their `*_free` function. Functions
//! return an [`NrStatus`]; on failure [`nr_last_error`] describes the error
//! for the calling thread. Strings handed out are NUL-terminated, owned by
//! the caller and released with [`nr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nonrational::config::{derive_nonrationality, parse_script, NonRationalityCertificate, RealizationJson};
use nonrational::exactnum::{parse_rational, ExactText, OrderedField, QuadExt, Rational};
use nonrational::io::AnyRealization;
use nonrational::lawrence::{
    certify_lifting, collinearity_pattern, default_heights, infer_lines, lift_realization, recover_configuration,
    source_vectors, LabeledPolytope, LawrenceLifting,
};
use nonrational::surface::{
    build_pentagon_surface, combinatorial_violations, default_s144, default_s48, export_obj, reference_gadget,
    verify_flat_convex, QuadMesh, TripleMode,
};
use nonrational::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NrStatus {
    NrOk = 0,
    NrErrNull = 1,
    NrErrUtf8 = 2,
    NrErrParse = 3,
    NrErrInvalid = 4,
    NrErrDegenerate = 5,
    NrErrRationalRoot = 6,
    NrErrUnsupported = 7,
    NrErrVerification = 8,
    NrErrDimension = 9,
    NrErrIo = 10,
    NrErrPanic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: NrStatus, msg: impl Into<String>) -> NrStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> NrStatus {
    let status = match &e {
        Error::Parse { .. } => NrStatus::NrErrParse,
        Error::Invalid(_) => NrStatus::NrErrInvalid,
        Error::Degenerate(_) => NrStatus::NrErrDegenerate,
        Error::RationalRoot(_) => NrStatus::NrErrRationalRoot,
        Error::Unsupported(_) => NrStatus::NrErrUnsupported,
        Error::Verification(_) => NrStatus::NrErrVerification,
        Error::Dimension(_) => NrStatus::NrErrDimension,
        Error::Io(_) => NrStatus::NrErrIo,
    };
    fail(status, e.to_string())
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), NrStatus>) -> NrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NrStatus::NrOk
        }
        Ok(Err(s)) => s,
        Err(_) => fail(NrStatus::NrErrPanic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, NrStatus> {
    if p.is_null() {
        return Err(fail(NrStatus::NrErrNull, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(NrStatus::NrErrUtf8, "argument is not UTF-8"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), NrStatus> {
    if out.is_null() {
        return Err(fail(NrStatus::NrErrNull, "null output pointer"));
    }
    let c = CString::new(s).map_err(|_| fail(NrStatus::NrErrInvalid, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), NrStatus> {
    if out.is_null() {
        return Err(fail(NrStatus::NrErrNull, "null output pointer"));
    }
    *out = v;
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, NrStatus> {
    h.as_ref().ok_or_else(|| fail(NrStatus::NrErrNull, "null handle"))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn nr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A derived non-rationality certificate.
pub struct NrDerivation(NonRationalityCertificate);

/// Runs a construction script (source text) and derives its certificate.
///
/// # Safety
/// `script` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_derive(script: *const c_char, out: *mut *mut NrDerivation) -> NrStatus {
    guard(|| {
        let src = read_str(script)?;
        let cert = parse_script(src).and_then(|s| derive_nonrationality(&s)).map_err(from_error)?;
        put(out, Box::into_raw(Box::new(NrDerivation(cert))))
    })
}

/// Constraint polynomial in the parameter `a`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_derivation_constraint(h: *const NrDerivation, out: *mut *mut c_char) -> NrStatus {
    guard(|| put_string(out, handle(h)?.0.constraint.to_string_in("a")))
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_derivation_radicand(h: *const NrDerivation, out: *mut u64) -> NrStatus {
    guard(|| put(out, handle(h)?.0.radicand))
}

/// The chosen root, e.g. `2+1*sqrt(5)`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_derivation_root(h: *const NrDerivation, out: *mut *mut c_char) -> NrStatus {
    guard(|| put_string(out, handle(h)?.0.root.to_exact_string()))
}

/// Realization JSON of the certificate.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_derivation_realization_json(h: *const NrDerivation, out: *mut *mut c_char) -> NrStatus {
    guard(|| put_string(out, json(&handle(h)?.0.realization.to_json())))
}

/// # Safety
/// `h` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nr_derivation_free(h: *mut NrDerivation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

enum AnyLifting {
    Rational(LawrenceLifting<Rational>),
    Quad(LawrenceLifting<QuadExt>),
}

/// A Lawrence lifting.
pub struct NrLifting(AnyLifting);

/// Lifts a realization given as JSON. `h1`/`h2` are rational strings; pass
/// NULL for both to use heights 1 and 2.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL as described; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_lift(
    realization_json: *const c_char,
    h1: *const c_char,
    h2: *const c_char,
    out: *mut *mut NrLifting,
) -> NrStatus {
    guard(|| {
        let src = read_str(realization_json)?;
        let heights = if h1.is_null() && h2.is_null() {
            default_heights()
        } else {
            let p = |s| parse_rational(s).map_err(|e| fail(NrStatus::NrErrParse, e));
            (p(read_str(h1)?)?, p(read_str(h2)?)?)
        };
        let j: RealizationJson = serde_json::from_str(src).map_err(|e| fail(NrStatus::NrErrParse, e.to_string()))?;
        let lifted = match AnyRealization::from_json(&j).map_err(from_error)? {
            AnyRealization::Rational(r) => AnyLifting::Rational(lift_realization(&r, heights).map_err(from_error)?),
            AnyRealization::Quad(r) => AnyLifting::Quad(lift_realization(&r, heights).map_err(from_error)?),
        };
        put(out, Box::into_raw(Box::new(NrLifting(lifted))))
    })
}

/// Matrix shape of the lifting.
///
/// # Safety
/// `h` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_lifting_shape(h: *const NrLifting, rows: *mut usize, cols: *mut usize) -> NrStatus {
    guard(|| {
        let (r, c) = match &handle(h)?.0 {
            AnyLifting::Rational(l) => (l.matrix().rows(), l.matrix().cols()),
            AnyLifting::Quad(l) => (l.matrix().rows(), l.matrix().cols()),
        };
        put(rows, r)?;
        put(cols, c)
    })
}

/// Lifting JSON.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_lifting_json(h: *const NrLifting, out: *mut *mut c_char) -> NrStatus {
    guard(|| {
        let j = match &handle(h)?.0 {
            AnyLifting::Rational(l) => json(&l.to_json()),
            AnyLifting::Quad(l) => json(&l.to_json()),
        };
        put_string(out, j)
    })
}

fn certify_counts<F: OrderedField + ExactText>(l: &LawrenceLifting<F>) -> Result<[usize; 4], NrStatus> {
    let set = certify_lifting(l, &infer_lines(l.points())).map_err(from_error)?;
    let verified = set.all().filter(|c| c.verified).count();
    Ok([set.edges.len(), set.point_facets.len(), set.line_facets.len(), verified])
}

/// Computes all edge, point-facet and line-facet certificates (lines are
/// the maximal collinear sets of the source points) and reports their
/// counts and how many verified. Returns `NrErrVerification` if any failed.
///
/// # Safety
/// `h` must be a live handle; `counts` must point to 4 writable `size_t`:
/// edges, point facets, line facets, verified.
#[no_mangle]
pub unsafe extern "C" fn nr_lifting_certify(h: *const NrLifting, counts: *mut usize) -> NrStatus {
    guard(|| {
        let c = match &handle(h)?.0 {
            AnyLifting::Rational(l) => certify_counts(l)?,
            AnyLifting::Quad(l) => certify_counts(l)?,
        };
        if counts.is_null() {
            return Err(fail(NrStatus::NrErrNull, "null output pointer"));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), counts, 4);
        if c[3] != c[0] + c[1] + c[2] {
            return Err(fail(NrStatus::NrErrVerification, "some certificates failed"));
        }
        Ok(())
    })
}

fn recover_round_trip<F: OrderedField + ExactText>(l: &LawrenceLifting<F>) -> Result<String, NrStatus> {
    let p = LabeledPolytope::from_lifting(l, &l.labels()).map_err(from_error)?;
    let rec = recover_configuration(&p).map_err(from_error)?;
    if collinearity_pattern(&rec.vectors) != collinearity_pattern(&source_vectors(l)) {
        return Err(fail(NrStatus::NrErrVerification, "recovered collinearity pattern differs"));
    }
    Ok(json(&rec.realization().map_err(from_error)?.to_json()))
}

/// Recovers the configuration from the lifting and checks the round trip;
/// writes the recovered realization JSON.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_lifting_recover(h: *const NrLifting, out: *mut *mut c_char) -> NrStatus {
    guard(|| {
        let s = match &handle(h)?.0 {
            AnyLifting::Rational(l) => recover_round_trip(l)?,
            AnyLifting::Quad(l) => recover_round_trip(l)?,
        };
        put_string(out, s)
    })
}

/// # Safety
/// `h` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nr_lifting_free(h: *mut NrLifting) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

enum AnyMesh {
    Rational(QuadMesh<Rational>),
    Quad(QuadMesh<QuadExt>),
}

/// A quad mesh.
pub struct NrMesh(AnyMesh);

/// Builds `gadget`, `s48`, `s144` or `pentagon`; `per_line` selects one
/// S144 per line instead of one per collinear triple for `pentagon`.
///
/// # Safety
/// `target` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_surface(target: *const c_char, per_line: bool, out: *mut *mut NrMesh) -> NrStatus {
    guard(|| {
        let mesh = match read_str(target)? {
            "gadget" => AnyMesh::Rational(reference_gadget().mesh),
            "s48" => AnyMesh::Rational(default_s48().map_err(from_error)?),
            "s144" => AnyMesh::Rational(default_s144().map_err(from_error)?),
            "pentagon" => {
                let mode = if per_line { TripleMode::PerLine } else { TripleMode::All };
                AnyMesh::Quad(build_pentagon_surface(mode).map_err(from_error)?)
            }
            other => return Err(fail(NrStatus::NrErrInvalid, format!("unknown surface target {other}"))),
        };
        put(out, Box::into_raw(Box::new(NrMesh(mesh))))
    })
}

/// # Safety
/// `h` must be a live handle; `faces` and `vertices` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_mesh_counts(h: *const NrMesh, faces: *mut usize, vertices: *mut usize) -> NrStatus {
    guard(|| {
        let (f, v) = match &handle(h)?.0 {
            AnyMesh::Rational(m) => (m.faces().len(), m.vertices().len()),
            AnyMesh::Quad(m) => (m.faces().len(), m.vertices().len()),
        };
        put(faces, f)?;
        put(vertices, v)
    })
}

fn mesh_ok<F: OrderedField>(m: &QuadMesh<F>) -> bool {
    verify_flat_convex(m).all_ok() && combinatorial_violations(m).is_empty()
}

/// Checks every face for flatness and convexity and the pairwise vertex
/// sharing rule. Returns `NrErrVerification` on failure.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nr_mesh_verify(h: *const NrMesh) -> NrStatus {
    guard(|| {
        let ok = match &handle(h)?.0 {
            AnyMesh::Rational(m) => mesh_ok(m),
            AnyMesh::Quad(m) => mesh_ok(m),
        };
        if ok {
            Ok(())
        } else {
            Err(fail(NrStatus::NrErrVerification, "mesh has faces that are not flat and convex"))
        }
    })
}

/// Mesh JSON with exact coordinates.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_mesh_json(h: *const NrMesh, out: *mut *mut c_char) -> NrStatus {
    guard(|| {
        let s = match &handle(h)?.0 {
            AnyMesh::Rational(m) => json(&m.to_json()),
            AnyMesh::Quad(m) => json(&m.to_json()),
        };
        put_string(out, s)
    })
}

/// Wavefront OBJ text with `precision` decimal digits.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nr_mesh_obj(h: *const NrMesh, precision: usize, out: *mut *mut c_char) -> NrStatus {
    guard(|| {
        let (obj, _) = match &handle(h)?.0 {
            AnyMesh::Rational(m) => export_obj(m, precision),
            AnyMesh::Quad(m) => export_obj(m, precision),
        };
        put_string(out, obj)
    })
}

/// # Safety
/// `h` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nr_mesh_free(h: *mut NrMesh) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
