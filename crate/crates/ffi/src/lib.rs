//! C ABI over `sbm-frechet`.
//!
//! Matrices cross the boundary as dense row-major `n * n` buffers owned by the
//! caller. Samples and barycenters are opaque handles released with their
//! `_free` function. Every fallible call returns an [`SbmStatus`]; on failure
//! [`sbm_last_error_message`] describes the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::DMatrix;

use sbm_frechet::{
    majority_median, resistance_barycenter, resistance_distance_sq, sample_sbm, BarycenterResult,
    BinaryAdjacency, Error, NetworkSample, SbmParams, WeightedAdjacency,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    Disconnected = 4,
    Singular = 5,
    NotRealizable = 6,
    TooLarge = 7,
    Internal = 8,
}

/// A sample of binary networks on a common vertex set.
pub struct SbmSample {
    inner: NetworkSample,
}

/// A resistance barycenter and its reconstructed adjacency.
pub struct SbmBarycenter {
    inner: BarycenterResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SbmStatus {
    match e {
        Error::Disconnected { .. }
        | Error::ZeroDegree { .. }
        | Error::NoFeasibleCandidate { .. } => SbmStatus::Disconnected,
        Error::Singular { .. } => SbmStatus::Singular,
        Error::NotRealizable { .. } => SbmStatus::NotRealizable,
        Error::TooLarge { .. } => SbmStatus::TooLarge,
        Error::Io(_) => SbmStatus::Internal,
        _ => SbmStatus::InvalidArgument,
    }
}

fn fail(status: SbmStatus, message: impl Into<String>) -> SbmStatus {
    set_error(message.into());
    status
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), SbmStatus>) -> SbmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SbmStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(SbmStatus::Internal, "panic inside sbm-frechet"),
    }
}

fn lift<T>(r: sbm_frechet::Result<T>) -> Result<T, SbmStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), SbmStatus> {
    if p.is_null() {
        Err(fail(SbmStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn square_len(n: usize) -> Result<usize, SbmStatus> {
    n.checked_mul(n)
        .filter(|_| n > 0)
        .ok_or_else(|| fail(SbmStatus::InvalidArgument, format!("invalid dimension {n}")))
}

/// # Safety
/// `data` must point to `n * n` readable bytes.
unsafe fn read_binary(n: usize, data: *const u8, name: &str) -> Result<BinaryAdjacency, SbmStatus> {
    non_null(data, name)?;
    let flat = std::slice::from_raw_parts(data, square_len(n)?);
    let rows: Vec<Vec<u8>> = flat.chunks(n).map(<[u8]>::to_vec).collect();
    lift(BinaryAdjacency::from_rows(&rows))
}

/// # Safety
/// `data` must point to `n * n` readable doubles.
unsafe fn read_weighted(
    n: usize,
    data: *const f64,
    name: &str,
) -> Result<WeightedAdjacency, SbmStatus> {
    non_null(data, name)?;
    let flat = std::slice::from_raw_parts(data, square_len(n)?);
    lift(WeightedAdjacency::new(DMatrix::from_row_slice(n, n, flat)))
}

/// # Safety
/// `out` must point to `len` writable elements.
unsafe fn write_out<T: Copy>(
    values: impl Iterator<Item = T>,
    n: usize,
    out: *mut T,
    len: usize,
) -> Result<(), SbmStatus> {
    non_null(out, "output buffer")?;
    let need = square_len(n)?;
    if len < need {
        return Err(fail(
            SbmStatus::BufferTooSmall,
            format!("buffer holds {len} entries, need {need}"),
        ));
    }
    let dst = std::slice::from_raw_parts_mut(out, need);
    for (d, v) in dst.iter_mut().zip(values) {
        *d = v;
    }
    Ok(())
}

fn binary_entries(g: &BinaryAdjacency) -> impl Iterator<Item = u8> + '_ {
    let n = g.n();
    (0..n * n).map(move |k| g.get(k / n, k % n))
}

fn matrix_entries(m: &DMatrix<f64>) -> impl Iterator<Item = f64> + '_ {
    let n = m.nrows();
    (0..n * n).map(move |k| m[(k / n, k % n)])
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sbm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn sbm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Draws `count` networks from G(n, p, q) with the given seed.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sbm_sample_new(
    n: usize,
    p: f64,
    q: f64,
    count: usize,
    seed: u64,
    out: *mut *mut SbmSample,
) -> SbmStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = lift(SbmParams::new(n, p, q))?;
        let inner = lift(sample_sbm(&params, count, seed))?;
        *out = Box::into_raw(Box::new(SbmSample { inner }));
        Ok(())
    })
}

/// Builds a sample from `count` row-major `n * n` 0/1 matrices stored back to back.
///
/// # Safety
/// `data` must point to `count * n * n` readable bytes; `out` as in [`sbm_sample_new`].
#[no_mangle]
pub unsafe extern "C" fn sbm_sample_from_adjacency(
    n: usize,
    count: usize,
    data: *const u8,
    out: *mut *mut SbmSample,
) -> SbmStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(data, "data")?;
        let stride = square_len(n)?;
        let networks = (0..count)
            .map(|k| read_binary(n, data.add(k * stride), "data"))
            .collect::<Result<Vec<_>, _>>()?;
        let inner = lift(NetworkSample::from_networks(networks))?;
        *out = Box::into_raw(Box::new(SbmSample { inner }));
        Ok(())
    })
}

/// # Safety
/// `sample` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbm_sample_free(sample: *mut SbmSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Vertex count of the sample, or 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sbm_sample_n(sample: *const SbmSample) -> usize {
    sample.as_ref().map_or(0, |s| s.inner.n())
}

/// Number of networks in the sample, or 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sbm_sample_len(sample: *const SbmSample) -> usize {
    sample.as_ref().map_or(0, |s| s.inner.len())
}

/// Copies network `k` into `out` as a row-major 0/1 matrix.
///
/// # Safety
/// `sample` must be a live handle; `out` must hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sbm_sample_network(
    sample: *const SbmSample,
    k: usize,
    out: *mut u8,
    len: usize,
) -> SbmStatus {
    guard(|| {
        non_null(sample, "sample")?;
        let s = &(*sample).inner;
        let g = s.networks().get(k).ok_or_else(|| {
            fail(
                SbmStatus::InvalidArgument,
                format!("index {k} out of range for {} networks", s.len()),
            )
        })?;
        write_out(binary_entries(g), s.n(), out, len)
    })
}

/// Writes the majority-rule median of the sample into `out`.
///
/// # Safety
/// `sample` must be a live handle; `out` must hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sbm_majority_median(
    sample: *const SbmSample,
    out: *mut u8,
    len: usize,
) -> SbmStatus {
    guard(|| {
        non_null(sample, "sample")?;
        let median = majority_median(&(*sample).inner);
        write_out(binary_entries(&median), median.n(), out, len)
    })
}

/// Hamming distance between two row-major 0/1 matrices.
///
/// # Safety
/// `a` and `b` must point to `n * n` readable bytes; `out` to one writable `u64`.
#[no_mangle]
pub unsafe extern "C" fn sbm_hamming(
    n: usize,
    a: *const u8,
    b: *const u8,
    out: *mut u64,
) -> SbmStatus {
    guard(|| {
        non_null(out, "out")?;
        let a = read_binary(n, a, "a")?;
        let b = read_binary(n, b, "b")?;
        *out = lift(sbm_frechet::hamming(&a, &b))?;
        Ok(())
    })
}

/// Effective resistance matrix of a connected weighted graph.
///
/// # Safety
/// `a` must point to `n * n` readable doubles; `out` to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sbm_effective_resistance(
    n: usize,
    a: *const f64,
    out: *mut f64,
    len: usize,
) -> SbmStatus {
    guard(|| {
        let a = read_weighted(n, a, "a")?;
        let r = lift(sbm_frechet::effective_resistance(&a))?;
        write_out(matrix_entries(r.as_matrix()), n, out, len)
    })
}

/// Squared resistance-perturbation distance between two connected weighted graphs.
///
/// # Safety
/// `a` and `b` must point to `n * n` readable doubles; `out` to one writable double.
#[no_mangle]
pub unsafe extern "C" fn sbm_resistance_distance_sq(
    n: usize,
    a: *const f64,
    b: *const f64,
    out: *mut f64,
) -> SbmStatus {
    guard(|| {
        non_null(out, "out")?;
        let a = read_weighted(n, a, "a")?;
        let b = read_weighted(n, b, "b")?;
        *out = lift(resistance_distance_sq(&a, &b))?;
        Ok(())
    })
}

/// Resistance barycenter of a sample, reconstructed with regularization `alpha`.
///
/// # Safety
/// `sample` must be a live handle; `out` valid storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sbm_barycenter_new(
    sample: *const SbmSample,
    alpha: f64,
    out: *mut *mut SbmBarycenter,
) -> SbmStatus {
    guard(|| {
        non_null(sample, "sample")?;
        non_null(out, "out")?;
        let inner = lift(resistance_barycenter(&(*sample).inner, alpha))?;
        *out = Box::into_raw(Box::new(SbmBarycenter { inner }));
        Ok(())
    })
}

/// # Safety
/// `barycenter` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbm_barycenter_free(barycenter: *mut SbmBarycenter) {
    if !barycenter.is_null() {
        drop(Box::from_raw(barycenter));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `barycenter` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sbm_barycenter_n(barycenter: *const SbmBarycenter) -> usize {
    barycenter.as_ref().map_or(0, |b| b.inner.reconstructed.n())
}

/// Largest entrywise error of the resistance round trip, or NaN for a null handle.
///
/// # Safety
/// `barycenter` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sbm_barycenter_round_trip_residual(
    barycenter: *const SbmBarycenter,
) -> f64 {
    barycenter
        .as_ref()
        .map_or(f64::NAN, |b| b.inner.round_trip_residual)
}

/// Copies the reconstructed weighted adjacency (row-major) into `out`.
///
/// # Safety
/// `barycenter` must be a live handle; `out` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sbm_barycenter_adjacency(
    barycenter: *const SbmBarycenter,
    out: *mut f64,
    len: usize,
) -> SbmStatus {
    guard(|| {
        non_null(barycenter, "barycenter")?;
        let m = (*barycenter).inner.reconstructed.as_matrix();
        write_out(matrix_entries(m), m.nrows(), out, len)
    })
}

/// Copies the mean resistance matrix (row-major) into `out`.
///
/// # Safety
/// `barycenter` must be a live handle; `out` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sbm_barycenter_mean_resistance(
    barycenter: *const SbmBarycenter,
    out: *mut f64,
    len: usize,
) -> SbmStatus {
    guard(|| {
        non_null(barycenter, "barycenter")?;
        let m = (*barycenter).inner.mean_resistance.as_matrix();
        write_out(matrix_entries(m), m.nrows(), out, len)
    })
}
