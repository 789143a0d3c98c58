//! Python bindings. Structured results cross the boundary as JSON and are
//! decoded with the standard `json` module, so Python sees plain dicts and
//! lists with exact integers.

use hyperform_core::qforms::DiagonalForm;
use hyperform_core::{census, collar, equiv, padic, qforms, subforms, Error, Place};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts `-1`, `"real"` or a prime, as int or str.
fn parse_place(obj: &Bound<'_, PyAny>) -> PyResult<Place> {
    obj.str()?.to_string().parse().map_err(py_err)
}

fn form(coeffs: Vec<BigInt>) -> PyResult<DiagonalForm> {
    DiagonalForm::new(coeffs).map_err(py_err)
}

/// Hilbert symbol (a, b) at a place, as +1 or -1.
#[pyfunction]
fn hilbert(a: BigInt, b: BigInt, place: &Bound<'_, PyAny>) -> PyResult<i8> {
    Ok(padic::hilbert(&a, &b, &parse_place(place)?).map_err(py_err)?.to_i8())
}

#[pyfunction]
fn is_square_local(n: BigInt, place: &Bound<'_, PyAny>) -> PyResult<bool> {
    padic::is_square_local(&n, &parse_place(place)?).map_err(py_err)
}

#[pyfunction]
fn hasse_invariant(coeffs: Vec<BigInt>, place: &Bound<'_, PyAny>) -> PyResult<i8> {
    Ok(qforms::hasse_invariant(&form(coeffs)?, &parse_place(place)?).map_err(py_err)?.to_i8())
}

#[pyfunction]
fn local_anisotropic(coeffs: Vec<BigInt>, place: &Bound<'_, PyAny>) -> PyResult<bool> {
    qforms::local_anisotropic(&form(coeffs)?, &parse_place(place)?).map_err(py_err)
}

/// `(anisotropic, witness)` with the witness place as an int (-1 for real).
#[pyfunction]
fn global_anisotropic(coeffs: Vec<BigInt>) -> PyResult<(bool, Option<BigInt>)> {
    let d = qforms::global_anisotropic(&form(coeffs)?).map_err(py_err)?;
    Ok((d.anisotropic, d.witness.map(|w| w.code())))
}

#[pyfunction]
fn isotropy_search(coeffs: Vec<BigInt>, bound: u64) -> PyResult<Option<Vec<BigInt>>> {
    qforms::isotropy_search(&form(coeffs)?, bound).map_err(py_err)
}

#[pyfunction]
fn projectively_equivalent(f: Vec<BigInt>, g: Vec<BigInt>) -> PyResult<Option<BigInt>> {
    qforms::projectively_equivalent(&form(f)?, &form(g)?).map_err(py_err)
}

/// A verified family of anisotropic subforms, as a dict.
#[pyfunction]
#[pyo3(signature = (s, count = 5))]
fn generate_family(py: Python<'_>, s: BigInt, count: usize) -> PyResult<Bound<'_, PyAny>> {
    let family = subforms::generate_family(&s, count).map_err(py_err)?;
    to_py(py, &family)
}

#[pyfunction]
fn build_witness(py: Python<'_>, p: BigInt) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &equiv::build_witness(&p).map_err(py_err)?)
}

#[pyfunction]
fn tube_volume(a: f64) -> PyResult<f64> {
    collar::tube_volume(a).map_err(py_err)
}

#[pyfunction]
fn volume_obstruction(py: Python<'_>, chi: u64, copies: u64, a: f64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &collar::volume_obstruction(chi, copies, a).map_err(py_err)?)
}

/// The 24-symbol expansion of a compact side-pairing code.
#[pyfunction]
fn expand_code(code: &str) -> PyResult<String> {
    Ok(census::parse_code(code).map_err(py_err)?.expanded())
}

#[pyfunction]
fn exclude_census_record(py: Python<'_>, index: u32) -> PyResult<Bound<'_, PyAny>> {
    let rec = census::census_record(index).map_err(py_err)?;
    to_py(py, &census::exclude_closed_hypersurface(&rec))
}

#[pyfunction]
fn exclude_1011_cover(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &census::exclude_1011_cover())
}

#[pyfunction]
fn exclude_1011_cover_text() -> String {
    census::exclude_1011_cover().to_string()
}

#[pymodule]
fn hyperform(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(is_square_local, m)?)?;
    m.add_function(wrap_pyfunction!(hasse_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(local_anisotropic, m)?)?;
    m.add_function(wrap_pyfunction!(global_anisotropic, m)?)?;
    m.add_function(wrap_pyfunction!(isotropy_search, m)?)?;
    m.add_function(wrap_pyfunction!(projectively_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(generate_family, m)?)?;
    m.add_function(wrap_pyfunction!(build_witness, m)?)?;
    m.add_function(wrap_pyfunction!(tube_volume, m)?)?;
    m.add_function(wrap_pyfunction!(volume_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(expand_code, m)?)?;
    m.add_function(wrap_pyfunction!(exclude_census_record, m)?)?;
    m.add_function(wrap_pyfunction!(exclude_1011_cover, m)?)?;
    m.add_function(wrap_pyfunction!(exclude_1011_cover_text, m)?)?;
    Ok(())
}
