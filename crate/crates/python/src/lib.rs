use clawforge_core::calculus::{euler as euler_op, total_derivative};
use clawforge_core::corpus;
use clawforge_core::lawgen::{self, MixedOptions};
use clawforge_core::model::{AnsatzConfig, Model};
use clawforge_core::{Error, Expr};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) | Error::IterationCap(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A built-in model name, or model-file text.
fn load(model: &str) -> PyResult<Model> {
    if model.contains("[vars]") {
        return Model::parse(model).map_err(py_err);
    }
    corpus::lookup(model).cloned().map_err(py_err)
}

fn texts(m: &Model, v: &[Expr]) -> Vec<String> {
    v.iter().map(|e| e.to_text(m.ctx())).collect()
}

#[pyfunction]
fn models() -> Vec<String> {
    corpus::names().map(str::to_string).collect()
}

/// `(label, residual)` for every law in the `[laws]` section of `laws`.
#[pyfunction]
fn verify(model: &str, laws: &str) -> PyResult<Vec<(String, String)>> {
    let m = load(model)?;
    let laws = m.parse_laws(laws).map_err(py_err)?;
    laws.iter()
        .map(|l| {
            let r = lawgen::verify(&m.system, &l.components).map_err(py_err)?;
            Ok((l.label.clone(), r.to_text(m.ctx())))
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (model, order=0, degree=2))]
fn multipliers(model: &str, order: usize, degree: u32) -> PyResult<Vec<Vec<String>>> {
    if order > 1 {
        return Err(PyValueError::new_err("multiplier order must be 0 or 1"));
    }
    let m = load(model)?;
    let cfg = AnsatzConfig {
        multiplier_order: order,
        multiplier_degree: degree,
        ..AnsatzConfig::default()
    };
    let (_, _, sets) =
        lawgen::multipliers(&m.system, &cfg.multipliers(&m.system)).map_err(py_err)?;
    Ok(sets.iter().map(|s| texts(&m, &s.v)).collect())
}

/// Conserved vectors from the mixed method, with the model's ansatz settings.
#[pyfunction]
fn mixed(model: &str, generator: &str) -> PyResult<Vec<Vec<String>>> {
    let m = load(model)?;
    let g = m.resolve_generator(generator).map_err(py_err)?;
    let cfg = m.ansatz.clone().unwrap_or_default();
    let s = &m.system;
    let opts = MixedOptions {
        theta: Some(cfg.theta(s)),
        ..MixedOptions::default()
    };
    let r = lawgen::mixed_method(s, &g, &cfg.psi(s), &cfg.h(s), &opts).map_err(py_err)?;
    Ok(r.laws.iter().map(|l| texts(&m, &l.components)).collect())
}

/// One Euler expression per dependent variable.
#[pyfunction]
#[pyo3(signature = (expr, model="kdv"))]
fn euler(expr: &str, model: &str) -> PyResult<Vec<String>> {
    let m = load(model)?;
    let e = Expr::parse(expr, m.ctx()).map_err(py_err)?;
    Ok((0..m.ctx().n_dep())
        .map(|a| euler_op(&e, a).to_text(m.ctx()))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (var, expr, model="kdv"))]
fn tderiv(var: &str, expr: &str, model: &str) -> PyResult<String> {
    let m = load(model)?;
    let i = m
        .ctx()
        .indep_index(var)
        .ok_or_else(|| PyValueError::new_err(format!("`{var}` is not an independent variable")))?;
    let e = Expr::parse(expr, m.ctx()).map_err(py_err)?;
    Ok(total_derivative(&e, i).to_text(m.ctx()))
}

#[pymodule]
fn clawforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(models, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(multipliers, m)?)?;
    m.add_function(wrap_pyfunction!(mixed, m)?)?;
    m.add_function(wrap_pyfunction!(euler, m)?)?;
    m.add_function(wrap_pyfunction!(tderiv, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_rust_calls() {
        assert_eq!(models().len(), 5);
        assert_eq!(
            tderiv("x", "u[x,x]+u^2/2", "kdv").unwrap(),
            "u[x,x,x]+u*u[x]"
        );
        assert_eq!(euler("u[x]^2/2", "kdv").unwrap(), ["-u[x,x]"]);
        let r = verify("kdv", "[laws]\nbogus: u ; u\n").unwrap();
        assert_ne!(r[0].1, "0");
    }
}
