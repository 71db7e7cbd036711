use std::sync::Once;

use pyo3::prelude::*;
use pyo3::types::PyDict;
use pykreingraph::pykreingraph;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyDict>) -> R) -> R {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        pyo3::append_to_inittab!(pykreingraph);
        Python::initialize();
    });
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let module = py.import("pykreingraph").unwrap();
        globals.set_item("kg", module).unwrap();
        f(py, &globals)
    })
}

#[test]
fn interval_spectrum_through_python() {
    with_module(|py, globals| {
        py.run(
            c"g = kg.Graph.from_lengths(['a', 'b'], [('a', 'b', 1.0)])\npairs = kg.spectrum(g, 200.0)",
            Some(globals),
            None,
        )
        .unwrap();
        let pairs: Vec<(f64, usize)> = globals.get_item("pairs").unwrap().unwrap().extract().unwrap();
        assert_eq!(pairs[0], (0.0, 2));
        let four_pi2 = 4.0 * std::f64::consts::PI.powi(2);
        assert!((pairs[1].0 - four_pi2).abs() < 1e-8 * four_pi2);
    });
}

#[test]
fn domain_errors_become_value_errors() {
    with_module(|py, globals| {
        let err = py
            .run(c"kg.Graph.from_lengths(['a', 'b', 'c'], [('a', 'b', 1.0)])", Some(globals), None)
            .unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        assert!(err.to_string().contains("NOT_CONNECTED"), "{err}");
    });
}
