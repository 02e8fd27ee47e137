use pyo3::prelude::*;
use pyo3::types::PyDict;

use qdc_py::qdc_py;

#[test]
fn module_runs_inside_an_embedded_interpreter() {
    pyo3::append_to_inittab!(qdc_py);
    Python::initialize();
    Python::attach(|py| {
        let locals = PyDict::new(py);
        py.run(
            c"
import qdc_py
src = qdc_py.generate(2, 3, clifford_pct=30.0, seed=9)
out, inputs, obs = qdc_py.compile(src, pipeline='qdc-full', rows=2, cols=3)
report = qdc_py.verify(out, src)
ok = report['equivalent'] and obs is None and len(inputs) == 2
prod = str(qdc_py.PauliString('XY') * qdc_py.PauliString('YX'))
",
            None,
            Some(&locals),
        )
        .unwrap();
        assert!(locals.get_item("ok").unwrap().unwrap().extract::<bool>().unwrap());
        assert_eq!(locals.get_item("prod").unwrap().unwrap().extract::<String>().unwrap(), "ZZ");
    });
}
