use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    pyo3::append_to_inittab!(sumsq_module);
    pyo3::prepare_freethreaded_python();
    Python::with_gil(|py| {
        let globals = PyDict::new_bound(py);
        globals
            .set_item("sumsq", py.import_bound("sumsq").unwrap())
            .unwrap();
        f(py, &globals);
    });
}

use sumsq_py::sumsq_module;

#[test]
fn module_round_trip() {
    with_module(|py, globals| {
        py.run_bound(
            r#"
assert sumsq.is_prime(2**89 - 1)
assert sumsq.factor(360) == [(2, 3), (3, 2), (5, 1)]
assert sumsq.integer_nth_root(2197, 3) == 13
assert sumsq.primes_in_ap(100, 1, 12) == [13, 37, 61, 73, 97]
assert sumsq.two_square_representations(25) == [(0, 5), (3, 4)]
assert not sumsq.is_sum_of_two_squares(21)

cls = sumsq.ResidueClass(6, 12)
assert -6 in cls and 5 not in cls and str(cls) == "6/12"
assert sumsq.ResidueClass.parse("6/12") == cls

t = sumsq.generate("thm1", 3, 100000)[0]
assert (t.target, t.p, t.family) == (2197, 13, "THM1")
assert t.z_class == cls
assert t.verify()["found"] is None
assert sumsq.witness(t, -6)["q"] == "19"
assert t.local_report()["verdict"] == "no_obstruction_found"
assert sumsq.local_report(7, 4, sumsq.ResidueClass(0, 2))["verdict"] == "obstructed"

assert sumsq.find_representations(6, 3, 1, 1, positive=True) == [(1, 2, 1)]
assert sumsq.landau_count(30) == 6
assert sumsq.density_report("thm1", 3, [10**12])[0]["actual"] == 300

try:
    sumsq.witness(t, 5)
except ValueError:
    pass
else:
    raise AssertionError("z outside the class must be rejected")
"#,
            Some(globals),
            None,
        )
        .unwrap();
    });
}
