"""Smoke test for the trigonal extension module.

Build first:
    cargo build -p trigonal-py --release --features extension-module
then run this script from the repository root. The built library is loaded
from target/ unless a `trigonal` module is already importable.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys


def load():
    try:
        import trigonal

        return trigonal
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libtrigonal.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("trigonal", str(lib))
            spec = importlib.util.spec_from_file_location("trigonal", str(lib), loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("trigonal extension not found; build crates/py first")


def main():
    t = load()

    h = t.twisted_bm_config([2, 1, 1, 0], 3)
    assert str(h) == "deg 4: Q(2); deg 6: 2Q(3); deg 8: Q(4)", str(h)
    assert h.total_dim() == 4
    assert t.twisted_bm_config([2, 1], 2).classes() == [(6, 3, 1)]
    assert t.grassmannian_bm(2, 4).total_dim() == 6

    a = t.GradedTate([(0, 0, 1), (2, -1, 1)])
    fiber = t.GradedTate([(0, 0, 1), (3, -2, 1)])
    assert a.tensor(fiber).divide(fiber) == a
    assert json.loads(a.to_json()) == [
        {"degree": 0, "weight": 0, "mult": 1},
        {"degree": 2, "weight": -1, "mult": 1},
    ]

    spec = t.SurfaceSpec(1, 25)
    columns = dict(t.e1_page(spec))
    assert sorted(columns) == [1, 2, 3, 4]
    assert sum(c.total_dim() for c in columns.values()) == 15

    classes, bound, strict = t.stable_cohomology(40)
    assert classes.classes() == [(0, 0, 1), (2, -1, 1), (4, -2, 1)]
    assert (bound, strict) == (10, True)
    framed, _, _ = t.stable_cohomology(40, framed=True)
    assert framed.classes() == [(0, 0, 1), (2, -1, 1), (5, -3, 1), (7, -4, 1)]
    assert t.stable_range(14) == (3, False)

    stratum, top = t.stratum_cohomology(2, 20)
    assert (stratum.classes(), top) == ([(0, 0, 1), (2, -1, 1)], 4)
    assert t.truncated_quotient_dims(11, 1) == [1, 1, 0]

    report = t.verify_codimension(t.SurfaceSpec(1, 7), 2, trials=10, seed=0)
    assert report["passed"] and report["failures"] == 0

    try:
        t.stable_cohomology(6)
    except t.RangeError:
        pass
    else:
        raise AssertionError("genus 6 should be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
