"""Smoke test for the stabdiv Python extension.

Build and install first:

    pip install maturin
    pip install --no-build-isolation ./crates/py

then run ``python python/smoke_test.py`` (or ``pytest python/``).
"""

from fractions import Fraction

import stabdiv


def test_division():
    x = stabdiv.Polynomial("x")
    h = stabdiv.Polynomial("x^2 + x*y")
    quotients, remainder, trace = stabdiv.divide(h, [x])
    assert str(quotients[0]) == "x+y"
    assert remainder.is_zero()
    assert "x^2" in trace


def test_norms():
    da = stabdiv.Space(2)
    assert da.t == Fraction(-2)
    assert stabdiv.Polynomial("x*y").norm_sq(da) == Fraction(1, 2)
    assert stabdiv.Space(2, 0).c_ratio(1) == Fraction(1, 3)
    assert stabdiv.Space(2, Fraction(1, 2)).t == Fraction(1, 2)


def test_groebner_and_beurling():
    gens = [stabdiv.Polynomial("x^2 + y^2"), stabdiv.Polynomial("x*y")]
    gb = stabdiv.buchberger(gens).reduce()
    assert [str(g) for g in gb.generators] == ["y^3", "x^2+y^2", "x*y"]
    assert gb.codimension() == 4
    assert gb.contains(stabdiv.Polynomial("y^4"))
    p, cofactors, codim = stabdiv.beurling([stabdiv.Polynomial("x^2*y"), stabdiv.Polynomial("x*y^2")])
    assert str(p) == "x*y"
    assert [str(c) for c in cofactors] == ["x", "y"]
    assert codim == 1


def test_certify_and_counterexample():
    gens = [stabdiv.Polynomial(s) for s in ("x^2", "x*y", "y^2")]
    report = stabdiv.certify(gens, stabdiv.Space(2), q_max=10, samples=5)
    assert report["verdict"] == "bounded-plateau"
    rows = stabdiv.counterexample(6)
    assert rows[3] == (4, Fraction(6))
    assert all(r == Fraction(1) for _, r in stabdiv.counterexample(6, rotated=True))


def test_operators():
    rows = stabdiv.scan_commutators([stabdiv.Polynomial("x")], stabdiv.Space(2), [4, 6])
    assert len(rows) == 4 and rows[0]["increment"] is None
    probe = stabdiv.fang_xia(stabdiv.Polynomial("x + y"), stabdiv.Space(2), 6, samples=3)
    assert probe["max_ratio"] > 0
    angle = stabdiv.angle_check(12, 5, 0.4, samples=20, seed=1)
    assert angle["violations"] == 0 and angle["intermediate_violations"] == 0


def test_errors():
    try:
        stabdiv.Polynomial("x +")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error not raised")
    try:
        stabdiv.Space(2, -3)
    except ValueError:
        pass
    else:
        raise AssertionError("t < -d accepted")
    assert issubclass(stabdiv.NumericalError, ArithmeticError)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok  {name}")
