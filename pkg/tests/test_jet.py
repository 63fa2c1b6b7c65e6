import numpy as np
import pytest

from qhdevans._jet import Jet

sympy = pytest.importorskip("sympy")
x = sympy.symbols("x")
f_expr = 2 + sympy.sin(x)
g_expr = 1.5 + x**2 / 3
POINTS = np.array([-0.7, 0.1, 1.3])


def jet_of(expr, order=3):
    return Jet([
        np.array([float(sympy.diff(expr, x, k).subs(x, p)) for p in POINTS])
        for k in range(order + 1)
    ])


def check(jet, expr):
    for k in range(jet.order + 1):
        expected = np.array([float(sympy.diff(expr, x, k).subs(x, p)) for p in POINTS])
        np.testing.assert_allclose(jet[k], expected, rtol=1e-12, atol=1e-12)


def test_product_and_quotient():
    f, g = jet_of(f_expr), jet_of(g_expr)
    check(f * g, f_expr * g_expr)
    check(f / g, f_expr / g_expr)
    check(3 - f + g, 3 - f_expr + g_expr)


@pytest.mark.parametrize("p", [-1.5, -0.5, 0.5, 2.0])
def test_powers(p):
    check(jet_of(f_expr) ** p, f_expr ** sympy.nsimplify(p))


def test_compose_with_log():
    f = jet_of(f_expr)
    out = f.compose([np.log, lambda v: 1 / v, lambda v: -1 / v**2, lambda v: 2 / v**3])
    check(out, sympy.log(f_expr))


def test_derivative_shift():
    f = jet_of(f_expr)
    check(f.d, sympy.diff(f_expr, x))
    assert f.d.order == 2
    with pytest.raises(ValueError):
        Jet([np.zeros(2)]).d


def test_mixed_orders_truncate():
    f, g = jet_of(f_expr), jet_of(g_expr, order=1)
    assert (f * g).order == 1
    check(f * g, f_expr * g_expr)
