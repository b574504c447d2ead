import ast
import math
from pathlib import Path

import mpmath
import numpy as np
from scipy import integrate, special

import quarterplane.oracle as oracle


def test_oracle_is_independent_of_the_contour_engine():
    tree = ast.parse(Path(oracle.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            imported |= {a.name for a in node.names}
        elif isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            if node.level:
                imported.add("relative")
    assert "relative" not in imported
    assert not any("quarterplane" in m for m in imported)


def test_erfc_two_routes():
    assert oracle.erfc_solution(0.0, 2.0) == 1.0
    assert abs(oracle.erfc_solution(1, 1) - 0.4795001222) < 1e-10
    rng = np.random.default_rng(0)
    for x, t in zip(rng.uniform(0.05, 20, 30), rng.uniform(0.05, 10, 30)):
        a = float(oracle.erfc_solution(x, t))
        b = oracle.erfc_solution_mp(x, t)
        assert abs(a - b) <= 1e-15 + 1e-13 * abs(b)


def test_erfc_solves_heat_equation():
    x, t, h = 0.8, 0.6, 1e-3
    f = oracle.erfc_solution
    ut = (f(x, t + h) - f(x, t - h)) / (2 * h)
    uxx = (f(x + h, t) - 2 * f(x, t) + f(x - h, t)) / h ** 2
    assert abs(ut - uxx) < 1e-5


def test_gauss_kernel_derivative():
    assert abs(oracle.gauss_kernel_derivative(1, 1) - 0.2196956447) < 1e-10
    assert oracle.gauss_kernel_derivative(0, 3.0) == 0
    with mpmath.workdps(30):
        exact = float(mpmath.e ** (-mpmath.mpf(1) / 4) / (2 * mpmath.sqrt(mpmath.pi)))
    assert abs(oracle.gauss_kernel_derivative(1, 1) - exact) < 1e-16


def test_gauss_kernel_l2():
    assert abs(oracle.gauss_kernel_l2(1.0) - 0.0997356) < 1e-7
    val, _ = integrate.quad(lambda x: oracle.gauss_kernel_derivative(x, 1.0) ** 2, 0, np.inf,
                            epsabs=0, epsrel=1e-12)
    assert abs(val / oracle.gauss_kernel_l2(1.0) - 1) < 1e-10


def test_airy_two_routes():
    for z in (-3.0, 0.0, 0.6933612, 2.5):
        ai, aip = oracle.airy_ai_scipy(z)
        assert abs(ai - oracle.airy_ai(z)) < 1e-14
        assert abs(aip - oracle.airy_ai(z, 1)) < 1e-14
    assert abs(oracle.airy_ai(0) - 3 ** (-2 / 3) / special.gamma(2 / 3)) < 1e-15


def test_airy_kdv_values():
    xi = 3 ** (-1 / 3)
    assert abs(xi - 0.6933612) < 1e-7
    assert abs(oracle.airy_kdv_u(1, 1) - 3 * xi * oracle.airy_ai(xi)) < 1e-15
    assert abs(oracle.airy_kdv_u(1, 1) - 0.3962394797) < 1e-10
    assert oracle.airy_kdv_u(0, 2.0) == 0
    assert oracle.airy_kdv_un(1, 1.3, 0.7) == oracle.airy_kdv_u(1.3, 0.7)
    assert abs(oracle.airy_kdv_v(1e-12, 1) - 1) < 1e-10


def test_airy_kdv_un_is_time_derivative():
    x, t, h = 1.1, 0.8, 1e-5
    for n in (1, 2, 3):
        fd = (oracle.airy_kdv_un(n, x, t + h, 40) - oracle.airy_kdv_un(n, x, t - h, 40)) / (2 * h)
        assert abs(fd - oracle.airy_kdv_un(n + 1, x, t)) < 1e-6 * (3 * t) ** -(n + 1)


def test_airy_kdv_u_solves_kdv():
    x, t, h = 1.2, 0.7, 1e-3
    f = oracle.airy_kdv_u
    ut = (f(x, t + h) - f(x, t - h)) / (2 * h)
    uxxx = (f(x + 2 * h, t) - 2 * f(x + h, t) + 2 * f(x - h, t) - f(x - 2 * h, t)) / (2 * h ** 3)
    assert abs(ut + uxxx) < 1e-5


def test_airy_line_quadrature_agrees():
    """Brute-force quadrature of -(9/2pi) int_{Im lam = 1} lam^2 e^{i lam + i lam^3} dlam."""
    def f(s):
        lam = s + 1j
        return (lam * lam * np.exp(1j * lam + 1j * lam ** 3)).real
    val, _ = integrate.quad(f, -12, 12, limit=2000, epsabs=1e-13, epsrel=0)
    assert abs(-9 / (2 * math.pi) * val - oracle.airy_kdv_u(1, 1)) < 1e-9
