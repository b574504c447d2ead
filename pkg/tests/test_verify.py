import json
import math

import numpy as np
import pytest

from quarterplane import heat
from quarterplane.catalog import builtin_data
from quarterplane.expr import from_expressions
from quarterplane.oracle import erfc_solution, gauss_kernel_derivative
from quarterplane.nonuniq import ProbeConfig
from quarterplane.transforms import HalfLineData
from quarterplane.verify import (
    CandidateSolution,
    MissingDerivativeError,
    boundary_traces,
    check_compatibility,
    decay_probes,
    half_line_l2,
    integrability_exponent,
    residual,
    run_battery,
)


def cand(fn, eq="heat", data=None, name="c"):
    return CandidateSolution(fn, eq, HalfLineData.zero() if data is None else data, name, True)


U1 = cand(gauss_kernel_derivative, name="u1")
ERFC = cand(erfc_solution, data=HalfLineData.step(), name="erfc")


def test_residual_examples():
    assert residual(U1, 1e-3) <= 1e-5
    assert residual(cand(lambda x, t: x * 0.0)) == 0
    assert abs(residual(cand(lambda x, t: x * x)) - 2) < 1e-8
    assert residual(cand(lambda x, t: x + 0 * t)) < 1e-9
    # second-order stencils: the erfc residual is truncation error, O(h^2)
    r1, r2 = residual(ERFC, 1e-3), residual(ERFC, 5e-4)
    assert r1 <= 1e-6 and 3.5 <= r1 / r2 <= 4.5


def test_residual_kdv_polynomial():
    # V = x^3: V_t + V_xxx = 6
    c = cand(lambda x, t: x ** 3 + 0 * t, "kdv")
    assert abs(residual(c) - 6) < 1e-6


def test_residual_margin_enforced():
    with pytest.raises(ValueError):
        residual(U1, 1e-2, (np.array([0.01, 1.0]), np.array([1.0])))


def test_residual_order_two():
    r1 = residual(U1, 1e-2)
    r2 = residual(U1, 5e-3)
    assert 3.5 <= r1 / r2 <= 4.5


def test_traces():
    # u1(1e-4, t) ~ 1e-4 t^(-3/2) / (2 sqrt pi): t >= 0.5 keeps it below 1e-4
    tr = boundary_traces(U1, (1e-2, 1e-3, 1e-4), t_probes=np.geomspace(0.5, 10, 8),
                         x_probes=np.geomspace(0.5, 10, 8))
    assert tr.trace_sup_x0 < 1e-4 and tr.trace_sup_t0 < 1e-4
    assert tr.monotone
    one = boundary_traces(cand(lambda x, t: np.ones_like(x)))
    assert one.trace_sup_x0 == 1 and one.trace_sup_t0 == 1
    v = boundary_traces(ERFC, t_probes=np.geomspace(0.1, 10, 8), x_probes=np.geomspace(1, 10, 8))
    assert v.trace_sup_x0 < 1e-3 and v.trace_sup_t0 < 1e-12


def test_traces_reject_bad_offsets():
    with pytest.raises(ValueError):
        boundary_traces(U1, (1e-3, 1e-2))
    with pytest.raises(ValueError):
        boundary_traces(U1, (1e-2, 1e-5))


def test_compatibility_examples():
    step = check_compatibility(from_expressions("0", "1", "0"), "heat")
    assert not step[0].passed and step[0].residual == -1
    for eq in ("heat", "kdv"):
        assert all(f.passed for f in check_compatibility(HalfLineData.zero(), eq))
    compat = check_compatibility(builtin_data("exp-compat"), "heat")
    assert all(f.passed for f in compat)
    kd = check_compatibility(builtin_data("exp-decay"), "kdv")
    assert kd[0].passed and not kd[1].passed and kd[1].residual == -1
    assert all(f.passed for f in check_compatibility(builtin_data("exp-compat"), "kdv"))


def test_compatibility_with_forcing_uses_exact_derivatives():
    # u0 = sin(x) + 1, g0 = 1 + 2t, f = x^2 + 2: heat needs -sin(0) + 2 = 2
    d = from_expressions("sin(x)+1", "1+2*t", "x^2+2")
    assert all(f.passed and f.residual == 0 for f in check_compatibility(d, "heat"))
    # kdv: g0'(0) = 2, -u0'''(0) + f(0,0) = cos(0) + 2 = 3
    k = check_compatibility(d, "kdv")
    assert k[1].residual == -1


def test_compatibility_missing_derivatives():
    d = HalfLineData(u0=lambda x: np.exp(-x), g0=lambda t: np.exp(t))
    with pytest.raises(MissingDerivativeError):
        check_compatibility(d, "heat")


def test_integrability_exponent_examples():
    fit = integrability_exponent(U1, 1.0)
    assert abs(fit.p + 1.5) < 0.01 and fit.violation
    I1 = half_line_l2(lambda x: gauss_kernel_derivative(x, 1.0))[0]
    assert abs(I1 - math.sqrt(math.pi / 2) / (4 * math.pi)) < 1e-10
    erfc_fit = integrability_exponent(ERFC, 1.0)
    assert erfc_fit.p > -0.1 and not erfc_fit.violation
    zero = integrability_exponent(cand(lambda x, t: 0 * x), 1.0)
    assert zero.degenerate and zero.p is None and not zero.violation


def test_integrability_divergent():
    fit = integrability_exponent(cand(lambda x, t: np.ones_like(x)), 1.0)
    assert fit.divergent and fit.violation


def test_integrability_scaling():
    a = integrability_exponent(U1, 1.0).p
    b = integrability_exponent(cand(lambda x, t: 7.0 * gauss_kernel_derivative(x, t)), 1.0).p
    assert abs(a - b) < 1e-9


def test_integrability_time_derivative():
    fit = integrability_exponent(U1, 1.0, derivative=True)
    assert abs(fit.p + 3.5) < 0.01


def test_decay_probes():
    rec = decay_probes(U1)
    assert rec.decaying
    i = rec.x.index(20.0)
    assert rec.V[i][rec.t.index(1.0)] < 1e-40
    assert erfc_solution(20, 1) < 1e-44
    assert not decay_probes(cand(lambda x, t: np.ones_like(x))).decaying
    with pytest.raises(ValueError):
        decay_probes(U1, (1.0, 2.0))


def test_battery_on_compatible_solution():
    c = cand(lambda x, t: np.exp(t - x), data=builtin_data("exp-compat"))
    rep = run_battery(c)
    assert rep.all_pass, rep.clauses
    d = json.loads(rep.to_json())
    assert d["all_pass"] and list(d) == sorted(d)


def test_battery_flags_witness_integrability_only():
    rep = run_battery(U1, ProbeConfig().verify_config())
    failed = [k for k, v in rep.clauses.items() if not v]
    assert failed == ["integrability"]
    assert rep.envelope_violation


def test_candidate_scalar_evaluator():
    c = CandidateSolution(lambda x, t: heat.example1_u(x, t, "closed_form"), "heat")
    assert c(np.array([1.0, 2.0]), 1.0).shape == (2,)
    with pytest.raises(ValueError):
        CandidateSolution(lambda x, t: x, "wave")
