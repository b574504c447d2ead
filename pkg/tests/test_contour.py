import cmath
import math

import numpy as np
import pytest
from scipy import special

from quarterplane.contour import (
    ORIENTATION,
    ComplexPath,
    DecayError,
    PathSegment,
    PoleOnPathError,
    QuadratureError,
    SpectralIntegrand,
    gauss_kronrod,
    in_heat_sector,
    in_kdv_sector,
    integrate,
    make_heat_gamma,
    make_heat_gamma0,
    make_horizontal_line,
    make_kdv_Gamma,
    make_polyline,
    truncation_radius,
)
from quarterplane.oracle import erfc_solution


def _args(path):
    return [cmath.phase(seg.direction) for seg in path if seg.is_ray]


def test_heat_gamma_rays_and_orientation():
    g = make_heat_gamma()
    assert len(g) == 2
    assert np.allclose(sorted(_args(g)), [math.pi / 4, 3 * math.pi / 4])
    left, right = g.segments
    # in along 3pi/4, out along pi/4: the sector lies to the left
    assert left.sense == "incoming" and right.sense == "outgoing"
    assert math.isclose(cmath.phase(left.direction), 3 * math.pi / 4)


def test_heat_sector_membership():
    assert in_heat_sector(1j)
    assert not in_heat_sector(1.0)


def test_heat_gamma0_geometry():
    g0 = make_heat_gamma0()
    assert len(g0) == 3
    seg = g0.segments[1]
    assert abs(seg.start - complex(-1, 1)) < 1e-14 and abs(seg.end - complex(1, 1)) < 1e-14
    assert math.isclose(abs(seg.start), math.sqrt(2))
    assert math.isclose(cmath.phase(seg.start), 3 * math.pi / 4)
    assert math.isclose(g0.distance_to(0), 1.0)


def test_kdv_gamma_rays():
    g = make_kdv_Gamma()
    assert np.allclose(sorted(_args(g)), [math.pi / 3, 2 * math.pi / 3])
    assert in_kdv_sector(1j)
    assert not in_kdv_sector(cmath.exp(1j * math.pi / 6))


def test_horizontal_line():
    line = make_horizontal_line(1)
    assert all(seg.start == 1j for seg in line)
    assert line.segments[1].direction == 1
    with pytest.raises(ValueError):
        make_horizontal_line(0)
    with pytest.raises(ValueError):
        make_horizontal_line(-0.5)


def test_segment_invariants():
    with pytest.raises(ValueError):
        PathSegment.segment(1 + 1j, 1 + 1j)
    with pytest.raises(ValueError):
        PathSegment("ray", 0j, direction=2.0)
    with pytest.raises(ValueError):
        ComplexPath(())
    with pytest.raises(ValueError):
        ComplexPath((PathSegment.segment(0, 1), PathSegment.segment(2, 3)))


def test_unit_segment():
    out = integrate(ComplexPath((PathSegment.segment(0, 1),)), lambda lam: np.ones_like(lam))
    assert abs(out.value - 1) < 1e-14
    assert out.converged and out.abs_error_estimate <= 1e-10


def test_heat_v_on_gamma0_matches_erfc():
    """(i/pi) int_{gamma0} e^{i lam - lam^2} dlam / lam = erfc(1/2); fixes the orientation."""
    integrand = SpectralIntegrand(exponent=lambda lam: 1j * lam - lam * lam,
                                  amplitude=lambda lam: 1 / lam, poles=(0j,))
    out = integrate(make_heat_gamma0(), integrand, 1e-12)
    value = 1j / math.pi * out.value
    assert ORIENTATION == 1
    assert abs(value - 0.4795001222) < 1e-10
    assert abs(value - erfc_solution(1, 1)) < 1e-12
    assert abs(value.imag) < 1e-12


def test_airy_line_integral():
    """int_{Im lam = 1} e^{i lam^3} dlam = 2 pi 3^(-1/3) Ai(0)."""
    integrand = SpectralIntegrand(exponent=lambda lam: 1j * lam ** 3)
    out = integrate(make_horizontal_line(1.0), integrand, 1e-12)
    ai0 = 3 ** (-2 / 3) / special.gamma(2 / 3)
    assert abs(ai0 - 0.3550281) < 1e-7
    assert abs(out.value - 2 * math.pi * 3 ** (-1 / 3) * ai0) < 1e-11


def test_pole_on_path_rejected():
    integrand = SpectralIntegrand(exponent=lambda lam: 1j * lam - lam * lam,
                                  amplitude=lambda lam: 1 / lam, poles=(0j,))
    with pytest.raises(PoleOnPathError):
        integrate(make_heat_gamma(), integrand)


def test_growing_integrand_raises_decay_error():
    integrand = SpectralIntegrand(exponent=lambda lam: lam * lam)
    with pytest.raises(DecayError):
        integrate(make_heat_gamma(), integrand)


def test_budget_exhaustion_is_explicit():
    integrand = SpectralIntegrand(exponent=lambda lam: 1j * 50 * lam - lam * lam)
    with pytest.raises(QuadratureError):
        integrate(make_horizontal_line(0.1), integrand, 1e-12, max_evaluations=200)
    out = integrate(make_horizontal_line(0.1), integrand, 1e-12, max_evaluations=200,
                    strict=False)
    assert not out.converged


def test_truncation_monotonicity():
    """Doubling the truncation radius changes the value by less than the error estimate."""
    integrand = SpectralIntegrand(exponent=lambda lam: 1j * lam * 0.5 + 1j * lam ** 3,
                                  amplitude=lambda lam: lam * lam, growth=2.0)
    line = make_horizontal_line(0.7)
    out = integrate(line, integrand, 1e-10)
    total = 0j
    for seg, R in zip(line, out.truncation_radius):
        val, _, _, ok = gauss_kronrod(lambda s, seg=seg: integrand(seg.point(s)) * seg.unit,
                                      0.0, 2 * R, 1e-12, initial_pieces=16)
        assert ok
        total += seg.sign * val
    assert abs(total - out.value) <= out.abs_error_estimate


def test_truncation_radius_envelope():
    # e^{-lam^2} on the ray arg = pi/8 decays like exp(-cos(pi/4) r^2)
    seg = make_heat_gamma(math.pi / 8).segments[1]
    R = truncation_radius(seg, SpectralIntegrand(exponent=lambda lam: -lam * lam), 1e-10)
    assert math.exp(-math.cos(2 * cmath.phase(seg.direction)) * R * R) < 1e-10


def test_gauss_kronrod_polynomial_exact():
    val, err, n, ok = gauss_kronrod(lambda s: s ** 9, 0.0, 2.0, 1e-12)
    assert ok and abs(val - 2 ** 10 / 10) < 1e-12


def test_polyline_connects():
    p = make_polyline([0, 1 + 1j, 2], head_direction=-1j, tail_direction=1)
    assert len(p) == 4
    assert p.segments[0].sense == "incoming"
    out = integrate(make_polyline([0, 1 + 1j, 2]), lambda lam: np.ones_like(lam))
    assert abs(out.value - 2) < 1e-13


def test_reversed_path_negates():
    integrand = SpectralIntegrand(exponent=lambda lam: 1j * lam + 1j * lam ** 3)
    line = make_horizontal_line(1.0)
    a = integrate(line, integrand).value
    b = integrate(line.reversed(), integrand).value
    assert abs(a + b) < 1e-9
