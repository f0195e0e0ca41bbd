import numpy as np
import pytest

from qcaclock import analysis
from qcaclock.devices import build_device, inverter, majority, wire
from qcaclock.schedule import Schedule


@pytest.mark.parametrize("n", range(1, 11))
def test_wire_quality_closed_form(n):
    f0, f1 = analysis.quality_params(wire(n))
    assert f0 == pytest.approx((n + 3) / 16.0, abs=1e-12)
    assert f1 == pytest.approx((n + 3) / 16.0, abs=1e-12)
    assert analysis.wire_quality_param(n) == (n + 3) / 16.0


def test_quality_factors_match_definition():
    net = majority(1, 0, 1)
    f0, f1 = analysis.quality_params(net)
    q0, q1 = analysis.quality_factors(net, 5.0, 0.05)
    assert q0 == pytest.approx(1.0 - f0 / 25.0)
    assert q1 == pytest.approx(1.0 - f1 * 0.05 ** 2)


def test_alpha1_bound_definition():
    net = inverter()
    _, f1 = analysis.quality_params(net)
    bound = analysis.alpha1_bound(net)
    assert 1.0 - f1 * bound ** 2 == pytest.approx(0.99, abs=1e-12)


def test_lz_probability_and_max_rate_consistent():
    d0, w = 0.4, 0.12
    g = analysis.lz_max_rate(d0, w, threshold=0.99)
    assert analysis.lz_probability(d0, w, g) == pytest.approx(0.01, rel=1e-10)
    # slower switching is more adiabatic
    assert analysis.lz_probability(d0, w, g / 2) < 0.01


def test_wire_excitations_limits():
    eps = analysis.wire_excitations(5, 0.0, 1.0)
    q = np.arange(1, 6) * np.pi / 6
    assert np.allclose(eps, np.sqrt(np.sin(q) ** 2 + np.cos(q) ** 2))
    eps = analysis.wire_excitations(5, 1.0, 0.0)
    assert np.allclose(eps, 1.0)


def test_wire_lz_params_match_dense_spectrum():
    """The analytic k=1 wire gap minimum agrees with brute-force
    diagonalization of the unbiased chain."""
    from qcaclock.quantum import build_hamiltonian

    n = 4
    sched = Schedule("quasi")
    pars = analysis.wire_lz_params(n, sched)
    net = wire(n)
    s_grid = np.linspace(0, 1, 2001)
    gaps = []
    for s in s_grid:
        vals = np.linalg.eigvalsh(build_hamiltonian(net, *sched.evaluate(s)))
        gaps.append(vals[1] - vals[0])
    gaps = np.asarray(gaps)
    assert pars.delta0 == pytest.approx(gaps.min(), rel=1e-5)
    assert pars.s_min == pytest.approx(s_grid[np.argmin(gaps)], abs=1e-3)
    assert pars.width > 0


@pytest.mark.parametrize("kind,value", [("linear", 1.80), ("quasi", 3.19),
                                        ("sinus", 1.99)])
def test_nu1_closed_forms(kind, value):
    assert analysis.nu1_analytic(kind) == pytest.approx(value, abs=5e-3)


def test_wire_fmax_model_scaling():
    f4 = analysis.wire_fmax_model(4, 2.9)
    f8 = analysis.wire_fmax_model(8, 2.9)
    assert f8 < f4
    # dominated by the (N+1)^-2 factor
    assert f4 / f8 == pytest.approx((9 / 5) ** 2, rel=0.1)


def test_incorrect_excited_census_wire():
    census = analysis.incorrect_excited_census(wire(5))
    assert census.gap == pytest.approx(1.0)
    assert census.degeneracy == 5


def test_incorrect_excited_census_majority():
    census = analysis.incorrect_excited_census(majority(1, 0, 1))
    assert census.degeneracy == 2
    census = analysis.incorrect_excited_census(build_device("Maj-111"))
    assert census.degeneracy == 1


def test_beta_star_estimate_formula():
    net = wire(5)
    census = analysis.incorrect_excited_census(net)
    expect = (np.log(census.degeneracy) + np.log(100.0)) / census.gap
    assert analysis.beta_star_estimate(net) == pytest.approx(expect)


def test_relaxed_quality_monotone_and_crossing():
    net = wire(5)
    q_lo = analysis.relaxed_logical_quality(net, 2.0)
    q_hi = analysis.relaxed_logical_quality(net, 20.0)
    assert q_lo < 0.99 < q_hi
    bstar = analysis.beta_star_thermal(net)
    assert analysis.relaxed_logical_quality(net, bstar) == pytest.approx(
        0.99, abs=1e-8)
