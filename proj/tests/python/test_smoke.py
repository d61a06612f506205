import json
import math
from pathlib import Path

import pytest

import momsum

DATA = Path(__file__).resolve().parents[2] / "data"


def factorials(N):
    return momsum.MomentSequence.make("factorial_power", {"s": 1.0}, N)


def test_kernel_values():
    k = momsum.make_gevrey_kernel(1.0)
    assert k.E(1.0) == pytest.approx(math.e, rel=1e-14)
    assert k.e(2.0) == pytest.approx(2.0 * math.exp(-2.0), rel=1e-14)
    assert k.moment(3.0).real == pytest.approx(6.0, rel=1e-14)
    with pytest.raises(momsum.DomainError):
        momsum.make_gevrey_kernel(2.5)


def test_euler_series_sum():
    N = 30
    coeffs = [(-1) ** p * math.factorial(p) for p in range(N + 1)]
    res = momsum.borel_sum(coeffs, factorials(N), 1.0, 0.0, [0.1])
    z = res["points"][0]
    # int_0^inf e^{-t} / (1 + z t) dt at z = 0.1
    assert z["sum"][0] == pytest.approx(0.9156333, abs=1e-6)
    assert abs(z["sum"][1]) < 1e-12


def test_singular_direction():
    coeffs = [math.factorial(p) for p in range(31)]
    with pytest.raises(momsum.SingularDirectionError):
        momsum.borel_sum(coeffs, factorials(30), 1.0, 0.0, [0.1])


def test_sequence_diagnostics():
    q = momsum.MomentSequence.make("q_factorial", {"q": 0.5}, 40)
    assert momsum.check_strongly_regular(q)["snq_verdict"] == "fail"
    g = momsum.MomentSequence.make("factorial_power", {"s": 1.5}, 200)
    assert momsum.check_strongly_regular(g)["snq_verdict"] == "pass"
    assert momsum.estimate_omega(g)["omega"] == pytest.approx(1.5, abs=0.05)


def test_closed_form_solve():
    problem = json.loads((DATA / "problems" / "closed_form.json").read_text())
    sol = momsum.solve(problem, mode="rational")
    assert sol["residual"] == 0.0
    assert sol["transformed_residual"] == 0.0
    with pytest.raises(momsum.ConfigError):
        momsum.solve(dict(problem, sigma=1))


def test_growth_fit():
    mags = [math.lgamma(2 * n + 1) for n in range(61)]
    fit = momsum.fit_growth([math.exp(x) for x in mags], factorials(60), 20, 60)
    assert fit["s_est"] == pytest.approx(2.0, abs=0.1)
