import json
import math

import numpy as np
import pytest

import specflow as sf


@pytest.fixture(scope="module")
def binding():
    return sf.build_binding_profile(5.0)


def test_profile_values(binding):
    assert binding.kind == "binding"
    assert binding.f(0.05) == pytest.approx(0.0025, abs=1e-15)
    assert binding.delta(1.0) == pytest.approx(2.5, abs=1e-14)
    assert all(ok for _, ok, _ in binding.validate())
    again = sf.profile_from_json(binding.to_json())
    assert again.V == binding.V
    assert json.loads(binding.to_json())["kind"] == "binding"


def test_dehn_profile():
    d = sf.build_dehn_profile(30.0, 0.5)
    assert d.kind == "dehn_twist"
    assert d.f(-1.0) == pytest.approx(30.0)
    with pytest.raises(RuntimeError):
        sf.build_dehn_profile(2.0, 0.5)


def test_modes_and_counts(binding):
    mp = sf.mode_point(binding, 1, 399)
    assert mp.gamma == pytest.approx(400.0)
    assert mp.rho_star == pytest.approx(math.sqrt(2 / 400))
    assert sf.lattice_count(binding, 0.5) == 0
    modes = sf.enumerate_modes(binding, 20.0, "binding")
    assert len(modes) == sf.lattice_count(binding, 20.0, "binding")
    with pytest.raises(ValueError):
        sf.mode_point(binding, 0, 0)


def test_crossing(binding):
    op = sf.assemble(binding, 1, 399)
    assert op.backend == "pole_disc"
    r = sf.crossing_r(op, 395.0, 405.0)
    assert abs(r - 400.0) < 1e-3
    vals, vecs, res = sf.small_eigs(op, 402.0, 1)
    assert vals[0] == pytest.approx(1.0, abs=0.1)
    assert max(res) <= 1e-8
    assert sf.eigen_derivative(op, r) == pytest.approx(0.5, abs=0.05)


def test_model_sf(binding):
    count, rows = sf.model_sf(binding, 12.0, "binding", threads=1)
    assert count == sum(1 for row in rows if row[3] <= 12.0)
    assert all(abs(row[3] - row[2]) <= 5.0 for row in rows)


def test_oscillator():
    assert sf.kernel1d(math.pi, 0.0) == pytest.approx(1.0)
    z = sf.kernel2d(10.0, 3, 0.2 + 0.1j)
    assert isinstance(z, complex)
    td = sf.TaylorData()
    td.gamma = 40.0
    assert sf.second_order_lambda(td, 50.0) == pytest.approx(5.0)
    value, bound, holds = sf.decay_bound(3, 9000, 0.2)
    assert holds and value <= bound
    x = np.linspace(-12 / math.sqrt(50), 12 / math.sqrt(50), 4001)
    eta = [xi * sf.kernel1d(50.0, xi) for xi in x]
    rep = sf.green1d_bound_check(50.0, list(x), eta)
    assert rep["ratio"] == pytest.approx(0.25, abs=1e-6)


def test_matrix_flow():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    b = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h0, h1 = a + a.conj().T, b + b.conj().T
    flow, crossings = sf.spectral_flow([h0, h1])
    assert flow == sf.negcount_delta(h0, h1)
    assert sum(c[1] * c[2] for c in crossings) == flow


def test_eta_and_index():
    assert sf.eta_circle(0.25) == pytest.approx((0.5, 0))
    assert sf.eta_circle(5.0) == (0.0, 1)
    assert isinstance(sf.index_sigma(5.0, 0.5, 10), int)


def test_lemmas():
    s = sf.run_lemma_suite(20, 1, 200)
    assert s["matchings_found"] == 20
    assert s["welch_ok"] == s["welch_sets"]
    assert s["min_max_coherence"] >= sf.welch_lower_bound(5, 4) - 1e-9
