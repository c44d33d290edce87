import math

import numpy as np
import pytest

import zenolab


def fixture(delta=0.01, k=5):
    a = math.sqrt(1.0 - (10.0 * delta) ** 2)
    return zenolab.ProtocolParams.from_b(10.0, delta, zenolab.solve_orthogonality(a, 10.0, k), k)


def test_hamiltonian_is_hermitian():
    spec = zenolab.HamiltonianSpec(1.0, 0.5, 0.01)
    h = np.asarray(zenolab.build_hamiltonian(spec))
    assert h.shape == (5, 5)
    assert np.allclose(h, h.conj().T)


def test_helstrom_pure_matches_mixed():
    rng = np.random.default_rng(3)
    for _ in range(20):
        v0 = rng.normal(size=5) + 1j * rng.normal(size=5)
        v1 = rng.normal(size=5) + 1j * rng.normal(size=5)
        v0 /= np.linalg.norm(v0)
        v1 /= np.linalg.norm(v1)
        xi = rng.uniform()
        pure = zenolab.helstrom_pure(v0, v1, xi)
        mixed = zenolab.helstrom_mixed(np.outer(v0, v0.conj()), np.outer(v1, v1.conj()), xi)
        assert abs(pure - mixed) < 1e-12


def test_run_tree_is_consistent():
    r = zenolab.run(fixture())
    leaves = r["leaves"]
    assert len(leaves) == 6
    assert sum(leaf["p_given_h0"] for leaf in leaves) == pytest.approx(1.0, abs=1e-12)
    assert r["total_cost"] >= r["baseline_exact"] - 1e-10
    assert len(r["overlap_trajectory"]) == 6


def test_paper_cost_ratio():
    p = fixture(0.001, 20)
    assert zenolab.original_cost(p) / zenolab.total_cost_paper_mode(p) == pytest.approx(80.0, rel=1e-12)


def test_paper_baseline_series():
    closed, leading = zenolab.baseline_paper_convention(fixture())
    assert leading == pytest.approx(2.5e-3, abs=5e-7)
    assert closed > leading


def test_fit_scaling_one_step_click():
    fit = zenolab.fit_scaling("one_step_click", [1e-2, 10 ** -2.5, 1e-3], b=10.0, k=1, dt=1.0)
    assert fit["exponent"] == pytest.approx(4.0, abs=0.2)


def test_sweep_is_deterministic(tmp_path):
    cfg = "b=10\ndelta=0.01,0.001\nk=1,5,20\ndt=auto\nmode=both\n"
    first = zenolab.sweep(cfg)
    assert first == zenolab.sweep(cfg)
    csv_path, summary_path = zenolab.emit_report(cfg, tmp_path / "out.csv")
    assert open(csv_path).read() == first[0]
    assert open(summary_path).read() == first[1]


def test_validation_maps_to_value_error():
    with pytest.raises(ValueError):
        zenolab.sweep("b=10\ndelta=0.01\nk=1\nxi=1.5\n")
    with pytest.raises(ValueError):
        zenolab.solve_orthogonality(1.0, 0.0, 1)
