"""Smoke checks of the python bindings."""

import math

import numpy as np
import pytest

bifrac = pytest.importorskip("bifrac")


def test_kernel_value():
    v = bifrac.kernel_value(1.0, 1.0, math.pi / 2)
    want = complex(math.cos(1.0), math.sin(1.0)) / math.sqrt(2.0 * math.pi)
    assert abs(v - want) < 1e-14


def test_operator_unitary_and_state_column():
    op, path, trusted = bifrac.bifrac_operator(0.4, -0.3, 0.3, 0.2, 48)
    assert path == "split-product"
    assert trusted
    defect = op.conj().T @ op - np.eye(48)
    assert np.max(np.abs(defect)) < 1e-10
    psi = bifrac.coherent_amplitudes(0.4, -0.3, 0.3, 0.2, 48)
    assert np.max(np.abs(op[:12, 0] - psi[:12])) < 1e-8


def test_phase_constant_and_band_rejection():
    assert bifrac.product_vs_integral_phase(0.3, 0.2) == 1.0
    assert bifrac.product_vs_integral_phase(2.0, 0.3) == -1j
    with pytest.raises(bifrac.Error):
        bifrac.bifrac_operator(1.0, 1.0, math.pi / 2 + 0.4, 0.4, 16)


def test_moments_and_photon_stats():
    m = bifrac.moments(2.0, 2.0, 0.6)
    assert m["mean_x"] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-8)
    assert m["sigma_xx"] == pytest.approx(0.5, abs=1e-8)
    s = bifrac.photon_stats(2.0, 2.0, 0.6, 40)
    assert s["mean_n"] > 0.0
    assert s["norm_captured"] > 0.999
    assert len(s["a_n"]) == 41


def test_grid_dict():
    op = np.zeros((24, 24), dtype=complex)
    op[0, 0] = 1.0
    g = bifrac.grid("wigner", op, (-2.0, 2.0, 5), (-2.0, 2.0, 5))
    assert g["kind"] == "wigner"
    assert g["angles"] is None
    assert g["trusted"]
    assert g["values"].shape == (5, 5)
    assert g["values"][2, 2] == pytest.approx(1.0, abs=1e-12)
    assert list(g["alpha"]) == [-2.0, -1.0, 0.0, 1.0, 2.0]
    with pytest.raises(ValueError):
        bifrac.grid("weyl", op, (-2.0, 2.0, 5), (-2.0, 2.0, 5), angles=(0.3, 0.2))


def test_fingerprint_matches_closed_action():
    # Fit block pinned well below the squeeze ridge; the default N/4 block
    # tracks the truncation leakage instead of converging.
    op, _, _ = bifrac.bifrac_operator(0.7, 0.2, 0.5, 0.35, 128)
    fp = bifrac.gaussian_fingerprint(op, 16)
    S, d = bifrac.heisenberg_action(0.7, 0.2, 0.5, 0.35)
    assert np.max(np.abs(fp["S"] - S)) < 1e-6
    assert np.max(np.abs(fp["d"] - d)) < 1e-6
    assert fp["residual"] < 1e-6


def test_verify_subset():
    results = bifrac.run_verify(only="kernel_point_values")
    assert results
    assert all(r["pass"] for r in results)
