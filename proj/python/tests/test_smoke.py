import math

import pytest

import hamlab


def test_hand_evolution():
    out = hamlab.evolve([1.0, 2.0, 3.0], 0.0, 5.0, [(1.5, 0.1), (4.0, 0.2), (0.5, 0.3)], 1.0)
    assert out["positions"] == [0.5, 1.5, 3.0, 4.0]
    assert len(out["log"]) == 3


def test_lis_small():
    assert hamlab.lis_length([(1, 1), (2, 2), (1.5, 3), (3, 4)]) == 3
    assert hamlab.lis_length([]) == 0


def test_samples_reproducible():
    a = hamlab.sample_line(1.0, -20.0, 20.0, 5)
    assert a == hamlab.sample_line(1.0, -20.0, 20.0, 5)
    assert all(-20.0 <= x <= 20.0 for x in a)
    assert a == sorted(a)
    pts = hamlab.sample_planar(0.0, 10.0, 2.0, 5)
    assert [t for _, t in pts] == sorted(t for _, t in pts)


def test_flux_at_time_zero_counts_particles():
    line = hamlab.sample_line(1.0, -30.0, 10.0, 2)
    res = hamlab.flux(line, -30.0, 10.0, [], -4.0, 0.0, 1.0)
    assert res["value"] == -sum(1 for x in line if -4.0 < x <= 0.0)


def test_skellam_and_ks_helpers():
    assert hamlab.skellam_tail(4.0, 0.0) == 1.0
    assert hamlab.kolmogorov_sf(1.3581) == pytest.approx(0.05, abs=1e-4)
    assert hamlab.certificate_margin(1.0, 10.0) > 0


def test_experiment_summary():
    assert "thm-2-1" in hamlab.experiment_names()
    s = hamlab.run_experiment("thm-2-1", replicas=500, seed=3)
    assert s["experiment"] == "thm-2-1"
    assert isinstance(s["pass"], bool)
    assert math.isfinite(s["estimate"])


def test_identity_and_errors():
    r = hamlab.run_identity("engine-equivalence", seed=4, instances=20)
    assert r["pass"] and r["comparisons"] > 0
    with pytest.raises(ValueError):
        hamlab.run_experiment("thm-2-8", rho=-1.0, replicas=10)
    with pytest.raises(ValueError):
        hamlab.default_config("no-such-experiment")
