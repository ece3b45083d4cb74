import math
import os
from pathlib import Path

import pytest

import msrss

DATA = Path(os.environ.get("MSRSS_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_exact_cells():
    assert msrss.exact_efficiency(0.5, 3, 1)["pssr"] == pytest.approx(37.5, abs=1e-12)
    assert msrss.exact_efficiency(0.5, 3, 2)["pssr"] == pytest.approx(52.880859375, abs=1e-12)
    assert msrss.msrss_strata(0.5, 3, 2) == pytest.approx([7 / 128, 0.5, 121 / 128])


def test_simulation_matches_oracle():
    exact = msrss.exact_efficiency(0.3, 3, 2)["re"]
    mc = msrss.simulate_efficiency(0.3, 3, 2, ranking="perfect", reps=20000, seed=11)
    assert mc["provenance"] == "monte-carlo"
    assert abs(mc["re"] - exact) <= 4 * mc["mc_stderr"]


def test_simulation_is_reproducible():
    a = msrss.simulate_efficiency(0.5, 3, 1, lam=0.8, reps=2000, seed=3, workers=1)
    b = msrss.simulate_efficiency(0.5, 3, 1, lam=0.8, reps=2000, seed=3, workers=4)
    assert a == b


def test_draw_and_estimate():
    rows = msrss.draw_msrss(0.4, 3, 2, 50, seed=5)
    assert len(rows) == 3 and all(len(row) == 50 for row in rows)
    p_hat = msrss.estimate_proportion(rows, r=2)
    assert p_hat == sum(map(sum, rows)) / 150
    lo, hi = msrss.wald_interval(rows, r=2)
    assert 0 <= lo <= p_hat <= hi <= 1


def test_single_cycle_interval_needs_fallback():
    rows = [[0], [1], [1]]
    with pytest.raises(ValueError):
        msrss.wald_interval(rows)
    lo, hi = msrss.wald_interval(rows, fallback_variance=True)
    assert lo < 2 / 3 < hi


def test_bad_ranking_is_value_error():
    with pytest.raises(ValueError):
        msrss.simulate_efficiency(0.5, 3, 1, ranking="psychic", reps=10)


def test_fixture_summary():
    info = msrss.load_csv(DATA / "wbcd_fixture.csv", ["Y2", "Y6"])
    assert info["n_rows"] == 28
    assert info["dropped_rows"] == 2
    assert 0 < info["p"] < 1
    assert set(info["spearman"]) == {"Y2", "Y6"}


def test_spearman_monotone_transform():
    a = [1.0, 2.0, 2.0, 5.0, 7.0]
    b = [0.3, 0.1, 0.9, 0.8, 1.0]
    assert msrss.spearman(a, b) == pytest.approx(msrss.spearman([math.exp(v) for v in a], b))
