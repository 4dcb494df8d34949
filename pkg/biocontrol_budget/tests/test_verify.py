"""
Tests for the seeded verification suite and its random draws.

Run: python -m pytest biocontrol_budget/tests/test_verify.py -v
"""

import math
import time

import numpy as np
import pytest

from biocontrol_budget.model import ImpulseParams, lotka_volterra
from biocontrol_budget.stability import harvest_alone_suffices
from biocontrol_budget.verify.checks import draw_params, draw_rates, run_all

VERIFY_BUDGET_SECONDS = 60.0


def _params(**overrides) -> ImpulseParams:
    values = dict(d=1.0, alpha_x=0.5, alpha_y=0.5, T_h=1.0, T_r=1.0, mu=0.5)
    values.update(overrides)
    return ImpulseParams(**values)


# ── Rate draws ───────────────────────────────────────────────────

def test_rates_found_when_harvest_floor_exceeds_draw_range():
    # -ln(1 - 0.8145)/0.2131 ~ 7.9, above every f'(0) in [0.2, 3]
    params = _params(alpha_x=0.8145, T_h=0.2131, T_r=0.2131)
    rng = np.random.default_rng(0)
    for _ in range(50):
        fp0, gp0 = draw_rates(rng, params)
        assert fp0 > -math.log(1 - 0.8145) / 0.2131
        assert not harvest_alone_suffices(fp0 / gp0, gp0, params)


def test_rates_always_non_trivial_on_random_params():
    rng = np.random.default_rng(0)
    for side in ("harvest", "release"):
        for _ in range(200):
            params = draw_params(rng, side)
            fp0, gp0 = draw_rates(rng, params)
            assert not harvest_alone_suffices(fp0 / gp0, gp0, params)


def test_rates_refused_when_harvest_removes_all_pests():
    with pytest.raises(ValueError, match="alpha_x = 1"):
        draw_rates(np.random.default_rng(0), _params(alpha_x=1.0))


# ── Full suite ───────────────────────────────────────────────────

@pytest.mark.parametrize("seed", [0, 3])
def test_run_all_passes_within_budget(seed):
    start = time.perf_counter()
    results = run_all(lotka_volterra(1.0, 1.0, 1.0), np.random.default_rng(seed))
    elapsed = time.perf_counter() - start
    assert [r.name for r in results if not r.passed] == []
    assert len(results) == 9
    assert elapsed < VERIFY_BUDGET_SECONDS
