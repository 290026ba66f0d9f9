import itertools

import numpy as np
import pytest

from lunarflow.scenario import ScenarioConfig, solve_scenario

# acceptance results, printed once at the end of the run
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def isru_result():
    return solve_scenario(ScenarioConfig(name="isru_baseline", isru_enabled=True))


@pytest.fixture(scope="session")
def earth_result():
    return solve_scenario(ScenarioConfig(name="earth_baseline", isru_enabled=False))


def vertex_optimum(c, G, h, tol=1e-9):
    """Brute-force ``min c x  s.t.  G x <= h`` over every basic solution.

    Returns ``(objective, x)`` or ``(None, None)`` when nothing is feasible.
    Assumes the feasible set is bounded.
    """
    c = np.asarray(c, float)
    G = np.asarray(G, float)
    h = np.asarray(h, float)
    n = c.size
    combos = np.array(list(itertools.combinations(range(G.shape[0]), n)))
    if not combos.size:
        return None, None
    M = G[combos]
    rhs = h[combos]
    det = np.linalg.det(M)
    ok = np.abs(det) > 1e-9
    if not ok.any():
        return None, None
    xs = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
    scale = 1.0 + np.abs(h).max()
    feas = np.all(xs @ G.T <= h + tol * scale, axis=1)
    if not feas.any():
        return None, None
    vals = xs[feas] @ c
    k = int(np.argmin(vals))
    return float(vals[k]), xs[feas][k]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
