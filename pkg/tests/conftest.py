import numpy as np
import pytest

import synccool as sc

# main-figure parameter set: N=100, kappa=780, NGc=40, delta=kappa/2, w=NGc/4
FIG_PHYS = dict(n_atoms=100, kappa=780.0, delta=390.0, w_pump=10.0, n_gamma_c=40.0)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the full-scale long-running reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def fig_params():
    return sc.PhysicalParams(**FIG_PHYS)


@pytest.fixture()
def small_params():
    return sc.PhysicalParams(n_atoms=8, kappa=780.0, delta=390.0, w_pump=10.0,
                             n_gamma_c=40.0)


def random_state(params, rng, p_scale=1.0):
    """Generic valid semiclassical state with a PSD correlation matrix."""
    n = params.n_atoms
    x = rng.uniform(0, 2 * np.pi, n)
    p = rng.normal(0, p_scale, n)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    corr = a @ a.conj().T
    corr /= np.max(np.diag(corr).real)
    return sc.SemiclassicalState(t=0.0, x=x, p=p, corr=corr)


# ---------------------------------------------------------------------------
# acceptance-criteria reporting: one pass/fail line per criterion at the end
# ---------------------------------------------------------------------------
ACCEPTANCE_RESULTS = []


def record_acceptance(number, passed, detail):
    line = f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_RESULTS.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)
