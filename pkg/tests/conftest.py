import numpy as np
import pytest

from vecuq import _kernels
from vecuq.field import generate_synthetic
from vecuq.spherical import spherical_to_cartesian


@pytest.fixture(scope="session", autouse=True)
def jit_warmup():
    # one-time compile (disk-cached) so timed tests measure the kernels
    _kernels.warmup()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith("test_c"):
                continue
            crit = name.split("_")[1]  # c01 ... c09
            verdict = "PASS" if outcome == "passed" else "FAIL"
            label = name.split("_", 2)[2]
            lines[f"{crit}:{label}"] = f"criterion {int(crit[1:])} [{label}]: {verdict}"
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])


@pytest.fixture(scope="session")
def synthetic_field():
    return generate_synthetic(nx=10, ny=10, nt=5, n_members=20, noise_amp=0.1, seed=7)


def clustered_with_deviant() -> np.ndarray:
    """10 members: a tight directional cluster whose per-coordinate extremes
    are attained twice, plus one short deviant at a large azimuth offset.

    Twinned extremes keep every cluster member strictly above the depth
    floor C(n-1,3), while the deviant (unique magnitude minimum) sits
    exactly on it.
    """
    triples = np.array(
        [
            [1.8, 1.50, -0.20],
            [1.8, 1.50, -0.20],
            [2.2, 1.60, 0.20],
            [2.2, 1.60, 0.20],
            [2.0, 1.55, 0.00],
            [2.0, 1.55, 0.00],
            [2.0, 1.48, 0.12],
            [2.0, 1.48, 0.12],
            [2.05, 1.53, -0.05],
            [0.4, 1.52, 0.90],  # deviant, index 9
        ]
    )
    return spherical_to_cartesian(triples)


DEVIANT_INDEX = 9


@pytest.fixture
def fig3_members():
    return clustered_with_deviant()
