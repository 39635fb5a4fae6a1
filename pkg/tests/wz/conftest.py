import random

import pytest
from _pytest.monkeypatch import MonkeyPatch

from utilities.constants import Constants as CONST
from verifiers.wz.certificates import GridBounds


@pytest.fixture(scope="session")
def wz_bounds() -> GridBounds:
    """Fixture with the certificate acceptance grid (l <= 5, s <= 4, n - s <= 10).

    Returns:
        GridBounds: Bounds built from Constants.
    """
    return GridBounds(CONST.WZ_L_MAX, CONST.WZ_S_MAX, CONST.WZ_N_EXTENT)


@pytest.fixture(scope="session")
def small_bounds() -> GridBounds:
    """Fixture with a reduced grid for mutation and sampling tests."""
    return GridBounds(3, 2, 5)


@pytest.fixture(params=[1, 7, 2021, 31337], ids=lambda seed: f"seed={seed}")
def rng(request) -> random.Random:
    """Seeded random generator, one test instance per seed.

    Args:
        request: Pytest request object carrying the seed as ``param``.

    Returns:
        random.Random: Generator seeded with ``request.param``.
    """
    return random.Random(request.param)


@pytest.fixture(scope="function")
def report_dir(tmp_path, monkeypatch: MonkeyPatch):
    """Points the default report directory at a temporary path.

    Args:
        tmp_path: Pytest temporary directory.
        monkeypatch (MonkeyPatch): Used to set the environment variable.

    Returns:
        Path: The directory named by the report-directory environment variable.
    """
    target = tmp_path / "reports"
    monkeypatch.setenv(CONST.REPORT_DIR_ENV, str(target))
    return target


@pytest.fixture(autouse=True)
def no_report_dir(request, monkeypatch: MonkeyPatch):
    """Clears the report-directory variable unless a test asks for ``report_dir``."""
    if "report_dir" not in request.fixturenames:
        monkeypatch.delenv(CONST.REPORT_DIR_ENV, raising=False)
