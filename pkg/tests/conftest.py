import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hetcycle.cascade import CascadeConfig, required_mu_sign, run_cascade  # noqa: E402
from hetcycle.chart_model import (ParamPoint, SaddleSpectrum, TangencyType,  # noqa: E402
                                  synthesize_family)
from hetcycle.unfolding import unfold_cascade  # noqa: E402

SPECTRUM = (4.0, 2.0, 0.5)


@pytest.fixture(scope="session")
def spectrum():
    return SaddleSpectrum(*SPECTRUM)


@pytest.fixture(scope="session")
def elliptic_family(spectrum):
    return synthesize_family(TangencyType.ELLIPTIC, spectrum, 1)


@pytest.fixture(scope="session")
def hyperbolic_family(spectrum):
    return synthesize_family(TangencyType.HYPERBOLIC, spectrum, 1)


def matched_mu0(kind, surf, size=0.01):
    b00 = surf.taylor(ParamPoint())[1]
    return size * required_mu_sign(kind, b00, surf.eta0())


def _run(spectrum, family, kind):
    surf, curve = family
    cfg = CascadeConfig(mu0=matched_mu0(kind, surf), m_min=10, m_max=19)
    result = run_cascade(spectrum, surf, curve, cfg)
    summary = unfold_cascade(result, spectrum)
    return result, summary


@pytest.fixture(scope="session")
def elliptic_run(spectrum, elliptic_family):
    return _run(spectrum, elliptic_family, TangencyType.ELLIPTIC)


@pytest.fixture(scope="session")
def hyperbolic_run(spectrum, hyperbolic_family):
    return _run(spectrum, hyperbolic_family, TangencyType.HYPERBOLIC)
