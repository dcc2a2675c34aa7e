import os
import random

import pytest
from hypothesis import HealthCheck, settings

from conevanish.field import Field
from conevanish.ideals import Ideal
from conevanish.ring import PolyRing

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

QQ = Field(0)
F31 = Field(31)


def ring(decl_vars, field=QQ, order="grevlex"):
    return PolyRing(field, decl_vars.split(",") if isinstance(decl_vars, str) else decl_vars, order)


def ideal(R, *gens):
    return Ideal(R, list(gens))


def random_ideal(rng: random.Random, R: PolyRing, ngens=3, max_deg=2, max_terms=3) -> Ideal:
    """Small random ideal with coefficients in [-3, 3]."""
    gens = []
    for _ in range(ngens):
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = [0] * R.nvars
            for _ in range(rng.randint(0, max_deg)):
                e[rng.randrange(R.nvars)] += 1
            terms[tuple(e)] = R.field(rng.randint(-3, 3))
        gens.append(sum((R.monomial(e, c) for e, c in terms.items()), R.zero()))
    return Ideal(R, gens)


@pytest.fixture
def qq():
    return QQ


@pytest.fixture
def f31():
    return F31


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "ACCEPTANCE_RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
