import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from multihyp import App, Signature, Var

settings.register_profile("repo", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

SIG = Signature.binary()
SIG2 = Signature.parse("f:2,g:3,h:1")

# Lines reported by the acceptance tests, echoed after the run.
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])


def terms(sig=SIG, max_depth=4, nvars=3):
    """Hypothesis strategy for terms of depth <= max_depth."""
    leaves = st.integers(1, nvars).map(Var)

    def extend(children):
        return st.one_of(
            *[
                st.lists(children, min_size=a, max_size=a).map(lambda args, n=n: App(n, args))
                for n, a in sig.symbols
            ]
        )

    return st.recursive(leaves, extend, max_leaves=2 ** max_depth)


@pytest.fixture
def sig():
    return SIG


@pytest.fixture
def rng():
    return random.Random(1234)
