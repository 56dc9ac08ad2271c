import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hiddensky.model import Dataset, make_schema

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_dataset(rng, n, domains, classes="RQ"):
    """Up to ``n`` distinct uniform points on the given grid."""
    domains = list(domains)
    total = int(np.prod(domains))
    n = min(n, total)
    flat = rng.choice(total, size=n, replace=False)
    rows = np.stack(np.unravel_index(flat, domains), axis=1) if n else np.zeros((0, len(domains)), dtype=int)
    return Dataset.from_rows(make_schema(domains, classes), rows.tolist())


@st.composite
def datasets(draw, m=st.integers(2, 4), dom=st.integers(2, 7), max_n=25, classes="RQ"):
    mm = draw(m)
    doms = [draw(dom) for _ in range(mm)]
    cells = st.tuples(*(st.integers(0, d - 1) for d in doms))
    rows = draw(st.lists(cells, max_size=max_n, unique=True))
    cls = classes if isinstance(classes, str) else draw(st.sampled_from(classes))
    return Dataset.from_rows(make_schema(doms, cls), rows)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def incomparable_set(s, m, rng, domain_class="SQ"):
    """``s`` pairwise-incomparable tuples with distinct values 1..s on every attribute.

    The first ``m - 1`` columns are random permutations; the last ranks tuples
    by decreasing head sum, so any tuple better on every head column is worse on
    the last one.  No value is 0, so no child query is trivially unsatisfiable.
    """
    heads = [rng.permutation(s) + 1 for _ in range(m - 1)]
    total = np.sum(heads, axis=0) if heads else np.zeros(s)
    order = np.lexsort((rng.random(s), -total))
    last = np.empty(s, dtype=np.int64)
    last[order] = np.arange(1, s + 1)
    rows = [tuple(int(h[i]) for h in heads) + (int(last[i]),) for i in range(s)]
    return Dataset.from_rows(make_schema([s + 1] * m, domain_class), rows)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
