from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qdom.enriched import QCategory
from qdom.quantale import ch_max, ch_plus, q2

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile(
    "qdom", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qdom")

QUANTALES = [q2(), ch_plus(1), ch_plus(2), ch_max(2)]


def close(q, s):
    """Smallest transitive structure above ``s`` (the diagonal is already the unit)."""
    n = len(s)
    s = [list(r) for r in s]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    v = q.join(s[x][z], q.mul(s[x][y], s[y][z]))
                    if v != s[x][z]:
                        s[x][z] = v
                        changed = True
    return s


@st.composite
def quantales(draw):
    return draw(st.sampled_from(QUANTALES))


@st.composite
def categories(draw, q=None, min_size=1, max_size=3):
    q = q or draw(quantales())
    n = draw(st.integers(min_size, max_size))
    raw = [[q.unit if i == j else draw(st.sampled_from(list(q.elements()))) for j in range(n)] for i in range(n)]
    return QCategory(q, close(q, raw))


@st.composite
def presheaves(draw, X):
    """A vector ``psi`` with ``X(x, y) (x) psi(y) <= psi(x)``, closed from a random seed."""
    q = X.quantale
    seed = [draw(st.sampled_from(list(q.elements()))) for _ in X.objects()]
    return tuple(q.join_all(q.mul(X.structure[x][y], seed[y]) for y in X.objects()) for x in X.objects())


@pytest.fixture
def fixtures_dir():
    return FIXTURES


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
