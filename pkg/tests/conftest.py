import numpy as np
import pytest
from hypothesis import strategies as st

from ffchains import kernels
from ffchains.poset import Poset


@st.composite
def posets(draw, min_n=0, max_n=7):
    """Random poset: random pairs forward in a hidden linear order, closed."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    rel = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                rel[perm[i], perm[j]] = 1
    return Poset.from_matrix(rel)


@st.composite
def posets_with_order(draw, min_n=0, max_n=7):
    P = draw(posets(min_n, max_n))
    return P, draw(st.permutations(range(P.n)))


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
