import math
import os

import pytest

from tdqwalk import kernels

HERE = os.path.dirname(__file__)
FIXTURES = os.path.join(HERE, "fixtures")

_CRITERIA: list[str] = []


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    """Each available stepping kernel in turn."""
    return kernels.BACKENDS[request.param]


@pytest.fixture
def record_criterion():
    """Store a one-line verdict that is echoed again in the terminal summary."""

    def record(number: int, title: str, passed: bool, detail: str) -> None:
        line = f"criterion {number} {'PASS' if passed else 'FAIL'}: {title} ({detail})"
        print(line)
        _CRITERIA.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


def hadamard_exact(eta_is_plus: bool, steps: int) -> dict[int, tuple[int, int]]:
    """Integer amplitudes of the constant theta=pi/4, alpha=beta=0 walk.

    The walk starts from |+> (or |->) at the origin, and the true amplitudes
    are the returned integers divided by 2**(steps/2).
    """
    plus = {0: 1} if eta_is_plus else {}
    minus = {} if eta_is_plus else {0: 1}
    for _ in range(steps):
        new_p, new_m = {}, {}
        for n in set(plus) | set(minus):
            p, m = plus.get(n, 0), minus.get(n, 0)
            new_p[n + 1] = new_p.get(n + 1, 0) + p + m
            new_m[n - 1] = new_m.get(n - 1, 0) + p - m
        plus, minus = new_p, new_m
    return {n: (plus.get(n, 0), minus.get(n, 0)) for n in set(plus) | set(minus)}


QUARTER = math.pi / 4
