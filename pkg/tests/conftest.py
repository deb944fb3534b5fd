from __future__ import annotations

from functools import lru_cache

import pytest

from ikeda_periods.kernel import QuadScalar
from ikeda_periods.qforms import HalfIntMat

LAM = QuadScalar(0, 1, 18209)

# 2B of the genus-3 index matrices
A = HalfIntMat([[2, 0, 1], [0, 2, 1], [1, 1, 2]])
A1 = HalfIntMat([[2, 0, 0], [0, 2, 1], [0, 1, 2]])
A2 = HalfIntMat([[2, 0, 0], [0, 2, 0], [0, 0, 2]])

_ACCEPTANCE: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> str:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    _ACCEPTANCE[n] = line
    print(line)
    return line


@lru_cache(maxsize=None)
def case_parts(case: str, embedding: str = "plus"):
    """Config and computed parts of a verification case, shared across test modules."""
    from ikeda_periods.verifier import CaseConfig, compute_parts

    cfg = CaseConfig.from_curated(case, embedding)
    return cfg, compute_parts(cfg)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])


@pytest.fixture
def lam():
    return LAM
