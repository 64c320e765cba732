"""One test per acceptance criterion; each prints its pass/fail line."""

from __future__ import annotations

import pytest

import conftest
from isolab.suite import CRITERIA, DEFAULT_SEED


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n}")
def test_criterion(number):
    result = CRITERIA[number](DEFAULT_SEED)
    line = result.line()
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert result.passed, "\n".join(str(f) for f in result.failures[:10])
