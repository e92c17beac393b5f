"""Acceptance criteria, each at its stated tolerance.

One line per criterion is printed in the terminal summary (see conftest).
Run standalone with ``python -m tests.test_acceptance``.
"""
import math

import pytest

from superdiscord import verify

# tol=inf: no extra cap, every check uses its own stated tolerance
CTX = verify.Context(samples=500, seed=42, tol=math.inf)
RESULTS = []


def run_check(check):
    out = check(CTX)
    return out[0] if isinstance(out, tuple) else out


@pytest.mark.slow
@pytest.mark.parametrize("check", verify.CHECKS, ids=lambda c: c.__name__)
def test_criterion(check):
    res = run_check(check)
    RESULTS.append(res)
    print(res.line())
    if res.hard:
        assert res.passed, res.line()


if __name__ == "__main__":
    results, _ = verify.run_all(CTX, echo=print)
    failed = [r for r in results if r.hard and not r.passed]
    raise SystemExit(1 if failed else 0)
