"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The summary lines are repeated in an "acceptance criteria" section at the
end of the pytest run; a failure shows the full comparison table.
"""

import pytest

from somos_sigma.reproduce import CRITERIA


def _table(res) -> str:
    return "\n".join(f"  {r.quantity}: ref={r.reference} got={r.computed} tol={r.tolerance} ok={r.passed}" for r in res.rows)


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1), ids=lambda n: f"criterion_{n}")
def test_criterion(number, acceptance_log):
    res = CRITERIA[number - 1]()
    print(res.summary())
    acceptance_log.append(res.summary())
    assert res.rows, "criterion produced no checks"
    assert res.within_time, f"{res.elapsed:.2f}s over the {res.time_limit}s limit"
    assert res.passed, "\n" + _table(res)
