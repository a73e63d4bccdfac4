"""End-to-end checks at their stated tolerances; each prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the summary alone.
"""
import sys

import pytest

from ellmot import acceptance


def report(result, capsys):
    with capsys.disabled():
        sys.stdout.write("\n" + result.line() + "\n")
    return result


RANK_TARGETS_OFF_BY_ONE = pytest.mark.xfail(
    strict=True,
    reason="the stated targets (3 at n = 2, 7 at n = 3) count words of length < n; the relative motive of "
           "(X^n; D_0, ..., D_n) has rank equal to the number of words of length <= n (7 and 15), "
           "see test_pi1.py::test_resolved_ranks_count_words_up_to_length_n",
)

CASES = [
    (1, acceptance.check_theta),
    (2, acceptance.check_normal_forms),
    (3, acceptance.check_oracle_equivalence),
    (4, acceptance.check_s_independence),
    (5, acceptance.check_composition),
    (6, acceptance.check_six_term_sum),
    (7, acceptance.check_young),
    (8, acceptance.check_resolution),
    pytest.param(9, acceptance.check_pi1_ranks, marks=RANK_TARGETS_OFF_BY_ONE),
    (10, acceptance.check_p1_walkthrough),
]


@pytest.mark.parametrize("number,check", CASES, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_criterion(number, check, capsys):
    result = report(acceptance.run(check), capsys)
    assert result.number == number
    assert result.passed, result.detail
    assert result.in_time, f"took {result.seconds:.1f}s, budget {result.budget}s"


if __name__ == "__main__":
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
