"""Acceptance gate: every criterion runs at its stated tolerance and prints
one pass/fail line. The shared implementations live in
magictrap.acceptance so the CLI selftest exercises exactly the same checks.
"""
import pytest

from magictrap import acceptance


@pytest.mark.parametrize("check", acceptance.ALL_CHECKS,
                         ids=[c.__name__.removeprefix("check_")
                              for c in acceptance.ALL_CHECKS])
def test_acceptance_criterion(check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}  {result.name}: {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
