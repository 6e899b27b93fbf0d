"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the table.
"""
import pytest

from szilard import verify


@pytest.mark.parametrize("name, check", verify.CHECKS, ids=[n.split(" ", 1)[0] for n, _ in verify.CHECKS])
def test_criterion(name, check, capsys):
    result = verify.run_check(name, check)
    line = f"[{'PASS' if result.passed else 'FAIL'}] {name}: {result.detail}"
    with capsys.disabled():
        print("\n" + line)
    assert result.passed, line
