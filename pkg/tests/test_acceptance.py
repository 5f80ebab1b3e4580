"""Acceptance suite: one PASS/FAIL line per criterion, exact comparisons throughout."""

import subprocess
import sys

import pytest

from essmon.verify import CRITERIA, Context


@pytest.fixture(scope="module")
def ctx():
    return Context(seed=42, jobs=1)


def report(capsys, line):
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(ctx, capsys, number):
    result = CRITERIA[number](ctx)
    report(capsys, result.line())
    passed = result.passed
    first = next(iter(result.detail.get("mismatches") or result.detail.get("failures") or []), None)
    assert passed, f"criterion {number}: {result.summary}; first mismatch: {first}"


def test_criterion_11_determinism(capsys):
    cmd = [sys.executable, "-m", "essmon.cli", "verify-all", "--seed", "42"]
    first = subprocess.run(cmd, capture_output=True, timeout=600)
    second = subprocess.run(cmd, capture_output=True, timeout=600)
    same = first.stdout == second.stdout and first.returncode == second.returncode
    ok = same and bool(first.stdout)
    summary = f"two verify-all runs, {len(first.stdout)} bytes, {'identical' if same else 'different'}"
    report(capsys, f"{'PASS' if ok else 'FAIL'}  11  determinism: {summary}")
    assert ok
