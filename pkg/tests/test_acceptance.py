"""The ten headline acceptance checks, one pass/fail line each."""

import json

import pytest

from qtalg.acceptance import CHECKS, run_check, run_suite


@pytest.mark.parametrize("name", list(CHECKS), ids=list(CHECKS))
def test_acceptance(name, capsys):
    result = run_check(name)
    with capsys.disabled():
        print(f"\n{result.line()}", flush=True)
    assert result.ok, result.detail


def test_suite_is_deterministic():
    first = [r.to_json() for r in run_suite(["shift-equation"], seed=7)]
    second = [r.to_json() for r in run_suite(["shift-equation"], seed=7)]
    for a, b in zip(first, second):
        a.pop("seconds")
        b.pop("seconds")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_suite_rejects_unknown_check():
    with pytest.raises(ValueError, match="unknown"):
        run_suite(["no-such-check"])
