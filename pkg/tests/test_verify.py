"""The verification-report contract and the suite runners."""

import json
import random

import pytest

from wittforge.fields import FieldSpec
from wittforge.verify import (
    SUITES,
    VerificationReport,
    extension_of,
    field_label,
    qsqrt,
    random_complex,
    run_all,
    run_suite,
)

Q = FieldSpec.Q()
F5 = FieldSpec.Fp(5)


def test_report_sorts_cases_by_id():
    cases = [
        {"id": "b", "law": "l", "inputs": {}, "status": "pass"},
        {"id": "a", "law": "l", "inputs": {}, "status": "pass"},
    ]
    report = VerificationReport("demo", cases)
    assert [c["id"] for c in report.cases] == ["a", "b"]


def test_report_requires_witness_on_failure():
    bad = [{"id": "a", "law": "l", "inputs": {}, "status": "fail"}]
    with pytest.raises(ValueError):
        VerificationReport("demo", bad)


def test_report_counts_and_verdict():
    cases = [
        {"id": "a", "law": "l", "inputs": {}, "status": "pass"},
        {"id": "b", "law": "l", "inputs": {}, "status": "fail", "witness": {"x": 1}},
        {"id": "c", "law": "l", "inputs": {}, "status": "inconclusive", "witness": {"y": 2}},
    ]
    report = VerificationReport("demo", cases)
    assert report.summary() == {"pass": 1, "fail": 1, "inconclusive": 1, "total": 3}
    assert not report.passed
    assert [c["id"] for c in report.failures()] == ["b", "c"]


def test_report_json_omits_timing():
    report = run_suite("scharlau")
    assert report.wall_time > 0
    payload = report.to_json()
    assert set(payload) == {"suite", "summary", "cases"}


def test_run_suite_rejects_unknown_name():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_suites_are_deterministic_given_a_seed():
    a = run_suite("towers", seed=5, size=6).to_json()
    b = run_suite("towers", seed=5, size=6).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_size_override():
    report = run_suite("hilbert", seed=1, size=10)
    assert report.summary() == {"pass": 10, "fail": 0, "inconclusive": 0, "total": 10}


def test_every_case_names_its_law_and_inputs():
    report = run_suite("witt", seed=3, size=2)
    for case in report.cases:
        assert case["law"]
        assert isinstance(case["inputs"], dict)


def test_run_all_covers_every_suite():
    reports = run_all(seed=9, size=2)
    assert sorted(r.suite for r in reports) == sorted(SUITES)


def test_random_complex_varies_and_is_valid():
    rng = random.Random(12)
    shapes = set()
    for _ in range(20):
        cx = random_complex(F5, rng)
        assert any(cx.terms.values())
        shapes.add(tuple(sorted(cx.terms.items())))
    assert len(shapes) > 5


def test_extension_cache_returns_identical_objects():
    assert extension_of(F5, 3) is extension_of(F5, 3)
    assert extension_of(F5, 1) == F5  # degree one is the base itself


def test_field_labels():
    assert field_label(Q) == "Q"
    assert field_label(F5) == "F5"
    assert field_label(extension_of(F5, 2)) == "F25"
    assert field_label(qsqrt(2)).startswith("Q[")  # falls back to the structural repr
