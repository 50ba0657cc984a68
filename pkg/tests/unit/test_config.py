"""
Tests for settings and report helpers.
"""

import pytest

from knroots.config import Settings, resolve
from knroots.errors import ConfigurationError
from knroots.report import MAX_RECORDED_FAILURES, VerificationReport, dumps


# MARK: - Settings


def test_defaults():
    """Default tolerances are 1e-9."""
    s = Settings()
    assert s.angle_tol == 1e-9
    assert s.log_tol == 1e-9
    assert s.enumeration_limit == 10_000


def test_from_env_reads_variables():
    """KNROOTS_TOL sets both tolerances; the specific variables win."""
    s = Settings.from_env(
        {
            "KNROOTS_TOL": "1e-6",
            "KNROOTS_LOG_TOL": "1e-4",
            "KNROOTS_ENUMERATION_LIMIT": "50",
        }
    )
    assert s.angle_tol == 1e-6
    assert s.log_tol == 1e-4
    assert s.enumeration_limit == 50


def test_from_env_ignores_empty_values():
    """Empty strings count as unset."""
    environ = {"KNROOTS_TOL": "", "KNROOTS_ENUMERATION_LIMIT": ""}
    assert Settings.from_env(environ) == Settings()


def test_from_env_uses_process_environment(monkeypatch):
    """Without a mapping, os.environ is read."""
    monkeypatch.setenv("KNROOTS_ANGLE_TOL", "1e-7")
    assert resolve(None).angle_tol == 1e-7
    assert resolve(Settings()).angle_tol == 1e-9


@pytest.mark.parametrize(
    "environ",
    [
        {"KNROOTS_TOL": "tiny"},
        {"KNROOTS_TOL": "0"},
        {"KNROOTS_ANGLE_TOL": "-1"},
        {"KNROOTS_LOG_TOL": "nan"},
        {"KNROOTS_ENUMERATION_LIMIT": "many"},
        {"KNROOTS_ENUMERATION_LIMIT": "0"},
    ],
)
def test_invalid_environment(environ):
    """Bad values raise ConfigurationError."""
    with pytest.raises(ConfigurationError):
        Settings.from_env(environ)


def test_with_tolerance():
    """with_tolerance sets both tolerances and validates them."""
    s = Settings().with_tolerance(1e-5)
    assert (s.angle_tol, s.log_tol) == (1e-5, 1e-5)
    with pytest.raises(ConfigurationError):
        Settings().with_tolerance(float("inf"))


# MARK: - Reports


def test_dumps_is_canonical():
    """Keys are sorted and compact output has no spaces."""
    assert dumps({"b": [1, 2], "a": None}, indent=None) == '{"a":null,"b":[1,2]}'
    assert dumps({"b": 1, "a": 2}).startswith('{\n  "a": 2')


def test_report_counts_checks():
    """passed iff no check failed; failures past the cap are only counted."""
    report = VerificationReport("custom", {})
    assert report.check(True, "ok")
    assert report.passed
    for i in range(MAX_RECORDED_FAILURES + 5):
        report.check(False, "bad", input=i)
    assert not report.passed
    assert report.cases_run == MAX_RECORDED_FAILURES + 6
    assert report.failure_count == MAX_RECORDED_FAILURES + 5
    assert len(report.failures) == MAX_RECORDED_FAILURES
    assert report.to_json()["failures"][0]["input"] == 0


def test_report_digest_tracks_content():
    """Equal reports share a digest."""
    a = VerificationReport("custom", {"seed": 1})
    b = VerificationReport("custom", {"seed": 1})
    assert a.digest == b.digest
    b.check(True, "ok")
    assert a.digest != b.digest
    assert len(a.digest) == 64


if __name__ == "__main__":
    pytest.main([__file__])
