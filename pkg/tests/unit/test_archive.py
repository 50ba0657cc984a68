"""
Tests for the SQLAlchemy report archive.
"""

import pytest
from sqlalchemy import create_engine, inspect, text

import knroots
from knroots.archive import (
    ArchivedReport,
    JSONText,
    ReportArchive,
    verification_reports,
)
from knroots.errors import ConfigurationError
from knroots.kn import verify_orbits
from knroots.report import VerificationReport


@pytest.fixture
def archive():
    return ReportArchive("sqlite://")


def test_store_and_history(archive, N2):
    """Stored reports come back oldest first with their JSON intact."""
    report = verify_orbits(N2, n_samples=5, seed=1)
    first = archive.store(report)
    second = archive.store(report)
    assert second > first
    history = archive.history()
    assert [r.id for r in history] == [first, second]
    row = history[0]
    assert isinstance(row, ArchivedReport)
    assert row.suite == "orbits"
    assert row.monoid == N2.to_json()
    assert row.parameters == report.parameters
    assert row.passed is True
    assert row.failures == []
    assert row.digest == report.digest


def test_history_filters(archive, N, N2):
    """history filters by suite and by monoid."""
    archive.store(verify_orbits(N, n_samples=3))
    archive.store(verify_orbits(N2, n_samples=3))
    archive.store(VerificationReport("custom", {"monoid": N.to_json()}))
    assert len(archive.history("orbits")) == 2
    assert len(archive.history(monoid=N)) == 2
    assert len(archive.history("orbits", N2.to_json())) == 1


def test_is_reproducible(archive, A1):
    """None before the first run, then a digest comparison."""
    report = verify_orbits(A1, n_samples=5, seed=4)
    assert archive.is_reproducible(report) is None
    archive.store(report)
    assert archive.is_reproducible(verify_orbits(A1, n_samples=5, seed=4)) is True

    changed = verify_orbits(A1, n_samples=5, seed=4)
    changed.check(False, "injected")
    assert archive.is_reproducible(changed) is False


def test_other_parameters_are_not_compared(archive, A1):
    """Runs with another seed are not earlier runs of this one."""
    archive.store(verify_orbits(A1, n_samples=5, seed=1))
    assert archive.is_reproducible(verify_orbits(A1, n_samples=5, seed=2)) is None


def test_failures_are_stored(archive):
    """Failure records round-trip through the JSON column."""
    monoid = {"ambient_dim": 1, "generators": [[1]]}
    report = VerificationReport("custom", {"monoid": monoid})
    report.check(False, "broken", input={"sample": 0}, expected=1, actual=[2, 3])
    archive.store(report)
    (row,) = archive.history("custom")
    assert row.passed is False
    assert row.failures == [
        {
            "check": "broken",
            "input": {"sample": 0},
            "expected": 1,
            "actual": [2, 3],
            "detail": "",
        }
    ]


def test_json_column_is_canonical(archive):
    """Parameters are stored with sorted keys."""
    archive.store(VerificationReport("custom", {"b": 1, "a": [1, 2]}))
    with archive.engine.connect() as conn:
        query = text("SELECT parameters FROM verification_reports")
        stored = conn.execute(query).scalar()
    assert stored == '{"a":[1,2],"b":1}'
    assert JSONText().process_result_value(None, None) is None
    assert JSONText().process_result_value(b'{"x":1}', None) == {"x": 1}


def test_accepts_engine():
    """An existing engine can be passed in."""
    engine = create_engine("sqlite://")
    archive = ReportArchive(engine)
    assert archive.engine is engine
    assert verification_reports.name in inspect(engine).get_table_names()


def test_invalid_url():
    """Unparseable URLs are configuration errors."""
    with pytest.raises(ConfigurationError):
        ReportArchive("not a url")


def test_lazy_package_attribute():
    """The package exposes the archive lazily."""
    assert knroots.ReportArchive is ReportArchive
    with pytest.raises(AttributeError):
        knroots.NoSuchThing


if __name__ == "__main__":
    pytest.main([__file__])
