"""
SQLAlchemy-backed archive of verification reports.

Usage:
    from knroots.archive import ReportArchive
    archive = ReportArchive("sqlite:///reports.db")
    archive.store(report)
    archive.is_reproducible(report)
"""

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Union

from sqlalchemy import (
    Boolean,
    Column,
    DateTime,
    Integer,
    MetaData,
    String,
    Table,
    Text,
    create_engine,
    select,
)
from sqlalchemy.engine import Engine, make_url
from sqlalchemy.engine.interfaces import Dialect
from sqlalchemy.exc import ArgumentError, SQLAlchemyError
from sqlalchemy.types import TypeDecorator

from .errors import ConfigurationError, Error
from .report import VerificationReport, dumps

logger = logging.getLogger(__name__)


# MARK: - Column Types


class JSONText(TypeDecorator):
    """JSON documents stored as canonical text.

    Keys are sorted on the way in so equal documents compare equal as text.
    """

    impl = Text
    cache_ok = True

    def process_bind_param(self, value: Any, dialect: Dialect) -> Optional[str]:
        """Serialize Python data to canonical JSON text."""
        if value is None:
            return None
        return dumps(value, indent=None)

    def process_result_value(self, value: Any, dialect: Dialect) -> Any:
        """Parse stored JSON text back into Python data."""
        if value is None:
            return None
        if isinstance(value, (bytes, bytearray)):
            value = value.decode("utf-8")
        return json.loads(value)


metadata = MetaData()

verification_reports = Table(
    "verification_reports",
    metadata,
    Column("id", Integer, primary_key=True, autoincrement=True),
    Column("suite", String(64), nullable=False, index=True),
    Column("monoid", Text, nullable=False),
    Column("parameters", JSONText, nullable=False),
    Column("passed", Boolean, nullable=False),
    Column("cases_run", Integer, nullable=False),
    Column("failures", JSONText, nullable=False),
    Column("digest", String(64), nullable=False),
    Column("created_at", DateTime(timezone=True), nullable=False),
)


# MARK: - Archive


@dataclass(frozen=True)
class ArchivedReport:
    """A stored report row."""

    id: int
    suite: str
    monoid: Dict[str, Any]
    parameters: Dict[str, Any]
    passed: bool
    cases_run: int
    failures: List[Dict[str, Any]]
    digest: str
    created_at: datetime


def _monoid_key(monoid: Any) -> str:
    data = monoid.to_json() if hasattr(monoid, "to_json") else monoid
    return dumps(data, indent=None)


class ReportArchive:
    """Stores verification reports in any SQLAlchemy database."""

    def __init__(self, url_or_engine: Union[str, Engine]) -> None:
        if isinstance(url_or_engine, Engine):
            self.engine = url_or_engine
        else:
            try:
                url = make_url(url_or_engine)
            except ArgumentError as e:
                raise ConfigurationError(
                    f"Invalid archive URL {url_or_engine!r}"
                ) from e
            self.engine = create_engine(url)
        try:
            metadata.create_all(self.engine)
        except SQLAlchemyError as e:
            raise Error(f"Cannot open report archive: {e}") from e
        logger.debug("report archive at %s", self.engine.url)

    def store(self, report: VerificationReport) -> int:
        """Insert a report and return its row id."""
        data = report.to_json()
        row = {
            "suite": report.suite,
            "monoid": _monoid_key(report.parameters.get("monoid", {})),
            "parameters": report.parameters,
            "passed": report.passed,
            "cases_run": report.cases_run,
            "failures": data["failures"],
            "digest": report.digest,
            "created_at": datetime.now(timezone.utc),
        }
        with self.engine.begin() as conn:
            result = conn.execute(verification_reports.insert().values(**row))
            report_id = int(result.inserted_primary_key[0])
        logger.info(
            "stored %s report %d (passed=%s)", report.suite, report_id, report.passed
        )
        return report_id

    def history(
        self, suite: Optional[str] = None, monoid: Optional[Any] = None
    ) -> List[ArchivedReport]:
        """Stored reports, oldest first, optionally filtered."""
        query = select(verification_reports).order_by(verification_reports.c.id)
        if suite is not None:
            query = query.where(verification_reports.c.suite == suite)
        if monoid is not None:
            query = query.where(verification_reports.c.monoid == _monoid_key(monoid))
        with self.engine.connect() as conn:
            rows = conn.execute(query).mappings().all()
        return [
            ArchivedReport(
                id=row["id"],
                suite=row["suite"],
                monoid=json.loads(row["monoid"]),
                parameters=row["parameters"],
                passed=bool(row["passed"]),
                cases_run=row["cases_run"],
                failures=row["failures"],
                digest=row["digest"],
                created_at=row["created_at"],
            )
            for row in rows
        ]

    def is_reproducible(self, report: VerificationReport) -> Optional[bool]:
        """Compare with the latest stored run of the same suite and parameters.

        Returns:
            None when there is no earlier run, else whether the digests agree
        """
        earlier = [
            r
            for r in self.history(report.suite, report.parameters.get("monoid"))
            if dumps(r.parameters, indent=None) == dumps(report.parameters, indent=None)
        ]
        if not earlier:
            return None
        return earlier[-1].digest == report.digest
