from __future__ import annotations

import csv
import dataclasses
import io as _io
import json

from enum import Enum
from fractions import Fraction
from functools import partialmethod
from pathlib import Path
from typing import TYPE_CHECKING
from typing import Any

from cleo.io.io import IO

from heilbronn_survey import __version__
from heilbronn_survey.criterion import GcdCondition
from heilbronn_survey.criterion import HeilbronnVerdict
from heilbronn_survey.criterion import HeilbronnWitness
from heilbronn_survey.criterion import InconclusiveReason
from heilbronn_survey.criterion import Route
from heilbronn_survey.criterion import Theorem2Report
from heilbronn_survey.criterion import Theorem2Search
from heilbronn_survey.decomposition import Decomposition
from heilbronn_survey.decomposition import DecompositionSearch
from heilbronn_survey.densities import DensityReport
from heilbronn_survey.densities import RationalInterval
from heilbronn_survey.exceptions import InvalidArgumentError
from heilbronn_survey.oracle import OracleResult
from heilbronn_survey.survey import AlignedCount
from heilbronn_survey.survey import BoxCount
from heilbronn_survey.survey import LocalSpec
from heilbronn_survey.survey import LowerBoundReport
from heilbronn_survey.survey import SurveyReport


if TYPE_CHECKING:
    from typing import ClassVar

    from heilbronn_survey.config import RunConfig


RECORD_TYPES: dict[str, type[Any]] = {
    cls.__name__: cls
    for cls in (
        AlignedCount,
        BoxCount,
        Decomposition,
        DecompositionSearch,
        DensityReport,
        GcdCondition,
        HeilbronnVerdict,
        HeilbronnWitness,
        LocalSpec,
        LowerBoundReport,
        OracleResult,
        RationalInterval,
        SurveyReport,
        Theorem2Report,
        Theorem2Search,
    )
}

ENUM_TYPES: tuple[type[Enum], ...] = (InconclusiveReason, Route)


class ReportExporter:
    """
    Writes reports as JSON lines or CSV rows, to the console or appended to a file.
    """

    FORMAT_JSON = "json"
    FORMAT_CSV = "csv"

    EXPORT_METHODS: ClassVar[dict[str, str]] = {
        FORMAT_JSON: "_export_json",
        FORMAT_CSV: "_export_csv",
    }

    CSV_COLUMNS: ClassVar[tuple[str, ...]] = (
        "p",
        "n",
        "X",
        "mode",
        "total",
        "applies",
        "delta_num",
        "delta_den",
        "bound",
    )

    def __init__(self, io: IO) -> None:
        self._io = io
        self._config: dict[str, Any] = {}

    @classmethod
    def is_format_supported(cls, fmt: str) -> bool:
        return fmt in cls.EXPORT_METHODS

    def with_config(self, config: RunConfig) -> ReportExporter:
        self._config = config.as_dict()

        return self

    def export(self, fmt: str, report: Any, output: IO | Path | None = None) -> None:
        if not self.is_format_supported(fmt):
            raise InvalidArgumentError(f"Invalid export format: {fmt}")

        getattr(self, self.EXPORT_METHODS[fmt])(report, output or self._io)

    def _export_generic(self, report: Any, output: IO | Path, tabular: bool) -> None:
        if tabular:
            if not isinstance(report, SurveyReport):
                raise InvalidArgumentError(
                    "The csv format is only available for survey reports."
                )
            header = isinstance(output, IO) or not _has_content(output)
            content = self.render_csv(report, header=header)
        else:
            content = self.render_json(report) + "\n"

        if isinstance(output, IO):
            output.write(content)
        else:
            with output.open("a", encoding="utf-8", newline="") as f:
                f.write(content)

    _export_json = partialmethod(_export_generic, tabular=False)

    _export_csv = partialmethod(_export_generic, tabular=True)

    def render_json(self, report: Any) -> str:
        data = to_jsonable(report)
        if isinstance(data, dict):
            if not data.get("config"):
                data["config"] = dict(self._config)
            data.setdefault("version", __version__)

        return json.dumps(data, sort_keys=True)

    def render_csv(self, report: SurveyReport, header: bool = True) -> str:
        buffer = _io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if header:
            writer.writerow(self.CSV_COLUMNS)
        writer.writerow(
            [
                report.p,
                report.n,
                report.X,
                report.mode,
                report.total_eisenstein,
                report.applies_count,
                report.delta.numerator,
                report.delta.denominator,
                str(report.theoretical_lower_bound),
            ]
        )

        return buffer.getvalue()

    @classmethod
    def parse(cls, line: str) -> Any:
        """
        Read one JSON report back into the record type that emitted it.
        """
        return from_jsonable(json.loads(line))


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        data: dict[str, Any] = {"kind": type(value).__name__}
        for f in dataclasses.fields(value):
            item = getattr(value, f.name)
            data[f.name] = to_jsonable(item)
            if isinstance(item, Fraction):
                data[f"{f.name}_approx"] = float(item)
        for name in getattr(value, "JSON_PROPERTIES", ()):
            data[name] = to_jsonable(getattr(value, name))

        return data
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]

    return value


def from_jsonable(data: Any, annotation: str = "") -> Any:
    if isinstance(data, dict):
        if set(data) == {"num", "den"}:
            return Fraction(int(data["num"]), int(data["den"]))
        kind = data.get("kind")
        if kind is None:
            return {key: from_jsonable(item) for key, item in data.items()}
        if kind not in RECORD_TYPES:
            raise InvalidArgumentError(f"Unknown report kind: {kind}")

        cls = RECORD_TYPES[kind]
        kwargs = {
            f.name: from_jsonable(data[f.name], str(f.type))
            for f in dataclasses.fields(cls)
            if f.name in data
        }
        return cls(**kwargs)
    if isinstance(data, list):
        items = [from_jsonable(item) for item in data]
        return tuple(items) if annotation.startswith("tuple") else items
    if isinstance(data, str):
        for enum in ENUM_TYPES:
            if enum.__name__ in annotation:
                return enum(data)

    return data


def _has_content(path: Path) -> bool:
    return path.exists() and path.stat().st_size > 0
