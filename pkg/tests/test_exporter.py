from __future__ import annotations

import json

from fractions import Fraction
from typing import TYPE_CHECKING

import pytest

from cleo.io.buffered_io import BufferedIO

from heilbronn_survey import __version__
from heilbronn_survey.config import RunConfig
from heilbronn_survey.criterion import InconclusiveReason
from heilbronn_survey.criterion import Route
from heilbronn_survey.criterion import criterion_verdict
from heilbronn_survey.criterion import theorem2_report
from heilbronn_survey.decomposition import search_decomposition
from heilbronn_survey.densities import density_report
from heilbronn_survey.exceptions import InvalidArgumentError
from heilbronn_survey.exporter import ReportExporter
from heilbronn_survey.exporter import from_jsonable
from heilbronn_survey.exporter import to_jsonable
from heilbronn_survey.polynomial import MonicIntPolynomial
from heilbronn_survey.survey import exhaustive_survey


if TYPE_CHECKING:
    from pathlib import Path

    from heilbronn_survey.survey import SurveyReport


@pytest.fixture(scope="module")
def survey() -> SurveyReport:
    return exhaustive_survey(5, 3, 150, pair_bound=3)


def test_is_format_supported() -> None:
    assert ReportExporter.is_format_supported("json")
    assert ReportExporter.is_format_supported("csv")
    assert not ReportExporter.is_format_supported("xml")


def test_export_rejects_unknown_formats() -> None:
    with pytest.raises(InvalidArgumentError, match="Invalid export format: xml"):
        ReportExporter(BufferedIO()).export("xml", density_report(5, 3))


def test_fractions_are_exact_strings() -> None:
    assert to_jsonable(Fraction(2, 27)) == {"num": "2", "den": "27"}
    assert to_jsonable(Fraction(-10**30, 7)) == {"num": str(-10**30), "den": "7"}


def test_json_lines_carry_kind_approximations_and_version() -> None:
    io = BufferedIO()
    ReportExporter(io).with_config(RunConfig()).export("json", density_report(5, 3))

    lines = io.fetch_output().splitlines()
    assert len(lines) == 1

    data = json.loads(lines[0])
    assert data["kind"] == "DensityReport"
    assert data["C"] == {"num": "8", "den": "25"}
    assert data["C_approx"] == pytest.approx(0.32)
    assert data["version"] == __version__
    assert data["config"]["pair_bound"] == 20


def test_json_keys_are_sorted() -> None:
    exporter = ReportExporter(BufferedIO())
    line = exporter.render_json(search_decomposition(37, 2, 3))
    data = json.loads(line)

    assert list(data) == sorted(data)
    assert data["found"] is True
    assert (data["u"], data["v"]) == (11, 5)
    assert data["guaranteed"] is True


def test_json_includes_derived_properties() -> None:
    exporter = ReportExporter(BufferedIO())
    verdict = criterion_verdict(MonicIntPolynomial((5, 5, 0)), 5, 3)
    data = json.loads(exporter.render_json(verdict))

    assert data["applies"] is True
    assert data["witness"]["route"] == "theorem1"
    assert data["reason"] is None
    assert data["rootless"] == [2, 3]


def test_empty_survey_config_is_filled_in(survey: SurveyReport) -> None:
    exporter = ReportExporter(BufferedIO()).with_config(RunConfig(seed=9))
    data = json.loads(exporter.render_json(survey))

    assert data["config"]["seed"] == 9
    assert data["delta"] == {"num": "2", "den": "27"}
    assert data["delta_approx"] == pytest.approx(2 / 27)
    assert data["routes"] == {"theorem1": 12800}


def test_parse_round_trips_reports(survey: SurveyReport) -> None:
    exporter = ReportExporter(BufferedIO())

    assert ReportExporter.parse(exporter.render_json(survey)).delta == survey.delta

    report = theorem2_report(101, 3, 2, 3)
    parsed = ReportExporter.parse(exporter.render_json(report))
    assert parsed == report

    verdict = criterion_verdict(MonicIntPolynomial((5, 5, 5)), 5, 3)
    parsed = ReportExporter.parse(exporter.render_json(verdict))
    assert parsed == verdict
    assert parsed.reason is InconclusiveReason.ALL_PAIRS_HAVE_ROOTS


def test_parse_restores_enums_and_tuples() -> None:
    verdict = criterion_verdict(MonicIntPolynomial((5, 5, 0)), 5, 3)
    parsed = from_jsonable(to_jsonable(verdict))

    assert parsed.rootless == (2, 3)
    assert parsed.witness.route is Route.THEOREM1


def test_parse_rejects_unknown_kinds() -> None:
    with pytest.raises(InvalidArgumentError, match="Unknown report kind: Nope"):
        ReportExporter.parse('{"kind": "Nope"}')


def test_csv_for_survey_reports(survey: SurveyReport) -> None:
    io = BufferedIO()
    ReportExporter(io).export("csv", survey)

    assert io.fetch_output() == (
        "p,n,X,mode,total,applies,delta_num,delta_den,bound\n"
        "5,3,150,exhaustive,172800,12800,2,27,2/27\n"
    )


def test_csv_is_only_for_surveys() -> None:
    with pytest.raises(InvalidArgumentError, match="only available for survey"):
        ReportExporter(BufferedIO()).export("csv", density_report(5, 3))


def test_export_appends_to_files(tmp_path: Path) -> None:
    path = tmp_path / "reports.jsonl"
    exporter = ReportExporter(BufferedIO())

    exporter.export("json", density_report(5, 3), path)
    exporter.export("json", density_report(7, 3), path)

    lines = path.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["p"] for line in lines] == [5, 7]


def test_csv_header_is_written_once(tmp_path: Path, survey: SurveyReport) -> None:
    path = tmp_path / "surveys.csv"
    exporter = ReportExporter(BufferedIO())

    exporter.export("csv", survey, path)
    exporter.export("csv", survey, path)

    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("p,n,X")
    assert lines[1] == lines[2]
