from __future__ import annotations

import os

from pathlib import Path
from typing import TYPE_CHECKING
from typing import Any

from cleo.commands.command import Command
from cleo.helpers import argument
from cleo.helpers import option

from heilbronn_survey.config import RunConfig
from heilbronn_survey.config import load_config
from heilbronn_survey.criterion import criterion_verdict
from heilbronn_survey.criterion import theorem2_report
from heilbronn_survey.criterion import verify_witness
from heilbronn_survey.decomposition import search_decomposition
from heilbronn_survey.densities import density_report
from heilbronn_survey.exceptions import HeilbronnError
from heilbronn_survey.exceptions import InvalidArgumentError
from heilbronn_survey.exceptions import PreconditionError
from heilbronn_survey.exporter import ReportExporter
from heilbronn_survey.oracle import CHECKS
from heilbronn_survey.oracle import run_checks
from heilbronn_survey.polynomial import MonicIntPolynomial
from heilbronn_survey.survey import MODE_MONTECARLO
from heilbronn_survey.survey import LocalSpec
from heilbronn_survey.survey import box_count
from heilbronn_survey.survey import exact_count_aligned
from heilbronn_survey.survey import exhaustive_survey
from heilbronn_survey.survey import lower_bound_report
from heilbronn_survey.survey import montecarlo_survey


if TYPE_CHECKING:
    from collections.abc import Iterable


EXIT_INVALID_ARGUMENT = 2
EXIT_PRECONDITION = 3
EXIT_VERIFY_FAILED = 4


class ReportCommand(Command):
    """
    Base for subcommands that print one or more reports.

    Subclasses implement ``reports`` and may return a non-zero status from
    ``exit_code`` once their reports are written.
    """

    options = [  # noqa: RUF012
        option(
            "config",
            None,
            "A key = value file with run settings.",
            flag=False,
        ),
        option(
            "format",
            "f",
            "Format to export to: json or csv (survey reports only).",
            flag=False,
        ),
        option("out", "o", "Append the reports to this file.", flag=False),
    ]

    #: Flags mapped onto RunConfig fields when the command declares them.
    CONFIG_OPTIONS: tuple[str, ...] = (
        "pair-bound",
        "pv-constant",
        "enumeration-cap",
        "seed",
        "threads",
        "samples",
        "mode",
    )

    def handle(self) -> int:
        try:
            config = self.run_config()
            exporter = ReportExporter(self.io).with_config(config)
            output = Path(self.option("out")) if self.option("out") else None
            status = 0
            for report in self.reports(config):
                exporter.export(config.output_format, report, output)
                status = max(status, self.exit_code(report))
        except PreconditionError as e:
            self.line_error(f"<error>{e}</error>")
            return EXIT_PRECONDITION
        except InvalidArgumentError as e:
            self.line_error(f"<error>{e}</error>")
            return EXIT_INVALID_ARGUMENT
        except HeilbronnError as e:
            self.line_error(f"<error>{e}</error>")
            return 1

        return status

    def reports(self, config: RunConfig) -> Iterable[Any]:
        raise NotImplementedError

    def exit_code(self, report: Any) -> int:
        return 0

    def run_config(self) -> RunConfig:
        overrides: dict[str, Any] = {}
        declared = {opt.name for opt in self.definition.options}
        for name in self.CONFIG_OPTIONS:
            if name in declared:
                overrides[name] = self.option(name)
        overrides["output_format"] = self.option("format")

        path = self.option("config")
        config = load_config(
            Path(path) if path else None, overrides, environ=dict(os.environ)
        )
        if self.io.is_very_verbose():
            settings = ", ".join(f"{k}={v}" for k, v in config.as_dict().items())
            self.line_error(f"<comment>Using {settings}</comment>")

        return config

    def integer_option(self, name: str, required: bool = True) -> int | None:
        return _integer(f"--{name}", self.option(name), required)

    def integer_argument(self, name: str) -> int:
        value = _integer(name, self.argument(name), True)
        assert value is not None

        return value

    def required(self, name: str) -> int:
        value = self.integer_option(name)
        assert value is not None

        return value

    def warn_vacuous(self, label: str, vacuous: bool) -> None:
        if vacuous:
            self.line_error(
                f"<warning>{label} is at least 1: the bound is vacuous.</warning>"
            )


class DensityCommand(ReportCommand):
    name = "density"
    description = "Prints the exact local densities and effective bounds for p and n."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option("p", None, "The prime p.", flag=False),
        option("n", None, "The degree n.", flag=False),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        report = density_report(self.required("p"), self.required("n"))
        self.warn_vacuous("epsilon(p)", report.epsilon_vacuous)

        return [report]


class DecomposeCommand(ReportCommand):
    name = "decompose"
    description = "Looks for p = u*q1 + v*q2 with q1 not dividing u, q2 not dividing v."

    arguments = [  # noqa: RUF012
        argument("p", "The prime to split."),
        argument("q1", "The smaller prime."),
        argument("q2", "The larger prime."),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        return [
            search_decomposition(
                self.integer_argument("p"),
                self.integer_argument("q1"),
                self.integer_argument("q2"),
            )
        ]


class CheckCommand(ReportCommand):
    name = "check"
    description = "Decides whether Heilbronn's criterion applies to a polynomial."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option(
            "poly",
            None,
            'Ascending coefficients "a0,a1,...,a{n-1}" of the monic polynomial.',
            flag=False,
        ),
        option("p", None, "The Eisenstein prime p.", flag=False),
        option("pair-bound", "Y", "Largest prime tried in a pair.", flag=False),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        text = self.option("poly")
        if not text:
            raise InvalidArgumentError("The --poly option is required.")
        f = MonicIntPolynomial.parse(text)
        if self.io.is_verbose():
            self.line_error(f"<comment>Checking {f.pretty()}</comment>")

        verdict = criterion_verdict(f, self.required("p"), config.pair_bound)
        if verdict.witness is not None:
            verify_witness(f, verdict.witness)

        return [verdict]


class Theorem2Command(ReportCommand):
    name = "theorem2"
    description = "Counts the admissible u for a pair against the main term."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option("p", None, "The prime p.", flag=False),
        option("n", None, "The degree n.", flag=False),
        option("q1", None, "The smaller prime of the pair.", flag=False),
        option("q2", None, "The larger prime of the pair.", flag=False),
        option(
            "pv-constant",
            None,
            "Constant of the Polya-Vinogradov error term.",
            flag=False,
        ),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        return [
            theorem2_report(
                self.required("p"),
                self.required("n"),
                self.required("q1"),
                self.required("q2"),
                config.pv_constant,
            )
        ]


class SurveyCommand(ReportCommand):
    name = "survey"
    description = "Measures how often the criterion applies up to height X."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option("p", None, "The Eisenstein prime p.", flag=False),
        option("n", None, "The degree n.", flag=False),
        option("X", None, "The height bound.", flag=False),
        option("pair-bound", "Y", "Largest prime tried in a pair.", flag=False),
        option("mode", None, "exhaustive or mc.", flag=False),
        option("seed", None, "Seed of the Monte Carlo sampler.", flag=False),
        option("samples", None, "Number of Monte Carlo samples.", flag=False),
        option(
            "enumeration-cap",
            None,
            "Largest number of tuples an exhaustive survey may enumerate.",
            flag=False,
        ),
        option("threads", None, "Worker processes for exhaustive surveys.", flag=False),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        p, n, X = self.required("p"), self.required("n"), self.required("X")

        if config.mode == MODE_MONTECARLO:
            report = montecarlo_survey(
                p,
                n,
                X,
                pair_bound=config.pair_bound,
                seed=config.seed,
                samples=config.samples,
                config=config.as_dict(),
                io=self.io,
            )
        else:
            report = exhaustive_survey(
                p,
                n,
                X,
                pair_bound=config.pair_bound,
                enumeration_cap=config.enumeration_cap,
                threads=config.threads,
                config=config.as_dict(),
                io=self.io,
            )
        if self.io.is_very_verbose():
            self.line_error(f"<comment>Finished in {report.wall_time:.3f}s</comment>")

        return [report]


class CountCommand(ReportCommand):
    name = "count"
    description = "Counts Eisenstein tuples satisfying local root conditions."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option("p", None, "The Eisenstein prime p.", flag=False),
        option("n", None, "The degree n.", flag=False),
        option("X", None, "The height bound.", flag=False),
        option(
            "k",
            None,
            "Count the aligned box (-k*m, k*m]^n instead of using --X.",
            flag=False,
        ),
        option(
            "rootless", None, "Primes without a root, e.g. 2,3.", flag=False
        ),
        option("rooted", None, "Primes with at least one root.", flag=False),
        option(
            "enumeration-cap",
            None,
            "Largest number of tuples to enumerate.",
            flag=False,
        ),
        option("threads", None, "Worker processes.", flag=False),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        spec = LocalSpec(
            self.required("p"),
            self.required("n"),
            rootless_at=_prime_list("--rootless", self.option("rootless")),
            rooted_at=_prime_list("--rooted", self.option("rooted")),
        )

        k = self.integer_option("k", required=False)
        if k is not None:
            aligned = exact_count_aligned(
                spec,
                k,
                threads=config.threads,
                enumeration_limit=config.enumeration_cap,
            )
            if not aligned.verified:
                self.line_error(
                    "<warning>The aligned box is above the enumeration cap;"
                    " only the density count is reported.</warning>"
                )
            return [aligned]

        return [
            box_count(
                spec,
                self.required("X"),
                threads=config.threads,
                enumeration_cap=config.enumeration_cap,
            )
        ]


class BoundsCommand(ReportCommand):
    name = "bounds"
    description = "Prints the theoretical lower bounds on the proportion for p and n."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option("p", None, "The prime p.", flag=False),
        option("n", None, "The degree n.", flag=False),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        report = lower_bound_report(self.required("p"), self.required("n"))
        self.warn_vacuous("epsilon(p)", report.epsilon_vacuous)
        self.warn_vacuous("epsilon_hat(p)", report.epsilon_hat_vacuous)

        return [report]


class VerifyCommand(ReportCommand):
    name = "verify"
    description = "Runs the brute-force oracle suite and prints pass/fail per check."

    options = [  # noqa: RUF012
        *ReportCommand.options,
        option("full", None, "Use the full sample sizes and ranges."),
        option(
            "only",
            None,
            "Run only the named checks.",
            flag=False,
            multiple=True,
        ),
    ]

    def reports(self, config: RunConfig) -> Iterable[Any]:
        names = self.option("only") or None
        if names:
            unknown = set(names) - {check.name for check in CHECKS}
            if unknown:
                raise InvalidArgumentError(
                    f"Unknown checks: {', '.join(sorted(unknown))}."
                )

        for result in run_checks(full=self.option("full"), names=names):
            status = "<info>PASS</info>" if result.passed else "<error>FAIL</error>"
            self.line_error(
                f"{status} {result.name} ({result.seconds}s): {result.detail}"
            )
            yield result

    def exit_code(self, report: Any) -> int:
        return 0 if report.passed else EXIT_VERIFY_FAILED


def _integer(label: str, value: str | None, required: bool) -> int | None:
    if value is None or value == "":
        if required:
            raise InvalidArgumentError(f"The {label} option is required.")
        return None
    try:
        return int(value.replace("_", ""))
    except ValueError as e:
        raise InvalidArgumentError(f"{label} expects an integer, got {value!r}.") from e


def _prime_list(label: str, value: str | None) -> tuple[int, ...]:
    if not value:
        return ()
    try:
        return tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError as e:
        raise InvalidArgumentError(
            f"{label} expects comma-separated integers, got {value!r}."
        ) from e
