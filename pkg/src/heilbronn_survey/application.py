from __future__ import annotations

from typing import TYPE_CHECKING

from cleo.application import Application
from cleo.exceptions import CleoError

from heilbronn_survey import __version__
from heilbronn_survey.command import EXIT_INVALID_ARGUMENT
from heilbronn_survey.command import BoundsCommand
from heilbronn_survey.command import CheckCommand
from heilbronn_survey.command import CountCommand
from heilbronn_survey.command import DecomposeCommand
from heilbronn_survey.command import DensityCommand
from heilbronn_survey.command import SurveyCommand
from heilbronn_survey.command import Theorem2Command
from heilbronn_survey.command import VerifyCommand


if TYPE_CHECKING:
    from cleo.commands.command import Command
    from cleo.io.io import IO


COMMANDS: tuple[type[Command], ...] = (
    BoundsCommand,
    CheckCommand,
    CountCommand,
    DecomposeCommand,
    DensityCommand,
    SurveyCommand,
    Theorem2Command,
    VerifyCommand,
)


class HeilbronnApplication(Application):
    def __init__(self) -> None:
        super().__init__("heilbronn", __version__)

        for command in COMMANDS:
            self.add(command())

    def _run(self, io: IO) -> int:
        # unknown commands, unknown options and missing arguments are usage errors
        try:
            return super()._run(io)
        except CleoError as e:
            if not self._catch_exceptions:
                raise
            self.render_error(e, io)

            return EXIT_INVALID_ARGUMENT


def main() -> int:
    exit_code: int = HeilbronnApplication().run()
    return exit_code
