from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from cleo.testers.application_tester import ApplicationTester
from cleo.testers.command_tester import CommandTester

from heilbronn_survey.application import HeilbronnApplication


if TYPE_CHECKING:
    from tests.types import CommandTesterFactory


@pytest.fixture
def app() -> HeilbronnApplication:
    return HeilbronnApplication()


@pytest.fixture
def app_tester(app: HeilbronnApplication) -> ApplicationTester:
    return ApplicationTester(app)


@pytest.fixture
def command_tester_factory(app: HeilbronnApplication) -> CommandTesterFactory:
    def _tester(command: str) -> CommandTester:
        cmd = app.find(command)
        tester = CommandTester(cmd)

        # Setting the formatter from the application
        app_io = app.create_io()
        formatter = app_io.output.formatter
        tester.io.output.set_formatter(formatter)
        tester.io.error_output.set_formatter(formatter)

        return tester

    return _tester
