from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import pytest

from heilbronn_survey.config import THREADS_ENVIRONMENT_VARIABLE


if TYPE_CHECKING:
    from _pytest.monkeypatch import MonkeyPatch


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: MonkeyPatch) -> None:
    monkeypatch.delenv(THREADS_ENVIRONMENT_VARIABLE, raising=False)


@pytest.fixture
def fixture_root() -> Path:
    return Path(__file__).parent / "fixtures"
