from __future__ import annotations

import pytest

from localsys.linalg import RATIONALS, Field

F5 = Field(5)


@pytest.fixture(params=[RATIONALS, F5], ids=["rat", "fp5"])
def field(request) -> Field:
    return request.param
