import io
import json

import pytest

from besselpairs.main import run
from besselpairs.models.schemas import BesselPairSpec
from besselpairs.utils.logger import configure_logging
from tests.fixtures.sample_potentials import INVERSE_SQUARE, UNIT


@pytest.fixture(scope="session", autouse=True)
def logging_configured():
    """Configure structured logging once for the whole session"""
    configure_logging("WARNING")


@pytest.fixture(scope="session")
def hardy_pair():
    """(1, r^-2) in dimension 3 on the unit ball"""
    return BesselPairSpec(V=UNIT, W=INVERSE_SQUARE, n=3, R=1.0)


@pytest.fixture(scope="session")
def bessel_pair():
    """(1, 1) in dimension 2 on the unit ball; its weight is z0^2"""
    return BesselPairSpec(V=UNIT, W=UNIT, n=2, R=1.0)


class CliResult:
    def __init__(self, code: int, stdout: str, stderr: str):
        self.code, self.stdout, self.stderr = code, stdout, stderr

    def json(self):
        return json.loads(self.stdout)


@pytest.fixture
def cli():
    """Run the bessel command line in-process and capture its streams"""
    def invoke(*argv: str) -> CliResult:
        out, err = io.StringIO(), io.StringIO()
        code = run(list(argv), stdout=out, stderr=err)
        return CliResult(code, out.getvalue(), err.getvalue())
    return invoke
