"""The shipped example sessions, loaded once for the tests."""
from functools import lru_cache
from pathlib import Path

from formaljets.session import parse_session

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def session(name):
    return parse_session((FIXTURES / f"{name}.fj").read_text())


def cusp():
    return session("cusp")


def surface():
    return session("surface")


def nodal():
    return session("nodal")
