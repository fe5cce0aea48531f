"""Small hand-made instances used by the tests and the docs."""
from __future__ import annotations

from importlib import resources

from ..graph import Instance

NAMES = ("LINE1", "DIAMOND", "STAR1", "BUTTERFLY", "FAN3", "STAR3x2", "CUT", "DD")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__name__).joinpath(f"{name.lower()}.toml").read_text()


def fixture(name: str) -> Instance:
    from ..io import parse_instance

    return parse_instance(fixture_text(name))
