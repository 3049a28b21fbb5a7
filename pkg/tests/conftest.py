from __future__ import annotations

from pathlib import Path

import pytest

from stratasolve.kb import KnowledgeBase, parse_kb

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def program_text(name: str) -> str:
    return (PROGRAMS / f"{name}.lp").read_text()


def load(name: str) -> KnowledgeBase:
    return parse_kb(program_text(name))


def true_names(ms) -> set[frozenset[str]]:
    return set(ms.name_sets())


S1 = frozenset({"lion", "mammal", "warm_blooded", "live_on_land", "female"})
S2 = frozenset({"lion", "mammal", "warm_blooded", "live_on_land", "male"})


@pytest.fixture
def pi0() -> KnowledgeBase:
    return load("pi0")


@pytest.fixture
def pi1() -> KnowledgeBase:
    return load("pi1")


@pytest.fixture
def pi2() -> KnowledgeBase:
    return load("pi2")


@pytest.fixture
def pi4() -> KnowledgeBase:
    return load("pi4")
