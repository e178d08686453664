import sys
from pathlib import Path

import pytest

from argmed.aaf import belief, decision, new_framework

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


def build(decisions=(), beliefs=(), attacks=()):
    fw = new_framework()
    for d in decisions:
        fw.add_argument(decision(d))
    for b in beliefs:
        fw.add_argument(belief(b))
    for a, b in attacks:
        fw.add_attack(a, b)
    return fw


def migraine_framework():
    """Decisions A, B, C (mutual attacks); beliefs D and E each attack A."""
    return build("ABC", "DE", [("D", "A"), ("E", "A")])


@pytest.fixture
def migraine():
    return migraine_framework()


@pytest.fixture
def fixtures():
    return FIXTURES
