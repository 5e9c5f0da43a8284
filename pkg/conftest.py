"""Shared pytest configuration."""

import pytest

from cuspidal_torsion import smith


@pytest.fixture(autouse=True)
def verify_decompositions(monkeypatch):
    """Re-check every Smith normal form computed during a test."""
    monkeypatch.setattr(smith, "VERIFY_DECOMPOSITIONS", True)
