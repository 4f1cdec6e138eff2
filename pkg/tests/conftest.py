from __future__ import annotations

import os

import pytest

from pathdecomp.decomposition import add_emit_hook, parity_ok, remove_emit_hook, validate


class EmitLog:
    """Every decomposition the library hands out, checked as it leaves."""

    def __init__(self) -> None:
        self.seen = 0
        self.failures: list[str] = []

    def __call__(self, d) -> None:
        self.seen += 1
        bad = validate(d.host, d)
        if bad:
            self.failures.append(f"invalid: {bad[0]} in {d.paths}")
        elif not parity_ok(d.host, d):
            self.failures.append(f"parity: {d.paths}")


EMIT_LOG = EmitLog()


@pytest.fixture(scope="session", autouse=True)
def _global_emit_check():
    add_emit_hook(EMIT_LOG)
    yield
    remove_emit_hook(EMIT_LOG)


@pytest.fixture(autouse=True)
def _no_bad_emits():
    before = len(EMIT_LOG.failures)
    yield
    new = EMIT_LOG.failures[before:]
    assert not new, f"emitted decompositions failed checks: {new[:3]}"


@pytest.fixture
def emit_log() -> EmitLog:
    return EMIT_LOG


def slow_enabled() -> bool:
    return os.environ.get("PATHDECOMP_SLOW", "") not in ("", "0")
