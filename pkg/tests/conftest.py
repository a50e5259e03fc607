import sys

import pytest

from gaplab.corpus.vocab import build_vocab

WORDS = [f"w{i}" for i in range(8)]


@pytest.fixture(scope="session")
def tiny_vocab():
    """Shared 2-language vocab over eight word types plus specials and tags."""
    corpus_a = [WORDS[:5], WORDS[2:6]]
    corpus_b = [WORDS[3:8], WORDS[5:]]
    return build_vocab([corpus_a, corpus_b], ["aa", "bb"])


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdict lines even when stdout capture is on."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if not lines:
        return
    terminalreporter.section("acceptance results")
    for line in lines:
        terminalreporter.write_line(line)
