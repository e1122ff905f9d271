import pytest

from logbench.synthgen import generate_corpus, random_specs

BLOCK_MSG = "Received block blk_-562725280853087685 of size 67108864 from /10.251.91.84"


def oracle_corpus(templates=20, n=10_000, seed=7, corpus_seed=1, **kw):
    """Corpus whose truth grouping is the unique perfect grouping."""
    lengths = list(range(4, 4 + templates))
    specs = random_specs(templates, seed=seed, lengths=lengths, **kw)
    return generate_corpus(specs, n, seed=corpus_seed)


@pytest.fixture(scope="session")
def small_oracle():
    return oracle_corpus(templates=8, n=1500, seed=3)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def emit(number, name, ok, detail=""):
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        line = f"criterion {number} [{status}] {name}" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
