import pytest

from gbh.graph import complete_bipartite, cycle_graph, path_graph, segment, star_graph

# small graphs used throughout; "path3" has three vertices
CORPUS = {
    "segment": segment(),
    "path3": path_graph(2),
    "cycle3": cycle_graph(3),
    "cycle4": cycle_graph(4),
    "star3": star_graph(3),
    "star4": star_graph(4),
    "k23": complete_bipartite(2, 3),
}


@pytest.fixture(params=sorted(CORPUS))
def corpus_graph(request):
    return CORPUS[request.param]


# -- acceptance verdict lines -----------------------------------------------------

VERDICTS: dict[str, tuple[bool, str, list[str]]] = {}


class Criterion:
    """Collects sub-checks for one acceptance criterion and records a verdict."""

    def __init__(self, key: str, title: str):
        self.key, self.title = key, title
        self.failures: list[str] = []
        self.count = 0

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.count += 1
        if not ok:
            self.failures.append(f"{label}: {detail}" if detail else label)
        return ok

    def finish(self) -> None:
        ok = not self.failures
        VERDICTS[self.key] = (ok, f"{self.title} ({self.count - len(self.failures)}/{self.count} checks)", self.failures)
        assert ok, f"{len(self.failures)} failing checks:\n" + "\n".join(self.failures)


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS):
        ok, text, failures = VERDICTS[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {text}")
        for f in failures[:8]:
            terminalreporter.write_line(f"      - {f}")
        if len(failures) > 8:
            terminalreporter.write_line(f"      - ... {len(failures) - 8} more")
