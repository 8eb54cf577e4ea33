from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def tsv(rows):
    lines = ["edition\talgorithm\tlocal_rank\tname\tactivity\tculture"]
    lines += ["\t".join(str(x) for x in row) for row in rows]
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture
def table2_path():
    return DATA / "table2_en_pagerank.tsv"


@pytest.fixture
def table2_bytes(table2_path):
    return table2_path.read_bytes()


@pytest.fixture
def cross_links_bytes():
    """EN list with 2 FR persons, FR list with 3 EN persons, padded with locals."""
    en = ["Napoleon", "Louis XIV of France"]
    fr = ["George W. Bush", "William Shakespeare", "Elizabeth II"]
    rows = [("EN", "PageRank", r, n, "politics", "FR") for r, n in enumerate(en, 1)]
    rows += [("EN", "PageRank", r, f"en local {r}", "art", "EN") for r in range(3, 31)]
    rows += [("FR", "PageRank", r, n, "politics", "EN") for r, n in enumerate(fr, 1)]
    rows += [("FR", "PageRank", r, f"fr local {r}", "science", "FR") for r in range(4, 31)]
    return tsv(rows)


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "N/A"}[report.outcome]
        if report.outcome == "skipped" and isinstance(report.longrepr, tuple):
            title = f"{title} ({report.longrepr[2].removeprefix('Skipped: ')})"
        prev = _criteria.get(n)
        if prev is None or prev[0] == "PASS":
            _criteria[n] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title = _criteria[n]
        terminalreporter.write_line(f"[{status}] {n:2d}. {title}")
