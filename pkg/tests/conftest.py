"""Shared synthetic-corpus factories and acceptance-criterion reporting.

Every generator is seeded and returns TSV text, so tests can parse through
the public loader exactly like real inputs. Tests marked with
``@pytest.mark.criterion(n, description)`` get one PASS/FAIL line each in
the terminal summary.
"""

import numpy as np
import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(
        report.outcome, report.outcome.upper()
    )
    results = getattr(item.config, "_acceptance_results", [])
    results.append((marker.args[0], f"criterion {marker.args[0]:>2} [{marker.args[1]}]: {status}"))
    item.config._acceptance_results = results


def pytest_terminal_summary(terminalreporter):
    results = getattr(terminalreporter.config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(results):
        terminalreporter.write_line(line)

TASK_A_KEYWORDS = {
    "real": ["mask", "vaccine", "doctor", "hospital", "study", "trial", "data"],
    "fake": ["bleach", "hoax", "microchip", "cure", "salt", "miracle", "plot"],
}

# combo -> disjoint keyword pool; covers singles, a pair, and non-hostile
TASK_B_COMBOS = {
    ("non-hostile",): ["seva", "shanti", "madad", "aman", "dhanyavad", "swasth"],
    ("fake",): ["jhooth", "afwa", "bakwas", "farzi", "manghadant", "galat"],
    ("hate",): ["ghrina", "nafrat", "dwesh", "virodh", "krodhit", "jahar"],
    ("defame", "offensive"): ["badnaam", "gaali", "apmaan", "neech", "gandagi", "sharm"],
    ("fake", "hate"): ["sazish", "bhadkau", "ashant", "danga", "uksana", "phailana"],
}


def _sample_doc(rng, pool, lo=4, hi=9):
    return " ".join(rng.choice(pool, size=int(rng.integers(lo, hi))))


@pytest.fixture
def task_a_corpus():
    """TSV factory: disjoint-keyword real/fake documents."""

    def make(n_docs, seed=0, id_prefix="d"):
        rng = np.random.default_rng(seed)
        rows = ["id\ttext\tlabels"]
        labels = list(TASK_A_KEYWORDS)
        for i in range(n_docs):
            label = labels[i % len(labels)]
            rows.append(
                f"{id_prefix}{i}\t{_sample_doc(rng, TASK_A_KEYWORDS[label])}\t{label}"
            )
        return "\n".join(rows) + "\n"

    return make


@pytest.fixture
def task_b_corpus():
    """TSV factory: each label combination owns a disjoint keyword pool."""

    def make(n_docs, seed=0, id_prefix="d", combos=None):
        rng = np.random.default_rng(seed)
        combos = list(combos or TASK_B_COMBOS)
        rows = ["id\ttext\tlabels"]
        for i in range(n_docs):
            combo = combos[i % len(combos)]
            pool = TASK_B_COMBOS[combo]
            rows.append(f"{id_prefix}{i}\t{_sample_doc(rng, pool)}\t{','.join(combo)}")
        return "\n".join(rows) + "\n"

    return make
