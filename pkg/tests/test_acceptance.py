"""One test per acceptance criterion, each with its wall-clock budget.

Every criterion is delegated to the corresponding verification suite, whose
checks hold the exact expected values; a criterion passes when all of its
checks pass within the budget.
"""

import time

import pytest

from aromatic.config import Config
from aromatic.report import run_suite

from conftest import ACCEPTANCE_LINES

CRITERIA = [
    (1, "dimensions", "dimensions", 7, 10),
    (2, "divergence kernels", "kernels", 6, 30),
    (3, "suboperad embedding", "embedding", 5, 60),
    (4, "CE homology", "ce-homology", 4, 120),
    (5, "aromatic bicomplex", "bicomplex", 4, 120),
    (6, "graph complexes", "graph-complex", 5, 60),
    (7, "identities", "identities", 4, 10),
    (8, "characters", "characters", 4, 120),
    (9, "B-series", "bseries", 4, 60),
    (10, "properties", "properties", None, None),
]


@pytest.mark.parametrize("number,title,suite,max_n,budget", CRITERIA, ids=[f"criterion_{c[0]}_{c[2]}" for c in CRITERIA])
def test_criterion(number, title, suite, max_n, budget, tmp_path):
    cfg = Config(max_n=max_n, seed=1, cache_dir=str(tmp_path / "cache"))
    start = time.perf_counter()
    report = run_suite(suite, cfg)
    elapsed = time.perf_counter() - start
    failed = [c for c in report.checks if not c.passed]
    in_time = budget is None or elapsed <= budget
    ok = not failed and in_time
    limit = f"budget {budget}s" if budget else "no budget"
    line = f"criterion {number:>2} {title:<22} {'PASS' if ok else 'FAIL'}  {len(report.checks) - len(failed)}/{len(report.checks)} checks  {elapsed:6.2f}s ({limit})"
    for c in failed:
        line += f"\n    failed: {c.claim} {c.params}: expected {c.expected}, computed {c.computed}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert not failed, "\n".join(f"{c.claim} {c.params}: expected {c.expected}, computed {c.computed}" for c in failed)
    assert in_time, f"took {elapsed:.1f}s, budget {budget}s"
