"""Verification suites: each check pairs a claim with expected and computed values.

A suite is a list of tasks ``(claim, anchor, params, expected, fn, args)``
with ``fn`` a module-level function, so tasks can be shipped to worker
processes.  Reports keep task order whatever the execution strategy.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .cache import BasisCache
from .complexes import (
    abel_identity,
    build_aromatic_bicomplex,
    build_ce_complex,
    build_graph_complex,
    character_check,
    euler_characteristic_series,
    graph_homotopy_check,
)
from .config import Config
from .errors import CapExceededError, DomainError
from .linalg import LinComb, homology_dimensions
from .operad import (
    div_matrix,
    in_span,
    lie_basis,
    span_membership,
    suboperad_span,
    suboperad_span_dimension,
    unlabelled_div0_matrix,
)
from .species import Aroma, canonical_code, enumerate_unlabelled, symmetry_order
from . import bseries, properties

SCHEMA = 1


@dataclass
class Check:
    claim: str
    anchor: str
    params: dict
    expected: object
    computed: object
    passed: bool
    seconds: float

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "anchor": self.anchor,
            "params": _jsonable(self.params),
            "expected": _jsonable(self.expected),
            "computed": _jsonable(self.computed),
            "pass": self.passed,
            "seconds": round(self.seconds, 4),
        }


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def seconds(self) -> float:
        return sum(c.seconds for c in self.checks)

    def extend(self, other: VerificationReport) -> None:
        self.checks.extend(other.checks)

    def to_json(self, timings: bool = True) -> dict:
        checks = [c.to_json() for c in self.checks]
        if not timings:
            for c in checks:
                del c["seconds"]
        return {"schema": SCHEMA, "suite": self.suite, "pass": self.passed, "checks": checks}

    def render(self) -> str:
        lines = [f"suite {self.suite}: {len(self.checks)} checks"]
        for c in self.checks:
            params = " ".join(f"{k}={_show(v)}" for k, v in c.params.items())
            status = "pass" if c.passed else "FAIL"
            lines.append(f"  [{status}] {c.claim} ({params}) {_show(c.computed)}  {c.seconds:.2f}s")
            if not c.passed:
                lines.append(f"         expected {_show(c.expected)}, computed {_show(c.computed)}; see: {c.anchor}")
        failed = sum(1 for c in self.checks if not c.passed)
        lines.append(f"  {len(self.checks) - failed} passed, {failed} failed")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _show(x) -> str:
    return json.dumps(_jsonable(x), ensure_ascii=False, sort_keys=True)


# ---------------------------------------------------------------------------
# computations (module level so that worker processes can import them)

def count_labelled(kind: str, n: int, variant: str, cache_dir) -> int:
    return len(BasisCache(cache_dir).get_raw(kind, n, variant))


def count_unlabelled(kind: str, n: int) -> int:
    return len(enumerate_unlabelled(kind, n))


def quotient_count(kind: str, n: int, variant: str, cache_dir) -> int:
    """Number of S_n-orbits of the labelled objects, by canonical codes."""
    return len({canonical_code(x)[0] for x in BasisCache(cache_dir).get(kind, n, variant)})


def orbit_sum(n: int) -> int:
    """Σ over unlabelled trees of n!/σ(τ)."""
    return sum(factorial(n) // symmetry_order(c) for c in enumerate_unlabelled("tree", n))


def connected_endofunctions(n: int, min_cycle: int = 1) -> int:
    """Brute force over all maps {0..n-1} -> {0..n-1} with one component."""
    count = 0
    for f in itertools.product(range(n), repeat=n):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in enumerate(f):
            parent[find(i)] = find(j)
        if len({find(i) for i in range(n)}) != 1:
            continue
        if min_cycle > 1 and any(f[i] == i for i in range(n)):
            continue
        count += 1
    return count


def div_rank(n: int) -> int:
    return div_matrix(n).rank()


def kernel_vs_lie(n: int) -> dict:
    m = div_matrix(n, reduced=True)
    kernel = m.kernel_basis()
    lie = lie_basis(n)
    lie_in_kernel = all(not m.apply(x) for x in lie) and all(span_membership(kernel, lie))
    kernel_in_lie = all(span_membership(lie, kernel))
    return {"dim": len(kernel), "lie in kernel": lie_in_kernel, "kernel in lie": kernel_in_lie}


def span_dimension(n: int) -> int:
    return suboperad_span_dimension(n)


def orientation_difference_in_span() -> bool:
    a = Aroma._trusted({1: 2, 2: 3, 3: 1})
    b = Aroma._trusted({1: 3, 3: 2, 2: 1})
    return in_span(suboperad_span(3), LinComb({a: 1, b: -1}))


def ce_homology(variant: str, n: int) -> dict:
    return homology_dimensions(build_ce_complex(variant, n))


def bicomplex_summary(variant: str, n: int) -> dict:
    bc = build_aromatic_bicomplex(variant, n)
    hor = bc.horizontal_homology()
    ver = bc.vertical_homology()
    return {
        "vertical total": sum(ver.values()),
        "column 0": sum(d for (p, q), d in hor.items() if p == 0),
        "column 1": sum(d for (p, q), d in hor.items() if p == 1),
        "columns >= 2": sum(d for (p, q), d in hor.items() if p >= 2),
    }


def graph_homology_total(variant: str, n: int) -> int:
    return sum(homology_dimensions(build_graph_complex(variant, n)).values())


def homotopy_identity(n: int) -> bool:
    return graph_homotopy_check(n)


def abel_sides(n: int) -> list:
    lhs, rhs = abel_identity(n)
    return [lhs, rhs]


def euler_series(variant: str, max_n: int) -> list:
    return [int(x) for x in euler_characteristic_series(variant, max_n)]


def character_rows(n: int) -> list:
    return [
        {
            "cycle_type": r["cycle_type"],
            "formula": r["formula"],
            "trace_h0": r["trace_h0"],
            "euler_trace": r["euler_trace"],
        }
        for r in character_check(n, "Ltilde")
    ]


def divergence_identity(code: str, d: int, degree: int, seed: int) -> bool:
    return bseries.check_divergence_identity(code, bseries.random_field(d, degree, seed))


def obstruction_orders(b: dict, max_order: int) -> list:
    return sorted(bseries.volume_obstruction(b, max_order))


def unlabelled_div0_injective(n: int) -> list:
    m = unlabelled_div0_matrix(n)
    return [m.rank(), len(m.cols)]


def property_results() -> list:
    return [[name, ok] for name, ok in properties.all_property_checks()]


# ---------------------------------------------------------------------------
# suites

def _task(claim, anchor, params, expected, fn, *args):
    return (claim, anchor, params, expected, fn, args)


def _dimensions(N: int, cfg: Config) -> list:
    cd = cfg.cache_dir
    tasks = []
    for n in range(1, N + 1):
        tasks.append(_task("labelled rooted trees count n^(n-1)", "Cayley count of rooted trees",
                           {"n": n}, n ** (n - 1), count_labelled, "trees", n, "", cd))
    for n in range(1, min(N, 6) + 1):
        tasks.append(_task("unlabelled trees match the labelled quotient", "orbits of rooted trees",
                           {"n": n}, quotient_count("trees", n, "", cd), count_unlabelled, "tree", n))
        tasks.append(_task("orbit sizes of unlabelled trees sum to n^(n-1)", "symmetry factors",
                           {"n": n}, n ** (n - 1), orbit_sum, n))
        tasks.append(_task("labelled aromas match connected endofunctions", "aromas as connected functional graphs",
                           {"n": n}, connected_endofunctions(n), count_labelled, "aromas", n, "", cd))
        tasks.append(_task("unlabelled aromas match the labelled quotient", "orbits of aromas",
                           {"n": n}, quotient_count("aromas", n, "", cd), count_unlabelled, "aroma", n))
    return tasks


def _kernels(N: int, cfg: Config) -> list:
    tasks = []
    for n in range(1, N + 1):
        tasks.append(_task("Div is injective on RT(n)", "injectivity of the divergence map",
                           {"n": n}, n ** (n - 1), div_rank, n))
        tasks.append(_task("ker Div0 equals Lie(n)", "kernel of the reduced divergence is the Lie suboperad",
                           {"n": n}, {"dim": factorial(n - 1), "lie in kernel": True, "kernel in lie": True},
                           kernel_vs_lie, n))
    return tasks


def _embedding(N: int, cfg: Config) -> list:
    tasks = [
        _task("span of the generated suboperad has dimension (n+1)^(n-1)",
              "suboperad generated by the pre-Lie product, module action and tadpole",
              {"n": n}, (n + 1) ** (n - 1), span_dimension, n)
        for n in range(1, N + 1)
    ]
    if N >= 3:
        tasks.append(_task("difference of the two 3-cycle orientations is not generated",
                           "oriented 3-cycles cannot be obtained", {"n": 3}, False, orientation_difference_in_span))
    return tasks


def _ce_expected(variant: str, n: int) -> dict:
    top = n
    out = {p: 0 for p in range(top + 1)}
    if variant == "L":
        out[0] = (n - 1) ** n
    elif n == 1:
        out[1] = 1
    elif n >= 3:
        out[0] = (n - 2) ** n
    return out


def _ce(N: int, cfg: Config) -> list:
    tasks = []
    for variant, anchor in (("L", "homology of CE(L) is concentrated in degree 0"),
                            ("Ltilde", "homology of CE(L~) in degrees 0 and 1")):
        for n in range(1, N + 1):
            tasks.append(_task(f"CE({variant}) homology dimensions", anchor,
                               {"variant": variant, "n": n}, _ce_expected(variant, n), ce_homology, variant, n))
    return tasks


def _bicomplex(N: int, cfg: Config) -> list:
    tasks = []
    for variant in ("full", "divergence-free"):
        for n in range(1, N + 1):
            expected_col1 = 2 if (variant == "divergence-free" and n == 1) else 0
            tasks.append(_task(
                "d^V acyclic and d^H homology in the expected columns",
                "homology of the aromatic bicomplex",
                {"variant": variant, "n": n},
                {"vertical total": 0, "column 1": expected_col1, "columns >= 2": 0},
                _bicomplex_check, variant, n,
            ))
    return tasks


def _bicomplex_check(variant: str, n: int) -> dict:
    s = bicomplex_summary(variant, n)
    return {k: s[k] for k in ("vertical total", "column 1", "columns >= 2")}


def _graphs(N: int, cfg: Config) -> list:
    tasks = []
    for n in range(1, N + 1):
        tasks.append(_task("d h + h d = C(n,2) id", "edge-removal homotopy", {"n": n, "scale": comb(n, 2)},
                           True, homotopy_identity, n))
        tasks.append(_task("total homology of the full graph complex", "acyclicity of the full graph complex",
                           {"n": n}, 1 if n == 1 else 0, graph_homology_total, "all", n))
        tasks.append(_task("total homology of the connected-reduced graph complex", "connected graphs and Lie",
                           {"n": n}, factorial(n - 1), graph_homology_total, "connected-reduced", n))
    return tasks


def _identities(N: int, cfg: Config) -> list:
    tasks = [
        _task("(n-1)^n = Σ_k C(n,k)(k-2)^k(n+1-k)^(n-1-k)", "Abel-type binomial identity", {"n": n},
              [(n - 1) ** n, (n - 1) ** n], abel_sides, n)
        for n in range(0, 21)
    ]
    tasks.append(_task("Euler characteristics of CE(L~) are (n-2)^n", "Euler characteristic bookkeeping",
                       {"max_n": N}, [(n - 2) ** n for n in range(1, N + 1)], euler_series, "Ltilde", N))
    tasks.append(_task("Euler characteristics of CE(L) are (n-1)^n", "Euler characteristic bookkeeping",
                       {"max_n": N}, [(n - 1) ** n for n in range(1, N + 1)], euler_series, "L", N))
    return tasks


def _characters(N: int, cfg: Config) -> list:
    return [_task("character formula on H0(CE(L~))", "character of H0 of CE(L~)",
                  {"n": n}, None, character_rows, n) for n in range(1, N + 1)]


def _expand_characters(check: Check) -> list:
    """One check per cycle type for the H0 trace, plus the Euler trace."""
    out = []
    per_row = check.seconds / max(1, len(check.computed))
    for row in check.computed:
        params = {**check.params, "cycle_type": row["cycle_type"]}
        out.append(Check("trace on H0 equals the character formula", check.anchor, params,
                         row["formula"], row["trace_h0"], row["trace_h0"] == row["formula"], per_row))
        out.append(Check("alternating trace over all degrees equals the character formula",
                         "Euler character of CE(L~)", params, row["formula"], row["euler_trace"],
                         row["euler_trace"] == row["formula"], 0.0))
    return out


def _bseries(N: int, cfg: Config) -> list:
    trees_of = enumerate_unlabelled
    seed = cfg.seed
    tasks = []
    for n in range(1, N + 1):
        for code in trees_of("tree", n):
            tasks.append(_task("Div F(τ) equals the sum of F over the closings of τ",
                               "divergence of elementary differentials", {"tree": code, "d": 3, "seed": seed},
                               True, divergence_identity, code, 3, 3, seed))
    top = cfg.cap("obstruction")
    for n in range(2, top + 1):
        k = len(trees_of("tree", n))
        tasks.append(_task("reduced divergence is injective on unlabelled trees", "no B-series beyond the exact flow preserves volume",
                           {"order": n}, [k, k], unlabelled_div0_injective, n))
    tasks.append(_task("obstruction vanishes for b supported on the one-vertex tree",
                       "volume preservation of B-series", {"b": {"()": 1}, "max_order": top}, [],
                       obstruction_orders, {"()": Fraction(1)}, top))
    for n in range(2, top + 1):
        code = trees_of("tree", n)[0]
        b = {"()": Fraction(1), code: Fraction(1, 2)}
        tasks.append(_task("obstruction is nonzero once b has support beyond the one-vertex tree",
                           "volume preservation of B-series", {"b": {k: str(v) for k, v in b.items()}, "max_order": top},
                           [n], obstruction_orders, b, top))
    return tasks


def _properties(N: int, cfg: Config) -> list:
    return [_task("algebraic identities", "operad and pre-Lie structure", {}, None, property_results)]


def _expand_properties(check: Check) -> list:
    per_row = check.seconds / max(1, len(check.computed))
    return [Check(name, check.anchor, {}, True, ok, ok is True, per_row) for name, ok in check.computed]


SUITES = {
    "dimensions": (_dimensions, "dimensions"),
    "kernels": (_kernels, "kernels"),
    "embedding": (_embedding, "embedding"),
    "ce-homology": (_ce, "ce-homology"),
    "bicomplex": (_bicomplex, "bicomplex"),
    "graph-complex": (_graphs, "graph-complex"),
    "identities": (_identities, "identities"),
    "characters": (_characters, "characters"),
    "bseries": (_bseries, "bseries"),
    "properties": (_properties, "properties"),
}
_EXPAND = {"characters": _expand_characters, "properties": _expand_properties}


def _execute(task) -> Check:
    claim, anchor, params, expected, fn, args = task
    start = time.perf_counter()
    computed = fn(*args)
    seconds = time.perf_counter() - start
    return Check(claim, anchor, params, expected, computed, computed == expected, seconds)


def suite_arity(name: str, cfg: Config, clamp: bool = False) -> int:
    cap = cfg.cap(SUITES[name][1])
    if cfg.max_n is None:
        return cap
    if cfg.max_n < 1:
        raise DomainError("--max-n must be at least 1")
    if cfg.max_n > cap:
        if clamp:
            return cap
        raise CapExceededError(
            f"suite {name}: max-n {cfg.max_n} exceeds the cap {cap}; raise it with cap.{name} in a config file"
            f" or AFL_CAP_{name.upper().replace('-', '_')}"
        )
    return cfg.max_n


def run_suite(name: str, cfg: Config | None = None) -> VerificationReport:
    cfg = cfg or Config()
    if name == "all":
        report = VerificationReport("all")
        for sub in SUITES:
            report.extend(_run_one(sub, cfg, clamp=True))
        return report
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    return _run_one(name, cfg, clamp=False)


def _run_one(name: str, cfg: Config, clamp: bool) -> VerificationReport:
    N = suite_arity(name, cfg, clamp)
    tasks = SUITES[name][0](N, cfg)
    if cfg.parallel and len(tasks) > 1:
        with ProcessPoolExecutor() as pool:
            checks = list(pool.map(_execute, tasks))
    else:
        checks = [_execute(t) for t in tasks]
    expand = _EXPAND.get(name)
    if expand:
        checks = [c for raw in checks for c in expand(raw)]
    report = VerificationReport(name)
    report.checks = checks
    return report

