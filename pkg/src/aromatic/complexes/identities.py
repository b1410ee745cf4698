"""Closed-form counts attached to the CE complexes: Euler characteristics, the
Abel-type binomial identity, and the S_n-character of H₀(CE(Ltilde))."""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import comb

from ..errors import DomainError
from ..linalg import homology_dimensions, induced_action_trace
from .ce import build_ce_complex, ce_basis, is_reduced


def abel_identity(n: int) -> tuple:
    """Both sides of (n-1)^n = Σ_k C(n,k) (k-2)^k (n+1-k)^(n-1-k).

    The k = n term has exponent -1 on the base 1, hence the Fraction.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    lhs = (n - 1) ** n
    rhs = Fraction(0)
    for k in range(n + 1):
        rhs += comb(n, k) * Fraction(k - 2) ** k * Fraction(n + 1 - k) ** (n - 1 - k)
    return lhs, rhs


def chain_dimensions(variant: str, n: int) -> dict:
    return {p: len(fs) for p, fs in ce_basis(n, is_reduced(variant)).items()}


def euler_characteristic_series(variant: str, max_n: int) -> list:
    """Σ_p (-1)^p dim C_p(n) for n = 1..max_n, from the chain bases."""
    if max_n < 1:
        raise DomainError("max_n must be at least 1")
    out = []
    for n in range(1, max_n + 1):
        dims = chain_dimensions(variant, n)
        out.append(Fraction(sum((-1) ** p * d for p, d in dims.items())))
    return out


def fixed_point_free_count(n: int) -> int:
    """Brute-force count of endofunctions of an n-set without fixed points."""
    return sum(
        1 for f in itertools.product(range(n), repeat=n) if all(f[i] != i for i in range(n))
    )


def partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def permutation_of_type(parts) -> dict:
    perm, start = {}, 1
    for k in parts:
        cyc = list(range(start, start + k))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
        start += k
    return perm


def cycle_type(perm: dict) -> tuple:
    seen, lengths = set(), []
    for v in perm:
        if v in seen:
            continue
        k, x = 0, v
        while x not in seen:
            seen.add(x)
            x = perm[x]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def character_formula(parts) -> int:
    """Π_k (-2 + Σ_{d|k} d·a_d)^(a_k), a_k = number of k-cycles."""
    a = Counter(parts)
    n = sum(parts)
    value = 1
    for k in range(1, n + 1):
        if a[k]:
            base = -2 + sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            value *= base ** a[k]
    return value


def character_check(n: int, variant: str = "Ltilde", complex_=None) -> list:
    """Compare the formula with computed homology traces, one row per cycle type.

    ``matches_h0`` compares with the trace on H₀; ``matches_euler`` compares
    with the alternating sum of traces over all degrees.
    """
    c = complex_ if complex_ is not None else build_ce_complex(variant, n)
    hom = homology_dimensions(c)
    rows = []
    for parts in partitions(n):
        perm = permutation_of_type(parts)
        traces = {k: (induced_action_trace(c, k, perm) if d else Fraction(0)) for k, d in hom.items()}
        formula = character_formula(parts)
        euler = sum((-1) ** k * t for k, t in traces.items())
        rows.append(
            {
                "cycle_type": list(parts),
                "formula": formula,
                "trace_h0": traces.get(0, Fraction(0)),
                "traces": traces,
                "euler_trace": euler,
                "matches_h0": traces.get(0, Fraction(0)) == formula,
                "matches_euler": euler == formula,
            }
        )
    return rows
