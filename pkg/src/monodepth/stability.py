"""Associated primes and depth of successive powers over a finite horizon.

Nothing here claims true stabilization: indices and constancy are only
what is observed for k <= K.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import homology
from .certificates import AssSet, DepthBracket, associated_primes, depth_bracket
from .core import MonomialIdeal, powers


def ass_sequence(ideal: MonomialIdeal, K: int) -> list[AssSet]:
    if K < 1:
        raise ValueError("horizon K must be >= 1")
    return [associated_primes(P) for _, P in powers(ideal, K)]


def observed_stability_index(seq: list) -> int | None:
    """Smallest k0 with seq constant on k0..K; None when only the last term is left."""
    K = len(seq)
    k0 = K
    while k0 > 1 and seq[k0 - 2] == seq[K - 1]:
        k0 -= 1
    if k0 == K and K > 1:
        return None
    return k0 if K > 1 else None


def persistence_violations(seq: list[AssSet]) -> list[tuple[tuple, int]]:
    out = []
    for k in range(1, len(seq)):
        now, nxt = seq[k - 1], seq[k]
        for p in now.primes:
            if p not in nxt.primes:
                out.append((p, k))
    return out


@dataclass
class StabilityReport:
    horizon: int
    ass: list
    observed_stability_index: int | None
    persistence_violations: list
    depth_series: list

    def to_json(self):
        return {
            "horizon": self.horizon,
            "ass": [{"k": k, "primes": a.to_json()} for k, a in enumerate(self.ass, 1)],
            "observed_stability_index": self.observed_stability_index,
            "persistence_violations": [
                {"prime": list(p), "k": k} for p, k in self.persistence_violations
            ],
            "depth_series": [{"k": k, **b.to_json()} for k, b in enumerate(self.depth_series, 1)],
        }


def stability_report(ideal: MonomialIdeal, K: int, engine: str = "auto",
                     cap: int = homology.DEFAULT_CAP) -> StabilityReport:
    if K < 1:
        raise ValueError("horizon K must be >= 1")
    ass, depths = [], []
    for _, P in powers(ideal, K):
        a = associated_primes(P)
        ass.append(a)
        depths.append(depth_bracket(P, engine=engine, cap=cap, ass=a))
    keys = [a.primes for a in ass]
    return StabilityReport(K, ass, observed_stability_index(keys), persistence_violations(ass), depths)


def _series(brackets: list[DepthBracket]):
    return [b.lower if b.tight else None for b in brackets]


def conjecture_scan(ideal: MonomialIdeal, K: int, engine: str = "auto",
                    cap: int = homology.DEFAULT_CAP) -> dict:
    """Is depth(S/I^k) constant for varcount <= k <= K?  Observation only.

    The module convention depth(I^k) = depth(S/I^k) + 1 is reported next to
    it; constancy is the same for both.
    """
    if K < 1:
        raise ValueError("horizon K must be >= 1")
    brackets = [depth_bracket(P, engine=engine, cap=cap, with_ass=False) for _, P in powers(ideal, K)]
    series = _series(brackets)
    n = ideal.ring.count
    tail = series[n - 1:] if K >= n else []
    if not tail:
        consistent = None
    elif None in tail:
        consistent = None
    else:
        consistent = len(set(tail)) == 1
    constant_from = None
    if None not in series:
        constant_from = K
        while constant_from > 1 and series[constant_from - 2] == series[-1]:
            constant_from -= 1
    return {
        "varcount": n,
        "horizon": K,
        "depth_quotient": series,
        "depth_ideal": [None if d is None else d + 1 for d in series],
        "brackets": [[b.lower, b.upper] for b in brackets],
        "observed_constant_from": constant_from,
        "consistent": consistent,
        "status": "observed" if consistent is not None else "undecided within horizon",
    }
