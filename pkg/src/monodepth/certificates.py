"""Certified depth bounds and associated primes for monomial quotients.

Three mechanisms give the bounds:

* a socle element of S/I (depth 0), or its absence (depth >= 1);
* a regular sequence of variables (depth >= its length);
* an associated prime P (depth <= dim S/P = #vars - |P|), found by testing
  the socle of every monomial localization.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import homology
from .core import (
    Monomial,
    MonomialIdeal,
    colon,
    divisible_mask,
    minimal_rows,
    worker_count,
)

DEFAULT_BUDGET = 1 << 16


class VarCountTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Certificate:
    kind: str
    detail: object = None

    def to_json(self):
        d = {"kind": self.kind}
        if self.detail is not None:
            d["detail"] = self.detail
        return d


# ---------------------------------------------------------------- socle


def socle_element(gens: np.ndarray) -> np.ndarray | None:
    """A row u with u not in I and u*x in I for every variable x, or None.

    Depth-first over variables: at level i the partial witness p already has
    p*x in I for the variables handled so far, and the next candidates are
    lcm(p, g/x_i) for generators g divisible by x_i.  Failed partial
    witnesses are remembered per level; any multiple of a failed one fails
    too, so those branches are cut.
    """
    n = gens.shape[1]
    quots = []
    for i in range(n):
        q = gens[gens[:, i] > 0].copy()
        if not len(q):
            return None
        q[:, i] -= 1
        quots.append(minimal_rows(q))
    # variables with few quotient generators first keep the search narrow
    quots.sort(key=len)
    failed = [np.zeros((0, n), dtype=np.int64) for _ in range(n + 1)]
    start = np.zeros(n, dtype=np.int64)
    if divisible_mask(start[None, :], gens)[0]:
        return None

    def search(i, p):
        if i == n:
            return p
        cand = np.maximum(p[None, :], quots[i])
        cand = cand[~divisible_mask(cand, gens)]
        if len(cand):
            for row in minimal_rows(cand):
                if len(failed[i + 1]) and divisible_mask(row[None, :], failed[i + 1])[0]:
                    continue
                found = search(i + 1, row)
                if found is not None:
                    return found
        failed[i] = np.vstack([failed[i], p[None, :]])
        return None

    return search(0, start)


def socle_witness(ideal: MonomialIdeal) -> Monomial | None:
    """A monomial in (I : m) \\ I, or None when depth(S/I) > 0."""
    if not ideal.is_proper():
        raise ValueError("socle test needs a proper nonzero ideal")
    row = socle_element(ideal.array)
    if row is None:
        return None
    return Monomial(ideal.ring, tuple(row.tolist()))


def socle_test(ideal: MonomialIdeal) -> bool:
    return socle_witness(ideal) is not None


# ---------------------------------------------------------------- regular sequences


def _is_regular_variable(ideal: MonomialIdeal, var: str) -> bool:
    j = ideal.ring.index(var)
    return not (ideal.array[:, j] > 0).any()


def regular_sequence_check(ideal: MonomialIdeal, seq: Sequence[str]) -> bool:
    if len(set(seq)) != len(seq):
        raise ValueError("sequence variables must be distinct")
    cur = ideal
    for z in seq:
        zm = ideal.ring.var(z)
        if colon(cur, zm) != cur:
            return False
        cur = cur + cur.ring.ideal([zm])
    return True


def longest_regular_sequence(ideal: MonomialIdeal, max_len: int | None = None) -> tuple[str, ...]:
    """Longest variable regular sequence, searched in context order.

    Variables in a regular sequence on a multigraded module may be permuted,
    so only increasing index sequences are tried.
    """
    ring = ideal.ring
    if max_len is None:
        max_len = ring.count
    best: tuple[str, ...] = ()

    def extend(cur: MonomialIdeal, seq: tuple[str, ...], start: int):
        nonlocal best
        if len(seq) > len(best):
            best = seq
        if len(best) >= max_len or cur.is_unit():
            return
        for j in range(start, ring.count):
            if len(seq) + ring.count - j <= len(best):
                return
            z = ring.vars[j]
            if _is_regular_variable(cur, z):
                extend(cur + ring.ideal([ring.var(z)]), seq + (z,), j + 1)
                if len(best) >= max_len:
                    return

    extend(ideal, (), 0)
    return best


# ---------------------------------------------------------------- associated primes


@dataclass
class AssSet:
    ring: object
    primes: tuple
    witnesses: dict = field(default_factory=dict, repr=False)

    def __contains__(self, prime) -> bool:
        return self._norm(prime) in self.primes

    def _norm(self, prime):
        names = set(prime)
        return tuple(v for v in self.ring.vars if v in names)

    def max_size(self) -> int:
        return max((len(p) for p in self.primes), default=0)

    def to_json(self):
        return [list(p) for p in self.primes]


def _localized_socle(ideal: MonomialIdeal, cols: tuple[int, ...]):
    gens = ideal.array
    sub = gens[:, cols]
    if (sub.sum(axis=1) == 0).any():
        return None  # localization is the unit ideal
    sub = minimal_rows(sub)
    if not (sub > 0).any(axis=0).all():
        return None  # some kept variable is a nonzerodivisor
    return socle_element(sub)


def lifted_witness(ideal: MonomialIdeal, prime: Sequence[str], local: Sequence[int]) -> Monomial:
    """Monomial w in S with I : w equal to the prime generated by ``prime``."""
    ring = ideal.ring
    top = ideal.array.max(axis=0)
    exps = top.tolist()
    for v, e in zip(prime, local):
        exps[ring.index(v)] = int(e)
    return Monomial(ring, tuple(exps))


def associated_primes(ideal: MonomialIdeal, budget: int = DEFAULT_BUDGET) -> AssSet:
    if not ideal.is_proper():
        raise ValueError("associated primes need a proper nonzero ideal")
    ring = ideal.ring
    n = ring.count
    if 2**n > budget:
        raise VarCountTooLarge(f"2^{n} variable subsets exceed the budget {budget}")
    used = tuple(j for j in range(n) if (ideal.array[:, j] > 0).any())
    subsets = [c for r in range(1, len(used) + 1) for c in itertools.combinations(used, r)]
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            found = list(pool.map(lambda c: _localized_socle(ideal, c), subsets))
    else:
        found = [_localized_socle(ideal, c) for c in subsets]
    primes, witnesses = [], {}
    for cols, w in zip(subsets, found):
        if w is None:
            continue
        p = tuple(ring.vars[j] for j in cols)
        primes.append(p)
        witnesses[p] = lifted_witness(ideal, p, w.tolist())
    primes.sort(key=lambda p: (len(p), [ring.index(v) for v in p]))
    return AssSet(ring, tuple(primes), witnesses)


# ---------------------------------------------------------------- depth brackets


@dataclass
class DepthBracket:
    lower: int
    upper: int
    lower_certificate: Certificate
    upper_certificate: Certificate
    certified_lower: int = 0
    certified_upper: int = 0
    exact: int | None = None
    ass: AssSet | None = None

    @property
    def tight(self) -> bool:
        return self.lower == self.upper

    @property
    def certificates_tight(self) -> bool:
        return self.certified_lower == self.certified_upper

    def to_json(self):
        d = {
            "lower": self.lower,
            "upper": self.upper,
            "lower_certificate": self.lower_certificate.to_json(),
            "upper_certificate": self.upper_certificate.to_json(),
            "certified_lower": self.certified_lower,
            "certified_upper": self.certified_upper,
            "exact": self.exact,
        }
        d["ass"] = self.ass.to_json() if self.ass is not None else None
        return d


def depth_bracket(
    ideal: MonomialIdeal,
    budget: int = DEFAULT_BUDGET,
    engine: str = "auto",
    cap: int = homology.DEFAULT_CAP,
    max_seq: int | None = None,
    with_ass: bool = True,
    ass: AssSet | None = None,
) -> DepthBracket:
    """Certified bounds on depth(S/I).

    ``engine`` is ``"certificates"`` (no homology), ``"exact"`` (homology
    must succeed, CapExceeded propagates) or ``"auto"`` (homology when the
    lcm lattice fits under ``cap``).
    """
    if engine not in ("auto", "exact", "certificates"):
        raise ValueError(f"unknown engine {engine!r}")
    if not ideal.is_proper():
        raise ValueError("depth needs a proper nonzero ideal")
    n = ideal.ring.count
    w = socle_witness(ideal)
    if ass is None and (with_ass or w is None):
        ass = associated_primes(ideal, budget)
    if w is not None:
        lower = upper = 0
        lo_cert = up_cert = Certificate("SocleNonzero", str(w))
    else:
        big = max(ass.primes, key=len)
        upper = n - len(big)
        up_cert = Certificate("AssociatedPrime", list(big))
        limit = upper if max_seq is None else min(upper, max_seq)
        seq = longest_regular_sequence(ideal, limit)
        if seq:
            lower = len(seq)
            lo_cert = Certificate("RegularVariableSequence", list(seq))
        else:
            lower = 1
            lo_cert = Certificate("SocleZero")
    bracket = DepthBracket(lower, upper, lo_cert, up_cert, lower, upper, None, ass)
    if engine == "certificates":
        return bracket
    try:
        d = homology.depth_exact(ideal, cap)
    except homology.CapExceeded:
        if engine == "exact":
            raise
        return bracket
    if not lower <= d <= upper:
        raise RuntimeError(f"exact depth {d} outside certified bracket [{lower}, {upper}]")
    bracket.exact = d
    if bracket.lower < d:
        bracket.lower_certificate = Certificate("ExactEngine")
    bracket.lower = bracket.upper = d
    bracket.upper_certificate = Certificate("ExactEngine")
    return bracket
