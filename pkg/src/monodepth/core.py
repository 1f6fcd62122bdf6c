"""Exact monomial and monomial-ideal arithmetic.

Monomials are exponent vectors over a :class:`RingContext`.  Ideals are kept
in canonical form: the unique minimal generating set, sorted graded
lexicographically, so equality of ideals is equality of generator tuples.
Bulk work (products, minimalization, membership of many monomials) is done
on integer numpy arrays.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

EXP_MAX = 2**31 - 1
_CHUNK = 1 << 22  # max elements of a broadcast comparison block


class ContextMismatch(ValueError):
    pass


class ExponentOverflow(OverflowError):
    pass


def worker_count() -> int:
    """Worker cap from MONODEPTH_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("MONODEPTH_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RingContext:
    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if any(not isinstance(v, str) or not v for v in self.vars):
            raise ValueError("variable names must be nonempty strings")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in {self.vars}")
        for v in self.vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"bad variable name {v!r}")

    @property
    def count(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of ring {self.vars}") from None

    def one(self) -> Monomial:
        return Monomial(self, (0,) * self.count)

    def var(self, name: str, power: int = 1) -> Monomial:
        e = [0] * self.count
        e[self.index(name)] = power
        return Monomial(self, tuple(e))

    def monomial(self, text: str) -> Monomial:
        return parse_monomial(self, text)

    def ideal(self, gens: Iterable[Monomial | str]) -> MonomialIdeal:
        ms = [self.monomial(g) if isinstance(g, str) else g for g in gens]
        return minimalize(ms, ring=self)

    def maximal_ideal(self) -> MonomialIdeal:
        return self.ideal(self.var(v) for v in self.vars)

    def __str__(self):
        return " ".join(self.vars)


def _check_exps(exps: Sequence[int], n: int) -> tuple[int, ...]:
    exps = tuple(int(e) for e in exps)
    if len(exps) != n:
        raise ValueError(f"exponent vector of length {len(exps)} for a ring with {n} variables")
    for e in exps:
        if e < 0:
            raise ValueError("exponents must be nonnegative")
        if e > EXP_MAX:
            raise ExponentOverflow(f"exponent {e} exceeds {EXP_MAX}")
    return exps


def _same_ring(*objs) -> RingContext:
    ring = objs[0].ring
    for o in objs[1:]:
        if o.ring != ring:
            raise ContextMismatch(f"ring {o.ring.vars} differs from {ring.vars}")
    return ring


@dataclass(frozen=True)
class Monomial:
    ring: RingContext
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", _check_exps(self.exps, self.ring.count))

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def support(self) -> tuple[str, ...]:
        return tuple(v for v, e in zip(self.ring.vars, self.exps) if e)

    def is_one(self) -> bool:
        return not any(self.exps)

    def divides(self, other: Monomial) -> bool:
        _same_ring(self, other)
        return all(p <= q for p, q in zip(self.exps, other.exps))

    def __mul__(self, other: Monomial) -> Monomial:
        _same_ring(self, other)
        return Monomial(self.ring, tuple(p + q for p, q in zip(self.exps, other.exps)))

    def __pow__(self, k: int) -> Monomial:
        return Monomial(self.ring, tuple(e * k for e in self.exps))

    def lcm(self, other: Monomial) -> Monomial:
        _same_ring(self, other)
        return Monomial(self.ring, tuple(map(max, self.exps, other.exps)))

    def gcd(self, other: Monomial) -> Monomial:
        _same_ring(self, other)
        return Monomial(self.ring, tuple(map(min, self.exps, other.exps)))

    def colon(self, other: Monomial) -> Monomial:
        """self / gcd(self, other)."""
        _same_ring(self, other)
        return Monomial(self.ring, tuple(max(p - q, 0) for p, q in zip(self.exps, other.exps)))

    def __truediv__(self, other: Monomial) -> Monomial:
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        return self.colon(other)

    def sort_key(self):
        return _grlex_key(self.exps)

    def __lt__(self, other: Monomial) -> bool:
        _same_ring(self, other)
        return self.sort_key() < other.sort_key()

    def __str__(self):
        parts = []
        for v, e in zip(self.ring.vars, self.exps):
            if e == 1:
                parts.append(v)
            elif e:
                parts.append(f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"Monomial({self})"


def _grlex_key(exps):
    # ascending degree; inside a degree, lexicographically larger vectors first
    return (sum(exps), tuple(-e for e in exps))


def monomial_algebra(m1: Monomial, m2: Monomial) -> dict:
    _same_ring(m1, m2)
    return {
        "divides": m1.divides(m2),
        "lcm": m1.lcm(m2),
        "gcd": m1.gcd(m2),
        "product": m1 * m2,
        "colon": m1.colon(m2),
    }


_FACTOR = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(\d+))?\s*")


def parse_monomial(ring: RingContext, text: str) -> Monomial:
    """Parse ``a^6*b^4*x1`` style text; ``1`` is the unit monomial."""
    text = text.strip()
    if text == "1":
        return ring.one()
    if not text:
        raise ValueError("empty monomial")
    e = [0] * ring.count
    for part in text.split("*"):
        m = _FACTOR.fullmatch(part)
        if not m:
            raise ValueError(f"cannot parse factor {part!r} in {text!r}")
        e[ring.index(m.group(1))] += int(m.group(2) or 1)
    return Monomial(ring, tuple(e))


# ---------------------------------------------------------------- array kernels


def as_array(monos: Sequence[Monomial], n: int) -> np.ndarray:
    if not monos:
        return np.zeros((0, n), dtype=np.int64)
    return np.array([m.exps for m in monos], dtype=np.int64).reshape(len(monos), n)


def checked(arr: np.ndarray) -> np.ndarray:
    if arr.size and arr.max() > EXP_MAX:
        raise ExponentOverflow(f"exponent {int(arr.max())} exceeds {EXP_MAX}")
    return arr


def divisible_mask(cands: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """mask[i] is True iff some row of gens divides cands[i]."""
    out = np.zeros(len(cands), dtype=bool)
    if len(cands) == 0 or len(gens) == 0:
        return out
    n = cands.shape[1]
    step_c = max(1, _CHUNK // max(1, len(gens) * max(n, 1)))
    for s in range(0, len(cands), step_c):
        c = cands[s:s + step_c]
        out[s:s + step_c] = (gens[None, :, :] <= c[:, None, :]).all(axis=2).any(axis=1)
    return out


def minimal_rows(arr: np.ndarray) -> np.ndarray:
    """Inclusion-minimal rows (no row divides another), deduplicated, grlex sorted."""
    n = arr.shape[1]
    if len(arr) == 0:
        return arr.reshape(0, n)
    if n == 0:
        return arr[:1]
    arr = np.unique(arr, axis=0)
    deg = arr.sum(axis=1)
    keep = []
    kept = np.zeros((0, n), dtype=arr.dtype)
    for d in np.unique(deg):
        c = arr[deg == d]
        if len(kept):
            c = c[~divisible_mask(c, kept)]
        if len(c):
            keep.append(c)
            kept = np.vstack(keep)
    return sort_rows(kept)


def sort_rows(arr: np.ndarray) -> np.ndarray:
    if len(arr) <= 1:
        return arr
    # np.lexsort uses the last key as primary
    keys = [arr[:, j] for j in reversed(range(arr.shape[1]))]
    order = np.lexsort([-k for k in keys] + [arr.sum(axis=1)])
    return arr[order]


def pairwise(a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
    """Minimal rows of op(a_i, b_j) over all pairs, built in bounded blocks."""
    n = a.shape[1]
    if len(a) == 0 or len(b) == 0:
        return np.zeros((0, n), dtype=np.int64)
    step = max(1, _CHUNK // max(1, len(b) * max(n, 1)))
    acc = np.zeros((0, n), dtype=np.int64)
    for s in range(0, len(a), step):
        block = op(a[s:s + step, None, :], b[None, :, :])
        block = block.reshape(block.shape[0] * block.shape[1], n)
        block = checked(block)
        if len(acc):
            block = block[~divisible_mask(block, acc)]
        acc = minimal_rows(np.vstack([acc, block]))
    return acc


# ---------------------------------------------------------------- ideals


@dataclass(frozen=True, eq=False)
class MonomialIdeal:
    """Monomial ideal stored by its canonical minimal generators.

    Construct through :func:`minimalize` or ``RingContext.ideal``; the
    constructor trusts its ``gens`` argument to already be canonical.
    """

    ring: RingContext
    gens: tuple[Monomial, ...]
    _arr: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self._arr is None:
            object.__setattr__(self, "_arr", as_array(self.gens, self.ring.count))

    @classmethod
    def _from_rows(cls, ring: RingContext, rows: np.ndarray) -> MonomialIdeal:
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != ring.count:
            raise ValueError("generator rows do not match the ring")
        gens = tuple(Monomial(ring, tuple(r)) for r in rows.tolist())
        rows.setflags(write=False)
        return cls(ring, gens, rows)

    @property
    def array(self) -> np.ndarray:
        return self._arr

    def __eq__(self, other):
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.ring == other.ring and self.gens == other.gens

    def __hash__(self):
        return hash((self.ring, self.gens))

    def __len__(self):
        return len(self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return len(self.gens) == 1 and self.gens[0].is_one()

    def is_proper(self) -> bool:
        return not self.is_zero() and not self.is_unit()

    def __contains__(self, m: Monomial) -> bool:
        return membership(self, m)

    def contains_all(self, monos: Sequence[Monomial]) -> np.ndarray:
        for m in monos:
            _same_ring(self, m)
        return divisible_mask(as_array(monos, self.ring.count), self._arr)

    def lcm_all(self) -> Monomial:
        if self.is_zero():
            return self.ring.one()
        return Monomial(self.ring, tuple(self._arr.max(axis=0).tolist()))

    def __add__(self, other):
        return ideal_arith(self, other, "sum")

    def __mul__(self, other):
        return ideal_arith(self, other, "product")

    def __and__(self, other):
        return ideal_arith(self, other, "intersect")

    def __pow__(self, k):
        return power(self, k)

    def __repr__(self):
        return f"MonomialIdeal({', '.join(map(str, self.gens))})"

    def __str__(self):
        return "(" + ", ".join(map(str, self.gens)) + ")"

    # serialization

    def to_text(self) -> str:
        lines = ["ring: " + " ".join(self.ring.vars)]
        lines += [str(g) for g in self.gens]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> MonomialIdeal:
        ring = None
        gens = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ring is None:
                if not line.startswith("ring:"):
                    raise ValueError("ideal text must start with a 'ring:' line")
                ring = RingContext(tuple(line[len("ring:"):].split()))
                continue
            gens.append(parse_monomial(ring, line))
        if ring is None:
            raise ValueError("missing 'ring:' line")
        return minimalize(gens, ring=ring)

    def to_json(self) -> dict:
        return {"ring": list(self.ring.vars), "gens": [list(g.exps) for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict | str) -> MonomialIdeal:
        if isinstance(data, str):
            data = json.loads(data)
        ring = RingContext(tuple(data["ring"]))
        return minimalize([Monomial(ring, tuple(e)) for e in data["gens"]], ring=ring)


def minimalize(gens: Iterable[Monomial], ring: RingContext | None = None) -> MonomialIdeal:
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("a ring is required to build the zero ideal")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ContextMismatch(f"ring {g.ring.vars} differs from {ring.vars}")
    return MonomialIdeal._from_rows(ring, minimal_rows(as_array(gens, ring.count)))


def membership(ideal: MonomialIdeal, m: Monomial) -> bool:
    _same_ring(ideal, m)
    if ideal.is_zero():
        return False
    return bool((ideal.array <= np.array(m.exps)).all(axis=1).any())


def ideal_arith(a: MonomialIdeal, b: MonomialIdeal, op: str) -> MonomialIdeal:
    ring = _same_ring(a, b)
    A, B = a.array, b.array
    if op == "sum":
        rows = minimal_rows(np.vstack([A, B]))
    elif op == "product":
        rows = pairwise(A, B, np.add)
    elif op == "intersect":
        # a generator of one ideal already inside the other generates its own lcms
        a_in, b_in = divisible_mask(A, B), divisible_mask(B, A)
        rows = pairwise(A[~a_in], B[~b_in], np.maximum)
        rows = minimal_rows(np.vstack([rows, A[a_in], B[b_in]]))
    else:
        raise ValueError(f"unknown operation {op!r}")
    return MonomialIdeal._from_rows(ring, rows)


def power(ideal: MonomialIdeal, k: int) -> MonomialIdeal:
    """Minimal generators of ideal**k by binary exponentiation."""
    if k < 1:
        raise ValueError("power requires k >= 1")
    result = None
    base = ideal
    while True:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if not k:
            return result
        base = base * base


def powers(ideal: MonomialIdeal, kmax: int):
    """Yield (k, ideal**k) for k = 1..kmax, each from the previous one."""
    cur = ideal
    for k in range(1, kmax + 1):
        if k > 1:
            cur = cur * ideal
        yield k, cur


def colon(ideal: MonomialIdeal, by: Monomial | MonomialIdeal) -> MonomialIdeal:
    ring = _same_ring(ideal, by)
    if isinstance(by, Monomial):
        rows = np.maximum(ideal.array - np.array(by.exps, dtype=np.int64), 0)
        return MonomialIdeal._from_rows(ring, minimal_rows(rows))
    if by.is_zero():
        raise ValueError("colon by the zero ideal")
    result = None
    for v in by.gens:
        q = colon(ideal, v)
        result = q if result is None else result & q
    return result


def localize(ideal: MonomialIdeal, keep: Iterable[str]) -> MonomialIdeal:
    """Set every variable outside ``keep`` to 1; result lives on the kept variables."""
    keep = set(keep)
    for v in keep:
        ideal.ring.index(v)
    names = tuple(v for v in ideal.ring.vars if v in keep)
    cols = [ideal.ring.index(v) for v in names]
    sub = RingContext(names)
    return MonomialIdeal._from_rows(sub, minimal_rows(ideal.array[:, cols]))


def restrict_to_zero(ideal: MonomialIdeal, drop: Iterable[str]) -> MonomialIdeal:
    """Image of the ideal after setting the ``drop`` variables to 0."""
    drop = set(drop)
    names = tuple(v for v in ideal.ring.vars if v not in drop)
    cols = [ideal.ring.index(v) for v in names]
    dcols = [ideal.ring.index(v) for v in drop]
    rows = ideal.array
    if dcols:
        rows = rows[(rows[:, dcols] == 0).all(axis=1)]
    return MonomialIdeal._from_rows(RingContext(names), minimal_rows(rows[:, cols]))
