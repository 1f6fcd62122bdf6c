"""Multigraded Betti numbers of S/I from upper Koszul simplicial complexes.

beta_{i,a}(I) is the rank of reduced homology in degree i-1 of the upper
Koszul complex of I at a, and it can only be nonzero for a in the lcm
lattice of I.  Projective dimension then gives depth by Auslander-Buchsbaum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ContextMismatch, Monomial, MonomialIdeal, divisible_mask, sort_rows

DEFAULT_CAP = 200_000


class CapExceeded(RuntimeError):
    """The lcm lattice grew past its cap; fall back to certificates."""


# ---------------------------------------------------------------- complexes


@dataclass(frozen=True)
class SimplicialComplex:
    """Faces are bitmasks over ``range(vertex_count)``."""

    vertex_count: int
    faces: frozenset
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        faces = frozenset(int(f) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        full = (1 << self.vertex_count) - 1
        for f in faces:
            if f & ~full:
                raise ValueError(f"face {f:b} uses a vertex outside range({self.vertex_count})")
            g = f
            while g:
                low = g & -g
                if f & ~low not in faces:
                    raise ValueError(f"face {f:b} is missing its facet {f & ~low:b}")
                g ^= low

    @classmethod
    def from_faces(cls, vertex_count, faces, labels=()):
        masks = set()
        for face in faces:
            m = 0
            for v in face:
                m |= 1 << v
            masks.add(m)
        return cls(vertex_count, frozenset(masks), tuple(labels))

    @property
    def dim(self) -> int:
        if not self.faces:
            return -2
        return max(f.bit_count() for f in self.faces) - 1

    def f_vector(self) -> list[int]:
        """Face counts in dimensions -1 .. dim."""
        counts = [0] * (self.dim + 2)
        for f in self.faces:
            counts[f.bit_count()] += 1
        return counts

    def face_sets(self) -> list[tuple]:
        out = []
        for f in sorted(self.faces, key=lambda m: (m.bit_count(), m)):
            out.append(tuple(v for v in range(self.vertex_count) if f >> v & 1))
        return out


def rank_exact(rows: list[list[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on integers."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank, prev = 0, 1
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        top = m[rank]
        for r in range(rank + 1, len(m)):
            f = m[r][c]
            row = m[r]
            m[r] = [(p * row[j] - f * top[j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    m = [r for r in m if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        top = [x * inv % p for x in m[rank]]
        m[rank] = top
        for r in range(rank + 1, len(m)):
            f = m[r][c]
            if f:
                m[r] = [(x - f * y) % p for x, y in zip(m[r], top)]
        rank += 1
        if rank == len(m):
            break
    return rank


def _boundary(upper: list[int], lower_index: dict) -> list[list[int]]:
    """Rows indexed by the faces in ``upper``; columns by their facets."""
    rows = []
    for f in upper:
        row = [0] * len(lower_index)
        sign = 1
        g = f
        while g:
            low = g & -g
            row[lower_index[f & ~low]] = sign
            sign = -sign
            g ^= low
        rows.append(row)
    return rows


def _homology_of_faces(faces, prime=None) -> list[int]:
    if not faces:
        return []
    by_size: dict[int, list[int]] = {}
    for f in faces:
        by_size.setdefault(f.bit_count(), []).append(f)
    top = max(by_size)
    levels = [sorted(by_size.get(s, ())) for s in range(top + 1)]
    rank = rank_exact if prime is None else (lambda r: rank_mod_p(r, prime))
    # ranks[s] = rank of the boundary from size-s faces to size-(s-1) faces
    ranks = [0] * (top + 2)
    for s in range(1, top + 1):
        if levels[s] and levels[s - 1]:
            idx = {f: j for j, f in enumerate(levels[s - 1])}
            ranks[s] = rank(_boundary(levels[s], idx))
    return [len(levels[s]) - ranks[s] - ranks[s + 1] for s in range(top + 1)]


def reduced_homology_ranks(cx: SimplicialComplex, prime: int | None = None) -> list[int]:
    """Ranks of reduced homology in degrees -1 .. dim (rational unless ``prime``)."""
    return _homology_of_faces(cx.faces, prime)


# ---------------------------------------------------------------- lcm lattice


@dataclass(frozen=True)
class LcmLattice:
    elements: tuple
    cap: int

    def __len__(self):
        return len(self.elements)


def _encoder(bounds: np.ndarray):
    radix = bounds.astype(object) + 1
    total = 1
    for r in radix:
        total *= int(r)
    if total >= 2**62:
        return None
    mult = np.cumprod(np.concatenate([[1], radix[:-1]]).astype(np.int64))
    return lambda arr: arr @ mult


def lattice_rows(ideal: MonomialIdeal, cap: int = DEFAULT_CAP) -> np.ndarray:
    gens = ideal.array
    n = gens.shape[1]
    enc = _encoder(gens.max(axis=0))
    if enc is None:
        return _lattice_rows_slow(gens, cap)
    seen = np.unique(enc(gens))
    found = [gens]
    front = gens
    total = len(gens)
    step = max(1, (1 << 21) // max(1, len(gens) * n))
    while len(front):
        fresh_rows = []
        for s in range(0, len(front), step):
            cand = np.maximum(front[s:s + step, None, :], gens[None, :, :]).reshape(-1, n)
            codes, first = np.unique(enc(cand), return_index=True)
            fresh = ~np.isin(codes, seen, assume_unique=True)
            seen = np.union1d(seen, codes[fresh])
            fresh_rows.append(cand[first[fresh]])
            total += int(fresh.sum())
            if total > cap:
                raise CapExceeded(f"lcm lattice exceeds cap {cap}")
        front = np.vstack(fresh_rows)
        found.append(front)
    return sort_rows(np.vstack(found))


def _lattice_rows_slow(gens, cap):
    seen = {tuple(r) for r in gens.tolist()}
    front = list(seen)
    while front:
        new = []
        for e in front:
            for g in gens.tolist():
                m = tuple(map(max, e, g))
                if m not in seen:
                    seen.add(m)
                    new.append(m)
        if len(seen) > cap:
            raise CapExceeded(f"lcm lattice exceeds cap {cap}")
        front = new
    return sort_rows(np.array(sorted(seen), dtype=np.int64))


def lcm_lattice(ideal: MonomialIdeal, cap: int = DEFAULT_CAP) -> LcmLattice:
    if not ideal.is_proper():
        raise ValueError("lcm lattice needs a proper nonzero ideal")
    rows = lattice_rows(ideal, cap)
    ring = ideal.ring
    return LcmLattice(tuple(Monomial(ring, tuple(r)) for r in rows.tolist()), cap)


# ---------------------------------------------------------------- Koszul complexes


def upper_koszul(ideal: MonomialIdeal, a: Monomial) -> SimplicialComplex:
    """Squarefree b inside supp(a) with a / x^b in the ideal."""
    if ideal.ring != a.ring:
        raise ContextMismatch("monomial and ideal live in different rings")
    supp = [i for i, e in enumerate(a.exps) if e]
    s = len(supp)
    base = np.array(a.exps, dtype=np.int64)
    masks = np.arange(1 << s)
    bits = (masks[:, None] >> np.arange(s)[None, :]) & 1
    cand = np.repeat(base[None, :], len(masks), axis=0)
    cand[:, supp] -= bits
    inside = divisible_mask(cand, ideal.array)
    faces = frozenset(int(m) for m in masks[inside])
    return SimplicialComplex(s, faces, tuple(ideal.ring.vars[i] for i in supp))


def _face_table(rows: np.ndarray, gens: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """table[e, m] is True iff subset m is a face of the upper Koszul complex at rows[e].

    a / x^b lies in I iff b sits inside {i : a_i > g_i} for some generator g
    dividing a, so the faces are the subsets of those slack masks.
    """
    c, n = rows.shape
    weights = 1 << np.arange(n, dtype=np.int64)
    diff = rows[:, None, :] - gens[None, :, :]
    divides = (diff >= 0).all(axis=2)
    slack = (diff > 0).astype(np.int64) @ weights
    table = np.zeros((c, 1 << n), dtype=bool)
    e, g = np.nonzero(divides)
    table[e, slack[e, g]] = True
    for v in range(n):
        low = masks[(masks >> v & 1) == 0]
        table[:, low] |= table[:, low | (1 << v)]
    return table


def _is_cone(table: np.ndarray, n: int) -> np.ndarray:
    masks = np.arange(table.shape[1])
    cone = np.zeros(len(table), dtype=bool)
    for v in range(n):
        up = table[:, masks | (1 << v)]
        cone |= (~table | up).all(axis=1)
    return cone


# ---------------------------------------------------------------- Betti tables


@dataclass
class BettiTable:
    """Betti numbers of the ideal; ``pd`` and ``depth`` refer to S/I."""

    ring: object
    entries: dict
    pd: int
    depth: int
    field: str = "QQ"

    def totals(self) -> list[int]:
        if not self.entries:
            return []
        top = max(i for i, _ in self.entries)
        out = [0] * (top + 1)
        for (i, _), r in self.entries.items():
            out[i] += r
        return out

    def quotient_totals(self) -> list[int]:
        """Total Betti numbers of S/I, starting with beta_0(S/I) = 1."""
        return [1] + self.totals()

    def to_json(self) -> dict:
        items = sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].sort_key()))
        return {
            "ring": list(self.ring.vars),
            "field": self.field,
            "entries": [
                {"i": i, "multidegree": list(a.exps), "rank": r} for (i, a), r in items
            ],
            "pd": self.pd,
            "depth": self.depth,
        }


def betti_table(ideal: MonomialIdeal, cap: int = DEFAULT_CAP, prime: int | None = None) -> BettiTable:
    if not ideal.is_proper():
        raise ValueError("Betti table needs a proper nonzero ideal")
    ring = ideal.ring
    n = ring.count
    rows = lattice_rows(ideal, cap)
    masks = np.arange(1 << n)
    gens = ideal.array
    per_elem = (1 << n) * n + len(gens) * n
    step = max(1, (1 << 23) // per_elem)
    entries = {}
    for s in range(0, len(rows), step):
        chunk = rows[s:s + step]
        table = _face_table(chunk, gens, masks)
        cone = _is_cone(table, n)
        for e in np.flatnonzero(~cone):
            faces = [int(m) for m in masks[table[e]]]
            ranks = _homology_of_faces(faces, prime)
            a = None
            for i, r in enumerate(ranks):
                if r:
                    a = a or Monomial(ring, tuple(chunk[e].tolist()))
                    entries[(i, a)] = r
    pd_ideal = max(i for i, _ in entries)
    pd = pd_ideal + 1
    return BettiTable(ring, entries, pd, n - pd, "QQ" if prime is None else f"GF({prime})")


def depth_exact(ideal: MonomialIdeal, cap: int = DEFAULT_CAP, prime: int | None = None) -> int:
    return betti_table(ideal, cap, prime).depth
