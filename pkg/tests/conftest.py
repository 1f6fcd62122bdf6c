import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import strategies as st

from monodepth.core import Monomial, RingContext, minimalize

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# ---------------------------------------------------------------- brute-force oracles
# Pure Python on exponent tuples, sharing no code with the numpy kernels.


def brute_divides(g, m):
    return all(p <= q for p, q in zip(g, m))


def brute_minimal(monos):
    monos = set(map(tuple, monos))
    return {m for m in monos if not any(g != m and brute_divides(g, m) for g in monos)}


def brute_member(gens, m):
    return any(brute_divides(g, m) for g in gens)


def brute_power(gens, k):
    out = set()
    for combo in itertools.combinations_with_replacement(list(gens), k):
        out.add(tuple(map(sum, zip(*combo))))
    return brute_minimal(out)


def brute_lattice(gens):
    gens = list(gens)
    out = set()
    for r in range(1, len(gens) + 1):
        for combo in itertools.combinations(gens, r):
            out.add(tuple(map(max, zip(*combo))))
    return out


def koszul_betti_quotient(gens, a):
    """beta_{i,a}(S/I) from the Koszul complex of S/I in multidegree a (float ranks)."""
    n = len(a)
    supp = [j for j in range(n) if a[j]]
    basis = {}
    for r in range(len(supp) + 1):
        basis[r] = []
        for F in itertools.combinations(supp, r):
            m = list(a)
            for j in F:
                m[j] -= 1
            if not brute_member(gens, m):
                basis[r].append(F)
    ranks = {}
    for r in range(1, len(supp) + 1):
        rows, cols = basis[r], basis[r - 1]
        if not rows or not cols:
            ranks[r] = 0
            continue
        idx = {F: j for j, F in enumerate(cols)}
        M = np.zeros((len(rows), len(cols)))
        for i, F in enumerate(rows):
            for pos, j in enumerate(F):
                G = F[:pos] + F[pos + 1:]
                if G in idx:
                    M[i, idx[G]] = (-1) ** pos
        ranks[r] = int(np.linalg.matrix_rank(M))
    out = {}
    for r in range(len(supp) + 1):
        h = len(basis[r]) - ranks.get(r, 0) - ranks.get(r + 1, 0)
        if h:
            out[r] = h
    return out


def brute_colon_is_prime(gens, w, n):
    """Variables set P if I : w equals the ideal generated by P, else None."""
    if brute_member(gens, w):
        return None
    P = []
    for j in range(n):
        m = list(w)
        m[j] += 1
        if brute_member(gens, m):
            P.append(j)
    # I : w must contain no monomial outside (P); testing high powers of the others suffices
    top = [max(g[j] for g in gens) for j in range(n)]
    m = list(w)
    for j in range(n):
        if j not in P:
            m[j] += top[j]
    if brute_member(gens, m):
        return None
    return tuple(P)


def brute_ass(gens, n):
    """Associated primes by scanning witnesses w in the box below lcm(G)."""
    top = [max(g[j] for g in gens) for j in range(n)]
    found = set()
    for w in itertools.product(*[range(t + 1) for t in top]):
        P = brute_colon_is_prime(gens, w, n)
        if P is not None and P:
            found.add(P)
    return found


# ---------------------------------------------------------------- strategies


@st.composite
def ideals(draw, max_vars=5, max_gens=6, max_exp=4, min_vars=1):
    n = draw(st.integers(min_vars, max_vars))
    ring = RingContext(tuple(f"z{i}" for i in range(1, n + 1)))
    vecs = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * n), min_size=1, max_size=max_gens))
    return minimalize([Monomial(ring, v) for v in vecs], ring=ring)


@st.composite
def proper_ideals(draw, **kw):
    I = draw(ideals(**kw))
    if not I.is_proper():
        # a generator of positive degree keeps the ideal proper
        ring = I.ring
        I = minimalize([ring.var(ring.vars[0], 2)], ring=ring)
    return I


def monomials_in(ring, max_exp=4):
    return st.tuples(*[st.integers(0, max_exp)] * ring.count).map(lambda e: Monomial(ring, e))


@pytest.fixture
def xyz():
    return RingContext(("x", "y", "z"))


def binomials(n):
    return [comb(n, i) for i in range(n + 1)]
