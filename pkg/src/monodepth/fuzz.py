"""Random small ideals and cross-checks between the exact engine and certificates."""

from __future__ import annotations

import random

from .certificates import associated_primes, depth_bracket, socle_test
from .core import Monomial, MonomialIdeal, RingContext, minimalize
from .homology import depth_exact


def random_ideal(rng: random.Random, max_vars=5, max_gens=6, max_exp=4, proper=True) -> MonomialIdeal:
    n = rng.randint(1, max_vars)
    ring = RingContext(tuple(f"z{i}" for i in range(1, n + 1)))
    while True:
        gens = [
            Monomial(ring, tuple(rng.randint(0, max_exp) for _ in range(n)))
            for _ in range(rng.randint(1, max_gens))
        ]
        ideal = minimalize(gens, ring=ring)
        if not proper or ideal.is_proper():
            return ideal


def cross_check(ideal: MonomialIdeal) -> dict:
    d = depth_exact(ideal)
    br = depth_bracket(ideal, engine="certificates")
    ass = associated_primes(ideal)
    return {
        "ideal": str(ideal),
        "ring": list(ideal.ring.vars),
        "exact": d,
        "bracket": [br.lower, br.upper],
        "in_bracket": br.lower <= d <= br.upper,
        "socle_matches_ass": socle_test(ideal) == (ideal.ring.vars in ass),
    }


def run(seed: int, count: int) -> list[dict]:
    rng = random.Random(seed)
    return [cross_check(random_ideal(rng)) for _ in range(count)]
