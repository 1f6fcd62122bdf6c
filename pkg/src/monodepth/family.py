"""The ideal family I(n) with a prescribed depth function, and its witnesses.

I(n) lives in K[a, b, c, d, x1, y1, ..., xn, yn] and is generated by

    a^6, a^5 b, a b^5, b^6, a^4 b^4 c, a^4 b^4 d,
    a^4 x_i y_i^2, b^4 x_i^2 y_i   (i = 1..n).

depth(S/I(n)^k) is 0 for odd k <= 2n+1, 1 for even k <= 2n and 2 for
k > 2n+1.  Everything here builds explicit monomials that certify those
values; :func:`verify_theorem` checks them for a finite range of k.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import homology
from .certificates import associated_primes, depth_bracket, regular_sequence_check, socle_test
from .core import (
    Monomial,
    MonomialIdeal,
    RingContext,
    colon,
    localize,
    powers,
    restrict_to_zero,
)

J_GENS = ("a^6", "a^5*b", "a*b^5", "b^6", "a^4*b^4*c", "a^4*b^4*d")


def family_ring(n: int) -> RingContext:
    names = ["a", "b", "c", "d"]
    for i in range(1, n + 1):
        names += [f"x{i}", f"y{i}"]
    return RingContext(tuple(names))


def mono(ring: RingContext, exps: dict) -> Monomial:
    """Monomial from {variable: exponent}; zero exponents may be omitted."""
    e = [0] * ring.count
    for v, k in exps.items():
        e[ring.index(v)] += k
    return Monomial(ring, tuple(e))


def _a_gen(ring, i):
    return mono(ring, {"a": 4, f"x{i}": 1, f"y{i}": 2})


def _b_gen(ring, i):
    return mono(ring, {"b": 4, f"x{i}": 2, f"y{i}": 1})


def _pairs(ring, indices) -> Monomial:
    """Product of (a^4 x_i y_i^2)(b^4 x_i^2 y_i) over the given indices."""
    out = ring.one()
    for i in indices:
        out = out * _a_gen(ring, i) * _b_gen(ring, i)
    return out


@dataclass(frozen=True)
class FamilyInstance:
    n: int
    ring: RingContext
    ideal: MonomialIdeal
    J: MonomialIdeal
    L: MonomialIdeal


def build_family(n: int) -> FamilyInstance:
    if n < 0:
        raise ValueError("n must be >= 0")
    ring = family_ring(n)
    J = ring.ideal(J_GENS)
    L_gens = []
    for i in range(1, n + 1):
        L_gens += [_a_gen(ring, i), _b_gen(ring, i)]
    L = ring.ideal(L_gens)
    return FamilyInstance(n, ring, J + L, J, L)


def expected_depth(n: int, k: int) -> int:
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if k > 2 * n + 1:
        return 2
    return 0 if k % 2 else 1


def strict_local_maxima(seq) -> int:
    return sum(1 for i in range(1, len(seq) - 1) if seq[i - 1] < seq[i] > seq[i + 1])


# ---------------------------------------------------------------- odd k


def _odd_t(n, k):
    if k < 1 or k % 2 == 0 or k > 2 * n + 1:
        raise ValueError(f"k={k} must be odd with 1 <= k <= 2n+1 = {2 * n + 1}")
    return (k + 1) // 2


def witness_u(n: int, k: int) -> Monomial:
    """Socle witness of S/I^k for odd k = 2t-1 <= 2n+1."""
    t = _odd_t(n, k)
    ring = family_ring(n)
    u = mono(ring, {"a": 4, "b": 4}) * _pairs(ring, range(1, t))
    for i in range(t, n + 1):
        u = u * mono(ring, {f"x{i}": 1, f"y{i}": 1})
    return u


def divisor_targets(n: int) -> list[str]:
    """Variable z_i whose multiple z_i * u the i-th divisor must divide."""
    out = ["a", "b", "c", "d"]
    for i in range(1, n + 1):
        out += [f"x{i}", f"y{i}"]
    return out


def witness_divisors(n: int, k: int) -> list[Monomial]:
    """The 2n+4 elements of I^k dividing a*u, b*u, c*u, d*u, x_l*u, y_l*u.

    Only defined for t >= 2 (k >= 3); for k = 1 the formulas would need x_0.
    """
    t = _odd_t(n, k)
    if t < 2:
        raise ValueError("divisor monomials need k >= 3")
    ring = family_ring(n)
    A = lambda i: _a_gen(ring, i)  # noqa: E731
    B = lambda i: _b_gen(ring, i)  # noqa: E731
    m = lambda **e: mono(ring, e)  # noqa: E731
    head = _pairs(ring, range(1, t - 1))
    full = _pairs(ring, range(1, t))
    v = [
        m(a=5, b=1) * m(b=6) * A(t - 1) * head,
        m(a=1, b=5) * m(a=6) * B(t - 1) * head,
        m(a=4, b=4, c=1) * full,
        m(a=4, b=4, d=1) * full,
    ]
    for ell in range(1, n + 1):
        if ell < t:
            rest = _pairs(ring, [i for i in range(1, t) if i != ell])
            v.append(m(a=6) * B(ell) ** 2 * rest)
            v.append(m(b=6) * A(ell) ** 2 * rest)
        else:
            v.append(B(ell) * full)
            v.append(A(ell) * full)
    return v


# ---------------------------------------------------------------- even k


def colon_cd_generators(n: int, k: int) -> tuple[Monomial, ...]:
    """a^4 b^4 times products of k-1 distinct generators of L."""
    if k < 1:
        raise ValueError("k must be >= 1")
    fam = build_family(n)
    base = mono(fam.ring, {"a": 4, "b": 4})
    out = set()
    for combo in itertools.combinations(fam.L.gens, k - 1):
        m = base
        for g in combo:
            m = m * g
        out.add(m)
    return tuple(sorted(out, key=Monomial.sort_key))


@dataclass(frozen=True)
class LocalizedFamily:
    """I(n) with y_n set to 1, on a, b, c, d, x1, y1, ..., x_{n-1}, y_{n-1}, x_n."""

    n: int
    ideal: MonomialIdeal
    prime: tuple

    @property
    def ring(self) -> RingContext:
        return self.ideal.ring

    def witness(self, k: int) -> Monomial:
        t = _even_t(self.n, k)
        ring = self.ring
        u = mono(ring, {"a": 8, "b": 4}) * _pairs(ring, range(1, t))
        for i in range(t, self.n):
            u = u * mono(ring, {f"x{i}": 1, f"y{i}": 1})
        return u * mono(ring, {f"x{self.n}": 1})

    def targets(self) -> list[str]:
        return divisor_targets(self.n - 1) + [f"x{self.n}"]

    def divisors(self, k: int) -> list[Monomial]:
        """(a^4 x_n) times the n-1 family divisors at k-1, then a^6 b^4 x_n^2 (pairs)."""
        t = _even_t(self.n, k)
        if t < 2:
            raise ValueError("localized divisor monomials need k >= 4")
        ring = self.ring
        shift = mono(ring, {"a": 4, f"x{self.n}": 1})
        out = [shift * _embed(v, ring) for v in witness_divisors(self.n - 1, k - 1)]
        out.append(mono(ring, {"a": 6, "b": 4, f"x{self.n}": 2}) * _pairs(ring, range(1, t)))
        return out


def _embed(m: Monomial, ring: RingContext) -> Monomial:
    return mono(ring, dict(zip(m.ring.vars, m.exps)))


def _even_t(n, k):
    if k < 2 or k % 2 or k > 2 * n:
        raise ValueError(f"k={k} must be even with 2 <= k <= 2n = {2 * n}")
    return k // 2


def localized_family(n: int) -> LocalizedFamily:
    if n < 1:
        raise ValueError("the localized family needs n >= 1")
    fam = build_family(n)
    keep = [v for v in fam.ring.vars if v != f"y{n}"]
    return LocalizedFamily(n, localize(fam.ideal, keep), tuple(keep))


# ---------------------------------------------------------------- k > 2n+1


@dataclass(frozen=True)
class BarFamily:
    """I(n) without c, d and the two generators involving them."""

    n: int
    ideal: MonomialIdeal

    @property
    def ring(self) -> RingContext:
        return self.ideal.ring

    def witness(self, k: int) -> Monomial:
        if k < 2:
            raise ValueError("the bar witness needs k >= 2")
        e = {"a": 5, "b": 6 * k - 6}
        for i in range(1, self.n + 1):
            e[f"x{i}"] = 1
            e[f"y{i}"] = 1
        return mono(self.ring, e)


def bar_family(n: int) -> BarFamily:
    if n < 0:
        raise ValueError("n must be >= 0")
    names = ["a", "b"]
    for i in range(1, n + 1):
        names += [f"x{i}", f"y{i}"]
    ring = RingContext(tuple(names))
    gens = list(J_GENS[:4])
    for i in range(1, n + 1):
        gens += [f"a^4*x{i}*y{i}^2", f"b^4*x{i}^2*y{i}"]
    return BarFamily(n, ring.ideal(gens))


# ---------------------------------------------------------------- verification


def is_socle_witness(ideal: MonomialIdeal, u: Monomial) -> tuple[bool, bool]:
    """(u*z in I for every variable z, u not in I)."""
    ring = ideal.ring
    in_colon = all(ideal.contains_all([u * ring.var(z) for z in ring.vars]))
    return in_colon, u not in ideal


def _divisor_checks(power_ideal, u, divisors, targets):
    ring = power_ideal.ring
    in_power = bool(power_ideal.contains_all(divisors).all())
    divide = all(v.divides(u * ring.var(z)) for v, z in zip(divisors, targets))
    return in_power, divide and len(divisors) == len(targets)


@dataclass
class KRecord:
    k: int
    expected: int
    engine: str
    lower: int
    upper: int
    certified_lower: int
    certified_upper: int
    exact: int | None
    checks: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def depth(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self, timings=False):
        d = {
            "k": self.k,
            "expected": self.expected,
            "got": self.depth,
            "engine": self.engine,
            "lower": self.lower,
            "upper": self.upper,
            "certified_lower": self.certified_lower,
            "certified_upper": self.certified_upper,
            "exact": self.exact,
            "checks": [{"name": n, "passed": ok} for n, ok in self.checks.items()],
            "passed": self.passed,
        }
        if timings:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class VerificationReport:
    n: int
    k_max: int
    engine_policy: str
    records: list
    depth_sequence: list
    strict_local_maxima: int | None
    passed: bool

    def to_json(self, timings=False):
        return {
            "n": self.n,
            "k_max": self.k_max,
            "engine_policy": self.engine_policy,
            "field": "QQ",
            "depth_sequence": self.depth_sequence,
            "expected_sequence": [r.expected for r in self.records],
            "strict_local_maxima": self.strict_local_maxima,
            "passed": self.passed,
            "records": [r.to_json(timings) for r in self.records],
        }


def verify_power(fam: FamilyInstance, k: int, Ik: MonomialIdeal, engine: str = "auto",
                 cap: int = homology.DEFAULT_CAP) -> KRecord:
    n = fam.n
    ring = fam.ring
    start = time.perf_counter()
    expected = expected_depth(n, k)
    checks = {}

    checks["socle_matches_expected"] = socle_test(Ik) == (expected == 0)

    if k % 2 and k <= 2 * n + 1:
        u = witness_u(n, k)
        checks["witness_u_in_colon_m"], checks["witness_u_not_in_power"] = is_socle_witness(Ik, u)
        if k >= 3:
            checks["divisors_in_power"], checks["divisors_divide_targets"] = _divisor_checks(
                Ik, u, witness_divisors(n, k), divisor_targets(n))

    cd = ring.ideal(["c", "d"])
    S_k = colon_cd_generators(n, k)
    checks["colon_cd_identity"] = colon(Ik, cd) == Ik + ring.ideal(S_k)

    ass = None
    if expected == 1:
        loc = localized_family(n)
        Pk = loc.ideal ** k
        u1 = loc.witness(k)
        checks["localized_witness_in_colon"], checks["localized_witness_not_in_power"] = (
            is_socle_witness(Pk, u1))
        if k >= 4:
            checks["localized_divisors_in_power"], checks["localized_divisors_divide"] = (
                _divisor_checks(Pk, u1, loc.divisors(k), loc.targets()))
        ass = associated_primes(Ik)
        checks["prime_in_ass"] = loc.prime in ass

    if k > 2 * n + 1:
        bar = bar_family(n)
        Bk = bar.ideal ** k
        checks["regular_sequence_cd"] = regular_sequence_check(Ik, ["c", "d"])
        checks["bar_quotient_matches"] = restrict_to_zero(Ik, ["c", "d"]) == Bk
        w = bar.witness(k)
        checks["bar_witness_in_colon"], checks["bar_witness_not_in_power"] = is_socle_witness(Bk, w)

    if engine == "exact":
        d = homology.depth_exact(Ik, cap)
        lower = upper = cl = cu = d
        exact, used = d, "exact"
    else:
        br = depth_bracket(Ik, engine="auto" if engine == "auto" else "certificates", cap=cap,
                           with_ass=False, ass=ass)
        lower, upper, cl, cu, exact = br.lower, br.upper, br.certified_lower, br.certified_upper, br.exact
        used = "exact+certificates" if exact is not None else "certificates"
        checks["certificates_tight"] = cl == cu
    checks["depth_matches_expected"] = lower == upper == expected

    return KRecord(k, expected, used, lower, upper, cl, cu, exact, checks,
                   time.perf_counter() - start)


def verify_theorem(n: int, k_max: int, engine_policy: str = "auto",
                   cap: int = homology.DEFAULT_CAP, progress=None) -> VerificationReport:
    """Check the depth table and every witness for k = 1..k_max.

    ``engine_policy``: ``exact`` computes depth only from Betti numbers,
    ``certificates`` only from brackets, ``auto`` uses brackets and adds the
    exact engine whenever the lcm lattice fits under ``cap``.
    """
    if n < 0 or k_max < 1:
        raise ValueError("need n >= 0 and k_max >= 1")
    if engine_policy not in ("auto", "exact", "certificates"):
        raise ValueError(f"unknown engine policy {engine_policy!r}")
    fam = build_family(n)
    records = []
    for k, Ik in powers(fam.ideal, k_max):
        rec = verify_power(fam, k, Ik, engine_policy, cap)
        records.append(rec)
        if progress:
            progress(rec)
    seq = [r.depth for r in records]
    maxima = strict_local_maxima(seq) if None not in seq else None
    passed = all(r.passed for r in records)
    if k_max > 2 * n + 1:
        passed = passed and maxima == n
    return VerificationReport(n, k_max, engine_policy, records, seq, maxima, passed)
