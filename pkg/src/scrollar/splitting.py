"""Splitting-type combinatorics and existence-bound predicates.

Cohomology of split bundles on the line reduces to little sums over
the twist degrees; they are computed by direct double loops so the code
stays visibly equal to the sums.  The existence predicates are pure
inequality checks: they certify a configuration, they never rule one
out (report vocabulary is guaranteed / unknown).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .invariants import (
    CoverProblem,
    ScrollarVector,
    SplittingVector,
    directrix_splitting,
    genus_of,
    scrollar_scan,
    trivial_pushforward_splitting,
)


def end_h1(e) -> int:
    """First cohomology of the endomorphisms of a split bundle.

    Zero exactly when the degrees are balanced; each ordered pair with
    a gap of two or more contributes the excess.
    """
    degrees = tuple(e.entries) if isinstance(e, (ScrollarVector, SplittingVector)) else tuple(e)
    return sum(max(x - y - 1, 0) for x in degrees for y in degrees)


def hom_h1(e, f, m: int) -> int:
    """First cohomology of Hom between two split bundles, twisted by O + O(m)."""
    src = tuple(e.entries) if isinstance(e, (ScrollarVector, SplittingVector)) else tuple(e)
    dst = tuple(f.entries) if isinstance(f, (ScrollarVector, SplittingVector)) else tuple(f)
    if len(src) != len(dst):
        raise ValueError("splitting vectors must have equal length")
    total = 0
    for x in src:
        for y in dst:
            total += max(x - y - 1, 0) + max(x - y - m - 1, 0)
    return total


@dataclass(frozen=True)
class SplittingPair:
    """Candidate splittings of a line bundle and of its section twist."""

    e: tuple[int, ...]
    f: tuple[int, ...]
    m: int
    a: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "e", tuple(int(x) for x in self.e))
        object.__setattr__(self, "f", tuple(int(x) for x in self.f))
        for name, v in (("e", self.e), ("f", self.f)):
            if any(v[i] > v[i + 1] for i in range(len(v) - 1)):
                raise ValueError(f"splitting vector {name} must be sorted non-decreasing")
        if len(self.e) != len(self.f):
            raise ValueError("splitting vectors must have equal length")


@dataclass(frozen=True)
class FeasibilityReport:
    dominates: bool       # f_i >= e_i for every i
    shifted: bool         # f_i >= e_{i+1} - m for every i < k
    degree_matches: bool  # sum(f - e) == a

    @property
    def feasible(self) -> bool:
        return self.dominates and self.shifted and self.degree_matches


def splitting_pair_feasible(pair: SplittingPair) -> FeasibilityReport:
    """The three necessary conditions for the pair to occur on one bundle."""
    e, f, m = pair.e, pair.f, pair.m
    k = len(e)
    dominates = all(f[i] >= e[i] for i in range(k))
    shifted = all(f[i] >= e[i + 1] - m for i in range(k - 1))
    degree_matches = sum(f) - sum(e) == pair.a
    return FeasibilityReport(dominates, shifted, degree_matches)


def splitting_locus_dimension(pair: SplittingPair, g: int) -> int:
    """Dimension of the locus of line bundles realising the pair."""
    report = splitting_pair_feasible(pair)
    if not report.feasible:
        raise ValueError("splitting pair fails the feasibility conditions")
    return g - end_h1(pair.e) - end_h1(pair.f) + hom_h1(pair.e, pair.f, pair.m)


def pushforward_h1_identity(problem: CoverProblem) -> bool:
    """Endomorphism cohomology identity for the structure sheaf.

    Compares the balancedness defects of the two canonical pushforwards
    with the genus plus their twisted Hom cohomology; equality is the
    computed analogue of the dimension formula at the trivial bundle.
    """
    e = scrollar_scan(problem)
    ehat = trivial_pushforward_splitting(e)
    d = directrix_splitting(problem)
    g = genus_of(problem)
    return end_h1(ehat) + end_h1(d) == g + hom_h1(ehat, d, problem.surface.m)


@dataclass(frozen=True)
class PolytopeReport:
    member: bool
    violated: tuple[str, ...]


def polytope_membership(e, g: int) -> PolytopeReport:
    """Exact-rational membership test for the normalised invariants.

    Normalises by the degree ``g + k - 1`` and checks non-negativity,
    monotonicity and superadditivity, listing every violated constraint.
    """
    entries = tuple(e.entries) if isinstance(e, ScrollarVector) else tuple(int(x) for x in e)
    n = g + len(entries)
    if sum(entries) != n:
        raise ValueError(f"entries sum to {sum(entries)}, expected {n}")
    x = [Fraction(v, n) for v in entries]
    violated: list[str] = []
    if x[0] < 0:
        violated.append("0 <= x_1")
    for i in range(len(x) - 1):
        if x[i] > x[i + 1]:
            violated.append(f"x_{i + 1} <= x_{i + 2}")
    for i in range(1, len(x) + 1):
        for j in range(i, len(x) + 1 - i):
            if x[i + j - 1] > x[i - 1] + x[j - 1]:
                violated.append(f"x_{i + j} <= x_{i} + x_{j}")
    return PolytopeReport(not violated, tuple(violated))


# ---------------------------------------------------------------------------
# existence-bound predicates (sufficient only)


def existence_guaranteed_sections(k: int, u: int, s1: int, a: int) -> bool:
    """Nodal curves with the prescribed section nodes exist above this bound."""
    if k < 3:
        raise ValueError("existence bound needs k >= 3")
    if u < 0 or s1 < 0:
        raise ValueError("section data must be non-negative")
    return a > 2 * (ceil(2 * u / k) + 1) * s1


def existence_guaranteed_gap(g: int, d: int, k: int) -> bool:
    """Every vector of gap ``d`` and degree ``g + k - 1`` is realised above this genus."""
    if k < 2:
        raise ValueError("existence bound needs k >= 2")
    if d < 0:
        raise ValueError("gap must be non-negative")
    return g > 6 * d * (k - 1)


def no_fixed_component_bound(ell: int, k: int, u: int, s1: int, su: int, a: int) -> bool:
    """The prescribed nodes leave the system without a fixed component."""
    if ell < 1:
        raise ValueError("fold parameter must be at least 1")
    if ell > k:
        raise ValueError("fold parameter exceeds the cover degree")
    if u < 0:
        raise ValueError("section count must be non-negative")
    if u == 0:
        return a >= su
    return a >= ceil(u / ell) * s1 + su


def splitting_report(problem: CoverProblem) -> dict:
    """Instance-level summary in the documented report shape."""
    e = scrollar_scan(problem)
    g = genus_of(problem)
    ehat = trivial_pushforward_splitting(e)
    cfg = problem.config
    payload: dict = {
        "input": problem.to_json(),
        "genus": g,
        "scrollar": list(e.entries),
        "feasible": None,
        "dimension": None,
        "dimension_status": None,
        "polytope": None,
        "existence": {},
    }
    poly = polytope_membership(e, g)
    payload["polytope"] = {"member": poly.member, "violated": list(poly.violated)}
    try:
        d = directrix_splitting(problem)
    except ValueError:
        d = None
    if d is not None:
        pair = SplittingPair(ehat.entries, d.entries, problem.surface.m, problem.divisor.a)
        report = splitting_pair_feasible(pair)
        payload["feasible"] = {
            "i": report.dominates,
            "ii": report.shifted,
            "iii": report.degree_matches,
        }
        if report.feasible:
            payload["dimension"] = splitting_locus_dimension(pair, g)
            payload["dimension_status"] = "exact" if cfg.total() == 0 else "conjectural"
    k, a = problem.divisor.k, problem.divisor.a
    gap = e.gap()
    payload["existence"]["gap_realizable"] = (
        "guaranteed" if existence_guaranteed_gap(g, gap, k) else "unknown"
    )
    if cfg.multiplicities:
        u = len(cfg.multiplicities)
        s1, su = cfg.multiplicities[0], cfg.multiplicities[-1]
        ok = k >= 3 and existence_guaranteed_sections(k, u, s1, a)
        payload["existence"]["prescribed_nodes"] = "guaranteed" if ok else "unknown"
        payload["existence"]["no_fixed_component"] = (
            "guaranteed" if no_fixed_component_bound(1, k, u, s1, su, a) else "unknown"
        )
    else:
        payload["existence"]["prescribed_nodes"] = None
        payload["existence"]["no_fixed_component"] = None
    return payload
