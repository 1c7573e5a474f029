"""Scrollar invariants of ruling covers cut from nodal curves.

A curve of class ``(k, a)`` projects ``k : 1`` onto the line; after
normalising a nodal member the pushforward of its structure sheaf
splits, and the ``k - 1`` twist degrees of the splitting are the
scrollar invariants of the cover.  They are recovered here from a scan:
``scan_value(n)`` is the difference of two consecutive twisted section
counts of the ideal sheaf of the node configuration, it is
non-increasing in ``n``, and the ``i``-th invariant is the first ``n``
at which it drops below ``k - i``.

The scan is the runtime authority.  Closed forms (balanced/near
balanced pattern for general nodes, a deficit recursion for nodes on
sections, and a block pattern for multiplicity chains) are validated
against it in the test suite, never trusted over it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import comb

from .errors import InconsistentModelError
from .interpolation import (
    ConditionsReport,
    NodeConfiguration,
    NodeKind,
    conditions_general_points,
    conditions_on_sections_mincut,
    oracle_conditions,
    section_capacities,
)
from .modp import PrimeField, derive_seed
from .surface import DivisorClass, Surface, arithmetic_genus, h0_line_bundle


class ClosedFormHypothesisWarning(UserWarning):
    """A closed form was evaluated outside its stated hypotheses."""


# Classes excluded from the general-nodes closed form's hypotheses,
# as (m, k, a) triples.
GENERIC_EXCLUDED_CLASSES = frozenset({(2, 4, 0), (1, 6, 0), (1, 4, 2), (0, 4, 4)})


@dataclass(frozen=True)
class ScrollarVector:
    """Non-decreasing positive twist degrees, one per sheet above the first."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if not self.entries:
            raise ValueError("a scrollar vector has at least one entry")
        if any(x < 1 for x in self.entries):
            raise ValueError(f"scrollar invariants must be positive, got {self.entries}")
        if any(self.entries[i] > self.entries[i + 1] for i in range(len(self.entries) - 1)):
            raise ValueError(f"scrollar invariants must be non-decreasing, got {self.entries}")

    def degree(self) -> int:
        return sum(self.entries)

    def gap(self) -> int:
        return self.entries[-1] - self.entries[0]

    def is_balanced(self) -> bool:
        return self.gap() <= 1


@dataclass(frozen=True)
class SplittingVector:
    """Non-decreasing twist degrees of a pushforward splitting."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if any(self.entries[i] > self.entries[i + 1] for i in range(len(self.entries) - 1)):
            raise ValueError(f"splitting degrees must be non-decreasing, got {self.entries}")

    def degree(self) -> int:
        return sum(self.entries)


@dataclass(frozen=True)
class CoverProblem:
    """A curve class with ``k >= 2`` plus the prescribed nodes."""

    surface: Surface
    divisor: DivisorClass
    config: NodeConfiguration

    def __post_init__(self) -> None:
        if self.divisor.k < 2:
            raise ValueError("a ruling cover needs a class with k >= 2")
        if genus_of_raw(self.divisor, self.surface, self.config) < 0:
            raise ValueError("more nodes than the arithmetic genus allows")

    def to_json(self) -> dict:
        return {
            "m": self.surface.m,
            "k": self.divisor.k,
            "a": self.divisor.a,
            "config": self.config.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CoverProblem":
        return cls(
            Surface(int(obj["m"])),
            DivisorClass(int(obj["k"]), int(obj["a"])),
            NodeConfiguration.from_json(obj["config"]),
        )


def genus_of_raw(divisor: DivisorClass, surface: Surface, config: NodeConfiguration) -> int:
    return arithmetic_genus(divisor, surface) - config.total()


def genus_of(problem: CoverProblem) -> int:
    """Geometric genus of the normalised curve."""
    g = genus_of_raw(problem.divisor, problem.surface, problem.config)
    if g < 0:
        raise ValueError("more nodes than the arithmetic genus allows")
    return g


def check_scrollar_sum(vector: ScrollarVector, genus: int, k: int) -> None:
    """The invariants always sum to genus + k - 1 (pushforward degree)."""
    expected = genus + k - 1
    if len(vector.entries) != k - 1 or vector.degree() != expected:
        raise InconsistentModelError(
            f"scrollar vector {vector.entries} fails the degree check (want {k - 1} entries summing to {expected})"
        )


def _ideal_report(problem: CoverProblem, divisor: DivisorClass) -> ConditionsReport:
    if problem.config.kind is NodeKind.GENERAL_POINTS:
        return conditions_general_points(divisor, problem.surface, problem.config.delta)
    return conditions_on_sections_mincut(divisor, problem.surface, problem.config.multiplicities)


def _ideal_dim(problem: CoverProblem, twist_degree: int) -> int:
    return _ideal_report(problem, DivisorClass(problem.divisor.k - 2, twist_degree)).h0_ideal


def scan_value(problem: CoverProblem, n: int) -> int:
    """Number of splitting summands still alive at pencil twist ``n``.

    Difference of the ideal-sheaf section counts at two consecutive
    twists; non-increasing in ``n`` and zero once ``n`` passes every
    invariant.
    """
    if n < 0:
        raise ValueError("twist level must be non-negative")
    k, a, m = problem.divisor.k, problem.divisor.a, problem.surface.m
    base = a + m - 2 - n
    return _ideal_dim(problem, base + 1) - _ideal_dim(problem, base)


def scan_bound(problem: CoverProblem) -> int:
    """Twist level past every invariant; exceeding it signals a bug."""
    k, a, m = problem.divisor.k, problem.divisor.a, problem.surface.m
    return (k - 1) * m + a + 1


def scrollar_scan(problem: CoverProblem) -> ScrollarVector:
    """Scrollar invariants read off the twisted section-count table.

    Scans ``n = 0, 1, ...`` up to the hard bound, asserting the table
    is non-increasing and ends at zero, and that the resulting vector
    passes the degree check.
    """
    k = problem.divisor.k
    bound = scan_bound(problem)
    if bound < 1:
        raise ValueError("curve class carries no positive twists; no cover to scan")
    table = [scan_value(problem, n) for n in range(bound + 1)]
    for n in range(bound):
        if table[n] < table[n + 1]:
            raise InconsistentModelError(f"section-count table is not monotone at twist {n}")
    if table[bound] != 0:
        raise InconsistentModelError("section-count table did not reach zero below the scan bound")
    entries = []
    for i in range(1, k):
        found = next((n for n in range(bound + 1) if table[n] < k - i), None)
        if found is None:
            raise InconsistentModelError(f"invariant {i} not found below the scan bound")
        entries.append(found)
    if entries and entries[0] == 0:
        raise ValueError("node configuration cannot lie on an irreducible curve of this class")
    vector = ScrollarVector(entries)
    check_scrollar_sum(vector, genus_of(problem), k)
    return vector


def scrollar_scan_oracle(
    problem: CoverProblem, field: PrimeField, base_seed: int, trials: int = 3
) -> ScrollarVector:
    """Same scan, with every section count measured by the rank oracle."""
    k, a, m = problem.divisor.k, problem.divisor.a, problem.surface.m
    bound = scan_bound(problem)
    if bound < 1:
        raise ValueError("curve class carries no positive twists; no cover to scan")
    ideals = {}
    for idx, c in enumerate(range(a + m - 2 - bound, a + m)):
        report = oracle_conditions(
            DivisorClass(k - 2, c), problem.surface, problem.config, field, derive_seed(base_seed, idx), trials
        )
        ideals[c] = report.h0_ideal
    table = [ideals[a + m - 1 - n] - ideals[a + m - 2 - n] for n in range(bound + 1)]
    entries = []
    for i in range(1, k):
        found = next((n for n in range(bound + 1) if table[n] < k - i), None)
        if found is None:
            raise InconsistentModelError(f"invariant {i} not found below the scan bound")
        entries.append(found)
    vector = ScrollarVector(entries)
    check_scrollar_sum(vector, genus_of(problem), k)
    return vector


# ---------------------------------------------------------------------------
# closed form for general nodes


def generic_hypothesis_warnings(surface: Surface, divisor: DivisorClass, delta: int) -> list[str]:
    """Violations of the general-nodes closed form's hypotheses."""
    notes = []
    triple = (surface.m, divisor.k, divisor.a)
    if triple in GENERIC_EXCLUDED_CLASSES:
        notes.append(f"class (m, k, a) = {triple} is outside the closed form's hypotheses")
    dim = h0_line_bundle(divisor, surface) - 1
    if 3 * delta > dim:
        notes.append(f"3 * {delta} node conditions exceed the system dimension {dim}")
    return notes


def scrollar_generic_closed_form(surface: Surface, divisor: DivisorClass, delta: int) -> ScrollarVector:
    """Closed form for a curve with ``delta`` general nodes.

    Past the threshold ``C(k-1, 2) * m`` the vector is the balanced
    partition of ``g + k - 1``; below it the smooth pattern ``i*m + a``
    survives at the bottom and the top block spreads the node count as
    evenly as the last ``ell`` slots allow.  Hypothesis violations warn
    but do not refuse.
    """
    k, a, m = divisor.k, divisor.a, surface.m
    if k < 2:
        raise ValueError("a ruling cover needs a class with k >= 2")
    if delta < 0:
        raise ValueError("node count must be non-negative")
    pa = arithmetic_genus(divisor, surface)
    if delta > pa:
        raise ValueError("more nodes than the arithmetic genus allows")
    for note in generic_hypothesis_warnings(surface, divisor, delta):
        warnings.warn(note, ClosedFormHypothesisWarning, stacklevel=2)

    g = pa - delta
    total = g + k - 1
    if delta >= comb(k - 1, 2) * m:
        q, r = divmod(total, k - 1)
        entries = [q] * (k - 1 - r) + [q + 1] * r
    else:
        ell = 1
        while comb(ell + 1, 2) * m <= delta:
            ell += 1
        d = delta - comb(ell, 2) * m
        j = d % ell
        top = (k - ell) * m + a
        entries = [i * m + a for i in range(1, k - ell)]
        entries += [top - (-(-d // ell))] * j  # ceil
        entries += [top - d // ell] * (ell - j)
    vector = ScrollarVector(entries)
    check_scrollar_sum(vector, g, k)
    return vector


def expected_balanced(surface: Surface, divisor: DivisorClass, delta: int) -> bool:
    """Whether the general-nodes pattern is balanced.

    True past the threshold ``C(k-1,2)*m``; below it exactly when the
    top block sits one slot under the smooth pattern and the rounded
    spread eats all but one of the gap (possible only with ``ell = k-2``).
    """
    k, m = divisor.k, surface.m
    if m == 0 or k <= 2 or delta >= comb(k - 1, 2) * m:
        return True
    ell = 1
    while comb(ell + 1, 2) * m <= delta:
        ell += 1
    d = delta - comb(ell, 2) * m
    return (k - ell - 1) * m - d // ell <= 1


# ---------------------------------------------------------------------------
# closed form for nodes on sections


@dataclass(frozen=True)
class DeficitLevel:
    """One step of the sections closed form."""

    twist: int            # first twist at which a new deficit appears
    generic_count: int    # invariants settled at smooth values up to that twist
    deficit: int          # invariants pinned at that twist
    sections_dropped: int # sections saturated and removed before recursing


@dataclass(frozen=True)
class SectionsClosedForm:
    vector: ScrollarVector
    levels: tuple[DeficitLevel, ...]


def _first_deficit(k: int, a: int, m: int, surface: Surface, s: tuple[int, ...]) -> tuple[int, int, int]:
    """First twist with a staircase deficit, its size, and the drop count.

    Returns (twist, deficit, sections saturated).  The drop count is
    the longest prefix achieving the worst balance; removing exactly
    those sections reproduces the twisted counts at every later level.
    """
    u = len(s)
    top = (k - 1) * m + a - 1
    for n in range(0, max(top, 0) + 1):
        caps = section_capacities(DivisorClass(k - 2, a + m - 2 - n), surface, u)
        running = 0
        worst = 0
        argworst = 0
        for j in range(u):
            running += caps[j] - s[j]
            if running <= worst:
                worst = running
                argworst = j + 1
        if worst < 0:
            return n, -worst, argworst
    raise InconsistentModelError("no deficit found below the capacity bound")


def _sections_entries(
    k: int, a: int, m: int, surface: Surface, s: tuple[int, ...]
) -> tuple[list[int], list[DeficitLevel]]:
    if k < 2:
        if s:
            raise ValueError("leftover section nodes on a class that carries no cover")
        return [], []
    if not s:
        return [i * m + a for i in range(1, k)], []

    n1, deficit, drop = _first_deficit(k, a, m, surface, s)
    if n1 == 0:
        raise ValueError("node configuration cannot lie on an irreducible curve of this class")
    generic_count = sum(1 for i in range(1, k) if i * m + a <= n1)
    head = [i * m + a for i in range(1, generic_count + 1)] + [n1] * deficit
    if len(head) > k - 1:
        raise InconsistentModelError("deficit block overflows the invariant count")

    sub_entries, sub_levels = _sections_entries(k - drop, a, m, surface, s[drop:])
    need = (k - 1) - len(head)
    pool = [0] * max(0, need - len(sub_entries)) + sub_entries
    tail = [max(v, n1 + 1) for v in pool[len(pool) - need :]] if need else []
    level = DeficitLevel(n1, generic_count, deficit, drop)
    return head + tail, [level] + sub_levels


def sections_closed_form_trace(problem: CoverProblem) -> SectionsClosedForm:
    """Sections closed form together with its per-level parameters."""
    if problem.config.kind is not NodeKind.ON_SECTIONS:
        raise ValueError("sections closed form needs an on-sections configuration")
    k, a, m = problem.divisor.k, problem.divisor.a, problem.surface.m
    entries, levels = _sections_entries(k, a, m, problem.surface, problem.config.multiplicities)
    vector = ScrollarVector(entries)
    check_scrollar_sum(vector, genus_of(problem), k)
    return SectionsClosedForm(vector, tuple(levels))


def scrollar_sections_closed_form(problem: CoverProblem) -> ScrollarVector:
    """Closed form for nodes on general sections.

    Smooth values survive up to the first deficit twist, the deficit
    pins that many invariants there, and the rest are the top
    invariants of the cover left after dropping the saturated sections,
    clamped above the deficit twist.
    """
    return sections_closed_form_trace(problem).vector


# ---------------------------------------------------------------------------
# closed form for multiplicity chains


def _chain_entries(k: int, a: int, m: int, s: tuple[int, ...]) -> list[int]:
    if not s:
        return [i * m + a for i in range(1, k)]
    s1 = s[0]
    j1 = s1 // m
    i1 = 1
    while i1 < len(s) and s[i1] == s1 - i1 * m:
        i1 += 1
    if j1 + i1 > k - 1:
        raise ValueError("multiplicity chain too steep for the block pattern")
    pinned = (k - 1) * m + a - s1
    settled = sum(1 for i in range(1, k) if i * m + a <= pinned)
    if s[i1:]:
        # The kept tail must start inside the reduced cover's smooth
        # prefix, otherwise the blocks would interleave wrongly.
        sub_pinned = (k - i1 - 1) * m + a - s[i1]
        sub_settled = sum(1 for i in range(1, k - i1) if i * m + a <= sub_pinned)
        if max(j1, settled) > sub_settled:
            raise ValueError("multiplicity chain breaks the smooth prefix of the reduced cover")
    sub = _chain_entries(k - i1, a, m, s[i1:])
    keep = (k - 1) - j1 - i1
    tail = sub[len(sub) - keep :] if keep else []
    return sorted([i * m + a for i in range(1, j1 + 1)] + [pinned] * i1 + tail)


def scrollar_chain_closed_form(problem: CoverProblem) -> ScrollarVector:
    """Block pattern for multiplicities that drop by at least ``m`` a step.

    Requires ``m >= 1``, at most ``k - 1`` sections, the chain
    ``s_i <= max(0, s_{i-1} - m)`` and ``s_1 <= (k-1)*m + a + 1``; the
    first ``floor(s_1 / m)`` invariants keep their smooth values, the
    run of multiplicities locked in arithmetic progression pins that
    many invariants at ``(k-1)*m + a - s_1``, and the rest come from the
    cover with the progression's sections removed.
    """
    if problem.config.kind is not NodeKind.ON_SECTIONS:
        raise ValueError("chain closed form needs an on-sections configuration")
    m = problem.surface.m
    if m < 1:
        raise ValueError("chain closed form needs a surface index of at least 1")
    k, a = problem.divisor.k, problem.divisor.a
    s = problem.config.multiplicities
    if len(s) > k - 1:
        raise ValueError("chain closed form allows at most k - 1 sections")
    for i in range(1, len(s)):
        if s[i] > max(0, s[i - 1] - m):
            raise ValueError("multiplicities must drop by at least the surface index")
    if s and s[0] > (k - 1) * m + a + 1:
        raise ValueError("leading multiplicity exceeds the section capacity")
    vector = ScrollarVector(_chain_entries(k, a, m, s))
    check_scrollar_sum(vector, genus_of(problem), k)
    return vector


# ---------------------------------------------------------------------------
# splitting of the pushed-forward negative-section bundle


def splitting_regime_bound(surface: Surface, divisor: DivisorClass) -> int:
    """Largest node count for which the splitting recovery is valid.

    The recovery needs the nodes to impose unsaturated conditions on the
    twice-reduced class at every twist with ambient first cohomology,
    and the binding twist is the last such one.  For ``m >= 2`` this is
    ``C(k-1,2)*m + (a+1)*(k-2)``; for ``m = 1`` it is one section-count
    notch tighter (the bound above would admit boundary instances where
    the bundle acquires a second section).
    """
    k, a, m = divisor.k, divisor.a, surface.m
    binding_twist = max(m - 2, 0)
    return h0_line_bundle(DivisorClass(k - 3, 2 * m + a - 2 - binding_twist), surface)


def directrix_splitting(problem: CoverProblem) -> SplittingVector:
    """Splitting of the pushforward of the negative-section line bundle.

    Valid for general nodes on a surface of index ``m >= 1`` with the
    node count inside the regime bound.  The twisted section counts of
    the once-reduced class, corrected by the ambient first cohomology,
    give the profile ``H(n) = sum_j max(-d_j - 1 - n, 0)``; its second
    differences pin every summand of degree at most -2.  In the regime
    the bundle has a one-dimensional space of sections, which forces
    exactly one trivial summand, and the remaining summands sit at -1.
    The total-degree rule is asserted before returning.
    """
    if problem.config.kind is not NodeKind.GENERAL_POINTS:
        raise ValueError("splitting computation needs a general-points configuration")
    k, a, m = problem.divisor.k, problem.divisor.a, problem.surface.m
    if m < 1:
        raise ValueError(
            "splitting computation needs a surface index of at least 1; "
            "index 0 has no distinguished negative section"
        )
    delta = problem.config.total()
    if delta > splitting_regime_bound(problem.surface, problem.divisor):
        raise ValueError("node count outside the splitting regime")
    dim = h0_line_bundle(problem.divisor, problem.surface) - 1
    if 3 * delta > dim:
        raise ValueError("node count outside the splitting regime")

    g = genus_of(problem)
    top = max(m - 1, scan_bound(problem)) + 1
    profile = []
    for n in range(top + 2):
        report = _ideal_report(problem, DivisorClass(k - 3, 2 * m + a - 2 - n))
        profile.append(report.h0_ideal + max(m - 1 - n, 0))
    if profile[-1] != 0 or profile[-2] != 0:
        raise InconsistentModelError("splitting profile did not vanish below the scan bound")
    counts = [profile[n] - profile[n + 1] for n in range(len(profile) - 1)]
    if any(c < 0 for c in counts):
        raise InconsistentModelError("splitting profile is not monotone")
    if any(counts[i] < counts[i + 1] for i in range(len(counts) - 1)):
        raise InconsistentModelError("splitting profile is not convex")
    if counts[0] > k - 1:
        raise InconsistentModelError("splitting profile claims too many negative summands")
    entries = [0] + [-1] * (k - 1 - counts[0])
    for n in range(len(counts) - 1):
        entries += [-(n + 2)] * (counts[n] - counts[n + 1])
    entries.sort()
    if len(entries) != k or sum(entries) != a - g - k + 1:
        raise InconsistentModelError("splitting profile fails the total-degree rule")
    return SplittingVector(entries)


def trivial_pushforward_splitting(e: ScrollarVector) -> SplittingVector:
    """Splitting of the pushforward of the structure sheaf."""
    return SplittingVector(sorted([-x for x in e.entries] + [0]))
