"""How many conditions a node configuration imposes on a curve system.

A configuration is either a set of general points or sets of general
points distributed over general sections of the ruling.  For general
points the count saturates at the dimension of the system.  For points
on sections the evaluation matrix can be column-reduced to a staircase
whose row block ``t`` (the points of section ``t``) only reaches the
first ``t`` column groups; its generic rank is the minimum vertex cut
of that occupancy pattern.  Two closed forms compute that rank (the
minimum over cuts, and the equivalent deficit recursion along the
staircase), and a randomized oracle measures the rank of the actual
matrix over a large prime field as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ResourceCapError
from .modp import PrimeField, PrimeFieldMatrix, SeededRng, derive_seed, rank, sample_distinct
from .surface import DivisorClass, Surface, h0_line_bundle

# Guard for oracle matrices; desk-scale instances sit far below this.
MATRIX_ENTRY_CAP = 4_000_000


class NodeKind(Enum):
    GENERAL_POINTS = "general_points"
    ON_SECTIONS = "on_sections"


class Method(Enum):
    CLOSED_FORM_GENERAL = "closed_form_general"
    MIN_CUT = "min_cut"
    SIGMA_RECURSION = "sigma_recursion"
    ORACLE = "oracle"


def _validate_multiplicities(multiplicities) -> tuple[int, ...]:
    s = tuple(int(x) for x in multiplicities)
    if any(x <= 0 for x in s):
        raise ValueError("multiplicities must be positive")
    if any(s[i] < s[i + 1] for i in range(len(s) - 1)):
        raise ValueError("multiplicities must be non-increasing")
    return s


@dataclass(frozen=True)
class NodeConfiguration:
    """Prescribed singular locus: ``delta`` general points, or ``s_i``
    general points on each of ``u`` general sections (``s`` non-increasing)."""

    kind: NodeKind
    delta: int = 0
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is NodeKind.GENERAL_POINTS:
            if self.delta < 0:
                raise ValueError("node count must be non-negative")
            if self.multiplicities:
                raise ValueError("general-point configurations carry no multiplicities")
        else:
            object.__setattr__(self, "multiplicities", _validate_multiplicities(self.multiplicities))
            if self.delta:
                raise ValueError("section configurations carry no separate node count")

    @classmethod
    def general_points(cls, delta: int) -> "NodeConfiguration":
        return cls(NodeKind.GENERAL_POINTS, delta=int(delta))

    @classmethod
    def on_sections(cls, multiplicities) -> "NodeConfiguration":
        return cls(NodeKind.ON_SECTIONS, multiplicities=tuple(multiplicities))

    def total(self) -> int:
        if self.kind is NodeKind.GENERAL_POINTS:
            return self.delta
        return sum(self.multiplicities)

    def to_json(self) -> dict:
        if self.kind is NodeKind.GENERAL_POINTS:
            return {"kind": self.kind.value, "delta": self.delta}
        return {"kind": self.kind.value, "multiplicities": list(self.multiplicities)}

    @classmethod
    def from_json(cls, obj: dict) -> "NodeConfiguration":
        kind = obj.get("kind")
        if kind == NodeKind.GENERAL_POINTS.value:
            return cls.general_points(obj.get("delta", 0))
        if kind == NodeKind.ON_SECTIONS.value:
            return cls.on_sections(obj.get("multiplicities", ()))
        raise ValueError(f"unknown configuration kind {kind!r}")


@dataclass(frozen=True)
class ConditionsReport:
    h0_ambient: int
    conditions_imposed: int
    h0_ideal: int
    method: Method

    def __post_init__(self) -> None:
        if self.conditions_imposed < 0 or self.h0_ideal < 0:
            raise ValueError("negative entry in conditions report")
        if self.h0_ideal != self.h0_ambient - self.conditions_imposed:
            raise ValueError("conditions report does not balance")


def section_capacities(divisor: DivisorClass, surface: Surface, u: int) -> tuple[int, ...]:
    """Column budget newly available to each section's row block.

    The staircase gives block ``t`` access to column group ``t-1``,
    which holds the forms of degree ``(k-t+1)*m + a``.  Groups past the
    last coefficient polynomial do not exist, so their budget is zero
    (for ``m = 0`` the naive degree formula would never die).
    """
    if u < 1:
        raise ValueError("need at least one section")
    k, a, m = divisor.k, divisor.a, surface.m
    caps = []
    for t in range(1, u + 1):
        if t - 1 > k:
            caps.append(0)
        else:
            caps.append(max((k - t + 1) * m + a + 1, 0))
    return tuple(caps)


def conditions_general_points(divisor: DivisorClass, surface: Surface, delta: int) -> ConditionsReport:
    """General points impose independent conditions until the system is used up."""
    if delta < 0:
        raise ValueError("node count must be non-negative")
    h0 = h0_line_bundle(divisor, surface)
    cond = min(delta, h0)
    return ConditionsReport(h0, cond, h0 - cond, Method.CLOSED_FORM_GENERAL)


def conditions_on_sections_mincut(divisor: DivisorClass, surface: Surface, multiplicities) -> ConditionsReport:
    """Conditions imposed by points on general sections, as a minimum cut.

    Rank of the staircase equals the cheapest way to cover its support:
    pay for the first ``t`` column groups and for every row block past
    ``t``, minimised over the threshold ``t``.
    """
    s = _validate_multiplicities(multiplicities)
    h0 = h0_line_bundle(divisor, surface)
    caps = section_capacities(divisor, surface, len(s)) if s else ()
    total = sum(s)
    best = total  # threshold 0 keeps every row
    covered = 0
    remaining = total
    for cap_t, s_t in zip(caps, s):
        covered += cap_t
        remaining -= s_t
        best = min(best, covered + remaining)
    return ConditionsReport(h0, best, h0 - best, Method.MIN_CUT)


def conditions_on_sections_sigma(divisor: DivisorClass, surface: Surface, multiplicities) -> ConditionsReport:
    """Same count through the deficit recursion along the staircase.

    Walk the sections accumulating budget minus demand; each time the
    running balance dips below zero a block closes, its deficit is
    booked, and the walk restarts with the dropped sections removed.
    Re-indexing after a drop leaves the budgets unchanged, so the walk
    may keep the global capacity sequence.  Full saturation surfaces as
    a zero-dimensional ideal, not as a separate case.
    """
    s = _validate_multiplicities(multiplicities)
    h0 = h0_line_bundle(divisor, surface)
    caps = section_capacities(divisor, surface, len(s)) if s else ()
    deficit = 0
    start = 0
    while start < len(s):
        running = 0
        closed_at = None
        for j in range(start, len(s)):
            running += caps[j] - s[j]
            if running < 0:
                closed_at = j
                break
        if closed_at is None:
            break
        deficit += -running
        start = closed_at + 1
    cond = sum(s) - deficit
    return ConditionsReport(h0, cond, h0 - cond, Method.SIGMA_RECURSION)


def star_condition(divisor: DivisorClass, surface: Surface, multiplicities) -> bool:
    """Sufficient prefix test for independence of all conditions.

    Uses the conservative per-section budget ``(k-j)*m + a + 1`` (one
    group later than the staircase actually grants), so it implies a
    deficit-free staircase but is not tight.  Budgets past the last
    column group are zero, as in :func:`section_capacities`; without
    that clamp the test would over-promise for ``m = 0``.
    """
    s = _validate_multiplicities(multiplicities)
    k, a, m = divisor.k, divisor.a, surface.m
    lhs = 0
    rhs = 0
    for j, s_j in enumerate(s, start=1):
        lhs += s_j
        if j <= k:
            rhs += max((k - j) * m + a + 1, 0)
        if lhs > rhs:
            return False
    return True


def _monomial_basis(divisor: DivisorClass, surface: Surface) -> list[tuple[int, int]]:
    """Pairs (j, l): coefficient polynomial index and monomial exponent."""
    k, a, m = divisor.k, divisor.a, surface.m
    if k < 0:
        return []
    return [(j, l) for j in range(k + 1) if j * m + a >= 0 for l in range(j * m + a + 1)]


def _check_matrix_cap(rows: int, cols: int) -> None:
    if rows * cols > MATRIX_ENTRY_CAP:
        raise ResourceCapError(f"evaluation matrix {rows}x{cols} exceeds the {MATRIX_ENTRY_CAP}-entry cap")


def build_evaluation_matrix(
    divisor: DivisorClass,
    surface: Surface,
    multiplicities,
    field: PrimeField,
    rng: SeededRng,
) -> PrimeFieldMatrix:
    """Evaluation matrix of the system at random points on random sections.

    One row per point; one column per basis monomial.  Section ``i`` is
    cut out by a random degree-``m`` polynomial ``h_i``; a point of it
    at parameter ``tau`` evaluates the monomial ``(j, l)`` to
    ``tau**(j*m+a-l) * h_i(tau)**(k-j)``.  Leading coefficients of the
    ``h_i`` are drawn pairwise distinct so the sections stay distinct,
    and all ``tau`` values are globally distinct.  Points never sit over
    the infinite parameter, so dehomogenising there loses nothing.
    """
    s = _validate_multiplicities(multiplicities)
    k, a, m = divisor.k, divisor.a, surface.m
    p = field.p
    basis = _monomial_basis(divisor, surface)
    total = sum(s)
    if total >= p:
        raise ValueError("more points than field elements")
    _check_matrix_cap(total, len(basis))

    taus = sample_distinct(rng, total, field)
    leading = sample_distinct(rng, len(s), field)
    coeffs = [[rng.randrange(p) for _ in range(m)] + [leading[i]] for i in range(len(s))]

    data = np.zeros((total, len(basis)), dtype=np.int64)
    row = 0
    for i, s_i in enumerate(s):
        for _ in range(s_i):
            tau = taus[row]
            h_val = 0
            for c in reversed(coeffs[i]):
                h_val = (h_val * tau + c) % p
            for col, (j, l) in enumerate(basis):
                val = pow(tau, j * m + a - l, p) * pow(h_val, k - j, p) % p
                data[row, col] = val
            row += 1
    return PrimeFieldMatrix(field, data)


def _general_evaluation_matrix(
    divisor: DivisorClass,
    surface: Surface,
    delta: int,
    field: PrimeField,
    rng: SeededRng,
) -> PrimeFieldMatrix:
    """Evaluation matrix at fully random surface points."""
    if delta < 0:
        raise ValueError("node count must be non-negative")
    k, a, m = divisor.k, divisor.a, surface.m
    p = field.p
    basis = _monomial_basis(divisor, surface)
    if delta >= p:
        raise ValueError("more points than field elements")
    _check_matrix_cap(delta, len(basis))

    taus = sample_distinct(rng, delta, field)
    data = np.zeros((delta, len(basis)), dtype=np.int64)
    for row in range(delta):
        tau = taus[row]
        upsilon = rng.randrange(p)
        for col, (j, l) in enumerate(basis):
            data[row, col] = pow(tau, j * m + a - l, p) * pow(upsilon, k - j, p) % p
    return PrimeFieldMatrix(field, data)


def oracle_conditions(
    divisor: DivisorClass,
    surface: Surface,
    config: NodeConfiguration,
    field: PrimeField,
    base_seed: int,
    trials: int = 3,
) -> ConditionsReport:
    """Conditions measured as the maximum matrix rank over seeded trials.

    A single specialisation can only understate the generic rank (with
    probability bounded by total degree over the field size), so the
    maximum over independent trials is a reliable lower bound that
    equals the generic rank with overwhelming probability.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    h0 = h0_line_bundle(divisor, surface)
    best = 0
    for trial in range(trials):
        rng = SeededRng(derive_seed(base_seed, trial))
        if config.kind is NodeKind.GENERAL_POINTS:
            matrix = _general_evaluation_matrix(divisor, surface, config.delta, field, rng)
        else:
            matrix = build_evaluation_matrix(divisor, surface, config.multiplicities, field, rng)
        best = max(best, rank(matrix))
    return ConditionsReport(h0, best, h0 - best, Method.ORACLE)


def conditions_closed_form(divisor: DivisorClass, surface: Surface, config: NodeConfiguration) -> ConditionsReport:
    """Dispatch to the closed form matching the configuration kind."""
    if config.kind is NodeKind.GENERAL_POINTS:
        return conditions_general_points(divisor, surface, config.delta)
    return conditions_on_sections_mincut(divisor, surface, config.multiplicities)
