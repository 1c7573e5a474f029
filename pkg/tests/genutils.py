"""Deterministic random-instance generators shared across the test suite."""

from __future__ import annotations

import random
from math import comb

from scrollar import (
    CoverProblem,
    DivisorClass,
    InconsistentModelError,
    NodeConfiguration,
    Surface,
    arithmetic_genus,
    h0_line_bundle,
    scrollar_chain_closed_form,
    scrollar_scan,
)
from scrollar.invariants import GENERIC_EXCLUDED_CLASSES, splitting_regime_bound


def conditions_instances(count, seed, *, max_m=3, max_k=7, max_abs_a=8, max_u=5, max_s=10, max_total=60):
    """Random section configurations for conditions-level checks."""
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        m = rnd.randint(0, max_m)
        k = rnd.randint(1, max_k)
        a = rnd.randint(-max_abs_a, max_abs_a)
        u = rnd.randint(1, max_u)
        s = tuple(sorted((rnd.randint(1, max_s) for _ in range(u)), reverse=True))
        if sum(s) > max_total:
            continue
        out.append((Surface(m), DivisorClass(k, a), s))
    return out


def sections_cover_problems(count, seed, *, max_m=3, max_k=7, max_abs_a=8, max_u=5, max_s=10):
    """Random valid covers with nodes on sections (scan succeeds).

    Cover classes keep ``a >= 0`` (a class meeting the negative section
    negatively has no irreducible members) and respect the section node
    budget ``2 * s_i <= k*m + a`` (the curve meets each section in
    ``k*m + a`` points and every node on it absorbs two).
    """
    rnd = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("generator exhausted; bounds too tight")
        m = rnd.randint(0, max_m)
        k = rnd.randint(2, max_k)
        a = rnd.randint(0, max_abs_a)
        u = rnd.randint(1, max_u)
        s = tuple(sorted((rnd.randint(1, max_s) for _ in range(u)), reverse=True))
        if 2 * s[0] > k * m + a:
            continue
        try:
            problem = CoverProblem(Surface(m), DivisorClass(k, a), NodeConfiguration.on_sections(s))
            scrollar_scan(problem)
        except (ValueError, InconsistentModelError):
            continue
        out.append(problem)
    return out


def general_cover_problems(count, seed, *, max_m=3, max_k=7, max_a=8, within_hypotheses=True):
    """Random covers with general nodes, inside the closed form's hypotheses."""
    rnd = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("generator exhausted; bounds too tight")
        m = rnd.randint(0, max_m)
        k = rnd.randint(2, max_k)
        a = rnd.randint(max(1 - m, 0), max_a)
        if within_hypotheses and (m, k, a) in GENERIC_EXCLUDED_CLASSES:
            continue
        surface, divisor = Surface(m), DivisorClass(k, a)
        pa = arithmetic_genus(divisor, surface)
        cap = min(pa, (h0_line_bundle(divisor, surface) - 1) // 3) if within_hypotheses else pa
        if cap < 0:
            continue
        delta = rnd.randint(0, cap)
        out.append(CoverProblem(surface, divisor, NodeConfiguration.general_points(delta)))
    return out


def chain_cover_problems(count, seed, *, max_m=3, max_k=7, max_a=8):
    """Random covers whose multiplicities drop by at least m per section."""
    rnd = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 500 * count:
            raise RuntimeError("generator exhausted; bounds too tight")
        m = rnd.randint(1, max_m)
        k = rnd.randint(3, max_k)
        a = rnd.randint(0, max_a)
        top = min((k - 1) * m + a - 1, (k - 1) * m - 1, (k * m + a) // 2)
        if top < 1:
            continue
        s = [rnd.randint(1, top)]
        while len(s) < k - 1 and s[-1] - m >= 1 and rnd.random() < 0.7:
            s.append(rnd.randint(1, s[-1] - m))
        try:
            problem = CoverProblem(Surface(m), DivisorClass(k, a), NodeConfiguration.on_sections(s))
            scrollar_chain_closed_form(problem)
        except (ValueError, InconsistentModelError):
            continue
        out.append(problem)
    return out


def inregime_problems(count, seed, *, max_m=3, max_k=7, max_a=8):
    """General-node covers inside the splitting regime (m >= 1)."""
    rnd = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("generator exhausted; bounds too tight")
        m = rnd.randint(1, max_m)
        k = rnd.randint(2, max_k)
        a = rnd.randint(max(1 - m, 0), max_a)
        surface, divisor = Surface(m), DivisorClass(k, a)
        pa = arithmetic_genus(divisor, surface)
        cap = min(
            pa,
            (h0_line_bundle(divisor, surface) - 1) // 3,
            splitting_regime_bound(surface, divisor),
        )
        if cap < 0:
            continue
        delta = rnd.randint(0, cap)
        out.append(CoverProblem(surface, divisor, NodeConfiguration.general_points(delta)))
    return out


def balanced_threshold(problem: CoverProblem) -> int:
    return comb(problem.divisor.k - 1, 2) * problem.surface.m
