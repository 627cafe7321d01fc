"""Brute-force reference computations, kept independent of the library's fast paths.

They read functions only through the public ``prefix``/``period`` view of
each sequence and enumerate positions directly.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from ergodic_lab import EvSeq, IndexSet, SpaceFunction, SpaceModel
from ergodic_lab.operators import (
    BlockExpectation,
    Compose,
    Lift,
    MultiplierComposition,
    Permutation,
    ShiftAlong,
)
from ergodic_lab.measure_model import Part

INF = math.inf


def parts_of(f: SpaceFunction):
    """Yield ``(prefix, period, weight)`` for infinite parts, and ``(values, None, weights)`` for the finite one."""
    sp = f.space
    if sp.cells:
        yield list(f.cell_values.prefix), list(f.cell_values.period), Fraction(1)
    if sp.atom_weight is not None:
        yield list(f.atom_values.prefix), list(f.atom_values.period), sp.atom_weight
    if sp.exceptional:
        yield list(f.exceptional_values), None, list(sp.exceptional)


def level_measure_enum(f: SpaceFunction, lam) -> object:
    lam = Fraction(lam)
    total = Fraction(0)
    for prefix, period, w in parts_of(f):
        if period is None:
            total += sum((wi for v, wi in zip(prefix, w) if abs(v) > lam), Fraction(0))
            continue
        if any(abs(v) > lam for v in period):
            return INF
        total += w * sum(1 for v in prefix if abs(v) > lam)
    return total


def abs_values(f: SpaceFunction) -> set:
    out = set()
    for prefix, period, _ in parts_of(f):
        out |= {abs(v) for v in prefix}
        if period is not None:
            out |= {abs(v) for v in period}
    return out


def mu_inf_definition(f: SpaceFunction, t) -> Fraction:
    """``inf{lam > 0: mu{|f| > lam} <= t}``.

    The distribution function is a right-continuous step function of ``lam``
    jumping only at values of ``|f|``, so the infimum is attained on
    ``{0} u values``; if ``0`` qualifies the infimum over ``lam > 0`` is 0.
    """
    t = Fraction(t)
    candidates = sorted({Fraction(0)} | abs_values(f))
    return min(lam for lam in candidates if level_measure_enum(f, lam) <= t)


def l1_enum(f: SpaceFunction):
    total = Fraction(0)
    for prefix, period, w in parts_of(f):
        if period is None:
            total += sum((abs(v) * wi for v, wi in zip(prefix, w)), Fraction(0))
            continue
        if any(v != 0 for v in period):
            return INF
        total += w * sum(abs(v) for v in prefix)
    return total


def decomposition_infimum(f: SpaceFunction) -> Fraction:
    """``min_c ||(|f| - c)_+||_1 + c`` over ``c`` in ``{0} u values``.

    Splitting ``f = g + h`` with ``h`` the truncation at ``c`` realises
    ``||g||_1 + ||h||_oo``; the objective is piecewise linear and convex in
    ``c`` with knots at the values, so the minimum sits on a knot.
    """
    best = None
    for c in sorted({Fraction(0)} | abs_values(f)):
        cost = l1_enum(f.map(lambda v: max(abs(v) - c, Fraction(0)))) + c
        if cost != INF and (best is None or cost < best):
            best = cost
    return best


def brute_force_ns(values_along_orbit, a, K):
    """Minimal alternating crossing indices by scanning ``n = 1, 2, ...`` with exact averages.

    ``values_along_orbit(k)`` is ``f(m_{k+1})``.  Each candidate ``n`` is
    scored from scratch (no running state reused between candidates).
    """
    ns = []
    n = 0
    while len(ns) < K:
        n += 1
        signed = Fraction(0)
        for k in range(n):
            flips = sum(1 for b in ns if k >= b)
            signed += (-1) ** flips * values_along_orbit(k)
        avg = signed / n
        want_up = len(ns) % 2 == 0
        if (want_up and avg > Fraction(a) / 2) or (not want_up and avg < -Fraction(a) / 2):
            ns.append(n)
    return ns


# -- random corpora ------------------------------------------------------------------

WEIGHTS = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(3, 2)]


def random_space(rng: random.Random) -> SpaceModel:
    kind = rng.choice(["cells", "atoms", "mixed", "cells_exc", "exc"])
    if kind == "cells":
        return SpaceModel(cells=True)
    if kind == "atoms":
        return SpaceModel(atom_weight=rng.choice(WEIGHTS))
    if kind == "mixed":
        return SpaceModel(cells=True, atom_weight=rng.choice(WEIGHTS))
    exc = tuple(rng.choice(WEIGHTS) for _ in range(rng.randint(1, 4)))
    return SpaceModel(cells=(kind == "cells_exc"), exceptional=exc)


def random_seq(rng: random.Random, palette, zero_tail: bool, max_prefix=6, max_period=3) -> EvSeq:
    prefix = [rng.choice(palette) for _ in range(rng.randint(0, max_prefix))]
    if zero_tail:
        period = [Fraction(0)] * rng.randint(1, max_period)
    else:
        period = [rng.choice(palette) for _ in range(rng.randint(1, max_period))]
    return EvSeq(prefix, period)


def random_palette(rng: random.Random, size: int) -> list:
    vals = set()
    while len(vals) < size:
        vals.add(Fraction(rng.randint(-12, 12), rng.randint(1, 4)))
    return sorted(vals)


def random_function(rng: random.Random, space=None, zero_tail=None, max_distinct=8) -> SpaceFunction:
    space = space or random_space(rng)
    palette = random_palette(rng, rng.randint(1, max_distinct - 1)) + [Fraction(0)]
    zt = rng.random() < 0.4 if zero_tail is None else zero_tail
    while True:
        f = SpaceFunction.build(
            space,
            random_seq(rng, palette, zt) if space.cells else None,
            random_seq(rng, palette, zt) if space.atom_weight is not None else None,
            [rng.choice(palette) for _ in space.exceptional],
        )
        if len({abs(v) for v in abs_values(f)}) <= max_distinct:
            return f


def corpus_outside_R_mu(rng: random.Random, count: int) -> list:
    """Functions with a nonvanishing tail on atomic, cell and mixed models."""
    out = []
    spaces = [
        SpaceModel(atom_weight=1),
        SpaceModel(atom_weight=Fraction(1, 3)),
        SpaceModel(cells=True),
        SpaceModel(cells=True, exceptional=(Fraction(1, 2), 2)),
        SpaceModel(cells=True, atom_weight=Fraction(1, 2)),
    ]
    while len(out) < count:
        sp = spaces[len(out) % len(spaces)]
        f = random_function(rng, sp, zero_tail=False)
        if any(v != 0 for part in (Part.CELL, Part.ATOM) if sp.has_part(part) for v in f.part(part).period):
            out.append(f)
    return out


def corpus_in_R_mu(rng: random.Random, count: int, space=None) -> list:
    return [random_function(rng, space, zero_tail=True) for _ in range(count)]


def lp_enum(f: SpaceFunction, p: int) -> float:
    """``(sum |v|^p w)^(1/p)`` for a finitely supported ``f``."""
    total = Fraction(0)
    for prefix, period, w in parts_of(f):
        ws = w if period is None else [w] * len(prefix)
        total += sum((abs(v) ** p * wi for v, wi in zip(prefix, ws)), Fraction(0))
    return float(total) ** (1 / p)


def integral_enum(f: SpaceFunction) -> Fraction:
    """Signed integral of a finitely supported ``f``."""
    total = Fraction(0)
    for prefix, period, w in parts_of(f):
        if period is not None and any(v != 0 for v in period):
            raise ValueError("not integrable")
        ws = w if period is None else [w] * len(prefix)
        total += sum((v * wi for v, wi in zip(prefix, ws)), Fraction(0))
    return total


def random_operator(rng: random.Random, space: SpaceModel, depth: int = 2):
    """A library-built DS operator on ``space``."""
    infinite = [p for p in (Part.CELL, Part.ATOM) if space.has_part(p)]
    choices = ["multiplier", "block", "lift", "compose"] if infinite else ["exc_perm"]
    kind = rng.choice(choices if depth > 0 else choices[:2])
    if kind == "exc_perm":
        n = len(space.exceptional)
        idx = list(range(1, n + 1))
        groups = {}
        for i in idx:
            groups.setdefault(space.exceptional[i - 1], []).append(i)
        mapping = {}
        for members in groups.values():
            shuffled = members[:]
            rng.shuffle(shuffled)
            mapping.update(zip(members, shuffled))
        phi = tuple(Fraction(rng.randint(-4, 4), 4) for _ in idx)
        return MultiplierComposition(Part.EXCEPTIONAL, phi, Permutation(tuple(mapping.items())))
    part = rng.choice(infinite)
    if kind == "multiplier":
        phi = random_seq(rng, [Fraction(k, 4) for k in range(-4, 5)], False, max_prefix=5)
        tau_kind = rng.choice(["identity", "shift", "shift_sparse", "perm"])
        if tau_kind == "shift":
            return MultiplierComposition(part, phi, ShiftAlong(IndexSet.all()), rng.random() < 0.3)
        if tau_kind == "shift_sparse":
            pattern = [rng.randint(0, 1) for _ in range(rng.randint(1, 3))]
            pattern[0] = 1
            G = IndexSet(EvSeq([rng.randint(0, 1) for _ in range(rng.randint(0, 4))], pattern))
            return MultiplierComposition(part, phi, ShiftAlong(G), rng.random() < 0.3)
        if tau_kind == "perm":
            members = rng.sample(range(1, 9), rng.randint(2, 5))
            shuffled = members[:]
            rng.shuffle(shuffled)
            return MultiplierComposition(part, phi, Permutation(tuple(zip(members, shuffled))))
        return MultiplierComposition(part, phi)
    if kind == "block":
        return BlockExpectation(part, rng.randint(1, 5))
    if kind == "lift":
        return Lift(random_operator(rng, space, depth - 1), rng.choice(infinite))
    return Compose(random_operator(rng, space, depth - 1), random_operator(rng, space, depth - 1))
