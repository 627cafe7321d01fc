"""Non-increasing rearrangement ``t -> mu_t(f)`` as an exact step function."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .evseq import as_fraction
from .measure_model import INF, SpaceFunction, distribution


@dataclass(frozen=True)
class Rearrangement:
    """Right-continuous step function given by ``(value, width)`` steps.

    Values are positive and strictly decreasing; only the last width may be
    infinite.  Past the last finite step the function is zero.
    """

    steps: tuple = ()

    def __post_init__(self):
        steps = tuple((as_fraction(v), w if w == INF else as_fraction(w)) for v, w in self.steps)
        for i, (v, w) in enumerate(steps):
            if v <= 0 or not w > 0:
                raise ValueError(f"step {i} must have positive value and width: {(v, w)}")
            if i and v >= steps[i - 1][0]:
                raise ValueError("step values must be strictly decreasing")
            if w == INF and i != len(steps) - 1:
                raise ValueError("only the last step may have infinite width")
        object.__setattr__(self, "steps", steps)

    @property
    def breakpoints(self) -> list:
        """Right ends of the finite steps."""
        out, t = [], Fraction(0)
        for _, w in self.steps:
            if w == INF:
                break
            t += w
            out.append(t)
        return out

    @property
    def tail(self) -> Fraction:
        """Limit of ``mu_t`` as ``t -> oo``."""
        if self.steps and self.steps[-1][1] == INF:
            return self.steps[-1][0]
        return Fraction(0)

    def __call__(self, t) -> Fraction:
        return mu_at(self, t)

    def integral(self, s) -> Fraction:
        """``int_0^s mu_t dt`` for finite ``s >= 0``."""
        s = as_fraction(s)
        total, left = Fraction(0), Fraction(0)
        for v, w in self.steps:
            if w == INF or s <= left + w:
                return total + v * (s - left)
            total += v * w
            left += w
        return total


def rearrange(f: SpaceFunction) -> Rearrangement:
    """Sort the distinct ``|f|`` values downward and stack their measures."""
    steps = []
    for v, m in sorted(distribution(f).items(), reverse=True):
        steps.append((v, m))
        if m == INF:
            break
    return Rearrangement(tuple(steps))


def mu_at(r: Rearrangement, t) -> Fraction:
    t = as_fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    left = Fraction(0)
    for v, w in r.steps:
        if w == INF or t < left + w:
            return v
        left += w
    return Fraction(0)


def majorizes(f: SpaceFunction, g: SpaceFunction) -> bool:
    """Whether ``g`` is majorized by ``f``: ``int_0^s mu(g) <= int_0^s mu(f)`` for all ``s``.

    Both primitives are piecewise linear with knots at the step breakpoints,
    so comparing at the union of knots and then the final slopes is exact.
    """
    rf = f if isinstance(f, Rearrangement) else rearrange(f)
    rg = g if isinstance(g, Rearrangement) else rearrange(g)
    knots = sorted(set(rf.breakpoints) | set(rg.breakpoints))
    if any(rg.integral(s) > rf.integral(s) for s in knots):
        return False
    return rg.tail <= rf.tail
