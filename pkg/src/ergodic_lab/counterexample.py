"""Divergence counterexamples for functions whose rearrangement does not vanish at infinity.

Given ``f`` outside ``R_mu``, pick a sign and a part on which ``|f|`` keeps a
positive level on a set ``G`` of infinite measure, walk ``G`` with the
successor map, and flip the sign of the multiplier at the chosen indices
``m_{n_1}, m_{n_2}, ...`` so that the Cesaro averages at ``m_1`` are pushed
alternately above ``a/2`` and below ``-a/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .evseq import EvSeq, IndexSet
from .measure_model import INFINITE_PARTS, DomainError, Loc, Part, SpaceFunction, in_R_mu
from .operators import DSOperator, Lift, MultiplierComposition, ShiftAlong, averages_at

DEFAULT_DEPTH = 8


class CertificateError(RuntimeError):
    """A freshly synthesized certificate failed its independent re-check."""


@dataclass(frozen=True)
class LevelBand:
    """``a <= sign*f <= b`` on the index set ``support`` of one part."""

    a: Fraction
    b: Fraction
    part: Part
    support: IndexSet
    sign: int = 1

    @property
    def m1(self) -> int:
        return self.support.first

    @property
    def base_point(self) -> Loc:
        return Loc(self.part, self.m1)


@dataclass(frozen=True)
class OscillationCertificate:
    band: LevelBand
    ns: tuple
    trace: tuple
    operator: DSOperator

    @property
    def threshold(self) -> Fraction:
        return self.band.a / 2

    @property
    def depth(self) -> int:
        return len(self.ns)


def dispatch(f: SpaceFunction) -> tuple:
    """Choose ``(sign, part)`` with ``sign*f`` keeping a positive tail on ``part``.

    ``f_+`` is preferred over ``f_-``, and the non-atomic part over the atoms.
    """
    if in_R_mu(f):
        raise DomainError("f lies in R_mu: every level set has finite measure")
    for sign, g in ((1, f.positive_part()), (-1, f.negative_part())):
        for part in INFINITE_PARTS:
            if f.space.has_part(part) and any(v > 0 for v in g.part(part).recurring_values()):
                return sign, part
    raise AssertionError("unreachable: a positive tail must live on an infinite part")


def find_level_band(f: SpaceFunction, sign: int | None = None, part: Part | None = None) -> LevelBand:
    if sign is None or part is None:
        sign, part = dispatch(f)
    part = Part(part)
    seq = f.part(part).map(lambda v: max(sign * v, Fraction(0)))
    recurring = [v for v in seq.recurring_values() if v > 0]
    if not recurring:
        raise DomainError(f"sign {sign:+d} part of f has no positive tail on the {part} part")
    a, b = min(recurring), max(recurring)
    support = IndexSet.where(seq, lambda v: a <= v <= b)
    return LevelBand(a, b, part, support, sign)


def greedy_ns(f: SpaceFunction, band: LevelBand, K: int) -> list:
    """Minimal ``n_1 < ... < n_K`` making the signed averages at ``m_1`` alternate across ``+-a/2``.

    The sign of the running sum flips right after each chosen ``n_j``.
    Ties are rejected: the inequalities are strict.
    """
    return _greedy(f, band, K)[0]


def _greedy(f: SpaceFunction, band: LevelBand, K: int) -> tuple:
    # integer arithmetic on f scaled by a common denominator; returns (ns, trace of f)
    if K < 1:
        raise ValueError("depth must be >= 1")
    seq = f.part(band.part)
    values = seq.distinct_values()
    scale = math.lcm(band.a.denominator, *(v.denominator for v in values))
    scaled = {v: int(band.sign * v * scale) for v in values}
    a_scaled = int(band.a * scale)
    ns: list = []
    trace: list = []
    total = 0
    direction = 1
    for n, m in enumerate(band.support, start=1):
        total += direction * scaled[seq[m]]
        # direction * (total / n) > a / 2
        if 2 * direction * total > a_scaled * n:
            ns.append(n)
            trace.append(band.sign * Fraction(total, scale * n))
            if len(ns) == K:
                return ns, trace
            direction = -direction
    raise AssertionError("unreachable")


def build_tau_phi(band: LevelBand, ns: Sequence[int]) -> tuple:
    """Successor map along ``G`` and the multiplier: ``+1`` on ``G``, ``-1`` at ``m_{n_k}``, ``0`` off ``G``."""
    G = band.support
    tau = ShiftAlong(G)
    phi = G.indicator.with_values({G.nth(n): -1 for n in ns})
    return tau, phi


def build_operator(band: LevelBand, ns: Sequence[int]) -> DSOperator:
    tau, phi = build_tau_phi(band, ns)
    inner = MultiplierComposition(band.part, phi, tau, zero_off_part=True)
    return Lift(inner, band.part)


def _alternates(trace: Sequence[Fraction], threshold: Fraction, sign: int) -> bool:
    for j, value in enumerate(trace):
        v = sign * value
        if (j % 2 == 0 and not v > threshold) or (j % 2 == 1 and not v < -threshold):
            return False
    return True


def verify_certificate(cert: OscillationCertificate, T: DSOperator, f: SpaceFunction) -> bool:
    """Recompute the trace by plain operator iteration and check it exactly."""
    ns = list(cert.ns)
    if len(ns) < 2 or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
        return False
    if len(cert.trace) != len(ns):
        return False
    band = cert.band
    if band.a <= 0:
        return False
    try:
        trace = averages_at(T, f, band.base_point, ns)
    except (DomainError, ValueError):
        return False
    if trace != list(cert.trace):
        return False
    return _alternates(trace, cert.threshold, band.sign)


def synthesize(f: SpaceFunction, K: int = DEFAULT_DEPTH) -> tuple:
    """Build a DS operator whose averages of ``f`` oscillate at ``m_1``, with a certificate."""
    if K < 2:
        raise ValueError("depth must be >= 2 to witness divergence")
    band = find_level_band(f)
    ns, trace = _greedy(f, band, K)
    T = build_operator(band, ns)
    cert = OscillationCertificate(band, tuple(ns), tuple(trace), T)
    if not verify_certificate(cert, T, f):
        raise CertificateError(
            f"certificate failed re-check: ns={ns}, trace={[str(v) for v in trace]}"
        )
    return T, cert
