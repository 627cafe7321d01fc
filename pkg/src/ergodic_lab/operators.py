"""A closed algebra of Dunford-Schwartz operators and the ergodic-average engine.

Every operator supports two views:

* ``apply(f)`` returns the image as a new :class:`SpaceFunction` (exact, and
  still eventually periodic);
* ``row(loc)`` returns the sparse linear functional ``{y: c}`` with
  ``T(g)(loc) = sum c * g(y)``.  Point traces of ``T^k f`` propagate these
  rows instead of materialising ``T^k f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .evseq import EvSeq, IndexSet
from .measure_model import INFINITE_PARTS, DomainError, Loc, Part, SpaceFunction, SpaceModel
from .rearrangement import majorizes
from .spaces import norm_l1, norm_linf

ONE = Fraction(1)


# -- location maps -----------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    def __call__(self, n: int) -> int:
        return n

    def pull_back(self, seq: EvSeq) -> EvSeq:
        return seq


@dataclass(frozen=True)
class ShiftAlong:
    """Successor map along an infinite index set ``G``; identity off ``G``."""

    support: IndexSet

    def __call__(self, n: int) -> int:
        return self.support.successor(n) if n in self.support else n

    def pull_back(self, seq: EvSeq) -> EvSeq:
        """``seq o tau``."""
        G = self.support
        q = math.lcm(len(G.indicator.base), len(seq.base))
        candidates = set()
        for p in seq.exceptions:
            if p in G:
                prev = G.predecessor(p)
                if prev is not None:
                    candidates.add(prev)
            else:
                candidates.add(p)

        def rule(n):
            return seq[G.successor(n)] if n in G else seq[n]

        def base_rule(n):
            return seq.base_at(G.successor(n)) if n in G else seq.base_at(n)

        return EvSeq.from_rule(rule, base_rule, q, G.stable_from, candidates)


@dataclass(frozen=True)
class Permutation:
    """A bijection of a finite set of indices; identity elsewhere."""

    mapping: tuple

    def __post_init__(self):
        mapping = tuple(sorted((int(a), int(b)) for a, b in dict(self.mapping).items()))
        src = [a for a, _ in mapping]
        dst = sorted(b for _, b in mapping)
        if src != dst or any(a < 1 for a in src):
            raise DomainError("permutation must be a bijection of a finite set of indices")
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, n: int) -> int:
        return dict(self.mapping).get(n, n)

    def pull_back(self, seq: EvSeq) -> EvSeq:
        table = dict(self.mapping)
        top = max(table, default=0)
        return EvSeq.from_rule(
            lambda n: seq[table.get(n, n)],
            seq.base_at,
            len(seq.base),
            top + 1,
            seq.exceptions.keys(),
        )


Tau = Identity | ShiftAlong | Permutation


# -- operators ---------------------------------------------------------------------


class DSOperator:
    """Base class; instances are immutable."""

    def apply(self, f: SpaceFunction) -> SpaceFunction:
        raise NotImplementedError

    def row(self, loc: Loc, space: SpaceModel) -> dict:
        raise NotImplementedError

    def __call__(self, f: SpaceFunction) -> SpaceFunction:
        return self.apply(f)

    def __matmul__(self, other: DSOperator) -> DSOperator:
        return Compose(self, other)


def _zero_like(values):
    if isinstance(values, EvSeq):
        return EvSeq.constant(0)
    return (Fraction(0),) * len(values)


@dataclass(frozen=True)
class MultiplierComposition(DSOperator):
    """``T(g)(n) = phi(n) * g(tau(n))`` on one part.

    Off the part, ``T`` is the identity, or zero when ``zero_off_part`` is set.
    ``|phi| <= 1`` and injectivity of ``tau`` within an equal-weight part make
    ``T`` a contraction of both ``L^1`` and ``L^oo``.
    """

    part: Part
    phi: EvSeq | tuple
    tau: Tau = field(default_factory=Identity)
    zero_off_part: bool = False

    def __post_init__(self):
        object.__setattr__(self, "part", Part(self.part))
        if self.part is Part.EXCEPTIONAL:
            object.__setattr__(self, "phi", tuple(Fraction(v) for v in self.phi))
            if isinstance(self.tau, ShiftAlong):
                raise DomainError("shifts need an infinite part")
        elif not isinstance(self.phi, EvSeq):
            raise DomainError("phi must be an EvSeq on an infinite part")
        if not getattr(self, "_unchecked", False):
            values = self.phi.distinct_values() if isinstance(self.phi, EvSeq) else set(self.phi)
            if any(abs(v) > 1 for v in values):
                raise DomainError("multiplier must satisfy |phi| <= 1")

    @classmethod
    def unchecked(cls, part, phi, tau=None, zero_off_part=False) -> MultiplierComposition:
        """Skip the ``|phi| <= 1`` check; for exercising verifiers on non-DS operators."""
        op = cls.__new__(cls)
        object.__setattr__(op, "_unchecked", True)
        op.__init__(part, phi, tau or Identity(), zero_off_part)
        return op

    @classmethod
    def identity(cls, part: Part = Part.ATOM) -> MultiplierComposition:
        return cls(part, EvSeq.constant(1) if Part(part) is not Part.EXCEPTIONAL else (), Identity())

    @classmethod
    def shift(cls, part: Part = Part.ATOM, support: IndexSet | None = None) -> MultiplierComposition:
        """``g -> g o tau`` with ``tau`` the successor along ``support`` (default: every index)."""
        support = support or IndexSet.all()
        return cls(part, EvSeq.constant(1), ShiftAlong(support))

    def _check_model(self, space: SpaceModel) -> None:
        if not space.has_part(self.part):
            raise DomainError(f"operator acts on the {self.part} part, absent from the model")
        if self.part is Part.EXCEPTIONAL:
            n = len(space.exceptional)
            if len(self.phi) not in (0, n):
                raise DomainError("exceptional multiplier has the wrong length")
            if isinstance(self.tau, Permutation):
                for a, b in self.tau.mapping:
                    if a > n or b > n:
                        raise DomainError("permutation leaves the model")
                    if space.exceptional[a - 1] != space.exceptional[b - 1]:
                        raise DomainError("permutation must preserve atom weights")

    def _phi_exc(self, n_atoms: int) -> tuple:
        return self.phi if self.phi else (ONE,) * n_atoms

    def apply(self, f: SpaceFunction) -> SpaceFunction:
        sp = f.space
        self._check_model(sp)
        out = {}
        for part in sp.parts:
            values = f.part(part)
            if part is not self.part:
                out[part] = _zero_like(values) if self.zero_off_part else values
            elif part is Part.EXCEPTIONAL:
                phi = self._phi_exc(len(values))
                out[part] = tuple(phi[i] * values[self.tau(i + 1) - 1] for i in range(len(values)))
            else:
                out[part] = self.phi * self.tau.pull_back(values)
        return SpaceFunction(
            sp, out.get(Part.CELL), out.get(Part.ATOM), out.get(Part.EXCEPTIONAL, ())
        )

    def row(self, loc: Loc, space: SpaceModel) -> dict:
        if loc.part is not self.part:
            return {} if self.zero_off_part else {loc: ONE}
        if self.part is Part.EXCEPTIONAL:
            c = self._phi_exc(len(space.exceptional))[loc.index - 1]
        else:
            c = self.phi[loc.index]
        return {Loc(loc.part, self.tau(loc.index)): c} if c else {}


@dataclass(frozen=True)
class BlockExpectation(DSOperator):
    """Conditional expectation onto consecutive blocks ``{kb+1, ..., (k+1)b}`` of one part.

    Identity on the other parts.
    """

    part: Part
    block_size: int

    def __post_init__(self):
        object.__setattr__(self, "part", Part(self.part))
        if self.part is Part.EXCEPTIONAL:
            raise DomainError("block expectations need an equal-weight infinite part")
        if int(self.block_size) < 1:
            raise DomainError("block size must be >= 1")
        object.__setattr__(self, "block_size", int(self.block_size))

    def _block(self, n: int) -> range:
        b = self.block_size
        start = (n - 1) // b * b + 1
        return range(start, start + b)

    def apply(self, f: SpaceFunction) -> SpaceFunction:
        if not f.space.has_part(self.part):
            raise DomainError(f"model has no {self.part} part")
        seq = f.part(self.part)
        b = self.block_size
        candidates = set()
        for p in seq.exceptions:
            candidates.update(self._block(p))
        image = EvSeq.from_rule(
            lambda n: sum((seq[j] for j in self._block(n)), Fraction(0)) / b,
            lambda n: sum((seq.base_at(j) for j in self._block(n)), Fraction(0)) / b,
            math.lcm(b, len(seq.base)),
            1,
            candidates,
        )
        return f.replace_part(self.part, image)

    def row(self, loc: Loc, space: SpaceModel) -> dict:
        if loc.part is not self.part:
            return {loc: ONE}
        c = Fraction(1, self.block_size)
        return {Loc(loc.part, j): c for j in self._block(loc.index)}


@dataclass(frozen=True)
class Lift(DSOperator):
    """``g -> inner(e g)`` restricted to the part selected by ``e``; zero elsewhere."""

    inner: DSOperator
    part: Part

    def __post_init__(self):
        object.__setattr__(self, "part", Part(self.part))

    def apply(self, f: SpaceFunction) -> SpaceFunction:
        return self.inner.apply(f.restrict(self.part)).restrict(self.part)

    def row(self, loc: Loc, space: SpaceModel) -> dict:
        if loc.part is not self.part:
            return {}
        return {y: c for y, c in self.inner.row(loc, space).items() if y.part is self.part}


@dataclass(frozen=True)
class Compose(DSOperator):
    """``outer o inner``."""

    outer: DSOperator
    inner: DSOperator

    def apply(self, f: SpaceFunction) -> SpaceFunction:
        return self.outer.apply(self.inner.apply(f))

    def row(self, loc: Loc, space: SpaceModel) -> dict:
        out: dict = {}
        for y, c in self.outer.row(loc, space).items():
            for z, d in self.inner.row(y, space).items():
                out[z] = out.get(z, 0) + c * d
        return {z: c for z, c in out.items() if c}


def block_expectation(space: SpaceModel, block_size: int, part: Part = Part.ATOM) -> BlockExpectation:
    if not space.has_part(Part(part)):
        raise DomainError(f"model has no {part} part")
    return BlockExpectation(part, block_size)


def lift(inner: DSOperator, part: Part) -> Lift:
    return Lift(inner, part)


def apply(T: DSOperator, f: SpaceFunction) -> SpaceFunction:
    return T.apply(f)


# -- averages ----------------------------------------------------------------------


def ergodic_average(T: DSOperator, f: SpaceFunction, n: int) -> SpaceFunction:
    """``(1/n) sum_{k<n} T^k f`` by iterated application."""
    if n < 1:
        raise ValueError("n must be >= 1")
    term, acc = f, f
    for _ in range(n - 1):
        term = T.apply(term)
        acc = acc + term
    return acc.scale(Fraction(1, n))


def _scaled_values(f: SpaceFunction) -> tuple:
    """Common denominator ``D`` and an integer lookup ``loc -> D * f(loc)``."""
    values = set(f.exceptional_values)
    for part in INFINITE_PARTS:
        if f.space.has_part(part):
            values |= f.part(part).distinct_values()
    D = math.lcm(*(v.denominator for v in values)) if values else 1
    table = {v: int(v * D) for v in values}
    seqs = {part: f.part(part) for part in f.space.parts}

    def lookup(loc: Loc) -> int:
        if loc.part is Part.EXCEPTIONAL:
            return table[seqs[loc.part][loc.index - 1]]
        return table[seqs[loc.part][loc.index]]

    return D, lookup


def _exact(c):
    return c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c


def orbit_sums(T: DSOperator, f: SpaceFunction, loc, n_max: int):
    """Yield ``(n, sum_{k<n} T^k f (loc))`` for ``n = 1..n_max``."""
    return _orbit_totals(T, f, loc, n_max, None)


def _orbit_totals(T, f, loc, n_max, wanted):
    loc = Loc(Part(loc[0]), int(loc[1]))
    sp = f.space
    sp.check(loc)
    D, lookup = _scaled_values(f)
    weights = {loc: 1}
    total = 0
    stationary = False
    for n in range(1, n_max + 1):
        if not stationary:
            step = sum((c * lookup(y) for y, c in weights.items()), 0)
        total += step
        if wanted is None or n in wanted:
            yield n, Fraction(total) / D
        if n == n_max or stationary:
            continue
        nxt: dict = {}
        for y, c in weights.items():
            for z, d in T.row(y, sp).items():
                nxt[z] = nxt.get(z, 0) + c * _exact(d)
        nxt = {z: _exact(c) for z, c in nxt.items() if c}
        # a fixed point of the row map adds the same amount at every later step
        stationary = nxt == weights
        weights = nxt


def averages_at(T: DSOperator, f: SpaceFunction, loc, ns: Sequence[int]) -> list:
    """``A_n(T, f)(loc)`` for each ``n`` in the strictly increasing list ``ns``."""
    ns = list(ns)
    if any(b <= a for a, b in zip(ns, ns[1:])) or (ns and ns[0] < 1):
        raise ValueError("ns must be strictly increasing positive integers")
    if not ns:
        return []
    wanted = set(ns)
    return [total / n for n, total in _orbit_totals(T, f, loc, ns[-1], wanted)]


# -- DS verification ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    sample: int
    check: str
    lhs: object
    rhs: object


@dataclass(frozen=True)
class DSReport:
    checked: int
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_ds(T: DSOperator, samples: Iterable[SpaceFunction]) -> DSReport:
    """Check ``||Tf||_1 <= ||f||_1``, ``||Tf||_oo <= ||f||_oo`` and ``Tf << f`` exactly."""
    violations = []
    count = 0
    for i, f in enumerate(samples):
        count += 1
        g = T.apply(f)
        l1f, l1g = norm_l1(f), norm_l1(g)
        if l1g > l1f:
            violations.append(Violation(i, "l1", l1g, l1f))
        inf_f, inf_g = norm_linf(f), norm_linf(g)
        if inf_g > inf_f:
            violations.append(Violation(i, "linf", inf_g, inf_f))
        if not majorizes(f, g):
            violations.append(Violation(i, "majorization", g, f))
    return DSReport(count, tuple(violations))
