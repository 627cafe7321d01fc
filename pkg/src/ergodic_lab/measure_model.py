"""Quasi-non-atomic measure models and the bounded functions living on them.

A :class:`SpaceModel` is a disjoint union of up to three parts:

* ``cell``: countably many unit-measure cells of a non-atomic space
  (functions are constant on each cell);
* ``atom``: countably many atoms sharing one positive weight;
* ``exceptional``: finitely many atoms with arbitrary weights.

Regular atoms and exceptional atoms never coexist, so every model is
quasi-non-atomic.  Measures are exact rationals, or ``math.inf``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .evseq import EvSeq, as_fraction

INF = math.inf


class DomainError(ValueError):
    """A location or argument lies outside the model."""


class Part(str, enum.Enum):
    CELL = "cell"
    ATOM = "atom"
    EXCEPTIONAL = "exceptional"

    def __str__(self) -> str:
        return self.value


INFINITE_PARTS = (Part.CELL, Part.ATOM)


class Loc(NamedTuple):
    part: Part
    index: int

    @classmethod
    def parse(cls, text: str) -> Loc:
        """Parse ``"atom:3"`` style locations."""
        try:
            part, index = text.split(":")
            return cls(Part(part.strip()), int(index))
        except ValueError as exc:
            raise DomainError(f"bad location {text!r}; expected <part>:<index>") from exc

    def __str__(self) -> str:
        return f"{self.part.value}:{self.index}"


@dataclass(frozen=True)
class SpaceModel:
    cells: bool = False
    atom_weight: Fraction | None = None
    exceptional: tuple = ()

    def __post_init__(self):
        if self.atom_weight is not None:
            w = as_fraction(self.atom_weight)
            if w <= 0:
                raise DomainError("atom weight must be positive")
            object.__setattr__(self, "atom_weight", w)
        exc = tuple(as_fraction(w) for w in self.exceptional)
        if any(w <= 0 for w in exc):
            raise DomainError("exceptional atom weights must be positive")
        if exc and self.atom_weight is not None:
            raise DomainError(
                "not quasi-non-atomic: infinitely many equal atoms cannot coexist "
                "with exceptional atoms of other weights"
            )
        object.__setattr__(self, "exceptional", exc)

    @property
    def has_atoms(self) -> bool:
        return self.atom_weight is not None

    @property
    def parts(self) -> tuple:
        out = []
        if self.cells:
            out.append(Part.CELL)
        if self.has_atoms:
            out.append(Part.ATOM)
        if self.exceptional:
            out.append(Part.EXCEPTIONAL)
        return tuple(out)

    def has_part(self, part: Part) -> bool:
        return part in self.parts

    def weight(self, loc: Loc) -> Fraction:
        self.check(loc)
        if loc.part is Part.CELL:
            return Fraction(1)
        if loc.part is Part.ATOM:
            return self.atom_weight
        return self.exceptional[loc.index - 1]

    def part_weight(self, part: Part) -> Fraction:
        """Common weight of the points of an infinite part."""
        if part is Part.CELL:
            return Fraction(1)
        if part is Part.ATOM and self.has_atoms:
            return self.atom_weight
        raise DomainError(f"part {part} has no common weight in this model")

    @property
    def total_measure(self):
        if self.cells or self.has_atoms:
            return INF
        return sum(self.exceptional, Fraction(0))

    @property
    def is_infinite(self) -> bool:
        return self.total_measure == INF

    def check(self, loc: Loc) -> None:
        part, index = loc
        if not self.has_part(part):
            raise DomainError(f"model has no {part} part")
        if index < 1:
            raise DomainError(f"index must be >= 1, got {index}")
        if part is Part.EXCEPTIONAL and index > len(self.exceptional):
            raise DomainError(f"exceptional atom {index} does not exist")


def _seq(x) -> EvSeq | None:
    if x is None or isinstance(x, EvSeq):
        return x
    if isinstance(x, dict):
        return EvSeq(x.get("prefix", ()), x.get("period", (0,)))
    return EvSeq(x, (0,))


@dataclass(frozen=True)
class SpaceFunction:
    """A bounded function on a :class:`SpaceModel`, constant on every cell and atom."""

    space: SpaceModel
    cell_values: EvSeq | None = None
    atom_values: EvSeq | None = None
    exceptional_values: tuple = ()

    def __post_init__(self):
        sp = self.space
        object.__setattr__(self, "cell_values", _seq(self.cell_values))
        object.__setattr__(self, "atom_values", _seq(self.atom_values))
        object.__setattr__(
            self, "exceptional_values", tuple(as_fraction(v) for v in self.exceptional_values)
        )
        if (self.cell_values is not None) != sp.cells:
            raise DomainError("cell_values must be given iff the model has cells")
        if (self.atom_values is not None) != sp.has_atoms:
            raise DomainError("atom_values must be given iff the model has regular atoms")
        if len(self.exceptional_values) != len(sp.exceptional):
            raise DomainError(
                f"expected {len(sp.exceptional)} exceptional values, "
                f"got {len(self.exceptional_values)}"
            )

    @classmethod
    def build(cls, space: SpaceModel, cells=None, atoms=None, exceptional=None) -> SpaceFunction:
        """Like the constructor, but parts left unspecified default to zero."""
        zero = EvSeq.constant(0)
        return cls(
            space,
            (_seq(cells) or zero) if space.cells else None,
            (_seq(atoms) or zero) if space.has_atoms else None,
            tuple(exceptional) if exceptional is not None else (0,) * len(space.exceptional),
        )

    @classmethod
    def zeros(cls, space: SpaceModel) -> SpaceFunction:
        return cls.build(space)

    @classmethod
    def ones(cls, space: SpaceModel) -> SpaceFunction:
        one = EvSeq.constant(1)
        return cls.build(space, one, one, (1,) * len(space.exceptional))

    def part(self, part: Part):
        """The values on one part: an EvSeq, or a tuple for the exceptional atoms."""
        if part is Part.CELL:
            return self.cell_values
        if part is Part.ATOM:
            return self.atom_values
        return self.exceptional_values

    def replace_part(self, part: Part, values) -> SpaceFunction:
        kw = {
            "cell_values": self.cell_values,
            "atom_values": self.atom_values,
            "exceptional_values": self.exceptional_values,
        }
        kw[{Part.CELL: "cell_values", Part.ATOM: "atom_values"}.get(part, "exceptional_values")] = values
        return SpaceFunction(self.space, **kw)

    def __call__(self, loc: Loc) -> Fraction:
        return evaluate(self, loc)

    # -- pointwise algebra ---------------------------------------------------

    def _zip(self, other: SpaceFunction, fn) -> SpaceFunction:
        if other.space != self.space:
            raise DomainError("functions live on different models")
        c = self.cell_values.combine(other.cell_values, fn) if self.space.cells else None
        a = self.atom_values.combine(other.atom_values, fn) if self.space.has_atoms else None
        e = tuple(fn(x, y) for x, y in zip(self.exceptional_values, other.exceptional_values))
        return SpaceFunction(self.space, c, a, e)

    def map(self, fn) -> SpaceFunction:
        c = self.cell_values.map(fn) if self.space.cells else None
        a = self.atom_values.map(fn) if self.space.has_atoms else None
        return SpaceFunction(self.space, c, a, tuple(fn(v) for v in self.exceptional_values))

    def __add__(self, other: SpaceFunction) -> SpaceFunction:
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other: SpaceFunction) -> SpaceFunction:
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self) -> SpaceFunction:
        return self.map(lambda x: -x)

    def scale(self, c) -> SpaceFunction:
        c = as_fraction(c)
        return self.map(lambda x: c * x)

    def abs(self) -> SpaceFunction:
        return self.map(abs)

    def positive_part(self) -> SpaceFunction:
        return self.map(lambda x: max(x, Fraction(0)))

    def negative_part(self) -> SpaceFunction:
        return self.map(lambda x: max(-x, Fraction(0)))

    def restrict(self, part: Part) -> SpaceFunction:
        """Multiply by the indicator of one part."""
        zero = EvSeq.constant(0)
        sp = self.space
        return SpaceFunction(
            sp,
            (self.cell_values if part is Part.CELL else zero) if sp.cells else None,
            (self.atom_values if part is Part.ATOM else zero) if sp.has_atoms else None,
            self.exceptional_values if part is Part.EXCEPTIONAL else (Fraction(0),) * len(sp.exceptional),
        )

    def locations(self, count: int) -> Iterable[Loc]:
        """The first ``count`` locations of each infinite part and every exceptional atom."""
        for part in self.space.parts:
            n = len(self.space.exceptional) if part is Part.EXCEPTIONAL else count
            for i in range(1, n + 1):
                yield Loc(part, i)


def evaluate(f: SpaceFunction, loc: Loc) -> Fraction:
    """Value of ``f`` on one cell or atom."""
    loc = Loc(Part(loc[0]), int(loc[1]))
    f.space.check(loc)
    if loc.part is Part.EXCEPTIONAL:
        return f.exceptional_values[loc.index - 1]
    return f.part(loc.part)[loc.index]


def distribution(f: SpaceFunction) -> dict:
    """Map each positive value of ``|f|`` to the (possibly infinite) measure where it occurs."""
    out: dict = {}

    def add(v, m):
        if v > 0:
            out[v] = out.get(v, 0) + m

    sp = f.space
    for part in INFINITE_PARTS:
        if not sp.has_part(part):
            continue
        seq = f.part(part).map(abs)
        w = sp.part_weight(part)
        for v in seq.recurring_values():
            add(v, INF)
        for v, count in seq.finite_counts().items():
            add(v, count * w)
    for v, w in zip(f.exceptional_values, sp.exceptional):
        add(abs(v), w)
    return out


def level_measure(f: SpaceFunction, lam) -> Fraction | float:
    """Exact measure of ``{|f| > lam}``."""
    lam = as_fraction(lam)
    if lam < 0:
        raise DomainError("level must be nonnegative")
    total = Fraction(0)
    for v, m in distribution(f).items():
        if v > lam:
            if m == INF:
                return INF
            total += m
    return total


def tail_value(f: SpaceFunction) -> Fraction:
    """``lim_{t->oo} mu_t(f)``: the largest ``|value|`` recurring on an infinite part."""
    best = Fraction(0)
    for part in INFINITE_PARTS:
        if f.space.has_part(part):
            best = max([best, *(abs(v) for v in f.part(part).recurring_values())])
    return best


def in_R_mu(f: SpaceFunction) -> bool:
    """True iff every level set ``{|f| > lam}``, ``lam > 0``, has finite measure."""
    return tail_value(f) == 0


def split_parts(f: SpaceFunction) -> tuple:
    """Split ``f = ef + (1 - e)f`` with ``e`` the indicator of the non-atomic part."""
    sp = f.space
    zero = EvSeq.constant(0)
    non_atomic = SpaceFunction(
        sp,
        f.cell_values,
        zero if sp.has_atoms else None,
        (Fraction(0),) * len(sp.exceptional),
    )
    atomic = SpaceFunction(sp, zero if sp.cells else None, f.atom_values, f.exceptional_values)
    return non_atomic, atomic
