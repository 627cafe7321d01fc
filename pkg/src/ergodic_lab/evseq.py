"""Eventually periodic rational sequences and index sets.

A sequence is stored as a purely periodic *base* (aligned so that
``base[(n - 1) % len(base)]`` is the base value at 1-based index ``n``) plus a
finite, sparse table of exceptions.  Every eventually periodic sequence has
exactly one such form once the base period is reduced to its minimal length,
so equality is structural.  The conventional ``prefix``/``period`` view is
available as properties.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

Rational = Fraction


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: every value entering the library must be exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def _minimal_period(values: tuple) -> tuple:
    q = len(values)
    for p in range(1, q + 1):
        if q % p == 0 and all(values[i] == values[i % p] for i in range(q)):
            return values[:p]
    return values


class EvSeq:
    """Eventually periodic sequence ``s(1), s(2), ...`` of rationals."""

    __slots__ = ("_base", "_exc", "_hash")

    def __init__(self, prefix: Iterable = (), period: Iterable = (0,)):
        prefix = tuple(as_fraction(v) for v in prefix)
        period = tuple(as_fraction(v) for v in period)
        if not period:
            raise ValueError("period must be nonempty")
        q = len(period)
        shift = len(prefix) % q
        # rotate so that base index (n-1) % q agrees with the tail for n > len(prefix)
        base = tuple(period[(j - shift) % q] for j in range(q))
        exceptions = {n: v for n, v in enumerate(prefix, start=1)}
        self._set(base, exceptions)

    def _set(self, base: tuple, exceptions: Mapping[int, Fraction]) -> None:
        base = _minimal_period(base)
        q = len(base)
        exc = {n: v for n, v in exceptions.items() if v != base[(n - 1) % q]}
        self._base = base
        self._exc = dict(sorted(exc.items()))
        self._hash = None

    @classmethod
    def sparse(cls, base: Iterable, exceptions: Mapping[int, object] | None = None) -> EvSeq:
        """Build from a base period aligned at index 1 and a finite exception table."""
        base = tuple(as_fraction(v) for v in base)
        if not base:
            raise ValueError("base period must be nonempty")
        exc = {}
        for n, v in (exceptions or {}).items():
            n = int(n)
            if n < 1:
                raise ValueError(f"sequence index must be >= 1, got {n}")
            exc[n] = as_fraction(v)
        seq = cls.__new__(cls)
        seq._set(base, exc)
        return seq

    @classmethod
    def constant(cls, value=0) -> EvSeq:
        return cls.sparse((value,))

    @classmethod
    def from_rule(
        cls,
        rule: Callable[[int], Fraction],
        base_rule: Callable[[int], Fraction],
        period: int,
        stable_from: int,
        candidates: Iterable[int] = (),
    ) -> EvSeq:
        """Materialise ``rule`` given its eventual periodic law.

        ``base_rule`` must be periodic with period ``period`` on
        ``n >= stable_from``, and ``rule(n) == base_rule(n)`` must hold for
        every ``n >= stable_from`` outside ``candidates``.
        """
        start = stable_from + (-(stable_from - 1)) % period
        base = [Fraction(0)] * period
        for n in range(start, start + period):
            base[(n - 1) % period] = base_rule(n)
        exc = {}
        positions = set(range(1, stable_from))
        positions.update(n for n in candidates if n >= 1)
        for n in positions:
            exc[n] = rule(n)
        seq = cls.__new__(cls)
        seq._set(tuple(base), exc)
        return seq

    # -- views ---------------------------------------------------------------

    @property
    def base(self) -> tuple:
        return self._base

    @property
    def exceptions(self) -> dict:
        return dict(self._exc)

    @property
    def threshold(self) -> int:
        """Largest exceptional index (0 if purely periodic)."""
        return next(reversed(self._exc), 0) if self._exc else 0

    @property
    def prefix(self) -> tuple:
        return tuple(self[n] for n in range(1, self.threshold + 1))

    @property
    def period(self) -> tuple:
        q = len(self._base)
        t = self.threshold
        return tuple(self._base[(t + j) % q] for j in range(q))

    def base_at(self, n: int) -> Fraction:
        return self._base[(n - 1) % len(self._base)]

    def __getitem__(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError(f"sequence index must be >= 1, got {n}")
        v = self._exc.get(n)
        if v is None:
            return self._base[(n - 1) % len(self._base)]
        return v

    def head(self, count: int) -> list:
        return [self[n] for n in range(1, count + 1)]

    def recurring_values(self) -> set:
        """Values taken infinitely often."""
        return set(self._base)

    def finite_counts(self) -> dict:
        """Values taken only finitely often, with their multiplicities."""
        recurring = set(self._base)
        counts: dict = {}
        for v in self._exc.values():
            if v not in recurring:
                counts[v] = counts.get(v, 0) + 1
        return counts

    def distinct_values(self) -> set:
        return set(self._base) | set(self._exc.values())

    def is_eventually_zero(self) -> bool:
        return all(v == 0 for v in self._base)

    # -- algebra -------------------------------------------------------------

    def map(self, fn: Callable[[Fraction], Fraction]) -> EvSeq:
        return EvSeq.sparse(
            tuple(fn(v) for v in self._base),
            {n: fn(v) for n, v in self._exc.items()},
        )

    def combine(self, other: EvSeq, fn: Callable[[Fraction, Fraction], Fraction]) -> EvSeq:
        q = math.lcm(len(self._base), len(other._base))
        base = tuple(fn(self.base_at(n), other.base_at(n)) for n in range(1, q + 1))
        keys = set(self._exc) | set(other._exc)
        return EvSeq.sparse(base, {n: fn(self[n], other[n]) for n in keys})

    def with_values(self, updates: Mapping[int, object]) -> EvSeq:
        exc = dict(self._exc)
        exc.update({int(n): as_fraction(v) for n, v in updates.items()})
        return EvSeq.sparse(self._base, exc)

    def __add__(self, other: EvSeq) -> EvSeq:
        return self.combine(other, lambda x, y: x + y)

    def __sub__(self, other: EvSeq) -> EvSeq:
        return self.combine(other, lambda x, y: x - y)

    def __mul__(self, other: EvSeq) -> EvSeq:
        return self.combine(other, lambda x, y: x * y)

    def __neg__(self) -> EvSeq:
        return self.map(lambda x: -x)

    def scale(self, c) -> EvSeq:
        c = as_fraction(c)
        return self.map(lambda x: c * x)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvSeq):
            return NotImplemented
        return self._base == other._base and self._exc == other._exc

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._base, tuple(self._exc.items())))
        return self._hash

    def __repr__(self) -> str:
        fmt = lambda vs: "[" + ", ".join(str(v) for v in vs) + "]"  # noqa: E731
        if self.threshold <= 16:
            return f"EvSeq(prefix={fmt(self.prefix)}, period={fmt(self.period)})"
        return f"EvSeq(base={fmt(self._base)}, {len(self._exc)} exceptions up to {self.threshold})"


class IndexSet:
    """Infinite, eventually periodic subset ``{m_1 < m_2 < ...}`` of the positive integers."""

    __slots__ = ("indicator", "_head", "_tail_start", "_block", "_q")

    def __init__(self, indicator: EvSeq):
        indicator = indicator.map(lambda v: Fraction(1 if v else 0))
        if not any(indicator.base):
            raise ValueError("index set must be infinite")
        self.indicator = indicator
        t = indicator.threshold
        q = len(indicator.base)
        self._head = [n for n in range(1, t + 1) if indicator[n]]
        self._tail_start = t + 1
        self._block = [n for n in range(t + 1, t + 1 + q) if indicator[n]]
        self._q = q

    @classmethod
    def where(cls, seq: EvSeq, predicate: Callable[[Fraction], bool]) -> IndexSet:
        return cls(seq.map(lambda v: Fraction(1 if predicate(v) else 0)))

    @classmethod
    def all(cls) -> IndexSet:
        return cls(EvSeq.constant(1))

    def __contains__(self, n: int) -> bool:
        return n >= 1 and bool(self.indicator[n])

    @property
    def first(self) -> int:
        return self.nth(1)

    @property
    def stable_from(self) -> int:
        """Index from which membership and successors follow the periodic law."""
        return self._tail_start

    def nth(self, r: int) -> int:
        """The r-th element (1-based)."""
        if r < 1:
            raise IndexError("rank must be >= 1")
        h = len(self._head)
        if r <= h:
            return self._head[r - 1]
        k, j = divmod(r - h - 1, len(self._block))
        return self._block[j] + k * self._q

    def rank(self, n: int) -> int:
        """Rank of member ``n`` (inverse of :meth:`nth`)."""
        if n not in self:
            raise ValueError(f"{n} is not in the index set")
        if n < self._tail_start:
            return self._head.index(n) + 1
        k, off = divmod(n - self._tail_start, self._q)
        j = self._block.index(self._tail_start + off)
        return len(self._head) + k * len(self._block) + j + 1

    def successor(self, n: int) -> int:
        return self.nth(self.rank(n) + 1)

    def predecessor(self, n: int) -> int | None:
        r = self.rank(n)
        return None if r == 1 else self.nth(r - 1)

    def __iter__(self) -> Iterator[int]:
        yield from self._head
        k = 0
        while True:
            for m in self._block:
                yield m + k
            k += self._q

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexSet) and self.indicator == other.indicator

    def __hash__(self) -> int:
        return hash(self.indicator)

    def __repr__(self) -> str:
        return f"IndexSet({self.indicator!r})"
