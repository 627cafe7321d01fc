"""Norms of classical fully symmetric spaces and their membership predicates.

On an infinite quasi-non-atomic model a fully symmetric space ``E`` has the
individual ergodic theorem property exactly when the constant function ``1``
is not in ``E``.  The Orlicz and Lorentz gauges come from small parametric
catalogs so that this is decidable from declared parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .evseq import as_fraction
from .measure_model import INF, SpaceFunction, SpaceModel, distribution, DomainError
from .rearrangement import rearrange


def norm_l1(f: SpaceFunction):
    total = Fraction(0)
    for v, m in distribution(f).items():
        if m == INF:
            return INF
        total += v * m
    return total


def norm_linf(f: SpaceFunction) -> Fraction:
    return max(distribution(f), default=Fraction(0))


def norm_l1_plus_linf(f: SpaceFunction) -> Fraction:
    return rearrange(f).integral(1)


def norm_l1_cap_linf(f: SpaceFunction):
    return max(norm_l1(f), norm_linf(f))


def _power(x: Fraction, p: Fraction):
    if p.denominator == 1:
        return x ** int(p)
    return float(x) ** float(p)


@dataclass(frozen=True)
class OrliczFunction:
    """``Phi(u) = ((u - u0)_+)^p`` with ``p >= 1``.

    ``u0 = 0`` gives the power gauge ``u^p``; ``p = 1`` gives ``max(0, u - u0)``.
    """

    p: Fraction = Fraction(1)
    u0: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        object.__setattr__(self, "u0", as_fraction(self.u0))
        if self.p < 1:
            raise ValueError("Orlicz exponent must be >= 1 for convexity")
        if self.u0 < 0:
            raise ValueError("zero threshold must be nonnegative")

    def __call__(self, u):
        if u == INF:
            return INF
        if isinstance(u, float):
            return max(0.0, u - float(self.u0)) ** float(self.p)
        return _power(max(Fraction(0), u - self.u0), self.p)

    @property
    def zero_threshold(self) -> Fraction:
        return self.u0

    def describe(self) -> str:
        return f"orlicz:p={self.p},u0={self.u0}"


@dataclass(frozen=True)
class LorentzWeight:
    """Concave increasing weight: ``t^gamma`` (``0 < gamma <= 1``) or ``min(t, cap)``."""

    kind: str = "power"
    param: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "param", as_fraction(self.param))
        if self.kind == "power":
            if not 0 < self.param <= 1:
                raise ValueError("Lorentz exponent must lie in (0, 1]")
        elif self.kind == "min":
            if self.param <= 0:
                raise ValueError("Lorentz cap must be positive")
        else:
            raise ValueError(f"unknown Lorentz weight kind {self.kind!r}")

    @classmethod
    def power(cls, gamma) -> LorentzWeight:
        return cls("power", gamma)

    @classmethod
    def capped(cls, cap) -> LorentzWeight:
        return cls("min", cap)

    @property
    def limit_at_infinity(self):
        return INF if self.kind == "power" else self.param

    def __call__(self, t):
        if t == INF:
            return self.limit_at_infinity
        t = as_fraction(t)
        if self.kind == "min":
            return min(t, self.param)
        return _power(t, self.param)

    def describe(self) -> str:
        return f"lorentz:gamma={self.param}" if self.kind == "power" else f"lorentz:cap={self.param}"


def orlicz_modular(f: SpaceFunction, phi: OrliczFunction, a):
    """``int Phi(|f|/a) dmu``; exact when ``a`` is rational and ``p`` integral."""
    total = 0
    for v, m in distribution(f).items():
        x = phi(v / a)
        if x == 0:
            continue
        if m == INF:
            return INF
        total += x * (m if isinstance(x, Fraction) else float(m))
    return total


def luxemburg_norm(f: SpaceFunction, phi: OrliczFunction, tol: float = 1e-9) -> float:
    """``inf{a > 0 : int Phi(|f|/a) dmu <= 1}`` by bracketing and bisection.

    Returns ``math.inf`` when no finite ``a`` works (``f`` is not in ``L^Phi``).
    The result is within relative error ``tol`` of the infimum.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dist = distribution(f)
    if not dist:
        return 0.0
    tail = max((v for v, m in dist.items() if m == INF), default=Fraction(0))
    if tail > 0 and phi.u0 == 0:
        return INF
    # below tail/u0 the modular is infinite
    floor = tail / phi.u0 if tail > 0 else Fraction(0)

    def ok(a: float) -> bool:
        return orlicz_modular(f, phi, Fraction(a)) <= 1

    hi = max(float(floor), float(max(dist)), 1e-300)
    while not ok(hi):
        hi *= 2
    lo = float(floor)
    if lo > 0 and ok(lo):
        return lo
    if lo == 0:
        lo = hi / 2
        while ok(lo):
            hi, lo = lo, lo / 2
    while hi - lo > tol * lo / 4:
        mid = (lo + hi) / 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def lorentz_norm(f: SpaceFunction, weight: LorentzWeight):
    """``int_0^oo mu_t(f) dphi(t)`` summed over the rearrangement steps."""
    total = Fraction(0)
    left = Fraction(0)
    for v, w in rearrange(f).steps:
        if w == INF:
            if weight.limit_at_infinity == INF:
                return INF
            return total + v * (weight.limit_at_infinity - weight(left))
        total = total + v * (weight(left + w) - weight(left))
        left += w
    return total


# -- space catalog ---------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricSpace:
    """Base for catalog entries.

    ``order_continuous`` records whether the norm is order continuous on an
    infinite non-atomic model, when that is known from the parameters; it is
    a documented catalog fact, never computed.  An order continuous norm
    forces ``1`` out of the space.
    """

    name = "space"

    @property
    def order_continuous(self) -> bool | None:
        return None

    def norm(self, f: SpaceFunction, tol: float = 1e-9):
        raise NotImplementedError

    def contains_one(self) -> bool:
        raise NotImplementedError

    def contains(self, f: SpaceFunction, tol: float = 1e-9) -> bool:
        return self.norm(f, tol) != INF


@dataclass(frozen=True)
class L1(SymmetricSpace):
    name = "l1"
    order_continuous = True

    def norm(self, f, tol=1e-9):
        return norm_l1(f)

    def contains_one(self):
        return False


@dataclass(frozen=True)
class Linf(SymmetricSpace):
    name = "linf"
    order_continuous = False

    def norm(self, f, tol=1e-9):
        return norm_linf(f)

    def contains_one(self):
        return True


@dataclass(frozen=True)
class L1CapLinf(SymmetricSpace):
    name = "l1cap"
    order_continuous = False

    def norm(self, f, tol=1e-9):
        return norm_l1_cap_linf(f)

    def contains_one(self):
        return False


@dataclass(frozen=True)
class L1PlusLinf(SymmetricSpace):
    name = "l1plus"
    order_continuous = False

    def norm(self, f, tol=1e-9):
        return norm_l1_plus_linf(f)

    def contains_one(self):
        return True


@dataclass(frozen=True)
class Orlicz(SymmetricSpace):
    phi: OrliczFunction = OrliczFunction()

    @property
    def name(self):
        return self.phi.describe()

    @property
    def order_continuous(self):
        # L^p, p < oo; shifted gauges are left undetermined
        return True if self.phi.u0 == 0 else None

    def norm(self, f, tol=1e-9):
        return luxemburg_norm(f, self.phi, tol)

    def contains_one(self):
        return self.phi.u0 > 0


@dataclass(frozen=True)
class Lorentz(SymmetricSpace):
    weight: LorentzWeight = LorentzWeight()

    @property
    def name(self):
        return self.weight.describe()

    @property
    def order_continuous(self):
        return self.weight.limit_at_infinity == INF

    def norm(self, f, tol=1e-9):
        return lorentz_norm(f, self.weight)

    def contains_one(self):
        return self.weight.limit_at_infinity != INF


def contains_one(space: SymmetricSpace) -> bool:
    """Whether the constant ``1`` of an infinite model lies in ``space``."""
    return space.contains_one()


def has_iet(space: SymmetricSpace, model: SpaceModel | None = None) -> bool:
    """Individual ergodic theorem property on an infinite quasi-non-atomic model."""
    if model is not None and not model.is_infinite:
        raise DomainError("the criterion needs a model of infinite measure")
    return not space.contains_one()


def parse_space(text: str) -> SymmetricSpace:
    """Parse ``l1``, ``linf``, ``l1cap``, ``l1plus``, ``orlicz:p=2,u0=1``, ``lorentz:gamma=1/2``, ``lorentz:cap=1``."""
    text = text.strip()
    simple = {"l1": L1, "linf": Linf, "l1cap": L1CapLinf, "l1plus": L1PlusLinf}
    if text in simple:
        return simple[text]()
    kind, _, rest = text.partition(":")
    try:
        params = dict(item.split("=", 1) for item in rest.split(",") if item)
        if kind == "orlicz":
            unknown = set(params) - {"p", "u0"}
            if unknown:
                raise ValueError(f"unknown Orlicz parameters {sorted(unknown)}")
            return Orlicz(OrliczFunction(params.get("p", "1"), params.get("u0", "0")))
        if kind == "lorentz":
            if set(params) == {"gamma"}:
                return Lorentz(LorentzWeight.power(params["gamma"]))
            if set(params) == {"cap"}:
                return Lorentz(LorentzWeight.capped(params["cap"]))
            raise ValueError("Lorentz spec needs exactly one of gamma=<g> or cap=<c>")
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad space spec {text!r}: {exc}") from exc
    raise DomainError(f"unknown space {text!r}")


CATALOG_EXAMPLES = (
    L1(),
    Linf(),
    L1CapLinf(),
    L1PlusLinf(),
    Orlicz(OrliczFunction(2)),
    Orlicz(OrliczFunction(1, 1)),
    Lorentz(LorentzWeight.power(Fraction(1, 2))),
    Lorentz(LorentzWeight.capped(1)),
)
