import random
from fractions import Fraction

import pytest

from ergodic_lab import (
    BlockExpectation,
    Compose,
    EvSeq,
    IndexSet,
    Lift,
    Loc,
    MultiplierComposition,
    Part,
    SpaceFunction,
    SpaceModel,
    apply,
    averages_at,
    block_expectation,
    ergodic_average,
    lift,
    majorizes,
    norm_l1,
    norm_linf,
    verify_ds,
)
from ergodic_lab.measure_model import DomainError
from ergodic_lab.operators import Identity, Permutation, ShiftAlong, orbit_sums

from oracles import integral_enum, random_function, random_operator

ATOMS = SpaceModel(atom_weight=1)
CELLS = SpaceModel(cells=True)
MIXED = SpaceModel(cells=True, atom_weight=Fraction(1, 2))


def atoms(prefix, period=(0,)):
    return SpaceFunction(ATOMS, atom_values=EvSeq(prefix, period))


SHIFT = MultiplierComposition.shift(Part.ATOM)
E1 = atoms([1])


def test_identity_and_unit_shift():
    f = atoms([3, -1, 2], [1, 0])
    assert apply(MultiplierComposition.identity(Part.ATOM), f) == f
    assert apply(SHIFT, E1) == SpaceFunction.zeros(ATOMS)
    assert apply(SHIFT, atoms([0, 5]))(("atom", 1)) == 5


def test_block_expectation_pairs():
    S = block_expectation(ATOMS, 2)
    assert apply(S, atoms([2, 0])) == atoms([1, 1])
    assert block_expectation(ATOMS, 1).apply(atoms([4, 1], [2, 3])) == atoms([4, 1], [2, 3])
    ones = SpaceFunction.ones(ATOMS)
    assert block_expectation(ATOMS, 5).apply(ones) == ones


def test_block_expectation_periodic_tail():
    S = BlockExpectation(Part.CELL, 3)
    f = SpaceFunction(CELLS, EvSeq([9], [1, 0]))
    g = S.apply(f)
    expected = [sum(f(("cell", j)) for j in range((n - 1) // 3 * 3 + 1, (n - 1) // 3 * 3 + 4)) / 3 for n in range(1, 40)]
    assert [g(("cell", n)) for n in range(1, 40)] == expected


@pytest.mark.parametrize("b", [1, 2, 3, 5])
@pytest.mark.parametrize("seed", range(10))
def test_conditional_expectation_laws(b, seed):
    f = random_function(random.Random(seed), MIXED, zero_tail=True)
    S = BlockExpectation(Part.CELL if seed % 2 else Part.ATOM, b)
    Sf = S.apply(f)
    assert S.apply(Sf) == Sf
    assert integral_enum(Sf) == integral_enum(f)
    assert S.apply(SpaceFunction.ones(MIXED)) == SpaceFunction.ones(MIXED)


def test_block_expectation_needs_equal_weights():
    with pytest.raises(DomainError):
        BlockExpectation(Part.EXCEPTIONAL, 2)
    with pytest.raises(DomainError):
        block_expectation(CELLS, 2, Part.ATOM)


def test_shift_along_sparse_support():
    G = IndexSet(EvSeq([0, 1], [1, 0, 0]))  # 2, 4, 7, 10, ...
    T = MultiplierComposition(Part.CELL, EvSeq.constant(1), ShiftAlong(G))
    f = SpaceFunction(CELLS, EvSeq([], [1, 2, 3, 4, 5]))
    g = T.apply(f)
    for n in range(1, 60):
        expected = f(("cell", G.successor(n))) if n in G else f(("cell", n))
        assert g(("cell", n)) == expected


def test_permutation_and_exceptional_part():
    sp = SpaceModel(exceptional=(1, 1, 2))
    f = SpaceFunction(sp, exceptional_values=(5, 6, 7))
    T = MultiplierComposition(Part.EXCEPTIONAL, (1, Fraction(-1, 2), 1), Permutation(((1, 2), (2, 1))))
    assert T.apply(f).exceptional_values == (6, Fraction(-5, 2), 7)
    bad = MultiplierComposition(Part.EXCEPTIONAL, (), Permutation(((1, 3), (3, 1))))
    with pytest.raises(DomainError):
        bad.apply(f)  # would swap atoms of different weight
    with pytest.raises(DomainError):
        Permutation(((1, 2), (2, 3)))


def test_multiplier_bound_enforced():
    with pytest.raises(DomainError):
        MultiplierComposition(Part.ATOM, EvSeq([2], [1]))


def test_verify_ds_reports():
    samples = [atoms([3, -1]), SpaceFunction.ones(ATOMS), atoms([], [1, -2])]
    assert verify_ds(MultiplierComposition.identity(Part.ATOM), samples).ok
    broken = MultiplierComposition.unchecked(Part.ATOM, EvSeq.constant(2))
    report = verify_ds(broken, samples)
    assert not report.ok
    linf = [v for v in report.violations if v.check == "linf"]
    assert len(linf) == len(samples)
    assert linf[0].lhs == 2 * linf[0].rhs


@pytest.mark.parametrize("seed", range(40))
def test_library_operators_are_ds(seed):
    rng = random.Random(seed)
    sp = rng.choice([ATOMS, CELLS, MIXED, SpaceModel(cells=True, exceptional=(1, 1, 2))])
    T = random_operator(rng, sp)
    samples = [random_function(rng, sp) for _ in range(6)]
    report = verify_ds(T, samples)
    assert report.ok, report.violations
    for f in samples:
        Tf = T.apply(f)
        assert norm_linf(Tf) <= norm_linf(f)
        assert norm_l1(Tf) <= norm_l1(f)
        assert majorizes(f, Tf)


def test_ergodic_average_basics():
    f = atoms([2, -1], [1, 3])
    assert ergodic_average(SHIFT, f, 1) == f
    for n in range(1, 12):
        assert ergodic_average(SHIFT, E1, n)(("atom", 1)) == Fraction(1, n)
    with pytest.raises(ValueError):
        ergodic_average(SHIFT, f, 0)


@pytest.mark.parametrize("seed", range(5))
def test_block_expectation_average_closed_form(seed):
    f = random_function(random.Random(seed), ATOMS)
    S = BlockExpectation(Part.ATOM, 3)
    Sf = S.apply(f)
    for n in range(1, 11):
        assert ergodic_average(S, f, n) == (f + Sf.scale(n - 1)).scale(Fraction(1, n))


@pytest.mark.parametrize("seed", range(20))
def test_averages_at_matches_iterated_apply(seed):
    rng = random.Random(seed)
    sp = rng.choice([ATOMS, CELLS, MIXED])
    T = random_operator(rng, sp)
    f = random_function(rng, sp)
    loc = Loc(rng.choice(sp.parts), rng.randint(1, 12))
    ns = list(range(1, 65))
    trace = averages_at(T, f, loc, ns)
    acc, term = f, f
    for n in ns:
        assert trace[n - 1] == acc.scale(Fraction(1, n))(loc)
        term = T.apply(term)
        acc = acc + term


@pytest.mark.parametrize("seed", range(10))
def test_averages_are_linear(seed):
    rng = random.Random(seed)
    T = random_operator(rng, MIXED)
    f, g = random_function(rng, MIXED), random_function(rng, MIXED)
    n = rng.randint(1, 8)
    assert ergodic_average(T, f + g, n) == ergodic_average(T, f, n) + ergodic_average(T, g, n)


def test_averages_at_validates_ns():
    with pytest.raises(ValueError):
        averages_at(SHIFT, E1, ("atom", 1), [3, 2])
    assert averages_at(SHIFT, E1, ("atom", 1), []) == []
    sums = list(orbit_sums(SHIFT, atoms([1, 1, 1]), ("atom", 1), 4))
    assert sums == [(1, 1), (2, 2), (3, 3), (4, 3)]


def test_lift_restricts_to_part():
    f = SpaceFunction.build(MIXED, cells=EvSeq([4], [1]), atoms=EvSeq([2], [3]))
    L = lift(MultiplierComposition.identity(Part.ATOM), Part.ATOM)
    e = f.restrict(Part.ATOM)
    for n in range(1, 6):
        assert ergodic_average(L, f, n) == (f + e.scale(n - 1)).scale(Fraction(1, n))
        assert ergodic_average(L, f, n)(("atom", 3)) == e(("atom", 3))
    off = f.restrict(Part.CELL)
    assert L.apply(off) == SpaceFunction.zeros(MIXED)


def test_compose_order():
    S = BlockExpectation(Part.ATOM, 2)
    T = Compose(SHIFT, S)
    f = atoms([4, 0, 2, 6])
    assert T.apply(f) == SHIFT.apply(S.apply(f))
    assert (SHIFT @ S).apply(f) == T.apply(f)
    assert averages_at(T, f, ("atom", 1), [2]) == [(f(("atom", 1)) + T.apply(f)(("atom", 1))) / 2]


def test_identity_tau_default():
    T = MultiplierComposition(Part.ATOM, EvSeq([], [1, Fraction(-1, 2)]))
    assert isinstance(T.tau, Identity)
    assert T.apply(atoms([], [2]))(("atom", 2)) == -1


def test_shift_average_gap_is_bounded_by_mass_not_sup():
    # five unit atoms: the gap at n = 5 is 1/2, above 2||f||_oo/n = 2/5
    f = atoms([1, 1, 1, 1, 1])
    a5, a10 = averages_at(SHIFT, f, ("atom", 1), [5, 10])
    assert abs(a10 - a5) == Fraction(1, 2) > Fraction(2, 5)
    # the bound that always holds for a finitely supported f is ||f||_1 / (2 w n)
    for seed in range(10):
        g = random_function(random.Random(seed), ATOMS, zero_tail=True)
        trace = averages_at(SHIFT, g, ("atom", 2), range(1, 65))
        for n in range(1, 33):
            assert abs(trace[2 * n - 1] - trace[n - 1]) <= norm_l1(g) / (2 * n)
