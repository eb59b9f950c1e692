import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normset.core import (ANY, EMPTY, Avg, AvgClass, FinVec, Leaf, Sch, SchClass, SpaceSpec, evaluate,
                          format_tree, in_class, validate)
from normset.engine import (Engine, ResourceLimit, best_value, brute_force, brute_force_best,
                            brute_force_norm, enumerate_functionals, norm)

SIGMA = FinVec.flat(range(3, 16))
VARIANTS = [
    SpaceSpec(),
    SpaceSpec(theta=1),
    SpaceSpec(enforce_admissible=False),
    SpaceSpec(enforce_vfg=False),
    SpaceSpec(theta=Fraction(1, 3)),
]


def certified(res, x, spec=SpaceSpec(), cls=ANY):
    return validate(res.witness, spec).ok and in_class(res.witness, cls) and \
        evaluate(res.witness, x, spec) == res.value


def test_norm_of_basis_vector():
    res = norm(FinVec.basis(7))
    assert res.value == 1
    assert res.witness == Leaf(7)


def test_norm_of_two_ones():
    x = FinVec.flat([1, 2])
    assert norm(x).value == 1
    assert brute_force_norm(x, depth_cap=4, size_cap=4) == 1


def test_three_halves():
    res = norm(SIGMA)
    assert res.value == Fraction(3, 2)
    assert certified(res, SIGMA)
    assert format_tree(res.witness).startswith("S(A(1; L(3,+)), A(4; L(4,+)")


def test_empty_vector():
    res = norm(FinVec())
    assert res.value == 0 and res.witness is EMPTY
    with pytest.raises(ValueError):
        best_value(FinVec(), cls=SchClass(1, 1))


def test_best_value_examples():
    res = best_value(FinVec.basis(5), cls=SchClass(2, 1))
    assert res.value == Fraction(1, 4)
    assert res.witness == Sch((Avg(2, (Leaf(5),)),))
    for s in (1, 2, 3, 5, 9):
        for n in (1, 2, 4, float("inf")):
            assert best_value(FinVec.basis(5), cls=SchClass(s, n)).value <= Fraction(1, 2 * s)
    res = best_value(SIGMA, cls=SchClass(1, 3))
    assert res.value == Fraction(3, 2) and certified(res, SIGMA, cls=SchClass(1, 3))


def test_empty_schreier_class_rejected():
    with pytest.raises(ValueError):
        best_value(FinVec.basis(5), cls=SchClass(1, 0))


def test_best_value_any_is_norm():
    x = FinVec({2: 1, 3: Fraction(-1, 2), 5: 1, 6: 1})
    assert best_value(x, cls=ANY).value == norm(x).value


def test_negation_and_signs():
    x = FinVec({1: 1, 4: Fraction(-2, 3), 5: Fraction(1, 2), 7: 3})
    assert norm(x.scale(-1)).value == norm(x).value
    res = norm(x.flip([4, 7]))
    assert certified(res, x.flip([4, 7]))


def test_resource_guard():
    with pytest.raises(ResourceLimit):
        norm(SIGMA, budget=50)
    with pytest.raises(ResourceLimit):
        brute_force(FinVec.flat(range(1, 8)), node_budget=100)


def test_stats_are_deterministic():
    a, b = norm(SIGMA), norm(SIGMA)
    assert a.stats.to_dict(False) == b.stats.to_dict(False)
    assert "wall_time" not in a.stats.to_dict(False)
    assert "wall_time" in a.stats.to_dict(True)
    assert a.witness == b.witness


def test_engine_cache_does_not_change_answers():
    xs = [FinVec({i: Fraction(1, i) for i in range(1, k)}) for k in range(2, 9)]
    classes = [ANY, AvgClass(2), SchClass(2, 2), SchClass(1, 3)]
    queries = [(x, c) for x in xs for c in classes]
    e1, e2 = Engine(), Engine(max_cached=2)
    first = {q: e1.best(*q) for q in queries}
    second = {q: e2.best(*q) for q in reversed(queries)}
    assert first == second


def test_certifying_engine_counts(engine):
    before = engine.certified
    engine.norm(SIGMA)
    assert engine.certified > before and not engine.failures


def test_size_cap_is_a_lower_bound():
    x = FinVec.flat(range(3, 12))
    assert norm(x, size_cap=4).value <= norm(x).value


# -- oracle ---------------------------------------------------------------------------


def test_oracle_depth_one_size_one_is_sup_norm():
    rng = random.Random(1)
    for _ in range(20):
        x = FinVec({i: Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for i in range(1, 6)})
        if x:
            assert brute_force_norm(x, depth_cap=1, size_cap=1) == x.sup_norm()


def test_oracle_monotone_in_caps():
    rng = random.Random(2)
    for _ in range(20):
        x = FinVec({i: Fraction(rng.randint(0, 3), rng.randint(1, 3)) for i in range(1, 6)})
        if not x:
            continue
        vals = [brute_force_norm(x, depth_cap=d, size_cap=4) for d in range(1, 5)]
        assert vals == sorted(vals)
        sizes = [brute_force_norm(x, depth_cap=3, size_cap=s) for s in range(1, 5)]
        assert sizes == sorted(sizes)


def test_oracle_reaches_fixpoint_and_witness():
    res = brute_force(FinVec({1: 1, 2: 1, 3: Fraction(1, 2), 4: 1, 5: 1}))
    assert res.fixpoint
    assert validate(res.witness).ok
    assert evaluate(res.witness, FinVec({1: 1, 2: 1, 3: Fraction(1, 2), 4: 1, 5: 1})) == res.value


@pytest.mark.parametrize("pts,depth,size", [((1, 2), 2, 2), ((1, 2, 3), 1, 3), ((1, 2, 3), 2, 2),
                                            ((2, 3, 4), 2, 2)])
def test_literal_enumeration_matches_oracle(pts, depth, size):
    fs = enumerate_functionals(pts, depth_cap=depth, size_cap=size, node_budget=300_000)
    assert all(validate(f).ok for f in fs)
    for c in itertools.product([0, 1, Fraction(1, 2), Fraction(1, 3)], repeat=len(pts)):
        x = FinVec({p: v for p, v in zip(pts, c) if v})
        if x:
            top = max(evaluate(f, x) for f in fs)
            assert top == brute_force_norm(x, depth_cap=depth, size_cap=size)


def test_exhaustive_small_supports_match_oracle():
    for c in itertools.product([0, 1, Fraction(1, 2)], repeat=5):
        x = FinVec({i + 1: v for i, v in enumerate(c) if v})
        if not x:
            continue
        res = norm(x, size_cap=8)
        ref = brute_force(x, depth_cap=6, size_cap=8)
        assert ref.fixpoint
        assert res.value == ref.value
        assert certified(res, x)


pos = st.sampled_from([Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2)])


@settings(max_examples=40)
@given(st.lists(pos, min_size=1, max_size=6), st.sampled_from(VARIANTS))
def test_variants_match_oracle(coeffs, spec):
    x = FinVec({i + 1: c for i, c in enumerate(coeffs) if c})
    if not x:
        return
    res = norm(x, spec, size_cap=6)
    ref = brute_force(x, spec, depth_cap=8, size_cap=6, node_budget=None)
    assert ref.fixpoint
    assert res.value == ref.value
    assert certified(res, x, spec)


CLASSES = [AvgClass(1), AvgClass(2), AvgClass(4), SchClass(1, 1), SchClass(1, 2), SchClass(2, 2),
           SchClass(3, float("inf")), SchClass(1, float("inf"))]


@settings(max_examples=40)
@given(st.lists(pos, min_size=1, max_size=6), st.sampled_from(CLASSES))
def test_classes_match_oracle(coeffs, cls):
    x = FinVec({i + 1: c for i, c in enumerate(coeffs) if c})
    if not x:
        return
    res = best_value(x, cls=cls, size_cap=6)
    ref = brute_force_best(x, cls, depth_cap=7, size_cap=6, node_budget=None)
    assert res.value == ref.value
    assert certified(res, x, cls=cls)


# -- properties ---------------------------------------------------------------------------

rats = st.fractions(min_value=-3, max_value=3, max_denominator=4)
vecs = st.dictionaries(st.integers(1, 9), rats, max_size=7).map(FinVec)


@given(vecs, rats)
def test_homogeneity(x, a):
    assert norm(x.scale(a)).value == abs(a) * norm(x).value


@given(vecs, st.sets(st.integers(1, 9)))
def test_unconditional(x, flips):
    assert norm(x.flip(flips)).value == norm(x).value


@given(vecs, st.sets(st.integers(1, 9)))
def test_restriction_monotone(x, e):
    assert norm(x.restrict(e)).value <= norm(x).value


@given(vecs, vecs)
def test_triangle_and_coordinate_bounds(x, y):
    nx = norm(x).value
    assert x.sup_norm() <= nx <= x.l1_norm()
    assert norm(x + y).value <= nx + norm(y).value


@given(vecs)
def test_witness_sizes_stay_small(x):
    """Declared sizes never exceed max supp + |supp| (observed bound, asserted here)."""
    res = norm(x)
    assert certified(res, x)
    bound = x.max_supp + len(x.support)

    def sizes(f):
        if isinstance(f, Avg):
            yield f.size
        for c in getattr(f, "children", ()):
            yield from sizes(c)

    assert all(s <= bound for s in sizes(res.witness))
