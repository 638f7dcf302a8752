import pytest
from hypothesis import example, given, strategies as st

from conftest import pctf
from oracles import brute_members, in_group, in_rational_cone, seminormal_members
from pctfkit.monoid import (
    AffineMonoid, Ideal, PctfMonoid, eventually_in, ideal_eq, make_ideal, radical, same_monoid,
)
from pctfkit.saturation import (
    NotFinite, conductor, group_completion, is_normal, is_seminormal, module_generators,
    normalize, seminormalize, seminormalize_pctf,
)

CUSP = AffineMonoid(1, ((2,), (3,)))
SN_PLANE = AffineMonoid(2, ((2, 0), (1, 1), (0, 2), (2, 1), (1, 2)))
N1 = AffineMonoid(1, ((1,),))
N2 = AffineMonoid(2, ((1, 0), (0, 1)))

small_vec = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any)


def test_group_completion_examples():
    assert group_completion(CUSP).basis == ((1,),)
    L = group_completion(AffineMonoid(2, ((2, 0), (0, 2))))
    assert L.rank == 2 and not L.contains((1, 0)) and L.contains((2, -4))
    assert group_completion(N2).rank == 2


def test_normalize_examples():
    assert normalize(CUSP).generators == ((1,),)
    assert same_monoid(normalize(SN_PLANE).monoid, N2)
    assert normalize(N2).generators == N2.generators
    assert is_normal(normalize(SN_PLANE).monoid)


def test_seminormalize_examples():
    assert same_monoid(seminormalize(CUSP).monoid, N1)
    res = seminormalize(SN_PLANE)
    assert same_monoid(res.monoid, SN_PLANE) and res.certified and not res.witnesses
    M = seminormalize(AffineMonoid(2, ((2, 0), (3, 0), (0, 1)))).monoid
    assert same_monoid(M, N2)


def test_seminormalize_cusp_witness():
    res = seminormalize(CUSP)
    assert res.witnesses == ({"element": [1], "double": [2], "triple": [3]},)


def test_predicates():
    assert is_seminormal(SN_PLANE) and not is_normal(SN_PLANE)
    assert not is_seminormal(CUSP) and not is_normal(CUSP)
    assert is_seminormal(N2) and is_normal(N2)


def test_seminormalize_pctf_examples():
    A = seminormalize_pctf(pctf(1, [(2,), (3,)], [(6,)]))
    assert same_monoid(A.carrier, N1)
    assert A.ideal.generators == ((1,),)
    B = pctf(2, [(1, 0), (0, 1)], [(1, 1)])
    assert seminormalize_pctf(B) == B
    M = pctf(1, [(2,), (3,)], [(2,), (3,)])
    Msn = seminormalize_pctf(M)
    assert Msn.ideal.generators == ((1,),)


def test_conductor_examples():
    res = conductor(SN_PLANE, N2)
    assert not res.improper and res.certified
    assert sorted(res.ideal.generators) == [(1, 1), (1, 2), (2, 1)]
    res = conductor(CUSP, N1)
    assert ideal_eq(CUSP, res.ideal, make_ideal(CUSP, [(2,), (3,)]))
    assert conductor(N2, N2).improper


def test_conductor_is_radical_for_seminormal(monoids):
    for name, A in monoids.items():
        C = A.carrier
        if A.collapsed or C.lineality or A.ideal.generators or not is_seminormal(C):
            continue
        B = normalize(C).monoid
        res = conductor(C, B)
        if res.improper:
            continue
        assert ideal_eq(C, radical(PctfMonoid(C, Ideal()), res.ideal), res.ideal), name
        IB = make_ideal(B, res.ideal.generators)
        assert ideal_eq(B, radical(PctfMonoid(B, Ideal()), IB), IB), name


def test_conductor_needs_finite_extension():
    with pytest.raises(NotFinite):
        module_generators(AffineMonoid(2, ((1, 0),)), N2)


@given(st.lists(small_vec, min_size=1, max_size=4, unique=True))
@example([(0, 2), (1, 1), (1, 2), (2, 0)])
@example([(0, 1), (1, 3), (2, 0), (3, 3)])
def test_seminormalization_matches_face_criterion(gens):
    C = AffineMonoid(2, tuple(gens))
    S = seminormalize(C).monoid
    expected = seminormal_members(gens, 4)
    got = {(x, y) for x in range(-4, 5) for y in range(-4, 5) if S.contains((x, y))}
    assert got == expected


@given(st.lists(small_vec, min_size=1, max_size=4, unique=True))
def test_normalization_is_saturation(gens):
    C = AffineMonoid(2, tuple(gens))
    N = normalize(C).monoid
    for x in range(0, 7):
        for y in range(0, 7):
            v = (x, y)
            expected = in_rational_cone(gens, v) and in_group(gens, v)
            assert N.contains(v) == expected


@given(st.lists(small_vec, min_size=1, max_size=4, unique=True))
def test_chain_inclusion_and_idempotence(gens):
    C = AffineMonoid(2, tuple(gens))
    S = seminormalize(C).monoid
    N = normalize(C).monoid
    assert all(S.contains(g) for g in C.generators)
    assert all(N.contains(g) for g in S.generators)
    assert same_monoid(seminormalize(S).monoid, S)
    assert same_monoid(normalize(N).monoid, N)
    assert is_seminormal(S) and is_normal(N)


def _closure_by_definition(gens, radius):
    """Fixpoint of "2z and 3z present implies z present", by brute enumeration in a box."""
    bound = 6 * radius
    gens = list(gens)
    while True:
        members = brute_members(gens, bound)
        new = [(x, y) for x in range(-2 * radius, 2 * radius + 1)
               for y in range(-2 * radius, 2 * radius + 1)
               if (x, y) not in members and (2 * x, 2 * y) in members and (3 * x, 3 * y) in members]
        if not new:
            return {v for v in members if max(abs(v[0]), abs(v[1])) <= radius}
        gens.extend(new)


@pytest.mark.parametrize("gens", [
    [(2,), (3,)], [(3,), (5,)], [(2, 0), (3, 0), (0, 1)], [(2, 0), (1, 1), (0, 2), (2, 1), (1, 2)],
    [(2, 0), (3, 0), (0, 2), (0, 3)], [(1, 0), (1, 2), (2, 3)],
])
def test_closure_algorithm_matches_definition(gens):
    n = len(gens[0])
    if n == 1:
        gens2 = [(g[0], 0) for g in gens]
    else:
        gens2 = gens
    expected = _closure_by_definition(gens2, 3)
    S = seminormalize(AffineMonoid(2, tuple(gens2))).monoid
    got = {(x, y) for x in range(-3, 4) for y in range(-3, 4) if S.contains((x, y))}
    assert got == expected


def test_finiteness_module_generators():
    xs = module_generators(CUSP, N1)
    assert sorted(xs) == [(0,), (1,)]
    xs = module_generators(SN_PLANE, N2)
    for v in [(a, b) for a in range(6) for b in range(6)]:
        assert any(SN_PLANE.contains((v[0] - x[0], v[1] - x[1])) for x in xs)


def test_dilation_collapse(monoids):
    for name, A in monoids.items():
        if A.collapsed:
            continue
        S = seminormalize(A.carrier).monoid
        for h in S.generators:
            assert eventually_in(A, (2, 2, 2, 2), h) is not None, (name, h)
