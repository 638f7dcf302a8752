from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import pctf
from oracles import brute_members
from pctfkit.monoid import ZERO, NoPositiveGrading, PctfMonoid, make_ideal
from pctfkit.nerve import (
    alpha_map, delta, delta_r_check, fixed_points, mu_map, ncy_component, ncy_slice,
    omega_decomposition, subdivide, theta_map, torus_counts, unit_lattice,
)
from pctfkit.polyhedra import CapExceeded

LINE = pctf(1, [(1,)])
CUSP = pctf(1, [(2,), (3,)])
F2 = pctf(2, [(1, 0), (0, 1)])
F3 = pctf(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
AXES = pctf(2, [(1, 0), (0, 1)], [(1, 1)])
SN_PLANE = pctf(2, [(2, 0), (1, 1), (0, 2), (2, 1), (1, 2)])


def brute_component(gens, a, D):
    """Nondegenerate tuples ``(a_0, ..., a_n)`` of monoid elements summing to ``a``."""
    n = len(a)
    members = brute_members(gens, max(a))
    divisors = [m for m in members if all(0 <= x <= y for x, y in zip(m, a))]
    out = []
    for k in range(D + 1):
        layer = set()
        for t in product(divisors, repeat=k + 1):
            if any(not any(x) for x in t[1:]):
                continue
            if tuple(sum(x[j] for x in t) for j in range(n)) == tuple(a):
                layer.add(t)
        out.append(layer)
    return out


# -- enumeration -------------------------------------------------------------


def test_line_weight_two():
    s = ncy_slice(LINE, (1,), 2, 3)
    assert s.counts() == [1, 2, 1, 0]
    assert set(s.simplices[1]) == {((1,), (1,)), ((0,), (2,))}
    assert s.simplices[2] == (((0,), (1,), (1,)),)
    assert s.complete


def test_weight_zero_is_identity_only():
    for A in (LINE, CUSP, F2):
        assert ncy_slice(A, None, 0, 3).counts() == [1, 0, 0, 0]


def test_cusp_counts():
    assert ncy_slice(CUSP, (1,), 6, 3).counts() == [1, 4, 4, 1]


# frozen from the exhaustive tuple enumeration in ``brute_component``/by hand
@pytest.mark.parametrize("w,counts", [
    (6, [1, 4, 4, 1]), (12, [1, 10, 37, 63]), (24, [1, 22, 211, 1159]),
])
def test_cusp_counts_frozen(w, counts):
    assert ncy_slice(CUSP, (1,), w, 3).counts() == counts


def test_natural_weight_matches_brute_enumeration():
    for w in (5, 6, 7, 9):
        got = [set(layer) for layer in ncy_slice(CUSP, (1,), w, 3).simplices]
        assert got == brute_component([(2,), (3,)], (w,), 3)


def test_slice_includes_tuples_hitting_the_ideal():
    A = pctf(1, [(2,), (3,)], [(6,)])
    s = ncy_slice(A, (1,), 6, 3)
    # entries must be nonzero (6 itself is not), products may be zero
    assert s.counts() == [0, 3, 4, 1]
    # degree-one faces multiply to 6, the basepoint
    for x in s.simplices[1]:
        assert s.face(0, x) is ZERO and s.face(1, x) is ZERO


def test_component_free_monoid():
    s = ncy_component(F2, (1, 1), 3)
    assert set(s.simplices[1]) == {((0, 0), (1, 1)), ((0, 1), (1, 0)), ((1, 0), (0, 1))}


@pytest.mark.parametrize("A,gens,a", [
    (F2, [(1, 0), (0, 1)], (2, 1)),
    (F3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], (1, 1, 1)),
    (SN_PLANE, [(2, 0), (1, 1), (0, 2), (2, 1), (1, 2)], (3, 3)),
])
def test_component_matches_brute_enumeration(A, gens, a):
    got = [set(layer) for layer in ncy_component(A, a, 3).simplices]
    assert got == brute_component(gens, a, 3)


def test_component_equals_cancellative_cover():
    s = ncy_component(AXES, (2, 0), 4)
    t = ncy_component(F2, (2, 0), 4)
    assert s.simplices == t.simplices


def test_component_errors():
    with pytest.raises(ValueError):
        ncy_component(AXES, (1, 1), 2)
    with pytest.raises(ValueError):
        ncy_component(LINE, ZERO, 2)
    with pytest.raises(NoPositiveGrading):
        ncy_slice(pctf(2, [(1, 0), (-1, 0), (0, 1)]), None, 2, 2)


def test_budget():
    with pytest.raises(CapExceeded):
        ncy_slice(CUSP, (1,), 24, 3, budget=100)


# -- simplicial and cyclic identities ---------------------------------------


def _slices():
    return [ncy_slice(CUSP, (1,), 9, 4), ncy_component(F2, (2, 1), 4),
            ncy_slice(pctf(1, [(2,), (3,)], [(5,)]), (1,), 7, 4), ncy_component(SN_PLANE, (3, 2), 4)]


@pytest.mark.parametrize("idx", range(4))
def test_simplicial_identities(idx):
    s = _slices()[idx]
    for n in range(2, s.max_degree + 1):
        for x in s.simplices[n]:
            for j in range(n + 1):
                for i in range(j):
                    a = s.face(j, x)
                    a = ZERO if a is ZERO else s.face(i, a)
                    b = s.face(i, x)
                    b = ZERO if b is ZERO else s.face(j - 1, b)
                    assert a == b


@pytest.mark.parametrize("idx", range(4))
def test_cyclic_identities(idx):
    s = _slices()[idx]
    for n in range(1, s.max_degree + 1):
        for x in s.simplices[n]:
            y = x
            for _ in range(n + 1):
                y = s.cyclic(y)
            assert y == x
            # d_i t = t d_{i-1} for 1 <= i <= n, and d_0 t = d_n
            tx = s.cyclic(x)
            assert s.face(0, tx) == s.face(n, x)
            for i in range(1, n + 1):
                lhs = s.face(i, tx)
                rhs = s.face(i - 1, x)
                assert lhs == (ZERO if rhs is ZERO else s.cyclic(rhs))


def test_faces_preserve_weight():
    s = ncy_slice(CUSP, (1,), 9, 4)
    for n in range(1, 5):
        for x in s.simplices[n]:
            for i in range(n + 1):
                y = s.face(i, x)
                assert sum(a[0] for a in y) == 9


# -- subdivision and δ_r -----------------------------------------------------


def test_subdivision_line():
    s = ncy_component(LINE, (2,), 3)
    sd = subdivide(s, 2)
    assert sd.base_degree_count(0) == 2
    assert len(sd.simplices[0]) == 3
    fx = fixed_points(sd, 2)
    assert fx.simplices[0] == (((1,), (1,)),)


def test_subdivision_identity():
    s = ncy_component(LINE, (3,), 3)
    sd = subdivide(s, 1)
    assert [set(layer) for layer in sd.simplices] == [set(layer) for layer in s.simplices]


def test_fixed_points_of_non_power_weight_are_empty():
    s = ncy_component(LINE, (3,), 4)
    fx = fixed_points(subdivide(s, 2), 2)
    assert all(len(layer) == 0 for layer in fx.simplices)


def test_fixed_points_needs_divisor():
    sd = subdivide(ncy_component(LINE, (2,), 2), 2)
    with pytest.raises(ValueError):
        fixed_points(sd, 3)


@pytest.mark.parametrize("A,a,r", [(LINE, (1,), 2), (LINE, (1,), 3), (CUSP, (3,), 2),
                                   (F2, (1, 1), 2), (LINE, (2,), 1)])
def test_delta_r(A, a, r):
    assert delta_r_check(A, a, r, 3)


def test_delta_is_row_repetition():
    assert delta(((0,), (1,)), 3) == ((0,), (1,)) * 3


def test_subdivision_faces_stay_in_slice():
    sd = subdivide(ncy_component(CUSP, (6,), 2), 2)
    for n in range(1, 3):
        for x in sd.simplices[n]:
            for i in range(n + 1):
                y = sd.face(i, x)
                if y is not ZERO and not sd.is_degenerate(y):
                    assert y in sd.index[n - 1]


# -- maps --------------------------------------------------------------------


def test_theta_examples():
    s = ncy_component(LINE, (1,), 2)
    f = theta_map(s, 2)
    assert f(((1,),)) == ((2,),)
    assert f.check_simplicial()
    s6 = ncy_slice(CUSP, (1,), 6, 3)
    f = theta_map(s6, 2)
    assert f.target.weight == 12
    for layer in s6.simplices:
        for x in layer:
            assert f(x) == tuple((2 * a[0],) for a in x)


def test_theta_composite():
    s = ncy_component(CUSP, (5,), 3)
    f2 = theta_map(s, 2)
    f3 = theta_map(f2.target, 3)
    f6 = theta_map(s, 6)
    for layer in s.simplices:
        for x in layer:
            assert f3(f2(x)) == f6(x)


def test_theta_kills_ideal_weights():
    A = pctf(1, [(2,), (3,)], [(10,)])
    s = ncy_slice(A, (1,), 5, 2)
    f = theta_map(s, 2)
    assert f(((5,),)) is ZERO
    assert f.check_simplicial()


def test_alpha_and_mu_are_simplicial():
    s = ncy_component(LINE, (2,), 3)
    assert alpha_map(s, 2).check_simplicial()
    sd = subdivide(ncy_component(LINE, (2,), 3), 2)
    m = mu_map(sd)
    for n in range(1, 3):
        for x in sd.simplices[n]:
            fx = m(x)
            for i in range(n + 1):
                y = sd.face(i, x)
                lhs = ZERO if y is ZERO else m(y)
                rhs = ZERO if fx is ZERO else sd.base.face(i, fx)
                assert lhs == rhs


# -- unit lattices -----------------------------------------------------------


def test_unit_lattice_examples():
    assert unit_lattice(CUSP, (2,)).rank == 1
    assert unit_lattice(F2, (1, 1)).rank == 2
    assert unit_lattice(F2, (0, 0)).rank == 0
    assert unit_lattice(SN_PLANE, (1, 1)).rank == 2
    assert unit_lattice(SN_PLANE, (2, 0)).rank == 1
    with pytest.raises(ValueError):
        unit_lattice(pctf(1, [(1,)], [(2,)]), (1,))


@given(st.tuples(st.integers(0, 4), st.integers(0, 4)))
def test_unit_lattice_rank_is_face_dimension(a):
    C = SN_PLANE.carrier
    if not C.contains(a):
        return
    F = C.face_of(a)
    from oracles import rank_q
    expected = rank_q([C.generators[i] for i in F.indices]) if F.indices else 0
    assert unit_lattice(SN_PLANE, a).rank == expected


def test_omega_decomposition_examples():
    C = SN_PLANE.carrier
    I = make_ideal(C, [(1, 1), (2, 1), (1, 2)])
    dec = omega_decomposition(SN_PLANE, I, 6)
    assert dec and all(I.contains(C, a) for a, _ in dec)
    assert all(comp.rank == 2 for _, comp in dec)
    dec = omega_decomposition(CUSP, make_ideal(CUSP.carrier, [(2,), (3,)]), 5)
    assert [a for a, _ in dec] == [(1,), (2,), (3,), (4,), (5,)]
    assert omega_decomposition(CUSP, (), 5) == []


def test_torus_counts():
    assert torus_counts(2, 3) == [1, 2, 1, 0]
    assert torus_counts(3, 2) == [1, 3, 3]


def test_zero_monoid_slice():
    Z = PctfMonoid.zero(1)
    assert ncy_slice(Z, (1,), 3, 2).counts() == [0, 0, 0]


def _unnormalized(counts, n):
    """All tuples in degree ``n``: place identities in any of the slots ``1..n``."""
    from math import comb
    return sum(comb(n, k) * counts[k] for k in range(min(n, len(counts) - 1) + 1))


def test_smash_decomposition_counts():
    D = 4
    for i in range(0, 3):
        for j in range(0, 3):
            if i + j == 0:
                continue
            both = ncy_component(F2, (i, j), D).counts()
            left = ncy_component(LINE, (i,), D).counts() if i else [1] + [0] * D
            right = ncy_component(LINE, (j,), D).counts() if j else [1] + [0] * D
            for n in range(D + 1):
                assert _unnormalized(both, n) == _unnormalized(left, n) * _unnormalized(right, n)
    # the total-weight slice is the convolution over the two factors
    for w in range(1, 4):
        total = ncy_slice(F2, (1, 1), w, D).counts()
        for n in range(D + 1):
            conv = 0
            for i in range(w + 1):
                left = ncy_component(LINE, (i,), D).counts() if i else [1] + [0] * D
                right = ncy_component(LINE, (w - i,), D).counts() if w - i else [1] + [0] * D
                conv += _unnormalized(left, n) * _unnormalized(right, n)
            assert _unnormalized(total, n) == conv
