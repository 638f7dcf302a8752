"""Rational polyhedral cones described by finitely many integer generators.

Facets are found by brute force over (d-1)-subsets of generators, which is
fine for the handful of generators we deal with.  Faces are recorded as
frozensets of generator indices.
"""

from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor

from .intlinalg import (
    dot, primitive, lattice_basis, right_kernel, solve_integer, rank, transpose, vadd,
    vscale,
)


class CapExceeded(RuntimeError):
    """Raised when an enumeration would exceed a configured bound."""


def facets(gens):
    """Primitive inward facet normals of ``cone(gens)``, taken inside ``span(gens)``.

    Returns an empty list when the cone is a linear subspace.
    """
    gens = [tuple(g) for g in gens]
    if not gens:
        return []
    basis = lattice_basis(gens)
    d = len(basis)
    if d == 0:
        return []
    found = set()
    for S in combinations(range(len(gens)), d - 1):
        sub = [gens[i] for i in S]
        if d > 1 and rank(sub) != d - 1:
            continue
        K = [tuple(dot(s, b) for b in basis) for s in sub]
        ker = right_kernel(K, d)
        if len(ker) != 1:
            continue
        c = ker[0]
        y = [0] * len(gens[0])
        for ci, b in zip(c, basis):
            for j, bj in enumerate(b):
                y[j] += ci * bj
        y = primitive(tuple(y))
        vals = [dot(y, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            y = tuple(-a for a in y)
        else:
            continue
        if any(dot(y, g) != 0 for g in gens):
            found.add(y)
    return sorted(found)


def faces(gens, normals=None):
    """All faces of ``cone(gens)`` as frozensets of generator indices."""
    if normals is None:
        normals = facets(gens)
    full = frozenset(range(len(gens)))
    zero_sets = [frozenset(i for i, g in enumerate(gens) if dot(y, g) == 0) for y in normals]
    seen = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for F in frontier:
            for Z in zero_sets:
                G = F & Z
                if G not in seen:
                    seen.add(G)
                    nxt.append(G)
        frontier = nxt
    return sorted(seen, key=lambda F: (len(F), sorted(F)))


def lineality_indices(gens, normals=None):
    if normals is None:
        normals = facets(gens)
    return frozenset(i for i, g in enumerate(gens) if all(dot(y, g) == 0 for y in normals))


def in_cone(v, normals, span_basis):
    """Whether ``v`` lies in the cone with the given normals and linear span."""
    if any(dot(y, v) < 0 for y in normals):
        return False
    if not span_basis:
        return not any(v)
    from .intlinalg import in_span
    return in_span(span_basis, v)


def extreme_rays(gens, normals=None):
    """Primitive generators of the one-dimensional faces of a pointed cone."""
    if normals is None:
        normals = facets(gens)
    rays = set()
    for F in faces(gens, normals):
        sub = [gens[i] for i in F]
        if sub and rank(sub) == 1:
            rays.add(primitive(sub[0]))
    return sorted(rays)


def _lattice_points(normals, grading, rays, bound, cap):
    """Nonzero points ``x`` of the full-dimensional pointed cone with ``p(x) <= bound``."""
    e = len(grading)
    verts = [tuple(Fraction(0) for _ in range(e))]
    for r in rays:
        pr = dot(grading, r)
        verts.append(tuple(Fraction(bound * a, pr) for a in r))
    lo = [floor(min(v[j] for v in verts)) for j in range(e)]
    hi = [ceil(max(v[j] for v in verts)) for j in range(e)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    if size > cap:
        raise CapExceeded(f"lattice point box of size {size} exceeds cap {cap}")
    out = []
    for x in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        deg = dot(grading, x)
        if 0 < deg <= bound and all(dot(y, x) >= 0 for y in normals):
            out.append(x)
    return out


def pointed_hilbert_basis(gens, cap=2_000_000):
    """Hilbert basis of ``cone(gens) ∩ Z^e`` for a full-dimensional pointed cone in ``Z^e``."""
    gens = [tuple(g) for g in gens]
    if not gens:
        return []
    e = len(gens[0])
    normals = facets(gens)
    grading = primitive(tuple(sum(col) for col in zip(*normals)))
    rays = extreme_rays(gens, normals)
    degs = sorted((dot(grading, r) for r in rays), reverse=True)
    bound = sum(degs[:e])
    pts = _lattice_points(normals, grading, rays, bound, cap)
    pts.sort(key=lambda x: (dot(grading, x), x))
    irreducible = []
    for x in pts:
        if not any(all(dot(y, x) - dot(y, h) >= 0 for y in normals) for h in irreducible):
            irreducible.append(x)
    return irreducible


def hilbert_basis(gens, lattice=None, cap=2_000_000):
    """Generators of ``cone(gens) ∩ L`` where ``L`` has the given row basis.

    ``L`` defaults to ``Z^n``.  The cone must span ``L ⊗ Q``.  The result
    is the unique minimal system when the cone is pointed; otherwise it is
    a lifted Hilbert basis of the pointed quotient plus a ± basis of the
    unit lattice.
    """
    gens = [tuple(g) for g in gens]
    n = len(gens[0]) if gens else (len(lattice[0]) if lattice else 0)
    if lattice is None:
        lattice = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    lattice = [tuple(b) for b in lattice]
    d = len(lattice)
    if d == 0:
        return []
    coords = []
    for g in gens:
        c = solve_integer(lattice, g)
        if c is None:
            raise ValueError(f"generator {g} is not in the lattice")
        coords.append(c)
    if rank(coords) != d:
        raise ValueError("cone is not full-dimensional in the lattice")
    normals = facets(coords)
    lin = [c for c in coords if all(dot(y, c) == 0 for y in normals)]
    if lin:
        Phi = right_kernel(lin, d)  # rows: saturated basis of W-perp
        K = right_kernel(Phi, d) if Phi else [tuple(int(i == j) for j in range(d)) for i in range(d)]
        proj = [tuple(dot(row, c) for row in Phi) for c in coords]
        proj = [p for p in proj if any(p)]
        res = []
        if Phi:
            PhiT = transpose(Phi, len(Phi))
            for h in pointed_hilbert_basis(proj, cap):
                x = solve_integer(PhiT, h)
                res.append(x)
        res += [tuple(k) for k in K] + [tuple(-a for a in k) for k in K]
    else:
        res = pointed_hilbert_basis(coords, cap)
    out = []
    for c in res:
        v = tuple(0 for _ in range(n))
        for ci, b in zip(c, lattice):
            if ci:
                v = vadd(v, vscale(ci, b))
        out.append(v)
    return sorted(set(out))


def dual_generators(gens, n):
    """Generators (as a cone) of the dual cone of ``cone(gens)`` in ``Q^n``."""
    gens = [tuple(g) for g in gens]
    out = list(facets(gens)) if gens else []
    perp = right_kernel(gens, n) if gens else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for k in perp:
        out.append(tuple(k))
        out.append(tuple(-a for a in k))
    return sorted(set(out))
