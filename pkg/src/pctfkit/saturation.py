"""Group completion, normalization, seminormalization and conductors."""

from dataclasses import dataclass
from itertools import product

from .intlinalg import (
    dot, lattice_basis, right_kernel, solve_integer, transpose, vadd, vscale, vsub,
)
from .monoid import (
    AffineMonoid, Ideal, MembershipCapExceeded, PctfMonoid, grading, graded_elements, make_ideal, radical,
)
from .polyhedra import facets, hilbert_basis


class NotFinite(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    rank: int
    basis: tuple

    def contains(self, v):
        if not self.basis:
            return not any(v)
        return solve_integer(list(self.basis), v) is not None


@dataclass(frozen=True)
class SaturationResult:
    monoid: AffineMonoid
    witnesses: tuple = ()
    window: int | None = None
    certified: bool = True

    @property
    def generators(self):
        return self.monoid.generators


def group_completion(C):
    basis = tuple(lattice_basis(C.generators, C.ambient_rank))
    return Lattice(len(basis), basis)


def _to_ambient(c, basis, n):
    v = tuple(0 for _ in range(n))
    for ci, b in zip(c, basis):
        if ci:
            v = vadd(v, vscale(ci, b))
    return v


def minimal_generators(gens, n):
    """Drop generators that are sums of the remaining ones."""
    gens = sorted(set(gens))
    keep = list(gens)
    for g in reversed(gens):
        rest = [h for h in keep if h != g]
        if AffineMonoid(n, tuple(rest)).contains(g):
            keep = rest
    return tuple(sorted(keep))


def normalize(C):
    """Hilbert basis of ``cone(C) ∩ gp(C)``."""
    if not C.generators:
        return SaturationResult(C)
    gens = hilbert_basis(C.generators, C.lattice)
    if not C.lineality:
        gens = minimal_generators(gens, C.ambient_rank)
    N = AffineMonoid(C.ambient_rank, tuple(gens))
    witnesses = []
    for h in N.generators:
        if C.contains(h):
            continue
        k = next((k for k in range(2, 65) if C.contains(vscale(k, h))), None)
        witnesses.append({"element": list(h), "multiple": k})
    return SaturationResult(N, tuple(witnesses))


def is_normal(C):
    return all(C.contains(h) for h in normalize(C).generators)


class _Frame:
    """``C`` in coordinates of ``gp(C)``, split against its lineality space.

    ``phi`` maps onto a pointed monoid ``bar``; ``reps`` lists coset
    representatives of ``gp(C) ∩ W`` modulo the unit group of ``C``.
    """

    def __init__(self, C):
        self.C = C
        self.n = C.ambient_rank
        self.basis = list(C.lattice)
        d = self.d = len(self.basis)
        self.coords = [solve_integer(self.basis, g) for g in C.generators]
        self.pointed_coords = [c for i, c in enumerate(self.coords) if i not in C.lineality]
        lin = [self.coords[i] for i in sorted(C.lineality)]
        if lin:
            self.phi = right_kernel(lin, d)
            K = right_kernel(self.phi, d) if self.phi else [
                tuple(int(i == j) for j in range(d)) for i in range(d)]
        else:
            self.phi = [tuple(int(i == j) for j in range(d)) for i in range(d)]
            K = []
        self.K = K
        self.phiT = transpose(self.phi, len(self.phi)) if self.phi else []
        e = len(self.phi)
        bar = [self.project(c) for c in self.coords]
        self.bar = AffineMonoid(e, tuple(b for b in bar if any(b)))
        self.bar_normals = facets(self.bar.generators) if self.bar.generators else []
        self.p = self.bar.weak_grading if self.bar.generators else tuple(0 for _ in range(e))
        self._bar_nor = None
        self.reps = [tuple(0 for _ in range(d))]
        if K:
            U = [solve_integer(K, c) for c in lin]
            H = lattice_basis(U, len(K))
            ranges = [range(H[i][i]) for i in range(len(K))]
            self.reps = [_to_ambient(t, K, d) for t in product(*ranges)]

    def project(self, c):
        return tuple(dot(row, c) for row in self.phi)

    def degree(self, c):
        return dot(self.p, self.project(c))

    def lift(self, y):
        if not self.phi:
            return tuple(0 for _ in range(self.d))
        return solve_integer(self.phiT, y)

    def in_normalization(self, c):
        y = self.project(c)
        return all(dot(m, y) >= 0 for m in self.bar_normals) and (
            bool(self.bar.generators) or not any(y))

    def normalization_elements(self, bound):
        """Elements of ``gp(C) ∩ cone(C)`` of degree ``<= bound`` modulo units of ``C``."""
        if not self.bar.generators:
            return [list(self.reps)]
        if self._bar_nor is None:
            self._bar_nor = AffineMonoid(len(self.phi), tuple(hilbert_basis(self.bar.generators)))
        layers = graded_elements(self._bar_nor, self.p, bound)
        out = []
        for layer in layers:
            out.append([vadd(self.lift(y), t) for y in layer for t in self.reps])
        return out

    def to_ambient(self, c):
        return _to_ambient(c, self.basis, self.n)

    def module_bound(self):
        degs = sorted((dot(self.p, g) for g in self.bar.generators), reverse=True)
        return sum(degs[:len(self.phi)])


def _normalization_module_generators(frame):
    """``b`` in the normalization with ``b - g`` outside it for every generator ``g``."""
    out = []
    for layer in frame.normalization_elements(frame.module_bound()):
        for b in layer:
            if all(not frame.in_normalization(vsub(b, g)) for g in frame.pointed_coords):
                out.append(b)
    return out


def _closure(frame, window):
    d = frame.d
    gens = list(frame.coords)
    cands = [b for layer in frame.normalization_elements(window)[1:] for b in layer]
    witnesses = []

    def has(M, v):
        try:
            return M.contains(v)
        except MembershipCapExceeded:
            return False

    while True:
        M = AffineMonoid(d, tuple(gens))
        new = []
        for z in cands:
            if has(M, z):
                continue
            if has(M, vscale(2, z)) and has(M, vscale(3, z)):
                new.append(z)
        if not new:
            return M, witnesses
        for z in new:
            if has(AffineMonoid(d, tuple(gens)), z):
                continue
            gens.append(z)
            witnesses.append(z)


def _face_bound(frame):
    """Degree bound for generators of ``C_sn`` over ``C``.

    For ``x`` in ``C_sn`` outside ``C``, with ``F`` the face whose relative
    interior holds ``x``: ``x = b + e + c`` where ``b`` is a normalization
    module generator of ``C ∩ F``, ``e`` sums at most one generator per
    facet of ``F`` (enough to leave the boundary) and ``c`` is in ``C``.
    ``b + e`` is already in ``C_sn``, which gives the bound.
    """
    degs = [dot(frame.p, g) for g in frame.bar.generators]
    if not degs:
        return 0
    return frame.module_bound() + len(frame.bar_normals) * max(degs)


def _face_criterion(C, x):
    """``x`` in ``gp(C ∩ F)`` for the smallest face ``F`` of ``cone(C)`` holding it."""
    F = C.face_of(x)
    gens = [C.generators[i] for i in F.indices]
    if not gens:
        return not any(x)
    return solve_integer(lattice_basis(gens, C.ambient_rank), x) is not None


def _sn_elements(frame, bound):
    """Elements of ``C_sn`` of degree ``<= bound`` (frame coordinates), via the face criterion."""
    out = []
    for layer in frame.normalization_elements(bound)[1:]:
        for z in layer:
            if _face_criterion(frame.C, frame.to_ambient(z)):
                out.append(z)
    return out


def seminormalize(C, window=None):
    """Close ``C`` under "2z and 3z present implies z present" inside ``C_nor``.

    Candidates for the closure are normalization elements of degree at most
    ``window`` (default: the face bound, see :func:`_face_bound`).  Elements
    up to the face bound that pass the face criterion generate ``C_sn`` over
    ``C``; any the closure misses are added directly with a ``face`` witness.
    ``certified`` is False only when such an element could not be placed
    (a membership cap was hit).
    """
    if not C.generators:
        return SaturationResult(C, (), 0, True)
    frame = _Frame(C)
    bound = _face_bound(frame)
    if window is None:
        window = bound
    M, added = _closure(frame, window)
    witnesses = []
    for z in added:
        z = frame.to_ambient(z)
        witnesses.append({"element": list(z), "double": list(vscale(2, z)),
                          "triple": list(vscale(3, z))})
    certified = True
    extra = []
    for z in _sn_elements(frame, bound):
        try:
            present = M.contains(z) or AffineMonoid(frame.d, tuple(M.generators) + tuple(extra)).contains(z)
        except MembershipCapExceeded:
            certified, present = False, False
        if not present:
            extra.append(z)
            witnesses.append({"element": list(frame.to_ambient(z)), "face": True})
    if extra:
        M = AffineMonoid(frame.d, tuple(M.generators) + tuple(extra))
    gens = [frame.to_ambient(c) for c in M.generators]
    if not C.lineality:
        gens = minimal_generators(gens, C.ambient_rank)
    out = AffineMonoid(C.ambient_rank, tuple(gens))
    return SaturationResult(out, tuple(witnesses), window, certified)


def is_seminormal(C, window=None):
    """True when ``C`` already holds every face-criterion element up to the face bound."""
    if not C.generators:
        return True
    frame = _Frame(C)
    bound = _face_bound(frame) if window is None else max(window, _face_bound(frame))
    return all(C.contains(frame.to_ambient(z)) for z in _sn_elements(frame, bound))


def seminormalize_pctf(A):
    """``(C_sn, √(I C_sn))``."""
    if A.collapsed:
        return A
    Csn = seminormalize(A.carrier).monoid
    J = make_ideal(Csn, A.ideal.generators)
    return PctfMonoid(Csn, radical(PctfMonoid(Csn, Ideal()), J))


def _check_finite(A, B):
    if A.ambient_rank != B.ambient_rank:
        raise ValueError("ambient ranks differ")
    if not all(B.contains(g) for g in A.generators):
        raise ValueError("the first monoid is not contained in the second")
    if len(A.lattice) != len(B.lattice) or not all(A.in_cone(h) for h in B.generators):
        raise NotFinite("the larger monoid is not finite over the smaller one")


def module_generators(A, B, cap=64):
    """Minimal ``x_j`` with ``B = ⋃ (A + x_j)``; both monoids must be pointed."""
    _check_finite(A, B)
    p = grading(A)
    bound = 0
    for h in B.generators:
        k = next((k for k in range(1, cap + 1) if A.contains(vscale(k, h))), None)
        if k is None:
            raise NotFinite(f"no multiple of {h} up to {cap} lies in the smaller monoid")
        bound += (k - 1) * p(h)
    out = []
    for layer in graded_elements(B, p, bound):
        for x in layer:
            if all(not B.contains(vsub(x, g)) for g in A.generators):
                out.append(x)
    return out


def covers(A, B, xs, bound):
    """Check ``B = ⋃ (A + x)`` on every element of ``B`` up to degree ``bound``."""
    p = grading(A)
    for layer in graded_elements(B, p, bound):
        for y in layer:
            if not any(A.contains(vsub(y, x)) for x in xs):
                return False
    return True


@dataclass(frozen=True)
class ConductorResult:
    ideal: Ideal | None
    improper: bool
    module_generators: tuple = ()
    window: int = 0
    certified: bool = True


def _conductor_window(A, mods, p, window):
    found = []
    for layer in graded_elements(A, p, window):
        for a in layer:
            if all(A.contains(vadd(a, b)) for b in mods):
                found.append(a)
    return found


def conductor(A, B, window=None, max_doublings=4):
    """``{a in A : a + B ⊆ A}`` by minimal generators.

    ``improper`` is set when the conductor is all of ``A`` (so ``A = B``).
    """
    mods = module_generators(A, B)
    p = grading(A)
    if all(A.contains(b) for b in mods):
        return ConductorResult(None, True, tuple(mods), 0, True)
    if window is None:
        window = 2 * max(max(p(b) for b in mods), max(p(g) for g in A.generators))
    prev = None
    for _ in range(max_doublings + 1):
        gens = make_ideal(A, _conductor_window(A, mods, p, window)).generators
        if prev is not None and prev == gens:
            return ConductorResult(Ideal(gens), False, tuple(mods), window // 2, True)
        prev = gens
        window *= 2
    return ConductorResult(Ideal(prev), False, tuple(mods), window // 2, False)
