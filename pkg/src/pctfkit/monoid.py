"""Pointed commutative monoids presented as ``C/I``.

``C`` is an affine monoid given by generators in ``Z^n`` and ``I`` an ideal
of ``C`` given by generators.  Monoid elements are integer tuples in
additive notation; the basepoint is the sentinel :data:`ZERO`.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .intlinalg import (
    dot, in_span, lattice_basis, primitive, reduce_mod_lattice, solve_integer, vadd,
    vneg, vscale, vsub,
)
from .polyhedra import CapExceeded, faces as cone_faces, facets

DEFAULT_EXPONENT_CAP = 64


class _Zero:
    """The basepoint of a pointed monoid."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


class NoPositiveGrading(ValueError):
    pass


class MembershipCapExceeded(CapExceeded):
    pass


def _vec(v, n):
    v = tuple(int(a) for a in v)
    if len(v) != n:
        raise ValueError(f"vector {v} has length {len(v)}, expected {n}")
    return v


@dataclass(frozen=True)
class AffineMonoid:
    """Submonoid of ``Z^n`` generated by finitely many vectors.

    Generators are stored sorted and deduplicated, with the zero vector
    dropped.  Two presentations of the same monoid can differ; use
    :func:`same_monoid` for set equality.
    """

    ambient_rank: int
    generators: tuple = ()

    def __post_init__(self):
        if self.ambient_rank < 0:
            raise ValueError("ambient rank must be nonnegative")
        gens = sorted({_vec(g, self.ambient_rank) for g in self.generators})
        gens = tuple(g for g in gens if any(g))
        object.__setattr__(self, "generators", gens)

    @cached_property
    def normals(self):
        return facets(self.generators)

    @cached_property
    def span_basis(self):
        return lattice_basis(self.generators, self.ambient_rank)

    @property
    def dim(self):
        return len(self.span_basis)

    @cached_property
    def lattice(self):
        """HNF basis of the group completion."""
        return self.span_basis

    @cached_property
    def lineality(self):
        return frozenset(i for i, g in enumerate(self.generators)
                         if all(dot(y, g) == 0 for y in self.normals))

    @cached_property
    def unit_basis(self):
        return lattice_basis([self.generators[i] for i in sorted(self.lineality)], self.ambient_rank)

    @cached_property
    def weak_grading(self):
        """Sum of facet normals: positive off the unit group, zero on it."""
        if not self.normals:
            return tuple(0 for _ in range(self.ambient_rank))
        return primitive(tuple(sum(c) for c in zip(*self.normals)))

    @cached_property
    def face_list(self):
        return [Face(F) for F in cone_faces(self.generators, self.normals)]

    def zero_vector(self):
        return tuple(0 for _ in range(self.ambient_rank))

    def in_cone(self, v):
        if any(dot(y, v) < 0 for y in self.normals):
            return False
        if not self.span_basis:
            return not any(v)
        return in_span(self.span_basis, v)

    def in_group(self, v):
        if not self.lattice:
            return not any(v)
        return solve_integer(self.lattice, v) is not None

    def contains(self, v, cap=DEFAULT_EXPONENT_CAP):
        return bool(member(self, v, cap))

    def face_normals(self, face):
        """Facet normals vanishing on every generator of ``face``."""
        return [y for y in self.normals
                if all(dot(y, self.generators[i]) == 0 for i in face.indices)]

    def in_face(self, v, face):
        """Whether an element ``v`` of the monoid lies in ``face``."""
        return all(dot(y, v) == 0 for y in self.face_normals(face))

    def face_of(self, v):
        """Smallest face containing the element ``v``."""
        zs = [y for y in self.normals if dot(y, v) == 0]
        return Face(frozenset(i for i, g in enumerate(self.generators)
                              if all(dot(y, g) == 0 for y in zs)))


@dataclass(frozen=True)
class Face:
    indices: frozenset

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class Membership:
    found: bool
    coefficients: tuple = ()
    unit_part: tuple = ()

    def __bool__(self):
        return self.found


def member(C, v, cap=DEFAULT_EXPONENT_CAP):
    """Decide whether ``v`` lies in ``C``.

    Dynamic programming over the weak grading, working modulo the unit
    group when there is one.  On success the witness gives one coefficient
    per generator; ``unit_part`` is the leftover unit (zero when ``C`` is
    pointed).  ``cap`` bounds the number of non-unit summands; exceeding it
    raises :class:`MembershipCapExceeded`.
    """
    v = _vec(v, C.ambient_rank)
    gens = C.generators
    if not any(v):
        return Membership(True, tuple(0 for _ in gens), v)
    if not C.in_cone(v) or not C.in_group(v):
        return Membership(False)
    p = C.weak_grading
    L0 = C.unit_basis
    pos = [i for i in range(len(gens)) if i not in C.lineality]
    degs = {i: dot(p, gens[i]) for i in pos}
    if dot(p, v) > 0:
        if not pos:
            return Membership(False)
        depth = dot(p, v) // min(degs.values())
        if depth > cap:
            raise MembershipCapExceeded(
                f"deciding {v} may need {depth} summands, above the cap {cap}")
    normals = C.normals
    memo = {}

    def solve(w):
        key = reduce_mod_lattice(w, L0)
        if key in memo:
            return memo[key]
        memo[key] = None
        if dot(p, w) == 0:
            res = () if not any(key) else None
        else:
            res = None
            for i in pos:
                u = vsub(key, gens[i])
                if dot(p, u) < 0 or any(dot(y, u) < 0 for y in normals):
                    continue
                sub = solve(u)
                if sub is not None:
                    res = sub + (i,)
                    break
        memo[key] = res
        return res

    path = solve(v)
    if path is None:
        return Membership(False)
    coeffs = [0] * len(gens)
    total = C.zero_vector()
    for i in path:
        coeffs[i] += 1
        total = vadd(total, gens[i])
    return Membership(True, tuple(coeffs), vsub(v, total))


def same_monoid(C, D):
    """Set equality of two affine monoids in the same ambient lattice."""
    if C.ambient_rank != D.ambient_rank:
        return False
    return (all(D.contains(g) for g in C.generators)
            and all(C.contains(g) for g in D.generators))


@dataclass(frozen=True)
class Ideal:
    """Ideal of an affine monoid by minimal generators.

    Build through :func:`make_ideal`, which prunes and sorts.
    """

    generators: tuple = ()

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def contains(self, C, v):
        return any(C.contains(vsub(v, g)) for g in self.generators)


def make_ideal(C, gens):
    """The ideal of ``C`` generated by ``gens`` with minimal generators."""
    gens = sorted({_vec(g, C.ambient_rank) for g in gens})
    for g in gens:
        if not C.contains(g):
            raise ValueError(f"ideal generator {g} is not in the monoid")
        if C.contains(vneg(g)):
            raise ValueError(f"ideal generator {g} is a unit; the ideal would contain 1")
    keep = []
    for g in gens:
        dominated = False
        for h in gens:
            if h == g or not C.contains(vsub(g, h)):
                continue
            if not C.contains(vsub(h, g)) or h < g:
                dominated = True
                break
        if not dominated:
            keep.append(g)
    return Ideal(tuple(keep))


def ideal_le(C, J, K):
    """``J ⊆ K`` as ideals of ``C``."""
    return all(K.contains(C, g) for g in J.generators)


def ideal_eq(C, J, K):
    return ideal_le(C, J, K) and ideal_le(C, K, J)


def ideal_sum(C, J, K):
    return make_ideal(C, tuple(J.generators) + tuple(K.generators))


@dataclass(frozen=True)
class PctfMonoid:
    """``A = C/I``; ``collapsed`` marks the zero monoid in which ``1 = 0``."""

    carrier: AffineMonoid
    ideal: Ideal = field(default_factory=Ideal)
    collapsed: bool = False

    @classmethod
    def of(cls, ambient_rank, generators, ideal=()):
        C = AffineMonoid(ambient_rank, tuple(generators))
        return cls(C, make_ideal(C, ideal))

    @classmethod
    def zero(cls, ambient_rank):
        return cls(AffineMonoid(ambient_rank, ()), Ideal(), True)

    @property
    def ambient_rank(self):
        return self.carrier.ambient_rank

    @property
    def generators(self):
        return self.carrier.generators

    def identity(self):
        return ZERO if self.collapsed else self.carrier.zero_vector()

    def in_ideal(self, v):
        return self.ideal.contains(self.carrier, v)

    def element(self, v):
        """Normalize a representative: ideal members become :data:`ZERO`."""
        if v is ZERO or self.collapsed:
            return ZERO
        v = _vec(v, self.ambient_rank)
        if not self.carrier.contains(v):
            raise ValueError(f"{v} is not in the carrier monoid")
        return ZERO if self.in_ideal(v) else v

    def mul(self, a, b):
        if a is ZERO or b is ZERO or self.collapsed:
            return ZERO
        s = vadd(a, b)
        return ZERO if self.in_ideal(s) else s

    def is_cancellative(self):
        return self.collapsed or not self.ideal.generators


@dataclass(frozen=True)
class Prime:
    ideal: Ideal
    face: Face


@dataclass(frozen=True)
class PrimePoset:
    primes: tuple

    def leq(self, i, j):
        """``primes[i] ⊆ primes[j]``: the face of ``j`` sits inside the face of ``i``."""
        return self.primes[j].face.indices <= self.primes[i].face.indices

    def maximal(self):
        return [i for i in range(len(self.primes))
                if not any(j != i and self.leq(i, j) for j in range(len(self.primes)))]

    def __len__(self):
        return len(self.primes)


def faces(C):
    return list(C.face_list)


def _faces_avoiding(C, vectors):
    out = []
    for F in C.face_list:
        if not any(C.in_face(v, F) for v in vectors):
            out.append(F)
    return out


def complement_ideal(C, avoided):
    """The ideal ``C minus the union of the given faces``, by minimal generators."""
    gens = C.generators
    pos = [i for i in range(len(gens)) if i not in C.lineality]
    sets = [F.indices for F in avoided]
    if not sets:
        raise ValueError("the complement of no faces is all of C")
    minimal = []
    for size in range(1, len(pos) + 1):
        for T in combinations(pos, size):
            Ts = frozenset(T)
            if any(m <= Ts for m in minimal):
                continue
            if all(not Ts <= S for S in sets):
                minimal.append(Ts)
    vecs = []
    for T in minimal:
        v = C.zero_vector()
        for i in T:
            v = vadd(v, gens[i])
        vecs.append(v)
    return make_ideal(C, vecs)


def primes(A):
    """Prime ideals ``C \\ F`` for faces ``F`` missing the ideal, ordered by size."""
    if A.collapsed:
        return PrimePoset(())
    C = A.carrier
    out = []
    for F in _faces_avoiding(C, A.ideal.generators):
        if len(F.indices) == len(C.generators):
            out.append(Prime(Ideal(), F))
        else:
            out.append(Prime(complement_ideal(C, [F]), F))
    out.sort(key=lambda P: (-len(P.face.indices), sorted(P.face.indices)))
    return PrimePoset(tuple(out))


def radical(A, J):
    """``√(J + I)`` computed from the faces that avoid ``J`` and ``I``."""
    if A.collapsed:
        return Ideal()
    C = A.carrier
    J = J if isinstance(J, Ideal) else make_ideal(C, J)
    vectors = list(J.generators) + list(A.ideal.generators)
    if not vectors:
        return Ideal()
    return complement_ideal(C, _faces_avoiding(C, vectors))


def nilradical(A):
    return radical(A, Ideal())


def is_reduced(A):
    if A.collapsed:
        return True
    return ideal_eq(A.carrier, nilradical(A), A.ideal)


def reduce(A):
    if A.collapsed:
        return A
    return PctfMonoid(A.carrier, nilradical(A))


def quotient(A, J):
    """``A/J``."""
    if A.collapsed:
        return A
    J = J if isinstance(J, Ideal) else make_ideal(A.carrier, J)
    return PctfMonoid(A.carrier, ideal_sum(A.carrier, A.ideal, J))


def localize(A, a):
    """``A⟨a⟩``: adjoin an inverse of ``a``.

    Returns the collapsed zero monoid when some power of ``a`` is zero.
    """
    if a is ZERO:
        raise ValueError("localizing at the basepoint gives the zero monoid")
    if A.collapsed:
        return A
    a = _vec(a, A.ambient_rank)
    C = A.carrier
    if not C.contains(a):
        raise ValueError(f"{a} is not in the monoid")
    if not any(a):
        return A
    if radical(A, Ideal()).contains(C, a):
        return PctfMonoid.zero(A.ambient_rank)
    D = AffineMonoid(A.ambient_rank, C.generators + (vneg(a),))
    return PctfMonoid(D, make_ideal(D, A.ideal.generators))


def units(A):
    """HNF basis of the unit group."""
    if A.collapsed:
        return []
    return list(A.carrier.unit_basis)


@dataclass(frozen=True)
class GradingFunctional:
    p: tuple

    def __call__(self, v):
        return dot(self.p, v)


def grading(A):
    C = A.carrier if isinstance(A, PctfMonoid) else A
    if C.lineality:
        raise NoPositiveGrading("the monoid has nontrivial units")
    p = C.weak_grading
    assert all(dot(p, g) > 0 for g in C.generators)
    return GradingFunctional(p)


@dataclass(frozen=True)
class DilationSequence:
    entries: tuple

    def __post_init__(self):
        if any(int(c) < 2 for c in self.entries):
            raise ValueError("dilation factors must be at least 2")
        object.__setattr__(self, "entries", tuple(int(c) for c in self.entries))

    def prefix_product(self, k):
        out = 1
        for c in self.entries[:k]:
            out *= c
        return out


def dilate(A, c):
    """The endomorphism ``v -> c v`` (``a -> a^c`` multiplicatively)."""
    if c < 2:
        raise ValueError("dilation factor must be at least 2")

    def theta(v):
        return ZERO if v is ZERO else A.element(vscale(c, v))
    return theta


def eventually_in(A, seq, x):
    """Smallest ``k`` with ``(c_1...c_k) x`` in the carrier of ``A``, or ``None``."""
    seq = seq if isinstance(seq, DilationSequence) else DilationSequence(tuple(seq))
    C = A.carrier if isinstance(A, PctfMonoid) else A
    for k in range(len(seq.entries) + 1):
        if C.contains(vscale(seq.prefix_product(k), x)):
            return k
    return None


def graded_elements(C, p, bound):
    """Elements of ``C`` by degree ``0..bound`` under a positive grading ``p``."""
    C = C.carrier if isinstance(C, PctfMonoid) else C
    p = p.p if isinstance(p, GradingFunctional) else p
    gens = [(g, dot(p, g)) for g in C.generators]
    if any(d <= 0 for _, d in gens):
        raise NoPositiveGrading("grading is not positive on the generators")
    layers = [{C.zero_vector()}]
    for k in range(1, bound + 1):
        layer = set()
        for g, d in gens:
            if d <= k:
                layer.update(vadd(x, g) for x in layers[k - d])
        layers.append(layer)
    return [sorted(layer) for layer in layers]
