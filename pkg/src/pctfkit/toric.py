"""Fans, their monoid schemes, Čech cohomology over maximal-cone covers and
the Mayer-Vietoris square verifiers.

A cone is identified with its sorted tuple of primitive rays; the open
``U_σ`` of a cone is the set of its faces, and ``U_σ ∩ U_τ = U_{σ∩τ}``.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb

from .homology import (
    F2, ChainComplex, ChainMap, _field, exterior_power, homology, induced_map,
    inclusion_matrix, mv_acyclicity,
)
from .intlinalg import dot, invariant_factors, primitive, rank, right_kernel, vadd, vneg
from .monoid import (
    AffineMonoid, Ideal, PctfMonoid, grading, graded_elements, ideal_sum, make_ideal,
    same_monoid,
)
from .nerve import unit_lattice_sn
from .polyhedra import dual_generators, faces, facets, hilbert_basis, in_cone, lineality_indices
from .saturation import conductor, normalize, seminormalize_pctf, is_seminormal


class InvalidFan(ValueError):
    pass


class ShapeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Cone:
    rank: int
    rays: tuple = ()

    @classmethod
    def of(cls, rank, rays):
        out = []
        for r in rays:
            r = tuple(int(x) for x in r)
            if len(r) != rank:
                raise InvalidFan(f"ray {list(r)} does not have length {rank}")
            if not any(r):
                raise InvalidFan("the zero vector is not a ray")
            out.append(primitive(r))
        rays = tuple(sorted(set(out)))
        if len(rays) != len(out):
            raise InvalidFan("rays must be pairwise non-proportional")
        cone = cls(rank, rays)
        if rays:
            if lineality_indices(list(rays)):
                raise InvalidFan(f"cone {cone.as_list()} is not strongly convex")
            if any(not _is_extreme(rays, i) for i in range(len(rays))):
                raise InvalidFan(f"cone {cone.as_list()} has a redundant ray")
        return cone

    @property
    def dim(self):
        return rank(list(self.rays)) if self.rays else 0

    @cached_property
    def normals(self):
        return facets(self.rays) if self.rays else []

    @cached_property
    def span_basis(self):
        from .intlinalg import lattice_basis
        return lattice_basis(self.rays, self.rank) if self.rays else []

    def contains(self, v):
        return in_cone(tuple(v), self.normals, self.span_basis)

    def faces(self):
        if not self.rays:
            return [self]
        return [Cone(self.rank, tuple(self.rays[i] for i in sorted(F)))
                for F in faces(list(self.rays), self.normals)]

    def is_face_of(self, other):
        return self in set(other.faces())

    def as_list(self):
        return [list(r) for r in self.rays]


def _is_extreme(rays, i):
    rest = [r for j, r in enumerate(rays) if j != i]
    if not rest:
        return True
    from .intlinalg import lattice_basis
    return not in_cone(rays[i], facets(rest), lattice_basis(rest, len(rays[i])))


def zero_cone(n):
    return Cone(n, ())


def _intersection_rays(s, t):
    """Extreme rays of ``s ∩ t`` (brute force over the defining inequalities)."""
    n = s.rank
    ineqs = list(s.normals) + list(t.normals)
    for c in (s, t):
        for k in right_kernel(list(c.rays), n) if c.rays else [
                tuple(int(i == j) for j in range(n)) for i in range(n)]:
            ineqs.append(tuple(k))
            ineqs.append(vneg(k))
    out = set()
    for S in combinations(range(len(ineqs)), n - 1):
        rows = [ineqs[i] for i in S]
        ker = right_kernel(rows, n)
        if len(ker) != 1:
            continue
        for v in (ker[0], vneg(ker[0])):
            if all(dot(y, v) >= 0 for y in ineqs):
                out.add(primitive(v))
    return sorted(out)


class Fan:
    """A fan in ``N = Z^rank``: cones closed under faces, meeting in common faces."""

    def __init__(self, rank, cones, check=True):
        self.rank = rank
        closed = set()
        for c in cones:
            if not isinstance(c, Cone):
                c = Cone.of(rank, c)
            if c.rank != rank:
                raise InvalidFan("cone of the wrong rank")
            closed.update(c.faces())
        self.cones = tuple(sorted(closed, key=lambda c: (len(c.rays), c.rays)))
        if check:
            self._check()

    def _check(self):
        mx = self.maximal
        for s, t in combinations(mx, 2):
            common = tuple(r for r in s.rays if r in t.rays)
            g = Cone(self.rank, common)
            if g not in set(s.faces()) or g not in set(t.faces()):
                raise InvalidFan(f"cones {s.as_list()} and {t.as_list()} meet outside a common face")
            for v in _intersection_rays(s, t):
                if not g.contains(v):
                    raise InvalidFan(f"cones {s.as_list()} and {t.as_list()} overlap in their interiors")

    @cached_property
    def maximal(self):
        out = []
        for c in self.cones:
            if not any(set(c.rays) < set(d.rays) for d in self.cones):
                out.append(c)
        return sorted(out, key=lambda c: c.rays)

    @property
    def rays(self):
        return sorted({r for c in self.cones for r in c.rays})

    def meet(self, cones):
        """The cone ``∩ cones``; valid because cones of a fan meet in common faces."""
        common = set(cones[0].rays)
        for c in cones[1:]:
            common &= set(c.rays)
        return Cone(self.rank, tuple(sorted(common)))

    def subfan(self, maximal_cones):
        return Fan(self.rank, maximal_cones, check=False)

    def as_dict(self):
        return {"rank": self.rank, "cones": [{"rays": c.as_list()} for c in self.maximal]}

    def __eq__(self, other):
        return isinstance(other, Fan) and self.rank == other.rank and self.cones == other.cones

    def __hash__(self):
        return hash((self.rank, self.cones))

    def __len__(self):
        return len(self.cones)


def dual_monoid(sigma):
    """Hilbert basis of ``σ^∨ ∩ M``."""
    n = sigma.rank
    gens = dual_generators(list(sigma.rays), n)
    return AffineMonoid(n, tuple(hilbert_basis(gens)))


@dataclass
class ToricScheme:
    fan: Fan
    monoids: dict

    @property
    def points(self):
        return list(self.fan.cones)

    def leq(self, tau, sigma):
        """``τ`` specializes into ``U_σ`` (``τ`` is a face of ``σ``)."""
        return tau.is_face_of(sigma)

    def open_set(self, sigma):
        return [t for t in self.fan.cones if self.leq(t, sigma)]

    def check_localizations(self):
        """``A(U_τ)`` is ``A(U_σ)`` with an interior dual vector of ``τ`` inverted."""
        for s in self.fan.cones:
            A = self.monoids[s]
            for t in s.faces():
                m = tuple(0 for _ in range(self.fan.rank))
                for g in A.generators:
                    if all(dot(g, r) == 0 for r in t.rays):
                        m = vadd(m, g)
                loc = AffineMonoid(self.fan.rank, A.generators + (vneg(m),))
                if not same_monoid(loc, self.monoids[t]):
                    return False
        return True


def scheme_from_fan(F):
    return ToricScheme(F, {c: dual_monoid(c) for c in F.cones})


def is_smooth(sigma):
    if not sigma.rays:
        return True
    rays = list(sigma.rays)
    if rank(rays) != len(rays):
        return False
    return all(d == 1 for d in invariant_factors(rays))


def stellar_subdivide(F, ray):
    v = primitive(tuple(int(x) for x in ray))
    if not any(v):
        raise ValueError("cannot subdivide at the zero vector")
    if not any(c.contains(v) for c in F.cones):
        raise ValueError(f"ray {list(v)} lies outside the support of the fan")
    out = []
    for s in F.maximal:
        if not s.contains(v):
            out.append(s)
            continue
        for t in s.faces():
            if t.contains(v):
                continue
            out.append(Cone(F.rank, tuple(sorted(set(t.rays) | {v}))))
    return Fan(F.rank, out)


def _covers(sigma, cones):
    """Do the given subcones of ``σ`` (cones of one fan) fill ``σ``?"""
    d = sigma.dim
    full = [c for c in cones if c.dim == d]
    if not full:
        return d == 0
    count = {}
    for c in full:
        for f in c.faces():
            if f.dim == d - 1:
                count[f] = count.get(f, 0) + 1
    for f, k in count.items():
        on_boundary = any(all(dot(y, r) == 0 for r in f.rays) for y in sigma.normals)
        if not on_boundary and k != 2:
            return False
    return True


def is_refinement(Fine, Coarse):
    if Fine.rank != Coarse.rank:
        return False
    for c in Fine.maximal:
        if not any(all(s.contains(r) for r in c.rays) for s in Coarse.cones):
            return False
    for s in Coarse.maximal:
        inside = [c for c in Fine.cones if all(s.contains(r) for r in c.rays)]
        if not _covers(s, inside):
            return False
    return True


def positivity(m, U):
    """``m > 0`` on ``|U| \\ {0}``, i.e. on every ray of every cone of ``U``."""
    cones = U.cones if isinstance(U, Fan) else U
    return all(dot(m, r) > 0 for c in cones for r in c.rays)


@dataclass
class PosetPresheaf:
    """Finite-dimensional values on the cones of a fan with restriction matrices.

    ``restrict(σ, τ)`` returns the images (sparse columns) of the basis of
    ``P(σ)`` in ``P(τ)`` for a face ``τ`` of ``σ``.
    """

    fan: Fan
    dims: dict
    restrict: object

    def dim(self, c):
        if c not in self.dims:
            raise KeyError(f"presheaf has no value on cone {c.as_list()}")
        return self.dims[c]

    def check_functoriality(self):
        for s in self.fan.cones:
            for t in s.faces():
                for u in t.faces():
                    direct = self.restrict(s, u)
                    via = _compose_cols(self.restrict(t, u), self.restrict(s, t))
                    if any(_clean(a) != _clean(b) for a, b in zip(direct, via)):
                        return False
        return True


def _clean(col):
    return {i: x for i, x in col.items() if x}


def _compose_cols(g, f):
    out = []
    for col in f:
        acc = {}
        for i, c in col.items():
            for k, x in g[i].items():
                acc[k] = acc.get(k, 0) + c * x
        out.append(acc)
    return out


def _identity(n):
    return [{i: 1} for i in range(n)]


def g_presheaf(F, m):
    """``U ↦ k`` when ``m`` is positive on ``|U| \\ {0}``, else ``0``."""
    dims = {c: int(positivity(m, [c])) for c in F.cones}

    def restrict(s, t):
        return _identity(1) if dims[s] and dims[t] else [{} for _ in range(dims[s])]

    return PosetPresheaf(F, dims, restrict)


def zero_presheaf(F):
    return PosetPresheaf(F, {c: 0 for c in F.cones}, lambda s, t: [])


def weight_lattice(sigma, m, quotient=False):
    """Unit lattice of the weight ``m`` piece of Ω̃ on ``U_σ``; ``None`` if that piece is zero.

    ``m`` lies in ``σ^∨``; the lattice is ``(σ ∩ m^⊥)^⊥ ∩ M``.  With
    ``quotient`` the monoid is divided by the ideal of dual vectors
    positive on ``σ \\ {0}``.
    """
    vals = [dot(m, r) for r in sigma.rays]
    if any(v < 0 for v in vals):
        return None
    if quotient and all(v > 0 for v in vals):
        return None
    face = [r for r, v in zip(sigma.rays, vals) if v == 0]
    n = sigma.rank
    if not face:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return tuple(right_kernel(face, n))


def omega_presheaf(F, m, q, quotient=False):
    """Degree ``q`` homology of the weight ``m`` piece of Ω̃, as a presheaf on ``F``."""
    lat = {c: weight_lattice(c, m, quotient) for c in F.cones}
    dims = {c: 0 if L is None else comb(len(L), q) for c, L in lat.items()}

    def restrict(s, t):
        return _lattice_map(lat[s], lat[t], q, dims[s])

    return PosetPresheaf(F, dims, restrict)


def _lattice_map(Ls, Lt, q, ds):
    if Ls is None or Lt is None or ds == 0 or comb(len(Lt), q) == 0:
        return [{} for _ in range(ds)]
    if q == 0:
        return [{0: 1}]
    M = inclusion_matrix(Ls, Lt)
    return [{i: x for i, x in enumerate(row) if x} for row in exterior_power(M, q)]


@dataclass
class CechData:
    complex: ChainComplex
    simplices: dict


def _cech_simplices(F):
    mx = F.maximal
    out = {}
    for p in range(len(mx)):
        out[p] = [(S, F.meet([mx[i] for i in S])) for S in combinations(range(len(mx)), p + 1)]
    return out


def cech_complex(F, P):
    """Alternating Čech cochains of ``P`` over the maximal cones of ``F``.

    Cochain degree ``p`` is stored in chain degree ``-p``.
    """
    simp = _cech_simplices(F)
    offsets = {}
    dims = {}
    for p, lst in simp.items():
        off = []
        o = 0
        for S, c in lst:
            off.append(o)
            o += P.dim(c)
        offsets[p] = off
        dims[-p] = o
    if not simp:
        return CechData(ChainComplex({0: 0}, {}, 0), simp)
    boundary = {}
    for p, lst in simp.items():
        cols = [{} for _ in range(dims[-p])]
        if p + 1 in simp:
            index = {S: k for k, (S, _) in enumerate(simp[p + 1])}
            for k, (S, c) in enumerate(lst):
                for T, d in simp[p + 1]:
                    if not set(S) <= set(T):
                        continue
                    missing = next(i for i in T if i not in S)
                    sign = (-1) ** T.index(missing)
                    res = P.restrict(c, d)
                    base = offsets[p + 1][index[T]]
                    for j, col in enumerate(res):
                        tgt = cols[offsets[p][k] + j]
                        for i, x in col.items():
                            tgt[base + i] = tgt.get(base + i, 0) + sign * x
        boundary[-p] = [_clean(c) for c in cols]
    return CechData(ChainComplex(dims, boundary, 0), simp)


def cech(F, P, coeff=F2):
    """Dimensions of ``H^p`` for ``p = 0, 1, ...``."""
    data = cech_complex(F, P)
    H = homology(data.complex, coeff)
    return list(reversed(H.dims))


def _containing(src_max, cone):
    for i, s in enumerate(src_max):
        if all(s.contains(r) for r in cone.rays):
            return i
    raise ShapeError(f"cone {cone.as_list()} lies in no cone of the source fan")


def _sort_sign(seq):
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return None, 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return tuple(sorted(seq)), sign


def cech_map(Fs, Ps, Ft, Pt, pull, src=None, tgt=None):
    """Chain map of Čech complexes induced by cone-wise maps ``pull(σ, τ)``, ``τ ⊆ σ``.

    Each maximal cone of ``Ft`` is sent to the first maximal cone of
    ``Fs`` containing it.
    """
    src = src or cech_complex(Fs, Ps)
    tgt = tgt or cech_complex(Ft, Pt)
    smax, tmax = Fs.maximal, Ft.maximal
    lam = [_containing(smax, c) for c in tmax]
    s_index = {p: {S: k for k, (S, _) in enumerate(lst)} for p, lst in src.simplices.items()}
    s_off = {}
    for p, lst in src.simplices.items():
        o, off = 0, []
        for S, c in lst:
            off.append(o)
            o += Ps.dim(c)
        s_off[p] = off
    mats = {}
    for p in src.simplices:
        mats[-p] = [{} for _ in range(src.complex.dim(-p))]
    for p, lst in tgt.simplices.items():
        o = 0
        for T, d in lst:
            base = o
            o += Pt.dim(d)
            S, sign = _sort_sign(lam[i] for i in T)
            if not sign or p not in s_index:
                continue
            k = s_index[p][S]
            c = src.simplices[p][k][1]
            cols = pull(c, d)
            for j, col in enumerate(cols):
                tgtcol = mats[-p][s_off[p][k] + j]
                for i, x in col.items():
                    tgtcol[base + i] = tgtcol.get(base + i, 0) + sign * x
    mats = {q: [_clean(c) for c in cols] for q, cols in mats.items()}
    return ChainMap(src.complex, tgt.complex, mats)


def _chains(F):
    """Strictly decreasing chains of cones ``σ_0 > ... > σ_p``, by length."""
    below = {c: [t for t in c.faces() if t != c] for c in F.cones}
    out = {0: [(c,) for c in F.cones]}
    p = 0
    while out[p]:
        out[p + 1] = [ch + (t,) for ch in out[p] for t in below[ch[-1]]]
        p += 1
    del out[p]
    return out


def derived_sections(F, P):
    """Cochains on the order complex of the face poset computing ``ℍ(F, P)``.

    A ``p``-chain ``σ_0 > ... > σ_p`` carries ``P(σ_p)``; cochain degree
    ``p`` is stored in chain degree ``-p``.
    """
    chains = _chains(F)
    offsets, dims = {}, {}
    for p, lst in chains.items():
        o, off = 0, {}
        for ch in lst:
            off[ch] = o
            o += P.dim(ch[-1])
        offsets[p] = off
        dims[-p] = o
    if not chains:
        return CechData(ChainComplex({0: 0}, {}, 0), chains)
    boundary = {}
    for p, lst in chains.items():
        cols = [{} for _ in range(dims[-p])]
        for ch in chains.get(p + 1, []):
            base = offsets[p + 1][ch]
            for i in range(p + 2):
                sub = ch[:i] + ch[i + 1:]
                sign = (-1) ** i
                if i < p + 1:
                    res = _identity(P.dim(ch[-1]))
                else:
                    res = P.restrict(ch[-2], ch[-1])
                for j, col in enumerate(res):
                    tgt = cols[offsets[p][sub] + j]
                    for k, x in col.items():
                        tgt[base + k] = tgt.get(base + k, 0) + sign * x
        boundary[-p] = [_clean(c) for c in cols]
    return CechData(ChainComplex(dims, boundary, 0), chains)


def smallest_cone(F, cone):
    """The smallest cone of ``F`` containing ``cone``."""
    best = None
    for c in F.cones:
        if all(c.contains(r) for r in cone.rays) and (best is None or len(c.rays) < len(best.rays)):
            best = c
    if best is None:
        raise ShapeError(f"cone {cone.as_list()} lies in no cone of the fan")
    return best


def derived_map(Fs, Ps, Ft, Pt, pull, src=None, tgt=None):
    """Map of order-complex cochains along ``τ ↦`` smallest cone of ``Fs`` containing ``τ``."""
    src = src or derived_sections(Fs, Ps)
    tgt = tgt or derived_sections(Ft, Pt)
    lam = {c: smallest_cone(Fs, c) for c in Ft.cones}
    s_off = {}
    for p, lst in src.simplices.items():
        o, off = 0, {}
        for ch in lst:
            off[ch] = o
            o += Ps.dim(ch[-1])
        s_off[p] = off
    mats = {-p: [{} for _ in range(src.complex.dim(-p))] for p in src.simplices}
    for p, lst in tgt.simplices.items():
        o = 0
        for ch in lst:
            base = o
            o += Pt.dim(ch[-1])
            image = tuple(lam[c] for c in ch)
            if len(set(image)) < len(image) or p not in s_off:
                continue
            cols = pull(image[-1], ch[-1])
            for j, col in enumerate(cols):
                tgtcol = mats[-p][s_off[p][image] + j]
                for i, x in col.items():
                    tgtcol[base + i] = tgtcol.get(base + i, 0) + x
    mats = {q: [_clean(c) for c in cols] for q, cols in mats.items()}
    return ChainMap(src.complex, tgt.complex, mats)


@dataclass
class L312Result:
    holds: bool
    source: list
    target: list
    map_ranks: dict


def verify_L312(F, Fr, m, coeff=F2):
    """Čech cohomology of ``G_m`` agrees on ``F`` and on its refinement ``Fr``.

    Both the dimensions and the pullback map (an isomorphism) are checked.
    """
    if not is_refinement(Fr, F):
        raise ShapeError("the second fan does not refine the first")
    P, Q = g_presheaf(F, m), g_presheaf(Fr, m)

    def pull(s, t):
        return _identity(1) if P.dims[s] and Q.dims[t] else [{} for _ in range(P.dims[s])]

    f = cech_map(F, P, Fr, Q, pull)
    hs = cech(F, P, coeff)
    ht = cech(Fr, Q, coeff)
    n = max(len(hs), len(ht))
    hs, ht = hs + [0] * (n - len(hs)), ht + [0] * (n - len(ht))
    m_ = induced_map(f, coeff)
    ok = hs == ht and all(m_.is_iso(q) for q in m_.matrices)
    return L312Result(ok, hs, ht, {-q: r for q, r in m_.ranks.items()})


# Squares ---------------------------------------------------------------------

SQUARE_TYPES = ("sn", "zariski", "conductor", "closed-cover", "blowup")


@dataclass
class _FanCorner:
    fan: Fan
    quotient: bool = False


@dataclass
class CdSquare:
    """Corners ``X, Y, C, D`` of a square ``D -> Y, D -> C, Y -> X, C -> X`` of schemes.

    Affine corners are pctf monoids (``None`` for the empty scheme); fan
    corners are fans, possibly cut down to the union of the closures of
    the height one points.
    """

    kind: str
    X: object
    Y: object
    C: object
    D: object
    notes: dict = field(default_factory=dict)

    @property
    def affine(self):
        return self.kind in ("sn", "conductor", "closed-cover")


def _pctf(data, key="monoid"):
    A = data[key]
    if not isinstance(A, PctfMonoid):
        raise ShapeError(f"{key} must be a pctf monoid")
    return A


def make_square(kind, data):
    if kind not in SQUARE_TYPES:
        raise ShapeError(f"unknown square type {kind!r}")
    if kind == "sn":
        A = _pctf(data)
        return CdSquare(kind, A, seminormalize_pctf(A), None, None)
    if kind == "conductor":
        A = _pctf(data)
        if A.collapsed or A.ideal.generators:
            raise ShapeError("the conductor square needs a cancellative monoid")
        if not is_seminormal(A.carrier):
            raise ShapeError("the conductor square needs a seminormal monoid")
        B = normalize(A.carrier).monoid
        res = conductor(A.carrier, B)
        if res.improper:
            return CdSquare(kind, A, PctfMonoid(B, Ideal()), PctfMonoid.zero(A.ambient_rank),
                            PctfMonoid.zero(A.ambient_rank), {"conductor": "improper"})
        I = res.ideal
        IB = make_ideal(B, I.generators)
        return CdSquare(kind, A, PctfMonoid(B, Ideal()), PctfMonoid(A.carrier, I),
                        PctfMonoid(B, IB), {"conductor": [list(g) for g in I.generators]})
    if kind == "closed-cover":
        A = _pctf(data)
        C = A.carrier
        I = make_ideal(C, data["I"])
        J = make_ideal(C, data["J"])
        if not is_seminormal(C):
            raise ShapeError("the closed-cover square needs a seminormal monoid")
        for F in faces_avoiding(A):
            if not (_face_avoids(C, F, I) or _face_avoids(C, F, J)):
                raise ShapeError("the two closed subschemes do not cover")
        AI = PctfMonoid(C, ideal_sum(C, A.ideal, I))
        AJ = PctfMonoid(C, ideal_sum(C, A.ideal, J))
        AIJ = PctfMonoid(C, ideal_sum(C, ideal_sum(C, A.ideal, I), J))
        return CdSquare(kind, A, AJ, AI, AIJ)
    if kind == "zariski":
        F = data["fan"]
        Y = F.subfan(data["Y"])
        C = F.subfan(data["C"])
        if set(Y.cones) | set(C.cones) != set(F.cones):
            raise ShapeError("the two open subfans do not cover the fan")
        D = F.subfan([c for c in F.cones if c in set(Y.cones) and c in set(C.cones)])
        return CdSquare(kind, _FanCorner(F), _FanCorner(Y), _FanCorner(C), _FanCorner(D))
    F = data["fan"]
    if "refinement" in data:
        Fr = data["refinement"]
    else:
        Fr = stellar_subdivide(F, data["ray"])
    if not is_refinement(Fr, F):
        raise ShapeError("the blow-up needs a refinement of the fan")
    if Fr == F:
        raise ShapeError("the refinement is trivial")
    return CdSquare(kind, _FanCorner(F), _FanCorner(Fr), _FanCorner(F, True), _FanCorner(Fr, True))


def faces_avoiding(A):
    """Faces of the carrier that avoid the ideal: the points of ``MSpec A``."""
    return [F for F in A.carrier.face_list if _face_avoids(A.carrier, F, A.ideal)]


def _face_avoids(C, F, I):
    # a face meets an ideal iff it contains one of its generators
    return not any(C.in_face(g, F) for g in I.generators)


@dataclass
class SquareReport:
    kind: str
    acyclic: bool
    checked: int
    failures: list
    coeff: str
    q_max: int

    def as_dict(self):
        return {"type": self.kind, "acyclic": self.acyclic, "weights_checked": self.checked,
                "failures": self.failures, "coeff": self.coeff, "q_max": self.q_max}


def _point(dim):
    return ChainComplex({0: dim}, {}, 0)


def _affine_piece(A, Asn, a, q):
    if A is None or Asn is None:
        return None
    comp = unit_lattice_sn(Asn, a)
    return None if comp is None else comp.basis


def _affine_corner_map(Ls, Lt, q, S, T):
    cols = _lattice_map(Ls, Lt, q, S.dim(0))
    return ChainMap(S, T, {0: cols})


def _affine_weights(sq, window):
    corners = [sq.X, sq.Y, sq.C, sq.D]
    ref = sq.Y if sq.kind in ("sn", "conductor") else sq.X
    p = grading(PctfMonoid(ref.carrier, Ideal()))
    weights = set()
    for A in corners:
        if A is None or A.collapsed:
            continue
        for layer in graded_elements(A.carrier, p, window):
            weights.update(layer)
    return sorted(weights, key=lambda v: (p(v), v))


def verify_square(sq, window=None, q_max=2, coeff=F2):
    """Weight-wise total-complex acyclicity of Ω̃ applied to the square.

    Affine squares use weights of degree ``<= window`` (default 8); fan
    squares use the box ``[-window, window]^n`` of dual vectors (default 3).
    """
    F = _field(coeff)
    failures = []
    checked = 0
    if sq.affine:
        window = 8 if window is None else window
        sn = {}
        for name in "XYCD":
            A = getattr(sq, name)
            sn[name] = None if A is None else (A if A.collapsed else seminormalize_pctf(A))
        for a in _affine_weights(sq, window):
            for q in range(q_max + 1):
                L = {name: _affine_piece(getattr(sq, name), sn[name], a, q) for name in "XYCD"}
                V = {name: _point(0 if L[name] is None else comb(len(L[name]), q)) for name in "XYCD"}
                f = _affine_corner_map(L["X"], L["Y"], q, V["X"], V["Y"])
                g = _affine_corner_map(L["X"], L["C"], q, V["X"], V["C"])
                k = _affine_corner_map(L["Y"], L["D"], q, V["Y"], V["D"])
                h = _affine_corner_map(L["C"], L["D"], q, V["C"], V["D"])
                res = mv_acyclicity(V["X"], V["Y"], V["C"], V["D"], f, g, k, h, F)
                checked += 1
                if not res.acyclic:
                    failures.append({"weight": list(a), "q": q, "dims": res.dims})
    else:
        window = 3 if window is None else window
        n = sq.X.fan.rank
        for m in product(range(-window, window + 1), repeat=n):
            for q in range(q_max + 1):
                P = {name: omega_presheaf(getattr(sq, name).fan, m, q, getattr(sq, name).quotient)
                     for name in "XYCD"}
                cx = {name: derived_sections(getattr(sq, name).fan, P[name]) for name in "XYCD"}

                def arrow(a, b):
                    A, B = getattr(sq, a), getattr(sq, b)
                    La = {c: weight_lattice(c, m, A.quotient) for c in A.fan.cones}
                    Lb = {c: weight_lattice(c, m, B.quotient) for c in B.fan.cones}

                    def pull(s, t):
                        return _lattice_map(La[s], Lb[t], q, P[a].dims[s])

                    return derived_map(A.fan, P[a], B.fan, P[b], pull, cx[a], cx[b])

                f, g, k, h = arrow("X", "Y"), arrow("X", "C"), arrow("Y", "D"), arrow("C", "D")
                res = mv_acyclicity(cx["X"].complex, cx["Y"].complex, cx["C"].complex,
                                    cx["D"].complex, f, g, k, h, F)
                checked += 1
                if not res.acyclic:
                    failures.append({"weight": list(m), "q": q, "dims": res.dims})
    return SquareReport(sq.kind, not failures, checked, failures, str(F), q_max)
