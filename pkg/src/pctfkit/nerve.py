"""Weight pieces of the cyclic nerve, edgewise subdivision and dilation maps.

An n-simplex is a tuple ``(a_0, ..., a_n)`` of nonzero monoid elements.
Face ``d_i`` multiplies ``a_i`` and ``a_{i+1}`` for ``i < n``; ``d_n``
multiplies ``a_n`` into ``a_0``.  A face whose product falls into the
ideal is the basepoint :data:`ZERO`.  Only nondegenerate simplices (no
identity past slot 0) are stored.
"""

from dataclasses import dataclass
from functools import cached_property
from math import comb

from .intlinalg import dot, lattice_basis, vadd, vscale, vsub
from .monoid import (
    ZERO, GradingFunctional, Ideal, NoPositiveGrading, PctfMonoid, grading, graded_elements,
    make_ideal, radical,
)
from .polyhedra import CapExceeded
from .saturation import seminormalize_pctf


class _WeightModel:
    """How to split a weight among the entries of a tuple."""

    def options(self, rem, allow_identity):
        raise NotImplementedError

    def is_empty(self, rem):
        raise NotImplementedError


class _NaturalWeight(_WeightModel):
    def __init__(self, A, p, w):
        self.p = p
        layers = graded_elements(A.carrier, p, w)
        gens = A.ideal.generators
        member_sets = [set(layer) for layer in layers]
        self.ideal_elems = set()
        self.layers = []
        for k, layer in enumerate(layers):
            keep = []
            for v in layer:
                hit = False
                for g in gens:
                    dg = dot(p, g)
                    if dg <= k and vsub(v, g) in member_sets[k - dg]:
                        hit = True
                        break
                if hit:
                    self.ideal_elems.add(v)
                else:
                    keep.append(v)
            self.layers.append(keep)

    def options(self, rem, allow_identity):
        for k in range(0 if allow_identity else 1, rem + 1):
            for x in self.layers[k]:
                yield x, rem - k

    def is_empty(self, rem):
        return rem == 0

    def mul(self, a, b):
        s = vadd(a, b)
        return ZERO if s in self.ideal_elems else s


class _ElementWeight(_WeightModel):
    def __init__(self, C, p, a):
        layers = graded_elements(C, p, dot(p, a))
        every = {v for layer in layers for v in layer}
        self.divisors = sorted(v for v in every if vsub(a, v) in every)
        self.divset = set(self.divisors)
        self.zero = C.zero_vector()
        self._options = {}

    def options(self, rem, allow_identity):
        key = (rem, allow_identity)
        if key not in self._options:
            opts = []
            for x in self.divisors:
                if not any(x) and not allow_identity:
                    continue
                r = vsub(rem, x)
                if r in self.divset:
                    opts.append((x, r))
            self._options[key] = opts
        return self._options[key]

    def is_empty(self, rem):
        return not any(rem)

    def mul(self, a, b):
        return vadd(a, b)


class _EmptyWeight(_WeightModel):
    """Weights of the zero monoid: nothing but the basepoint."""

    def options(self, rem, allow_identity):
        return iter(())

    def is_empty(self, rem):
        return False

    def mul(self, a, b):
        return ZERO


def _exists(model, length, total, identity_slots):
    def rec(i, rem):
        if i == length:
            return model.is_empty(rem)
        return any(rec(i + 1, r) for _, r in model.options(rem, identity_slots(i)))
    return rec(0, total)


def _tuples(model, length, total, identity_slots):
    """All tuples of the given length splitting ``total``; ``identity_slots(i)`` permits the identity."""
    out = []

    def rec(i, rem, acc):
        if i == length:
            if model.is_empty(rem):
                out.append(tuple(acc))
            return
        for x, r in model.options(rem, identity_slots(i)):
            acc.append(x)
            rec(i + 1, r, acc)
            acc.pop()

    rec(0, total, [])
    out.sort()
    return out


def _count(model, length, total):
    """Number of tuples ``_tuples`` would produce with only slot 0 allowing the identity."""
    memo = {}

    def rec(i, rem):
        key = (i == 0, length - i, rem)
        if key in memo:
            return memo[key]
        if i == length:
            n = int(model.is_empty(rem))
        else:
            n = sum(rec(i + 1, r) for _, r in model.options(rem, i == 0))
        memo[key] = n
        return n

    return rec(0, total)


class SimplicialSlice:
    """A finite graded set of nondegenerate simplices with face maps."""

    simplices: tuple
    max_degree: int

    def face(self, i, x):
        raise NotImplementedError

    def is_degenerate(self, x):
        raise NotImplementedError

    @cached_property
    def index(self):
        return [{s: j for j, s in enumerate(layer)} for layer in self.simplices]

    def counts(self):
        return [len(layer) for layer in self.simplices]

    def degree_of(self, x):
        raise NotImplementedError

    def normalized_face(self, i, x):
        """Index of ``d_i x`` in the slice, ``None`` for the basepoint, ``-1`` if degenerate."""
        y = self.face(i, x)
        if y is ZERO:
            return None
        if self.is_degenerate(y):
            return -1
        return self.index[self.degree_of(x) - 1][y]

    @property
    def complete(self):
        """True when no nondegenerate simplex exists above ``max_degree``."""
        return self._complete


class CyclicSlice(SimplicialSlice):
    """One weight piece of the normalized cyclic nerve, through degree ``max_degree``.

    ``kind`` is ``"N"`` for a total grading weight (an integer) and ``"A"``
    for a monoid-element weight (a vector, enumerated on the cancellative
    cover).
    """

    def __init__(self, monoid, kind, weight, max_degree, grading_functional, model, budget=None):
        if budget is not None:
            size = sum(_count(model, n + 1, weight) for n in range(max_degree + 1))
            if size > budget:
                raise CapExceeded(f"slice has {size} simplices, budget is {budget}")
        self.monoid = monoid
        self.kind = kind
        self.weight = weight
        self.max_degree = max_degree
        self.grading = grading_functional
        self._model = model
        layers = []
        for n in range(max_degree + 1):
            layers.append(tuple(_tuples(model, n + 1, weight, lambda i: i == 0)))
        self.simplices = tuple(layers)
        self._complete = not _exists(model, max_degree + 2, weight, lambda i: i == 0)

    def degree_of(self, x):
        return len(x) - 1

    def mul(self, a, b):
        return self._model.mul(a, b)

    def face(self, i, x):
        n = len(x) - 1
        if n == 0:
            raise ValueError("a 0-simplex has no faces")
        if i < n:
            m = self.mul(x[i], x[i + 1])
            if m is ZERO:
                return ZERO
            return x[:i] + (m,) + x[i + 2:]
        m = self.mul(x[n], x[0])
        if m is ZERO:
            return ZERO
        return (m,) + x[1:n]

    def is_degenerate(self, x):
        return any(not any(a) for a in x[1:])

    def cyclic(self, x):
        """``t(a_0, ..., a_n) = (a_n, a_0, ..., a_{n-1})``."""
        return (x[-1],) + x[:-1]

    def dump(self):
        degrees = []
        for n, layer in enumerate(self.simplices):
            faces = []
            cyc = []
            for x in layer:
                if n:
                    faces.append([self.normalized_face(i, x) for i in range(n + 1)])
                t = self.cyclic(x)
                cyc.append(-1 if self.is_degenerate(t) else self.index[n][t])
            degrees.append({
                "degree": n,
                "simplices": [[list(a) for a in x] for x in layer],
                "faces": faces,
                "cyclic": cyc,
            })
        weight = self.weight if self.kind == "N" else list(self.weight)
        return {"kind": self.kind, "weight": weight, "max_degree": self.max_degree,
                "complete": self.complete, "degrees": degrees}


def ncy_slice(A, p, w, D, budget=None):
    """Nondegenerate simplices of total ``p``-weight ``w`` in degrees ``0..D``.

    Tuples whose product lies in the ideal are included: they belong to the
    weight-``w`` piece of the pointed nerve even though their A-weight is
    the basepoint.
    """
    if w < 0 or D < 0:
        raise ValueError("weight and degree bound must be nonnegative")
    if p is None:
        p = grading(A)
    if not isinstance(p, GradingFunctional):
        p = GradingFunctional(tuple(p))
    if any(p(g) <= 0 for g in A.generators):
        raise NoPositiveGrading("grading is not positive on every generator")
    if A.collapsed:
        return CyclicSlice(A, "N", w, D, p, _EmptyWeight(), budget)
    return CyclicSlice(A, "N", w, D, p, _NaturalWeight(A, p.p, w), budget)


def ncy_component(A, a, D, budget=None):
    """The A-weight ``a`` piece, computed on the cancellative cover."""
    if a is ZERO or A.collapsed:
        raise ValueError("the weight must be a nonzero element")
    a = tuple(a)
    if not A.carrier.contains(a):
        raise ValueError(f"{a} is not in the monoid")
    if A.in_ideal(a):
        raise ValueError(f"{a} lies in the ideal")
    p = grading(A)
    cover = PctfMonoid(A.carrier, Ideal())
    return CyclicSlice(cover, "A", a, D, p, _ElementWeight(A.carrier, p.p, a), budget)


class SubdividedSlice(SimplicialSlice):
    """``sd_r`` of a slice: n-simplices are r x (n+1) matrices stored row by row."""

    def __init__(self, base, r, max_degree=None):
        if r < 1:
            raise ValueError("r must be positive")
        self.base = base
        self.r = r
        self.max_degree = base.max_degree if max_degree is None else max_degree
        layers = []
        for n in range(self.max_degree + 1):
            raw = _tuples(base._model, r * (n + 1), base.weight, lambda i: True)
            layers.append(tuple(x for x in raw if not self._sd_degenerate(x, n)))
        self.simplices = tuple(layers)
        self._complete = False

    def rows(self, x):
        n1 = len(x) // self.r
        return [x[j * n1:(j + 1) * n1] for j in range(self.r)]

    def degree_of(self, x):
        return len(x) // self.r - 1

    def _sd_degenerate(self, x, n):
        n1 = n + 1
        return any(all(not any(x[j * n1 + c]) for j in range(self.r)) for c in range(1, n1))

    def is_degenerate(self, x):
        return self._sd_degenerate(x, self.degree_of(x))

    def face(self, i, x):
        n = self.degree_of(x)
        if n == 0:
            raise ValueError("a 0-simplex has no faces")
        rows = self.rows(x)
        mul = self.base.mul
        new = []
        if i < n:
            for row in rows:
                m = mul(row[i], row[i + 1])
                if m is ZERO:
                    return ZERO
                new.append(row[:i] + (m,) + row[i + 2:])
        else:
            r = self.r
            for b in range(r):
                prev = rows[b - 1]
                m = mul(prev[n], rows[b][0])
                if m is ZERO:
                    return ZERO
                new.append((m,) + rows[b][1:n])
        return tuple(a for row in new for a in row)

    def rotate(self, x, k=1):
        """Cyclic row permutation by ``k`` rows."""
        rows = self.rows(x)
        k %= self.r
        rows = rows[k:] + rows[:k]
        return tuple(a for row in rows for a in row)

    def base_degree_count(self, n):
        """Nondegenerate simplices of the base at degree ``r(n+1)-1``."""
        q = self.r * (n + 1) - 1
        return len(_tuples(self.base._model, q + 1, self.base.weight, lambda i: i == 0))


def subdivide(s, r, max_degree=None):
    return SubdividedSlice(s, r, max_degree)


class FixedSlice(SimplicialSlice):
    """Simplices of ``sd_r`` fixed by the subgroup ``C_s`` of ``C_r``."""

    def __init__(self, sub, s):
        if s < 1 or sub.r % s:
            raise ValueError("s must divide r")
        self.sub = sub
        self.s = s
        self.max_degree = sub.max_degree
        shift = sub.r // s
        self.simplices = tuple(tuple(x for x in layer if sub.rotate(x, shift) == x)
                               for layer in sub.simplices)
        self._complete = False

    def face(self, i, x):
        return self.sub.face(i, x)

    def is_degenerate(self, x):
        return self.sub.is_degenerate(x)

    def degree_of(self, x):
        return self.sub.degree_of(x)


def fixed_points(sub, s):
    return FixedSlice(sub, s)


def delta(x, r):
    """Repeat a simplex ``r`` times as the rows of a matrix."""
    return tuple(x) * r


def _scaled_slice(s, c):
    if s.kind == "N":
        return ncy_slice(s.monoid, s.grading, c * s.weight, s.max_degree)
    return ncy_component(s.monoid, vscale(c, s.weight), s.max_degree)


def delta_r_check(A, a, r, D):
    """``δ_r`` is a degreewise bijection onto the ``C_r``-fixed simplices, compatible with faces."""
    base = ncy_component(A, a, D)
    if r == 1:
        return True
    target = ncy_component(A, vscale(r, a), D)
    fixed = fixed_points(subdivide(target, r), r)
    for n in range(D + 1):
        image = {delta(x, r) for x in base.simplices[n]}
        if image != set(fixed.simplices[n]) or len(image) != len(base.simplices[n]):
            return False
        if n == 0:
            continue
        for x in base.simplices[n]:
            for i in range(n + 1):
                y = base.face(i, x)
                z = fixed.face(i, delta(x, r))
                if (y is ZERO) != (z is ZERO):
                    return False
                if y is not ZERO and delta(y, r) != z:
                    return False
    return True


@dataclass
class SimplicialMap:
    """A map of slices given simplexwise; ``None`` images mean the basepoint."""

    source: SimplicialSlice
    target: SimplicialSlice
    fn: object

    def __call__(self, x):
        return self.fn(x)

    def check_simplicial(self):
        for n in range(1, self.source.max_degree + 1):
            for x in self.source.simplices[n]:
                fx = self(x)
                for i in range(n + 1):
                    y = self.source.face(i, x)
                    lhs = ZERO if y is ZERO else self(y)
                    rhs = ZERO if fx is ZERO else self.target.face(i, fx)
                    if lhs != rhs:
                        return False
        return True


def theta_map(s, c, target=None):
    """Coordinatewise ``c``-th power into the weight ``c w`` slice."""
    if target is None:
        target = _scaled_slice(s, c)
    A = s.monoid

    def fn(x):
        out = []
        for a in x:
            b = vscale(c, a)
            if s.kind == "N" and A.in_ideal(b):
                return ZERO
            out.append(b)
        return tuple(out)

    return SimplicialMap(s, target, fn)


def alpha_map(s, r):
    """``(a_0, ..., a_n) -> (a_0^r (a_1...a_n)^{r-1}, a_1, ..., a_n)``."""
    target = _scaled_slice(s, r)

    def fn(x):
        rest = s.monoid.carrier.zero_vector()
        for a in x[1:]:
            rest = vadd(rest, a)
        head = vadd(vscale(r, x[0]), vscale(r - 1, rest))
        if s.kind == "N" and s.monoid.in_ideal(head):
            return ZERO
        return (head,) + tuple(x[1:])

    return SimplicialMap(s, target, fn)


def mu_map(sub):
    """Column products ``sd_r X -> X``."""
    base = sub.base

    def fn(x):
        rows = sub.rows(x)
        out = []
        for col in zip(*rows):
            v = col[0]
            for a in col[1:]:
                v = base.mul(v, a)
                if v is ZERO:
                    return ZERO
            out.append(v)
        return tuple(out)

    return SimplicialMap(sub, base, fn)


@dataclass(frozen=True)
class UnitLatticeComponent:
    weight: tuple
    basis: tuple
    rank: int


def _sn(A):
    return A if A.collapsed else seminormalize_pctf(A)


def unit_lattice_sn(Asn, a):
    """Unit lattice of ``Asn⟨a⟩`` for an already seminormal ``Asn``; ``None`` if ``a`` is zero there."""
    if Asn.collapsed:
        return None
    C = Asn.carrier
    a = tuple(a)
    if not C.contains(a) or Asn.in_ideal(a):
        return None
    F = C.face_of(a)
    basis = tuple(lattice_basis([C.generators[i] for i in F], C.ambient_rank))
    return UnitLatticeComponent(a, basis, len(basis))


def unit_lattice(A, a):
    if a is ZERO:
        raise ValueError("the basepoint has no unit lattice")
    a = tuple(a)
    if radical(A, Ideal()).contains(A.carrier, a) or A.collapsed:
        raise ValueError(f"{a} is nilpotent")
    comp = unit_lattice_sn(_sn(A), a)
    if comp is None:
        raise ValueError(f"{a} is nilpotent")
    return comp


def omega_decomposition(A, I, window):
    """Weights ``a`` of ``J = √(I A_sn)`` up to degree ``window`` with their unit lattices."""
    Asn = _sn(A)
    if Asn.collapsed:
        return []
    C = Asn.carrier
    I = I if isinstance(I, Ideal) else Ideal(tuple(tuple(g) for g in I))
    if not I.generators:
        return []
    J = radical(Asn, make_ideal(C, I.generators))
    p = grading(Asn)
    out = []
    for layer in graded_elements(C, p, window):
        for a in layer:
            if J.contains(C, a) and not Asn.in_ideal(a):
                out.append((a, unit_lattice_sn(Asn, a)))
    return out


def torus_counts(s, D):
    """Binomial coefficients ``C(s, q)`` for ``q = 0..D``."""
    return [comb(s, q) for q in range(D + 1)]
