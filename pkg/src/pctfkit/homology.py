"""Chain complexes, exact homology over Q, F_p and Z, induced maps and
Mayer-Vietoris acyclicity of commuting squares.

Matrices are stored sparsely as lists of columns ``{row: value}``; a
complex in degree ``q`` stores the columns of ``∂_q : C_q -> C_{q-1}``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .intlinalg import exterior_power, invariant_factors_columns, solve_integer, vscale
from .monoid import ZERO
from .nerve import ncy_component, theta_map, unit_lattice
from .polyhedra import CapExceeded


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Coefficients:
    """``p == 0`` means Q, ``p > 0`` means F_p and ``integral`` means Z."""

    p: int = 0
    integral: bool = False

    @classmethod
    def parse(cls, text):
        t = str(text).strip().lower()
        if t in ("q", "qq", "rational"):
            return cls(0)
        if t in ("z", "zz", "integer"):
            return cls(0, True)
        if t.startswith("fp:") or t.startswith("f"):
            p = int(t.split(":", 1)[1] if ":" in t else t[1:])
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"{p} is not prime")
            return cls(p)
        raise ValueError(f"unknown coefficients {text!r}")

    def __str__(self):
        if self.integral:
            return "Z"
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    def conv(self, x):
        if self.p:
            return x % self.p
        return Fraction(x)

    def inv(self, x):
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    def reduce(self, x):
        return x % self.p if self.p else x


Q = Coefficients(0)
F2 = Coefficients(2)
Z = Coefficients(0, True)


def _field(coeff):
    if isinstance(coeff, str):
        coeff = Coefficients.parse(coeff)
    return coeff


class ChainComplex:
    """Finite chain complex with integer boundary matrices.

    ``dims`` maps degree to rank; ``boundary[q]`` holds one sparse column
    per basis element of degree ``q``.  ``valid_through`` is the highest
    degree whose homology the complex determines.
    """

    def __init__(self, dims, boundary, valid_through=None):
        self.dims = dict(dims)
        self.boundary = {q: list(cols) for q, cols in boundary.items()}
        for q in self.dims:
            self.boundary.setdefault(q, [{} for _ in range(self.dims[q])])
        self.valid_through = max(self.dims, default=0) if valid_through is None else valid_through

    @property
    def complete(self):
        """Nothing is truncated: the stored degrees are all there is."""
        return self.valid_through >= max(self.dims, default=0)

    @property
    def degrees(self):
        return sorted(self.dims)

    def dim(self, q):
        return self.dims.get(q, 0)

    def columns(self, q):
        return self.boundary.get(q, [])

    def check_d2(self):
        for q in self.degrees:
            for col in self.columns(q):
                acc = {}
                for i, c in col.items():
                    for j, d in self.columns(q - 1)[i].items() if self.dim(q - 1) else ():
                        acc[j] = acc.get(j, 0) + c * d
                if any(acc.values()):
                    return False
        return True

    def euler_characteristic(self):
        return sum((-1) ** q * n for q, n in self.dims.items())


def complex_from_slice(s):
    """Normalized chains: alternating sums of faces, basepoint and degenerate faces dropped."""
    dims = {n: len(layer) for n, layer in enumerate(s.simplices)}
    boundary = {0: [{} for _ in s.simplices[0]]}
    for n in range(1, s.max_degree + 1):
        cols = []
        for x in s.simplices[n]:
            col = {}
            for i in range(n + 1):
                j = s.normalized_face(i, x)
                if j is None or j < 0:
                    continue
                col[j] = col.get(j, 0) + (-1) ** i
            cols.append({j: c for j, c in col.items() if c})
        boundary[n] = cols
    # the top degree is only a source of boundaries
    return ChainComplex(dims, boundary, s.max_degree - 1)


def _axpy(v, f, w, F):
    """``v + f w`` in place over the field."""
    p = F.p
    for i, x in w.items():
        nv = v.get(i, 0) + f * x
        if p:
            nv %= p
        if nv:
            v[i] = nv
        else:
            v.pop(i, None)
    return v


class _Eliminator:
    """Incremental column echelon form with optional label tracking."""

    def __init__(self, F):
        self.F = F
        self.pivots = {}

    def reduce(self, col, label=None):
        F = self.F
        v = {}
        for i, x in col.items():
            x = F.conv(x)
            if x:
                v[i] = x
        t = dict(label) if label is not None else None
        while v:
            piv = max(v)
            if piv not in self.pivots:
                inv = F.inv(v[piv])
                v = {i: F.reduce(x * inv) for i, x in v.items()}
                if t is not None:
                    t = {k: F.reduce(x * inv) for k, x in t.items()}
                self.pivots[piv] = (v, t)
                return True, v, t
            pv, pt = self.pivots[piv]
            f = -v[piv]
            _axpy(v, f, pv, F)
            if t is not None and pt is not None:
                _axpy(t, f, pt, F)
        return False, v, t

    @property
    def rank(self):
        return len(self.pivots)


def rank(columns, coeff=Q):
    E = _Eliminator(_field(coeff))
    for col in columns:
        E.reduce(col)
    return E.rank


def kernel_basis(columns, coeff=Q):
    """Basis of the kernel of the matrix with the given sparse columns."""
    F = _field(coeff)
    E = _Eliminator(F)
    out = []
    for j, col in enumerate(columns):
        new, _, t = E.reduce(col, {j: F.conv(1)})
        if not new:
            out.append({k: x for k, x in t.items() if x})
    return out


@dataclass
class HomologyResult:
    coeff: str
    dims: list
    valid_through: int
    invariant_factors: list = None
    euler: int = None

    def as_dict(self):
        out = {"coeff": self.coeff, "valid_through": self.valid_through}
        if self.invariant_factors is not None:
            out["free_ranks"] = self.dims
            out["invariant_factors"] = self.invariant_factors
        else:
            out["dims"] = self.dims
        return out


def homology(X, coeff=Q, through=None):
    """Homology through the valid range (or ``through`` if smaller).

    Accepts a :class:`ChainComplex` or a slice.  Over Z the result lists
    free ranks plus the torsion invariant factors in each degree.
    """
    C = X if isinstance(X, ChainComplex) else complex_from_slice(X)
    F = _field(coeff)
    top = C.valid_through if through is None else min(through, C.valid_through)
    lo = min(C.degrees, default=0)
    qs = list(range(lo, top + 1))
    if F.integral:
        ranks = {}
        torsion = {}
        for q in range(lo, top + 2):
            fac = invariant_factors_columns(C.columns(q)) if C.dim(q) else []
            ranks[q] = len(fac)
            torsion[q] = [d for d in fac if d > 1]
        dims = [C.dim(q) - ranks[q] - ranks[q + 1] if q + 1 in ranks else None for q in qs]
        tors = [torsion.get(q + 1, []) for q in qs]
        res = HomologyResult(str(F), dims, top, tors)
    else:
        ranks = {q: rank(C.columns(q), F) if C.dim(q) else 0 for q in range(lo, top + 2)}
        dims = [C.dim(q) - ranks[q] - ranks[q + 1] for q in qs]
        res = HomologyResult(str(F), dims, top)
    if top == max(C.degrees, default=0):
        res.euler = sum((-1) ** q * d for q, d in zip(qs, res.dims))
    return res


def torus_oracle(s, q, coeff=Q):
    """Dimension of ``H_q`` of an ``s``-torus: ``C(s, q)``."""
    return comb(s, q)


@dataclass
class ChainMap:
    """Degreewise sparse matrices: ``matrices[q][j]`` is the image of basis element ``j``."""

    source: ChainComplex
    target: ChainComplex
    matrices: dict

    def column(self, q, j):
        cols = self.matrices.get(q)
        return cols[j] if cols else {}

    def image(self, q, vec):
        out = {}
        for j, c in vec.items():
            for i, x in self.column(q, j).items():
                out[i] = out.get(i, 0) + c * x
        return out

    def check_chain_map(self):
        for q in self.source.degrees:
            if q - 1 not in self.source.dims:
                continue
            for j in range(self.source.dim(q)):
                lhs = self.image(q - 1, self.source.columns(q)[j])
                rhs = {}
                for i, c in self.column(q, j).items():
                    for k, x in self.target.columns(q)[i].items():
                        rhs[k] = rhs.get(k, 0) + c * x
                keys = set(lhs) | set(rhs)
                if any(lhs.get(k, 0) != rhs.get(k, 0) for k in keys):
                    return False
        return True


def chain_map_from_simplicial(f, source=None, target=None):
    """Chain map of a simplicial map between slices."""
    S = source or complex_from_slice(f.source)
    T = target or complex_from_slice(f.target)
    mats = {}
    for n in range(min(f.source.max_degree, f.target.max_degree) + 1):
        cols = []
        for x in f.source.simplices[n]:
            y = f(x)
            if y is ZERO or f.target.is_degenerate(y):
                cols.append({})
            else:
                cols.append({f.target.index[n][y]: 1})
        mats[n] = cols
    return ChainMap(S, T, mats)


def compose(g, f):
    mats = {}
    for q in f.source.degrees:
        mats[q] = [g.image(q, f.column(q, j)) for j in range(f.source.dim(q))]
    return ChainMap(f.source, g.target, mats)


def _transpose(columns, nrows):
    rows = [{} for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, x in col.items():
            rows[i][j] = x
    return rows


def _pair(phi, z, F):
    s = sum(x * z[i] for i, x in phi.items() if i in z)
    return F.reduce(s)


def _solve_dense(M, F):
    """Inverse of a square matrix over the field (Gauss-Jordan)."""
    n = len(M)
    A = [[F.conv(x) for x in row] + [F.conv(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        r = next(r for r in range(c, n) if A[r][c])
        A[c], A[r] = A[r], A[c]
        inv = F.inv(A[c][c])
        A[c] = [F.reduce(x * inv) for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [F.reduce(x - f * y) for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


@dataclass
class _HomologyBasis:
    cocycles: list
    cycles: list


def _cohomology_reps(C, q, F):
    """Cocycles whose classes form a basis of ``H^q``."""
    top = max(C.degrees)
    if q + 1 <= top and C.dim(q + 1):
        cocycles = kernel_basis(_transpose(C.columns(q + 1), C.dim(q)), F)
    else:
        cocycles = [{j: F.conv(1)} for j in range(C.dim(q))]
    E = _Eliminator(F)
    if C.dim(q - 1) and q in C.boundary:
        for row in _transpose(C.columns(q), C.dim(q - 1)):
            E.reduce(row)
    return [phi for phi in cocycles if E.reduce(phi)[0]]


def _homology_basis(C, q, F):
    """Cycles ``z_j`` and cocycles ``phi_i`` with ``phi_i(z_j) = δ_ij``."""
    phis = _cohomology_reps(C, q, F)
    if not phis:
        return _HomologyBasis([], [])
    cycles = kernel_basis(C.columns(q), F) if C.dim(q - 1) else [
        {j: F.conv(1)} for j in range(C.dim(q))]
    E = _Eliminator(F)
    chosen = []
    for z in cycles:
        v = {i: _pair(phi, z, F) for i, phi in enumerate(phis)}
        if E.reduce({i: x for i, x in v.items() if x})[0]:
            chosen.append(z)
        if len(chosen) == len(phis):
            break
    P = [[_pair(phi, z, F) for z in chosen] for phi in phis]
    Pinv = _solve_dense(P, F)
    dual = []
    for j in range(len(chosen)):
        acc = {}
        for k, z in enumerate(chosen):
            if Pinv[k][j]:
                _axpy(acc, Pinv[k][j], z, F)
        dual.append(acc)
    return _HomologyBasis(phis, dual)


@dataclass
class InducedMap:
    coeff: str
    matrices: dict
    ranks: dict

    def is_iso(self, q):
        M = self.matrices[q]
        n = len(M)
        m = len(M[0]) if M else 0
        if n == 0:
            return True
        return n == m and self.ranks[q] == n


def induced_map(f, coeff=Q, through=None, bases=None):
    """Matrices of ``H_q(f)`` in chosen homology bases, ``q`` through the valid range.

    ``matrices[q][i][j]`` is the coefficient of target class ``i`` in the
    image of source class ``j``.  Each side uses the cycle basis dual to a
    basis of cocycle classes, so the identity map gets identity matrices.
    ``bases`` may carry precomputed ``(source, target)`` dictionaries of
    bases keyed by degree.
    """
    if not isinstance(f, ChainMap):
        f = chain_map_from_simplicial(f)
    F = _field(coeff)
    S, T = f.source, f.target
    top = min(S.valid_through, T.valid_through)
    if through is not None:
        top = min(top, through)
    sb_all, tb_all = bases if bases is not None else ({}, {})
    mats, ranks = {}, {}
    for q in range(min(S.degrees, default=0), top + 1):
        sb = sb_all.get(q) or _homology_basis(S, q, F)
        tb = tb_all.get(q) or _homology_basis(T, q, F)
        images = [f.image(q, z) for z in sb.cycles]
        M = [[_pair(phi, w, F) for w in images] for phi in tb.cocycles]
        mats[q] = M
        ranks[q] = _dense_rank(M, F)
    return InducedMap(str(F), mats, ranks)


def homology_bases(C, coeff=Q, through=None):
    F = _field(coeff)
    top = C.valid_through if through is None else min(through, C.valid_through)
    return {q: _homology_basis(C, q, F) for q in range(min(C.degrees, default=0), top + 1)}


def _dense_rank(M, F):
    cols = [{i: M[i][j] for i in range(len(M)) if M[i][j]} for j in range(len(M[0]) if M else 0)]
    return rank(cols, F)


def mv_total_complex(X, Y, Z, W, f, g, k, h):
    """Total complex of the square ``f: X->Y, g: X->Z, k: Y->W, h: Z->W``.

    ``Tot_n = X_{n-2} ⊕ Y_{n-1} ⊕ Z_{n-1} ⊕ W_n``; it is acyclic exactly
    when the square is homotopy cartesian.
    """
    degs = set()
    for C, s in ((X, 2), (Y, 1), (Z, 1), (W, 0)):
        degs.update(q + s for q in C.degrees)
    offsets = {}
    dims = {}
    for n in sorted(degs):
        parts = [(X, n - 2), (Y, n - 1), (Z, n - 1), (W, n)]
        off = 0
        offs = []
        for C, q in parts:
            offs.append(off)
            off += C.dim(q)
        offsets[n] = offs
        dims[n] = off
    boundary = {}
    for n in sorted(degs):
        cols = []
        ox, oy, oz, ow = offsets[n]
        tx, ty, tz, tw = offsets.get(n - 1, (0, 0, 0, 0))

        def shift(vec, base, sign=1):
            return {base + i: sign * c for i, c in vec.items()}

        for j in range(X.dim(n - 2)):
            col = {}
            if X.dim(n - 3):
                col.update(shift(X.columns(n - 2)[j], tx))
            col.update(shift(f.column(n - 2, j), ty))
            col.update(shift(g.column(n - 2, j), tz, -1))
            cols.append(col)
        for j in range(Y.dim(n - 1)):
            col = {}
            if Y.dim(n - 2):
                col.update(shift(Y.columns(n - 1)[j], ty, -1))
            col.update(shift(k.column(n - 1, j), tw))
            cols.append(col)
        for j in range(Z.dim(n - 1)):
            col = {}
            if Z.dim(n - 2):
                col.update(shift(Z.columns(n - 1)[j], tz, -1))
            col.update(shift(h.column(n - 1, j), tw))
            cols.append(col)
        for j in range(W.dim(n)):
            cols.append(shift(W.columns(n)[j], tw) if W.dim(n - 1) else {})
        boundary[n] = [{i: c for i, c in col.items() if c} for col in cols]
    bounds = [C.valid_through + s for C, s in ((X, 2), (Y, 1), (Z, 1), (W, 0)) if not C.complete]
    valid = min(bounds) if bounds else max(dims, default=0)
    return ChainComplex(dims, boundary, valid)


def _commutes(f, g, k, h):
    for q in f.source.degrees:
        for j in range(f.source.dim(q)):
            a = k.image(q, f.column(q, j))
            b = h.image(q, g.column(q, j))
            keys = set(a) | set(b)
            if any(a.get(i, 0) != b.get(i, 0) for i in keys):
                return False
    return True


@dataclass
class MVResult:
    acyclic: bool
    dims: list
    valid_through: int
    coeff: str


def mv_acyclicity(X, Y, Z, W, f, g, k, h, coeff=F2, through=None):
    """Is the total complex of the commuting square acyclic in its valid range?

    ``through`` caps the checked degree of the total complex; square
    degree ``q`` corresponds to total degrees up to ``q + 2``.
    """
    if not _commutes(f, g, k, h):
        raise ValueError("the square does not commute")
    T = mv_total_complex(X, Y, Z, W, f, g, k, h)
    H = homology(T, coeff, through)
    return MVResult(all(d == 0 for d in H.dims), H.dims, H.valid_through, H.coeff)


def omega_homology(A, a, q, coeff=Q):
    """``dim H_q`` of the weight ``a`` piece of Ω̃: ``C(rank U(A_sn⟨a⟩), q)``."""
    return comb(unit_lattice(A, a).rank, q)


def exterior_complex(r, top):
    """Zero-differential complex with ``Λ^q Z^r`` in degree ``q``; ``r is None`` gives zero."""
    if r is None:
        return ChainComplex({q: 0 for q in range(top + 1)}, {}, top)
    return ChainComplex({q: comb(r, q) for q in range(top + 1)}, {}, top)


def exterior_chain_map(source, target, M, top):
    """``Λ^q`` of the lattice map whose row ``j`` is the image of source basis vector ``j``.

    ``M is None`` gives the zero map.
    """
    mats = {}
    for q in range(top + 1):
        if M is None or not source.dim(q) or not target.dim(q):
            mats[q] = [{} for _ in range(source.dim(q))]
            continue
        L = exterior_power(M, q) if q else [(1,)]
        mats[q] = [{i: x for i, x in enumerate(row) if x} for row in L]
    return ChainMap(source, target, mats)


def inclusion_matrix(src_basis, tgt_basis):
    """Rows: coordinates of each source basis vector in the target basis."""
    rows = []
    for b in src_basis:
        c = solve_integer(list(tgt_basis), b)
        if c is None:
            raise ValueError(f"{b} is not in the target lattice")
        rows.append(tuple(c))
    return rows


@dataclass
class StabilizationReport:
    status: str
    coeff: str
    weights: list
    dims: list
    map_ranks: list
    stable_value: list = None
    stable_step: int = None
    target: list = None
    reason: str = ""

    @property
    def converged(self):
        return self.status == "CONVERGED"

    def as_dict(self):
        return {
            "status": self.status,
            "coeff": self.coeff,
            "weights": self.weights,
            "dims": self.dims,
            "map_ranks": self.map_ranks,
            "stable_value": self.stable_value,
            "stable_step": self.stable_step,
            "target": self.target,
            "reason": self.reason,
        }


def stabilize(A, seq, a, q_max=2, coeff=Q, K_max=5, budget=200_000):
    """Homology along ``a, a^{c_1}, a^{c_1 c_2}, ...`` with the induced θ-maps.

    CONVERGED needs two consecutive θ-maps inducing isomorphisms in every
    degree ``<= q_max``, with the common value equal to the Ω̃ closed form.
    Anything short of that, including running out of steps or of the
    simplex budget, is INCONCLUSIVE.
    """
    F = _field(coeff)
    seq = list(seq)
    steps = min(K_max, len(seq))
    a = tuple(a)
    target = [omega_homology(A, a, q, F) for q in range(q_max + 1)]
    D = q_max + 1
    weights, dims, ranks = [], [], []
    isos = []
    report = StabilizationReport("INCONCLUSIVE", str(F), weights, dims, ranks, target=target)
    w = a
    try:
        s = ncy_component(A, w, D, budget)
    except CapExceeded as exc:
        report.reason = f"budget: {exc}"
        return report
    C = complex_from_slice(s)
    bases = homology_bases(C, F, q_max)
    for k in range(steps + 1):
        weights.append(list(w))
        dims.append([len(bases[q].cycles) for q in range(q_max + 1)])
        if len(isos) >= 2 and isos[-1] and isos[-2]:
            j = k - 2
            if dims[j] == target:
                report.status = "CONVERGED"
                report.stable_value = dims[j]
                report.stable_step = j
                return report
        if k == steps:
            break
        c = seq[k]
        w2 = vscale(c, w)
        try:
            t = ncy_component(A, w2, D, budget)
        except CapExceeded as exc:
            report.reason = f"budget: {exc}"
            return report
        C2 = complex_from_slice(t)
        bases2 = homology_bases(C2, F, q_max)
        f = chain_map_from_simplicial(theta_map(s, c, t), C, C2)
        m = induced_map(f, F, q_max, (bases, bases2))
        ranks.append([m.ranks[q] for q in range(q_max + 1)])
        isos.append(all(m.is_iso(q) for q in range(q_max + 1)))
        s, C, bases, w = t, C2, bases2, w2
    if dims and all(d == target for d in dims):
        report.reason = "dimensions agree with the closed form but the θ-maps are not isomorphisms"
    else:
        report.reason = "no two consecutive isomorphisms within the step budget"
    return report
