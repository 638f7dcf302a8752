"""Exact integer and rational linear algebra on small dense matrices.

Vectors are tuples of Python ints; matrices are lists of row tuples.
Everything here is exact; nothing touches floating point.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def vneg(v):
    return tuple(-a for a in v)


def is_zero(v):
    return not any(v)


def content(v):
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive(v):
    """Divide an integer vector by the gcd of its entries."""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(a // g for a in v)


def transpose(rows, ncols=None):
    if not rows:
        return [tuple() for _ in range(ncols or 0)]
    return [tuple(col) for col in zip(*rows)]


def hnf(rows, ncols=None):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U * rows == H``.  ``H`` is
    in row echelon form, pivots are positive, entries above a pivot lie in
    ``[0, pivot)`` and zero rows come last.
    """
    m = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    A = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= m:
            break
        # euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                        U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if r < m and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            pivots.append(c)
            r += 1
    return [tuple(row) for row in A], [tuple(row) for row in U]


def lattice_basis(vectors, ncols=None):
    """HNF basis (nonzero rows) of the lattice spanned by ``vectors``."""
    vectors = [tuple(v) for v in vectors]
    if ncols is None:
        ncols = len(vectors[0]) if vectors else 0
    if not vectors:
        return []
    H, _ = hnf(vectors, ncols)
    return [row for row in H if any(row)]


def pivot_columns(H):
    cols = []
    for row in H:
        for j, x in enumerate(row):
            if x:
                cols.append(j)
                break
    return cols


def reduce_mod_lattice(v, basis):
    """Canonical representative of ``v`` modulo the lattice with HNF ``basis``."""
    v = list(v)
    for row, c in zip(basis, pivot_columns(basis)):
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def left_kernel(rows, ncols=None):
    """Saturated integer basis of ``{x : x * rows == 0}``."""
    m = len(rows)
    if m == 0:
        return []
    H, U = hnf(rows, ncols)
    return [U[i] for i in range(m) if not any(H[i])]


def right_kernel(rows, ncols):
    """Saturated integer basis of ``{y in Z^ncols : rows * y == 0}``."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    return left_kernel(transpose(rows), len(rows))


def solve_integer(rows, v):
    """Integer ``x`` with ``x * rows == v``, or ``None`` when there is none."""
    v = tuple(v)
    m = len(rows)
    if m == 0:
        return () if is_zero(v) else None
    H, U = hnf(rows, len(v))
    z = [0] * m
    rem = list(v)
    for i, row in enumerate(H):
        if not any(row):
            break
        c = next(j for j, x in enumerate(row) if x)
        if rem[c] % row[c]:
            return None
        q = rem[c] // row[c]
        z[i] = q
        if q:
            rem = [a - q * b for a, b in zip(rem, row)]
    if any(rem):
        return None
    x = [0] * m
    for i, zi in enumerate(z):
        if zi:
            x = [a + zi * b for a, b in zip(x, U[i])]
    return tuple(x)


def solve_rational(rows, v):
    """Rational ``x`` with ``x * rows == v`` (some solution), or ``None``."""
    m = len(rows)
    n = len(v)
    # Gaussian elimination on the transposed system rows^T x = v
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(v[j])] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][m]
    return tuple(x)


def rank(rows):
    """Rank over Q."""
    return len(lattice_basis(rows)) if rows else 0


def in_span(rows, v):
    return solve_rational(rows, v) is not None


def det(M):
    """Determinant via fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def exterior_power(M, q):
    """Matrix of the q-th exterior power of ``M`` (rows act on the left).

    Rows and columns are indexed by q-subsets in lexicographic order; the
    entry is the corresponding q x q minor.
    """
    nr = len(M)
    nc = len(M[0]) if M else 0
    rsets = list(combinations(range(nr), q))
    csets = list(combinations(range(nc), q))
    return [tuple(det([[M[i][j] for j in cs] for i in rs]) for cs in csets) for rs in rsets]


def invariant_factors(rows, ncols=None):
    """Nonzero invariant factors (Smith normal form diagonal) of an integer matrix.

    Sparse-friendly: unit pivots are eliminated first, the remaining block
    is reduced densely.
    """
    A = {}
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                A[(i, j)] = x
    return _snf_sparse(A)


def invariant_factors_columns(columns):
    """Invariant factors of a matrix given as a list of sparse columns ``{row: value}``."""
    A = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            if x:
                A[(i, j)] = x
    return _snf_sparse(A)


def _snf_sparse(entries):
    rows = {}
    for (i, j), x in entries.items():
        rows.setdefault(i, {})[j] = x
    cols = {}
    for (i, j), x in entries.items():
        cols.setdefault(j, set()).add(i)
    units = 0
    # eliminate with +-1 pivots while any exist
    changed = True
    while changed:
        changed = False
        for i in list(rows):
            row = rows.get(i)
            if not row:
                rows.pop(i, None)
                continue
            j = next((j for j, x in row.items() if x in (1, -1)), None)
            if j is None:
                continue
            pv = row[j]
            # clear column j using row i
            for k in list(cols.get(j, ())):
                if k == i:
                    continue
                rk = rows[k]
                f = rk[j] * pv  # pv is its own inverse
                for jj, x in row.items():
                    nv = rk.get(jj, 0) - f * x
                    if nv:
                        rk[jj] = nv
                        cols.setdefault(jj, set()).add(k)
                    else:
                        rk.pop(jj, None)
                        cols.get(jj, set()).discard(k)
                if not rk:
                    del rows[k]
            for jj in row:
                cols[jj].discard(i)
            del rows[i]
            units += 1
            changed = True
    # dense remainder
    rest_rows = sorted(rows)
    rest_cols = sorted({j for r in rows.values() for j in r})
    M = [[rows[i].get(j, 0) for j in rest_cols] for i in rest_rows]
    return [1] * units + _snf_dense(M)


def _snf_dense(M):
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if A else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        dirty = True
            if not dirty:
                # divisibility condition on the remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
                continue
            nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                  if A[i][j] and (i == t or j == t)]
            _, pi, pj = min(nz)
            A[t], A[pi] = A[pi], A[t]
            for row in A:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag
