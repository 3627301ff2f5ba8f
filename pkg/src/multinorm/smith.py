"""Smith normal form over the integers, with unimodular transforms.

Matrices are plain lists of lists of Python ints (row-major), so entries
never overflow.  ``smith_normal_form`` returns ``(U, D, V)`` with
``U @ A @ V == D``.
"""

from __future__ import annotations


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B, inner=None):
    """Product of two list-matrices; ``inner`` is needed when A has no rows."""
    if not A:
        return []
    n_inner = len(A[0]) if inner is None else inner
    n_cols = len(B[0]) if B else 0
    if n_inner == 0:
        return [[0] * n_cols for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


def _min_pivot(A, t, m, n):
    best = None
    best_abs = 0
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            v = row[j]
            if v:
                av = -v if v < 0 else v
                if best is None or av < best_abs:
                    best, best_abs = (i, j), av
                    if av == 1:
                        return best
    return best


def _snf(A, want_uinv=False):
    m = len(A)
    n = len(A[0]) if m else 0
    A = [list(r) for r in A]
    U = identity(m)
    V = identity(n)
    Ui = identity(m) if want_uinv else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        ra, rs = A[dst], A[src]
        for k in range(n):
            if rs[k]:
                ra[k] += c * rs[k]
        ua, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ua[k] += c * us[k]
        if Ui is not None:
            for r in Ui:
                if r[dst]:
                    r[src] -= c * r[dst]

    def add_col(dst, src, c):
        for r in A:
            if r[src]:
                r[dst] += c * r[src]
        for r in V:
            if r[src]:
                r[dst] += c * r[src]

    for t in range(min(m, n)):
        piv = _min_pivot(A, t, m, n)
        if piv is None:
            break
        i, j = piv
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                v = A[i][t]
                if v:
                    q = v // p
                    add_row(i, t, -q)
                    if A[i][t]:
                        dirty = True
            row_t = A[t]
            for j in range(t + 1, n):
                v = row_t[j]
                if v:
                    q = v // p
                    add_col(j, t, -q)
                    if row_t[j]:
                        dirty = True
            if dirty:
                # a remainder survived: move the new smallest entry of the
                # pivot row/column into position and go again
                best = None
                for i in range(t, m):
                    v = A[i][t]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, t)
                for j in range(t + 1, n):
                    v = A[t][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            # divisibility: every remaining entry must be a multiple of p
            bad = None
            for i in range(t + 1, m):
                r = A[i]
                for j in range(t + 1, n):
                    if r[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
            if Ui is not None:
                for r in Ui:
                    r[t] = -r[t]
    return U, A, V, Ui


def smith_normal_form(A):
    """Return ``(U, D, V)`` with U, V unimodular and ``U A V = D``.

    D is diagonal, its nonzero diagonal entries are positive and each one
    divides the next.  Pivots are chosen by smallest absolute value, ties
    broken row-major, so the output is reproducible.

    >>> U, D, V = smith_normal_form([[2, 4], [6, 8]])
    >>> D
    [[2, 0], [0, 4]]
    """
    U, D, V, _ = _snf(A)
    return U, D, V


def smith_with_inverse(A):
    """Like :func:`smith_normal_form` but also returns ``U^{-1}``."""
    return _snf(A, want_uinv=True)


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def integer_kernel(A, ncols):
    """A basis (as columns of a list-matrix) of ``{x in Z^ncols : A x = 0}``."""
    if not A:
        return identity(ncols)
    _, D, V, _ = _snf(A)
    rank = sum(1 for d in diagonal(D) if d)
    return [row[rank:] for row in V]


def determinant(A):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]
