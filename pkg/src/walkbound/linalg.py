"""Dense factorizations reused across right-hand sides.

:class:`RationalLU` runs Gaussian elimination with partial pivoting over
:class:`~fractions.Fraction` entries, so solves are exact.  Among rows with
equal pivot magnitude the lowest index wins.  :class:`FloatLU` wraps LAPACK
``getrf`` through scipy, which applies the same tie rule.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import SolveFailure

_ZERO = Fraction(0)


class RationalLU:
    """Exact PA = LU factorization of a square Fraction matrix.

    Parameters
    ----------
    rows : list of dict
        Sparse rows, ``rows[i][j]`` is entry ``(i, j)``; missing entries are 0.
    """

    def __init__(self, rows):
        n = len(rows)
        work = [dict(r) for r in rows]
        perm = list(range(n))
        lower = [dict() for _ in range(n)]
        for k in range(n):
            best, best_abs = -1, None
            for i in range(k, n):
                v = work[i].get(k)
                if v:
                    av = abs(v)
                    if best_abs is None or av > best_abs:
                        best, best_abs = i, av
            if best < 0:
                raise SolveFailure(f"matrix is singular at column {k}")
            if best != k:
                work[k], work[best] = work[best], work[k]
                perm[k], perm[best] = perm[best], perm[k]
                lower[k], lower[best] = lower[best], lower[k]
            pivot_row = work[k]
            pivot = pivot_row[k]
            tail = [(j, v) for j, v in pivot_row.items() if j > k]
            for i in range(k + 1, n):
                row = work[i]
                v = row.pop(k, None)
                if not v:
                    continue
                factor = v / pivot
                lower[i][k] = factor
                for j, pv in tail:
                    nv = row.get(j, _ZERO) - factor * pv
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        self.n = n
        self.perm = perm
        self.lower = lower
        self.upper = [sorted((j, v) for j, v in r.items() if j > k) for k, r in enumerate(work)]
        self.diag = [work[k][k] for k in range(n)]

    def solve(self, rhs):
        n = self.n
        y = [Fraction(rhs[self.perm[i]]) for i in range(n)]
        for i in range(n):
            acc = y[i]
            for j, l in self.lower[i].items():
                acc -= l * y[j]
            y[i] = acc
        x = [_ZERO] * n
        for i in range(n - 1, -1, -1):
            acc = y[i]
            for j, u in self.upper[i]:
                acc -= u * x[j]
            x[i] = acc / self.diag[i]
        return x


class FloatLU:
    """Partial-pivoting LU of a dense float matrix."""

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=float)
        self.n = self.matrix.shape[0]
        with np.errstate(all="raise"):
            try:
                self._lu = lu_factor(self.matrix, check_finite=True)
            except (FloatingPointError, ValueError) as exc:
                raise SolveFailure(f"LU factorization failed: {exc}") from None
        if np.any(np.diag(self._lu[0]) == 0):
            raise SolveFailure("matrix is singular")

    def solve(self, rhs):
        return lu_solve(self._lu, np.asarray(rhs, dtype=float))


def gauss_seidel(rows, rhs, pinned, tol=1e-12, max_sweeps=10**6):
    """Solve ``h_x = rhs_x + sum_y p_xy h_y`` by Gauss-Seidel sweeps.

    ``rows[x]`` is a sequence of ``(y, p_xy, ...)`` tuples; entries in
    ``pinned`` are held at 0.  Stops when the largest update is at most
    ``tol`` times the largest magnitude.
    """
    n = len(rows)
    h = np.zeros(n)
    order = [x for x in range(n) if x not in pinned]
    for _ in range(max_sweeps):
        delta = 0.0
        for x in order:
            v = rhs[x]
            for item in rows[x]:
                v += item[1] * h[item[0]]
            d = abs(v - h[x])
            if d > delta:
                delta = d
            h[x] = v
        if delta <= tol * max(1.0, float(np.max(np.abs(h)))):
            return h
    raise SolveFailure(f"Gauss-Seidel did not converge in {max_sweeps} sweeps")
