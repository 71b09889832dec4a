"""Deterministic dense linear algebra over Fraction or float rows.

Everything here is plain Gaussian elimination to reduced row echelon
form.  Exact rows (Fractions) pivot on the first nonzero entry; float
rows use partial pivoting (largest magnitude, first-max tie break) with
entries of magnitude <= eta treated as zero.  Pivots are normalized to
1, which makes reduced bases canonical and runs reproducible.

Desk scale only: matrices are at most a few dozen rows by a few
thousand columns.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .scalar import Scalar


def _is_zero(value: Scalar, eta) -> bool:
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= eta


def rref(rows: list[list[Scalar]], eta, tails: Optional[list[Scalar]] = None):
    """Reduce rows in place to RREF.

    Returns (rows, tails, pivot_cols).  ``tails`` is an optional parallel
    list of tail-norm bounds; row operations combine them sub-additively
    (r <- r - f*p adds |f| * tail_p) so the bounds stay sound.
    Zero rows are dropped.
    """
    if tails is None:
        tails = [Fraction(0) if rows and isinstance(rows[0][0], Fraction) else 0.0
                 for _ in rows]
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        # pivot selection
        best = -1
        if rows and isinstance(rows[r][c], Fraction):
            for i in range(r, n_rows):
                if rows[i][c] != 0:
                    best = i
                    break
        else:
            best_mag = eta
            for i in range(r, n_rows):
                mag = abs(rows[i][c])
                if mag > best_mag:
                    best_mag = mag
                    best = i
        if best < 0:
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
            tails[r], tails[best] = tails[best], tails[r]
        piv = rows[r][c]
        if piv != 1:
            inv_scale = abs(piv)
            rows[r] = [v / piv for v in rows[r]]
            tails[r] = tails[r] / inv_scale
        row_r = rows[r]
        nonzero_cols = [j for j, w in enumerate(row_r) if w != 0 and j != c]
        for i in range(n_rows):
            if i == r:
                continue
            f = rows[i][c]
            if _is_zero(f, eta):
                if f != 0:
                    rows[i][c] = type(f)(0)
                continue
            row_i = rows[i]
            for j in nonzero_cols:
                row_i[j] = row_i[j] - f * row_r[j]
            row_i[c] = type(f)(0)
            tails[i] = tails[i] + abs(f) * tails[r]
        pivots.append(c)
        r += 1
    # drop numerically-zero rows below the last pivot
    keep = len(pivots)
    del rows[keep:]
    del tails[keep:]
    return rows, tails, pivots


def rank(rows: list[list[Scalar]], eta) -> int:
    work = [list(row) for row in rows]
    _, _, pivots = rref(work, eta)
    return len(pivots)


def nullspace_vector(matrix: Sequence[Sequence[Scalar]], n_unknowns: int, eta) -> Optional[list[Scalar]]:
    """One nullspace vector of the (m x n_unknowns) constraint matrix.

    Deterministic tie-break: the lexicographically-first free variable is
    set to 1 and all other free variables to 0.  Returns None when the
    nullspace is trivial.
    """
    basis = nullspace_basis(matrix, n_unknowns, eta, first_only=True)
    return basis[0] if basis else None


def nullspace_basis(matrix: Sequence[Sequence[Scalar]], n_unknowns: int, eta,
                    first_only: bool = False) -> list[list[Scalar]]:
    """Nullspace basis vectors, one per free variable, in variable order."""
    exact = _matrix_exact(matrix)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    work = [list(row) for row in matrix]
    if not work:
        out = []
        for j in range(n_unknowns):
            vec = [zero] * n_unknowns
            vec[j] = one
            out.append(vec)
            if first_only:
                break
        return out
    _, _, pivots = rref(work, eta)
    pivot_set = set(pivots)
    free_cols = [j for j in range(n_unknowns) if j not in pivot_set]
    out = []
    for fc in free_cols:
        vec = [zero] * n_unknowns
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -work[r][fc]
        out.append(vec)
        if first_only:
            break
    return out


def span_coefficients(vec: Sequence[Scalar], rows: Sequence[Sequence[Scalar]],
                      pivots: Sequence[int]) -> list[Scalar]:
    """Coefficients of vec against RREF rows (coefficient = value at pivot)."""
    return [vec[pc] for pc in pivots]


def residual_vector(vec: Sequence[Scalar], rows: Sequence[Sequence[Scalar]],
                    pivots: Sequence[int]) -> list[Scalar]:
    """vec minus its projection onto the span of RREF rows."""
    out = list(vec)
    for row, pc in zip(rows, pivots):
        c = out[pc]
        if c != 0:
            out = [v - c * w for v, w in zip(out, row)]
    return out


def invert(matrix: Sequence[Sequence[Scalar]], eta) -> Optional[list[list[Scalar]]]:
    """Inverse of a small square matrix via RREF of [M | I]; None if singular."""
    n = len(matrix)
    exact = _matrix_exact(matrix)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    work = []
    for i in range(n):
        row = list(matrix[i]) + [zero] * n
        row[n + i] = one
        work.append(row)
    _, _, pivots = rref(work, eta)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in work]


def _matrix_exact(matrix) -> bool:
    for row in matrix:
        for v in row:
            return isinstance(v, Fraction)
    return True
