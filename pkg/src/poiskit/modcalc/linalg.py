"""Exact linear algebra over the rationals (dense, small matrices)."""

from __future__ import annotations

from typing import Sequence

from .._kernel import QQ, to_qq


def _copy(rows) -> list[list]:
    return [[to_qq(x) for x in row] for row in rows]


def qq_rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = _copy(rows)
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def qq_rank(rows: Sequence[Sequence]) -> int:
    return len(qq_rref(rows)[1])


def qq_nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of the right kernel; ``ncols`` is needed for zero-row matrices."""
    rows = list(rows)
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[QQ(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    rref, pivots = qq_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [QQ(0)] * ncols
        v[f] = QQ(1)
        for r, c in enumerate(pivots):
            v[c] = -rref[r][f]
        basis.append(v)
    return basis


def qq_solve(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """One solution of ``A x = b`` or ``None`` when inconsistent."""
    rows = _copy(rows)
    b = [to_qq(x) for x in rhs]
    aug = [row + [bv] for row, bv in zip(rows, b)]
    rref, pivots = qq_rref(aug)
    ncols = len(rows[0]) if rows else 0
    if ncols in pivots:
        return None
    x = [QQ(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = rref[r][-1]
    return x


def qq_det(rows: Sequence[Sequence]):
    m = _copy(rows)
    n = len(m)
    det = QQ(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return QQ(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def span_equal(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    """Do two row families span the same subspace of Q^ncols?"""
    ra = qq_rank(a) if a else 0
    rb = qq_rank(b) if b else 0
    rab = qq_rank(list(a) + list(b)) if (a or b) else 0
    return ra == rb == rab


def sparse_nullspace(rows: Sequence[dict], ncols: int) -> list[list]:
    """Kernel basis for a sparse row list (dicts column -> coefficient)."""
    pivots: dict[int, dict] = {}
    for row in rows:
        r = {c: to_qq(v) for c, v in row.items() if v}
        while r:
            lead = min(r)
            piv = pivots.get(lead)
            if piv is None:
                inv = 1 / r[lead]
                pivots[lead] = {c: v * inv for c, v in r.items()}
                break
            f = r[lead]
            for c, v in piv.items():
                s = r.get(c, QQ(0)) - f * v
                if s:
                    r[c] = s
                elif c in r:
                    del r[c]
    # back-substitute to reduced form
    for lead in sorted(pivots, reverse=True):
        row = pivots[lead]
        for other_lead, other in pivots.items():
            if other_lead >= lead:
                continue
            f = other.get(lead)
            if not f:
                continue
            for c, v in row.items():
                s = other.get(c, QQ(0)) - f * v
                if s:
                    other[c] = s
                elif c in other:
                    del other[c]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [QQ(0)] * ncols
        v[f] = QQ(1)
        for lead, row in pivots.items():
            coeff = row.get(f)
            if coeff:
                v[lead] = -coeff
        basis.append(v)
    return basis
