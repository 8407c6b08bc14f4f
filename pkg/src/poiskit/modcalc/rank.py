"""Pointwise and generic rank of polynomial matrices, with minor ideals."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .._kernel import QQ
from ..polyalg.polynomial import Polynomial
from .linalg import qq_rank

_PROBE_SEEDS = ((2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37),
                (1, -2, 3, -5, 7, -11, 13, -17, 19, -23, 29, -31),
                (-3, 5, -7, 2, -11, 17, -1, 13, -19, 23, -2, 3))


def _det(rows: list[list[Polynomial]]) -> Polynomial:
    """Cofactor expansion along the sparsest row; fine for the small minors
    that occur here."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty determinant")
    if n == 1:
        return rows[0][0]
    best = min(range(n), key=lambda i: sum(1 for p in rows[i] if not p.is_zero))
    variables = rows[0][0].variables
    out = Polynomial.zero(variables)
    for j, p in enumerate(rows[best]):
        if p.is_zero:
            continue
        sub = [[rows[i][k] for k in range(n) if k != j] for i in range(n) if i != best]
        term = p * _det(sub)
        out = out + term if (best + j) % 2 == 0 else out - term
    return out


@dataclass
class RankProfile:
    """Generic rank over the fraction field plus rank stratification data."""

    rows: list[list[Polynomial]]
    variables: tuple[str, ...]
    generic_rank: int
    _minor_cache: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def minor_ideal(self, s: int) -> list[Polynomial]:
        """Generators (all s-minors) of the s-th determinantal ideal."""
        if s <= 0:
            return [Polynomial.one(self.variables)]
        n, m = self.shape
        if s > min(n, m):
            return []
        if s not in self._minor_cache:
            minors = []
            for ri in combinations(range(n), s):
                for ci in combinations(range(m), s):
                    d = _det([[self.rows[i][j] for j in ci] for i in ri])
                    if not d.is_zero:
                        minors.append(d)
            self._minor_cache[s] = minors
        return self._minor_cache[s]

    def drop_ideal(self) -> list[Polynomial]:
        """Ideal whose real zero set is exactly where the rank drops below
        the generic rank."""
        return self.minor_ideal(self.generic_rank)

    def rank_at(self, point: Sequence) -> int:
        n, m = self.shape
        if m == 0 or n == 0:
            return 0
        values = [[p.eval(point) for p in row] for row in self.rows]
        if any(isinstance(v, float) for row in values for v in row):
            import numpy as np

            return int(np.linalg.matrix_rank(np.array(values, dtype=float)))
        return qq_rank(values)


def rank_profile(matrix_rows: Sequence[Sequence[Polynomial]],
                 variables: Sequence[str] | None = None) -> RankProfile:
    rows = [list(r) for r in matrix_rows]
    if not rows or not rows[0]:
        return RankProfile(rows, tuple(variables or ()), 0)
    variables = tuple(variables) if variables is not None else rows[0][0].variables
    profile = RankProfile(rows, variables, 0)
    n, m = profile.shape

    # lower bound from probe points, then certify: some r-minor is nonzero
    # symbolically and every (r+1)-minor vanishes identically.
    nvars = len(variables)
    lower = 0
    for probe in _PROBE_SEEDS:
        pt = [QQ(probe[i % len(probe)]) for i in range(nvars)]
        lower = max(lower, qq_rank([[p.eval(pt) for p in row] for row in rows]))
    r = max(lower, 0)
    while r < min(n, m) and profile.minor_ideal(r + 1):
        r += 1
    if r > 0 and not profile.minor_ideal(r):
        raise AssertionError("probe rank exceeded symbolic rank")
    profile.generic_rank = r
    return profile
