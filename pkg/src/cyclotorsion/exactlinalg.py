"""Small exact linear algebra: echelon accumulation over a field, integer HNF.

Everything here is dense and cubic at worst; matrix sizes in this package stay
in the tens, with entries that are Fractions, cyclotomic numbers, or ints.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Optional, Sequence


class EchelonBasis:
    """Incrementally reduced row space over a field of duck-typed scalars.

    add() reduces the vector against the stored rows and keeps it when a new
    pivot survives, so rank queries and dependence checks are O(rank * n).
    """

    def __init__(self) -> None:
        self._rows: List[List[Any]] = []
        self._pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence[Any]) -> List[Any]:
        v = list(vec)
        for piv, row in zip(self._pivots, self._rows):
            c = v[piv]
            if c:
                for k in range(piv, len(v)):
                    v[k] = v[k] - c * row[k]
        return v

    def add(self, vec: Sequence[Any]) -> bool:
        """Insert vec's residue; True when the rank grew."""
        v = self.reduce(vec)
        piv = None
        for k, c in enumerate(v):
            if c:
                piv = k
                break
        if piv is None:
            return False
        inv = v[piv] ** -1
        v = [c * inv for c in v]
        # Back-substitute so stored rows stay fully reduced.
        for i, (p, row) in enumerate(zip(self._pivots, self._rows)):
            c = row[piv]
            if c:
                self._rows[i] = [a - c * b for a, b in zip(row, v)]
        self._rows.append(v)
        self._pivots.append(piv)
        order = sorted(range(len(self._pivots)), key=lambda i: self._pivots[i])
        self._rows = [self._rows[i] for i in order]
        self._pivots = [self._pivots[i] for i in order]
        return True


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row-style HNF with positive pivots; zero rows are dropped."""
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    top = 0
    for col in range(ncols):
        # Euclid within the column below `top` until one nonzero entry remains.
        while True:
            nz = [i for i in range(top, len(work)) if work[i][col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(work[i][col]))
            i0, i1 = nz[0], nz[1]
            q = work[i1][col] // work[i0][col]
            work[i1] = [a - q * b for a, b in zip(work[i1], work[i0])]
        nz = [i for i in range(top, len(work)) if work[i][col]]
        if not nz:
            continue
        i0 = nz[0]
        work[top], work[i0] = work[i0], work[top]
        if work[top][col] < 0:
            work[top] = [-a for a in work[top]]
        p = work[top][col]
        for i in range(top):
            q = work[i][col] // p
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[top])]
        top += 1
    return [r for r in work[:top] if any(r)]


def integer_row_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hermite_normal_form(rows))


def rational_kernel_basis(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Primitive integer basis of the right kernel of an integer matrix."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis = EchelonBasis()
    for r in rows:
        basis.add([Fraction(c) for c in r])
    pivots = set(basis._pivots)
    free = [j for j in range(ncols) if j not in pivots]
    out: List[List[int]] = []
    for j in free:
        vec = [Fraction(0)] * ncols
        vec[j] = Fraction(1)
        # Solve pivot coordinates against the reduced rows.
        for piv, row in zip(basis._pivots, basis._rows):
            vec[piv] = -row[j]
        den = 1
        for c in vec:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in vec]
        g = 0
        for c in ints:
            g = _gcd(g, abs(c))
        if g > 1:
            ints = [c // g for c in ints]
        out.append(ints)
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1
