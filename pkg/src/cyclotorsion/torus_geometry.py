"""Algebraic subgroups of the torus meeting the hyperplane sum x_i = ζ.

The maximal subgroup H with ε·H inside {Σ x_i = ζ} is found by grouping the
coefficients (−ζ, ε₁, …, ε_n) into blocks that each sum to zero exactly; the
characters orthogonal to H are then spanned by e_i − e_j inside a block and
by e_i alone for coordinates grouped with the constant term.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath

from .cyclotomic import (
    CyclotomicNumber,
    RootOfUnityTuple,
    has_vanishing_subsum,
    sum_of_roots,
)
from .errors import BudgetExceeded
from .exactlinalg import hermite_normal_form, integer_row_rank, rational_kernel_basis

PARTITION_CAP = 8


class SubgroupLattice:
    """Character lattice vanishing on a subtorus of G_m^n, Hermite reduced."""

    __slots__ = ("n", "basis", "dimension")

    def __init__(self, n: int, rows: Sequence[Sequence[int]]):
        self.n = n
        self.basis = [list(r) for r in hermite_normal_form(rows)]
        rank = len(self.basis)
        if not 0 <= n - rank <= n:
            raise ValueError("rank exceeds ambient dimension")
        self.dimension = n - rank

    def tangent_directions(self) -> List[List[int]]:
        """Primitive integer spanning set of the Lie algebra of H."""
        if not self.basis:
            ident = []
            for i in range(self.n):
                row = [0] * self.n
                row[i] = 1
                ident.append(row)
            return ident
        return rational_kernel_basis([[Fraction(v) for v in row] for row in self.basis])

    def to_json_dict(self) -> dict:
        return {"n": self.n, "basis": self.basis, "dimension": self.dimension}


class ZeroSumPartition:
    """Partition of the indices {0,…,n} whose block coefficient sums vanish."""

    __slots__ = ("blocks",)

    def __init__(self, blocks: Sequence[Sequence[int]]):
        self.blocks = tuple(tuple(sorted(b)) for b in sorted(blocks, key=min))

    def __eq__(self, other) -> bool:
        return isinstance(other, ZeroSumPartition) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def __repr__(self) -> str:
        return "ZeroSumPartition(%r)" % (self.blocks,)

    def block_of_zero(self) -> Tuple[int, ...]:
        for b in self.blocks:
            if 0 in b:
                return b
        raise ValueError("no block contains index 0")

    def orthogonal_rows(self, n: int) -> List[List[int]]:
        rows: List[List[int]] = []
        for block in self.blocks:
            members = [i for i in block if i >= 1]
            if 0 in block:
                for i in members:
                    row = [0] * n
                    row[i - 1] = 1
                    rows.append(row)
            else:
                anchor = members[0]
                for i in members[1:]:
                    row = [0] * n
                    row[i - 1] = -1
                    row[anchor - 1] += 1
                    rows.append(row)
        return rows

    def to_json_dict(self) -> list:
        return [list(b) for b in self.blocks]


def iter_set_partitions(size: int) -> Iterator[List[List[int]]]:
    """All set partitions of range(size) by restricted growth strings."""
    if size == 0:
        yield []
        return
    code = [0] * size

    def emit():
        blocks: List[List[int]] = []
        for idx, label in enumerate(code):
            while label >= len(blocks):
                blocks.append([])
            blocks[label].append(idx)
        return blocks

    while True:
        yield emit()
        # advance: rightmost position that can be bumped without a gap
        pos = size - 1
        while pos > 0:
            cap = max(code[:pos]) + 1
            if code[pos] < cap:
                code[pos] += 1
                for tail in range(pos + 1, size):
                    code[tail] = 0
                break
            pos -= 1
        else:
            return


def _coefficients(t: RootOfUnityTuple, zeta: CyclotomicNumber) -> List[CyclotomicNumber]:
    return [-zeta] + list(t.values())


def zero_sum_partitions(t: RootOfUnityTuple, zeta: CyclotomicNumber) -> List[ZeroSumPartition]:
    coeffs = _coefficients(t, zeta)
    found = []
    for blocks in iter_set_partitions(len(coeffs)):
        ok = True
        for block in blocks:
            total = coeffs[block[0]]
            for i in block[1:]:
                total = total + coeffs[i]
            if not total.is_zero():
                ok = False
                break
        if ok:
            found.append(ZeroSumPartition(blocks))
    return found


def maximal_subgroup_dimension(
    t: RootOfUnityTuple, zeta: CyclotomicNumber
) -> Tuple[int, Union[ZeroSumPartition, str], SubgroupLattice]:
    """Dimension of the maximal subtorus H with ε·H ⊆ {Σ x_i = ζ}.

    Returns (dimension, witness partition or "trivial", lattice). Without a
    vanishing subsum the dimension is always 0.
    """
    n = t.n
    if n > PARTITION_CAP:
        raise BudgetExceeded(
            "partition enumeration capped at n = %d (got %d)" % (PARTITION_CAP, n))
    if not (sum_of_roots(t) - zeta).is_zero():
        raise ValueError("zeta must equal the exact sum of the tuple")
    best_dim = -1
    best_witness: Optional[ZeroSumPartition] = None
    best_lattice: Optional[SubgroupLattice] = None
    for part in zero_sum_partitions(t, zeta):
        lattice = SubgroupLattice(n, part.orthogonal_rows(n))
        if lattice.dimension > best_dim:
            best_dim = lattice.dimension
            best_witness = part
            best_lattice = lattice
    if best_witness is None:
        raise ValueError("the full partition must always be zero-sum")
    witness: Union[ZeroSumPartition, str]
    witness = best_witness if best_dim > 0 else "trivial"
    return best_dim, witness, best_lattice


def verify_coset_containment(
    t: RootOfUnityTuple,
    zeta: CyclotomicNumber,
    subgroup: SubgroupLattice,
    samples: int = 100,
    prec: int = 256,
    seed: int = 7,
) -> bool:
    """Sample H numerically and test Σ ε_i h_i = ζ within 10^-20."""
    rng = random.Random(seed)
    with mpmath.workprec(prec):
        eps = t.embeddings(1, prec)
        target = zeta.embedding(1, prec)
        tol = mpmath.mpf(10) ** -20
        directions = subgroup.tangent_directions() if subgroup.dimension > 0 else []
        two_pi_i = 2 * mpmath.pi * mpmath.mpc(0, 1)
        for _ in range(max(1, samples)):
            exponent = [mpmath.mpf(0)] * subgroup.n
            for direction in directions:
                weight = mpmath.mpf(rng.random())
                for i, entry in enumerate(direction):
                    exponent[i] += weight * entry
            total = mpmath.mpc(0)
            for i in range(subgroup.n):
                total += eps[i] * mpmath.exp(two_pi_i * exponent[i])
            if abs(total - target) > tol:
                return False
    return True


def alw_closure_check(
    t: RootOfUnityTuple,
    zeta: CyclotomicNumber,
    path: Callable[[mpmath.mpf], Sequence],
    samples: int = 33,
    prec: int = 256,
) -> dict:
    """Test the downstream consequence of algebraic-subgroup rigidity.

    `path` maps [0,1] to log-coordinates in C^n. If its exponential stays in
    {Σ x_i = ζ} and the tuple has no vanishing subsum, the exponential must be
    constant; the report records containment, deviation, and the verdict.
    """
    with mpmath.workprec(prec):
        target = zeta.embedding(1, prec)
        tol = mpmath.mpf(10) ** -20
        base = [mpmath.exp(mpmath.mpc(v)) for v in path(mpmath.mpf(0))]
        eps = t.embeddings(1, prec)
        contained = True
        deviation = mpmath.mpf(0)
        for k in range(samples):
            s = mpmath.mpf(k) / max(1, samples - 1)
            values = [mpmath.exp(mpmath.mpc(v)) for v in path(s)]
            total = sum(e * v for e, v in zip(eps, values))
            if abs(total - target) > tol:
                contained = False
                break
            for v, v0 in zip(values, base):
                deviation = max(deviation, abs(v - v0))
        subsum = has_vanishing_subsum(t)
        if not contained:
            verdict = "not contained"
        elif deviation <= tol:
            verdict = "constant"
        elif subsum:
            verdict = "positive-dimensional (vanishing subsum)"
        else:
            verdict = "VIOLATION"
        return {
            "contained": contained,
            "vanishing_subsum": subsum,
            "max_deviation": mpmath.nstr(deviation, 10),
            "verdict": verdict,
        }
