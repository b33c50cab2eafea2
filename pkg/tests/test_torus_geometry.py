"""Zero-sum partitions, maximal subtorus dimension, coset checks."""

import itertools

import mpmath
import pytest

from cyclotorsion.cyclotomic import RootOfUnityTuple, has_vanishing_subsum, sum_of_roots
from cyclotorsion.errors import BudgetExceeded
from cyclotorsion.torus_geometry import (
    SubgroupLattice,
    ZeroSumPartition,
    alw_closure_check,
    iter_set_partitions,
    maximal_subgroup_dimension,
    verify_coset_containment,
    zero_sum_partitions,
)
from oracles import set_partitions


class TestPartitionEnumeration:
    def test_bell_numbers(self):
        for size, bell in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)]:
            assert sum(1 for _ in iter_set_partitions(size)) == bell

    def test_matches_oracle(self):
        for size in range(1, 6):
            mine = {tuple(tuple(sorted(b)) for b in sorted(p, key=min))
                    for p in iter_set_partitions(size)}
            oracle = {tuple(tuple(sorted(b)) for b in sorted(p, key=min))
                      for p in set_partitions(list(range(size)))}
            assert mine == oracle


class TestMaximalSubgroup:
    def test_ones_pair_is_rigid(self):
        t = RootOfUnityTuple(1, (0, 0))
        dim, witness, lattice = maximal_subgroup_dimension(t, sum_of_roots(t))
        assert dim == 0
        assert witness == "trivial"
        assert lattice.dimension == 0

    def test_conjugate_pair_diagonal(self):
        t = RootOfUnityTuple(4, (1, 3))
        dim, witness, lattice = maximal_subgroup_dimension(t, sum_of_roots(t))
        assert dim == 1
        assert witness.blocks == ((0,), (1, 2))
        assert lattice.basis == [[1, -1]]

    def test_cube_roots_plus_one(self):
        t = RootOfUnityTuple(3, (0, 1, 2))
        dim, witness, lattice = maximal_subgroup_dimension(t, sum_of_roots(t))
        assert dim == 1
        assert witness.blocks == ((0,), (1, 2, 3))
        assert len(lattice.basis) == 2

    def test_no_subsum_implies_rigid(self):
        # sweep small tuples; whenever no subsum vanishes the dimension is 0
        checked = 0
        for order in range(1, 7):
            for exps in itertools.combinations_with_replacement(range(order), 3):
                t = RootOfUnityTuple(order, exps)
                dim, _, _ = maximal_subgroup_dimension(t, sum_of_roots(t))
                if not has_vanishing_subsum(t):
                    assert dim == 0
                checked += 1
        assert checked > 30

    def test_agrees_with_bruteforce_partitions(self):
        for order, exps in [(4, (1, 3)), (3, (0, 1, 2)), (6, (1, 4, 0)), (5, (1, 2))]:
            t = RootOfUnityTuple(order, exps)
            zeta = sum_of_roots(t)
            coeffs = [-zeta] + list(t.values())
            count = 0
            for part in set_partitions(list(range(t.n + 1))):
                ok = True
                for block in part:
                    total = coeffs[block[0]]
                    for i in block[1:]:
                        total = total + coeffs[i]
                    if not total.is_zero():
                        ok = False
                        break
                if ok:
                    count += 1
            assert len(zero_sum_partitions(t, zeta)) == count

    def test_zeta_mismatch_rejected(self):
        t = RootOfUnityTuple(1, (0, 0))
        with pytest.raises(ValueError):
            maximal_subgroup_dimension(t, sum_of_roots(t) + 1)

    def test_cap(self):
        t = RootOfUnityTuple(1, (0,) * 9)
        with pytest.raises(BudgetExceeded):
            maximal_subgroup_dimension(t, sum_of_roots(t))

    def test_galois_invariance(self):
        t = RootOfUnityTuple(12, (3, 9, 4, 8))
        zeta = sum_of_roots(t)
        dim, _, _ = maximal_subgroup_dimension(t, zeta)
        for j in (5, 7, 11):
            dim_j, _, _ = maximal_subgroup_dimension(t.conjugate(j), zeta.conjugate(j))
            assert dim_j == dim

    def test_witness_serialization(self):
        t = RootOfUnityTuple(4, (1, 3))
        _, witness, _ = maximal_subgroup_dimension(t, sum_of_roots(t))
        assert witness.to_json_dict() == [[0], [1, 2]]


class TestCosetContainment:
    def test_diagonal_witness_passes(self):
        t = RootOfUnityTuple(4, (1, 3))
        zeta = sum_of_roots(t)
        _, _, lattice = maximal_subgroup_dimension(t, zeta)
        assert verify_coset_containment(t, zeta, lattice, samples=100)

    def test_cube_root_witness_passes(self):
        t = RootOfUnityTuple(3, (0, 1, 2))
        zeta = sum_of_roots(t)
        _, _, lattice = maximal_subgroup_dimension(t, zeta)
        assert verify_coset_containment(t, zeta, lattice, samples=100)

    def test_wrong_subgroup_fails(self):
        # the diagonal torus does not keep h + h equal to 2
        t = RootOfUnityTuple(1, (0, 0))
        zeta = sum_of_roots(t)
        diagonal = SubgroupLattice(2, [[1, -1]])
        assert diagonal.dimension == 1
        assert not verify_coset_containment(t, zeta, diagonal, samples=20)

    def test_trivial_subgroup_always_true(self):
        t = RootOfUnityTuple(5, (0, 1))
        zeta = sum_of_roots(t)
        _, _, lattice = maximal_subgroup_dimension(t, zeta)
        assert lattice.dimension == 0
        assert verify_coset_containment(t, zeta, lattice, samples=5)


class TestClosureCheck:
    def test_constant_path(self):
        t = RootOfUnityTuple(1, (0, 0))
        zeta = sum_of_roots(t)

        def path(s):
            return [mpmath.mpc(0), mpmath.mpc(0)]

        report = alw_closure_check(t, zeta, path, samples=9)
        assert report["verdict"] == "constant"
        assert report["contained"]

    def test_diagonal_path_flagged_as_subsum_case(self):
        t = RootOfUnityTuple(4, (1, 3))
        zeta = sum_of_roots(t)

        def path(s):
            w = mpmath.mpc("0.4", "0.3") * s
            return [w, w]

        report = alw_closure_check(t, zeta, path, samples=17)
        assert report["contained"]
        assert report["verdict"] == "positive-dimensional (vanishing subsum)"

    def test_leaving_path_reported(self):
        t = RootOfUnityTuple(1, (0, 0))
        zeta = sum_of_roots(t)

        def path(s):
            return [mpmath.mpc(s), mpmath.mpc(0)]

        report = alw_closure_check(t, zeta, path, samples=9)
        assert report["verdict"] == "not contained"
        assert not report["contained"]


class TestSubgroupLattice:
    def test_hermite_reduced_basis(self):
        rows = [[1, -1, 0], [0, 1, -1]]
        lat = SubgroupLattice(3, rows)
        assert lat.basis == [[1, 0, -1], [0, 1, -1]]
        assert lat.dimension == 1

    def test_tangent_directions_annihilate_basis(self):
        lat = SubgroupLattice(3, [[1, -1, 0], [0, 1, -1]])
        for direction in lat.tangent_directions():
            for row in lat.basis:
                assert sum(r * d for r, d in zip(row, direction)) == 0

    def test_full_torus_tangent(self):
        lat = SubgroupLattice(2, [])
        assert lat.dimension == 2
        assert len(lat.tangent_directions()) == 2
