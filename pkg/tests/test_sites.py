import pytest

from KernelLab.core.errors import LatticeLimitError
from KernelLab.core.fields import FieldSpec
from KernelLab.categories.diagrams import build_OB
from KernelLab.categories.presentation import MorphismExpr, basis_morphism, dual_numbers
from KernelLab.evaluators.sites import (
    canonical_sieve_Rf,
    candidate_coefficients,
    enumerate_sieves,
    enumerate_topologies,
    homological_topology,
    iota_image_test,
    is_topology,
    maximal_sieve,
    pullback_sieve,
    sieve_closure,
    topology_of_functor,
    zero_sieve,
)


@pytest.fixture(scope="module")
def dual_lattice(shipped_dual):
    return enumerate_sieves(shipped_dual)


@pytest.fixture(scope="module")
def noy_lattice(noy):
    return enumerate_sieves(noy)


@pytest.fixture(scope="module")
def noy_topologies(noy, noy_lattice):
    return enumerate_topologies(noy, noy_lattice)


class TestSieves:
    def test_coefficients(self):
        assert len(list(candidate_coefficients(FieldSpec.prime(3), 2))) == 4
        assert len(list(candidate_coefficients(FieldSpec.rationals(), 2))) == 4

    def test_dual_numbers_lattice(self, dual_lattice):
        assert [s.dimension for s in dual_lattice.sieves["R"]] == [0, 1, 2]
        assert not dual_lattice.exhaustive

    def test_prime_field_is_exhaustive(self):
        lattice = enumerate_sieves(dual_numbers(FieldSpec.prime(3)))
        assert lattice.exhaustive
        assert len(lattice.sieves["R"]) == 3

    def test_closure(self, shipped_dual):
        C = shipped_dual
        xm = basis_morphism(C, "x")
        S = sieve_closure(C, "R", [xm])
        assert S.dimension == 1
        assert sieve_closure(C, "R", [xm, xm]) == S
        assert sieve_closure(C, "R", [basis_morphism(C, "id")]) == maximal_sieve(C, "R")
        assert sieve_closure(C, "R", []) == zero_sieve(C, "R")

    def test_pullback(self, shipped_dual):
        C = shipped_dual
        xm = basis_morphism(C, "x")
        S = sieve_closure(C, "R", [xm])
        assert pullback_sieve(C, S, xm) == maximal_sieve(C, "R")
        assert pullback_sieve(C, zero_sieve(C, "R"), xm) == S

    def test_order(self, shipped_dual):
        C = shipped_dual
        S = sieve_closure(C, "R", [basis_morphism(C, "x")])
        assert zero_sieve(C, "R") <= S <= maximal_sieve(C, "R")
        assert not maximal_sieve(C, "R") <= S

    def test_needs_finite_skeleton(self):
        with pytest.raises(LatticeLimitError):
            enumerate_sieves(build_OB(1, 2))

    def test_limit(self, noy):
        with pytest.raises(LatticeLimitError):
            enumerate_sieves(noy, limit=2)


class TestTopologies:
    def test_dual_numbers(self, shipped_dual, dual_lattice):
        tables = enumerate_topologies(shipped_dual, dual_lattice)
        assert [t.label for t in tables] == ["R0", "R1"]
        assert tables[0].discrete and tables[1].trivial

    def test_noy_skeleton(self, noy_lattice, noy_topologies):
        assert [t.label for t in noy_topologies] == ["R0", "R1", "R2", "R3"]
        assert noy_topologies[0].discrete
        assert noy_topologies[-1].trivial
        assert all(is_topology(noy_lattice, t) for t in noy_topologies)

    def test_meet_of_topologies_is_a_topology(self, noy_lattice, noy_topologies):
        for a in noy_topologies:
            for b in noy_topologies:
                assert is_topology(noy_lattice, a.meet(b))

    def test_iota_image(self, noy, noy_topologies):
        image = [t.label for t in noy_topologies if iota_image_test(noy, t)]
        assert image == ["R0", "R2"]

    def test_canonical_sieves(self, noy):
        assert canonical_sieve_Rf(noy, "P") == maximal_sieve(noy, "P")
        assert canonical_sieve_Rf(noy, "L").dimension == 1

    @pytest.mark.parametrize("name,label", [("theta_k2", "R2"), ("theta_k3", "R3"), ("theta_aug", "R1")])
    def test_homological_topology(self, noy, noy_lattice, noy_topologies, dual_bundle, name, label):
        table = homological_topology(noy, dual_bundle.functor(name), noy_lattice, noy_topologies)
        assert table.label == label

    def test_functor_topology_on_base(self, shipped_dual, dual_lattice, theta_k2):
        tables = enumerate_topologies(shipped_dual, dual_lattice)
        table = topology_of_functor(shipped_dual, theta_k2, dual_lattice, tables)
        assert table.trivial
        assert table.label == "R1"

    def test_describe(self, noy_lattice, noy_topologies):
        lines = noy_topologies[-1].describe(noy_lattice)
        assert lines == ["P: max", "L: max"]


def test_zero_morphism_generates_nothing(shipped_dual):
    zero = MorphismExpr.zero(basis_morphism(shipped_dual, "x").source, basis_morphism(shipped_dual, "x").target)
    assert sieve_closure(shipped_dual, "R", [zero]) == zero_sieve(shipped_dual, "R")
