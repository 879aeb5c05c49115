import pytest
from hypothesis import given, strategies as st

from KernelLab.core.errors import ObjectMismatchError
from KernelLab.core.fields import FieldSpec
from KernelLab.core.sampling import make_rng, random_add_object, random_morphism
from KernelLab.categories.presentation import (
    AddObject,
    TablePresentation,
    basis_morphism,
    block_morphism,
    compose,
    direct_sum,
    factor_before,
    hom_space,
    identity_morphism,
    truncated_polynomial,
    validate_category,
)


def point_category(field):
    return TablePresentation("point", field, ["*"], {("*", "*"): ["id"]}, {("id", "id"): {"id": 1}},
                             {"*": {"id": 1}})


def idempotent_category(field):
    """Same shape as the dual numbers but with x∘x = x."""
    products = {("id", "id"): {"id": 1}, ("id", "x"): {"x": 1}, ("x", "id"): {"x": 1}, ("x", "x"): {"x": 1}}
    return TablePresentation("idempotent", field, ["R"], {("R", "R"): ["id", "x"]}, products, {"R": {"id": 1}})


class TestValidateCategory:
    def test_point(self, Q):
        assert validate_category(point_category(Q)).valid

    def test_dual_numbers(self, dual):
        report = validate_category(dual)
        assert report.valid, report.violations

    def test_idempotent_is_still_a_category(self, Q):
        assert validate_category(idempotent_category(Q)).valid

    def test_broken_associativity(self, Q):
        # x∘x = id with x∘id = 0 breaks the unit law
        products = {("id", "id"): {"id": 1}, ("id", "x"): {"x": 1}, ("x", "id"): {}, ("x", "x"): {"id": 1}}
        C = TablePresentation("broken", Q, ["R"], {("R", "R"): ["id", "x"]}, products, {"R": {"id": 1}})
        report = validate_category(C)
        assert not report.valid
        assert report.violations


class TestCompose:
    def test_identity_is_neutral(self, dual):
        x = basis_morphism(dual, "x")
        one = identity_morphism(dual, AddObject.of("R"))
        assert compose(dual, one, x) == x
        assert compose(dual, x, one) == x

    def test_nilpotent(self, dual):
        x = basis_morphism(dual, "x")
        assert compose(dual, x, x).is_zero()

    def test_block_product(self, dual):
        x, one = basis_morphism(dual, "x"), basis_morphism(dual, "id")
        column = block_morphism([[x], [one]])
        row = block_morphism([[one, x]])
        assert compose(dual, row, column) == basis_morphism(dual, "x", 2)

    def test_direct_sum_is_block_diagonal(self, dual):
        x, one = basis_morphism(dual, "x"), basis_morphism(dual, "id")
        f = direct_sum(x, one)
        assert f.source == AddObject.of("R", "R")
        assert compose(dual, f, f) == direct_sum(compose(dual, x, x), one)

    def test_factor_before(self, dual):
        x, one = basis_morphism(dual, "x"), basis_morphism(dual, "id")
        gamma = factor_before(dual, x, x)
        assert compose(dual, x, gamma) == x
        assert factor_before(dual, one, x) is None

    def test_mismatched_objects(self, dual):
        column = block_morphism([[basis_morphism(dual, "x")], [basis_morphism(dual, "id")]])
        with pytest.raises(ObjectMismatchError):
            compose(dual, column, column)


class TestHomSpace:
    def test_dual_numbers(self, dual):
        assert hom_space(dual, "R", "R").dimension == 2

    def test_zero_object(self, dual):
        assert hom_space(dual, "R", AddObject.zero()).dimension == 0

    def test_sum_of_copies(self, dual):
        assert hom_space(dual, AddObject.of("R", "R"), "R").dimension == 4

    def test_basis_round_trip(self, dual):
        space = hom_space(dual, AddObject.of("R", "R"), "R")
        for k, m in enumerate(space.basis_morphisms()):
            v = space.vectorize(m)
            assert v.entry(k, 0) == 1
            assert space.morphism(v) == m


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(seeds)
def test_composition_is_associative(seed):
    C = truncated_polynomial(FieldSpec.rationals(), 3)
    rng = make_rng(seed)
    objects = [random_add_object(C, rng) for _ in range(4)]
    f = random_morphism(C, rng, objects[0], objects[1])
    g = random_morphism(C, rng, objects[1], objects[2])
    h = random_morphism(C, rng, objects[2], objects[3])
    assert compose(C, h, compose(C, g, f)) == compose(C, compose(C, h, g), f)


@given(seeds)
def test_hom_dimension_is_additive(seed):
    C = truncated_polynomial(FieldSpec.rationals(), 3)
    rng = make_rng(seed)
    x, y, z = (random_add_object(C, rng) for _ in range(3))
    total = hom_space(C, x.oplus(y), z).dimension
    assert total == hom_space(C, x, z).dimension + hom_space(C, y, z).dimension
    total = hom_space(C, z, x.oplus(y)).dimension
    assert total == hom_space(C, z, x).dimension + hom_space(C, z, y).dimension
