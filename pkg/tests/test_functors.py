import pytest

from KernelLab.core.linalg import ExactMatrix
from KernelLab.categories.diagrams import BLACK, WHITE, build_OB, tensor_contraction_functor, words_up_to
from KernelLab.categories.functors import (
    apply_morphism,
    conjugate_functor,
    extension_of_scalars,
    functor_from_matrices,
    functor_to_vector_spaces,
    identity_functor,
    is_faithful_on_window,
    validate_functor,
    zero_functor,
)
from KernelLab.categories.presentation import (
    AddObject,
    basis_morphism,
    block_morphism,
    compose,
    validate_category,
)


def nilpotent_pair(C, name="theta"):
    return functor_from_matrices(C, name, {"R": 2}, {"id": [[1, 0], [0, 1]], "x": [[0, 1], [0, 0]]})


class TestValidateFunctor:
    def test_dual_numbers_on_k2(self, dual):
        assert validate_functor(dual, nilpotent_pair(dual)).valid

    def test_shipped_functors(self, shipped_dual, dual_bundle):
        for name in ("theta_k2", "theta_k3", "theta_aug"):
            report = validate_functor(shipped_dual, dual_bundle.functor(name))
            assert report.valid, report.violations

    def test_x_to_identity_breaks_nilpotency(self, dual):
        theta = functor_from_matrices(dual, "bad", {"R": 1}, {"id": [[1]], "x": [[1]]})
        report = validate_functor(dual, theta)
        assert not report.valid
        assert any("∘" in v for v in report.violations)

    def test_wrong_shape(self, dual):
        theta = functor_from_matrices(dual, "bad", {"R": 2}, {"id": [[1, 0], [0, 1]], "x": [[0, 1]]})
        assert not validate_functor(dual, theta).valid

    def test_tensor_contraction(self, Q):
        C = build_OB(2, 4, Q)
        V = tensor_contraction_functor(C, 2)
        assert validate_functor(C, V, words_up_to((BLACK, WHITE), 2)).valid

    def test_contraction_needs_matching_loop_value(self, Q):
        with pytest.raises(ValueError):
            tensor_contraction_functor(build_OB(3, 2, Q), 2)


class TestFaithful:
    def test_k2_is_faithful(self, dual):
        assert is_faithful_on_window(dual, nilpotent_pair(dual), ["R", AddObject.of("R", "R")])

    def test_augmentation_is_not(self, dual_bundle, shipped_dual):
        assert not is_faithful_on_window(shipped_dual, dual_bundle.functor("theta_aug"), ["R"])

    def test_zero_functor(self, dual):
        assert validate_functor(dual, zero_functor(dual)).valid
        assert not is_faithful_on_window(dual, zero_functor(dual), ["R"])


def test_conjugation_preserves_functoriality(dual, Q):
    theta = nilpotent_pair(dual)
    change = ExactMatrix.from_rows(Q, [[1, 1], [0, 2]])
    rebased = conjugate_functor(dual, theta, {"R": change})
    assert validate_functor(dual, rebased).valid
    x = basis_morphism(dual, "x")
    assert apply_morphism(dual, rebased, x) @ change == change @ apply_morphism(dual, theta, x)


def test_extension_of_scalars(dual):
    # S = k[y]/(y^4) with x ↦ y^2
    basis = ["1", "y", "y2", "y3"]
    degree = {s: k for k, s in enumerate(basis)}
    products = {(s, t): ({basis[degree[s] + degree[t]]: 1} if degree[s] + degree[t] < 4 else {})
                for s in basis for t in basis}
    theta = extension_of_scalars(dual, basis, products, {"id": {"1": 1}, "x": {"y2": 1}})
    assert validate_functor(dual, theta).valid
    assert theta.dims["R"] == 4
    assert apply_morphism(dual, theta, basis_morphism(dual, "x")).rank == 2


def test_block_images(shipped_dual, theta_k2):
    dual = shipped_dual
    x, one = basis_morphism(dual, "x"), basis_morphism(dual, "id")
    row = block_morphism([[one, x]])
    image = apply_morphism(dual, theta_k2, row)
    assert image.shape == (2, 4)
    assert image == ExactMatrix.hstack(dual.field, [apply_morphism(dual, theta_k2, one),
                                                    apply_morphism(dual, theta_k2, x)], 2)


class TestPresentedFunctor:
    def test_identity_functor(self, dual):
        u = identity_functor(dual)
        f = block_morphism([[basis_morphism(dual, "x"), basis_morphism(dual, "id")]])
        assert u.apply_morphism(f) == f

    def test_into_vector_spaces_respects_composition(self, shipped_dual, theta_k2):
        dual = shipped_dual
        u = functor_to_vector_spaces(dual, theta_k2)
        vec = u.target
        assert validate_category(vec).valid
        x = basis_morphism(dual, "x")
        assert u.apply_object(AddObject.of("R", "R")) == AddObject(("k",) * 4)
        assert compose(vec, u.apply_morphism(x), u.apply_morphism(x)).is_zero()
        assert not u.apply_morphism(x).is_zero()
