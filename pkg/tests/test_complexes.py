import pytest

from KernelLab.core.errors import NotAComplexError, WindowError
from KernelLab.categories.presentation import AddObject, basis_morphism, scale_morphism
from KernelLab.homological.complexes import (
    ChainMap,
    compose_chain,
    cone,
    cone_inclusion,
    cone_projection,
    concentrated,
    homotopy_difference,
    identity_chain,
    is_null_homotopic,
    is_weak_kernel_kb,
    kb_hom,
    make_complex,
    shift,
    tensor_complexes,
    theta_delta,
    theta_delta0,
    theta_kills,
    theta_plus0,
    two_term,
    validate_chain_map,
    weak_kernel_kb,
)


@pytest.fixture
def xm(shipped_dual):
    return basis_morphism(shipped_dual, "x")


@pytest.fixture
def X(xm):
    """R →x R in degrees 0, 1."""
    return two_term(xm)


class TestComplex:
    def test_x_squares_to_zero(self, shipped_dual, xm):
        Y = make_complex(shipped_dual, 0, ["R", "R", "R"], [xm, xm])
        assert Y.hi == 2

    def test_identity_does_not(self, shipped_dual):
        one = basis_morphism(shipped_dual, "id")
        with pytest.raises(NotAComplexError):
            make_complex(shipped_dual, 0, ["R", "R", "R"], [one, one])

    def test_shift_moves_degrees(self, shipped_dual, X, xm):
        Y = shift(shipped_dual, X, 1)
        assert (Y.lo, Y.hi) == (-1, 0)
        assert Y.d(-1) == scale_morphism(shipped_dual, -1, xm)

    def test_shift_outside_window(self, shipped_dual, X):
        with pytest.raises(WindowError):
            shift(shipped_dual, X, 3, window=(-1, 2))


class TestKbHom:
    def test_identity_is_not_null_homotopic(self, shipped_dual, X):
        hom = kb_hom(shipped_dual, X, X)
        assert hom.dimension >= 1
        assert not hom.is_null_homotopic(identity_chain(shipped_dual, X))

    def test_into_concentrated(self, shipped_dual, X):
        assert kb_hom(shipped_dual, X, concentrated("R", 0)).dimension == 1

    def test_different_degrees(self, shipped_dual):
        A = concentrated("R", 0)
        assert kb_hom(shipped_dual, A, shift(shipped_dual, A, -1)).dimension == 0

    def test_contractible(self, shipped_dual):
        contractible = two_term(basis_morphism(shipped_dual, "id"))
        assert kb_hom(shipped_dual, contractible, contractible).dimension == 0
        assert is_null_homotopic(shipped_dual, identity_chain(shipped_dual, contractible))


class TestCone:
    def test_cone_of_identity_is_contractible(self, shipped_dual, X):
        Z = cone(shipped_dual, identity_chain(shipped_dual, X))
        assert kb_hom(shipped_dual, Z, Z).dimension == 0

    def test_cone_of_zero(self, shipped_dual, X):
        Y = concentrated(AddObject.of("R", "R"), 0)
        Z = cone(shipped_dual, ChainMap(X, Y))
        assert Z.at(-1) == X.at(0)
        assert Z.at(0) == X.at(1).oplus(Y.at(0))

    def test_not_a_chain_map(self, shipped_dual, X):
        u = ChainMap(X, X, {0: basis_morphism(shipped_dual, "id")})
        with pytest.raises(NotAComplexError):
            cone(shipped_dual, u)

    def test_weak_kernel_of_x(self, shipped_dual, theta_k2, xm):
        A = concentrated("R", 0)
        u = ChainMap(A, A, {0: xm})
        W, p = weak_kernel_kb(shipped_dual, u)
        assert theta_delta0(shipped_dual, theta_k2, W).dimension == 1
        tests = [concentrated("R", 0), concentrated("R", 1), concentrated("R", -1), two_term(xm)]
        assert is_weak_kernel_kb(shipped_dual, p, u, tests)

    def test_triangle_maps(self, shipped_dual, xm):
        C = shipped_dual
        A = concentrated("R", 0)
        u = ChainMap(A, A, {0: xm})
        i, p = cone_inclusion(C, u), cone_projection(C, u)
        validate_chain_map(C, i)
        validate_chain_map(C, p)
        assert all(c.is_zero() for c in compose_chain(C, p, i).components.values())
        assert is_null_homotopic(C, compose_chain(C, i, u))


class TestTensor:
    def test_unit(self, shipped_dual, X):
        Y = tensor_complexes(shipped_dual, X, concentrated("R", 0))
        assert Y.objects == X.objects
        assert Y.d(0) == X.d(0)

    def test_two_term_square(self, shipped_dual, X, xm):
        Y = tensor_complexes(shipped_dual, X, X)
        assert [len(Y.at(i)) for i in Y.degrees] == [1, 2, 1]
        assert Y.d(1).blocks[0][1] == scale_morphism(shipped_dual, -1, xm).blocks[0][0]


class TestThetaDelta:
    def test_concentrated(self, shipped_dual, theta_k3):
        value = theta_delta(shipped_dual, theta_k3, concentrated(AddObject.of("R", "R"), 0))
        assert value.dimensions() == {0: 6}

    def test_three_term_nilpotent_chain(self, shipped_dual, theta_k2, xm):
        Y = make_complex(shipped_dual, 0, ["R", "R", "R"], [xm, xm])
        assert theta_delta(shipped_dual, theta_k2, Y).dimensions() == {0: 1, 2: 1}

    def test_contractible_has_no_homology(self, shipped_dual, theta_k3, X):
        Z = cone(shipped_dual, identity_chain(shipped_dual, X))
        assert theta_delta(shipped_dual, theta_k3, Z).total_dimension == 0

    def test_shift(self, shipped_dual, theta_k3, X):
        before = theta_delta(shipped_dual, theta_k3, X).dimensions()
        after = theta_delta(shipped_dual, theta_k3, shift(shipped_dual, X, 1)).dimensions()
        assert after == {i - 1: d for i, d in before.items()}

    def test_plus_needs_nonnegative_support(self, shipped_dual, theta_k2, X):
        assert theta_plus0(shipped_dual, theta_k2, X).dimension == 1
        with pytest.raises(WindowError):
            theta_plus0(shipped_dual, theta_k2, shift(shipped_dual, X, 1))


class TestHomotopy:
    def test_difference_with_itself_is_null_homotopic(self, shipped_dual, X):
        one = identity_chain(shipped_dual, X)
        assert is_null_homotopic(shipped_dual, homotopy_difference(shipped_dual, one, one))

    def test_theta_kills_contractible_identity(self, shipped_dual, theta_k3, X):
        Z = cone(shipped_dual, identity_chain(shipped_dual, X))
        assert theta_kills(shipped_dual, theta_k3, identity_chain(shipped_dual, Z))

    def test_theta_sees_identity_with_homology(self, shipped_dual, theta_k3, X):
        assert not theta_kills(shipped_dual, theta_k3, identity_chain(shipped_dual, X))
