"""Seeded random instances over the shipped dual numbers."""

import pytest
from hypothesis import given, strategies as st

from KernelLab.core.linalg import kernel_basis
from KernelLab.core.sampling import (
    make_rng,
    random_add_object,
    random_chain_map,
    random_complex,
    random_morphism,
    random_noy_morphism,
    random_two_term,
)
from KernelLab.categories.functors import apply_morphism, apply_object
from KernelLab.categories.presentation import AddObject, compose
from KernelLab.homological.complexes import (
    compose_chain,
    cone,
    identity_chain,
    kb_hom,
    shift,
    tensor_complexes,
    theta_delta,
    validate_chain_map,
    validate_complex,
)
from KernelLab.homological.noy import NoyObject, n_image, vec_theta_map
from KernelLab.evaluators.kernels import make_window, noy_morphism_killed
from KernelLab.evaluators.prexact import VerdictKind, prexact_check

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def euler(C, theta, X) -> int:
    return sum((-1) ** i * theta_delta(C, theta, X).dimension(i) for i in X.degrees)


def term_euler(theta, X) -> int:
    return sum((-1) ** i * apply_object(theta, X.at(i)) for i in X.degrees)


@pytest.fixture(scope="module")
def full(shipped_dual):
    return make_window(shipped_dual)


@given(seed=seeds)
def test_random_complexes_square_to_zero(shipped_dual, seed):
    X = random_complex(shipped_dual, make_rng(seed), length=4)
    validate_complex(shipped_dual, X)


@given(seed=seeds)
def test_homology_euler_characteristic_matches_terms(shipped_dual, theta_k3, seed):
    X = random_complex(shipped_dual, make_rng(seed), length=4)
    assert euler(shipped_dual, theta_k3, X) == term_euler(theta_k3, X)


@given(seed=seeds)
def test_cone_euler_characteristic(shipped_dual, theta_k2, seed):
    C = shipped_dual
    rng = make_rng(seed)
    X = random_complex(C, rng)
    Y = random_complex(C, rng)
    u = random_chain_map(C, rng, X, Y)
    assert euler(C, theta_k2, cone(C, u)) == euler(C, theta_k2, Y) - euler(C, theta_k2, X)


@given(seed=seeds)
def test_chain_maps_compose(shipped_dual, seed):
    C = shipped_dual
    rng = make_rng(seed)
    X, Y, Z = (random_complex(C, rng) for _ in range(3))
    u = random_chain_map(C, rng, X, Y)
    v = random_chain_map(C, rng, Y, Z)
    validate_chain_map(C, compose_chain(C, v, u))


@given(seed=seeds)
def test_cone_of_identity_is_contractible(shipped_dual, seed):
    C = shipped_dual
    X = random_complex(C, make_rng(seed))
    Z = cone(C, identity_chain(C, X))
    assert kb_hom(C, Z, Z).dimension == 0


@given(seed=seeds)
def test_shift_moves_homology(shipped_dual, theta_aug, seed):
    C = shipped_dual
    X = random_complex(C, make_rng(seed), lo=1)
    shifted = theta_delta(C, theta_aug, shift(C, X, 1)).dimensions()
    assert shifted == {i - 1: d for i, d in theta_delta(C, theta_aug, X).dimensions().items()}


@given(seed=seeds)
def test_tensor_euler_characteristic_is_multiplicative(shipped_dual, theta_aug, seed):
    C = shipped_dual
    rng = make_rng(seed)
    X = random_complex(C, rng, length=2)
    Y = random_complex(C, rng, length=2)
    XY = validate_complex(C, tensor_complexes(C, X, Y))
    assert term_euler(theta_aug, XY) == term_euler(theta_aug, X) * term_euler(theta_aug, Y)
    assert euler(C, theta_aug, XY) == term_euler(theta_aug, XY)


@given(seed=seeds)
def test_regular_functor_is_prexact_everywhere(shipped_dual, theta_k2, full, seed):
    C = shipped_dual
    rng = make_rng(seed)
    source = random_add_object(C, rng, ["R"])
    target = random_add_object(C, rng, ["R"])
    verdict = prexact_check(C, theta_k2, random_morphism(C, rng, source, target), full)
    assert verdict.kind == VerdictKind.CERTIFIED


@given(seed=seeds)
def test_functors_preserve_composition_on_random_morphisms(shipped_dual, theta_k3, seed):
    C = shipped_dual
    rng = make_rng(seed)
    f = random_two_term(C, rng, ["R"])
    g = random_morphism(C, rng, f.target, AddObject.of("R", "R"))
    assert apply_morphism(C, theta_k3, compose(C, g, f)) == (
        apply_morphism(C, theta_k3, g) @ apply_morphism(C, theta_k3, f))


@given(seed=seeds)
def test_kernel_has_complementary_rank(shipped_dual, theta_k3, seed):
    rng = make_rng(seed)
    f = random_morphism(shipped_dual, rng, AddObject.of("R", "R"), "R")
    M = apply_morphism(shipped_dual, theta_k3, f)
    assert kernel_basis(M).cols + M.rank == M.cols


@given(seed=seeds)
def test_killed_noy_morphisms_match_vec_theta(shipped_dual, theta_k3, seed):
    C = shipped_dual
    rng = make_rng(seed)
    f = NoyObject(random_morphism(C, rng, "R", random_add_object(C, rng, ["R"])))
    g = n_image(random_add_object(C, rng, ["R"]))
    alpha = random_noy_morphism(C, rng, f, g)
    assert noy_morphism_killed(C, theta_k3, alpha) == vec_theta_map(C, theta_k3, alpha).is_zero()
