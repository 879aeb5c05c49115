import pytest
from hypothesis import given, strategies as st

from KernelLab.core.errors import FactorizationError
from KernelLab.core.linalg import kernel_basis, span_equal
from KernelLab.core.sampling import make_rng, random_morphism
from KernelLab.categories.presentation import (
    AddObject,
    add_morphisms,
    basis_morphism,
    block_morphism,
    compose,
    identity_morphism,
    validate_category,
)
from KernelLab.homological.noy import (
    NoyObject,
    n_image,
    noy_compose,
    noy_equal,
    noy_hom,
    noy_identity,
    noy_kernel,
    noy_morphism,
    noy_tensor,
    noy_unit,
    vec_theta,
    vec_theta_functor,
    vec_theta_map,
    verify_kernel,
)
from KernelLab.categories.functors import validate_functor


@pytest.fixture
def x(shipped_dual):
    return NoyObject(basis_morphism(shipped_dual, "x"))


class TestNoyHom:
    def test_into_n_image_is_cokernel(self, shipped_dual, x):
        assert noy_hom(shipped_dual, x, n_image("R")).dimension == 1

    def test_out_of_n_image_is_kernel(self, shipped_dual, x):
        assert noy_hom(shipped_dual, n_image("R"), x).dimension == 1

    def test_n_images_give_the_base_category(self, shipped_dual):
        assert noy_hom(shipped_dual, n_image("R"), n_image("R")).dimension == 2
        assert noy_hom(shipped_dual, n_image(AddObject.of("R", "R")), n_image("R")).dimension == 4

    def test_identity_class_survives(self, shipped_dual, x):
        nh = noy_hom(shipped_dual, x, x)
        assert nh.dimension == 1
        assert not nh.is_zero_class(identity_morphism(shipped_dual, x.x0))
        assert nh.is_zero_class(basis_morphism(shipped_dual, "x"))

    def test_identity_object_is_zero(self, shipped_dual):
        one = NoyObject(basis_morphism(shipped_dual, "id"))
        assert noy_hom(shipped_dual, one, one).dimension == 0

    def test_representatives_carry_witnesses(self, shipped_dual, x):
        C = shipped_dual
        for rep in noy_hom(C, x, n_image("R")).representatives():
            assert compose(C, rep.target.morphism, rep.alpha) == compose(C, rep.witness, rep.source.morphism)

    def test_non_factoring_alpha(self, shipped_dual, x):
        with pytest.raises(FactorizationError):
            noy_morphism(shipped_dual, n_image("R"), x, basis_morphism(shipped_dual, "id"))


class TestNoyKernel:
    def test_kernel_of_identity_is_zero(self, shipped_dual, noy, x):
        C = shipped_dual
        k, _ = noy_kernel(C, noy_identity(C, x))
        for name in noy.objects:
            assert noy_hom(C, noy.skeleton[name], k).dimension == 0

    def test_kernel_of_zero_is_the_source(self, shipped_dual, noy, x):
        C = shipped_dual
        zero = noy_morphism(C, x, n_image("R"), basis_morphism(C, "id", 0))
        k, projection = noy_kernel(C, zero)
        for name in noy.objects:
            h = noy.skeleton[name]
            assert noy_hom(C, h, k).dimension == noy_hom(C, h, x).dimension
        assert verify_kernel(C, zero, k, projection, list(noy.skeleton.values()))

    def test_canonical_class_kernel(self, shipped_dual, x):
        C = shipped_dual
        alpha = noy_morphism(C, x, n_image("R"), basis_morphism(C, "id"))
        k, _ = noy_kernel(C, alpha)
        assert k.morphism == block_morphism([[basis_morphism(C, "x")], [basis_morphism(C, "id")]])

    def test_every_skeleton_morphism_has_a_kernel(self, noy):
        C = noy.base
        tests = list(noy.skeleton.values())
        for b in noy.basis_ids():
            alpha = noy.noy_morphism(b)
            k, projection = noy_kernel(C, alpha)
            assert verify_kernel(C, alpha, k, projection, tests), b


class TestNoySkeleton:
    def test_dimensions(self, noy):
        dims = {(p, q): noy.hom_dim(p, q) for p in noy.objects for q in noy.objects}
        assert dims == {("P", "P"): 2, ("P", "L"): 1, ("L", "P"): 1, ("L", "L"): 1}

    def test_is_a_category(self, noy):
        assert validate_category(noy).valid

    def test_n_images(self, noy):
        assert noy.n_images == ["P"]


class TestNoyTensor:
    def test_unit_law(self, shipped_dual, x):
        assert noy_tensor(shipped_dual, x, noy_unit(shipped_dual)).morphism == x.morphism

    def test_square_of_x(self, shipped_dual, x):
        xx = noy_tensor(shipped_dual, x, x)
        xm = basis_morphism(shipped_dual, "x")
        assert xx.morphism == block_morphism([[xm], [xm]])


class TestVecTheta:
    def test_n_image_gives_full_space(self, shipped_dual, theta_k2):
        assert vec_theta(shipped_dual, theta_k2, n_image("R")).cols == 2

    def test_nilpotent_kernel(self, shipped_dual, theta_k2, x):
        assert vec_theta(shipped_dual, theta_k2, x).cols == 1

    @pytest.mark.parametrize("name", ["theta_k2", "theta_k3", "theta_aug"])
    def test_functor_on_skeleton(self, noy, dual_bundle, name):
        vt = vec_theta_functor(noy, dual_bundle.functor(name))
        assert validate_functor(noy, vt).valid

    @pytest.mark.parametrize("name", ["theta_k2", "theta_k3", "theta_aug"])
    def test_left_exact(self, noy, dual_bundle, name):
        C, theta = noy.base, dual_bundle.functor(name)
        for b in noy.basis_ids():
            alpha = noy.noy_morphism(b)
            _, projection = noy_kernel(C, alpha)
            first = vec_theta_map(C, theta, projection)
            second = vec_theta_map(C, theta, alpha)
            assert first.rank == first.cols
            assert span_equal(first, kernel_basis(second))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@given(seed=seeds)
def test_vec_theta_ignores_representative(shipped_dual, theta_k3, seed):
    C, theta = shipped_dual, theta_k3
    rng = make_rng(seed)
    f = NoyObject(random_morphism(C, rng, "R", AddObject.of("R", "R")))
    g = NoyObject(random_morphism(C, rng, "R", "R"))
    nh = noy_hom(C, f, g)
    for rep in nh.representatives():
        gamma = random_morphism(C, rng, f.x1, g.x0)
        shifted = noy_morphism(C, f, g, add_morphisms(C, rep.alpha, compose(C, gamma, f.morphism)))
        assert noy_equal(C, rep, shifted)
        assert vec_theta_map(C, theta, rep) == vec_theta_map(C, theta, shifted)


@given(seed=seeds)
def test_noy_composition_is_associative(shipped_dual, seed):
    C = shipped_dual
    rng = make_rng(seed)
    objects = [NoyObject(random_morphism(C, rng, "R", "R")) for _ in range(4)]
    maps = []
    for f, g in zip(objects, objects[1:]):
        nh = noy_hom(C, f, g)
        reps = nh.representatives()
        maps.append(reps[rng.randrange(len(reps))] if reps else noy_morphism(C, f, g, basis_morphism(C, "id", 0)))
    a, b, c = maps
    left = noy_compose(C, c, noy_compose(C, b, a))
    right = noy_compose(C, noy_compose(C, c, b), a)
    assert noy_equal(C, left, right)
