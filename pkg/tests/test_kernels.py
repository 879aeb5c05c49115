import pytest

from KernelLab.core.errors import MissingStructureError
from KernelLab.core.fields import FieldSpec
from KernelLab.categories.diagrams import BLACK, WHITE, frobenius_test_morphism, words_up_to
from KernelLab.categories.functors import zero_functor
from KernelLab.categories.presentation import (
    AddObject,
    MorphismExpr,
    basis_morphism,
    block_morphism,
    hom_space,
    truncated_polynomial,
)
from KernelLab.evaluators.kernels import (
    Certainty,
    annihilator_generators,
    canonical_sigma,
    fr_plus_dim,
    make_window,
    monoidal_sigma,
    monoidal_sigma_theta,
    restricts_to_zero_on_kernel,
    sigma_stabilization,
    sigma_theta,
    window_morphisms,
)


@pytest.fixture(scope="module")
def ob_f2(loader):
    return loader.load("ob-f2")


def balanced_words(max_len):
    return [w for w in words_up_to((BLACK, WHITE), max_len) if w.count(BLACK) == w.count(WHITE)]


class TestWindow:
    def test_finite_presentation_is_complete(self, shipped_dual):
        W = make_window(shipped_dual)
        assert W.complete
        assert "every generator" in W.completeness_reason

    def test_missing_generator(self, noy):
        W = make_window(noy, ["P"])
        assert not W.complete
        assert "L" in W.completeness_reason

    def test_diagram_window_needs_assertion(self, ob_window):
        W = make_window(ob_window, [(BLACK,), (WHITE,)])
        assert not W.complete
        asserted = make_window(ob_window, [(BLACK,), (WHITE,)], assert_complete=True)
        assert asserted.complete and asserted.asserted
        assert "(asserted)" in asserted.describe(ob_window)

    def test_window_morphisms(self, shipped_dual):
        assert len(window_morphisms(shipped_dual, make_window(shipped_dual))) == 2


class TestAnnihilators:
    def test_identity(self, shipped_dual):
        W = make_window(shipped_dual)
        assert annihilator_generators(shipped_dual, basis_morphism(shipped_dual, "id"), W) == []

    def test_x(self, shipped_dual):
        xm = basis_morphism(shipped_dual, "x")
        assert annihilator_generators(shipped_dual, xm, make_window(shipped_dual)) == [xm]

    def test_map_to_zero(self, shipped_dual):
        f = MorphismExpr.zero(AddObject.of("R"), AddObject.zero())
        gens = annihilator_generators(shipped_dual, f, make_window(shipped_dual))
        assert len(gens) == 2


class TestCanonicalSigma:
    def test_x_at_R(self, shipped_dual):
        value = canonical_sigma(shipped_dual, "R", basis_morphism(shipped_dual, "x"), make_window(shipped_dual))
        assert value.dimension == 0
        assert value.certainty == Certainty.EXACT

    def test_split_mono(self, shipped_dual):
        f = block_morphism([[basis_morphism(shipped_dual, "id")],
                            [MorphismExpr.zero(AddObject.of("R"), AddObject.of("R"))]])
        assert canonical_sigma(shipped_dual, "R", f, make_window(shipped_dual)).dimension == 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_truncated_polynomials(self, n):
        C = truncated_polynomial(FieldSpec.rationals(), n)
        W = make_window(C)
        for f in window_morphisms(C, W):
            value = canonical_sigma(C, "R", f, W)
            assert value.dimension == 0, f.describe(C)
            assert value.is_exact

    def test_stabilization_is_monotone(self, ob_f2):
        C = ob_f2.presentation
        f = frobenius_test_morphism(C, 2)
        windows = [make_window(C, balanced_words(k)) for k in (0, 2, 4)]
        report = sigma_stabilization(C, AddObject.of(()), f, windows)
        assert report.dimensions == sorted(report.dimensions, reverse=True)
        assert report.final_dimension == 1
        assert all(c == Certainty.LOWER_BOUND for c in report.certainties)


class TestSigmaTheta:
    def test_faithful_prexact_matches_canonical(self, shipped_dual, theta_k2):
        W = make_window(shipped_dual)
        for f in window_morphisms(shipped_dual, W):
            canonical = canonical_sigma(shipped_dual, "R", f, W)
            assert sigma_theta(shipped_dual, theta_k2, "R", f).same_space(canonical.value)

    def test_zero_functor_gives_cokernel(self, shipped_dual):
        value = sigma_theta(shipped_dual, zero_functor(shipped_dual), "R", basis_morphism(shipped_dual, "x"))
        assert value.dimension == 1

    def test_non_faithful_functor_escapes(self, shipped_dual, dual_bundle, theta_k2):
        zero = MorphismExpr.zero(AddObject.of("R"), AddObject.of("R"))
        W = make_window(shipped_dual)
        assert canonical_sigma(shipped_dual, "R", zero, W).dimension == 0
        assert sigma_theta(shipped_dual, theta_k2, "R", zero).dimension == 0
        assert sigma_theta(shipped_dual, dual_bundle.functor("theta_aug"), "R", zero).dimension == 1

    def test_restriction_to_kernel(self, shipped_dual, theta_k2):
        C = shipped_dual
        assert restricts_to_zero_on_kernel(C, theta_k2, basis_morphism(C, "id"), "R")
        assert not restricts_to_zero_on_kernel(C, theta_k2, basis_morphism(C, "x"), "R")
        zero = MorphismExpr.zero(AddObject.of("R"), AddObject.zero())
        assert not restricts_to_zero_on_kernel(C, theta_k2, zero, "R")

    def test_needs_monoidal_functor(self, shipped_dual, theta_k2):
        with pytest.raises(MissingStructureError):
            monoidal_sigma_theta(shipped_dual, theta_k2, basis_morphism(shipped_dual, "x"))


class TestFrobenius:
    @pytest.mark.parametrize("p,n,expected", [(2, 0, 0), (2, 1, 1), (2, 2, 2), (3, 1, 1), (2, 3, 3)])
    def test_dimensions(self, p, n, expected):
        assert fr_plus_dim(p, n) == expected

    def test_contraction_kills_the_frobenius_class(self, ob_f2):
        C, V = ob_f2.presentation, ob_f2.functor("V2")
        f = frobenius_test_morphism(C, 2)
        assert fr_plus_dim(2, 2) != 0
        assert monoidal_sigma_theta(C, V, f).dimension == 0

    def test_hom_to_unit(self, ob_f2):
        C = ob_f2.presentation
        f = frobenius_test_morphism(C, 2)
        assert hom_space(C, f.source, AddObject.of(())).dimension == 2

    @pytest.mark.slow
    def test_canonical_kernel_at_full_window(self, ob_f2):
        C = ob_f2.presentation
        f = frobenius_test_morphism(C, 2)
        value = monoidal_sigma(C, f, make_window(C, balanced_words(8)))
        assert value.dimension == 1
