import pytest

from KernelLab.core.errors import WindowError
from KernelLab.categories.functors import functor_to_vector_spaces, identity_functor
from KernelLab.categories.presentation import basis_morphism
from KernelLab.homological.complexes import ChainMap, concentrated, identity_chain, shift, two_term
from KernelLab.evaluators.kernels import make_window
from KernelLab.evaluators.prexact import (
    FlatKind,
    VerdictKind,
    flat_check,
    flat_check_kb,
    mu_nu_check,
    prexact_check,
    prexact_report,
)


@pytest.fixture(scope="module")
def full(shipped_dual):
    return make_window(shipped_dual)


class TestPrexact:
    def test_k2_certified_by_x(self, shipped_dual, theta_k2, full):
        xm = basis_morphism(shipped_dual, "x")
        verdict = prexact_check(shipped_dual, theta_k2, xm, full)
        assert verdict.kind == VerdictKind.CERTIFIED
        assert verdict.witness == xm

    def test_k3_refuted(self, shipped_dual, theta_k3, full):
        verdict = prexact_check(shipped_dual, theta_k3, basis_morphism(shipped_dual, "x"), full)
        assert verdict.kind == VerdictKind.REFUTED
        assert verdict.homology_dimension == 1
        assert verdict.surviving_class is not None
        assert "every generator" in verdict.certificate

    @pytest.mark.parametrize("name", ["theta_k2", "theta_k3", "theta_aug"])
    def test_identity_is_certified(self, shipped_dual, dual_bundle, full, name):
        verdict = prexact_check(shipped_dual, dual_bundle.functor(name), basis_morphism(shipped_dual, "id"), full)
        assert verdict.kind == VerdictKind.CERTIFIED

    def test_empty_window_is_inconclusive(self, shipped_dual, theta_k2):
        W = make_window(shipped_dual, [])
        verdict = prexact_check(shipped_dual, theta_k2, basis_morphism(shipped_dual, "x"), W)
        assert verdict.kind == VerdictKind.INCONCLUSIVE
        assert "misses generators" in verdict.detail

    def test_aggregate(self, shipped_dual, theta_k2, theta_k3, full):
        assert prexact_report(shipped_dual, theta_k2, full).aggregate == VerdictKind.CERTIFIED
        assert prexact_report(shipped_dual, theta_k3, full).aggregate == VerdictKind.REFUTED

    def test_growing_window_keeps_certificates(self, shipped_dual, theta_k2, full):
        small = make_window(shipped_dual, [])
        for f in (basis_morphism(shipped_dual, "id"), basis_morphism(shipped_dual, "x")):
            before = prexact_check(shipped_dual, theta_k2, f, small).kind
            after = prexact_check(shipped_dual, theta_k2, f, full).kind
            if before == VerdictKind.CERTIFIED:
                assert after == VerdictKind.CERTIFIED
            assert after != VerdictKind.REFUTED


class TestFlat:
    def test_identity_functor(self, shipped_dual, full):
        verdict = flat_check(identity_functor(shipped_dual), full, full)
        assert verdict.kind == FlatKind.FLAT
        assert verdict.checked == 2

    def test_prexact_functor_is_flat(self, shipped_dual, theta_k2, full):
        u = functor_to_vector_spaces(shipped_dual, theta_k2)
        assert flat_check(u, full, make_window(u.target)).kind == FlatKind.FLAT

    def test_k3_is_not_flat(self, shipped_dual, theta_k3, full):
        u = functor_to_vector_spaces(shipped_dual, theta_k3)
        verdict = flat_check(u, full, make_window(u.target))
        assert verdict.kind == FlatKind.NOT_FLAT
        assert verdict.failures

    def test_partial_window_is_inconclusive(self, shipped_dual, theta_k3):
        u = functor_to_vector_spaces(shipped_dual, theta_k3)
        partial = make_window(shipped_dual, [])
        verdict = flat_check(u, partial, make_window(u.target), [basis_morphism(shipped_dual, "x")])
        assert verdict.kind == FlatKind.INCONCLUSIVE

    def test_nonnegative_inclusion(self, shipped_dual):
        xm = basis_morphism(shipped_dual, "x")
        A = concentrated("R", 0)
        maps = [ChainMap(A, A, {0: xm}), identity_chain(shipped_dual, two_term(xm))]
        tests = [concentrated("R", d) for d in (-1, 0, 1)] + [two_term(xm)]
        assert flat_check_kb(shipped_dual, maps, tests).kind == FlatKind.FLAT

    def test_negative_degrees_rejected(self, shipped_dual):
        X = shift(shipped_dual, concentrated("R", 0), 1)
        with pytest.raises(WindowError):
            flat_check_kb(shipped_dual, [identity_chain(shipped_dual, X)], [X])


class TestMuNu:
    @pytest.mark.parametrize("name", ["theta_k2", "theta_k3"])
    def test_descriptions_agree(self, shipped_dual, dual_bundle, full, name):
        report = mu_nu_check(shipped_dual, dual_bundle.functor(name), full)
        assert len(report.rows) == 2
        assert report.discrepancies == 0

    def test_identity_gives_zero(self, shipped_dual, theta_k2, full):
        report = mu_nu_check(shipped_dual, theta_k2, full, [basis_morphism(shipped_dual, "id")])
        (row,) = report.rows
        assert (row.noy_dimension, row.sigma_dimension, row.kb_dimension) == (0, 0, 0)
