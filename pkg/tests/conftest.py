import pytest
from hypothesis import HealthCheck, settings

from KernelLab.core.fields import FieldSpec
from KernelLab.core.loader import CategoryLoader
from KernelLab.categories.diagrams import build_OB
from KernelLab.categories.presentation import dual_numbers

settings.register_profile(
    "kernellab",
    derandomize=True,
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kernellab")


@pytest.fixture(scope="session")
def Q() -> FieldSpec:
    return FieldSpec.rationals()


@pytest.fixture(scope="session")
def F2() -> FieldSpec:
    return FieldSpec.prime(2)


@pytest.fixture(scope="session")
def dual(Q):
    return dual_numbers(Q)


@pytest.fixture(scope="session")
def loader() -> CategoryLoader:
    return CategoryLoader()


@pytest.fixture(scope="session")
def dual_bundle(loader):
    return loader.load("dualnumbers")


@pytest.fixture(scope="session")
def shipped_dual(dual_bundle):
    return dual_bundle.presentation


@pytest.fixture(scope="session")
def theta_k2(dual_bundle):
    return dual_bundle.functor("theta_k2")


@pytest.fixture(scope="session")
def theta_k3(dual_bundle):
    return dual_bundle.functor("theta_k3")


@pytest.fixture(scope="session")
def noy(loader):
    return loader.load("noy-dualnumbers").presentation


@pytest.fixture(scope="session")
def ob_window(Q):
    """OB(2) over Q on words up to length 4."""
    return build_OB(2, 4, Q)


@pytest.fixture(scope="session")
def theta_aug(dual_bundle):
    return dual_bundle.functor("theta_aug")
