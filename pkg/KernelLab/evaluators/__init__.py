from .kernels import Certainty, KernelValue, Window, canonical_sigma, make_window, sigma_theta
from .prexact import PrexactVerdict, VerdictKind, flat_check, mu_nu_check, prexact_check
from .sites import Sieve, TopologyTable, enumerate_topologies, homological_topology, iota_image_test

__all__ = [
    'Window',
    'KernelValue',
    'Certainty',
    'make_window',
    'canonical_sigma',
    'sigma_theta',
    'PrexactVerdict',
    'VerdictKind',
    'prexact_check',
    'flat_check',
    'mu_nu_check',
    'Sieve',
    'TopologyTable',
    'enumerate_topologies',
    'homological_topology',
    'iota_image_test'
]
