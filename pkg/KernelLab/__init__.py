"""
KernelLab: exact computations of canonical and homological kernels.

This package provides tools for working with finitely presented k-linear
categories over Q and F_p:
- Exact linear algebra, category presentations and diagram categories
- Noy categories and bounded homotopy categories of complexes
- Canonical and homological kernels, prexactness and flatness checks
- Additive Grothendieck topologies on finite skeletons

Quick Start:
    from KernelLab import KernelLab, SessionConfig

    lab = KernelLab(SessionConfig(command="sigma", object="R", morphism="x"))
    print(lab.run().render())
"""

from .core import ExactMatrix, FieldSpec, KernelLabError, SubQuotient
from .categories import CatPresentation, FunctorSpec, build_OB, dual_numbers
from .evaluators import Window, canonical_sigma, enumerate_topologies, prexact_check
from .sdk import KernelLab, Report, SessionConfig, run_command

__version__ = "0.1.0"

__all__ = [
    # SDK
    'KernelLab',
    'SessionConfig',
    'Report',
    'run_command',

    # Core
    'FieldSpec',
    'ExactMatrix',
    'SubQuotient',
    'KernelLabError',

    # Categories
    'CatPresentation',
    'FunctorSpec',
    'dual_numbers',
    'build_OB',

    # Evaluators
    'Window',
    'canonical_sigma',
    'prexact_check',
    'enumerate_topologies'
]
