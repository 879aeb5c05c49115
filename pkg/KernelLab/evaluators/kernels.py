"""Canonical and homological kernels.

The canonical kernel of f: X⁰ → X¹ at A is

    Σ_A(f) = {α: X⁰ → A | α∘g = 0 whenever f∘g = 0} / (hom(X¹, A)∘f)

where g ranges over a window of test objects. The homological kernel of a
functor θ replaces the annihilator condition by θ(α) vanishing on ker θ(f).
"""

from dataclasses import dataclass, field as dataclass_field
from enum import Enum
import itertools
import logging
from typing import Any, List, Optional, Sequence, Tuple

from KernelLab.core.errors import MissingStructureError
from KernelLab.core.fields import FieldSpec
from KernelLab.core.linalg import ExactMatrix, SubQuotient, kernel_basis
from KernelLab.categories.functors import FunctorSpec, apply_morphism
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    HomSpace,
    MorphismExpr,
    as_add_object,
    hom_space,
    postcompose_matrix,
    precompose_matrix,
    unit_object,
)
from KernelLab.homological.noy import NoyMorphism

logger = logging.getLogger(__name__)


class Certainty(str, Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower-bound-at-window"


@dataclass(frozen=True)
class Window:
    """Test objects standing in for all objects of the additive envelope."""

    objects: Tuple[AddObject, ...]
    strategy: str = "basis"
    degree_lo: int = 0
    degree_hi: int = 1
    complete: bool = False
    completeness_reason: str = ""
    asserted: bool = False

    def describe(self, C: Optional[CatPresentation] = None) -> str:
        names = ", ".join(x.describe(C) for x in self.objects)
        flag = "complete" if self.complete else "partial"
        if self.asserted:
            flag += " (asserted)"
        return f"{{{names}}} [{flag}]"


def completeness_hook(C: CatPresentation, objects: Sequence[AddObject]) -> Tuple[bool, str]:
    """A window is complete when it contains every generator of a finite presentation.

    Every test morphism Y → X⁰ splits into components out of generators, and
    f∘g = 0 holds componentwise, so generators suffice.
    """
    if not C.is_finite:
        return False, f"{C.name} has infinitely many generator objects"
    present = {x for obj in objects for x in obj}
    missing = [x for x in C.objects if x not in present]
    if missing:
        return False, f"window misses generators {', '.join(C.describe_object(x) for x in missing)}"
    return True, f"window contains every generator object of {C.name}"


def make_window(C: CatPresentation, objects: Optional[Sequence[Any]] = None, degree_lo: int = 0,
                degree_hi: int = 1, assert_complete: bool = False) -> Window:
    if objects is None:
        objects = C.objects if C.is_finite else C.validation_objects()
    objs = tuple(as_add_object(x) for x in objects)
    objs = tuple(sorted(objs, key=lambda x: (len(x), objs.index(x))))
    complete, reason = completeness_hook(C, objs)
    asserted = False
    if not complete and assert_complete:
        logger.warning(f"Treating the window on {C.name} as complete by assertion ({reason})")
        complete, asserted, reason = True, True, "completeness asserted by the caller"
    return Window(objs, degree_lo=degree_lo, degree_hi=degree_hi, complete=complete,
                  completeness_reason=reason, asserted=asserted)


def window_morphisms(C: CatPresentation, W: Window) -> List[MorphismExpr]:
    """Basis morphisms between window objects, in window order."""
    out = []
    for x in W.objects:
        for y in W.objects:
            out.extend(hom_space(C, x, y).basis_morphisms())
    return out


@dataclass(frozen=True)
class KernelValue:
    value: SubQuotient
    certainty: Certainty
    window: Optional[Window] = None
    space: Optional[HomSpace] = None

    @property
    def dimension(self) -> int:
        return self.value.dimension

    @property
    def is_exact(self) -> bool:
        return self.certainty == Certainty.EXACT


def annihilator_generators(C: CatPresentation, f: MorphismExpr, W: Window) -> List[MorphismExpr]:
    """A basis of {g: Y → X⁰ | f∘g = 0} for each Y in the window, in window order."""
    gens = []
    for y in W.objects:
        space = hom_space(C, y, f.source)
        kernel = kernel_basis(postcompose_matrix(C, f, y))
        gens.extend(space.morphism(column) for column in kernel.columns())
    logger.debug(f"{len(gens)} annihilator generators for {f.describe(C)} on {len(W.objects)} test objects")
    return gens


def canonical_sigma(C: CatPresentation, A: Any, f: MorphismExpr, W: Window) -> KernelValue:
    A = as_add_object(A)
    space = hom_space(C, f.source, A)
    rows = [precompose_matrix(C, g, A) for g in annihilator_generators(C, f, W)]
    constraints = ExactMatrix.vstack(C.field, rows, space.dimension)
    numerator = kernel_basis(constraints)
    value = SubQuotient.from_spans(numerator, precompose_matrix(C, f, A))
    certainty = Certainty.EXACT if value.is_zero or W.complete else Certainty.LOWER_BOUND
    if certainty != Certainty.EXACT:
        logger.warning(f"Σ_{A.describe(C)}({f.describe(C)}) = {value.dimension} is only an upper bound on dimension "
                       f"({W.completeness_reason})")
    return KernelValue(value, certainty, W, space)


def sigma_theta(C: CatPresentation, theta: FunctorSpec, A: Any, f: MorphismExpr) -> SubQuotient:
    """{α | θ(α) vanishes on ker θ(f)} / (hom(X¹, A)∘f)."""
    A = as_add_object(A)
    space = hom_space(C, f.source, A)
    k_f = kernel_basis(apply_morphism(C, theta, f))
    columns = [(apply_morphism(C, theta, alpha) @ k_f).flatten() for alpha in space.basis_morphisms()]
    rows = sum(theta.dims[a] for a in A) * k_f.cols
    restriction = ExactMatrix.hstack(C.field, columns, rows)
    return SubQuotient.from_spans(kernel_basis(restriction), precompose_matrix(C, f, A))


def monoidal_sigma(C: CatPresentation, f: MorphismExpr, W: Window) -> KernelValue:
    return canonical_sigma(C, unit_object(C), f, W)


def monoidal_sigma_theta(C: CatPresentation, theta: FunctorSpec, f: MorphismExpr) -> SubQuotient:
    if not theta.monoidal:
        raise MissingStructureError(f"Functor {theta.name} is not declared monoidal")
    return sigma_theta(C, theta, unit_object(C), f)


def restricts_to_zero_on_kernel(C: CatPresentation, theta: FunctorSpec, f: MorphismExpr, A: Any) -> bool:
    """Every θ(α), α: X⁰ → A, vanishes on ker θ(f)."""
    k_f = kernel_basis(apply_morphism(C, theta, f))
    return all((apply_morphism(C, theta, alpha) @ k_f).is_zero()
               for alpha in hom_space(C, f.source, A).basis_morphisms())


def noy_morphism_killed(C: CatPresentation, theta: FunctorSpec, alpha: NoyMorphism) -> bool:
    """vec θ(α) = 0 iff the class of α in Noy(f, N Y⁰) lies in Σ_{Y⁰}θ(f)."""
    sigma = sigma_theta(C, theta, alpha.target.x0, alpha.source.morphism)
    return sigma.contains(hom_space(C, alpha.source.x0, alpha.target.x0).vectorize(alpha.alpha))


@dataclass
class StabilizationReport:
    dimensions: List[int] = dataclass_field(default_factory=list)
    certainties: List[Certainty] = dataclass_field(default_factory=list)
    stable_from: Optional[int] = None

    @property
    def final_dimension(self) -> Optional[int]:
        return self.dimensions[-1] if self.dimensions else None


def sigma_stabilization(C: CatPresentation, A: Any, f: MorphismExpr, windows: Sequence[Window]) -> StabilizationReport:
    """dim Σ_A(f) along growing windows; ``stable_from`` indexes the first window of the final constant run."""
    report = StabilizationReport()
    for k, W in enumerate(windows):
        value = canonical_sigma(C, A, f, W)
        report.dimensions.append(value.dimension)
        report.certainties.append(value.certainty)
        logger.info(f"window {k} ({len(W.objects)} objects): dim Σ = {value.dimension}")
    if report.dimensions:
        start = len(report.dimensions) - 1
        while start > 0 and report.dimensions[start - 1] == report.dimensions[-1]:
            start -= 1
        report.stable_from = start
    return report


# ---------------------------------------------------------------------------
# the Frobenius image Γ^p → Sym^p


def _multisets(n: int, p: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(n), p))


def fr_plus_dim(p: int, n: int) -> int:
    """Rank of Γ^p(kⁿ) ↪ (kⁿ)^{⊗p} ↠ Sym^p(kⁿ) over F_p."""
    field = FieldSpec.prime(p)
    if n == 0:
        return 0
    monomials = _multisets(n, p)
    index = {m: k for k, m in enumerate(monomials)}
    words = list(itertools.product(range(n), repeat=p))
    word_index = {w: k for k, w in enumerate(words)}

    divided = field.zeros(len(words), len(monomials))
    for k, m in enumerate(monomials):
        for w in set(itertools.permutations(m)):
            divided[word_index[w], k] = 1
    symmetrize = field.zeros(len(monomials), len(words))
    for w, k in word_index.items():
        symmetrize[index[tuple(sorted(w))], k] = 1
    composite = ExactMatrix(field, symmetrize) @ ExactMatrix(field, divided)
    logger.debug(f"Γ^{p} → Sym^{p} on k^{n}: {composite.shape}")
    return composite.rank
