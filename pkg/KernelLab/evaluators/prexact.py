"""Local prexactness, flatness and the agreement of the three kernel descriptions."""

from dataclasses import dataclass, field as dataclass_field
from enum import Enum
import logging
from typing import Any, Callable, List, Optional, Sequence

from KernelLab.core.errors import WindowError
from KernelLab.core.linalg import ExactMatrix, SubQuotient, in_span, kernel_basis
from KernelLab.categories.functors import FunctorSpec, PresentedFunctor, apply_morphism
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    MorphismExpr,
    as_add_object,
    block_morphism,
    hom_space,
    postcompose_matrix,
    precompose_matrix,
    unit_object,
)
from KernelLab.homological.complexes import (
    ChainMap,
    Complex,
    concentrated,
    is_weak_kernel_kb,
    kb_hom,
    theta_delta,
    theta_delta_map,
    two_term,
    weak_kernel_kb,
)
from KernelLab.homological.noy import NoyObject, n_image, noy_morphism, vec_theta_map
from KernelLab.evaluators.kernels import Window, annihilator_generators, sigma_theta, window_morphisms

logger = logging.getLogger(__name__)


class VerdictKind(Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PrexactVerdict:
    """Outcome of the three-term exactness test at one morphism f.

    A certified verdict carries g: Z → X⁰ with f∘g = 0 and θ(Z) → θ(X⁰) → θ(X¹)
    exact. A refuted verdict carries a vector of ker θ(f) outside every
    witness image and the reason the window is complete.
    """

    morphism: MorphismExpr
    kind: VerdictKind
    witness: Optional[MorphismExpr] = None
    homology_dimension: int = 0
    surviving_class: Optional[ExactMatrix] = None
    certificate: str = ""
    detail: str = ""


@dataclass
class PrexactReport:
    functor: str
    verdicts: List[PrexactVerdict] = dataclass_field(default_factory=list)

    @property
    def aggregate(self) -> VerdictKind:
        kinds = {v.kind for v in self.verdicts}
        if VerdictKind.REFUTED in kinds:
            return VerdictKind.REFUTED
        if VerdictKind.INCONCLUSIVE in kinds:
            return VerdictKind.INCONCLUSIVE
        return VerdictKind.CERTIFIED


def _covers(C: CatPresentation, theta: FunctorSpec, g: MorphismExpr, kernel: ExactMatrix) -> bool:
    return in_span(apply_morphism(C, theta, g), kernel)


def _joint(gens: Sequence[MorphismExpr], target: AddObject) -> MorphismExpr:
    return block_morphism([list(gens)]) if gens else MorphismExpr.zero(AddObject.zero(), target)


def prexact_check(C: CatPresentation, theta: FunctorSpec, f: MorphismExpr, W: Window) -> PrexactVerdict:
    kernel = kernel_basis(apply_morphism(C, theta, f))
    label = f.describe(C)
    if kernel.cols == 0:
        witness = MorphismExpr.zero(AddObject.zero(), f.source)
        return PrexactVerdict(f, VerdictKind.CERTIFIED, witness, detail=f"θ({label}) is injective")

    gens = annihilator_generators(C, f, W)
    for g in gens:
        if _covers(C, theta, g, kernel):
            return PrexactVerdict(f, VerdictKind.CERTIFIED, g, detail=f"single witness {g.describe(C)}")

    by_object = {}
    for g in gens:
        by_object.setdefault(g.source, []).append(g)
    for y, group in by_object.items():
        if len(group) > 1:
            joint = _joint(group, f.source)
            if _covers(C, theta, joint, kernel):
                return PrexactVerdict(f, VerdictKind.CERTIFIED, joint,
                                      detail=f"joint witness on {len(group)} copies of {y.describe(C)}")

    joint = _joint(gens, f.source)
    images = apply_morphism(C, theta, joint)
    if len(by_object) > 1 and in_span(images, kernel):
        return PrexactVerdict(f, VerdictKind.CERTIFIED, joint, detail="joint witness over the window")

    homology = SubQuotient.from_spans(kernel, images)
    surviving = homology.representatives.column(0)
    if W.complete:
        logger.info(f"{theta.name} is not prexact at {label}: homology of dimension {homology.dimension}")
        return PrexactVerdict(f, VerdictKind.REFUTED, joint, homology.dimension, surviving,
                              certificate=W.completeness_reason,
                              detail="no zero-composite morphism covers ker θ(f)")
    logger.warning(f"Prexactness of {theta.name} at {label} is undecided on the window "
                   f"({W.completeness_reason})")
    return PrexactVerdict(f, VerdictKind.INCONCLUSIVE, joint, homology.dimension, surviving,
                          detail=W.completeness_reason)


def prexact_report(C: CatPresentation, theta: FunctorSpec, W: Window,
                   morphisms: Optional[Sequence[MorphismExpr]] = None) -> PrexactReport:
    morphisms = list(morphisms) if morphisms is not None else window_morphisms(C, W)
    logger.info(f"Checking prexactness of {theta.name} at {len(morphisms)} morphisms")
    report = PrexactReport(theta.name)
    for f in morphisms:
        report.verdicts.append(prexact_check(C, theta, f, W))
    return report


# ---------------------------------------------------------------------------
# flatness


class FlatKind(Enum):
    FLAT = "flat"
    NOT_FLAT = "not-flat"
    INCONCLUSIVE = "inconclusive"


@dataclass
class FlatVerdict:
    kind: FlatKind
    checked: int = 0
    failures: List[str] = dataclass_field(default_factory=list)
    detail: str = ""


def weak_kernel(C: CatPresentation, f: MorphismExpr, W: Window) -> MorphismExpr:
    """The joint annihilator row K → X⁰; a weak kernel of f when W is complete."""
    return _joint(annihilator_generators(C, f, W), f.source)


def _factors_on(D: CatPresentation, k: MorphismExpr, f: MorphismExpr, T: AddObject) -> bool:
    """Every t: T → X with f∘t = 0 is k∘s for some s."""
    killed = kernel_basis(postcompose_matrix(D, f, T))
    reachable = postcompose_matrix(D, k, T)
    return in_span(reachable, killed)


def flat_check(u: PresentedFunctor, W_source: Window, W_target: Window,
               morphisms: Optional[Sequence[MorphismExpr]] = None) -> FlatVerdict:
    """Whether u sends the window weak kernels of C to weak kernels of D."""
    C, D = u.source, u.target
    morphisms = list(morphisms) if morphisms is not None else window_morphisms(C, W_source)
    verdict = FlatVerdict(FlatKind.FLAT)
    for f in morphisms:
        k = weak_kernel(C, f, W_source)
        uf, uk = u.apply_morphism(f), u.apply_morphism(k)
        for T in W_target.objects:
            verdict.checked += 1
            if not _factors_on(D, uk, uf, T):
                verdict.failures.append(f"{f.describe(C)} against {T.describe(D)}")
    if verdict.failures:
        if W_source.complete and W_target.complete:
            verdict.kind = FlatKind.NOT_FLAT
            verdict.detail = f"{u.name} does not send a weak kernel to a weak kernel"
        else:
            verdict.kind = FlatKind.INCONCLUSIVE
            verdict.detail = W_source.completeness_reason if not W_source.complete else W_target.completeness_reason
            logger.warning(f"Flatness of {u.name} is undecided: {verdict.detail}")
    else:
        verdict.detail = f"weak kernels preserved on {len(morphisms)} morphisms"
    logger.info(f"flat_check({u.name}): {verdict.kind.value}")
    return verdict


def flat_check_kb(C: CatPresentation, maps: Sequence[ChainMap], tests: Sequence[Complex]) -> FlatVerdict:
    """The inclusion K^b₊ ↪ K^b on a window: the shifted cone of each u stays a weak kernel in K^b."""
    verdict = FlatVerdict(FlatKind.FLAT)
    for u in maps:
        for X in (u.source, u.target):
            support = X.support()
            if support and support[0] < 0:
                raise WindowError(f"{X.describe(C)} is not supported in degrees ≥ 0")
        _, p = weak_kernel_kb(C, u)
        verdict.checked += 1
        if not is_weak_kernel_kb(C, p, u, tests):
            verdict.failures.append(f"{u.source.describe(C)} → {u.target.describe(C)}")
    if verdict.failures:
        verdict.kind = FlatKind.NOT_FLAT
        verdict.detail = "a shifted cone is not a weak kernel against the test complexes"
    else:
        verdict.detail = f"weak kernels preserved for {len(maps)} chain maps against {len(tests)} test complexes"
    return verdict


# ---------------------------------------------------------------------------
# the three descriptions of Σθ at the unit


def _killed(field: Any, basis: ExactMatrix, image: Callable[[ExactMatrix], ExactMatrix]) -> ExactMatrix:
    """Vectors in the span of ``basis`` sent to zero by the linear map ``image``."""
    columns = [image(c).flatten() for c in basis.columns()]
    size = columns[0].rows if columns else 0
    coefficients = kernel_basis(ExactMatrix.hstack(field, columns, size))
    return basis @ coefficients


@dataclass
class MuNuRow:
    morphism: MorphismExpr
    noy_dimension: int
    sigma_dimension: int
    kb_dimension: int
    agree: bool


@dataclass
class MuNuReport:
    functor: str
    rows: List[MuNuRow] = dataclass_field(default_factory=list)

    @property
    def discrepancies(self) -> int:
        return sum(1 for r in self.rows if not r.agree)


def mu_nu_row(C: CatPresentation, theta: FunctorSpec, f: MorphismExpr, A: AddObject) -> MuNuRow:
    field = C.field
    space = hom_space(C, f.source, A)
    denominator = precompose_matrix(C, f, A)

    # Noy(f, N A) is all of hom(X⁰, A) modulo hom(X¹, A)∘f
    source, target = NoyObject(f), n_image(A)
    noy_killed = _killed(field, ExactMatrix.identity(field, space.dimension),
                         lambda c: vec_theta_map(C, theta, noy_morphism(C, source, target, space.morphism(c))))
    from_noy = SubQuotient.from_spans(noy_killed, denominator)

    from_sigma = sigma_theta(C, theta, A, f)

    # K^b(X_f, A), chain maps read off in degree 0
    X, Y = two_term(f, 0), concentrated(A, 0)
    kb = kb_hom(C, X, Y)
    hx, hy = theta_delta(C, theta, X), theta_delta(C, theta, Y)

    def delta_image(c: ExactMatrix) -> ExactMatrix:
        v = kb.chain_map(c)
        blocks = [theta_delta_map(C, theta, v, i, hx, hy).flatten() for i in kb.degrees]
        return ExactMatrix.vstack(field, blocks, 1)

    killed_maps = _killed(field, kb.chain_maps, delta_image)
    start = kb.offsets[0]
    projected = killed_maps.submatrix(slice(start, start + space.dimension), slice(None))
    from_kb = SubQuotient.from_spans(projected, denominator)

    agree = from_noy.same_space(from_sigma) and from_sigma.same_space(from_kb)
    if not agree:
        logger.warning(f"Kernel descriptions disagree at {f.describe(C)}: "
                       f"{from_noy.dimension}, {from_sigma.dimension}, {from_kb.dimension}")
    return MuNuRow(f, from_noy.dimension, from_sigma.dimension, from_kb.dimension, agree)


def mu_nu_check(C: CatPresentation, theta: FunctorSpec, W: Window,
                morphisms: Optional[Sequence[MorphismExpr]] = None, unit: Any = None) -> MuNuReport:
    """Compare ker vec θ on Noy(f, N𝟙), Σθ(f) and ker θ^ℤ_Δ on K^b(X_f, 𝟙) inside hom(X⁰, 𝟙)."""
    A = as_add_object(unit) if unit is not None else unit_object(C)
    morphisms = list(morphisms) if morphisms is not None else window_morphisms(C, W)
    report = MuNuReport(theta.name)
    for f in morphisms:
        report.rows.append(mu_nu_row(C, theta, f, A))
    logger.info(f"mu-nu check of {theta.name}: {report.discrepancies} discrepancies in {len(report.rows)} morphisms")
    return report
