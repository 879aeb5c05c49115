"""The category Noy(C): objects are morphisms f: X⁰ → X¹ of C, and

    Noy(f, g) = φ₁⁻¹(im φ₃) / im φ₂

with φ₁ = g∘−, φ₂ = −∘f on hom(X¹, Y⁰) and φ₃ = −∘f on hom(X¹, Y¹).
A morphism is represented by α: X⁰ → Y⁰ together with a witness β: X¹ → Y¹
for g∘α = β∘f.
"""

from dataclasses import dataclass
import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from KernelLab.core.errors import FactorizationError, KernelLabError, ObjectMismatchError
from KernelLab.core.linalg import ExactMatrix, SubQuotient, image_basis, kernel_basis, preimage, solve
from KernelLab.categories.functors import FunctorSpec, LazyImages, apply_morphism
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    HomSpace,
    MorphismExpr,
    TablePresentation,
    as_add_object,
    block_morphism,
    compose,
    factor_after,
    hom_space,
    identity_morphism,
    postcompose_matrix,
    precompose_matrix,
    subtract_morphisms,
    tensor,
    unit_object,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NoyObject:
    """A morphism f: X⁰ → X¹ seen as an object of Noy(C)."""

    morphism: MorphismExpr
    name: Optional[str] = None

    @property
    def x0(self) -> AddObject:
        return self.morphism.source

    @property
    def x1(self) -> AddObject:
        return self.morphism.target

    @property
    def is_n_image(self) -> bool:
        """True for N A = (A → 0)."""
        return self.x1.is_zero

    def describe(self, C: Optional[CatPresentation] = None) -> str:
        if self.name:
            return self.name
        if self.is_n_image:
            return f"N({self.x0.describe(C)})"
        return f"{self.morphism.describe(C)}: {self.x0.describe(C)} → {self.x1.describe(C)}"


def n_image(A: Any, name: Optional[str] = None) -> NoyObject:
    """N A, the object A → 0."""
    A = as_add_object(A)
    return NoyObject(MorphismExpr.zero(A, AddObject.zero()), name)


@dataclass(frozen=True, eq=False)
class NoyMorphism:
    source: NoyObject
    target: NoyObject
    alpha: MorphismExpr
    witness: MorphismExpr

    def describe(self, C: Optional[CatPresentation] = None) -> str:
        return f"[{self.alpha.describe(C)}]: {self.source.describe(C)} → {self.target.describe(C)}"


def noy_morphism(C: CatPresentation, f: NoyObject, g: NoyObject, alpha: MorphismExpr) -> NoyMorphism:
    """Check that g∘α factors through f and record the witness."""
    if not alpha.source.same_layout(f.x0) or not alpha.target.same_layout(g.x0):
        raise ObjectMismatchError(f"{alpha.describe(C)} does not run from {f.x0.describe(C)} to {g.x0.describe(C)}")
    witness = factor_after(C, compose(C, g.morphism, alpha), f.morphism)
    if witness is None:
        raise FactorizationError(f"g∘α does not factor through f for α = {alpha.describe(C)}")
    return NoyMorphism(f, g, alpha, witness)


def noy_identity(C: CatPresentation, f: NoyObject) -> NoyMorphism:
    return NoyMorphism(f, f, identity_morphism(C, f.x0), identity_morphism(C, f.x1))


@dataclass(frozen=True, eq=False)
class NoyHom:
    """Noy(f, g) as a subquotient of hom(X⁰, Y⁰)."""

    presentation: CatPresentation
    source: NoyObject
    target: NoyObject
    space: HomSpace
    value: SubQuotient

    @property
    def dimension(self) -> int:
        return self.value.dimension

    def vectorize(self, alpha: MorphismExpr) -> ExactMatrix:
        return self.space.vectorize(alpha)

    def contains(self, alpha: MorphismExpr) -> bool:
        """Whether g∘α factors through f."""
        return self.value.contains(self.vectorize(alpha))

    def is_zero_class(self, alpha: MorphismExpr) -> bool:
        return self.value.is_trivial_class(self.vectorize(alpha))

    def class_of(self, alpha: MorphismExpr) -> ExactMatrix:
        return self.value.coordinates(self.vectorize(alpha))

    def morphism(self, vector: Any) -> NoyMorphism:
        return noy_morphism(self.presentation, self.source, self.target, self.space.morphism(vector))

    def representatives(self) -> List[NoyMorphism]:
        """Lifts of a basis of Noy(f, g), each with its factorization witness."""
        return [self.morphism(column) for column in self.value.representatives.columns()]


def noy_hom(C: CatPresentation, f: NoyObject, g: NoyObject) -> NoyHom:
    phi1 = postcompose_matrix(C, g.morphism, f.x0)
    phi2 = precompose_matrix(C, f.morphism, g.x0)
    phi3 = precompose_matrix(C, f.morphism, g.x1)
    numerator = preimage(phi1, image_basis(phi3))
    value = SubQuotient.from_spans(numerator, phi2)
    logger.debug(f"Noy({f.describe(C)}, {g.describe(C)}) has dimension {value.dimension}")
    return NoyHom(C, f, g, hom_space(C, f.x0, g.x0), value)


def noy_compose(C: CatPresentation, beta: NoyMorphism, alpha: NoyMorphism) -> NoyMorphism:
    """β∘α; witnesses compose as well."""
    if not alpha.target.x0.same_layout(beta.source.x0) or not alpha.target.x1.same_layout(beta.source.x1):
        raise ObjectMismatchError("Noy morphisms are not composable")
    return NoyMorphism(alpha.source, beta.target,
                       compose(C, beta.alpha, alpha.alpha),
                       compose(C, beta.witness, alpha.witness))


def noy_equal(C: CatPresentation, alpha: NoyMorphism, other: NoyMorphism) -> bool:
    """Equal in Noy iff the difference of representatives factors through the source."""
    difference = subtract_morphisms(C, alpha.alpha, other.alpha)
    return factor_after(C, difference, alpha.source.morphism) is not None


def noy_kernel(C: CatPresentation, alpha: NoyMorphism) -> Tuple[NoyObject, NoyMorphism]:
    """The kernel of α: f → g is (f, α): X⁰ → X¹ ⊕ Y⁰ with the evident map to f."""
    f = alpha.source
    k = NoyObject(block_morphism([[f.morphism], [alpha.alpha]]))
    id_x1 = identity_morphism(C, f.x1)
    witness = block_morphism([[id_x1, MorphismExpr.zero(alpha.target.x0, f.x1)]])
    projection = NoyMorphism(k, f, identity_morphism(C, f.x0), witness)
    return k, projection


def noy_postcompose_matrix(C: CatPresentation, beta: NoyMorphism, h: NoyObject,
                           source_hom: Optional[NoyHom] = None,
                           target_hom: Optional[NoyHom] = None) -> ExactMatrix:
    """Noy(h, g) → Noy(h, g′) induced by β: g → g′, in representative coordinates."""
    source_hom = source_hom or noy_hom(C, h, beta.source)
    target_hom = target_hom or noy_hom(C, h, beta.target)
    columns = []
    for rep in source_hom.value.representatives.columns():
        image = compose(C, beta.alpha, source_hom.space.morphism(rep))
        columns.append(target_hom.class_of(image))
    return ExactMatrix.hstack(C.field, columns, target_hom.dimension)


def verify_kernel(C: CatPresentation, alpha: NoyMorphism, kernel: NoyObject, projection: NoyMorphism,
                  tests: Sequence[NoyObject]) -> bool:
    """0 → Noy(h, k) → Noy(h, f) → Noy(h, g) is exact for every test object h."""
    for h in tests:
        hk, hf, hg = noy_hom(C, h, kernel), noy_hom(C, h, alpha.source), noy_hom(C, h, alpha.target)
        first = noy_postcompose_matrix(C, projection, h, hk, hf)
        second = noy_postcompose_matrix(C, alpha, h, hf, hg)
        if first.rank != first.cols:
            logger.info(f"Kernel map is not injective against {h.describe(C)}")
            return False
        if not (second @ first).is_zero() or first.rank != hf.dimension - second.rank:
            logger.info(f"Kernel sequence is not exact against {h.describe(C)}")
            return False
    return True


def noy_tensor(C: CatPresentation, f: NoyObject, g: NoyObject) -> NoyObject:
    """X⁰⊗Y⁰ → X¹⊗Y⁰ ⊕ X⁰⊗Y¹."""
    C.require_monoidal()
    left = tensor(C, f.morphism, identity_morphism(C, g.x0))
    right = tensor(C, identity_morphism(C, f.x0), g.morphism)
    return NoyObject(block_morphism([[left], [right]]))


def noy_unit(C: CatPresentation) -> NoyObject:
    return n_image(unit_object(C), "N𝟙")


# ---------------------------------------------------------------------------
# a finite skeleton of Noy(C) as a presentation


class NoyPresentation(TablePresentation):
    """Structure constants of Noy(C) on a declared skeleton.

    The basis of Noy(P, Q) is the representative basis of ``noy_hom``; its
    ids read ``P_Q_k``.
    """

    def __init__(self, base: CatPresentation, skeleton: Mapping[str, NoyObject], name: Optional[str] = None):
        self.base = base
        self.skeleton = dict(skeleton)
        self.noy_homs: Dict[Tuple[str, str], NoyHom] = {}
        names = list(self.skeleton)
        logger.info(f"Building the Noy skeleton {names} over {base.name}")
        homs, reps = {}, {}
        for p in names:
            for q in names:
                nh = noy_hom(base, self.skeleton[p], self.skeleton[q])
                self.noy_homs[(p, q)] = nh
                ids = [f"{p}_{q}_{k}" for k in range(nh.dimension)]
                homs[(p, q)] = ids
                for k, b in enumerate(ids):
                    reps[b] = nh.space.morphism(nh.value.representatives.column(k))
        self.representatives = reps
        products = {}
        for p in names:
            for q in names:
                for r in names:
                    target = self.noy_homs[(p, r)]
                    for fb in homs[(p, q)]:
                        for gb in homs[(q, r)]:
                            composite = compose(base, reps[gb], reps[fb])
                            coords = target.class_of(composite)
                            products[(gb, fb)] = {homs[(p, r)][k]: coords.entry(k, 0)
                                                  for k in range(coords.rows) if coords.entry(k, 0) != 0}
        identities = {}
        for p in names:
            coords = self.noy_homs[(p, p)].class_of(identity_morphism(base, self.skeleton[p].x0))
            identities[p] = {homs[(p, p)][k]: coords.entry(k, 0) for k in range(coords.rows) if coords.entry(k, 0) != 0}
        super().__init__(name or f"Noy({base.name})", base.field, names, homs, products, identities,
                         metadata={"base": base.name})

    @property
    def n_images(self) -> List[str]:
        return [p for p in self.objects if self.skeleton[p].is_n_image]

    def noy_morphism(self, b: Any) -> NoyMorphism:
        p, q = self.source(b), self.target(b)
        return noy_morphism(self.base, self.skeleton[p], self.skeleton[q], self.representatives[b])

    def describe_basis(self, b: Any) -> str:
        return str(b)


def noy_presentation(C: CatPresentation, skeleton: Mapping[str, NoyObject],
                     name: Optional[str] = None) -> NoyPresentation:
    return NoyPresentation(C, skeleton, name)


# ---------------------------------------------------------------------------
# vec θ: f ↦ ker θ(f)


def vec_theta(C: CatPresentation, theta: FunctorSpec, f: NoyObject) -> ExactMatrix:
    """Columns spanning ker θ(f) inside θ(X⁰)."""
    return kernel_basis(apply_morphism(C, theta, f.morphism))


def vec_theta_map(C: CatPresentation, theta: FunctorSpec, alpha: NoyMorphism) -> ExactMatrix:
    """The map ker θ(f) → ker θ(g) induced by θ(α), in the kernel bases."""
    k_f = vec_theta(C, theta, alpha.source)
    k_g = vec_theta(C, theta, alpha.target)
    image = apply_morphism(C, theta, alpha.alpha) @ k_f
    x = solve(k_g, image)
    if x is None:
        raise KernelLabError(f"θ(α) does not preserve kernels for {alpha.describe(C)}")
    return x


def vec_theta_functor(noy: NoyPresentation, theta: FunctorSpec, name: Optional[str] = None) -> FunctorSpec:
    """vec θ on a Noy skeleton presentation."""
    base = noy.base
    kernels = {p: vec_theta(base, theta, noy.skeleton[p]) for p in noy.objects}
    dims = {p: kernels[p].cols for p in noy.objects}
    images = LazyImages(lambda b: vec_theta_map(base, theta, noy.noy_morphism(b)), known=noy.basis_ids())
    return FunctorSpec(name or f"vec {theta.name}", base.field, dims, images,
                       metadata={"base_functor": theta.name})
