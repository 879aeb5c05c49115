"""Functors out of presented categories.

``FunctorSpec`` sends a presentation to matrices (finite-dimensional vector
spaces); ``PresentedFunctor`` sends it to another presentation.
"""

from dataclasses import dataclass, field as dataclass_field
import logging
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, Sequence

from KernelLab.core.errors import DotBudgetError, KernelLabError, ObjectMismatchError
from KernelLab.core.fields import FieldSpec
from KernelLab.core.linalg import ExactMatrix, solve
from .presentation import (
    AddObject,
    BasisId,
    CatPresentation,
    MorphismExpr,
    ObjectId,
    ValidationReport,
    add_morphisms,
    as_add_object,
    basis_morphism,
    block_morphism,
    compose_terms,
    hom_space,
    scale_morphism,
    vector_spaces,
)

logger = logging.getLogger(__name__)


class LazyImages(Mapping):
    """Mapping that computes values on first access and keeps them."""

    def __init__(self, compute: Callable[[Any], Any], known: Optional[Iterable[Any]] = None):
        self._compute = compute
        self._cache: Dict[Any, Any] = {}
        self._known = list(known) if known is not None else None

    def __getitem__(self, key: Any) -> Any:
        if key not in self._cache:
            self._cache[key] = self._compute(key)
        return self._cache[key]

    def __contains__(self, key: object) -> bool:
        try:
            self[key]
            return True
        except (KeyError, KernelLabError, ValueError):
            return False

    def __iter__(self):
        return iter(self._known if self._known is not None else self._cache)

    def __len__(self) -> int:
        return len(self._known if self._known is not None else self._cache)


@dataclass(frozen=True, eq=False)
class FunctorSpec:
    """An additive functor θ into matrices: dimensions on generators, matrices on basis morphisms."""

    name: str
    field: FieldSpec
    dims: Mapping[ObjectId, int]
    images: Mapping[BasisId, ExactMatrix]
    monoidal: bool = False
    metadata: Dict[str, Any] = dataclass_field(default_factory=dict)


def functor_from_matrices(C: CatPresentation, name: str, dims: Mapping[ObjectId, int],
                          images: Mapping[BasisId, Sequence[Sequence[object]]],
                          monoidal: bool = False) -> FunctorSpec:
    built = {}
    for b, rows in images.items():
        built[b] = ExactMatrix.from_rows(C.field, rows, cols=dims[C.source(b)])
    return FunctorSpec(name, C.field, dict(dims), built, monoidal)


def apply_object(theta: FunctorSpec, x: Any) -> int:
    return sum(theta.dims[xi] for xi in as_add_object(x))


def apply_terms(C: CatPresentation, theta: FunctorSpec, x: ObjectId, y: ObjectId,
                terms: Mapping[BasisId, object]) -> ExactMatrix:
    out = ExactMatrix.zeros(C.field, theta.dims[y], theta.dims[x])
    for b, c in terms.items():
        out = out + theta.images[b].scale(c)
    return out


def apply_morphism(C: CatPresentation, theta: FunctorSpec, f: MorphismExpr) -> ExactMatrix:
    """θ(f) as a block matrix, blocks laid out like the summands of f."""
    row_sizes = [theta.dims[y] for y in f.target]
    col_sizes = [theta.dims[x] for x in f.source]
    blocks = [[apply_terms(C, theta, x, y, f.blocks[i][j]) for j, x in enumerate(f.source)]
              for i, y in enumerate(f.target)]
    return ExactMatrix.block(C.field, blocks, row_sizes, col_sizes)


def validate_functor(C: CatPresentation, theta: FunctorSpec,
                     objects: Optional[Sequence[ObjectId]] = None) -> ValidationReport:
    """Check shapes, θ(id) = 1, θ(g∘f) = θ(g)θ(f) and, for monoidal θ, θ(a⊗b) = θ(a)⊗θ(b)."""
    objs = list(objects) if objects is not None else list(C.validation_objects())
    report = ValidationReport(f"{theta.name} on {C.name}")
    field = C.field

    missing = [x for x in objs if x not in theta.dims]
    for x in missing:
        report.add(f"no dimension for object {C.describe_object(x)}")
    objs = [x for x in objs if x not in missing]

    for x in objs:
        for y in objs:
            for b in C.hom_basis(x, y):
                if b not in theta.images:
                    report.add(f"no image for {C.describe_basis(b)}")
                    continue
                shape = theta.images[b].shape
                if shape != (theta.dims[y], theta.dims[x]):
                    report.add(f"image of {C.describe_basis(b)} has shape {shape}, "
                               f"expected {(theta.dims[y], theta.dims[x])}")
                report.count("shape")
    if not report.valid:
        return report

    for x in objs:
        if apply_terms(C, theta, x, x, C.identity(x)) != ExactMatrix.identity(field, theta.dims[x]):
            report.add(f"θ(id) is not the identity on {C.describe_object(x)}")
        report.count("identity")

    for x in objs:
        for y in objs:
            for z in objs:
                for f in C.hom_basis(x, y):
                    for g in C.hom_basis(y, z):
                        try:
                            gf = compose_terms(C, {g: field.one}, {f: field.one})
                        except DotBudgetError:
                            continue
                        report.count("functoriality")
                        if apply_terms(C, theta, x, z, gf) != theta.images[g] @ theta.images[f]:
                            report.add(f"θ({C.describe_basis(g)}∘{C.describe_basis(f)}) ≠ "
                                       f"θ({C.describe_basis(g)})θ({C.describe_basis(f)})")

    if theta.monoidal:
        _check_monoidal(C, theta, objs, report)
    if not report.valid:
        logger.warning(f"Functor {theta.name} failed validation: {report.violations[:3]}")
    return report


def _check_monoidal(C: CatPresentation, theta: FunctorSpec, objs: Sequence[ObjectId],
                    report: ValidationReport) -> None:
    M = C.monoidal
    if M is None:
        report.add(f"{theta.name} is declared monoidal but {C.name} has no tensor product")
        return
    if theta.dims.get(M.unit) not in (None, 1):
        report.add("θ(𝟙) is not one-dimensional")
    for x in objs:
        for y in objs:
            try:
                xy = M.tensor_objects(x, y)
            except KernelLabError:
                continue
            if xy not in theta.dims:
                continue
            if theta.dims[xy] != theta.dims[x] * theta.dims[y]:
                report.add(f"θ({C.describe_object(x)}⊗{C.describe_object(y)}) has the wrong dimension")
                continue
            for x2 in objs:
                for y2 in objs:
                    try:
                        xy2 = M.tensor_objects(x2, y2)
                    except KernelLabError:
                        continue
                    if xy2 not in theta.dims:
                        continue
                    for a in C.hom_basis(x, x2):
                        for b in C.hom_basis(y, y2):
                            report.count("tensor")
                            image = apply_terms(C, theta, xy, xy2, M.tensor_basis(a, b))
                            if image != theta.images[a].kron(theta.images[b]):
                                report.add(f"θ({C.describe_basis(a)}⊗{C.describe_basis(b)}) ≠ "
                                           f"θ({C.describe_basis(a)})⊗θ({C.describe_basis(b)})")


def morphism_space_matrix(C: CatPresentation, theta: FunctorSpec, x: Any, y: Any) -> ExactMatrix:
    """Columns are the flattened images of a basis of hom(X, Y)."""
    space = hom_space(C, x, y)
    rows = apply_object(theta, y) * apply_object(theta, x)
    columns = [apply_morphism(C, theta, e).flatten() for e in space.basis_morphisms()]
    return ExactMatrix.hstack(C.field, columns, rows)


def is_faithful_on_window(C: CatPresentation, theta: FunctorSpec, window: Iterable[Any]) -> bool:
    """True iff θ is injective on hom(X, Y) for all X, Y in the window."""
    objs = list(window)
    for x in objs:
        for y in objs:
            matrix = morphism_space_matrix(C, theta, x, y)
            if matrix.rank != matrix.cols:
                logger.info(f"{theta.name} is not faithful on hom({as_add_object(x).describe(C)}, "
                            f"{as_add_object(y).describe(C)})")
                return False
    return True


def conjugate_functor(C: CatPresentation, theta: FunctorSpec, changes: Mapping[ObjectId, ExactMatrix],
                      name: Optional[str] = None) -> FunctorSpec:
    """θ with θ(X) rebased by an invertible P_X: θ'(b) = P_Y θ(b) P_X⁻¹."""
    field = C.field
    inverses = {}
    for x, p in changes.items():
        inverse = solve(p, ExactMatrix.identity(field, p.rows))
        if inverse is None:
            raise ValueError(f"Change of basis for {C.describe_object(x)} is not invertible")
        inverses[x] = inverse

    def rebased(b: BasisId) -> ExactMatrix:
        image = theta.images[b]
        x, y = C.source(b), C.target(b)
        if y in changes:
            image = changes[y] @ image
        if x in changes:
            image = image @ inverses[x]
        return image

    images = LazyImages(rebased, known=list(theta.images))
    return FunctorSpec(name or f"{theta.name}'", field, theta.dims, images, theta.monoidal)


def zero_functor(C: CatPresentation, name: str = "zero") -> FunctorSpec:
    dims = LazyImages(lambda x: 0, known=list(C.objects) if C.is_finite else None)
    images = LazyImages(lambda b: ExactMatrix.zeros(C.field, 0, 0))
    return FunctorSpec(name, C.field, dims, images)


def extension_of_scalars(C: CatPresentation, basis: Sequence[str],
                         products: Mapping[tuple, Mapping[str, object]],
                         embedding: Mapping[BasisId, Mapping[str, object]],
                         name: str = "extension") -> FunctorSpec:
    """θ = S ⊗_R − on R-free for an algebra S containing R.

    ``products[(s, t)]`` is s·t in S and ``embedding[r]`` expresses r in the
    basis of S. θ(R) = S and θ(r) is right multiplication by r.
    """
    field = C.field
    (obj,) = C.objects
    index = {s: k for k, s in enumerate(basis)}

    def right_multiplication(element: Mapping[str, object]) -> ExactMatrix:
        arr = field.zeros(len(basis), len(basis))
        for k, s in enumerate(basis):
            for m, c in element.items():
                for t, d in products[(s, m)].items():
                    arr[index[t], k] = field.add(arr[index[t], k], field.mul(c, d))
        return ExactMatrix(field, arr)

    images = {b: right_multiplication(embedding[b]) for b in C.hom_basis(obj, obj)}
    return FunctorSpec(name, field, {obj: len(basis)}, images)


# ---------------------------------------------------------------------------
# functors between presentations


@dataclass(frozen=True, eq=False)
class PresentedFunctor:
    """An additive functor u: C → D given on generator objects and basis morphisms."""

    name: str
    source: CatPresentation
    target: CatPresentation
    object_map: Mapping[ObjectId, AddObject]
    morphism_map: Mapping[BasisId, MorphismExpr]

    def apply_object(self, x: Any) -> AddObject:
        return AddObject(tuple(y for xi in as_add_object(x) for y in self.object_map[xi]))

    def apply_morphism(self, f: MorphismExpr) -> MorphismExpr:
        source, target = self.apply_object(f.source), self.apply_object(f.target)
        if not len(f.source) or not len(f.target):
            return MorphismExpr.zero(source, target)
        rows = []
        for i, y in enumerate(f.target):
            row = []
            for j, x in enumerate(f.source):
                cell = MorphismExpr.zero(self.object_map[x], self.object_map[y])
                for b, c in f.blocks[i][j].items():
                    image = self.morphism_map[b]
                    if not image.source.same_layout(cell.source) or not image.target.same_layout(cell.target):
                        raise ObjectMismatchError(f"Image of {self.source.describe_basis(b)} has wrong ends")
                    cell = add_morphisms(self.target, cell, scale_morphism(self.target, c, image))
                row.append(cell)
            rows.append(row)
        return block_morphism(rows)


def identity_functor(C: CatPresentation) -> PresentedFunctor:
    objects = LazyImages(lambda x: AddObject.of(x))
    morphisms = LazyImages(lambda b: basis_morphism(C, b))
    return PresentedFunctor(f"id_{C.name}", C, C, objects, morphisms)


def functor_to_vector_spaces(C: CatPresentation, theta: FunctorSpec) -> PresentedFunctor:
    """θ seen as a functor into the one-object presentation of vector spaces."""
    vec = vector_spaces(C.field)

    def on_object(x: ObjectId) -> AddObject:
        return AddObject(("k",) * theta.dims[x])

    def on_morphism(b: BasisId) -> MorphismExpr:
        image = theta.images[b]
        rows = tuple(tuple({"1": image.entry(i, j)} for j in range(image.cols)) for i in range(image.rows))
        return MorphismExpr(on_object(C.source(b)), on_object(C.target(b)), rows)

    return PresentedFunctor(theta.name, C, vec, LazyImages(on_object), LazyImages(on_morphism))
