"""Bounded complexes over a presentation and the homotopy category K^b.

Cohomological grading: d^i: X^i → X^{i+1}, (X[n])^i = X^{i+n} with the
differential multiplied by (−1)^n. Hom spaces in K^b are chain maps modulo
null-homotopic ones, computed as a subquotient of ⊕_i hom(X^i, Y^i).
"""

from dataclasses import dataclass, field as dataclass_field
import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from KernelLab.core.errors import NotAComplexError, ObjectMismatchError, SignConventionError, WindowError
from KernelLab.core.linalg import (
    ExactMatrix,
    SubQuotient,
    homology_mid,
    in_span,
    intersect_spans,
    kernel_basis,
    preimage,
)
from KernelLab.categories.functors import FunctorSpec, apply_morphism, apply_object
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    HomSpace,
    MorphismExpr,
    as_add_object,
    block_morphism,
    compose,
    hom_space,
    identity_morphism,
    postcompose_matrix,
    precompose_matrix,
    scale_morphism,
    subtract_morphisms,
    tensor,
    tensor_add_objects,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Complex:
    """X^lo → … → X^hi; ``differentials[k]`` is d^{lo+k}."""

    lo: int
    objects: Tuple[AddObject, ...]
    differentials: Tuple[MorphismExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(as_add_object(x) for x in self.objects))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if not self.objects:
            raise ValueError("A complex needs at least one degree")
        if len(self.differentials) != len(self.objects) - 1:
            raise ValueError(f"{len(self.objects)} objects need {len(self.objects) - 1} differentials")
        for k, d in enumerate(self.differentials):
            if not d.source.same_layout(self.objects[k]) or not d.target.same_layout(self.objects[k + 1]):
                raise ObjectMismatchError(f"d^{self.lo + k} does not run between the objects of its degrees")

    @property
    def hi(self) -> int:
        return self.lo + len(self.objects) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def at(self, i: int) -> AddObject:
        if self.lo <= i <= self.hi:
            return self.objects[i - self.lo]
        return AddObject.zero()

    def d(self, i: int) -> MorphismExpr:
        """d^i: X^i → X^{i+1}, zero outside the stored range."""
        if self.lo <= i < self.hi:
            return self.differentials[i - self.lo]
        return MorphismExpr.zero(self.at(i), self.at(i + 1))

    def support(self) -> List[int]:
        return [i for i in self.degrees if not self.at(i).is_zero]

    def describe(self, C: Optional[CatPresentation] = None) -> str:
        parts = [f"{self.at(i).describe(C)}@{i}" for i in self.degrees]
        return " → ".join(parts)


def validate_complex(C: CatPresentation, X: Complex) -> Complex:
    for i in range(X.lo, X.hi - 1):
        if not compose(C, X.d(i + 1), X.d(i)).is_zero():
            raise NotAComplexError(f"d^{i + 1}∘d^{i} ≠ 0")
    return X


def make_complex(C: CatPresentation, lo: int, objects: Sequence[Any],
                 differentials: Sequence[MorphismExpr]) -> Complex:
    return validate_complex(C, Complex(lo, tuple(objects), tuple(differentials)))


def concentrated(A: Any, degree: int = 0) -> Complex:
    """A[−degree]: the object A alone in the given degree."""
    return Complex(degree, (as_add_object(A),), ())


def two_term(f: MorphismExpr, lo: int = 0) -> Complex:
    """X⁰ →f X¹ placed in degrees lo, lo + 1."""
    return Complex(lo, (f.source, f.target), (f,))


def shift(C: CatPresentation, X: Complex, n: int = 1, window: Optional[Tuple[int, int]] = None) -> Complex:
    """X[n]: (X[n])^i = X^{i+n}, differential (−1)^n d."""
    sign = -1 if n % 2 else 1
    out = Complex(X.lo - n, X.objects, tuple(scale_morphism(C, sign, d) for d in X.differentials))
    check_degrees(out, window)
    return out


def check_degrees(X: Complex, window: Optional[Tuple[int, int]]) -> None:
    if window is None:
        return
    lo, hi = window
    support = X.support()
    if support and (support[0] < lo or support[-1] > hi):
        raise WindowError(f"Complex supported in [{support[0]}, {support[-1]}] leaves the degree window [{lo}, {hi}]")


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: Complex
    target: Complex
    components: Mapping[int, MorphismExpr] = dataclass_field(default_factory=dict)

    def at(self, i: int) -> MorphismExpr:
        if i in self.components:
            return self.components[i]
        return MorphismExpr.zero(self.source.at(i), self.target.at(i))

    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)


def validate_chain_map(C: CatPresentation, u: ChainMap) -> ChainMap:
    for i in u.degrees():
        left = compose(C, u.target.d(i), u.at(i))
        right = compose(C, u.at(i + 1), u.source.d(i))
        if left != right:
            raise NotAComplexError(f"Not a chain map: the square in degree {i} does not commute")
    return u


def identity_chain(C: CatPresentation, X: Complex) -> ChainMap:
    return ChainMap(X, X, {i: identity_morphism(C, X.at(i)) for i in X.degrees})


def compose_chain(C: CatPresentation, v: ChainMap, u: ChainMap) -> ChainMap:
    degrees = range(min(u.source.lo, v.target.lo), max(u.source.hi, v.target.hi) + 1)
    components = {}
    for i in degrees:
        if u.source.at(i).is_zero or v.target.at(i).is_zero:
            continue
        components[i] = compose(C, v.at(i), u.at(i))
    return ChainMap(u.source, v.target, components)


def _span(lo: int, hi: int) -> range:
    return range(lo, hi + 1)


def cone(C: CatPresentation, u: ChainMap) -> Complex:
    """cone^i = X^{i+1} ⊕ Y^i with d = [[−d_X, 0], [u, d_Y]]."""
    validate_chain_map(C, u)
    X, Y = u.source, u.target
    lo, hi = min(X.lo - 1, Y.lo), max(X.hi - 1, Y.hi)
    objects = [X.at(i + 1).oplus(Y.at(i)) for i in _span(lo, hi)]
    differentials = []
    for i in range(lo, hi):
        minus_dx = scale_morphism(C, -1, X.d(i + 1))
        d = block_morphism([
            [minus_dx, MorphismExpr.zero(Y.at(i), X.at(i + 2))],
            [u.at(i + 1), Y.d(i)],
        ])
        differentials.append(d)
    return make_complex(C, lo, objects, differentials)


def cone_inclusion(C: CatPresentation, u: ChainMap) -> ChainMap:
    """Y → cone(u)."""
    X, Y = u.source, u.target
    Z = cone(C, u)
    components = {}
    for i in Z.degrees:
        components[i] = block_morphism([[MorphismExpr.zero(Y.at(i), X.at(i + 1))],
                                        [identity_morphism(C, Y.at(i))]])
    return ChainMap(Y, Z, components)


def cone_projection(C: CatPresentation, u: ChainMap) -> ChainMap:
    """cone(u) → X[1]."""
    X, Y = u.source, u.target
    Z = cone(C, u)
    target = shift(C, X, 1)
    components = {}
    for i in Z.degrees:
        components[i] = block_morphism([[identity_morphism(C, X.at(i + 1)), MorphismExpr.zero(Y.at(i), X.at(i + 1))]])
    return ChainMap(Z, target, components)


def weak_kernel_kb(C: CatPresentation, u: ChainMap) -> Tuple[Complex, ChainMap]:
    """cone(u)[−1] with its projection p = [id, 0] to the source of u."""
    X, Y = u.source, u.target
    W = shift(C, cone(C, u), -1)
    components = {}
    for i in W.degrees:
        components[i] = block_morphism([[identity_morphism(C, X.at(i)), MorphismExpr.zero(Y.at(i - 1), X.at(i))]])
    return W, ChainMap(W, X, components)


# ---------------------------------------------------------------------------
# hom spaces in K^b


@dataclass(frozen=True, eq=False)
class KbHom:
    """K^b(X, Y) inside the coordinate space ⊕_i hom(X^i, Y^i)."""

    presentation: CatPresentation
    source: Complex
    target: Complex
    degrees: Tuple[int, ...]
    spaces: Dict[int, HomSpace]
    offsets: Dict[int, int]
    ambient_dim: int
    chain_maps: ExactMatrix
    homotopies: ExactMatrix
    value: SubQuotient

    @property
    def dimension(self) -> int:
        return self.value.dimension

    def vectorize(self, u: ChainMap) -> ExactMatrix:
        blocks = [self.spaces[i].vectorize(u.at(i)) for i in self.degrees]
        return ExactMatrix.vstack(self.presentation.field, blocks, 1)

    def chain_map(self, vector: ExactMatrix) -> ChainMap:
        components = {}
        for i in self.degrees:
            space = self.spaces[i]
            piece = vector.submatrix(slice(self.offsets[i], self.offsets[i] + space.dimension), slice(0, 1))
            components[i] = space.morphism(piece)
        return ChainMap(self.source, self.target, components)

    def representatives(self) -> List[ChainMap]:
        return [self.chain_map(c) for c in self.value.representatives.columns()]

    def is_null_homotopic(self, u: ChainMap) -> bool:
        return self.value.is_trivial_class(self.vectorize(u))


def _degree_range(X: Complex, Y: Complex) -> Tuple[int, ...]:
    return tuple(range(min(X.lo, Y.lo) - 1, max(X.hi, Y.hi) + 2))


def _place(field, blocks: Dict[Tuple[int, int], ExactMatrix], row_sizes: Sequence[int],
           col_sizes: Sequence[int]) -> ExactMatrix:
    grid = [[blocks.get((r, c), ExactMatrix.zeros(field, rs, cs)) for c, cs in enumerate(col_sizes)]
            for r, rs in enumerate(row_sizes)]
    return ExactMatrix.block(field, grid, row_sizes, col_sizes)


def kb_hom(C: CatPresentation, X: Complex, Y: Complex, window: Optional[Tuple[int, int]] = None) -> KbHom:
    """Chain maps X → Y modulo the image of h ↦ d_Y h + h d_X."""
    check_degrees(X, window)
    check_degrees(Y, window)
    field = C.field
    degrees = _degree_range(X, Y)
    spaces = {i: hom_space(C, X.at(i), Y.at(i)) for i in degrees}
    offsets, offset = {}, 0
    for i in degrees:
        offsets[i] = offset
        offset += spaces[i].dimension
    var_sizes = [spaces[i].dimension for i in degrees]

    # chain-map constraints: d_Y^i u^i − u^{i+1} d_X^i in hom(X^i, Y^{i+1})
    cons_spaces = [hom_space(C, X.at(i), Y.at(i + 1)) for i in degrees[:-1]]
    blocks = {}
    for r, i in enumerate(degrees[:-1]):
        blocks[(r, r)] = postcompose_matrix(C, Y.d(i), X.at(i))
        blocks[(r, r + 1)] = -precompose_matrix(C, X.d(i), Y.at(i + 1))
    constraints = _place(field, blocks, [s.dimension for s in cons_spaces], var_sizes)

    # homotopies h^i: X^i → Y^{i−1}; u^i = d_Y^{i−1} h^i + h^{i+1} d_X^i
    homo_spaces = [hom_space(C, X.at(i), Y.at(i - 1)) for i in degrees]
    blocks = {}
    for r, i in enumerate(degrees):
        blocks[(r, r)] = postcompose_matrix(C, Y.d(i - 1), X.at(i))
        if r + 1 < len(degrees):
            blocks[(r, r + 1)] = precompose_matrix(C, X.d(i), Y.at(i))
    homotopies = _place(field, blocks, var_sizes, [s.dimension for s in homo_spaces])

    chain_maps = kernel_basis(constraints)
    value = SubQuotient.from_spans(chain_maps, homotopies)
    logger.debug(f"K^b({X.describe(C)}, {Y.describe(C)}) has dimension {value.dimension}")
    return KbHom(C, X, Y, degrees, spaces, offsets, offset, chain_maps, homotopies, value)


def is_null_homotopic(C: CatPresentation, u: ChainMap) -> bool:
    return kb_hom(C, u.source, u.target).is_null_homotopic(u)


def chain_postcompose_matrix(C: CatPresentation, u: ChainMap, domain: KbHom, codomain: KbHom) -> ExactMatrix:
    """v ↦ u∘v from the coordinates of ``domain`` (T → X) to those of ``codomain`` (T → Y)."""
    blocks = {}
    index_dom = {i: k for k, i in enumerate(domain.degrees)}
    index_cod = {i: k for k, i in enumerate(codomain.degrees)}
    for i in domain.degrees:
        if i not in index_cod or domain.spaces[i].dimension == 0 or codomain.spaces[i].dimension == 0:
            continue
        blocks[(index_cod[i], index_dom[i])] = postcompose_matrix(C, u.at(i), domain.source.at(i))
    return _place(C.field, blocks, [codomain.spaces[i].dimension for i in codomain.degrees],
                  [domain.spaces[i].dimension for i in domain.degrees])


def is_weak_kernel_kb(C: CatPresentation, p: ChainMap, u: ChainMap, tests: Sequence[Complex]) -> bool:
    """u∘p ≃ 0, and every v: T → X with u∘v ≃ 0 factors through p up to homotopy."""
    if not is_null_homotopic(C, compose_chain(C, u, p)):
        return False
    W, X, Y = p.source, u.source, u.target
    for T in tests:
        to_w, to_x, to_y = kb_hom(C, T, W), kb_hom(C, T, X), kb_hom(C, T, Y)
        post_u = chain_postcompose_matrix(C, u, to_x, to_y)
        post_p = chain_postcompose_matrix(C, p, to_w, to_x)
        killed = intersect_spans(to_x.chain_maps, preimage(post_u, to_y.homotopies))
        reachable = ExactMatrix.hstack(C.field, [post_p @ to_w.chain_maps, to_x.homotopies], to_x.ambient_dim)
        if not in_span(reachable, killed):
            logger.info(f"A map from {T.describe(C)} is killed by u but does not factor through p")
            return False
    return True


# ---------------------------------------------------------------------------
# monoidal structure


def tensor_complexes(C: CatPresentation, X: Complex, Y: Complex) -> Complex:
    """(X⊗Y)^n = ⊕_{a+b=n} X^a⊗Y^b, a ascending, d = d⊗id + (−1)^a id⊗d."""
    C.require_monoidal()
    lo, hi = X.lo + Y.lo, X.hi + Y.hi

    def pairs(n: int) -> List[Tuple[int, int]]:
        return [(a, n - a) for a in X.degrees if Y.lo <= n - a <= Y.hi]

    def piece(a: int, b: int) -> AddObject:
        return tensor_add_objects(C, X.at(a), Y.at(b))

    objects = [AddObject(tuple(s for a, b in pairs(n) for s in piece(a, b))) for n in _span(lo, hi)]
    differentials = []
    for n in range(lo, hi):
        rows = []
        for a2, b2 in pairs(n + 1):
            row = []
            for a, b in pairs(n):
                if (a2, b2) == (a + 1, b):
                    row.append(tensor(C, X.d(a), identity_morphism(C, Y.at(b))))
                elif (a2, b2) == (a, b + 1):
                    sign = -1 if a % 2 else 1
                    row.append(scale_morphism(C, sign, tensor(C, identity_morphism(C, X.at(a)), Y.d(b))))
                else:
                    row.append(MorphismExpr.zero(piece(a, b), piece(a2, b2)))
            rows.append(row)
        differentials.append(block_morphism(rows))
    out = Complex(lo, tuple(objects), tuple(differentials))
    try:
        validate_complex(C, out)
    except NotAComplexError as exc:
        raise SignConventionError(f"Tensor differential does not square to zero: {exc}")
    return out


# ---------------------------------------------------------------------------
# θ on complexes


@dataclass(frozen=True)
class GradedSpaceValue:
    """Degree ↦ subquotient, finitely supported."""

    values: Mapping[int, SubQuotient]

    def at(self, i: int) -> Optional[SubQuotient]:
        return self.values.get(i)

    def dimension(self, i: int) -> int:
        value = self.values.get(i)
        return value.dimension if value is not None else 0

    def dimensions(self) -> Dict[int, int]:
        return {i: v.dimension for i, v in sorted(self.values.items()) if v.dimension}

    @property
    def total_dimension(self) -> int:
        return sum(v.dimension for v in self.values.values())


def theta_complex(C: CatPresentation, theta: FunctorSpec, X: Complex) -> List[ExactMatrix]:
    """θ(d^i) for i = lo−1 … hi, padded with the zero maps at both ends."""
    out = []
    for i in range(X.lo - 1, X.hi + 1):
        rows, cols = apply_object(theta, X.at(i + 1)), apply_object(theta, X.at(i))
        if X.lo <= i < X.hi:
            out.append(apply_morphism(C, theta, X.d(i)))
        else:
            out.append(ExactMatrix.zeros(C.field, rows, cols))
    return out


def theta_delta(C: CatPresentation, theta: FunctorSpec, X: Complex) -> GradedSpaceValue:
    """i ↦ H^i(θX)."""
    maps = theta_complex(C, theta, X)
    values = {}
    for k, i in enumerate(X.degrees):
        values[i] = homology_mid(maps[k], maps[k + 1])
    return GradedSpaceValue(values)


def _empty(C: CatPresentation) -> SubQuotient:
    empty = ExactMatrix.zeros(C.field, 0, 0)
    return SubQuotient(0, empty, empty)


def theta_delta0(C: CatPresentation, theta: FunctorSpec, X: Complex) -> SubQuotient:
    value = theta_delta(C, theta, X).at(0)
    return value if value is not None else _empty(C)


def theta_plus0(C: CatPresentation, theta: FunctorSpec, X: Complex) -> SubQuotient:
    """H⁰(θX) on K^b₊, complexes with X^i = 0 for i < 0."""
    support = X.support()
    if support and support[0] < 0:
        raise WindowError(f"θ⁰₊ needs a complex supported in degrees ≥ 0, got {support[0]}")
    return theta_delta0(C, theta, X)


def theta_delta_map(C: CatPresentation, theta: FunctorSpec, u: ChainMap, degree: int,
                    source: Optional[GradedSpaceValue] = None,
                    target: Optional[GradedSpaceValue] = None) -> ExactMatrix:
    """H^i(θX) → H^i(θY) in representative coordinates."""
    hx = (source or theta_delta(C, theta, u.source)).at(degree)
    hy = (target or theta_delta(C, theta, u.target)).at(degree)
    if hx is None or hx.dimension == 0:
        return ExactMatrix.zeros(C.field, hy.dimension if hy is not None else 0, 0)
    if hy is None or hy.dimension == 0:
        return ExactMatrix.zeros(C.field, 0, hx.dimension)
    image = apply_morphism(C, theta, u.at(degree)) @ hx.representatives
    return hy.coordinates(image)


def theta_kills(C: CatPresentation, theta: FunctorSpec, u: ChainMap) -> bool:
    """θ^ℤ_Δ(u) = 0 in every degree."""
    hx, hy = theta_delta(C, theta, u.source), theta_delta(C, theta, u.target)
    return all(theta_delta_map(C, theta, u, i, hx, hy).is_zero() for i in u.degrees())


def homotopy_difference(C: CatPresentation, u: ChainMap, v: ChainMap) -> ChainMap:
    """u − v, degreewise."""
    components = {i: subtract_morphisms(C, u.at(i), v.at(i)) for i in u.degrees()}
    return ChainMap(u.source, u.target, components)
