"""Finite presentations of k-linear additive categories.

A presentation lists generator objects, a basis of every hom space between
generators, the structure constants of composition and the identities. The
additive envelope is formal: objects are words of generators
(``AddObject``), morphisms are block matrices whose entries are linear
combinations of basis morphisms (``MorphismExpr``).
"""

from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
import logging
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from KernelLab.core.errors import DotBudgetError, KernelLabError, MissingStructureError, ObjectMismatchError, WindowError
from KernelLab.core.fields import FieldSpec, Scalar
from KernelLab.core.linalg import ExactMatrix, solve

logger = logging.getLogger(__name__)

ObjectId = Hashable
BasisId = Hashable
LinComb = Dict[BasisId, Scalar]


def sort_key(item: Any) -> Tuple[str, str]:
    return (type(item).__name__, repr(item))


@dataclass(frozen=True, eq=False)
class AddObject:
    """A formal direct sum of generator objects.

    The order of summands fixes the block layout of morphisms; equality
    compares the sorted multiset of summands.
    """

    summands: Tuple[ObjectId, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))

    @classmethod
    def of(cls, *ids: ObjectId) -> "AddObject":
        return cls(tuple(ids))

    @classmethod
    def zero(cls) -> "AddObject":
        return cls(())

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __getitem__(self, index: int) -> ObjectId:
        return self.summands[index]

    def canonical(self) -> Tuple[ObjectId, ...]:
        return tuple(sorted(self.summands, key=sort_key))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AddObject):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def oplus(self, other: "AddObject") -> "AddObject":
        return AddObject(self.summands + other.summands)

    @property
    def is_zero(self) -> bool:
        return not self.summands

    def same_layout(self, other: "AddObject") -> bool:
        return self.summands == other.summands

    def describe(self, presentation: Optional["CatPresentation"] = None) -> str:
        if not self.summands:
            return "0"
        if presentation is None:
            return " ⊕ ".join(str(x) for x in self.summands)
        return " ⊕ ".join(presentation.describe_object(x) for x in self.summands)

    def __repr__(self) -> str:
        return f"AddObject({self.describe()})"


def as_add_object(value: Any) -> AddObject:
    """Promote a generator id to a one-summand AddObject."""
    if isinstance(value, AddObject):
        return value
    return AddObject((value,))


@dataclass(frozen=True, eq=False)
class MorphismExpr:
    """Block matrix X → Y; ``blocks[i][j]`` maps source summand j to target summand i."""

    source: AddObject
    target: AddObject
    blocks: Tuple[Tuple[Mapping[BasisId, Scalar], ...], ...]

    def __post_init__(self):
        rows = tuple(tuple({b: c for b, c in entry.items() if c != 0} for entry in row)
                     for row in self.blocks)
        if len(rows) != len(self.target):
            raise ObjectMismatchError(f"{len(rows)} block rows for {len(self.target)} target summands")
        for row in rows:
            if len(row) != len(self.source):
                raise ObjectMismatchError(f"{len(row)} block columns for {len(self.source)} source summands")
        object.__setattr__(self, "blocks", rows)

    __hash__ = None

    @classmethod
    def zero(cls, source: AddObject, target: AddObject) -> "MorphismExpr":
        return cls(source, target, tuple(tuple({} for _ in source) for _ in target))

    def block(self, i: int, j: int) -> Mapping[BasisId, Scalar]:
        return self.blocks[i][j]

    def is_zero(self) -> bool:
        return all(not entry for row in self.blocks for entry in row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MorphismExpr):
            return NotImplemented
        return (self.source.same_layout(other.source) and self.target.same_layout(other.target)
                and all(dict(a) == dict(b) for ra, rb in zip(self.blocks, other.blocks)
                        for a, b in zip(ra, rb)))

    def describe(self, presentation: Optional["CatPresentation"] = None) -> str:
        def term(b: BasisId, c: Scalar) -> str:
            name = presentation.describe_basis(b) if presentation else str(b)
            coeff = presentation.field.format(c) if presentation else str(c)
            return name if coeff == "1" else f"{coeff}*{name}"

        entries = []
        for row in self.blocks:
            cells = [" + ".join(term(b, c) for b, c in entry.items()) or "0" for entry in row]
            entries.append("[" + ", ".join(cells) + "]")
        return "[" + "; ".join(entries) + "]"

    def __repr__(self) -> str:
        return f"MorphismExpr({self.source.describe()} -> {self.target.describe()}: {self.describe()})"


class MonoidalStructure(ABC):
    """Strict monoidal data on generators, optionally braided and rigid."""

    @property
    @abstractmethod
    def unit(self) -> ObjectId:
        ...

    @abstractmethod
    def tensor_objects(self, x: ObjectId, y: ObjectId) -> ObjectId:
        ...

    @abstractmethod
    def tensor_basis(self, a: BasisId, b: BasisId) -> LinComb:
        ...

    def braiding(self, x: ObjectId, y: ObjectId) -> Optional[LinComb]:
        return None

    @property
    def has_duals(self) -> bool:
        return False

    def dual(self, x: ObjectId) -> ObjectId:
        raise MissingStructureError("No duality data")

    def ev(self, x: ObjectId) -> LinComb:
        raise MissingStructureError("No duality data")

    def co(self, x: ObjectId) -> LinComb:
        raise MissingStructureError("No duality data")


class CatPresentation(ABC):
    """A k-linear category given on a skeleton of generator objects."""

    def __init__(self, name: str, field: FieldSpec):
        self.name = name
        self.field = field

    @property
    @abstractmethod
    def objects(self) -> Sequence[ObjectId]:
        ...

    @property
    def is_finite(self) -> bool:
        """True when ``objects`` is the complete list of generator objects."""
        return True

    @abstractmethod
    def hom_basis(self, x: ObjectId, y: ObjectId) -> Tuple[BasisId, ...]:
        ...

    @abstractmethod
    def compose_basis(self, g: BasisId, f: BasisId) -> LinComb:
        """g∘f for basis morphisms f: X → Y and g: Y → Z."""

    @abstractmethod
    def identity(self, x: ObjectId) -> LinComb:
        ...

    @abstractmethod
    def source(self, b: BasisId) -> ObjectId:
        ...

    @abstractmethod
    def target(self, b: BasisId) -> ObjectId:
        ...

    @property
    def monoidal(self) -> Optional[MonoidalStructure]:
        return None

    def require_monoidal(self) -> MonoidalStructure:
        if self.monoidal is None:
            raise MissingStructureError(f"Category {self.name} carries no monoidal data")
        return self.monoidal

    def hom_dim(self, x: ObjectId, y: ObjectId) -> int:
        return len(self.hom_basis(x, y))

    def describe_object(self, x: ObjectId) -> str:
        return str(x)

    def describe_basis(self, b: BasisId) -> str:
        return str(b)

    def validation_objects(self) -> Sequence[ObjectId]:
        return list(self.objects)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, {self.field.name})"


class TableMonoidal(MonoidalStructure):
    """Monoidal data read off explicit tables."""

    def __init__(self, unit: ObjectId, objects: Mapping[Tuple[ObjectId, ObjectId], ObjectId],
                 basis: Mapping[Tuple[BasisId, BasisId], LinComb],
                 braidings: Optional[Mapping[Tuple[ObjectId, ObjectId], LinComb]] = None,
                 duals: Optional[Mapping[ObjectId, ObjectId]] = None,
                 evs: Optional[Mapping[ObjectId, LinComb]] = None,
                 cos: Optional[Mapping[ObjectId, LinComb]] = None):
        self._unit = unit
        self.object_table = dict(objects)
        self.basis_table = {k: dict(v) for k, v in basis.items()}
        self.braidings = {k: dict(v) for k, v in (braidings or {}).items()}
        self.duals = dict(duals or {})
        self.evs = {k: dict(v) for k, v in (evs or {}).items()}
        self.cos = {k: dict(v) for k, v in (cos or {}).items()}

    @property
    def unit(self) -> ObjectId:
        return self._unit

    def tensor_objects(self, x: ObjectId, y: ObjectId) -> ObjectId:
        try:
            return self.object_table[(x, y)]
        except KeyError:
            raise MissingStructureError(f"No tensor product recorded for objects {x}, {y}")

    def tensor_basis(self, a: BasisId, b: BasisId) -> LinComb:
        try:
            return self.basis_table[(a, b)]
        except KeyError:
            raise MissingStructureError(f"No tensor product recorded for morphisms {a}, {b}")

    def braiding(self, x: ObjectId, y: ObjectId) -> Optional[LinComb]:
        return self.braidings.get((x, y))

    @property
    def has_duals(self) -> bool:
        return bool(self.duals)

    def dual(self, x: ObjectId) -> ObjectId:
        if x not in self.duals:
            raise MissingStructureError(f"No dual recorded for {x}")
        return self.duals[x]

    def ev(self, x: ObjectId) -> LinComb:
        if x not in self.evs:
            raise MissingStructureError(f"No evaluation recorded for {x}")
        return self.evs[x]

    def co(self, x: ObjectId) -> LinComb:
        if x not in self.cos:
            raise MissingStructureError(f"No coevaluation recorded for {x}")
        return self.cos[x]


class TablePresentation(CatPresentation):
    """Presentation by explicit structure constants.

    ``products[(g, f)]`` is g∘f. Pairs listed in ``undefined`` have no
    value inside the window the table was exported from.
    """

    def __init__(self, name: str, field: FieldSpec, objects: Sequence[ObjectId],
                 homs: Mapping[Tuple[ObjectId, ObjectId], Sequence[BasisId]],
                 products: Mapping[Tuple[BasisId, BasisId], LinComb],
                 identities: Mapping[ObjectId, LinComb],
                 monoidal: Optional[MonoidalStructure] = None,
                 undefined: Iterable[Tuple[BasisId, BasisId]] = (),
                 metadata: Optional[Dict[str, Any]] = None):
        super().__init__(name, field)
        self._objects = tuple(objects)
        self.homs = {(x, y): tuple(homs.get((x, y), ())) for x in self._objects for y in self._objects}
        self.products = {k: {b: field.element(c) for b, c in v.items()} for k, v in products.items()}
        self.identities = {x: {b: field.element(c) for b, c in v.items()} for x, v in identities.items()}
        self._monoidal = monoidal
        self.undefined = frozenset(undefined)
        self.metadata = dict(metadata or {})
        self._ends: Dict[BasisId, Tuple[ObjectId, ObjectId]] = {}
        for (x, y), basis in self.homs.items():
            for b in basis:
                if b in self._ends:
                    raise ValueError(f"Basis id {b!r} used in more than one hom space")
                self._ends[b] = (x, y)

    @property
    def objects(self) -> Sequence[ObjectId]:
        return self._objects

    @property
    def monoidal(self) -> Optional[MonoidalStructure]:
        return self._monoidal

    def hom_basis(self, x: ObjectId, y: ObjectId) -> Tuple[BasisId, ...]:
        if (x, y) not in self.homs:
            raise ObjectMismatchError(f"Unknown objects {x!r}, {y!r} in {self.name}")
        return self.homs[(x, y)]

    def compose_basis(self, g: BasisId, f: BasisId) -> LinComb:
        if self.target(f) != self.source(g):
            raise ObjectMismatchError(f"Cannot compose {g} after {f}")
        if (g, f) in self.undefined:
            raise DotBudgetError(f"Composite {g}∘{f} lies outside the exported window")
        try:
            return self.products[(g, f)]
        except KeyError:
            raise MissingStructureError(f"No structure constant for {g}∘{f}")

    def identity(self, x: ObjectId) -> LinComb:
        try:
            return self.identities[x]
        except KeyError:
            raise MissingStructureError(f"No identity recorded for {x}")

    def source(self, b: BasisId) -> ObjectId:
        return self._ends[b][0]

    def target(self, b: BasisId) -> ObjectId:
        return self._ends[b][1]

    def basis_ids(self) -> List[BasisId]:
        return [b for x in self._objects for y in self._objects for b in self.homs[(x, y)]]

    def missing_products(self) -> List[Tuple[BasisId, BasisId]]:
        missing = []
        for x in self._objects:
            for y in self._objects:
                for z in self._objects:
                    for f in self.homs[(x, y)]:
                        for g in self.homs[(y, z)]:
                            if (g, f) not in self.products and (g, f) not in self.undefined:
                                missing.append((g, f))
        return missing


# ---------------------------------------------------------------------------
# morphism arithmetic


def _accumulate(field: FieldSpec, acc: Dict[BasisId, Any], terms: Mapping[BasisId, Scalar], scale: Any) -> None:
    for b, c in terms.items():
        acc[b] = acc.get(b, 0) + scale * c


def _normalize(field: FieldSpec, acc: Mapping[BasisId, Any]) -> LinComb:
    out = {}
    for b, c in acc.items():
        value = field.element(c)
        if value != 0:
            out[b] = value
    return out


def basis_morphism(C: CatPresentation, b: BasisId, coefficient: object = 1) -> MorphismExpr:
    return MorphismExpr(AddObject.of(C.source(b)), AddObject.of(C.target(b)),
                        (({b: C.field.element(coefficient)},),))


def morphism_from_terms(C: CatPresentation, x: ObjectId, y: ObjectId, terms: Mapping[BasisId, object]) -> MorphismExpr:
    basis = set(C.hom_basis(x, y))
    for b in terms:
        if b not in basis:
            raise ObjectMismatchError(f"{C.describe_basis(b)} is not a morphism {C.describe_object(x)} -> {C.describe_object(y)}")
    entry = _normalize(C.field, {b: C.field.element(c) for b, c in terms.items()})
    return MorphismExpr(AddObject.of(x), AddObject.of(y), ((entry,),))


def identity_morphism(C: CatPresentation, x: AddObject) -> MorphismExpr:
    x = as_add_object(x)
    rows = []
    for i, xi in enumerate(x):
        rows.append(tuple(dict(C.identity(xi)) if i == j else {} for j in range(len(x))))
    return MorphismExpr(x, x, tuple(rows))


def block_morphism(rows: Sequence[Sequence[MorphismExpr]]) -> MorphismExpr:
    """Assemble a block matrix of morphisms between formal sums."""
    if not rows or not rows[0]:
        raise ValueError("block_morphism needs at least one block")
    ncols = len(rows[0])
    sources = [rows[0][j].source for j in range(ncols)]
    targets = [row[0].target for row in rows]
    out_rows: List[Tuple[Mapping[BasisId, Scalar], ...]] = []
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise ObjectMismatchError("Ragged block rows")
        for j, m in enumerate(row):
            if not m.source.same_layout(sources[j]) or not m.target.same_layout(targets[i]):
                raise ObjectMismatchError(f"Block ({i},{j}) has mismatched objects")
        for r in range(len(targets[i])):
            cells: List[Mapping[BasisId, Scalar]] = []
            for m in row:
                cells.extend(m.blocks[r])
            out_rows.append(tuple(cells))
    source = AddObject(tuple(x for s in sources for x in s))
    target = AddObject(tuple(y for t in targets for y in t))
    return MorphismExpr(source, target, tuple(out_rows))


def direct_sum(f: MorphismExpr, g: MorphismExpr) -> MorphismExpr:
    return block_morphism([[f, MorphismExpr.zero(g.source, f.target)],
                           [MorphismExpr.zero(f.source, g.target), g]])


def add_morphisms(C: CatPresentation, f: MorphismExpr, g: MorphismExpr) -> MorphismExpr:
    if not (f.source.same_layout(g.source) and f.target.same_layout(g.target)):
        raise ObjectMismatchError("Cannot add morphisms between different objects")
    rows = []
    for rf, rg in zip(f.blocks, g.blocks):
        cells = []
        for a, b in zip(rf, rg):
            acc: Dict[BasisId, Any] = {}
            _accumulate(C.field, acc, a, 1)
            _accumulate(C.field, acc, b, 1)
            cells.append(_normalize(C.field, acc))
        rows.append(tuple(cells))
    return MorphismExpr(f.source, f.target, tuple(rows))


def scale_morphism(C: CatPresentation, c: object, f: MorphismExpr) -> MorphismExpr:
    c = C.field.element(c)
    rows = tuple(tuple(_normalize(C.field, {b: c * v for b, v in entry.items()}) for entry in row)
                 for row in f.blocks)
    return MorphismExpr(f.source, f.target, rows)


def subtract_morphisms(C: CatPresentation, f: MorphismExpr, g: MorphismExpr) -> MorphismExpr:
    return add_morphisms(C, f, scale_morphism(C, -1, g))


def linear_combination(C: CatPresentation, terms: Sequence[Tuple[object, MorphismExpr]],
                       source: AddObject, target: AddObject) -> MorphismExpr:
    out = MorphismExpr.zero(source, target)
    for c, m in terms:
        out = add_morphisms(C, out, scale_morphism(C, c, m))
    return out


def compose_terms(C: CatPresentation, g: Mapping[BasisId, Scalar], f: Mapping[BasisId, Scalar]) -> LinComb:
    acc: Dict[BasisId, Any] = {}
    for b, cb in g.items():
        for a, ca in f.items():
            _accumulate(C.field, acc, C.compose_basis(b, a), cb * ca)
    return _normalize(C.field, acc)


def compose(C: CatPresentation, g: MorphismExpr, f: MorphismExpr) -> MorphismExpr:
    """g∘f by block-matrix multiplication over the structure constants."""
    if not f.target.same_layout(g.source):
        raise ObjectMismatchError(
            f"Cannot compose: target {f.target.describe(C)} of f differs from source {g.source.describe(C)} of g")
    rows = []
    for i in range(len(g.target)):
        cells = []
        for k in range(len(f.source)):
            acc: Dict[BasisId, Any] = {}
            for j in range(len(f.target)):
                gb, fb = g.blocks[i][j], f.blocks[j][k]
                if not gb or not fb:
                    continue
                for b, cb in gb.items():
                    for a, ca in fb.items():
                        _accumulate(C.field, acc, C.compose_basis(b, a), cb * ca)
            cells.append(_normalize(C.field, acc))
        rows.append(tuple(cells))
    return MorphismExpr(f.source, g.target, tuple(rows))


def tensor_add_objects(C: CatPresentation, x: AddObject, y: AddObject) -> AddObject:
    M = C.require_monoidal()
    return AddObject(tuple(M.tensor_objects(a, b) for a in x for b in y))


def tensor(C: CatPresentation, f: MorphismExpr, g: MorphismExpr) -> MorphismExpr:
    """f⊗g; summands of a tensor product are ordered with f's index major."""
    M = C.require_monoidal()
    source = tensor_add_objects(C, f.source, g.source)
    target = tensor_add_objects(C, f.target, g.target)
    rows = []
    for j in range(len(f.target)):
        for l in range(len(g.target)):
            cells = []
            for i in range(len(f.source)):
                for k in range(len(g.source)):
                    acc: Dict[BasisId, Any] = {}
                    for a, ca in f.blocks[j][i].items():
                        for b, cb in g.blocks[l][k].items():
                            _accumulate(C.field, acc, M.tensor_basis(a, b), ca * cb)
                    cells.append(_normalize(C.field, acc))
            rows.append(tuple(cells))
    return MorphismExpr(source, target, tuple(rows))


def unit_object(C: CatPresentation) -> AddObject:
    return AddObject.of(C.require_monoidal().unit)


# ---------------------------------------------------------------------------
# hom spaces as coordinate spaces


@dataclass(frozen=True)
class HomSpace:
    """hom(X, Y) for formal sums, coordinatised block by block.

    Blocks are ordered with the target summand major, then the source
    summand; inside a block the presentation's basis order is used.
    """

    field: FieldSpec
    source: AddObject
    target: AddObject
    slots: Tuple[Tuple[int, int, Tuple[BasisId, ...]], ...]
    offsets: Tuple[int, ...]
    dimension: int
    _index: Tuple[Dict[BasisId, int], ...] = dataclass_field(repr=False, compare=False, default=())

    def vectorize(self, m: MorphismExpr) -> ExactMatrix:
        if not m.source.same_layout(self.source) or not m.target.same_layout(self.target):
            raise ObjectMismatchError("Morphism does not belong to this hom space")
        values = self.field.zeros(self.dimension, 1)
        for s, (i, j, _) in enumerate(self.slots):
            index = self._index[s]
            for b, c in m.blocks[i][j].items():
                if b not in index:
                    raise ObjectMismatchError(f"Basis element {b!r} does not lie in block ({i},{j})")
                values[self.offsets[s] + index[b], 0] = c
        return ExactMatrix(self.field, values)

    def vectorize_many(self, morphisms: Sequence[MorphismExpr]) -> ExactMatrix:
        return ExactMatrix.hstack(self.field, [self.vectorize(m) for m in morphisms], self.dimension)

    def morphism(self, vector: Any) -> MorphismExpr:
        if isinstance(vector, ExactMatrix):
            values = [vector.entry(k, 0) for k in range(vector.rows)]
        else:
            values = [self.field.element(v) for v in vector]
        if len(values) != self.dimension:
            raise ValueError(f"Vector of length {len(values)} for hom space of dimension {self.dimension}")
        cells: Dict[Tuple[int, int], Dict[BasisId, Scalar]] = defaultdict(dict)
        for s, (i, j, basis) in enumerate(self.slots):
            for k, b in enumerate(basis):
                c = values[self.offsets[s] + k]
                if c != 0:
                    cells[(i, j)][b] = c
        rows = tuple(tuple(cells.get((i, j), {}) for j in range(len(self.source)))
                     for i in range(len(self.target)))
        return MorphismExpr(self.source, self.target, rows)

    def basis_morphisms(self) -> List[MorphismExpr]:
        out = []
        for i, j, basis in self.slots:
            for b in basis:
                rows = tuple(tuple({b: self.field.one} if (r, c) == (i, j) else {}
                                   for c in range(len(self.source)))
                             for r in range(len(self.target)))
                out.append(MorphismExpr(self.source, self.target, rows))
        return out

    def basis_labels(self, C: CatPresentation) -> List[str]:
        labels = []
        for i, j, basis in self.slots:
            for b in basis:
                label = C.describe_basis(b)
                labels.append(label if len(self.source) == len(self.target) == 1 else f"({i},{j}):{label}")
        return labels


def hom_space(C: CatPresentation, x: Any, y: Any) -> HomSpace:
    """hom(X, Y); the dimension is the sum of the generator hom dimensions."""
    x, y = as_add_object(x), as_add_object(y)
    slots, offsets, indexes = [], [], []
    offset = 0
    for i, yi in enumerate(y):
        for j, xj in enumerate(x):
            basis = tuple(C.hom_basis(xj, yi))
            slots.append((i, j, basis))
            offsets.append(offset)
            indexes.append({b: k for k, b in enumerate(basis)})
            offset += len(basis)
    return HomSpace(C.field, x, y, tuple(slots), tuple(offsets), offset, tuple(indexes))


def postcompose_matrix(C: CatPresentation, g: MorphismExpr, w: Any) -> ExactMatrix:
    """Matrix of e ↦ g∘e from hom(W, source g) to hom(W, target g)."""
    w = as_add_object(w)
    domain = hom_space(C, w, g.source)
    codomain = hom_space(C, w, g.target)
    columns = [codomain.vectorize(compose(C, g, e)) for e in domain.basis_morphisms()]
    return ExactMatrix.hstack(C.field, columns, codomain.dimension)


def precompose_matrix(C: CatPresentation, f: MorphismExpr, a: Any) -> ExactMatrix:
    """Matrix of e ↦ e∘f from hom(target f, A) to hom(source f, A)."""
    a = as_add_object(a)
    domain = hom_space(C, f.target, a)
    codomain = hom_space(C, f.source, a)
    columns = [codomain.vectorize(compose(C, e, f)) for e in domain.basis_morphisms()]
    return ExactMatrix.hstack(C.field, columns, codomain.dimension)


def is_monic_on_window(C: CatPresentation, m: MorphismExpr, window: Iterable[Any]) -> bool:
    """True iff a ↦ m∘a is injective on hom(W, source m) for every W in the window."""
    for w in window:
        matrix = postcompose_matrix(C, m, w)
        if matrix.rank != matrix.cols:
            logger.debug(f"{m.describe(C)} is not monic against {as_add_object(w).describe(C)}")
            return False
    return True


def factor_after(C: CatPresentation, t: MorphismExpr, f: MorphismExpr) -> Optional[MorphismExpr]:
    """Some β with β∘f = t, or None when t does not factor through f."""
    matrix = precompose_matrix(C, f, t.target)
    x = solve(matrix, hom_space(C, f.source, t.target).vectorize(t))
    if x is None:
        return None
    return hom_space(C, f.target, t.target).morphism(x)


def factor_before(C: CatPresentation, t: MorphismExpr, g: MorphismExpr) -> Optional[MorphismExpr]:
    """Some γ with g∘γ = t, or None."""
    matrix = postcompose_matrix(C, g, t.source)
    x = solve(matrix, hom_space(C, t.source, g.target).vectorize(t))
    if x is None:
        return None
    return hom_space(C, t.source, g.source).morphism(x)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    """Outcome of an axiom check; empty ``violations`` means valid."""

    subject: str
    violations: List[str] = dataclass_field(default_factory=list)
    checks: Dict[str, int] = dataclass_field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def count(self, kind: str, n: int = 1) -> None:
        self.checks[kind] = self.checks.get(kind, 0) + n

    def add(self, message: str) -> None:
        self.violations.append(message)

    def summary(self) -> str:
        status = "valid" if self.valid else f"{len(self.violations)} violation(s)"
        return f"{self.subject}: {status}"


def validate_category(C: CatPresentation, objects: Optional[Sequence[ObjectId]] = None) -> ValidationReport:
    """Check bookkeeping, unit laws, associativity and snake relations."""
    objs = list(objects) if objects is not None else list(C.validation_objects())
    report = ValidationReport(C.name)
    field = C.field
    logger.info(f"Validating {C.name} on {len(objs)} objects")

    def safe(fn, *args):
        try:
            return fn(*args)
        except WindowError:
            return None
        except KernelLabError as exc:
            report.add(str(exc))
            return None

    for x in objs:
        idx = C.identity(x) if _has_identity(C, x, report) else None
        if idx is None:
            continue
        for b in idx:
            if b not in set(C.hom_basis(x, x)):
                report.add(f"identity of {C.describe_object(x)} uses {C.describe_basis(b)} outside End({C.describe_object(x)})")
        for y in objs:
            for f in C.hom_basis(x, y):
                if C.source(f) != x or C.target(f) != y:
                    report.add(f"{C.describe_basis(f)} is listed in hom({x}, {y}) but has other ends")
                left = safe(compose_terms, C, {f: field.one}, idx)
                if left is not None and left != {f: field.one}:
                    report.add(f"{C.describe_basis(f)}∘id ≠ {C.describe_basis(f)}")
                idy = C.identity(y) if _has_identity(C, y, report) else {}
                right = safe(compose_terms, C, idy, {f: field.one})
                if right is not None and right != {f: field.one}:
                    report.add(f"id∘{C.describe_basis(f)} ≠ {C.describe_basis(f)}")
                report.count("unit", 2)

    for x in objs:
        for y in objs:
            for z in objs:
                for f in C.hom_basis(x, y):
                    for g in C.hom_basis(y, z):
                        gf = safe(C.compose_basis, g, f)
                        if gf is None:
                            continue
                        allowed = set(C.hom_basis(x, z))
                        stray = [b for b in gf if b not in allowed]
                        if stray:
                            report.add(f"{C.describe_basis(g)}∘{C.describe_basis(f)} leaves hom({x}, {z})")
                        report.count("bookkeeping")
    for w in objs:
        for x in objs:
            for y in objs:
                for z in objs:
                    for f in C.hom_basis(w, x):
                        for g in C.hom_basis(x, y):
                            for h in C.hom_basis(y, z):
                                left = safe(lambda: compose_terms(C, compose_terms(C, {h: field.one}, {g: field.one}), {f: field.one}))
                                right = safe(lambda: compose_terms(C, {h: field.one}, compose_terms(C, {g: field.one}, {f: field.one})))
                                if left is None or right is None:
                                    continue
                                report.count("associativity")
                                if left != right:
                                    report.add(f"associativity fails on ({C.describe_basis(h)}, {C.describe_basis(g)}, {C.describe_basis(f)})")

    M = C.monoidal
    if M is not None and M.has_duals:
        for x in objs:
            problem = safe(_snake_violation, C, x)
            report.count("snake", 2)
            if problem:
                report.add(problem)
    if report.valid:
        logger.info(f"{C.name} passed validation ({sum(report.checks.values())} checks)")
    else:
        logger.warning(f"{C.name} failed validation with {len(report.violations)} violations")
    return report


def _has_identity(C: CatPresentation, x: ObjectId, report: ValidationReport) -> bool:
    try:
        C.identity(x)
        return True
    except MissingStructureError as exc:
        if str(exc) not in report.violations:
            report.add(str(exc))
        return False


def snake_composites(C: CatPresentation, x: ObjectId) -> Tuple[MorphismExpr, MorphismExpr]:
    """The two zig-zag composites for X and X*, which must be identities."""
    M = C.require_monoidal()
    xd = M.dual(x)
    unit = M.unit
    ev = MorphismExpr(AddObject.of(M.tensor_objects(xd, x)), AddObject.of(unit), ((dict(M.ev(x)),),))
    co = MorphismExpr(AddObject.of(unit), AddObject.of(M.tensor_objects(x, xd)), ((dict(M.co(x)),),))
    id_x = identity_morphism(C, AddObject.of(x))
    id_xd = identity_morphism(C, AddObject.of(xd))
    first = compose(C, tensor(C, id_x, ev), tensor(C, co, id_x))
    second = compose(C, tensor(C, ev, id_xd), tensor(C, id_xd, co))
    return first, second


def _snake_violation(C: CatPresentation, x: ObjectId) -> Optional[str]:
    M = C.require_monoidal()
    xd = M.dual(x)
    if M.tensor_objects(M.tensor_objects(x, xd), x) != M.tensor_objects(x, M.tensor_objects(xd, x)):
        return f"tensor is not strictly associative on {C.describe_object(x)}"
    first, second = snake_composites(C, x)
    problems = []
    if first != identity_morphism(C, AddObject.of(x)):
        problems.append(f"snake relation fails for {C.describe_object(x)}")
    if second != identity_morphism(C, AddObject.of(xd)):
        problems.append(f"snake relation fails for the dual of {C.describe_object(x)}")
    return "; ".join(problems) or None


# ---------------------------------------------------------------------------
# algebras as one-object categories


def algebra_presentation(field: FieldSpec, basis: Sequence[str],
                         products: Mapping[Tuple[str, str], Mapping[str, object]],
                         unit: str, name: str = "algebra", object_id: str = "R",
                         commutative: bool = False) -> TablePresentation:
    """R-free for a finite-dimensional algebra R.

    Morphisms R → R act by right multiplication, so g∘f is the product f·g.
    Commutative algebras also get the monoidal structure ⊗_R with R as unit.
    """
    homs = {(object_id, object_id): tuple(basis)}
    comp = {(g, f): dict(products[(f, g)]) for f in basis for g in basis}
    identities = {object_id: {unit: 1}}
    monoidal = None
    if commutative:
        monoidal = TableMonoidal(
            unit=object_id,
            objects={(object_id, object_id): object_id},
            basis={(a, b): dict(products[(a, b)]) for a in basis for b in basis},
            braidings={(object_id, object_id): {unit: 1}},
            duals={object_id: object_id},
            evs={object_id: {unit: 1}},
            cos={object_id: {unit: 1}},
        )
    return TablePresentation(name, field, [object_id], homs, comp, identities, monoidal,
                             metadata={"algebra": True})


@lru_cache(maxsize=None)
def truncated_polynomial(field: FieldSpec, n: int, name: Optional[str] = None) -> TablePresentation:
    """R-free for R = k[x]/(xⁿ) with basis id, x, x^2, …"""
    if n < 1:
        raise ValueError("Truncation degree must be positive")
    names = ["id"] + ["x" if i == 1 else f"x^{i}" for i in range(1, n)]
    products: Dict[Tuple[str, str], Dict[str, int]] = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            products[(a, b)] = {names[i + j]: 1} if i + j < n else {}
    return algebra_presentation(field, names, products, "id", name=name or f"k[x]/x^{n}", commutative=True)


def dual_numbers(field: FieldSpec) -> TablePresentation:
    return truncated_polynomial(field, 2, "dualnumbers")


@lru_cache(maxsize=None)
def vector_spaces(field: FieldSpec) -> TablePresentation:
    """Finite-dimensional vector spaces: the object k, whose formal sums are kⁿ."""
    return algebra_presentation(field, ["1"], {("1", "1"): {"1": 1}}, "1", name="vec", object_id="k",
                                commutative=True)
