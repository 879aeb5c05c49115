"""Additive sieves and Grothendieck topologies on a finite skeleton.

A sieve on X assigns to every skeleton object Y a subspace of hom(Y, X)
closed under precomposition. Over F_p candidate morphisms are enumerated
exhaustively; over Q they run over coefficient vectors in {-1, 0, 1}, which
is recorded in every report.
"""

from dataclasses import dataclass, field as dataclass_field
import itertools
import logging
from typing import Any, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from KernelLab.core.errors import LatticeLimitError, ObjectMismatchError
from KernelLab.core.fields import FieldSpec
from KernelLab.core.linalg import ExactMatrix, in_span, preimage, row_reduce
from KernelLab.categories.functors import FunctorSpec, apply_morphism
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    MorphismExpr,
    ObjectId,
    basis_morphism,
    hom_space,
    postcompose_matrix,
    precompose_matrix,
)
from KernelLab.homological.noy import NoyPresentation, vec_theta_functor
from KernelLab.evaluators.kernels import Window, annihilator_generators

logger = logging.getLogger(__name__)

DEFAULT_LATTICE_LIMIT = 4096

SieveKey = Tuple[Tuple[ObjectId, Tuple[Tuple[str, ...], ...]], ...]


def _canonical(field: FieldSpec, columns: ExactMatrix) -> ExactMatrix:
    """Column basis of span(columns) in reduced echelon form."""
    if columns.cols == 0:
        return columns
    reduced = row_reduce(columns.T)
    keep = [i for i in range(reduced.rows) if not reduced.submatrix(slice(i, i + 1), slice(None)).is_zero()]
    rows = [reduced.data[i] for i in keep]
    if not rows:
        return ExactMatrix.zeros(field, columns.rows, 0)
    return ExactMatrix.from_rows(field, rows).T


@dataclass(frozen=True, eq=False)
class Sieve:
    root: ObjectId
    components: Tuple[Tuple[ObjectId, ExactMatrix], ...]
    key: SieveKey

    def component(self, y: ObjectId) -> ExactMatrix:
        return dict(self.components)[y]

    @property
    def dimension(self) -> int:
        return sum(m.cols for _, m in self.components)

    def contains(self, other: "Sieve") -> bool:
        return all(in_span(self.component(y), m) for y, m in other.components)

    def __le__(self, other: "Sieve") -> bool:
        return other.contains(self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sieve) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_maximal(self, C: CatPresentation) -> bool:
        return all(m.cols == C.hom_dim(y, self.root) for y, m in self.components)

    def describe(self, C: CatPresentation) -> str:
        if self.is_maximal(C):
            return "max"
        gens = sieve_generators(C, self)
        if not gens:
            return "0"
        parts = [_describe_vector(hom_space(C, y, self.root).basis_labels(C), v, C.field) for y, v in gens]
        return "(" + ", ".join(parts) + ")"

    def __repr__(self) -> str:
        return f"Sieve({self.root}, dim={self.dimension})"


def _describe_vector(labels: Sequence[str], v: ExactMatrix, field: FieldSpec) -> str:
    terms = []
    for k, label in enumerate(labels):
        c = v.entry(k, 0)
        if c == 0:
            continue
        if c == 1:
            terms.append(label)
        elif field.is_zero(field.add(c, 1)):
            terms.append(f"-{label}")
        else:
            terms.append(f"{field.format(c)}*{label}")
    return " + ".join(terms).replace("+ -", "- ")


def make_sieve(C: CatPresentation, root: ObjectId, components: Mapping[ObjectId, ExactMatrix]) -> Sieve:
    canon = tuple((y, _canonical(C.field, components[y])) for y in C.objects)
    key = tuple((y, tuple(tuple(row) for row in m.T.to_lists())) for y, m in canon)
    return Sieve(root, canon, key)


def maximal_sieve(C: CatPresentation, root: ObjectId) -> Sieve:
    return make_sieve(C, root, {y: ExactMatrix.identity(C.field, C.hom_dim(y, root)) for y in C.objects})


def zero_sieve(C: CatPresentation, root: ObjectId) -> Sieve:
    return make_sieve(C, root, {y: ExactMatrix.zeros(C.field, C.hom_dim(y, root), 0) for y in C.objects})


def _precomposition_maps(C: CatPresentation, root: ObjectId) -> Dict[Tuple[ObjectId, ObjectId], List[ExactMatrix]]:
    """For each pair (Y, Z), the maps s ↦ s∘h: hom(Y, X) → hom(Z, X) over basis morphisms h: Z → Y."""
    target = AddObject.of(root)
    maps = {}
    for y in C.objects:
        for z in C.objects:
            maps[(y, z)] = [precompose_matrix(C, basis_morphism(C, h), target) for h in C.hom_basis(z, y)]
    return maps


def _close(C: CatPresentation, root: ObjectId, components: Dict[ObjectId, ExactMatrix],
           maps: Optional[Dict[Tuple[ObjectId, ObjectId], List[ExactMatrix]]] = None) -> Sieve:
    maps = maps if maps is not None else _precomposition_maps(C, root)
    field = C.field
    changed = True
    while changed:
        changed = False
        for (y, z), hs in maps.items():
            for m in hs:
                image = m @ components[y]
                if not in_span(components[z], image):
                    components[z] = _canonical(field, ExactMatrix.hstack(field, [components[z], image],
                                                                         components[z].rows))
                    changed = True
    return make_sieve(C, root, components)


def sieve_closure(C: CatPresentation, root: ObjectId, generators: Sequence[MorphismExpr]) -> Sieve:
    """The smallest sieve on ``root`` containing the generators."""
    target = AddObject.of(root)
    field = C.field
    components = {y: ExactMatrix.zeros(field, C.hom_dim(y, root), 0) for y in C.objects}
    for g in generators:
        if not g.target.same_layout(target):
            raise ObjectMismatchError(f"Sieve generator {g.describe(C)} does not end at {C.describe_object(root)}")
        for j, y in enumerate(g.source):
            piece = MorphismExpr(AddObject.of(y), target, ((g.blocks[0][j],),))
            v = hom_space(C, y, root).vectorize(piece)
            components[y] = ExactMatrix.hstack(field, [components[y], v], components[y].rows)
    return _close(C, root, components)


def sieve_generators(C: CatPresentation, S: Sieve) -> List[Tuple[ObjectId, ExactMatrix]]:
    """A generating set of S chosen greedily in skeleton and echelon order."""
    maps = _precomposition_maps(C, S.root)
    gens: List[Tuple[ObjectId, ExactMatrix]] = []
    current = zero_sieve(C, S.root)
    for y, m in S.components:
        for v in m.columns():
            if in_span(current.component(y), v):
                continue
            gens.append((y, v))
            components = {z: c for z, c in current.components}
            components[y] = ExactMatrix.hstack(C.field, [components[y], v], v.rows)
            current = _close(C, S.root, components, maps)
    return gens


def join_sieves(C: CatPresentation, a: Sieve, b: Sieve) -> Sieve:
    field = C.field
    return make_sieve(C, a.root, {y: ExactMatrix.hstack(field, [m, b.component(y)], m.rows) for y, m in a.components})


def pullback_sieve(C: CatPresentation, S: Sieve, h: MorphismExpr) -> Sieve:
    """h*S on the source Y of h: {g: Z → Y | h∘g ∈ S(Z)}."""
    if not h.target.same_layout(AddObject.of(S.root)) or len(h.source) != 1:
        raise ObjectMismatchError(f"{h.describe(C)} does not run from a skeleton object to {C.describe_object(S.root)}")
    (y,) = h.source
    components = {z: preimage(postcompose_matrix(C, h, z), S.component(z)) for z in C.objects}
    return make_sieve(C, y, components)


# ---------------------------------------------------------------------------
# the sieve lattice


def candidate_coefficients(field: FieldSpec, n: int) -> Iterator[Tuple[int, ...]]:
    """Nonzero coefficient vectors up to scaling: first nonzero entry 1."""
    values = range(field.p) if field.is_prime_field else (-1, 0, 1)
    for vector in itertools.product(values, repeat=n):
        nonzero = [c for c in vector if c != 0]
        if nonzero and nonzero[0] == 1:
            yield vector


def _combinations(field: FieldSpec, basis: ExactMatrix) -> List[ExactMatrix]:
    out = []
    for coeffs in candidate_coefficients(field, basis.cols):
        out.append(basis @ ExactMatrix.from_rows(field, [[c] for c in coeffs]))
    return out


@dataclass
class SieveLattice:
    """All enumerated sieves per skeleton object, smallest first."""

    presentation: CatPresentation
    sieves: Dict[ObjectId, List[Sieve]]
    exhaustive: bool
    limit: int = DEFAULT_LATTICE_LIMIT
    _pullbacks: Dict[Any, List[SieveKey]] = dataclass_field(default_factory=dict, repr=False)

    def sieve(self, key: SieveKey) -> Sieve:
        for sieves in self.sieves.values():
            for s in sieves:
                if s.key == key:
                    return s
        raise KeyError(key)

    def size(self) -> int:
        return sum(len(v) for v in self.sieves.values())

    def pullback_keys(self, S: Sieve, y: ObjectId, within: Optional[ExactMatrix] = None) -> List[SieveKey]:
        """Keys of h*S for candidate h: Y → X, optionally restricted to h in span(within)."""
        C = self.presentation
        cache_key = (S.key, y, None if within is None else tuple(map(tuple, within.to_lists())))
        if cache_key not in self._pullbacks:
            space = hom_space(C, y, S.root)
            basis = within if within is not None else ExactMatrix.identity(C.field, space.dimension)
            self._pullbacks[cache_key] = [pullback_sieve(C, S, space.morphism(v)).key
                                          for v in _combinations(C.field, basis)]
        return self._pullbacks[cache_key]


def enumerate_sieves(C: CatPresentation, limit: int = DEFAULT_LATTICE_LIMIT) -> SieveLattice:
    """Every sieve on each skeleton object as a join of cyclic sieves."""
    if not C.is_finite:
        raise LatticeLimitError(f"{C.name} is not a finite skeleton")
    logger.info(f"Enumerating sieves on {C.name} over {C.field.name}")
    out = {}
    total = 0
    for x in C.objects:
        maps = _precomposition_maps(C, x)
        cyclic = {}
        for y in C.objects:
            space = hom_space(C, y, x)
            for v in _combinations(C.field, ExactMatrix.identity(C.field, space.dimension)):
                components = {z: ExactMatrix.zeros(C.field, C.hom_dim(z, x), 0) for z in C.objects}
                components[y] = v
                s = _close(C, x, components, maps)
                cyclic.setdefault(s.key, s)
        found = {zero_sieve(C, x).key: zero_sieve(C, x)}
        frontier = list(found.values())
        while frontier:
            nxt = []
            for s in frontier:
                for c in cyclic.values():
                    j = join_sieves(C, s, c)
                    if j.key not in found:
                        found[j.key] = j
                        nxt.append(j)
                        if total + len(found) > limit:
                            raise LatticeLimitError(f"More than {limit} sieves on {C.name}")
            frontier = nxt
        out[x] = sorted(found.values(), key=lambda s: (s.dimension, s.key))
        total += len(out[x])
        logger.debug(f"{len(out[x])} sieves on {C.describe_object(x)}")
    return SieveLattice(C, out, C.field.is_prime_field, limit)


# ---------------------------------------------------------------------------
# topologies


@dataclass
class TopologyTable:
    covering: Dict[ObjectId, FrozenSet[SieveKey]]
    label: str = ""
    discrete: bool = False
    trivial: bool = False

    def covers(self, S: Sieve) -> bool:
        return S.key in self.covering[S.root]

    def counts(self, objects: Sequence[ObjectId]) -> Tuple[int, ...]:
        return tuple(len(self.covering[x]) for x in objects)

    def same_covering(self, other: "TopologyTable") -> bool:
        return self.covering == other.covering

    def meet(self, other: "TopologyTable") -> "TopologyTable":
        return TopologyTable({x: keys & other.covering[x] for x, keys in self.covering.items()})

    def describe(self, lattice: SieveLattice) -> List[str]:
        """One line per object: the covering sieves, smallest first."""
        C = lattice.presentation
        lines = []
        for x in C.objects:
            names = [s.describe(C) for s in lattice.sieves[x] if s.key in self.covering[x]]
            lines.append(f"{C.describe_object(x)}: {', '.join(names)}")
        return lines


def _up_sets(sieves: Sequence[Sieve], limit: int) -> List[FrozenSet[SieveKey]]:
    """Up-closed families containing the maximal sieve."""
    order = sorted(sieves, key=lambda s: (-s.dimension, s.key))
    above = [[j for j in range(i) if order[j].contains(order[i]) and order[j] != order[i]] for i in range(len(order))]
    out: List[FrozenSet[SieveKey]] = []

    def walk(i: int, chosen: List[int]) -> None:
        if len(out) > limit:
            raise LatticeLimitError(f"More than {limit} candidate covering families")
        if i == len(order):
            out.append(frozenset(order[k].key for k in chosen))
            return
        if all(j in chosen for j in above[i]):
            walk(i + 1, chosen + [i])
        if i > 0:
            walk(i + 1, chosen)

    walk(0, [])
    return out


def topology_violation(lattice: SieveLattice, covering: Mapping[ObjectId, FrozenSet[SieveKey]]) -> Optional[str]:
    """The first failed axiom, or None for a topology."""
    C = lattice.presentation
    for x in C.objects:
        if maximal_sieve(C, x).key not in covering[x]:
            return f"maximal sieve on {C.describe_object(x)} does not cover"
    for x in C.objects:
        for S in lattice.sieves[x]:
            if S.key not in covering[x]:
                continue
            for y in C.objects:
                if any(k not in covering[y] for k in lattice.pullback_keys(S, y)):
                    return f"a pullback of {S.describe(C)} on {C.describe_object(x)} does not cover"
    for x in C.objects:
        for R in lattice.sieves[x]:
            if R.key in covering[x]:
                continue
            for S in lattice.sieves[x]:
                if S.key not in covering[x]:
                    continue
                if all(k in covering[y] for y in C.objects
                       for k in lattice.pullback_keys(R, y, S.component(y))):
                    return (f"{R.describe(C)} on {C.describe_object(x)} is locally covering "
                            f"along {S.describe(C)} but does not cover")
    return None


def is_topology(lattice: SieveLattice, table: TopologyTable) -> bool:
    return topology_violation(lattice, table.covering) is None


def _flag(lattice: SieveLattice, table: TopologyTable) -> TopologyTable:
    C = lattice.presentation
    table.discrete = all(len(table.covering[x]) == len(lattice.sieves[x]) for x in C.objects)
    table.trivial = all(table.covering[x] == {maximal_sieve(C, x).key} for x in C.objects)
    return table


def enumerate_topologies(C: CatPresentation, lattice: Optional[SieveLattice] = None,
                         limit: int = DEFAULT_LATTICE_LIMIT) -> List[TopologyTable]:
    """All additive topologies on the skeleton, most covering sieves first, labelled R0, R1, …"""
    lattice = lattice or enumerate_sieves(C, limit)
    objects = list(C.objects)
    per_object = [_up_sets(lattice.sieves[x], limit) for x in objects]
    candidates = 1
    for families in per_object:
        candidates *= len(families)
    if candidates > limit:
        raise LatticeLimitError(f"{candidates} candidate topologies on {C.name} exceed the limit {limit}")
    logger.info(f"Checking {candidates} candidate topologies on {C.name}")

    found = []
    for choice in itertools.product(*per_object):
        covering = dict(zip(objects, choice))
        reason = topology_violation(lattice, covering)
        if reason is None:
            found.append(_flag(lattice, TopologyTable(covering)))
        else:
            logger.debug(f"rejected: {reason}")
    found.sort(key=lambda t: (-sum(t.counts(objects)), tuple(-n for n in t.counts(objects))))
    for k, t in enumerate(found):
        t.label = f"R{k}"
    logger.info(f"{len(found)} topologies on {C.name}")
    return found


def identify_topology(table: TopologyTable, topologies: Sequence[TopologyTable]) -> Optional[str]:
    for t in topologies:
        if t.same_covering(table):
            return t.label
    return None


def topology_of_functor(C: CatPresentation, theta: FunctorSpec, lattice: SieveLattice,
                        topologies: Optional[Sequence[TopologyTable]] = None) -> TopologyTable:
    """S covers X iff θ applied to the morphisms in S jointly spans θ(X)."""
    covering = {}
    for x in C.objects:
        keys = set()
        for S in lattice.sieves[x]:
            images = []
            for y, m in S.components:
                space = hom_space(C, y, x)
                images.extend(apply_morphism(C, theta, space.morphism(v)) for v in m.columns())
            joint = ExactMatrix.hstack(C.field, images, theta.dims[x])
            if joint.rank == theta.dims[x]:
                keys.add(S.key)
        covering[x] = frozenset(keys)
    table = _flag(lattice, TopologyTable(covering))
    if topologies is not None:
        table.label = identify_topology(table, topologies) or ""
    logger.info(f"T_{theta.name} on {C.name}: {table.label or 'unmatched'}")
    return table


def homological_topology(noy: NoyPresentation, theta: FunctorSpec, lattice: Optional[SieveLattice] = None,
                         topologies: Optional[Sequence[TopologyTable]] = None) -> TopologyTable:
    lattice = lattice or enumerate_sieves(noy)
    return topology_of_functor(noy, vec_theta_functor(noy, theta), lattice, topologies)


def canonical_sieve_Rf(noy: NoyPresentation, p: ObjectId) -> Sieve:
    """The sieve on f generated by all morphisms N A → f, i.e. by the g: A → X⁰ with f∘g = 0."""
    f = noy.skeleton[p]
    generators = []
    for q in noy.n_images:
        source = noy.skeleton[q].x0
        nh = noy.noy_homs[(q, p)]
        ids = noy.hom_basis(q, p)
        for g in annihilator_generators(noy.base, f.morphism, Window((source,))):
            coords = nh.class_of(g)
            terms = {ids[k]: coords.entry(k, 0) for k in range(coords.rows) if coords.entry(k, 0) != 0}
            if terms:
                generators.append(MorphismExpr(AddObject.of(q), AddObject.of(p), ((terms,),)))
    return sieve_closure(noy, p, generators)


def iota_image_test(noy: NoyPresentation, table: TopologyTable) -> bool:
    """True iff every R_f covers f."""
    return all(table.covers(canonical_sieve_Rf(noy, p)) for p in noy.objects)
