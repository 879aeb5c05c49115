"""Seeded random instances for the property suite."""

import logging
import random
from typing import Any, Optional, Sequence

from KernelLab.core.fields import FieldSpec, Scalar
from KernelLab.core.linalg import ExactMatrix, kernel_basis
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    MorphismExpr,
    as_add_object,
    hom_space,
    precompose_matrix,
)
from KernelLab.homological.complexes import ChainMap, Complex, kb_hom
from KernelLab.homological.noy import NoyMorphism, noy_hom

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240601


def make_rng(seed: Optional[int] = None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def random_scalar(field: FieldSpec, rng: random.Random, bound: int = 2) -> Scalar:
    if field.is_prime_field:
        return field.element(rng.randrange(field.p))
    return field.element(rng.randint(-bound, bound))


def random_vector(field: FieldSpec, rng: random.Random, n: int) -> ExactMatrix:
    return ExactMatrix.from_rows(field, [[random_scalar(field, rng)] for _ in range(n)], cols=1)


def random_combination(field: FieldSpec, rng: random.Random, basis: ExactMatrix) -> ExactMatrix:
    """A random vector in the column span of ``basis``."""
    return basis @ random_vector(field, rng, basis.cols)


def random_add_object(C: CatPresentation, rng: random.Random, objects: Optional[Sequence[Any]] = None,
                      max_summands: int = 2) -> AddObject:
    pool = list(objects if objects is not None else C.validation_objects())
    return AddObject(tuple(rng.choice(pool) for _ in range(rng.randint(1, max_summands))))


def random_morphism(C: CatPresentation, rng: random.Random, source: Any, target: Any) -> MorphismExpr:
    space = hom_space(C, source, target)
    return space.morphism(random_vector(C.field, rng, space.dimension))


def random_complex(C: CatPresentation, rng: random.Random, objects: Optional[Sequence[Any]] = None,
                   lo: int = 0, length: int = 3) -> Complex:
    """X^lo → … with each differential drawn from the maps killing the previous one."""
    pool = list(objects if objects is not None else C.validation_objects())
    terms = [AddObject.of(rng.choice(pool)) for _ in range(length)]
    differentials = []
    for k in range(length - 1):
        space = hom_space(C, terms[k], terms[k + 1])
        if not differentials:
            differentials.append(random_morphism(C, rng, terms[k], terms[k + 1]))
            continue
        allowed = kernel_basis(precompose_matrix(C, differentials[-1], terms[k + 1]))
        differentials.append(space.morphism(random_combination(C.field, rng, allowed)))
    return Complex(lo, tuple(terms), tuple(differentials))


def random_chain_map(C: CatPresentation, rng: random.Random, X: Complex, Y: Complex) -> ChainMap:
    hom = kb_hom(C, X, Y)
    return hom.chain_map(random_combination(C.field, rng, hom.chain_maps))


def random_noy_morphism(C: CatPresentation, rng: random.Random, f, g) -> NoyMorphism:
    nh = noy_hom(C, f, g)
    return nh.morphism(random_combination(C.field, rng, nh.value.numerator()))


def random_two_term(C: CatPresentation, rng: random.Random, objects: Optional[Sequence[Any]] = None) -> MorphismExpr:
    pool = list(objects if objects is not None else C.validation_objects())
    return random_morphism(C, rng, as_add_object(rng.choice(pool)), as_add_object(rng.choice(pool)))
