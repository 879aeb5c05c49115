from .presentation import (
    AddObject,
    CatPresentation,
    MorphismExpr,
    TablePresentation,
    compose,
    dual_numbers,
    hom_space,
    truncated_polynomial,
    validate_category,
)
from .functors import FunctorSpec, is_faithful_on_window, validate_functor
from .diagrams import DiagramPresentation, build_EN, build_MO, build_OB, build_Seq

__all__ = [
    'CatPresentation',
    'TablePresentation',
    'DiagramPresentation',
    'AddObject',
    'MorphismExpr',
    'FunctorSpec',
    'compose',
    'hom_space',
    'validate_category',
    'validate_functor',
    'is_faithful_on_window',
    'dual_numbers',
    'truncated_polynomial',
    'build_OB',
    'build_MO',
    'build_EN',
    'build_Seq'
]
