import os
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator

from KernelLab.core.errors import DotBudgetError, WindowError
from KernelLab.core.fields import FieldSpec
from KernelLab.categories.diagrams import DiagramPresentation
from KernelLab.categories.presentation import CatPresentation
from KernelLab.evaluators.kernels import Window, make_window
from KernelLab.evaluators.sites import DEFAULT_LATTICE_LIMIT

COMMANDS = (
    "hom", "compose", "noy-hom", "kb-hom", "sigma", "sigma-theta", "prexact", "flat",
    "topologies", "topology-of", "hsigma", "mu-nu", "fr-plus",
)

DEFAULT_CATEGORY = "dualnumbers"
DEFAULT_SEED = 20240601


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


class SessionConfig(BaseModel):
    """Configuration for one command run."""

    command: str
    category: str = DEFAULT_CATEGORY
    functor: Optional[str] = None
    field: Optional[str] = None

    # Objects and morphisms
    object: Optional[str] = None
    morphism: Optional[str] = None
    target_morphism: Optional[str] = None
    source: Optional[str] = None
    target: Optional[str] = None

    # Window
    window_len: Optional[int] = None
    window_dots: Optional[int] = None
    degree_lo: int = 0
    degree_hi: int = 1
    skeleton: List[str] = Field(default_factory=list)
    assert_complete: bool = False

    # Output
    out: Optional[Path] = None
    json_output: bool = False
    verbose: bool = False

    # Execution
    seed: int = DEFAULT_SEED
    data_dir: Optional[Path] = None
    lattice_limit: int = DEFAULT_LATTICE_LIMIT

    @classmethod
    def from_env(cls, **values) -> "SessionConfig":
        """Fill unset values from the environment (and a .env file)."""
        load_dotenv()
        defaults = {
            "field": os.environ.get("KERNELLAB_FIELD") or None,
            "seed": _env_int("KERNELLAB_SEED", DEFAULT_SEED),
            "data_dir": os.environ.get("KERNELLAB_DATA_DIR") or None,
            "lattice_limit": _env_int("KERNELLAB_LATTICE_LIMIT", DEFAULT_LATTICE_LIMIT),
        }
        merged = {k: v for k, v in defaults.items() if v is not None}
        merged.update({k: v for k, v in values.items() if v is not None})
        return cls(**merged)

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"Unknown command {value!r}; expected one of {', '.join(COMMANDS)}")
        return value

    @field_validator("field")
    @classmethod
    def _valid_field(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        return FieldSpec.parse(value).name

    @field_validator("window_len", "window_dots", "lattice_limit")
    @classmethod
    def _positive(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("window parameters must be positive")
        return value

    @model_validator(mode="after")
    def _degree_window(self) -> "SessionConfig":
        if self.degree_lo > self.degree_hi:
            raise ValueError(f"degree window [{self.degree_lo}, {self.degree_hi}] is empty")
        return self

    @property
    def field_spec(self) -> Optional[FieldSpec]:
        return FieldSpec.parse(self.field) if self.field else None

    def window_echo(self) -> dict:
        return {
            "category": self.category,
            "field": self.field,
            "window_len": self.window_len,
            "window_dots": self.window_dots,
            "degrees": [self.degree_lo, self.degree_hi],
            "skeleton": list(self.skeleton),
            "assert_complete": self.assert_complete,
        }

    def to_window(self, C: CatPresentation, parse_object=None) -> Window:
        """Window objects for ``C``: the skeleton if given, else every generator (words up to window_len)."""
        if self.skeleton:
            objects = [parse_object(C, name) if parse_object else name for name in self.skeleton]
        elif isinstance(C, DiagramPresentation):
            length = self.window_len if self.window_len is not None else min(C.max_len, 2)
            if length > C.max_len:
                raise WindowError(f"Window length {length} exceeds the generated length {C.max_len} of {C.name}")
            if self.window_dots is not None and self.window_dots > C.max_dots:
                raise DotBudgetError(f"Dot window {self.window_dots} exceeds the budget {C.max_dots} of {C.name}")
            objects = [w for w in C.objects if len(w) <= length]
        else:
            objects = None
        return make_window(C, objects, self.degree_lo, self.degree_hi, self.assert_complete)
