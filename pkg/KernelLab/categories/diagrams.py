"""Diagram categories on words: oriented Brauer, the marked variant, dotted
(enriched) diagrams and the planar sequence category.

Morphisms between two words are perfect matchings of their letters subject
to colour rules. Composition stacks two diagrams, traces the strands through
the middle word and evaluates every closed loop to a scalar.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
import itertools
import logging
import re
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from KernelLab.core.errors import DotBudgetError, KernelLabError, ObjectMismatchError, WindowError
from KernelLab.core.fields import FieldSpec, Scalar
from KernelLab.core.linalg import ExactMatrix
from .functors import FunctorSpec, LazyImages
from .presentation import (
    AddObject,
    CatPresentation,
    LinComb,
    MonoidalStructure,
    MorphismExpr,
    TablePresentation,
)

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]

BLACK, WHITE, FILLED, HOLLOW = "•", "∘", "■", "□"
LETTER_ALIASES = {"b": BLACK, "w": WHITE, "B": FILLED, "W": HOLLOW,
                  BLACK: BLACK, WHITE: WHITE, FILLED: FILLED, HOLLOW: HOLLOW}
EMPTY_WORD_NAMES = ("", "∅", "e", "1", "𝟙")

SOURCE, TARGET = 0, 1

_SEQ_LETTER = re.compile(r"X(-?\d+)")


def seq_letter(i: int) -> str:
    return f"X{i}"


def seq_index(letter: str) -> int:
    match = _SEQ_LETTER.fullmatch(letter)
    if not match:
        raise ValueError(f"Not a sequence letter: {letter!r}")
    return int(match.group(1))


def parse_word(text: str) -> Word:
    """Read ``•∘``, ``bw``, ``X0X1`` or ``X0 X1``; ``∅`` is the empty word."""
    cleaned = text.strip()
    if cleaned in EMPTY_WORD_NAMES:
        return ()
    if "X" in cleaned:
        letters = _SEQ_LETTER.findall(cleaned.replace(" ", ""))
        if "".join(f"X{i}" for i in letters) != cleaned.replace(" ", ""):
            raise ValueError(f"Cannot read word {text!r}")
        return tuple(seq_letter(int(i)) for i in letters)
    try:
        return tuple(LETTER_ALIASES[ch] for ch in cleaned if not ch.isspace())
    except KeyError as exc:
        raise ValueError(f"Unknown letter {exc.args[0]!r} in word {text!r}")


def format_word(word: Word) -> str:
    return "".join(word) if word else "∅"


@dataclass(frozen=True, order=True)
class PairingDiagram:
    """A perfect matching between the letters of a source and a target word.

    Nodes are numbered left to right, source letters first. ``pairs`` is
    sorted and ``dots`` (dotted diagrams only) is aligned with it.
    """

    source: Word
    target: Word
    pairs: Tuple[Tuple[int, int], ...]
    dots: Tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.source) + len(self.target)

    def letter(self, node: int) -> str:
        a = len(self.source)
        return self.source[node] if node < a else self.target[node - a]

    def line(self, node: int) -> int:
        return SOURCE if node < len(self.source) else TARGET

    def partners(self) -> Dict[int, int]:
        out = {}
        for u, v in self.pairs:
            out[u] = v
            out[v] = u
        return out

    def node_dots(self) -> Dict[int, int]:
        out = {}
        for k, (u, v) in enumerate(self.pairs):
            d = self.dots[k] if self.dots else 0
            out[u] = d
            out[v] = d
        return out

    @property
    def total_dots(self) -> int:
        return sum(self.dots)

    def _node_label(self, node: int) -> str:
        a = len(self.source)
        return f"s{node}" if node < a else f"t{node - a}"

    def describe(self) -> str:
        strands = []
        for k, (u, v) in enumerate(self.pairs):
            label = f"{self._node_label(u)}-{self._node_label(v)}"
            if self.dots and self.dots[k]:
                label += f"^{self.dots[k]}"
            strands.append(label)
        return f"{format_word(self.source)}→{format_word(self.target)}{{{' '.join(strands)}}}"

    def __str__(self) -> str:
        return self.describe()


def make_diagram(source: Word, target: Word, strands: Sequence[Tuple[int, int, int]],
                 decorated: bool) -> PairingDiagram:
    ordered = sorted((min(u, v), max(u, v), d) for u, v, d in strands)
    pairs = tuple((u, v) for u, v, _ in ordered)
    dots = tuple(d for _, _, d in ordered) if decorated else ()
    return PairingDiagram(tuple(source), tuple(target), pairs, dots)


@dataclass(frozen=True)
class LoopEvalParams:
    """Values of closed loops: δ for plain loops, t for marked loops, δ_i for loops with i dots."""

    delta: Scalar = 0
    t: Optional[Scalar] = None
    deltas: Tuple[Scalar, ...] = ()


class PairingRules(ABC):
    """Which letters may be joined, how loops evaluate and how letters dualize."""

    family: str = ""
    planar: bool = False
    symmetric: bool = True
    decorated: bool = False

    def __init__(self, field: FieldSpec, params: LoopEvalParams):
        self.field = field
        self.params = params

    @abstractmethod
    def alphabet(self) -> Sequence[str]:
        ...

    @abstractmethod
    def allowed(self, u_line: int, u_letter: str, v_line: int, v_letter: str) -> bool:
        """Whether node u may be joined to node v; on a shared line u is the left one."""

    @abstractmethod
    def dual_letter(self, letter: str) -> str:
        ...

    @abstractmethod
    def loop_value(self, letters: Sequence[str], dots: int) -> Scalar:
        ...

    def is_letter(self, letter: str) -> bool:
        return letter in self.alphabet()


class OrientedBrauerRules(PairingRules):
    family = "OB"

    def alphabet(self) -> Sequence[str]:
        return (BLACK, WHITE)

    def allowed(self, u_line, u_letter, v_line, v_letter) -> bool:
        if u_line != v_line:
            return u_letter == v_letter
        return u_letter != v_letter

    def dual_letter(self, letter: str) -> str:
        return WHITE if letter == BLACK else BLACK

    def loop_value(self, letters, dots) -> Scalar:
        return self.field.element(self.params.delta)


class MarkedBrauerRules(PairingRules):
    """Two dual pairs •/∘ and ■/□ with the extra strands • ↑ ■ and □ ↑ ∘."""

    family = "MO"

    def alphabet(self) -> Sequence[str]:
        return (BLACK, WHITE, FILLED, HOLLOW)

    def allowed(self, u_line, u_letter, v_line, v_letter) -> bool:
        if u_line != v_line:
            if u_letter == v_letter:
                return True
            lower, upper = (u_letter, v_letter) if u_line == SOURCE else (v_letter, u_letter)
            return (lower, upper) in ((BLACK, FILLED), (HOLLOW, WHITE))
        return {u_letter, v_letter} in ({BLACK, WHITE}, {FILLED, HOLLOW})

    def dual_letter(self, letter: str) -> str:
        return {BLACK: WHITE, WHITE: BLACK, FILLED: HOLLOW, HOLLOW: FILLED}[letter]

    def loop_value(self, letters, dots) -> Scalar:
        if any(x in (FILLED, HOLLOW) for x in letters):
            return self.field.element(self.params.t if self.params.t is not None else 0)
        return self.field.element(self.params.delta)


class DottedBrauerRules(OrientedBrauerRules):
    family = "EN"
    decorated = True

    def loop_value(self, letters, dots) -> Scalar:
        if dots >= len(self.params.deltas):
            raise DotBudgetError(f"Closed loop with {dots} dots has no value in Δ of length {len(self.params.deltas)}")
        return self.field.element(self.params.deltas[dots])


class SequenceRules(PairingRules):
    """Letters X_i with X_i* = X_{i+1}; crossings are forbidden."""

    family = "Seq"
    planar = True
    symmetric = False

    def __init__(self, field: FieldSpec, params: LoopEvalParams, index_bound: int):
        super().__init__(field, params)
        self.index_bound = index_bound

    def alphabet(self) -> Sequence[str]:
        return tuple(seq_letter(i) for i in range(-self.index_bound, self.index_bound + 1))

    def allowed(self, u_line, u_letter, v_line, v_letter) -> bool:
        i, j = seq_index(u_letter), seq_index(v_letter)
        if u_line != v_line:
            return i == j
        if u_line == SOURCE:
            return i == j + 1
        return j == i + 1

    def dual_letter(self, letter: str) -> str:
        return seq_letter(seq_index(letter) + 1)

    def loop_value(self, letters, dots) -> Scalar:
        raise KernelLabError("Closed loop in a sequence-category composite")


def dual_word(rules: PairingRules, word: Word) -> Word:
    return tuple(rules.dual_letter(x) for x in reversed(word))


def _circle_position(node: int, a: int, b: int) -> int:
    # source left to right, then target right to left
    return node if node < a else a + (b - 1 - (node - a))


def _crosses(p: Tuple[int, int], q: Tuple[int, int]) -> bool:
    (a, b), (c, d) = sorted(p), sorted(q)
    return a < c < b < d or c < a < d < b


def enumerate_pairings(rules: PairingRules, source: Word, target: Word) -> List[Tuple[Tuple[int, int], ...]]:
    """All legal matchings between two words, in canonical sorted order."""
    a, b = len(source), len(target)
    n = a + b
    if n % 2:
        return []
    letters = list(source) + list(target)
    lines = [SOURCE] * a + [TARGET] * b
    results: List[Tuple[Tuple[int, int], ...]] = []

    def extend(unmatched: List[int], chosen: List[Tuple[int, int]], chords: List[Tuple[int, int]]):
        if not unmatched:
            results.append(tuple(sorted(chosen)))
            return
        first, rest = unmatched[0], unmatched[1:]
        for k, partner in enumerate(rest):
            if not rules.allowed(lines[first], letters[first], lines[partner], letters[partner]):
                continue
            chord = (_circle_position(first, a, b), _circle_position(partner, a, b))
            if rules.planar and any(_crosses(chord, other) for other in chords):
                continue
            extend(rest[:k] + rest[k + 1:], chosen + [(first, partner)], chords + [chord])

    extend(list(range(n)), [], [])
    return sorted(results)


def _dot_vectors(strands: int, budget: int) -> Iterator[Tuple[int, ...]]:
    if strands == 0:
        yield ()
        return
    for first in range(budget + 1):
        for rest in _dot_vectors(strands - 1, budget - first):
            yield (first,) + rest


def is_legal(rules: PairingRules, diagram: PairingDiagram) -> bool:
    """Colour rules, planarity and a perfect matching of every node."""
    seen = sorted(x for pair in diagram.pairs for x in pair)
    if seen != list(range(diagram.size)):
        return False
    a, b = len(diagram.source), len(diagram.target)
    chords = []
    for u, v in diagram.pairs:
        if not rules.allowed(diagram.line(u), diagram.letter(u), diagram.line(v), diagram.letter(v)):
            return False
        chords.append((_circle_position(u, a, b), _circle_position(v, a, b)))
    if rules.planar:
        for p, q in itertools.combinations(chords, 2):
            if _crosses(p, q):
                return False
    return True


def compose_diagrams(rules: PairingRules, g: PairingDiagram, f: PairingDiagram) -> Tuple[Scalar, PairingDiagram]:
    """Stack f below g; returns the loop scalar and the composite diagram."""
    if f.target != g.source:
        raise ObjectMismatchError(f"Cannot stack {g.describe()} on {f.describe()}")
    a, m, c = len(f.source), len(f.target), len(g.target)
    fp, fd = f.partners(), f.node_dots()
    gp, gd = g.partners(), g.node_dots()

    # vertices: ("A", i) bottom, ("M", j) middle, ("C", k) top
    def step_f(vertex):
        node = vertex[1] if vertex[0] == "A" else a + vertex[1]
        p = fp[node]
        return (("A", p) if p < a else ("M", p - a)), fd[node]

    def step_g(vertex):
        node = vertex[1] if vertex[0] == "M" else m + vertex[1]
        p = gp[node]
        return (("M", p) if p < m else ("C", p - m)), gd[node]

    def outer_node(vertex) -> int:
        return vertex[1] if vertex[0] == "A" else a + vertex[1]

    visited_middle = set()
    done = set()
    strands: List[Tuple[int, int, int]] = []
    for start in [("A", i) for i in range(a)] + [("C", k) for k in range(c)]:
        if start in done:
            continue
        current, use_f, dots = start, start[0] == "A", 0
        while True:
            current, d = step_f(current) if use_f else step_g(current)
            dots += d
            if current[0] != "M":
                break
            visited_middle.add(current[1])
            use_f = not use_f
        done.add(start)
        done.add(current)
        strands.append((outer_node(start), outer_node(current), dots))

    scalar = rules.field.one
    for j in range(m):
        if j in visited_middle:
            continue
        start = ("M", j)
        current, use_f, dots, letters = start, True, 0, []
        while True:
            visited_middle.add(current[1])
            letters.append(f.target[current[1]])
            current, d = step_f(current) if use_f else step_g(current)
            dots += d
            use_f = not use_f
            if current == start:
                break
        scalar = rules.field.mul(scalar, rules.loop_value(letters, dots))
    return scalar, make_diagram(f.source, g.target, strands, rules.decorated)


def tensor_diagrams(f: PairingDiagram, g: PairingDiagram, decorated: bool) -> PairingDiagram:
    """Place g to the right of f."""
    a, b = len(f.source), len(f.target)
    a2, b2 = len(g.source), len(g.target)

    def relabel_f(node: int) -> int:
        return node if node < a else a + a2 + (node - a)

    def relabel_g(node: int) -> int:
        return a + node if node < a2 else a + a2 + b + (node - a2)

    strands = []
    fdots = f.dots or (0,) * len(f.pairs)
    gdots = g.dots or (0,) * len(g.pairs)
    for (u, v), d in zip(f.pairs, fdots):
        strands.append((relabel_f(u), relabel_f(v), d))
    for (u, v), d in zip(g.pairs, gdots):
        strands.append((relabel_g(u), relabel_g(v), d))
    return make_diagram(f.source + g.source, f.target + g.target, strands, decorated)


def identity_diagram(word: Word, decorated: bool) -> PairingDiagram:
    n = len(word)
    return make_diagram(word, word, [(i, n + i, 0) for i in range(n)], decorated)


def permutation_diagram(word: Word, perm: Sequence[int], decorated: bool = False) -> PairingDiagram:
    """Source position q runs to target position perm[q]."""
    n = len(word)
    target = [None] * n
    for q, image in enumerate(perm):
        target[image] = word[q]
    return make_diagram(word, tuple(target), [(q, n + perm[q], 0) for q in range(n)], decorated)


def braiding_diagram(x: Word, y: Word, decorated: bool) -> PairingDiagram:
    nx, ny = len(x), len(y)
    perm = [ny + i for i in range(nx)] + [j for j in range(ny)]
    return permutation_diagram(x + y, perm, decorated)


def ev_diagram(rules: PairingRules, word: Word) -> PairingDiagram:
    """ev: w* w → ∅, nested caps."""
    n = len(word)
    source = dual_word(rules, word) + word
    return make_diagram(source, (), [(k, 2 * n - 1 - k, 0) for k in range(n)], rules.decorated)


def co_diagram(rules: PairingRules, word: Word) -> PairingDiagram:
    """co: ∅ → w w*, nested cups."""
    n = len(word)
    target = word + dual_word(rules, word)
    return make_diagram((), target, [(k, 2 * n - 1 - k, 0) for k in range(n)], rules.decorated)


class DiagramMonoidal(MonoidalStructure):
    """Concatenation of words and diagrams; braided for the symmetric families."""

    def __init__(self, presentation: "DiagramPresentation"):
        self.presentation = presentation

    @property
    def unit(self) -> Word:
        return ()

    def tensor_objects(self, x: Word, y: Word) -> Word:
        return tuple(x) + tuple(y)

    def tensor_basis(self, a: PairingDiagram, b: PairingDiagram) -> LinComb:
        return {tensor_diagrams(a, b, self.presentation.rules.decorated): self.presentation.field.one}

    def braiding(self, x: Word, y: Word) -> Optional[LinComb]:
        if not self.presentation.rules.symmetric:
            return None
        return {braiding_diagram(x, y, self.presentation.rules.decorated): self.presentation.field.one}

    @property
    def has_duals(self) -> bool:
        return True

    def dual(self, x: Word) -> Word:
        return dual_word(self.presentation.rules, x)

    def ev(self, x: Word) -> LinComb:
        return {ev_diagram(self.presentation.rules, x): self.presentation.field.one}

    def co(self, x: Word) -> LinComb:
        return {co_diagram(self.presentation.rules, x): self.presentation.field.one}


class DiagramPresentation(CatPresentation):
    """A diagram category restricted to words of length at most ``max_len``.

    Hom bases and composites are computed on demand and cached; nothing is
    materialized up front.
    """

    def __init__(self, name: str, field: FieldSpec, rules: PairingRules, max_len: int, max_dots: int = 0):
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        super().__init__(name, field)
        self.rules = rules
        self.max_len = max_len
        self.max_dots = max_dots
        self._homs: Dict[Tuple[Word, Word], Tuple[PairingDiagram, ...]] = {}
        self._products: Dict[Tuple[PairingDiagram, PairingDiagram], LinComb] = {}
        self._objects: Optional[List[Word]] = None
        self._monoidal = DiagramMonoidal(self)

    @property
    def family(self) -> str:
        return self.rules.family

    @property
    def objects(self) -> Sequence[Word]:
        if self._objects is None:
            self._objects = words_up_to(self.rules.alphabet(), self.max_len)
        return self._objects

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def monoidal(self) -> MonoidalStructure:
        return self._monoidal

    def check_word(self, word: Word) -> Word:
        word = tuple(word)
        if len(word) > self.max_len:
            raise WindowError(f"Word {format_word(word)} is longer than the window length {self.max_len}")
        for letter in word:
            if not self.rules.is_letter(letter):
                raise WindowError(f"Letter {letter!r} is outside the alphabet of {self.name}")
        return word

    def hom_basis(self, x: Word, y: Word) -> Tuple[PairingDiagram, ...]:
        key = (self.check_word(x), self.check_word(y))
        if key not in self._homs:
            basis = []
            for pairs in enumerate_pairings(self.rules, key[0], key[1]):
                if self.rules.decorated:
                    for dots in _dot_vectors(len(pairs), self.max_dots):
                        basis.append(PairingDiagram(key[0], key[1], pairs, dots))
                else:
                    basis.append(PairingDiagram(key[0], key[1], pairs))
            self._homs[key] = tuple(sorted(basis))
            logger.debug(f"hom({format_word(key[0])}, {format_word(key[1])}) in {self.name}: {len(basis)} diagrams")
        return self._homs[key]

    def compose_basis(self, g: PairingDiagram, f: PairingDiagram) -> LinComb:
        key = (g, f)
        if key not in self._products:
            scalar, diagram = compose_diagrams(self.rules, g, f)
            if diagram.total_dots > self.max_dots:
                raise DotBudgetError(
                    f"{g.describe()}∘{f.describe()} carries {diagram.total_dots} dots, budget is {self.max_dots}")
            self._products[key] = {diagram: scalar} if scalar != 0 else {}
        return self._products[key]

    def identity(self, x: Word) -> LinComb:
        return {identity_diagram(self.check_word(x), self.rules.decorated): self.field.one}

    def source(self, b: PairingDiagram) -> Word:
        return b.source

    def target(self, b: PairingDiagram) -> Word:
        return b.target

    def describe_object(self, x: Word) -> str:
        return format_word(x)

    def describe_basis(self, b: PairingDiagram) -> str:
        return b.describe()

    def validation_objects(self) -> Sequence[Word]:
        return words_up_to(self.rules.alphabet(), max(1, min(2, self.max_len // 3)))

    def diagram(self, source: Word, target: Word, strands: Sequence[Tuple[int, int]],
                dots: Optional[Sequence[int]] = None) -> PairingDiagram:
        """A basis diagram from explicit strands; rejects illegal matchings."""
        dots = list(dots) if dots is not None else [0] * len(strands)
        d = make_diagram(self.check_word(source), self.check_word(target),
                         [(u, v, k) for (u, v), k in zip(strands, dots)], self.rules.decorated)
        if not is_legal(self.rules, d):
            raise ValueError(f"{d.describe()} violates the rules of {self.name}")
        if d.total_dots > self.max_dots:
            raise DotBudgetError(f"{d.describe()} exceeds the dot budget {self.max_dots}")
        return d

    def morphism(self, diagram: PairingDiagram, coefficient: object = 1) -> MorphismExpr:
        return MorphismExpr(AddObject.of(diagram.source), AddObject.of(diagram.target),
                            (({diagram: self.field.element(coefficient)},),))

    def to_table(self, objects: Optional[Sequence[Word]] = None) -> TablePresentation:
        """Materialize the structure constants on a finite set of words."""
        objs = [self.check_word(w) for w in (objects if objects is not None else self.validation_objects())]
        homs = {(x, y): self.hom_basis(x, y) for x in objs for y in objs}
        products, undefined = {}, []
        for x in objs:
            for y in objs:
                for z in objs:
                    for f in homs[(x, y)]:
                        for g in homs[(y, z)]:
                            try:
                                products[(g, f)] = self.compose_basis(g, f)
                            except DotBudgetError:
                                undefined.append((g, f))
        identities = {x: self.identity(x) for x in objs}
        return TablePresentation(f"{self.name}-table", self.field, objs, homs, products, identities,
                                 undefined=undefined, metadata={"exported_from": self.name})


def words_up_to(alphabet: Sequence[str], max_len: int) -> List[Word]:
    words: List[Word] = []
    for n in range(max_len + 1):
        words.extend(itertools.product(alphabet, repeat=n))
    return words


# ---------------------------------------------------------------------------
# builders


def build_OB(delta: object, max_len: int, field: Optional[FieldSpec] = None) -> DiagramPresentation:
    field = field or FieldSpec.rationals()
    rules = OrientedBrauerRules(field, LoopEvalParams(delta=field.element(delta)))
    logger.info(f"Building OB(δ={field.format(field.element(delta))}) over {field.name} up to length {max_len}")
    return DiagramPresentation(f"OB({field.format(field.element(delta))})", field, rules, max_len)


def build_MO(delta: object, t: object, max_len: int, field: Optional[FieldSpec] = None) -> DiagramPresentation:
    field = field or FieldSpec.rationals()
    params = LoopEvalParams(delta=field.element(delta), t=field.element(t))
    rules = MarkedBrauerRules(field, params)
    name = f"MO({field.format(params.delta)},{field.format(params.t)})"
    logger.info(f"Building {name} over {field.name} up to length {max_len}")
    return DiagramPresentation(name, field, rules, max_len)


def build_EN(deltas: Sequence[object], max_len: int, max_dots: int,
             field: Optional[FieldSpec] = None) -> DiagramPresentation:
    field = field or FieldSpec.rationals()
    if max_dots < 0:
        raise ValueError("max_dots must be non-negative")
    values = tuple(field.element(d) for d in deltas)
    rules = DottedBrauerRules(field, LoopEvalParams(delta=values[0] if values else 0, deltas=values))
    name = f"EN({','.join(field.format(v) for v in values)})"
    logger.info(f"Building {name} over {field.name} up to length {max_len} with {max_dots} dots")
    return DiagramPresentation(name, field, rules, max_len, max_dots)


def build_Seq(max_len: int, index_bound: int, field: Optional[FieldSpec] = None) -> DiagramPresentation:
    field = field or FieldSpec.rationals()
    if index_bound < 0:
        raise ValueError("index_bound must be non-negative")
    rules = SequenceRules(field, LoopEvalParams(), index_bound)
    logger.info(f"Building Seq with |i| ≤ {index_bound} up to length {max_len}")
    return DiagramPresentation(f"Seq({index_bound})", field, rules, max_len)


# ---------------------------------------------------------------------------
# distinguished morphisms


def mu_morphism(C: DiagramPresentation) -> MorphismExpr:
    """The unique diagram • → ■ of the marked category."""
    if C.family != "MO":
        raise ValueError("μ lives in the marked category")
    (d,) = C.hom_basis((BLACK,), (FILLED,))
    return C.morphism(d)


def iota_morphism(C: DiagramPresentation) -> MorphismExpr:
    """ι = (co_{X0}, X0 ⊗ ev_{X1} ⊗ X1): 𝟙 ⊕ X0X2X1X1 → X0X1."""
    if C.family != "Seq":
        raise ValueError("ι lives in the sequence category")
    x0, x1, x2 = seq_letter(0), seq_letter(1), seq_letter(2)
    cup = co_diagram(C.rules, (x0,))
    middle = C.diagram((x0, x2, x1, x1), (x0, x1), [(0, 4), (1, 2), (3, 5)])
    return MorphismExpr(AddObject.of((), (x0, x2, x1, x1)), AddObject.of((x0, x1)),
                        (({cup: C.field.one}, {middle: C.field.one}),))


def frobenius_test_morphism(C: DiagramPresentation, p: int) -> MorphismExpr:
    """f: ∘^p •^p → (∘^p •^p)^{2p-2} with components (1 − s_i) on either block."""
    if C.family != "OB":
        raise ValueError("The Frobenius test morphism lives in the oriented Brauer category")
    word = (WHITE,) * p + (BLACK,) * p
    C.check_word(word)
    ident = identity_diagram(word, False)
    rows = []
    for offset in (0, p):
        for i in range(p - 1):
            perm = list(range(2 * p))
            perm[offset + i], perm[offset + i + 1] = perm[offset + i + 1], perm[offset + i]
            swap = permutation_diagram(word, perm)
            rows.append(({ident: C.field.one, swap: C.field.element(-1)},))
    return MorphismExpr(AddObject.of(word), AddObject((word,) * len(rows)), tuple(rows))


# ---------------------------------------------------------------------------
# the tensor-contraction functor V ↦ kⁿ


def contraction_matrix(field: FieldSpec, diagram: PairingDiagram, n: int) -> ExactMatrix:
    """Matrix of a diagram acting on tensor powers of kⁿ; leftmost factor most significant."""
    a, b = len(diagram.source), len(diagram.target)
    arr = np.zeros((n ** b, n ** a), dtype=np.int64)
    for values in itertools.product(range(n), repeat=len(diagram.pairs)):
        index = [0] * (a + b)
        for (u, v), value in zip(diagram.pairs, values):
            index[u] = value
            index[v] = value
        col = 0
        for i in range(a):
            col = col * n + index[i]
        row = 0
        for j in range(b):
            row = row * n + index[a + j]
        arr[row, col] = 1
    return ExactMatrix(field, arr)


def tensor_contraction_functor(C: DiagramPresentation, n: int, name: Optional[str] = None) -> FunctorSpec:
    """V ↦ kⁿ, V* ↦ kⁿ with the standard pairing; a loop evaluates to n."""
    if C.family != "OB":
        raise ValueError("Tensor contraction is defined for oriented Brauer windows")
    delta = C.rules.params.delta
    if C.field.element(n) != C.field.element(delta):
        raise ValueError(f"Loops evaluate to {C.field.format(delta)} but dim V = {n}")
    dims = LazyImages(lambda word: n ** len(word))
    images = LazyImages(lambda d: contraction_matrix(C.field, d, n))
    return FunctorSpec(name or f"V={n}", C.field, dims, images, monoidal=True)
