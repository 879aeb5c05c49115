"""Category description files.

A ``.cat`` file is plain text: top-level ``key = value`` lines followed by
sections. Tables are given by explicit structure constants; infinite
diagram categories and Noy skeletons by a ``generate`` directive.

    name = dualnumbers
    field = Q

    [objects]
    R

    [hom R R]
    id x

    [identity R]
    id

    [compose]
    x x = 0          # g f = g∘f

    [functor theta_k2]
    dims R = 2
    x = [0 1; 0 0]
"""

from dataclasses import dataclass, field as dataclass_field
import logging
import os
from pathlib import Path
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from KernelLab.core.errors import CategoryFileError, KernelLabError
from KernelLab.core.fields import FieldSpec
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    MorphismExpr,
    TableMonoidal,
    TablePresentation,
    compose,
    identity_morphism,
    linear_combination,
    morphism_from_terms,
    truncated_polynomial,
    validate_category,
)
from KernelLab.categories.functors import FunctorSpec, functor_from_matrices, validate_functor
from KernelLab.homological.noy import NoyObject, n_image, noy_presentation
from KernelLab.categories.diagrams import (
    DiagramPresentation,
    build_EN,
    build_MO,
    build_OB,
    build_Seq,
    format_word,
    frobenius_test_morphism,
    iota_morphism,
    mu_morphism,
    parse_word,
    tensor_contraction_functor,
)

logger = logging.getLogger(__name__)

DEFAULT_DATA_DIR = Path(__file__).resolve().parent.parent / "data"

_HEADER = re.compile(r"\[\s*([A-Za-z][\w-]*)\s*(.*?)\s*\]$")
_IDENT = re.compile(r"[A-Za-z_][\w^']*$")


@dataclass
class CategoryBundle:
    """A parsed file: the presentation, its functors and, for Noy skeletons, the base bundle."""

    presentation: CatPresentation
    functors: Dict[str, FunctorSpec] = dataclass_field(default_factory=dict)
    base: Optional["CategoryBundle"] = None
    path: Optional[Path] = None
    notes: List[str] = dataclass_field(default_factory=list)

    def functor(self, name: str) -> FunctorSpec:
        if name in self.functors:
            return self.functors[name]
        if self.base is not None:
            return self.base.functor(name)
        known = ", ".join(sorted(self.functors)) or "none"
        raise KernelLabError(f"Unknown functor {name!r} on {self.presentation.name} (known: {known})")


@dataclass
class _Section:
    kind: str
    args: str
    line: int
    lines: List[Tuple[int, str]] = dataclass_field(default_factory=list)


def _read_sections(text: str) -> Tuple[Dict[str, Tuple[int, str]], List[_Section]]:
    top: Dict[str, Tuple[int, str]] = {}
    sections: List[_Section] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER.match(line)
        if header:
            sections.append(_Section(header.group(1).lower(), header.group(2), number))
        elif sections:
            sections[-1].lines.append((number, line))
        else:
            key, sep, value = line.partition("=")
            if not sep:
                raise CategoryFileError([(number, f"Expected 'key = value', got {line!r}")])
            top[key.strip().lower()] = (number, value.strip())
    return top, sections


# ---------------------------------------------------------------------------
# morphism expressions


def _split_top(text: str, separators: str) -> List[str]:
    """Split at separators outside parentheses and brackets; signs stay with their term."""
    parts, depth, current = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in separators:
            if current.strip() or ch not in "+-":
                parts.append(current)
            current = ch if ch in "+-" else ""
            continue
        current += ch
    parts.append(current)
    return [p.strip() for p in parts if p.strip()]


def parse_object(C: CatPresentation, text: str) -> AddObject:
    """``R``, ``R + L`` or ``0`` for tables; words such as ``∘•`` for diagram windows."""
    text = text.strip()
    if text in ("0", "zero"):
        return AddObject.zero()
    pieces = [p.strip() for p in text.split("+")]
    if isinstance(C, DiagramPresentation):
        return AddObject(tuple(C.check_word(parse_word(p)) for p in pieces))
    names = {str(x): x for x in C.objects}
    missing = [p for p in pieces if p not in names]
    if missing:
        raise KernelLabError(f"Unknown object {missing[0]!r} in {C.name}")
    return AddObject(tuple(names[p] for p in pieces))


def _builtin(C: CatPresentation, name: str, arg: Optional[str]) -> MorphismExpr:
    if name == "id":
        if arg is None:
            raise KernelLabError("id needs an object, as in id(R)")
        return identity_morphism(C, parse_object(C, arg))
    if isinstance(C, DiagramPresentation):
        if name == "mu":
            return mu_morphism(C)
        if name == "iota":
            return iota_morphism(C)
        if name == "frobenius":
            return frobenius_test_morphism(C, int(arg or 2))
    if name in ("ev", "co") and arg is not None:
        M = C.require_monoidal()
        (x,) = parse_object(C, arg)
        terms = M.ev(x) if name == "ev" else M.co(x)
        pair = M.tensor_objects(M.dual(x), x) if name == "ev" else M.tensor_objects(x, M.dual(x))
        source, target = (pair, M.unit) if name == "ev" else (M.unit, pair)
        return MorphismExpr(AddObject.of(source), AddObject.of(target), ((dict(terms),),))
    raise KernelLabError(f"Unknown morphism {name!r} in {C.name}")


def _atom(C: CatPresentation, text: str) -> MorphismExpr:
    call = re.fullmatch(r"([A-Za-z_]\w*)\s*(?:\((.*)\))?", text)
    if isinstance(C, TablePresentation) and text in {str(b) for b in C.basis_ids()}:
        (b,) = [b for b in C.basis_ids() if str(b) == text]
        return morphism_from_terms(C, C.source(b), C.target(b), {b: 1})
    if call:
        return _builtin(C, call.group(1), call.group(2))
    raise KernelLabError(f"Cannot read morphism {text!r}")


def _linear(C: CatPresentation, text: str, source: Optional[AddObject], target: Optional[AddObject]) -> MorphismExpr:
    terms = []
    for part in _split_top(text, "+-"):
        sign = -1 if part.startswith("-") else 1
        body = part.lstrip("+-").strip()
        coefficient: Any = 1
        head, star, tail = body.partition("*")
        if star:
            coefficient = C.field.parse_scalar(head.strip())
            body = tail.strip()
        if body == "0":
            continue
        terms.append((C.field.mul(C.field.element(sign), C.field.element(coefficient)), _atom(C, body)))
    if not terms:
        if source is None or target is None:
            raise KernelLabError(f"The zero morphism {text!r} needs a source and a target")
        return MorphismExpr.zero(source, target)
    src = source if source is not None else terms[0][1].source
    tgt = target if target is not None else terms[0][1].target
    return linear_combination(C, terms, src, tgt)


def parse_morphism(C: CatPresentation, text: str, source: Optional[Any] = None,
                   target: Optional[Any] = None) -> MorphismExpr:
    """Linear combinations of basis ids (``2*x - id``) composed with ``;`` (``a ; b`` is a∘b)."""
    src = parse_object(C, source) if isinstance(source, str) else source
    tgt = parse_object(C, target) if isinstance(target, str) else target
    factors = _split_top(text, ";")
    if len(factors) == 1:
        return _linear(C, factors[0], src, tgt)
    out = _linear(C, factors[-1], src, None)
    for k, factor in enumerate(reversed(factors[:-1])):
        outer = _linear(C, factor, out.target, tgt if k == len(factors) - 2 else None)
        out = compose(C, outer, out)
    return out


def _lincomb(field: FieldSpec, text: str, known: Dict[str, Any]) -> Dict[Any, Any]:
    out: Dict[Any, Any] = {}
    for part in _split_top(text, "+-"):
        sign = -1 if part.startswith("-") else 1
        body = part.lstrip("+-").strip()
        head, star, tail = body.partition("*")
        coefficient = field.parse_scalar(head.strip()) if star else field.one
        name = tail.strip() if star else body
        if name == "0":
            continue
        if name not in known:
            raise KeyError(name)
        b = known[name]
        out[b] = field.add(out.get(b, field.zero), field.mul(field.element(sign), coefficient))
    return {b: c for b, c in out.items() if c != 0}


def _matrix(field: FieldSpec, text: str) -> List[List[Any]]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"Matrices are written [a b; c d], got {text!r}")
    body = body[1:-1].strip()
    if not body:
        return []
    return [[field.parse_scalar(x) for x in re.split(r"[,\s]+", row.strip()) if x] for row in body.split(";")]


# ---------------------------------------------------------------------------
# tables


def _parse_table(name: str, field: FieldSpec, sections: Sequence[_Section],
                 errors: List[Tuple[Optional[int], str]]) -> Optional[TablePresentation]:
    objects: List[str] = []
    homs: Dict[Tuple[str, str], List[str]] = {}
    products: Dict[Tuple[str, str], Dict[str, Any]] = {}
    identities: Dict[str, Dict[str, Any]] = {}
    undefined: List[Tuple[str, str]] = []
    compose_line: Optional[int] = None
    known: Dict[str, str] = {}
    for sec in sections:
        if sec.kind == "objects":
            for _, line in sec.lines:
                objects.extend(line.split())
        elif sec.kind == "hom":
            ends = sec.args.split()
            if len(ends) != 2:
                errors.append((sec.line, "hom sections read [hom X Y]"))
                continue
            basis = [b for _, line in sec.lines for b in line.split()]
            homs[(ends[0], ends[1])] = basis
            for b in basis:
                known[b] = b
    for sec in sections:
        if sec.kind == "identity":
            try:
                identities[sec.args] = _lincomb(field, " ".join(l for _, l in sec.lines), known)
            except KeyError as exc:
                errors.append((sec.line, f"Unknown basis morphism {exc.args[0]!r} in identity"))
        elif sec.kind == "compose":
            compose_line = sec.line
            for number, line in sec.lines:
                lhs, sep, rhs = line.partition("=")
                pair = lhs.split()
                if not sep or len(pair) != 2:
                    errors.append((number, f"Expected 'g f = expression', got {line!r}"))
                    continue
                if any(b not in known for b in pair):
                    errors.append((number, f"Unknown basis morphism in {lhs.strip()!r}"))
                    continue
                if rhs.strip() == "undefined":
                    undefined.append((pair[0], pair[1]))
                    continue
                try:
                    products[(pair[0], pair[1])] = _lincomb(field, rhs, known)
                except (KeyError, ValueError) as exc:
                    errors.append((number, f"Cannot read {rhs.strip()!r}: {exc}"))
    for (x, y) in homs:
        for end in (x, y):
            if end not in objects:
                errors.append((None, f"hom section mentions unknown object {end!r}"))
    if errors:
        return None
    monoidal = _parse_monoidal(field, sections, objects, known, errors)
    try:
        C = TablePresentation(name, field, objects, homs, products, identities, monoidal, undefined)
    except ValueError as exc:
        errors.append((None, str(exc)))
        return None
    missing = C.missing_products()
    for g, f in missing:
        errors.append((compose_line, f"No structure constant for {g} {f}"))
    for x in objects:
        if x not in identities:
            errors.append((None, f"No identity section for object {x}"))
    return None if errors else C


def _parse_monoidal(field: FieldSpec, sections: Sequence[_Section], objects: Sequence[str], known: Dict[str, str],
                    errors: List[Tuple[Optional[int], str]]) -> Optional[TableMonoidal]:
    tensor = [s for s in sections if s.kind == "tensor"]
    if not tensor:
        return None
    unit = None
    obj_table, basis_table, braidings = {}, {}, {}
    duals, evs, cos = {}, {}, {}
    for sec in tensor:
        for number, line in sec.lines:
            lhs, _, rhs = (p.strip() for p in line.partition("="))
            words = lhs.split()
            try:
                if words == ["unit"]:
                    unit = rhs
                elif words and words[0] == "braid" and len(words) == 3:
                    braidings[(words[1], words[2])] = _lincomb(field, rhs, known)
                elif len(words) == 2 and all(w in objects for w in words):
                    obj_table[(words[0], words[1])] = rhs
                elif len(words) == 2:
                    basis_table[(words[0], words[1])] = _lincomb(field, rhs, known)
                else:
                    errors.append((number, f"Cannot read tensor line {line!r}"))
            except KeyError as exc:
                errors.append((number, f"Unknown basis morphism {exc.args[0]!r}"))
    for sec in (s for s in sections if s.kind == "dual"):
        for number, line in sec.lines:
            lhs, _, rhs = (p.strip() for p in line.partition("="))
            words = lhs.split()
            try:
                if len(words) == 1:
                    duals[words[0]] = rhs
                elif words[0] == "ev":
                    evs[words[1]] = _lincomb(field, rhs, known)
                elif words[0] == "co":
                    cos[words[1]] = _lincomb(field, rhs, known)
                else:
                    errors.append((number, f"Cannot read dual line {line!r}"))
            except KeyError as exc:
                errors.append((number, f"Unknown basis morphism {exc.args[0]!r}"))
    if unit is None:
        errors.append((tensor[0].line, "tensor section needs 'unit = X'"))
        return None
    return TableMonoidal(unit, obj_table, basis_table, braidings, duals, evs, cos)


# ---------------------------------------------------------------------------
# generation directives


def _generate(top: Dict[str, Tuple[int, str]], field: FieldSpec, loader: "CategoryLoader",
              sections: Sequence[_Section], errors: List[Tuple[Optional[int], str]]
              ) -> Tuple[Optional[CatPresentation], Optional[CategoryBundle]]:
    line, kind = top["generate"]

    def value(key: str, default: Optional[str] = None) -> str:
        if key in top:
            return top[key][1]
        if default is None:
            raise CategoryFileError([(line, f"generate = {kind} needs '{key} = …'")])
        return default

    kind_key = kind.strip().lower()
    if kind_key == "ob":
        return build_OB(field.parse_scalar(value("delta")), int(value("max_len", "6")), field), None
    if kind_key == "mo":
        return build_MO(field.parse_scalar(value("delta")), field.parse_scalar(value("t")),
                        int(value("max_len", "4")), field), None
    if kind_key == "en":
        deltas = [field.parse_scalar(d) for d in re.split(r"[,\s]+", value("deltas")) if d]
        return build_EN(deltas, int(value("max_len", "4")), int(value("max_dots", "1")), field), None
    if kind_key == "seq":
        return build_Seq(int(value("max_len", "4")), int(value("index_bound", "2")), field), None
    if kind_key in ("truncated-polynomial", "truncated_polynomial"):
        return truncated_polynomial(field, int(value("degree")), top.get("name", (0, None))[1]), None
    if kind_key == "noy":
        base = loader.load(value("base"))
        C = base.presentation
        skeleton = {}
        for sec in (s for s in sections if s.kind == "skeleton"):
            for number, text in sec.lines:
                name, _, rhs = (p.strip() for p in text.partition("="))
                try:
                    if rhs.startswith("N "):
                        skeleton[name] = n_image(parse_object(C, rhs[2:]), name)
                    else:
                        expr, _, ends = rhs.partition(":")
                        src, _, tgt = ends.partition("->")
                        m = parse_morphism(C, expr.strip(), src.strip(), tgt.strip())
                        skeleton[name] = NoyObject(m, name)
                except KernelLabError as exc:
                    errors.append((number, str(exc)))
        if not skeleton:
            errors.append((line, "generate = noy needs a [skeleton] section"))
            return None, base
        return noy_presentation(C, skeleton, top.get("name", (0, None))[1]), base
    errors.append((line, f"Unknown generation directive {kind!r}"))
    return None, None


def _parse_functors(C: CatPresentation, sections: Sequence[_Section],
                    errors: List[Tuple[Optional[int], str]]) -> Dict[str, FunctorSpec]:
    functors = {}
    basis = {str(b): b for b in C.basis_ids()} if isinstance(C, TablePresentation) else {}
    objects = {str(x): x for x in C.objects} if C.is_finite else {}
    for sec in (s for s in sections if s.kind == "functor"):
        name = sec.args or f"functor{len(functors)}"
        dims, images, monoidal, contraction = {}, {}, False, None
        for number, line in sec.lines:
            lhs, _, rhs = (p.strip() for p in line.partition("="))
            words = lhs.split()
            try:
                if words[0] == "dims" and len(words) == 2:
                    dims[objects.get(words[1], words[1])] = int(rhs)
                elif words == ["monoidal"]:
                    monoidal = rhs.lower() in ("true", "yes", "1")
                elif words == ["contraction"]:
                    contraction = int(rhs)
                elif len(words) == 1 and words[0] in basis:
                    images[basis[words[0]]] = _matrix(C.field, rhs)
                else:
                    errors.append((number, f"Cannot read functor line {line!r}"))
            except ValueError as exc:
                errors.append((number, str(exc)))
        if contraction is not None:
            if not isinstance(C, DiagramPresentation):
                errors.append((sec.line, "contraction functors need an oriented Brauer window"))
                continue
            try:
                functors[name] = tensor_contraction_functor(C, contraction, name)
            except ValueError as exc:
                errors.append((sec.line, str(exc)))
            continue
        missing = [str(b) for b in basis.values() if b not in images]
        if missing:
            errors.append((sec.line, f"Functor {name} has no matrix for {', '.join(missing)}"))
            continue
        try:
            theta = functor_from_matrices(C, name, dims, images, monoidal)
        except (KeyError, ValueError) as exc:
            errors.append((sec.line, f"Functor {name}: {exc}"))
            continue
        report = validate_functor(C, theta)
        if not report.valid:
            errors.extend((sec.line, v) for v in report.violations)
            continue
        functors[name] = theta
    return functors


def parse_bundle(text: str, path: Optional[Path] = None, loader: Optional["CategoryLoader"] = None) -> CategoryBundle:
    loader = loader or CategoryLoader()
    top, sections = _read_sections(text)
    errors: List[Tuple[Optional[int], str]] = []
    where = str(path) if path else None
    name = top.get("name", (0, path.stem if path else "category"))[1]
    try:
        field = FieldSpec.parse(top["field"][1]) if "field" in top else FieldSpec.rationals()
    except ValueError as exc:
        raise CategoryFileError([(top["field"][0], str(exc))], where)

    base = None
    if "generate" in top:
        if "field" not in top and "base" in top:
            field = loader.load(top["base"][1]).presentation.field
        try:
            C, base = _generate(top, field, loader, sections, errors)
        except (ValueError, KernelLabError) as exc:
            if isinstance(exc, CategoryFileError):
                raise CategoryFileError(exc.errors, where)
            raise CategoryFileError([(top["generate"][0], str(exc))], where)
    else:
        C = _parse_table(name, field, sections, errors)
    if C is None or errors:
        raise CategoryFileError(errors, where)

    report = validate_category(C)
    if not report.valid:
        raise CategoryFileError([(None, v) for v in report.violations], where)
    functors = _parse_functors(C, sections, errors)
    if errors:
        raise CategoryFileError(errors, where)
    notes = []
    if "assumption" in top:
        notes.append(top["assumption"][1])
    logger.info(f"Loaded {C.name} over {C.field.name} with functors {sorted(functors)}")
    return CategoryBundle(C, functors, base, path, notes)


def parse_category_file(path: Union[str, Path]) -> CatPresentation:
    """Read and validate a category file; errors carry line numbers."""
    return CategoryLoader().load(str(path)).presentation


class CategoryLoader:
    """Resolves category names against a data directory and caches parsed bundles."""

    def __init__(self, data_dir: Optional[Union[str, Path]] = None):
        self.data_dir = Path(data_dir or os.environ.get("KERNELLAB_DATA_DIR") or DEFAULT_DATA_DIR)
        self._cache: Dict[Path, CategoryBundle] = {}

    def resolve(self, name: str) -> Path:
        candidate = self.data_dir / f"{name}.cat"
        if candidate.exists():
            return candidate
        path = Path(name)
        if path.exists():
            return path
        raise FileNotFoundError(f"No category file for {name!r} (looked in {self.data_dir})")

    def load(self, name: str) -> CategoryBundle:
        path = self.resolve(name).resolve()
        if path not in self._cache:
            logger.debug(f"Parsing {path}")
            self._cache[path] = parse_bundle(path.read_text(encoding="utf-8"), path, self)
        return self._cache[path]

    def available(self) -> List[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.cat"))


# ---------------------------------------------------------------------------
# export


def _safe(name: str) -> bool:
    return bool(_IDENT.match(name))


def _format_lincomb(C: CatPresentation, terms: Dict[Any, Any], names: Dict[Any, str]) -> str:
    if not terms:
        return "0"
    parts = []
    for b in sorted(terms, key=lambda b: names[b]):
        c = C.field.format(terms[b])
        parts.append(names[b] if c == "1" else f"{c}*{names[b]}")
    return " + ".join(parts).replace("+ -", "- ")


def export_category(C: CatPresentation, objects: Optional[Sequence[Any]] = None) -> str:
    """Write a finite part of any presentation in the category-file format."""
    if isinstance(C, DiagramPresentation):
        C = C.to_table(objects)
        objects = None
    objs = list(objects if objects is not None else C.objects)
    obj_names = {x: str(x) if isinstance(x, str) and _safe(x) else f"o{k}" for k, x in enumerate(objs)}
    basis = [b for x in objs for y in objs for b in C.hom_basis(x, y)]
    names = {b: str(b) if isinstance(b, str) and _safe(b) else f"d{k}" for k, b in enumerate(basis)}
    undefined = getattr(C, "undefined", frozenset())

    out = [f"name = {C.name}", f"field = {C.field.name}", "", "[objects]"]
    for x in objs:
        label = C.describe_object(x) if not isinstance(x, tuple) else format_word(x)
        out.append(f"{obj_names[x]}" + (f"  # {label}" if obj_names[x] != str(x) else ""))
    for x in objs:
        for y in objs:
            hb = C.hom_basis(x, y)
            if hb:
                out += ["", f"[hom {obj_names[x]} {obj_names[y]}]", " ".join(names[b] for b in hb)]
    for x in objs:
        out += ["", f"[identity {obj_names[x]}]", _format_lincomb(C, dict(C.identity(x)), names)]
    out += ["", "[compose]"]
    for x in objs:
        for y in objs:
            for z in objs:
                for f in C.hom_basis(x, y):
                    for g in C.hom_basis(y, z):
                        if (g, f) in undefined:
                            out.append(f"{names[g]} {names[f]} = undefined")
                        else:
                            out.append(f"{names[g]} {names[f]} = {_format_lincomb(C, dict(C.compose_basis(g, f)), names)}")
    return "\n".join(out) + "\n"
