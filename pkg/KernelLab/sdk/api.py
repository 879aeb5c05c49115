import logging
import time
from typing import Callable, Dict, List, Optional

from KernelLab.core.errors import FieldMismatchError, KernelLabError
from KernelLab.core.loader import CategoryBundle, CategoryLoader, parse_morphism, parse_object
from KernelLab.categories.functors import FunctorSpec, functor_to_vector_spaces
from KernelLab.categories.presentation import (
    AddObject,
    CatPresentation,
    MorphismExpr,
    compose,
    hom_space,
)
from KernelLab.homological.complexes import concentrated, kb_hom, two_term
from KernelLab.homological.noy import NoyObject, NoyPresentation, n_image, noy_hom
from KernelLab.evaluators.kernels import (
    Certainty,
    Window,
    canonical_sigma,
    fr_plus_dim,
    make_window,
    monoidal_sigma,
    monoidal_sigma_theta,
    sigma_theta,
    window_morphisms,
)
from KernelLab.evaluators.prexact import FlatKind, VerdictKind, flat_check, mu_nu_check, prexact_report
from KernelLab.evaluators.sites import (
    enumerate_sieves,
    enumerate_topologies,
    homological_topology,
    iota_image_test,
    topology_of_functor,
)
from .config import SessionConfig
from .results import Report, Status, error_report

logger = logging.getLogger(__name__)


class KernelLab:
    """High-level interface: loads the category once and runs commands against it."""

    def __init__(self, config: SessionConfig, loader: Optional[CategoryLoader] = None):
        self.config = config
        self.loader = loader or CategoryLoader(config.data_dir)
        self._bundle: Optional[CategoryBundle] = None
        self._window: Optional[Window] = None

    @property
    def bundle(self) -> CategoryBundle:
        """Lazy load of the configured category."""
        if self._bundle is None:
            bundle = self.loader.load(self.config.category)
            expected = self.config.field_spec
            if expected is not None and expected != bundle.presentation.field:
                raise FieldMismatchError(
                    f"{bundle.presentation.name} is defined over {bundle.presentation.field.name}, "
                    f"not {expected.name}")
            self._bundle = bundle
        return self._bundle

    @property
    def presentation(self) -> CatPresentation:
        return self.bundle.presentation

    @property
    def base(self) -> CatPresentation:
        """The underlying category; for a Noy skeleton, the category it is built on."""
        C = self.presentation
        return C.base if isinstance(C, NoyPresentation) else C

    @property
    def window(self) -> Window:
        if self._window is None:
            self._window = self.config.to_window(self.base, parse_object)
        return self._window

    def functor(self) -> FunctorSpec:
        if not self.config.functor:
            raise KernelLabError(f"{self.config.command} needs --functor")
        return self.bundle.functor(self.config.functor)

    def object(self, text: Optional[str], what: str = "--object") -> AddObject:
        if text is None:
            raise KernelLabError(f"{self.config.command} needs {what}")
        return parse_object(self.base, text)

    def morphism(self, text: Optional[str] = None) -> MorphismExpr:
        text = text if text is not None else self.config.morphism
        if text is None:
            raise KernelLabError(f"{self.config.command} needs --morphism")
        return parse_morphism(self.base, text, self.config.source, self.config.target)

    def morphisms(self) -> List[MorphismExpr]:
        """The given morphism, or every basis morphism between window objects."""
        if self.config.morphism is not None:
            return [self.morphism()]
        return window_morphisms(self.base, self.window)

    def new_report(self, with_window: bool = True) -> Report:
        echo = self.config.window_echo()
        report = Report(self.config.command, echo)
        if with_window:
            W = self.window
            echo["objects"] = W.describe(self.base)
            report.note(W.completeness_reason)
        for note in self.bundle.notes:
            report.note(note)
        return report

    # Commands

    def hom(self) -> Report:
        C = self.base
        x = self.object(self.config.source, "--source")
        y = self.object(self.config.target, "--target")
        space = hom_space(C, x, y)
        report = self.new_report(with_window=False)
        report.add_row(source=x.describe(C), target=y.describe(C), dimension=space.dimension,
                       basis=", ".join(space.basis_labels(C)))
        return report

    def compose(self) -> Report:
        C = self.base
        f = self.morphism()
        result = f
        if self.config.target_morphism is not None:
            g = parse_morphism(C, self.config.target_morphism, f.target, None)
            result = compose(C, g, f)
        report = self.new_report(with_window=False)
        report.add_row(source=result.source.describe(C), target=result.target.describe(C),
                       morphism=result.describe(C))
        return report

    def _noy_target(self) -> NoyObject:
        if self.config.target_morphism is not None:
            return NoyObject(parse_morphism(self.base, self.config.target_morphism))
        return n_image(self.object(self.config.object))

    def noy_hom(self) -> Report:
        C = self.base
        f = NoyObject(self.morphism())
        g = self._noy_target()
        nh = noy_hom(C, f, g)
        report = self.new_report(with_window=False)
        report.add_row(source=f.describe(C), target=g.describe(C), dimension=nh.dimension,
                       basis="; ".join(r.alpha.describe(C) for r in nh.representatives()))
        return report

    def kb_hom(self) -> Report:
        C = self.base
        lo = self.config.degree_lo
        X = two_term(self.morphism(), lo)
        if self.config.target_morphism is not None:
            Y = two_term(parse_morphism(C, self.config.target_morphism), lo)
        else:
            Y = concentrated(self.object(self.config.object), lo)
        hom = kb_hom(C, X, Y)
        report = self.new_report(with_window=False)
        report.add_row(source=X.describe(C), target=Y.describe(C), chain_maps=hom.chain_maps.cols,
                       null_homotopic=hom.homotopies.rank, dimension=hom.dimension)
        return report

    def sigma(self) -> Report:
        C = self.base
        A = self.object(self.config.object)
        report = self.new_report()
        for f in self.morphisms():
            value = canonical_sigma(C, A, f, self.window)
            report.add_row(object=A.describe(C), morphism=f.describe(C), dimension=value.dimension,
                           certainty=value.certainty.value)
            report.flag(value.certainty.value)
        return report

    def sigma_theta(self) -> Report:
        C = self.base
        theta = self.functor()
        A = self.object(self.config.object)
        report = self.new_report(with_window=self.config.morphism is None)
        for f in self.morphisms():
            value = sigma_theta(C, theta, A, f)
            report.add_row(functor=theta.name, object=A.describe(C), morphism=f.describe(C),
                           dimension=value.dimension)
        report.flag(Certainty.EXACT.value)
        return report

    def prexact(self) -> Report:
        C = self.base
        theta = self.functor()
        result = prexact_report(C, theta, self.window, self.morphisms())
        report = self.new_report()
        for v in result.verdicts:
            report.add_row(morphism=v.morphism.describe(C), verdict=v.kind.value,
                           homology=v.homology_dimension,
                           witness=v.witness.describe(C) if v.witness is not None else "",
                           detail=v.detail)
            report.note(v.certificate)
        report.add_row(morphism="(all)", verdict=result.aggregate.value, homology="", witness="", detail=theta.name)
        if result.aggregate == VerdictKind.INCONCLUSIVE:
            report.mark_inconclusive()
        return report

    def flat(self) -> Report:
        C = self.base
        theta = self.functor()
        u = functor_to_vector_spaces(C, theta)
        target_window = make_window(u.target)
        verdict = flat_check(u, self.window, target_window, self.morphisms())
        report = self.new_report()
        report.add_row(functor=theta.name, verdict=verdict.kind.value, checked=verdict.checked,
                       failures=len(verdict.failures), detail=verdict.detail)
        if verdict.kind == FlatKind.INCONCLUSIVE:
            report.mark_inconclusive()
        return report

    def _lattice_notes(self, report: Report, lattice) -> None:
        if not lattice.exhaustive:
            report.flag("sieves-from-coefficients-in-{-1,0,1}")
            report.note(f"sieves over {self.presentation.field.name} are enumerated from "
                        f"coefficient vectors in {{-1, 0, 1}}")
        else:
            report.flag(Certainty.EXACT.value)

    def topologies(self) -> Report:
        C = self.presentation
        lattice = enumerate_sieves(C, self.config.lattice_limit)
        tables = enumerate_topologies(C, lattice, self.config.lattice_limit)
        report = self.new_report(with_window=False)
        noy = C if isinstance(C, NoyPresentation) else None
        for t in tables:
            row = dict(label=t.label, discrete=t.discrete, trivial=t.trivial, covering="; ".join(t.describe(lattice)))
            if noy is not None:
                row["iota_image"] = iota_image_test(noy, t)
            report.add_row(**row)
        if noy is not None:
            image = [t.label for t in tables if iota_image_test(noy, t)]
            report.note(f"image of iota: {{{', '.join(image)}}}")
        self._lattice_notes(report, lattice)
        return report

    def topology_of(self) -> Report:
        C = self.presentation
        theta = self.functor()
        lattice = enumerate_sieves(C, self.config.lattice_limit)
        tables = enumerate_topologies(C, lattice, self.config.lattice_limit)
        report = self.new_report(with_window=False)
        if isinstance(C, NoyPresentation):
            table = homological_topology(C, theta, lattice, tables)
            report.add_row(functor=theta.name, label=table.label or "unmatched",
                           covering="; ".join(table.describe(lattice)), iota_image=iota_image_test(C, table))
        else:
            table = topology_of_functor(C, theta, lattice, tables)
            report.add_row(functor=theta.name, label=table.label or "unmatched",
                           covering="; ".join(table.describe(lattice)))
        self._lattice_notes(report, lattice)
        return report

    def hsigma(self) -> Report:
        C = self.base
        theta = self.functor() if self.config.functor else None
        report = self.new_report()
        for f in self.morphisms():
            value = monoidal_sigma(C, f, self.window)
            row = dict(morphism=f.describe(C), dimension=value.dimension, certainty=value.certainty.value)
            if theta is not None:
                row["functor"] = theta.name
                row["theta_dimension"] = monoidal_sigma_theta(C, theta, f).dimension
            report.add_row(**row)
            report.flag(value.certainty.value)
        return report

    def mu_nu(self) -> Report:
        C = self.base
        theta = self.functor()
        unit = self.object(self.config.object) if self.config.object else None
        result = mu_nu_check(C, theta, self.window, self.morphisms(), unit)
        report = self.new_report()
        for row in result.rows:
            report.add_row(morphism=row.morphism.describe(C), noy=row.noy_dimension, sigma=row.sigma_dimension,
                           kb=row.kb_dimension, agree=row.agree)
        if result.discrepancies:
            report.status = Status.ERROR
            report.note(f"{result.discrepancies} morphisms with disagreeing kernel descriptions")
        return report

    def fr_plus(self) -> Report:
        field = self.config.field_spec or self.presentation.field
        if not field.is_prime_field:
            raise FieldMismatchError("fr-plus needs a prime field, as in --field F2")
        top = self.config.window_len if self.config.window_len is not None else 3
        report = Report(self.config.command, {"field": field.name, "window_len": top})
        for n in range(top + 1):
            report.add_row(p=field.p, n=n, dimension=fr_plus_dim(field.p, n))
        report.flag(Certainty.EXACT.value)
        return report

    def handlers(self) -> Dict[str, Callable[[], Report]]:
        return {
            "hom": self.hom,
            "compose": self.compose,
            "noy-hom": self.noy_hom,
            "kb-hom": self.kb_hom,
            "sigma": self.sigma,
            "sigma-theta": self.sigma_theta,
            "prexact": self.prexact,
            "flat": self.flat,
            "topologies": self.topologies,
            "topology-of": self.topology_of,
            "hsigma": self.hsigma,
            "mu-nu": self.mu_nu,
            "fr-plus": self.fr_plus,
        }

    def run(self) -> Report:
        start = time.perf_counter()
        report = self.handlers()[self.config.command]()
        logger.info(f"{self.config.command} finished in {time.perf_counter() - start:.3f}s "
                    f"with status {report.status.value}")
        return report


def run_command(config: SessionConfig, loader: Optional[CategoryLoader] = None) -> Report:
    """Run one command; library errors become an error report with exit code 1."""
    try:
        return KernelLab(config, loader).run()
    except (KernelLabError, FileNotFoundError) as exc:
        logger.error(f"{config.command} failed: {exc}")
        return error_report(config.command, str(exc), config.window_echo())

