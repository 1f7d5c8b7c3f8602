import typing

from .arithmetic.divample import (
    DivisionAmpleSet,
    TorusReport,
    eds_divample_create,
    explicit_divample_create,
    torus_rank_analysis,
)
from .arithmetic.ecurve import EllipticCurve, curve_create
from .arithmetic.nfcore import NumberField, field_create
from .utils import errors, load
from .utils.load import Caps, WorkbenchConfig


class Workbench:
    """Fields, curves and division-ample sets of a configuration, built on first use.

    Attributes
    ----------
    config : WorkbenchConfig
        The parsed configuration.
    caps : Caps
        Caps of the run: the configured caps with the overrides applied.

    Methods
    -------
    field(label: str) -> NumberField
        The configured number field `label`.
    curve(label: str) -> EllipticCurve
        The configured curve `label`, validated and with its torsion order.
    divample(label: str) -> DivisionAmpleSet
        The configured division-ample set `label`.
    pipeline(field_label: str) -> tuple[NumberField, EllipticCurve, DivisionAmpleSet]
        The field, curve and set used for the main theorem over `field_label`.
    torus(label: str) -> TorusReport
        Rank analysis of the configured torus triple `label`.
    """  # noqa E501

    def __init__(
        self,
        config: typing.Union[None, str, WorkbenchConfig] = None,
        **cap_overrides: typing.Any,
    ):
        if isinstance(config, WorkbenchConfig):
            self.config: WorkbenchConfig = config
        else:
            self.config = load.read_config(config)
        self.caps: Caps = self.config.caps.replace(**cap_overrides)

        self._fields: dict[str, NumberField] = dict()
        self._curves: dict[str, EllipticCurve] = dict()
        self._divample: dict[str, DivisionAmpleSet] = dict()
        pass

    def _lookup(self, block: dict[str, typing.Any], label: str, kind: str) -> typing.Any:
        try:
            return block[label]
        except KeyError:
            raise errors.ConfigParse(
                f"{kind} '{label}' is not declared in {self.config.source}"
            )

    def field(self, label: str) -> NumberField:
        try:
            return self._fields[label]
        except KeyError:
            pass
        entry = self._lookup(self.config.fields, label, "field")
        K = field_create(entry.min_poly, entry.class_number, label=entry.label)
        self._fields[label] = K
        return K

    def curve(self, label: str) -> EllipticCurve:
        try:
            return self._curves[label]
        except KeyError:
            pass
        entry = self._lookup(self.config.curves, label, "curve")
        E = curve_create(
            self.field(entry.field),
            entry.a,
            entry.generator,
            rank_assertion=entry.rank_assertion,
            rank_assertions=entry.rank_assertions,
            label=entry.label,
            tracked_primes=entry.tracked_primes,
            max_index=self.caps.max_index,
            torsion_cap=self.caps.torsion_cap,
            stability=entry.stability,
        )
        self._curves[label] = E
        return E

    def divample(self, label: str) -> DivisionAmpleSet:
        try:
            return self._divample[label]
        except KeyError:
            pass
        entry = self._lookup(self.config.divample, label, "divample")
        K = self.field(entry.field)
        if entry.curve is not None:
            A = eds_divample_create(
                self.curve(entry.curve), K, index=entry.index, scan_cap=self.caps.scan_cap
            )
        else:
            assert entry.elements is not None
            A = explicit_divample_create(
                K,
                entry.elements,
                entry.ell if entry.ell is not None else K.degree,
                provenance=entry.provenance,
            )
        self._divample[label] = A
        return A

    def pipeline(
        self, field_label: str
    ) -> tuple[NumberField, EllipticCurve, DivisionAmpleSet]:
        entry = self._lookup(self.config.pipelines, field_label, "pipeline")
        return self.field(entry.field), self.curve(entry.curve), self.divample(entry.divample)

    def torus(self, label: str) -> TorusReport:
        entry = self._lookup(self.config.tori, label, "torus")
        return torus_rank_analysis(self.field(entry.K), self.field(entry.L), self.field(entry.KL))
