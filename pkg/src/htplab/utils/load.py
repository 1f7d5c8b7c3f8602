# import dependencies
import dataclasses
import json
import pathlib
import typing
import warnings
from dataclasses import dataclass, field
from importlib import resources

from . import errors
from .constants import (
    DEF_CAPS,
    DEF_CONFIG_RESOURCE,
    DEF_FALLBACK_ELEMENTS,
    DEF_FALLBACK_INDICES,
    DEF_MIN_PRECISION,
    DEF_OUTPUT_FORMAT,
    DEF_OUTPUT_FORMATS,
    DEF_TRACKED_PRIMES,
)
from .funcs import parse_int


@dataclass(frozen=True)
class Caps:
    """Search and size caps shared by all computations of a run."""

    max_index: int = DEF_CAPS["max_index"]
    scan_cap: int = DEF_CAPS["scan_cap"]
    search_cap: int = DEF_CAPS["search_cap"]
    generator_cap: int = DEF_CAPS["generator_cap"]
    precision: int = DEF_CAPS["precision"]
    precision_cap: int = DEF_CAPS["precision_cap"]
    torsion_cap: int = DEF_CAPS["torsion_cap"]
    order_cap: int = DEF_CAPS["order_cap"]
    fallback_indices: int = DEF_FALLBACK_INDICES
    fallback_elements: int = DEF_FALLBACK_ELEMENTS

    def replace(self, **overrides: typing.Any) -> "Caps":
        """Copy with the given caps changed; None values are ignored."""
        return dataclasses.replace(
            self, **{k: v for k, v in overrides.items() if v is not None}
        )

    def to_dict(self) -> dict[str, int]:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class FieldConfig:
    label: str
    min_poly: list[int]
    class_number: int


@dataclass(frozen=True)
class CurveConfig:
    label: str
    field: str
    a: list[typing.Any]
    generator: list[typing.Any]
    rank_assertion: str = ""
    rank_assertions: dict[str, str] = field(default_factory=dict)
    tracked_primes: list[int] = field(default_factory=lambda: list(DEF_TRACKED_PRIMES))
    stability: str = "empirical"


@dataclass(frozen=True)
class DivampleConfig:
    label: str
    field: str
    curve: typing.Optional[str] = None
    index: typing.Optional[int] = None
    elements: typing.Optional[list[typing.Any]] = None
    ell: typing.Optional[int] = None
    provenance: str = ""


@dataclass(frozen=True)
class TorusConfig:
    label: str
    K: str
    L: str
    KL: str


@dataclass(frozen=True)
class PipelineConfig:
    """Curve and division-ample set used for the main theorem over one field."""

    field: str
    curve: str
    divample: str


@dataclass(frozen=True)
class WorkbenchConfig:
    """A parsed workbench configuration.

    Attributes
    ----------
    fields, curves, divample, tori, pipelines : dict
        Blocks keyed by label (pipelines by field label).
    caps : Caps
        Caps of the run.
    output_format : str
        One of ``text``, ``json``, ``csv``.
    source : str
        Where the configuration was read from.
    """

    fields: dict[str, FieldConfig]
    curves: dict[str, CurveConfig]
    divample: dict[str, DivampleConfig]
    tori: dict[str, TorusConfig]
    pipelines: dict[str, PipelineConfig]
    caps: Caps = field(default_factory=Caps)
    output_format: str = DEF_OUTPUT_FORMAT
    source: str = "<dict>"


def _require(block: dict[str, typing.Any], key: str, where: str) -> typing.Any:
    try:
        return block[key]
    except KeyError:
        raise errors.ConfigParse(f"missing key '{key}' in {where}")


def _int(value: typing.Any, where: str) -> int:
    try:
        return parse_int(value)
    except ValueError:
        raise errors.ConfigParse(f"{where}: {value!r} is not an integer")


def _parse_caps(block: dict[str, typing.Any]) -> Caps:
    values = {}
    for name in Caps.__dataclass_fields__:
        try:
            values[name] = _int(block[name], f"caps.{name}")
        except KeyError:
            continue
    caps = Caps(**values)
    for name, value in caps.to_dict().items():
        if value <= 0:
            raise errors.ConfigParse(f"caps.{name} must be positive, got {value}")
    if not DEF_MIN_PRECISION <= caps.precision <= caps.precision_cap:
        raise errors.ConfigParse(
            f"caps.precision must lie in [{DEF_MIN_PRECISION}, caps.precision_cap], got {caps.precision}"  # noqa E501
        )
    return caps


def parse_config(document: dict[str, typing.Any], source: str = "<dict>") -> WorkbenchConfig:
    """
    Validate a configuration document and build a :class:`WorkbenchConfig`.

    Parameters
    ----------
    document : dict[str, typing.Any]
        The decoded JSON document.
    source : str, optional
        Description of where the document came from, by default "<dict>"

    Returns
    -------
    WorkbenchConfig
        The configuration.

    Raises
    ------
    ConfigParse
        A block is malformed or references an undeclared label.
    """
    if not isinstance(document, dict):
        raise errors.ConfigParse("the configuration must be a JSON object")

    fields: dict[str, FieldConfig] = {}
    for block in document.get("fields", []):
        label = str(_require(block, "label", "field block"))
        min_poly = [_int(c, f"field {label}") for c in _require(block, "min_poly", label)]
        try:
            class_number = _int(block["class_number"], f"field {label}")
        except KeyError:
            class_number = 1
        if class_number < 1:
            raise errors.ConfigParse(f"field {label}: class_number must be positive")
        fields[label] = FieldConfig(label, min_poly, class_number)

    curves: dict[str, CurveConfig] = {}
    for block in document.get("curves", []):
        label = str(_require(block, "label", "curve block"))
        field_label = str(_require(block, "field", f"curve {label}"))
        if field_label not in fields:
            raise errors.ConfigParse(f"curve {label} references undeclared field {field_label}")  # noqa E501
        a = list(_require(block, "a", f"curve {label}"))
        generator = list(_require(block, "generator", f"curve {label}"))
        if len(a) != 5 or len(generator) != 2:
            raise errors.ConfigParse(f"curve {label}: need five coefficients and two coordinates")  # noqa E501
        try:
            tracked = [_int(p, f"curve {label}") for p in block["tracked_primes"]]
        except KeyError:
            tracked = list(DEF_TRACKED_PRIMES)
        try:
            stability = str(block["stability"])
        except KeyError:
            stability = "empirical"
        if stability not in ("empirical", "formula"):
            raise errors.ConfigParse(f"curve {label}: unknown stability mode {stability}")
        curves[label] = CurveConfig(
            label,
            field_label,
            a,
            generator,
            str(block.get("rank_assertion", "")),
            {str(k): str(v) for k, v in block.get("rank_assertions", {}).items()},
            tracked,
            stability,
        )

    divample: dict[str, DivampleConfig] = {}
    for block in document.get("divample", []):
        label = str(_require(block, "label", "divample block"))
        field_label = str(_require(block, "field", f"divample {label}"))
        if field_label not in fields:
            raise errors.ConfigParse(f"divample {label} references undeclared field {field_label}")  # noqa E501
        curve_label = block.get("curve")
        if curve_label is not None and curve_label not in curves:
            raise errors.ConfigParse(f"divample {label} references undeclared curve {curve_label}")  # noqa E501
        elements = block.get("elements")
        if curve_label is None and elements is None:
            raise errors.ConfigParse(f"divample {label} needs a curve or explicit elements")
        index = block.get("index")
        ell = block.get("ell")
        divample[label] = DivampleConfig(
            label,
            field_label,
            curve_label,
            None if index is None else _int(index, f"divample {label}"),
            elements,
            None if ell is None else _int(ell, f"divample {label}"),
            str(block.get("provenance", "")),
        )

    tori: dict[str, TorusConfig] = {}
    for block in document.get("tori", []):
        label = str(_require(block, "label", "torus block"))
        names = [str(_require(block, key, f"torus {label}")) for key in ("K", "L", "KL")]
        for name in names:
            if name not in fields:
                raise errors.ConfigParse(f"torus {label} references undeclared field {name}")  # noqa E501
        tori[label] = TorusConfig(label, *names)

    pipelines: dict[str, PipelineConfig] = {}
    for block in document.get("pipelines", []):
        field_label = str(_require(block, "field", "pipeline block"))
        curve_label = str(_require(block, "curve", f"pipeline {field_label}"))
        set_label = str(_require(block, "divample", f"pipeline {field_label}"))
        if field_label not in fields or curve_label not in curves or set_label not in divample:  # noqa E501
            raise errors.ConfigParse(f"pipeline {field_label} references undeclared labels")
        pipelines[field_label] = PipelineConfig(field_label, curve_label, set_label)

    caps = _parse_caps(document.get("caps", {}))
    output = document.get("output", {})
    try:
        output_format = str(output["format"])
    except KeyError:
        output_format = DEF_OUTPUT_FORMAT
    if output_format not in DEF_OUTPUT_FORMATS:
        raise errors.ConfigParse(f"unknown output format {output_format}")
    return WorkbenchConfig(
        fields, curves, divample, tori, pipelines, caps, output_format, source
    )


def read_config(path: typing.Optional[str] = None) -> WorkbenchConfig:
    """
    Read a workbench configuration from a JSON file.

    | Without a `path` the configuration shipped with the package is used.
    | Integers may be given as JSON numbers or as decimal strings.

    Parameters
    ----------
    path : str, optional
        Path of the JSON file, by default None

    Returns
    -------
    WorkbenchConfig
        The parsed configuration.

    Raises
    ------
    ConfigParse
        The file is missing, is not valid JSON, or fails validation.
    """
    if path is None:
        text = (
            resources.files("htplab").joinpath("data").joinpath(DEF_CONFIG_RESOURCE).read_text()  # noqa E501
        )
        source = f"htplab/data/{DEF_CONFIG_RESOURCE}"
    else:
        file_path = pathlib.Path(path)
        if not file_path.is_file():
            raise errors.ConfigParse(f"configuration file {path} does not exist")
        text = file_path.read_text()
        source = str(file_path)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ConfigParse(f"{source} is not valid JSON: {exc}")
    config = parse_config(document, source)
    if not config.pipelines:
        warnings.warn(f"[LOG] Warning: {source} declares no pipelines; `htp` commands will fail.")  # noqa E501
    return config
