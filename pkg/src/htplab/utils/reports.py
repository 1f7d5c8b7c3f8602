# import dependencies
import json
import typing
from dataclasses import dataclass, field

import pandas as pd

from .constants import DEF_EXIT_OK, DEF_OUTPUT_FORMATS


def _jsonable(value: typing.Any) -> typing.Any:
    if isinstance(value, pd.DataFrame):
        return [_jsonable(row) for row in value.to_dict(orient="records")]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (float, str)):
        return value
    if isinstance(value, int):
        return value if abs(value) < 2**53 else str(value)
    if hasattr(value, "item"):
        # numpy scalars from pandas frames
        return _jsonable(value.item())
    return str(value)


@dataclass
class Report:
    """The outcome of one command.

    Methods:
    --------
    add_table(name: str, table: pd.DataFrame)
        Store a result table under `name`.
    to_text() -> str
        Human readable report.
    to_json() -> str
        JSON with sorted keys; integers beyond 2^53 become strings.
    to_csv() -> str
        The result tables as CSV blocks, or the scalar results as one row.
    render(fmt: str) -> str
        Dispatch on ``text``, ``json`` or ``csv``.
    """  # noqa E501

    command: str
    inputs: dict[str, typing.Any] = field(default_factory=dict)
    results: dict[str, typing.Any] = field(default_factory=dict)
    seconds: float = 0.0
    cap_exhausted: bool = False
    exit_code: int = DEF_EXIT_OK

    def __post_init__(self):
        self._tables: dict[str, pd.DataFrame] = dict()
        pass

    def add_table(self, name: str, table: pd.DataFrame):
        self._tables[name] = table
        pass

    def __getitem__(self, item: str) -> typing.Any:
        try:
            return self._tables[item]
        except KeyError:
            try:
                return self.results[item]
            except KeyError:
                raise KeyError(f"Report for '{self.command}' has no result named '{item}'.")  # noqa E501

    @property
    def tables(self) -> dict[str, pd.DataFrame]:
        return self._tables

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "command": self.command,
            "inputs": _jsonable(self.inputs),
            "results": _jsonable(self.results),
            "tables": {name: _jsonable(table) for name, table in self._tables.items()},
            "seconds": round(self.seconds, 4),
            "cap_exhausted": self.cap_exhausted,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"== {self.command} =="]
        for key, value in self.inputs.items():
            lines.append(f"  {key}: {value}")
        for key, value in self.results.items():
            lines.append(f"{key}: {value}")
        for name, table in self._tables.items():
            lines.append(f"-- {name} --")
            lines.append(table.to_string(index=False) if not table.empty else "(empty)")
        if self.cap_exhausted:
            lines.append("caps exhausted: the negative outcome is bounded, not a proof")
        lines.append(f"in {self.seconds:.4f} seconds")
        return "\n".join(lines)

    def to_csv(self) -> str:
        if not self._tables:
            flat = {k: json.dumps(_jsonable(v)) if isinstance(v, (dict, list)) else _jsonable(v) for k, v in self.results.items()}  # noqa E501
            return pd.DataFrame([flat]).to_csv(index=False)
        blocks = []
        for name, table in self._tables.items():
            blocks.append(f"# {name}\n" + table.to_csv(index=False))
        return "\n".join(blocks)

    def render(self, fmt: str) -> str:
        assert fmt in DEF_OUTPUT_FORMATS, f"[LOG] AssertionError: unknown format {fmt}"
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        return self.to_text()
