"""Model files: a TOML document describing a :class:`HiddenVariableModel`.

Grammar (all top-level keys required except ``name``; nothing else allowed)::

    name = "two-lambda"                 # free text
    mode = "exact"                      # "exact" or "float"
    lambda_weights = ["1/2", "1/2"]     # prior over source outcomes

    [axes]
    station1 = [[0.0, 0.0, 1.0]]        # unit 3-vectors, index = position
    station2 = [[0.0, 0.0, 1.0]]

    [[kernel]]                          # one table per (i, j, lambda)
    setting = [0, 0]                    # station-1 axis index, station-2 axis index
    lambda = 0
    p = ["0", "1", "0", "0"]            # (↑↑, ↑↓, ↓↑, ↓↓)

Probabilities may be TOML numbers, decimal strings or ``"p/q"`` strings.
:func:`dumps` writes the canonical form: keys in the order above, kernel
tables sorted by (i, j, lambda), rationals as ``"p/q"`` strings in exact
mode and floats as TOML floats in float mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .model import Axis, HiddenVariableModel, MissingKernelError
from .numeric import PreconditionError, format_number, parse_number
from .probability import Measure

__all__ = ["ModelFileError", "ModelFile", "loads", "load", "dumps", "dump"]

TOP_KEYS = ("name", "mode", "lambda_weights", "axes", "kernel")
AXES_KEYS = ("station1", "station2")
KERNEL_KEYS = ("setting", "lambda", "p")


class ModelFileError(ValueError):
    """Malformed model file; the message carries a line/column or a field path."""


@dataclass(frozen=True)
class ModelFile:
    model: HiddenVariableModel
    name: str
    mode: str


def _unknown(table: dict, allowed: tuple[str, ...], path: str):
    extra = sorted(set(table) - set(allowed))
    if extra:
        raise ModelFileError(f"{path}: unknown field(s) {', '.join(extra)}")


def _require(table: dict, key: str, path: str):
    if key not in table:
        raise ModelFileError(f"{path}: missing field '{key}'")
    return table[key]


def _number(x: Any, mode: str, path: str):
    try:
        return parse_number(x, mode)
    except ValueError as exc:
        raise ModelFileError(f"{path}: {exc}") from None


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ModelFileError(f"{path}: expected an integer, got {x!r}")
    return x


def _axes(raw: Any, path: str) -> tuple[Axis, ...]:
    if not isinstance(raw, list) or not raw:
        raise ModelFileError(f"{path}: expected a nonempty array of 3-vectors")
    out = []
    for k, v in enumerate(raw):
        p = f"{path}[{k}]"
        if not isinstance(v, list) or len(v) != 3:
            raise ModelFileError(f"{p}: expected a 3-vector")
        try:
            out.append(Axis(tuple(float(_number(x, "float", p)) for x in v)))
        except PreconditionError as exc:
            raise ModelFileError(f"{p}: {exc}") from None
    return tuple(out)


def from_dict(doc: dict) -> ModelFile:
    _unknown(doc, TOP_KEYS, "<root>")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ModelFileError("name: expected a string")
    mode = _require(doc, "mode", "<root>")
    if mode not in ("exact", "float"):
        raise ModelFileError(f"mode: expected 'exact' or 'float', got {mode!r}")

    raw_w = _require(doc, "lambda_weights", "<root>")
    if not isinstance(raw_w, list) or not raw_w:
        raise ModelFileError("lambda_weights: expected a nonempty array")
    weights = tuple(_number(x, mode, f"lambda_weights[{k}]") for k, x in enumerate(raw_w))
    try:
        prior = Measure(weights)
    except ValueError as exc:
        raise ModelFileError(f"lambda_weights: {exc}") from None

    axes = _require(doc, "axes", "<root>")
    if not isinstance(axes, dict):
        raise ModelFileError("axes: expected a table")
    _unknown(axes, AXES_KEYS, "axes")
    axes1 = _axes(_require(axes, "station1", "axes"), "axes.station1")
    axes2 = _axes(_require(axes, "station2", "axes"), "axes.station2")

    raw_k = _require(doc, "kernel", "<root>")
    if not isinstance(raw_k, list):
        raise ModelFileError("kernel: expected an array of tables")
    table: dict[tuple[int, int], list] = {
        (i, j): [None] * prior.size for i in range(len(axes1)) for j in range(len(axes2))
    }
    for k, entry in enumerate(raw_k):
        path = f"kernel[{k}]"
        if not isinstance(entry, dict):
            raise ModelFileError(f"{path}: expected a table")
        _unknown(entry, KERNEL_KEYS, path)
        setting = _require(entry, "setting", path)
        if not isinstance(setting, list) or len(setting) != 2:
            raise ModelFileError(f"{path}.setting: expected [i, j]")
        i, j = (_int(x, f"{path}.setting") for x in setting)
        lam = _int(_require(entry, "lambda", path), f"{path}.lambda")
        if (i, j) not in table:
            raise ModelFileError(f"{path}.setting: axis pair ({i}, {j}) not declared")
        if not 0 <= lam < prior.size:
            raise ModelFileError(f"{path}.lambda: {lam} out of range 0..{prior.size - 1}")
        if table[(i, j)][lam] is not None:
            raise ModelFileError(f"{path}: duplicate entry for setting ({i}, {j}), lambda {lam}")
        p = _require(entry, "p", path)
        if not isinstance(p, list) or len(p) != 4:
            raise ModelFileError(f"{path}.p: expected 4 probabilities")
        table[(i, j)][lam] = tuple(_number(x, mode, f"{path}.p[{n}]") for n, x in enumerate(p))
    for (i, j), rows in table.items():
        for lam, row in enumerate(rows):
            if row is None:
                raise ModelFileError(f"kernel: missing entry for setting ({i}, {j}), lambda {lam}")
    try:
        model = HiddenVariableModel(axes1, axes2, prior, {k: tuple(v) for k, v in table.items()}, name)
    except (ValueError, MissingKernelError) as exc:
        raise ModelFileError(f"kernel: {exc}") from None
    return ModelFile(model, name, mode)


def loads(text: str) -> ModelFile:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ModelFileError(f"parse error: {exc}") from None
    return from_dict(doc)


def load(path: str | Path) -> ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _fmt(x, mode: str) -> str:
    if mode == "exact":
        return json.dumps(format_number(x))
    return repr(float(x))


def _vec(v) -> str:
    return "[" + ", ".join(repr(float(x)) for x in v) + "]"


def dumps(model: HiddenVariableModel, name: str | None = None, mode: str | None = None) -> str:
    name = model.name if name is None else name
    mode = mode or model.mode
    m = model.to_mode(mode)
    lines = [
        f"name = {json.dumps(name, ensure_ascii=False)}",
        f"mode = {json.dumps(mode)}",
        "lambda_weights = [" + ", ".join(_fmt(w, mode) for w in m.prior.weights) + "]",
        "",
        "[axes]",
        "station1 = [" + ", ".join(_vec(a.direction) for a in m.axes1) + "]",
        "station2 = [" + ", ".join(_vec(a.direction) for a in m.axes2) + "]",
    ]
    for (i, j) in sorted(m.kernels):
        for lam, row in enumerate(m.kernels[(i, j)]):
            lines += [
                "",
                "[[kernel]]",
                f"setting = [{i}, {j}]",
                f"lambda = {lam}",
                "p = [" + ", ".join(_fmt(x, mode) for x in row) + "]",
            ]
    return "\n".join(lines) + "\n"


def dump(model: HiddenVariableModel, path: str | Path, name: str | None = None, mode: str | None = None):
    Path(path).write_text(dumps(model, name, mode), encoding="utf-8")
