"""JSON graph descriptions.

Format::

    {"core": {"L": [[...]], "labels": [...]},
     "channels": [{"attach": 0, "K0": 2, "a": [...], "b": [...]}]}

Omitted ``a``/``b`` tails take the free values 2 and 1; a finite graph is a
web graph with ``"channels": []``.  Integer entries and strings such as
``"3/2"`` in ``a``/``b`` are read as exact rationals.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .errors import GraphSchroError, ParseError
from .graph_model import ChannelSpec, WebGraph, validate_finite_graph


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing key {key!r}")
    return obj[key]


def _number(x, where: str):
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            pass
    raise ParseError(f"{where}: expected a number, got {x!r}")


def web_from_dict(obj: dict, symmetrize: bool = False) -> WebGraph:
    core = _need(obj, "core", "graph")
    L = _need(core, "L", "core")
    try:
        g = validate_finite_graph(L, core.get("labels"), symmetrize=symmetrize)
    except GraphSchroError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"core.L: {exc}") from exc
    chans = []
    for i, ch in enumerate(obj.get("channels", [])):
        where = f"channels[{i}]"
        attach = _need(ch, "attach", where)
        if not isinstance(attach, int) or isinstance(attach, bool):
            raise ParseError(f"{where}.attach: expected an integer vertex index")
        a = [_number(x, f"{where}.a[{j}]") for j, x in enumerate(ch.get("a", []))]
        b = [_number(x, f"{where}.b[{j}]") for j, x in enumerate(ch.get("b", []))]
        K0 = ch.get("K0", max(len(a), len(b)))
        try:
            chans.append(ChannelSpec(attach, int(K0), tuple(a), tuple(b)))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc
    try:
        return WebGraph(g, tuple(chans))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def web_to_dict(web: WebGraph) -> dict:
    def num(x):
        if isinstance(x, Fraction):
            return int(x) if x.denominator == 1 else str(x)
        return x

    out = {"core": {"L": web.core.L.tolist()}, "channels": []}
    if web.core.labels is not None:
        out["core"]["labels"] = list(web.core.labels)
    for ch in web.channels:
        out["channels"].append(
            {"attach": ch.attach, "K0": ch.K0, "a": [num(x) for x in ch.a], "b": [num(x) for x in ch.b]}
        )
    return out


def load_document(path) -> tuple[dict, str]:
    """Parse a JSON file; returns the object and the SHA-256 of its bytes."""
    raw = Path(path).read_bytes()
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return obj, hashlib.sha256(raw).hexdigest()


def load_web(path, symmetrize: bool = False) -> WebGraph:
    return web_from_dict(load_document(path)[0], symmetrize)
