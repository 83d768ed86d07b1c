"""JSON documents and text files read and written by the command line tool.

Every number on disk is a canonical scalar string (``p/q``, ``p`` or a
shortest round-trip float), so artifacts diff cleanly.  Matrices are stored
row-major; ``B[i-1][j-1]`` holds b_ij.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import ParseError
from .families import NodeConfig
from .sbd_core import BidiagonalFactor, FactorSequence, SingularityFreeBD
from .scalars import BINARY64, RATIONAL, ScalarKind, format_scalar, parse_scalar

SBD_SCHEMA = "sbd/1"
FACTORS_SCHEMA = "factors/1"
INDEXING_NOTE = "1-based semantics, row-major storage: B[i-1][j-1] is b_ij, C[i-1][j-1] is c_ij"


def _text(v) -> str:
    # JSON numbers go through their decimal spelling, so 0.1 means 1/10
    if isinstance(v, bool):
        raise ParseError(f"expected a scalar, got {v!r}")
    return v if isinstance(v, str) else repr(v)


def read_node_file(path) -> list[str]:
    """One scalar per line; blank lines and ``#`` comments are ignored."""
    nodes = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            parse_scalar(line)
            nodes.append(line)
    return nodes


def config_from_dict(doc: dict, base_dir=None) -> NodeConfig:
    if "family" not in doc:
        raise ParseError("config needs a 'family'")
    if "nodes" in doc:
        nodes = [_text(v) for v in doc["nodes"]]
    elif "nodes_file" in doc:
        path = Path(doc["nodes_file"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        nodes = read_node_file(path)
    else:
        raise ParseError("config needs 'nodes' or 'nodes_file'")
    params = doc.get("params", {})
    get = lambda k: doc.get(k, params.get(k))  # noqa: E731
    weights = get("weights")
    config = NodeConfig(
        family=doc["family"],
        nodes=[parse_scalar(v) for v in nodes],
        q=parse_scalar(_text(get("q"))) if get("q") is not None else None,
        h=parse_scalar(_text(get("h"))) if get("h") is not None else None,
        weights=[parse_scalar(_text(w)) for w in weights] if weights is not None else None,
        d=parse_scalar(_text(get("d"))) if get("d") is not None else None,
        s=get("s"),
        strict=bool(doc.get("strict", True)),
    )
    if "n" in doc and doc["n"] != config.n:
        raise ParseError(f"config says n={doc['n']} but lists {config.n} nodes")
    return config


def load_config(path) -> NodeConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(doc, base_dir=path.parent)


def config_to_dict(config: NodeConfig) -> dict:
    return {
        "family": config.family,
        "n": config.n,
        "nodes": [format_scalar(x) for x in config.nodes],
        **config.params(),
        "strict": config.strict,
    }


def _kind_name(kind: ScalarKind) -> str:
    return "rational" if kind.exact else "binary64"


def _kind_from_doc(doc: dict) -> ScalarKind:
    name = doc.get("scalar", "rational")
    if name == "rational":
        return RATIONAL
    if name == "binary64":
        return BINARY64
    raise ParseError(f"unknown scalar kind {name!r} in document")


def _matrix_text(A) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in A]


def _matrix_parse(rows, kind) -> list[list]:
    return [[parse_scalar(_text(v), kind) for v in row] for row in rows]


def sbd_to_doc(sbd: SingularityFreeBD, config: NodeConfig, kind: ScalarKind = RATIONAL) -> dict:
    return {
        "schema": SBD_SCHEMA,
        "n": sbd.n,
        "family": config.family,
        "params": config.params(),
        "nodes": [format_scalar(x) for x in config.nodes],
        "strict": config.strict,
        "scalar": _kind_name(kind),
        "indexing": INDEXING_NOTE,
        "B": _matrix_text(sbd.B),
        "C": _matrix_text(sbd.C),
    }


def doc_config(doc: dict) -> NodeConfig:
    return config_from_dict(doc)


def sbd_from_doc(doc: dict) -> tuple[SingularityFreeBD, ScalarKind]:
    if doc.get("schema") != SBD_SCHEMA:
        raise ParseError(f"expected schema {SBD_SCHEMA!r}, got {doc.get('schema')!r}")
    kind = _kind_from_doc(doc)
    sbd = SingularityFreeBD(_matrix_parse(doc["B"], kind), _matrix_parse(doc["C"], kind))
    if sbd.n != doc.get("n", sbd.n):
        raise ParseError("document n disagrees with B")
    return sbd, kind


def _factor_doc(f: BidiagonalFactor) -> dict:
    d = {"diag": [format_scalar(v) for v in f.diag]}
    if f.orientation != "diagonal":
        d["offdiag"] = [format_scalar(v) for v in f.offdiag]
    if f.band is not None:
        d["band"] = f.band
    return d


def factors_to_doc(fs: FactorSequence, config: NodeConfig, kind: ScalarKind = RATIONAL, **extra) -> dict:
    return {
        "schema": FACTORS_SCHEMA,
        "n": fs.n,
        "family": config.family,
        "params": config.params(),
        "nodes": [format_scalar(x) for x in config.nodes],
        "strict": config.strict,
        "scalar": _kind_name(kind),
        "indexing": "lower offdiag[r] is entry (r+2, r+1); upper offdiag[r] is entry (r+1, r+2)",
        **extra,
        "lower": [_factor_doc(f) for f in fs.lower],
        "D": [format_scalar(v) for v in fs.diagonal.diag],
        "upper": [_factor_doc(f) for f in fs.upper],
    }


def factors_from_doc(doc: dict) -> tuple[FactorSequence, ScalarKind]:
    if doc.get("schema") != FACTORS_SCHEMA:
        raise ParseError(f"expected schema {FACTORS_SCHEMA!r}, got {doc.get('schema')!r}")
    kind = _kind_from_doc(doc)
    conv = lambda vs: [parse_scalar(_text(v), kind) for v in vs]  # noqa: E731
    zero = kind.zero()

    def build(orientation, d):
        diag = conv(d["diag"])
        off = conv(d["offdiag"]) if "offdiag" in d else [zero] * (len(diag) - 1)
        return BidiagonalFactor(orientation, diag, off, d.get("band"))

    lower = [build("lower", d) for d in doc["lower"]]
    upper = [build("upper", d) for d in doc["upper"]]
    D = build("diagonal", {"diag": doc["D"]})
    return FactorSequence((*lower, D, *upper)), kind


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path, obj) -> None:
    write_text_atomic(path, json.dumps(obj, indent=2) + "\n")
