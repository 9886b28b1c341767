"""File formats (canonical JSON) and the path-literal syntax.

Diagram, embedding, function-system, and assignment files round-trip
bit-exactly through the canonical serializer.  Inputs named ``catalog:NAME``
resolve to the built-in catalog instead of the filesystem.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import catalog
from .diagram import Diagram, from_dict as diagram_from_dict, to_dict as diagram_to_dict
from .dps import DpsAssignment
from .embedding import EmbeddingPair
from .ifs import system_from_dict, system_to_dict
from .pathspace import AllIdentity, AllMax, AllMin, Embedded, LazyPath, Periodic


def dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def write_json(path, data):
    Path(path).write_text(dumps(data))


def read_json(path):
    return json.loads(Path(path).read_text())


# -- diagrams ----------------------------------------------------------------------


def load_diagram(ref: str) -> Diagram:
    if ref.startswith("catalog:"):
        return catalog.diagram_by_name(ref.split(":", 1)[1])
    return diagram_from_dict(read_json(ref))


def save_diagram(path, d: Diagram):
    write_json(path, diagram_to_dict(d))


# -- embeddings --------------------------------------------------------------------


def embedding_to_dict(pair: EmbeddingPair) -> dict:
    return {
        "big": diagram_to_dict(pair.big),
        "small": diagram_to_dict(pair.small),
        "vertex_map": [list(v) for v in pair.vertex_levels],
        "edge_map_0": [list(v) for v in pair.edge_levels[0]],
        "edge_map_1": [list(v) for v in pair.edge_levels[1]],
    }


def embedding_from_dict(data: dict) -> EmbeddingPair:
    return EmbeddingPair(
        diagram_from_dict(data["small"]),
        diagram_from_dict(data["big"]),
        vertex_levels=data["vertex_map"],
        edge_levels_0=data["edge_map_0"],
        edge_levels_1=data["edge_map_1"],
    )


def load_embedding(ref: str) -> EmbeddingPair:
    if ref.startswith("catalog:"):
        return catalog.pair_by_name(ref.split(":", 1)[1])
    return embedding_from_dict(read_json(ref))


def save_embedding(path, pair: EmbeddingPair):
    write_json(path, embedding_to_dict(pair))


# -- function systems -----------------------------------------------------------------


def load_system(ref: str):
    if ref.startswith("catalog:"):
        return catalog.system_by_name(ref.split(":", 1)[1])
    return system_from_dict(read_json(ref))


def save_system(path, system):
    write_json(path, system_to_dict(system))


# -- assignments -----------------------------------------------------------------------


def assignment_to_dict(a: DpsAssignment) -> dict:
    return {
        "diagram": diagram_to_dict(a.diagram),
        "system": system_to_dict(a.system),
        "words": [
            ["id" if w is None else list(w) for w in level] for level in a.word_tables
        ],
    }


def assignment_from_dict(data: dict) -> DpsAssignment:
    words = [
        [None if w == "id" else tuple(w) for w in level] for level in data["words"]
    ]
    return DpsAssignment(diagram_from_dict(data["diagram"]), system_from_dict(data["system"]), words)


def load_assignment(ref: str, depth: int = 6) -> DpsAssignment:
    if ref.startswith("catalog:"):
        return catalog.assignment_by_name(ref.split(":", 1)[1], depth)
    return assignment_from_dict(read_json(ref))


def save_assignment(path, a: DpsAssignment):
    write_json(path, assignment_to_dict(a))


# -- path literals ------------------------------------------------------------------------


def parse_path(text: str, diagram: Diagram, pair: EmbeddingPair | None = None, assignment: DpsAssignment | None = None) -> LazyPath:
    """prefix=[i1,i2,...] tail=allmax|allmin|periodic:[...]|embedded:J:TAIL|identity"""
    fields = dict(part.split("=", 1) for part in text.strip().split())
    prefix = _parse_int_list(fields.get("prefix", "[]"))
    tail = _parse_tail(fields["tail"], pair, assignment)
    return LazyPath(diagram, prefix, tail)


def _parse_int_list(text: str):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected [..] list, got {text!r}")
    inner = text[1:-1].strip()
    return tuple(int(v) for v in inner.split(",")) if inner else ()


def _parse_tail(text: str, pair, assignment):
    if text == "allmax":
        return AllMax()
    if text == "allmin":
        return AllMin()
    if text == "identity":
        if assignment is None:
            raise ValueError("identity tails need an assignment in scope")
        return AllIdentity(assignment)
    if text.startswith("periodic:"):
        return Periodic(_parse_int_list(text.split(":", 1)[1]))
    if text.startswith("embedded:"):
        if pair is None:
            raise ValueError("embedded tails need an embedding in scope")
        _, side, rest = text.split(":", 2)
        return Embedded(int(side), _parse_tail(rest, pair, assignment), pair)
    raise ValueError(f"cannot parse tail {text!r}")


def format_path(x: LazyPath) -> str:
    return x.literal()


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)
