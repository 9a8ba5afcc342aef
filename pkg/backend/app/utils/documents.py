"""
Input documents: JSON schema, validation and serialization.

A document names a rank and a list of classes::

    {"rank": 2,
     "classes": [{"name": "A",
                  "weights": [{"vertex": [], "gen": 1, "weight": 1}]}]}

Shape errors are reported by pydantic; the semantic checks below add the
JSON path of the offending element to every diagnostic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError

from app.core.config import get_settings
from app.core.errors import (
    DuplicateEdge,
    DuplicateName,
    GenOutOfRange,
    IntersectionOverflow,
    LimitExceeded,
    MalformedJson,
    NonReducedWord,
    UnknownClass,
    ZeroWeight,
)
from app.services.free_group import Rank, ReducedWord, is_reduced
from app.services.sphere_class import INT64_MAX, INT64_MIN, CanonicalEdge, SphereClass


class WeightEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertex: List[StrictInt]
    gen: StrictInt
    weight: StrictInt


class ClassEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: StrictStr
    weights: List[WeightEntry]


class DocumentModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rank: StrictInt
    classes: List[ClassEntry]


class ClassModel(BaseModel):
    """A standalone class: {"rank": k, "weights": [...]}."""

    model_config = ConfigDict(extra="forbid")

    rank: StrictInt
    weights: List[WeightEntry]


@dataclass(frozen=True)
class InputDocument:
    rank: Rank
    names: List[str]
    classes: Dict[str, SphereClass]

    def get(self, name: str) -> SphereClass:
        if name not in self.classes:
            raise UnknownClass(f"no class named {name!r}", "$.classes")
        return self.classes[name]

    def ordered(self) -> List[SphereClass]:
        return [self.classes[n] for n in self.names]


def _json_path(loc) -> str:
    path = "$"
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def _load(data: Union[bytes, str]) -> Any:
    try:
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MalformedJson(f"not valid UTF-8 JSON: {e}", "$")


def _validate_rank(k: int) -> Rank:
    if k < 1:
        raise MalformedJson("rank must be a positive integer", "$.rank")
    return Rank(k)


def _build_class(rank: Rank, entries: List[WeightEntry], path: str) -> SphereClass:
    limit = get_settings().word_length_limit
    weights: Dict[CanonicalEdge, int] = {}
    for j, entry in enumerate(entries):
        here = f"{path}.weights[{j}]"
        if len(entry.vertex) > limit:
            raise LimitExceeded(f"{here}.vertex: word longer than {limit} letters")
        for i, letter in enumerate(entry.vertex):
            if letter == 0 or abs(letter) > rank.k:
                raise GenOutOfRange(f"letter {letter} is outside 1..{rank.k} and their inverses", f"{here}.vertex[{i}]")
        if not is_reduced(entry.vertex):
            raise NonReducedWord(f"vertex {entry.vertex} is not freely reduced", f"{here}.vertex")
        if not 1 <= entry.gen <= rank.k:
            raise GenOutOfRange(f"gen {entry.gen} is outside 1..{rank.k}", f"{here}.gen")
        if entry.weight == 0:
            raise ZeroWeight("weights must be nonzero", f"{here}.weight")
        if not INT64_MIN <= entry.weight <= INT64_MAX:
            raise IntersectionOverflow(f"{here}.weight: {entry.weight} exceeds the signed 64-bit range")
        edge = CanonicalEdge(ReducedWord(tuple(entry.vertex), rank), entry.gen)
        if edge in weights:
            raise DuplicateEdge(f"edge (vertex={entry.vertex}, gen={entry.gen}) listed twice", here)
        weights[edge] = entry.weight
    return SphereClass(rank, weights)


def parse_input(data: Union[bytes, str]) -> InputDocument:
    """
    Parse and validate an input document.

    Args:
        data: UTF-8 JSON bytes or text

    Returns:
        InputDocument with classes in input order

    Raises:
        MalformedJson, NonReducedWord, GenOutOfRange, ZeroWeight,
        DuplicateEdge, DuplicateName: With the JSON path of the problem
    """
    raw = _load(data)
    try:
        model = DocumentModel.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise MalformedJson(first["msg"], _json_path(first["loc"]))

    rank = _validate_rank(model.rank)
    names: List[str] = []
    classes: Dict[str, SphereClass] = {}
    for i, entry in enumerate(model.classes):
        path = f"$.classes[{i}]"
        if entry.name in classes:
            raise DuplicateName(f"class name {entry.name!r} is used twice", f"{path}.name")
        classes[entry.name] = _build_class(rank, entry.weights, path)
        names.append(entry.name)
    return InputDocument(rank, names, classes)


def parse_class(data: Union[bytes, str, Dict[str, Any]]) -> SphereClass:
    """Parse a standalone class document {"rank": k, "weights": [...]}."""
    raw = data if isinstance(data, dict) else _load(data)
    try:
        model = ClassModel.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise MalformedJson(first["msg"], _json_path(first["loc"]))
    return _build_class(_validate_rank(model.rank), model.weights, "$")


def weights_to_json(a: SphereClass) -> List[Dict[str, Any]]:
    return [{"vertex": e.base.to_json(), "gen": e.gen, "weight": w} for e, w in a.items()]


def class_to_json(a: SphereClass) -> Dict[str, Any]:
    return {"rank": a.rank.k, "weights": weights_to_json(a)}


def serialize_document(doc: InputDocument) -> Dict[str, Any]:
    return {
        "rank": doc.rank.k,
        "classes": [{"name": n, "weights": weights_to_json(doc.classes[n])} for n in doc.names],
    }


def dumps(payload: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(payload, indent=indent, sort_keys=False)
