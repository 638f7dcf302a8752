"""Reading monoid and fan files, writing byte-stable JSON reports."""

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .monoid import PctfMonoid
from .toric import Cone, Fan, InvalidFan

SCHEMA = 1


class ParseError(ValueError):
    """Malformed input; the message names the file and the line or field."""


class SemanticError(ValueError):
    """Well-formed input describing an invalid object."""


def load_json(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))


def loads(text, source="<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {json.dumps(x)}")
    return x


def _vectors(obj, key, n, source, required=True):
    if key not in obj:
        if required:
            raise ParseError(f"{source}: missing field '{key}'")
        return []
    vs = obj[key]
    if not isinstance(vs, list):
        raise ParseError(f"{source}: field '{key}' must be a list")
    out = []
    for i, v in enumerate(vs):
        where = f"{source}: {key}[{i}]"
        if not isinstance(v, list):
            raise ParseError(f"{where}: expected a list of integers")
        if len(v) != n:
            raise ParseError(f"{where}: expected length {n}, got {len(v)}")
        out.append(tuple(_int(x, where) for x in v))
    return out


def parse_monoid(obj, source="<monoid>"):
    """``{"ambient_rank": n, "generators": [...], "ideal": [...]}`` to a :class:`PctfMonoid`."""
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: expected a JSON object")
    if "ambient_rank" not in obj:
        raise ParseError(f"{source}: missing field 'ambient_rank'")
    n = _int(obj["ambient_rank"], f"{source}: ambient_rank")
    if n < 0:
        raise ParseError(f"{source}: ambient_rank must be nonnegative")
    gens = _vectors(obj, "generators", n, source)
    ideal = _vectors(obj, "ideal", n, source, required=False)
    for i, g in enumerate(ideal):
        if not any(g):
            raise SemanticError(f"{source}: ideal[{i}] is the identity; the ideal would be everything")
    try:
        return PctfMonoid.of(n, gens, ideal)
    except ValueError as exc:
        raise SemanticError(f"{source}: {exc}") from None


def parse_fan(obj, source="<fan>"):
    """``{"rank": n, "cones": [{"rays": [...]}, ...]}`` to a :class:`Fan`."""
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: expected a JSON object")
    if "rank" not in obj:
        raise ParseError(f"{source}: missing field 'rank'")
    n = _int(obj["rank"], f"{source}: rank")
    cones = obj.get("cones")
    if not isinstance(cones, list):
        raise ParseError(f"{source}: field 'cones' must be a list")
    parsed = []
    for i, c in enumerate(cones):
        if not isinstance(c, dict):
            raise ParseError(f"{source}: cones[{i}] must be an object")
        rays = _vectors(c, "rays", n, f"{source}: cones[{i}]")
        try:
            parsed.append(Cone.of(n, rays))
        except InvalidFan as exc:
            raise SemanticError(f"{source}: cones[{i}]: {exc}") from None
    try:
        return Fan(n, parsed)
    except InvalidFan as exc:
        raise SemanticError(f"{source}: {exc}") from None


def is_fan_document(obj):
    return isinstance(obj, dict) and "cones" in obj


def read_monoid(path):
    return parse_monoid(load_json(path), str(path))


def read_fan(path):
    return parse_fan(load_json(path), str(path))


def monoid_to_dict(A):
    if A.collapsed:
        return {"ambient_rank": A.ambient_rank, "generators": [], "ideal": [], "zero": True}
    return {
        "ambient_rank": A.ambient_rank,
        "generators": [list(g) for g in A.generators],
        "ideal": [list(g) for g in A.ideal.generators],
    }


def fan_to_dict(F):
    return F.as_dict()


def _plain(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def canonical(obj):
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj):
    return hashlib.sha256(canonical(obj).encode("utf-8")).hexdigest()


def dumps_report(report):
    return json.dumps(_plain(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def corpus(kind):
    """Paths of the bundled ``monoids`` or ``fans``."""
    root = resources.files("pctfkit") / "corpus" / kind
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def load_corpus(kind):
    parse = parse_monoid if kind == "monoids" else parse_fan
    out = {}
    for p in corpus(kind):
        out[p.name[:-5]] = parse(loads(p.read_text(encoding="utf-8"), p.name), p.name)
    return out
