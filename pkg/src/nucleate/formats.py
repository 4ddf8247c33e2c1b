"""File formats: model definition documents, traces, snapshots, reports.

Model files are strict JSON -- unknown keys are rejected at every level, so
a typo fails loudly instead of silently changing a run.  Every CLI artifact
carries the master seed and the model's content hash (sha256 over the
canonical JSON encoding), which together reproduce any run byte for byte.
"""

import hashlib
import json
from pathlib import Path
from typing import Mapping, Optional, Union

from .agents import (
    AgentModel,
    AgentType,
    BindingRules,
    Diagnostic,
    Kinetics,
    ModelValidationError,
    validate_model,
)
from .engine import Addition, AssemblySequence
from .lattice import Box, Mesh, Point, directions
from .meshnet import TraceEvent
from .tiles import Configuration, Glue, TileAssemblySystem, TileType

_AXES = ("x", "y", "z")


class FormatError(ValueError):
    """A document failed schema validation; carries machine-readable diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.message for d in self.diagnostics))


def _fail(code: str, message: str, path: str = ""):
    raise FormatError([Diagnostic("error", code, message, path)])


def _require_keys(doc: dict, required: set, optional: set, path: str):
    if not isinstance(doc, dict):
        _fail("not-an-object", f"expected a JSON object at {path or 'top level'}", path)
    unknown = set(doc) - required - optional
    if unknown:
        _fail("unknown-key", f"unknown key(s) {sorted(unknown)} at {path or 'top level'}", path)
    missing = required - set(doc)
    if missing:
        _fail("missing-key", f"missing required key(s) {sorted(missing)} at {path or 'top level'}", path)


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def content_hash(doc: dict) -> str:
    digest = hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()
    return f"sha256:{digest}"


def _read_document(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        _fail("bad-json", f"{source}: {e}")


def detect_kind(doc: dict) -> str:
    if "tiles" in doc:
        return "tile-system"
    if "agents" in doc:
        return "agent-model"
    _fail("unknown-kind", "document has neither 'tiles' nor 'agents'")


# -- tile systems ------------------------------------------------------


def _seed_entry(entry: dict, key: str, k: int, path: str) -> tuple[Point, str]:
    axes = set(_AXES[:k])
    _require_keys(entry, axes | {key}, set(), path)
    try:
        point = tuple(int(entry[a]) for a in _AXES[:k])
    except (TypeError, ValueError):
        _fail("bad-seed-entry", f"{path}: coordinates must be integers", path)
    return point, entry[key]


def load_tile_system(source: Union[str, Path, dict]) -> tuple[TileAssemblySystem, dict]:
    """Parse and validate a tile system document; returns (system, document)."""
    doc = _read_document(source)
    _require_keys(doc, {"tiles", "temperature", "seed"}, {"name"}, "")
    tiles_doc = doc["tiles"]
    if not isinstance(tiles_doc, list) or not tiles_doc:
        _fail("bad-tiles", "'tiles' must be a nonempty list", "tiles")

    k = None
    tiles: dict[str, TileType] = {}
    for i, td in enumerate(tiles_doc):
        path = f"tiles[{i}]"
        _require_keys(td, {"name", "glues"}, {"color"}, path)
        glues_doc = td["glues"]
        names = set(glues_doc) if isinstance(glues_doc, dict) else set()
        this_k = 3 if names & {"down", "up"} else 2
        dirs = directions(this_k)
        _require_keys(glues_doc, {d.name for d in dirs}, set(), f"{path}.glues")
        if k is None:
            k = this_k
        elif k != this_k:
            _fail("mixed-dimensions", "tiles mix 2- and 3-dimensional glue sets", path)
        glues = []
        for d in dirs:
            gd = glues_doc[d.name]
            _require_keys(gd, {"label", "strength"}, set(), f"{path}.glues.{d.name}")
            try:
                glues.append(Glue(str(gd["label"]), int(gd["strength"])))
            except ValueError as e:
                _fail("bad-glue", f"{path}.glues.{d.name}: {e}", f"{path}.glues.{d.name}")
        name = td["name"]
        if name in tiles:
            _fail("duplicate-tile", f"tile name {name!r} appears twice", path)
        tiles[name] = TileType(name, tuple(glues), int(td.get("color", 1)))

    seed_doc = doc["seed"]
    if not isinstance(seed_doc, list):
        _fail("bad-seed", "'seed' must be a list", "seed")
    seed_cells = {}
    for i, entry in enumerate(seed_doc):
        v, name = _seed_entry(entry, "tile", k, f"seed[{i}]")
        if name not in tiles:
            _fail("bad-seed-type", f"seed names unknown tile {name!r}", f"seed[{i}]")
        seed_cells[v] = name

    try:
        system = TileAssemblySystem(
            tiles=tiles,
            seed=Configuration(seed_cells, k=k),
            temperature=int(doc["temperature"]),
        )
    except ValueError as e:
        _fail("invalid-system", str(e))
    return system, doc


def tile_system_document(system: TileAssemblySystem, name: Optional[str] = None) -> dict:
    dirs = directions(system.k)
    doc = {
        "temperature": system.temperature,
        "tiles": [
            {
                "name": t.name,
                "color": t.color,
                "glues": {
                    d.name: {"label": t.glue(d.index).label, "strength": t.glue(d.index).strength}
                    for d in dirs
                },
            }
            for t in sorted(system.tiles.values(), key=lambda t: t.name)
        ],
        "seed": [
            dict(zip(_AXES[:system.k], v)) | {"tile": tname}
            for v, tname in sorted(system.seed.items())
        ],
    }
    if name is not None:
        doc["name"] = name
    return doc


# -- agent models ------------------------------------------------------


def load_agent_model(source: Union[str, Path, dict]) -> tuple[AgentModel, dict]:
    """Parse and validate an agent model document; returns (model, document)."""
    doc = _read_document(source)
    _require_keys(
        doc,
        {"agents", "rules", "temperature"},
        {"name", "seed", "pi_nu", "kinetics", "messages", "use_ids"},
        "",
    )
    agents_doc = doc["agents"]
    if not isinstance(agents_doc, list) or not agents_doc:
        _fail("bad-agents", "'agents' must be a nonempty list", "agents")

    k = None
    types: dict[str, AgentType] = {}
    for i, ad in enumerate(agents_doc):
        path = f"agents[{i}]"
        _require_keys(ad, {"name", "glues"}, {"color", "rule"}, path)
        glues = ad["glues"]
        if not isinstance(glues, list) or len(glues) not in (4, 6):
            _fail("bad-glues", f"{path}: 'glues' must list 4 or 6 labels (null for none)", path)
        this_k = len(glues) // 2
        if k is None:
            k = this_k
        elif k != this_k:
            _fail("mixed-dimensions", "agents mix 2- and 3-dimensional glue sets", path)
        name = ad["name"]
        if name in types:
            _fail("duplicate-agent", f"agent name {name!r} appears twice", path)
        types[name] = AgentType(
            name,
            tuple(None if g is None else str(g) for g in glues),
            int(ad.get("color", 1)),
            ad.get("rule"),
        )

    rules_doc = doc["rules"]
    if not isinstance(rules_doc, list):
        _fail("bad-rules", "'rules' must be a list", "rules")
    rules = {}
    for i, rd in enumerate(rules_doc):
        _require_keys(rd, {"a", "b", "strength"}, set(), f"rules[{i}]")
        rules[(str(rd["a"]), str(rd["b"]))] = int(rd["strength"])

    seed_cells = {}
    for i, entry in enumerate(doc.get("seed", [])):
        v, name = _seed_entry(entry, "agent", k, f"seed[{i}]")
        seed_cells[v] = name

    kin_doc = doc.get("kinetics", {})
    _require_keys(kin_doc, set(), {"lambda_on", "p_off", "epsilon", "detach"}, "kinetics")
    p_off = float(kin_doc.get("p_off", 0.0))
    try:
        kinetics = Kinetics(
            lambda_on=float(kin_doc.get("lambda_on", 1.0)),
            detach=bool(kin_doc.get("detach", p_off > 0)),
            p_off=p_off,
            epsilon=float(kin_doc.get("epsilon", 0.0)),
        )
        model = AgentModel(
            types=types,
            rules=BindingRules(rules),
            temperature=int(doc["temperature"]),
            seed=seed_cells,
            pi_nu=float(doc.get("pi_nu", 0.0)),
            kinetics=kinetics,
            messages=tuple(doc.get("messages", [])),
            use_ids=bool(doc.get("use_ids", False)),
            k=k,
        )
    except ModelValidationError as e:
        raise FormatError(e.diagnostics)
    except ValueError as e:
        _fail("invalid-model", str(e))
    return model, doc


def agent_model_document(model: AgentModel, name: Optional[str] = None) -> dict:
    doc = {
        "agents": [
            {"name": t.name, "color": t.color, "glues": list(t.glues), "rule": t.rule}
            for t in sorted(model.types.values(), key=lambda t: t.name)
        ],
        "rules": [
            {"a": a, "b": b, "strength": s}
            for (a, b), s in sorted(model.rules.pairs().items())
        ],
        "temperature": model.temperature,
        "seed": [
            dict(zip(_AXES[:model.k], v)) | {"agent": n}
            for v, n in sorted(model.seed.items())
        ],
        "pi_nu": model.pi_nu,
        "kinetics": {
            "lambda_on": model.kinetics.lambda_on,
            "detach": model.kinetics.detach,
            "p_off": model.kinetics.p_off,
            "epsilon": model.kinetics.epsilon,
        },
        "messages": list(model.messages),
        "use_ids": model.use_ids,
    }
    if name is not None:
        doc["name"] = name
    return doc


def lint_document(source: Union[str, Path, dict], strict: bool = False) -> list[Diagnostic]:
    """Validate a model document of either kind; returns all diagnostics."""
    try:
        doc = _read_document(source)
        kind = detect_kind(doc)
        if kind == "tile-system":
            load_tile_system(doc)
            return []
        model, _ = load_agent_model(doc)
        return validate_model(model, strict=strict)
    except FormatError as e:
        return e.diagnostics


# -- snapshots ---------------------------------------------------------


def color_char(color: Optional[int]) -> str:
    """One character per color; '.' marks an empty (or unset) cell."""
    if color is None:
        return "."
    if 1 <= color <= 9:
        return str(color)
    return chr(ord("a") + (color - 10) % 26)


def ascii_snapshot(colors: Mapping[Point, int], window: Union[Mesh, Box]) -> str:
    """Character grid of a colored surface; for k=3, one z-layer per block."""
    if window.k == 2:
        sx, sy = (window.side, window.side) if isinstance(window, Mesh) else window.sides
        rows = []
        for y in reversed(range(sy)):
            rows.append("".join(color_char(colors.get((x, y))) for x in range(sx)))
        return "\n".join(rows) + "\n"
    sx, sy, sz = (window.side,) * 3 if isinstance(window, Mesh) else window.sides
    blocks = []
    for z in range(sz):
        rows = [f"z={z}"]
        for y in reversed(range(sy)):
            rows.append("".join(color_char(colors.get((x, y, z))) for x in range(sx)))
        blocks.append("\n".join(rows))
    return "\n\n".join(blocks) + "\n"


_PALETTE = [
    (230, 230, 230),  # background/empty
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (127, 127, 127),
    (188, 189, 34),
]


def write_ppm(path: Union[str, Path], colors: Mapping[Point, int],
              window: Union[Mesh, Box], scale: int = 8) -> None:
    """Plain-text portable pixmap (P3) of a 2-dimensional surface."""
    if window.k != 2:
        raise ValueError("pixmap snapshots are 2-dimensional only")
    sx, sy = (window.side, window.side) if isinstance(window, Mesh) else window.sides
    width, height = sx * scale, sy * scale
    lines = [f"P3 {width} {height} 255"]
    for py in range(height):
        y = sy - 1 - py // scale
        row = []
        for px in range(width):
            x = px // scale
            c = colors.get((x, y))
            rgb = _PALETTE[0] if c is None else _PALETTE[1 + (c - 1) % (len(_PALETTE) - 1)]
            row.append(f"{rgb[0]} {rgb[1]} {rgb[2]}")
        lines.append(" ".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- traces ------------------------------------------------------------


def _point_token(v: Point) -> str:
    return ",".join(str(c) for c in v)


def _parse_point(token: str) -> Point:
    return tuple(int(c) for c in token.split(","))


def assembly_trace_text(seq: AssemblySequence, system_hash: str, master_seed: int) -> str:
    """Line records `stage location tile`, after a commented header."""
    lines = [
        f"# system {system_hash}",
        f"# seed {master_seed}",
        f"# temperature {seq.system.temperature}",
    ]
    for a in seq.additions:
        lines.append(f"{a.stage} {_point_token(a.location)} {a.tile}")
    return "\n".join(lines) + "\n"


def parse_assembly_trace(text: str) -> tuple[dict, list[Addition]]:
    header: dict[str, str] = {}
    additions = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            header[key] = value
            continue
        stage, location, name = line.split(" ", 2)
        additions.append(Addition(int(stage), _parse_point(location), name))
    return header, additions


def mesh_trace_text(events: list[TraceEvent], model_hash: str, master_seed: int) -> str:
    """Line records `round x y [z] old_state new_state` (EMPTY for no agent)."""
    lines = [f"# model {model_hash}", f"# seed {master_seed}"]
    for e in events:
        coords = " ".join(str(c) for c in e.coordinates)
        lines.append(f"{e.round} {coords} {e.old or 'EMPTY'} {e.new or 'EMPTY'}")
    return "\n".join(lines) + "\n"


def parse_mesh_trace(text: str) -> tuple[dict, list[TraceEvent]]:
    header: dict[str, str] = {}
    events = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            header[key] = value
            continue
        parts = line.split(" ")
        rnd, coords, old, new = parts[0], parts[1:-2], parts[-2], parts[-1]
        events.append(TraceEvent(
            int(rnd),
            tuple(int(c) for c in coords),
            None if old == "EMPTY" else old,
            None if new == "EMPTY" else new,
        ))
    return header, events


# -- colorings ---------------------------------------------------------


def coloring_document(colors: Mapping[Point, int], window: Union[Mesh, Box], c: int) -> dict:
    side = window.side if isinstance(window, Mesh) else max(window.sides)
    return {
        "k": window.k,
        "side": side,
        "c": c,
        "colors": {_point_token(v): color for v, color in sorted(colors.items())},
    }


def load_coloring(source: Union[str, Path, dict]):
    from .coloring import Coloring

    doc = _read_document(source)
    _require_keys(doc, {"k", "side", "c", "colors"}, set(), "")
    mesh = Mesh(int(doc["k"]), int(doc["side"]))
    assignment = {_parse_point(tok): int(c) for tok, c in doc["colors"].items()}
    return Coloring(assignment, mesh, int(doc["c"]))
