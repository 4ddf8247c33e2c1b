"""Assembly dynamics: sequences of single-tile additions from a seed.

Each stage attaches one tile at a frontier location, chosen uniformly at
random over all legal (location, tile type) pairs; the model itself leaves
the choice nondeterministic, so runs are driven by a recorded 64-bit seed
and are exactly reproducible.

The local-determinism checker verifies the three conditions that guarantee
a unique terminal assembly: every tile binds with total input strength
exactly equal to the temperature; no competing tile type can claim an
occupied location once the tile there and the neighbors that grew off it
are deleted; and the final frontier is empty.
"""

import random
from dataclasses import dataclass
from typing import Optional

from .lattice import Mesh, Point, add, directions, opposite_index
from .tiles import Configuration, TileAssemblySystem, attachments, glues_bind


@dataclass(frozen=True)
class Addition:
    stage: int
    location: Point
    tile: str


@dataclass(frozen=True)
class AssemblySequence:
    """Replayable record of one run: the system plus its ordered additions.

    The seed configuration is stage 0; additions are stages 1, 2, ...
    """

    system: TileAssemblySystem
    window: Optional[Mesh]
    additions: tuple[Addition, ...]

    def __post_init__(self):
        seen = set(self.system.seed.domain)
        last_stage = 0
        for a in self.additions:
            if a.location in seen:
                raise ValueError(f"location {a.location} added twice")
            if a.stage <= last_stage:
                raise ValueError("stage indices must strictly increase")
            seen.add(a.location)
            last_stage = a.stage


@dataclass(frozen=True)
class AssemblyResult:
    configuration: Configuration
    terminal: bool
    stages: int
    master_seed: int
    sequence: Optional[AssemblySequence] = None


def step(cfg: Configuration, system: TileAssemblySystem, rng: random.Random):
    """One nondeterministic stage: returns (new_cfg, (location, tile name)),
    or None when the frontier is empty and the configuration is terminal."""
    options = attachments(cfg, system.tiles, system.temperature)
    if not options:
        return None
    pairs = [(v, name) for v in sorted(options) for name in options[v]]
    v, name = pairs[rng.randrange(len(pairs))]
    return cfg.with_tile(v, name), (v, name)


def run(system: TileAssemblySystem, window: Optional[Mesh] = None,
        master_seed: int = 0, max_stages: Optional[int] = None,
        record: bool = True, rng: Optional[random.Random] = None) -> AssemblyResult:
    """Assemble until terminal or until the stage budget runs out.

    max_stages caps the number of tile additions past the seed; it defaults
    to the window capacity plus one, which one-tile-per-stage growth can
    never reach.  The frontier is maintained incrementally -- a placement
    only changes attachability at the placed cell's neighbors.  The
    returned stage count includes the seed stage, so a full n x n run from
    a single seed tile terminates in exactly n^2 stages.
    """
    if rng is None:
        rng = random.Random(master_seed)
    for v, _ in system.seed.items():
        if window is not None and not window.contains(v):
            raise ValueError(f"seed location {v} lies outside the window")
    if max_stages is None:
        max_stages = (window.size + 1) if window is not None else 10_000

    tiles = system.tiles
    temperature = system.temperature
    dirs = directions(system.k)
    cells: dict[Point, str] = system.seed.cells()

    def options_at(v: Point) -> tuple[str, ...]:
        total_by_name = []
        for name, t in tiles.items():
            s = 0
            for d in dirs:
                w = add(v, d.vector)
                occ = cells.get(w)
                if occ is not None:
                    s += glues_bind(t.glue(d.index), tiles[occ].glue(opposite_index(d.index)))
            if s >= temperature:
                total_by_name.append(name)
        return tuple(total_by_name)

    def empty_neighbors(v: Point):
        for d in dirs:
            w = add(v, d.vector)
            if w in cells:
                continue
            if window is not None and not window.contains(w):
                continue
            yield w

    if temperature <= 0:
        # degenerate regime: every empty window cell is attachable
        base = Configuration(cells, window, system.k)
        candidates = dict(attachments(base, tiles, temperature))
    else:
        candidates = {}
        for v in set(cells):
            for w in empty_neighbors(v):
                if w not in candidates:
                    names = options_at(w)
                    if names:
                        candidates[w] = names

    additions: list[Addition] = []
    stage = 0
    while candidates and stage < max_stages:
        pairs = [(v, name) for v in sorted(candidates) for name in candidates[v]]
        v, name = pairs[rng.randrange(len(pairs))]
        stage += 1
        cells[v] = name
        additions.append(Addition(stage, v, name))
        candidates.pop(v, None)
        for w in empty_neighbors(v):
            names = options_at(w)
            if names:
                candidates[w] = names
            else:
                candidates.pop(w, None)

    final = Configuration(cells, window, system.k)
    sequence = AssemblySequence(system, window, tuple(additions)) if record else None
    return AssemblyResult(
        configuration=final,
        terminal=not candidates,
        stages=stage + 1,
        master_seed=master_seed,
        sequence=sequence,
    )


@dataclass(frozen=True)
class DeterminismReport:
    passed: bool
    failed_condition: Optional[int] = None
    witness: Optional[tuple] = None
    message: str = ""


def _replay(seq: AssemblySequence):
    """Validate and replay a sequence; yields per-addition binding data.

    Returns (cells, input_sides) where input_sides[location] is the set of
    direction indices that contributed positive strength when the tile
    bound there.
    """
    system = seq.system
    tiles = system.tiles
    dirs = directions(system.k)
    cells = system.seed.cells()
    input_sides: dict[Point, set[int]] = {}
    in_strength: dict[Point, int] = {}
    for a in seq.additions:
        t = tiles.get(a.tile)
        if t is None:
            raise ValueError(f"addition at {a.location} names undefined tile {a.tile!r}")
        if a.location in cells:
            raise ValueError(f"addition at {a.location} targets an occupied cell")
        if seq.window is not None and not seq.window.contains(a.location):
            raise ValueError(f"addition at {a.location} lies outside the window")
        sides = set()
        total = 0
        for d in dirs:
            w = add(a.location, d.vector)
            occ = cells.get(w)
            if occ is None:
                continue
            s = glues_bind(t.glue(d.index), tiles[occ].glue(opposite_index(d.index)))
            if s > 0:
                sides.add(d.index)
                total += s
        if total < system.temperature:
            raise ValueError(
                f"stage {a.stage}: {a.tile!r} at {a.location} binds with strength "
                f"{total} < temperature {system.temperature}"
            )
        cells[a.location] = a.tile
        input_sides[a.location] = sides
        in_strength[a.location] = total
    return cells, input_sides, in_strength


def check_local_determinism(seq: AssemblySequence) -> DeterminismReport:
    """Verify the three unique-terminal-assembly conditions on one sequence.

    Condition 2 deletes, besides the tile at the examined location, the
    neighbors that used that tile as a binding input (they only exist
    because of it); every other placed tile keeps its glues available to a
    would-be competitor.
    """
    system = seq.system
    tiles = system.tiles
    dirs = directions(system.k)
    cells, input_sides, in_strength = _replay(seq)

    for a in seq.additions:
        if in_strength[a.location] != system.temperature:
            return DeterminismReport(
                False, 1, (a.location, a.tile),
                f"{a.tile!r} at {a.location} bound with strength "
                f"{in_strength[a.location]} != temperature {system.temperature}",
            )

    for a in seq.additions:
        m = a.location
        removed = {m}
        for d in dirs:
            w = add(m, d.vector)
            if w in input_sides and opposite_index(d.index) in input_sides[w]:
                removed.add(w)
        for name, t in tiles.items():
            if name == a.tile:
                continue
            total = 0
            for d in dirs:
                w = add(m, d.vector)
                occ = cells.get(w)
                if occ is None or w in removed:
                    continue
                total += glues_bind(t.glue(d.index), tiles[occ].glue(opposite_index(d.index)))
            if total >= system.temperature:
                return DeterminismReport(
                    False, 2, (m, name),
                    f"competing type {name!r} can also bind at {m}",
                )

    result = Configuration(cells, seq.window, system.k)
    leftover = attachments(result, tiles, system.temperature)
    if leftover:
        v = sorted(leftover)[0]
        return DeterminismReport(False, 3, (v, leftover[v]),
                                 f"result is not terminal: frontier at {v}")
    return DeterminismReport(True, message="locally deterministic")


def terminal_assemblies_equal(a: AssemblyResult, b: AssemblyResult) -> bool:
    """True iff two terminal results place identical tiles everywhere."""
    if not a.terminal or not b.terminal:
        raise ValueError("terminal_assemblies_equal requires terminal results")
    return a.configuration == b.configuration
