"""Static objects of the abstract tile assembly model.

A tile is a unit square (or cube) with a glue on each side; glues are
(label, strength) pairs and two abutting sides bind with their shared
strength exactly when the glues are equal -- same label AND same strength.
A configuration is a finite partial map from lattice points to tile names;
its binding graph carries the bond strengths, and the minimum cut of that
graph decides stability against a temperature threshold.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

import networkx as nx

from .lattice import Mesh, Point, add, directions, opposite_index

Pair = tuple[Point, Point]


@dataclass(frozen=True)
class Glue:
    label: str
    strength: int

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"glue strength must be nonnegative, got {self.strength}")


#: The distinguished null glue; it never contributes binding.
EMPTY_GLUE = Glue("", 0)


def glues_bind(a: Glue, b: Glue) -> int:
    """Strength with which two abutting glues bind (0 on any mismatch)."""
    if a == b and a.strength > 0:
        return a.strength
    return 0


@dataclass(frozen=True)
class TileType:
    """A named unit cell: one glue per canonical direction, plus a color."""

    name: str
    glues: tuple[Glue, ...]
    color: int = 1

    def __post_init__(self):
        if len(self.glues) not in (4, 6):
            raise ValueError(f"tile {self.name!r} needs 4 or 6 glues, got {len(self.glues)}")
        if self.color < 1:
            raise ValueError(f"tile {self.name!r} color must be >= 1")

    @property
    def k(self) -> int:
        return len(self.glues) // 2

    def glue(self, direction_index: int) -> Glue:
        return self.glues[direction_index]


def tile(name: str, color: int, *sides) -> TileType:
    """Shorthand constructor; sides are (label, strength) pairs in canonical order."""
    return TileType(name, tuple(Glue(l, s) for l, s in sides), color)


class Configuration:
    """Finite partial map from lattice points to tile (or agent) names.

    Immutable by convention: mutators return new configurations.  The
    optional window bounds where growth may occur; a "first quadrant" run is
    realized as an n x n window.
    """

    def __init__(self, cells: Mapping[Point, str] | Iterable[tuple[Point, str]] = (),
                 window: Optional[Mesh] = None, k: Optional[int] = None):
        self._cells = dict(cells)
        self.window = window
        if k is None:
            if window is not None:
                k = window.k
            elif self._cells:
                k = len(next(iter(self._cells)))
            else:
                k = 2
        self.k = k
        for v in self._cells:
            if len(v) != self.k:
                raise ValueError(f"location {v} is not {self.k}-dimensional")
            if window is not None and not window.contains(v):
                raise ValueError(f"location {v} lies outside the window")

    @property
    def domain(self) -> frozenset:
        return frozenset(self._cells)

    def get(self, v: Point) -> Optional[str]:
        return self._cells.get(v)

    def items(self) -> Iterator[tuple[Point, str]]:
        return iter(self._cells.items())

    def cells(self) -> dict:
        return dict(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __contains__(self, v: Point) -> bool:
        return v in self._cells

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self._cells == other._cells

    def __repr__(self) -> str:
        return f"Configuration({len(self)} cells, k={self.k}, window={self.window})"

    def with_tile(self, v: Point, name: str) -> "Configuration":
        if v in self._cells:
            raise ValueError(f"{v} is already occupied")
        cells = dict(self._cells)
        cells[v] = name
        return Configuration(cells, self.window, self.k)


@dataclass(frozen=True)
class BindingGraph:
    """Occupied cells as vertices; matched-glue adjacencies as weighted edges."""

    vertices: frozenset
    edges: Mapping[Pair, int] = field(default_factory=dict)

    def strength(self, u: Point, v: Point) -> int:
        return self.edges.get(_edge(u, v), 0)


def _edge(u: Point, v: Point) -> Pair:
    return (u, v) if u <= v else (v, u)


def resolve(cfg: Configuration, tiles: Mapping[str, TileType], v: Point) -> TileType:
    name = cfg.get(v)
    try:
        return tiles[name]
    except KeyError:
        raise KeyError(f"configuration references undefined tile type {name!r} at {v}")


def build_binding_graph(cfg: Configuration, tiles: Mapping[str, TileType]) -> BindingGraph:
    """Weighted bond graph of a configuration.

    An edge exists between occupied L1-neighbors exactly when their abutting
    glues are equal with positive strength; its weight is that strength.
    """
    positive = [d for d in directions(cfg.k) if d.name in ("north", "east", "up")]
    edges: dict[Pair, int] = {}
    for v, name in cfg.items():
        t = tiles.get(name)
        if t is None:
            raise KeyError(f"configuration references undefined tile type {name!r} at {v}")
        # scan the positive half of the directions so each pair is seen once
        for d in positive:
            w = add(v, d.vector)
            if w not in cfg:
                continue
            other = resolve(cfg, tiles, w)
            s = glues_bind(t.glue(d.index), other.glue(opposite_index(d.index)))
            if s > 0:
                edges[_edge(v, w)] = s
    return BindingGraph(cfg.domain, edges)


def cut_strength(g: BindingGraph, cut: tuple[Iterable[Point], Iterable[Point]]) -> int:
    """Total strength of edges crossing a two-sided vertex partition."""
    side_a, side_b = frozenset(cut[0]), frozenset(cut[1])
    if not side_a or not side_b:
        raise ValueError("both sides of a cut must be nonempty")
    if side_a & side_b or (side_a | side_b) != g.vertices:
        raise ValueError("cut must partition the vertex set")
    total = 0
    for (u, v), s in g.edges.items():
        if (u in side_a) != (v in side_a):
            total += s
    return total


def binding_strength(g: BindingGraph) -> float:
    """Minimum cut strength over all cuts; graphs with <= 1 vertex are
    unseverable and return infinity."""
    n = len(g.vertices)
    if n <= 1:
        return math.inf
    graph = nx.Graph()
    graph.add_nodes_from(g.vertices)
    for (u, v), s in g.edges.items():
        graph.add_edge(u, v, weight=s)
    if not nx.is_connected(graph):
        return 0
    value, _ = nx.stoer_wagner(graph)
    return value


def is_tau_stable(cfg: Configuration, tiles: Mapping[str, TileType], temperature: int) -> bool:
    """Whether every cut of the binding graph meets the temperature."""
    return binding_strength(build_binding_graph(cfg, tiles)) >= temperature


def attachment_strength(cfg: Configuration, tiles: Mapping[str, TileType],
                        t: TileType, v: Point) -> int:
    """Total strength with which tile type t would bind at empty location v."""
    total = 0
    for d in directions(cfg.k):
        w = add(v, d.vector)
        name = cfg.get(w)
        if name is None:
            continue
        total += glues_bind(t.glue(d.index), tiles[name].glue(opposite_index(d.index)))
    return total


def _candidate_sites(cfg: Configuration) -> set:
    """Empty cells adjacent to the occupied domain (window-clipped)."""
    dirs = directions(cfg.k)
    out = set()
    for v, _ in cfg.items():
        for d in dirs:
            w = add(v, d.vector)
            if w in cfg:
                continue
            if cfg.window is not None and not cfg.window.contains(w):
                continue
            out.add(w)
    return out


def frontier_for_type(cfg: Configuration, tiles: Mapping[str, TileType],
                      temperature: int, t: TileType) -> set:
    """Empty locations where t binds with total strength >= temperature.

    For temperature <= 0 every empty cell qualifies, so a window is required
    to keep the answer finite.
    """
    if temperature <= 0:
        if cfg.window is None:
            raise ValueError("frontier at temperature <= 0 needs a window to stay finite")
        return {v for v in cfg.window.vertices() if v not in cfg}
    return {
        v for v in _candidate_sites(cfg)
        if attachment_strength(cfg, tiles, t, v) >= temperature
    }


def frontier(cfg: Configuration, tiles: Mapping[str, TileType], temperature: int) -> set:
    """Union of the per-type frontiers: every legally attachable location."""
    out = set()
    for t in tiles.values():
        out |= frontier_for_type(cfg, tiles, temperature, t)
    return out


def attachments(cfg: Configuration, tiles: Mapping[str, TileType],
                temperature: int) -> dict:
    """Map of frontier location -> tuple of attachable tile names."""
    out: dict[Point, tuple[str, ...]] = {}
    if temperature <= 0:
        if cfg.window is None:
            raise ValueError("attachments at temperature <= 0 need a window to stay finite")
        names = tuple(tiles)
        return {v: names for v in cfg.window.vertices() if v not in cfg}
    for v in _candidate_sites(cfg):
        names = tuple(
            name for name, t in tiles.items()
            if attachment_strength(cfg, tiles, t, v) >= temperature
        )
        if names:
            out[v] = names
    return out


@dataclass(frozen=True)
class TileAssemblySystem:
    """Finite tile set, finite stable seed, and a temperature threshold."""

    tiles: Mapping[str, TileType]
    seed: Configuration
    temperature: int

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be a nonnegative integer")
        if self.temperature == 0:
            warnings.warn("temperature 0: every empty location is a frontier", stacklevel=2)
        ks = {t.k for t in self.tiles.values()}
        if len(ks) > 1:
            raise ValueError("tile set mixes dimensions")
        for name, t in self.tiles.items():
            if name != t.name:
                raise ValueError(f"tile registered under {name!r} but named {t.name!r}")
            if not name or any(c.isspace() for c in name):
                raise ValueError(f"tile name {name!r} must be nonempty without whitespace "
                                 "(trace records are space-separated)")
        for v, name in self.seed.items():
            if name not in self.tiles:
                raise ValueError(f"seed references undefined tile type {name!r} at {v}")
        if not is_tau_stable(self.seed, self.tiles, self.temperature):
            raise ValueError("seed assembly is not stable at the system temperature")

    @property
    def k(self) -> int:
        if self.tiles:
            return next(iter(self.tiles.values())).k
        return self.seed.k

    @property
    def colors(self) -> int:
        return max((t.color for t in self.tiles.values()), default=1)
