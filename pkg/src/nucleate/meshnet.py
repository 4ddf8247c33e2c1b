"""Synchronous mesh-of-processors simulation of an agent model.

One processor per surface location, n^k in all.  A processor holds d input
and d output buffers (each one <glue, message> pair or empty), a COLOR
variable, and a local state that is either an agent type or EMPTY.  Rounds
are synchronized and two-phase: messages posted in round r-1 are delivered
at the start of round r, then every processor computes against that
snapshot, so no partial-round interleaving is representable.

Processors that hear nothing do nothing: an EMPTY processor stays EMPTY and
an occupied one keeps re-posting its pairs.  Everything else samples the
model's one-round transition law.  Per-processor randomness is derived from
(master seed, coordinates, round), which makes parallel and sequential
round evaluation produce identical traces.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .agents import AgentModel, law_for, message_rule, neighbor_table
from .coloring import Coloring
from .lattice import Mesh, Point
from .rng import derive_seed, derived_rng
from .tiles import Configuration

#: What a processor posts per side: (glue label or None, message or None).
Pair = tuple[Optional[str], Optional[str]]


class TraceEvent(NamedTuple):
    round: int
    coordinates: Point
    old: Optional[str]
    new: Optional[str]


class MessageBoundError(AssertionError):
    """A posted payload escaped the model's declared finite sets."""


@dataclass(frozen=True)
class ProcessorView:
    """Snapshot of one processor's buffers and registers."""

    coordinates: Point
    state: Optional[str]  # agent type name, or None for EMPTY
    color: Optional[int]
    inputs: tuple
    outputs: tuple
    stream_seed: int


class AccessProbe:
    """Records which processor's data each update read, for locality audits."""

    def __init__(self):
        self.reads: list[tuple[Point, Point]] = []

    def log(self, reader: Point, source: Point) -> None:
        self.reads.append((reader, source))

    def violations(self, mesh: Mesh) -> list[tuple[Point, Point]]:
        out = []
        for reader, source in self.reads:
            if source != reader and source not in mesh.neighbors(reader):
                out.append((reader, source))
        return out


class MeshNetwork:
    """n^k processors wired as a k-dimensional mesh, simulating a model."""

    def __init__(self, model: AgentModel, side: int, master_seed: int = 0,
                 record_trace: bool = True):
        self.model = model
        self.mesh = Mesh(model.k, side)
        self.master_seed = master_seed
        self.law = law_for(model)
        self.round = 0
        self.states: dict[Point, str] = {}
        self.colors: dict[Point, int] = {}
        self.outputs: dict[Point, tuple] = {}
        self.inputs: dict[Point, tuple] = {}
        self.ids: dict[Point, int] = {}
        self.next_id = 0
        self.trace: list[TraceEvent] = [] if record_trace else None
        self._table = neighbor_table(self.mesh)
        self._started = False
        # An occupied processor with no detachment and no message rule can
        # never change state nor vary its posts, so rounds only need to feed
        # processors that can react: EMPTY ones next to the occupied
        # boundary.  _boundary tracks occupied cells with an empty neighbor.
        self._static_occupants = (not model.kinetics.detach) and all(
            t.rule is None for t in model.types.values())
        self._boundary: set = set()

    # -- round 0 -------------------------------------------------------

    def init_round0(self) -> None:
        """Place the seed assembly, then wake every other processor with
        probability pi_nu into a uniformly random non-EMPTY state."""
        if self._started:
            raise ValueError("network already initialized")
        self._started = True
        model = self.model
        for v, name in model.seed.items():
            if not self.mesh.contains(v):
                raise ValueError(f"seed location {v} lies outside the mesh")
            self._enter(v, name)
        names = model.type_names
        if model.pi_nu > 0:
            for v in self.mesh.vertices():
                if v in self.states:
                    continue
                rng = derived_rng(self.master_seed, v, 0)
                if rng.random() < model.pi_nu:
                    self._enter(v, names[rng.randrange(len(names))])
        for v in sorted(self.states):
            self.outputs[v] = self._post(v, self.states[v],
                                         (None,) * model.d, (None,) * model.d)
            if self.trace is not None:
                self.trace.append(TraceEvent(0, v, None, self.states[v]))
        if self._static_occupants:
            for v, entries in self._table.items():
                if v in self.states and any(w not in self.states for _, w, _ in entries):
                    self._boundary.add(v)

    def _enter(self, v: Point, name: str) -> None:
        self.states[v] = name
        self.colors[v] = self.model.types[name].color
        if self.model.use_ids:
            self.ids[v] = self.next_id
            self.next_id += 1

    def _post(self, v: Point, name: str, glues_in, msgs_in) -> tuple:
        """Pairs an agent posts on each side: its glue plus its rule's message."""
        model = self.model
        t = model.types[name]
        rule_name = t.rule
        if rule_name is None:
            msgs_out = (None,) * model.d
        else:
            my_id = self.ids.get(v) if model.use_ids else None
            result = message_rule(rule_name)(name, tuple(glues_in), tuple(msgs_in), my_id)
            msgs_out = tuple(result.messages)
            if len(msgs_out) != model.d:
                raise MessageBoundError(
                    f"rule {rule_name!r} emitted {len(msgs_out)} messages, expected {model.d}")
        pairs = []
        labels = model.glue_labels
        for i in range(model.d):
            glue = t.glues[i]
            msg = msgs_out[i]
            if glue is not None and glue not in labels:
                raise MessageBoundError(f"glue {glue!r} escapes the model's glue set")
            if msg is not None and msg not in model.messages:
                raise MessageBoundError(f"message {msg!r} escapes the declared alphabet")
            pairs.append((glue, msg))
        return tuple(pairs)

    # -- rounds >= 1 ---------------------------------------------------

    def run_round(self, parallel: bool = False, probe: Optional[AccessProbe] = None) -> None:
        """Deliver last round's pairs, then update every processor that
        received at least one."""
        if not self._started:
            raise ValueError("call init_round0 first")
        self.round += 1
        r = self.round
        d = self.model.d
        table = self._table
        states = self.states
        static = self._static_occupants

        delivered: dict[Point, list] = {}
        senders = self._boundary if static else self.outputs
        for v in senders:
            pairs = self.outputs[v]
            for i, w, j in table[v]:
                if static and w in states:
                    continue  # occupied cells cannot react in this regime
                slot = delivered.get(w)
                if slot is None:
                    slot = [None] * d
                    delivered[w] = slot
                slot[j] = pairs[i]
                if probe is not None:
                    probe.log(w, v)
        self.inputs = {v: tuple(slot) for v, slot in delivered.items()}

        targets = sorted(delivered)
        law = self.law
        detach_on = self.model.kinetics.detach
        types = self.model.types

        def compute(v: Point):
            if probe is not None:
                probe.log(v, v)
            current = states.get(v)
            if current is not None and not detach_on and types[current].rule is None:
                return v, current, None, None  # nothing can change
            slot = delivered[v]
            glues = tuple(p[0] if p is not None else None for p in slot)
            msgs = tuple(p[1] if p is not None else None for p in slot)
            if law.forced(current, glues, msgs):
                return v, law.sample(current, glues, msgs, None), glues, msgs
            rng = derived_rng(self.master_seed, v, r)
            return v, law.sample(current, glues, msgs, rng), glues, msgs

        if parallel:
            with ThreadPoolExecutor() as pool:
                results = list(pool.map(compute, targets))
        else:
            results = [compute(v) for v in targets]

        for v, new, glues, msgs in results:
            old = states.get(v)
            if new != old:
                if self.trace is not None:
                    self.trace.append(TraceEvent(r, v, old, new))
                if new is None:
                    del states[v]
                    del self.colors[v]
                    self.ids.pop(v, None)
                    self.outputs.pop(v, None)
                    continue
                if old is None:
                    self._enter(v, new)
                else:
                    states[v] = new
                    self.colors[v] = types[new].color
                self.outputs[v] = self._post(v, new, glues, msgs)
                if static:
                    if any(w not in states for _, w, _ in table[v]):
                        self._boundary.add(v)
                    for _, w, _ in table[v]:
                        if w in self._boundary and all(
                                x in states for _, x, _ in table[w]):
                            self._boundary.discard(w)
            elif new is not None and types[new].rule is not None:
                # state kept, but the rule may emit different messages now
                self.outputs[v] = self._post(v, new, glues, msgs)

    def run(self, rounds: int, parallel: bool = False,
            probe: Optional[AccessProbe] = None) -> list[TraceEvent]:
        """Execute `rounds` synchronized rounds; returns the trace so far."""
        for _ in range(rounds):
            self.run_round(parallel=parallel, probe=probe)
        return list(self.trace) if self.trace is not None else []

    # -- observation ---------------------------------------------------

    def processor(self, v: Point) -> ProcessorView:
        self.mesh.require(v)
        d = self.model.d
        return ProcessorView(
            coordinates=v,
            state=self.states.get(v),
            color=self.colors.get(v),
            inputs=self.inputs.get(v, (None,) * d),
            outputs=self.outputs.get(v, (None,) * d),
            stream_seed=derive_seed(self.master_seed, v),
        )

    def extract_configuration(self) -> tuple[Configuration, Coloring]:
        """Read the simulated surface back out of the processor states."""
        cfg = Configuration(dict(self.states), self.mesh, self.model.k)
        col = Coloring(dict(self.colors), self.mesh, self.model.colors)
        return cfg, col
