"""d-regular self-assembling agents with binding rules and messages.

Agents generalize tiles: each type carries d glue labels (canonical
direction order), a color, and a memoryless rule that may emit one bounded
message per side and may signal a detach intent.  Binding is governed by a
relation over glue-label pairs with an integer strength assignment; bonds
stabilize an agent when their total meets the temperature.

The model induces a one-round local transition law: given a cell's occupant
and its d neighbor glues and messages, it yields a probability distribution
over the next occupant.  Kinetics are controlled by three parameters:

* lambda_on -- total attachment probability at a cell where some agent type
  could bind stably, split uniformly over those types;
* epsilon   -- error rate: with this probability the candidate set widens to
  every agent type (errors strike only where some legal attachment exists);
* p_off     -- detachment probability for an occupant whose realized bond
  total is below the temperature (or whose rule signals detach), applied
  only when detachment is enabled.

Irreversible, error-free tile assembly is the special case
p_off = epsilon = 0.  Multiple nucleation places agents uniformly at random
with probability pi_nu per location, at stage 0 only.
"""

import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Mapping, NamedTuple, Optional, Sequence
from weakref import WeakKeyDictionary

from .lattice import Box, Mesh, Point, add, directions, opposite_index
from .rng import derive_seed
from .tiles import Configuration, TileAssemblySystem


@lru_cache(maxsize=32)
def neighbor_table(window) -> dict:
    """window vertex -> tuple of (direction index, neighbor, opposite index)
    for the in-window neighbors, in canonical direction order."""
    dirs = directions(window.k)
    table = {}
    for v in window.vertices():
        entries = []
        for d in dirs:
            w = add(v, d.vector)
            if window.contains(w):
                entries.append((d.index, w, opposite_index(d.index)))
        table[v] = tuple(entries)
    return table


@lru_cache(maxsize=32)
def vertex_list(window) -> tuple:
    return tuple(window.vertices())

MAX_SYMBOL_LENGTH = 8


class RuleOutput(NamedTuple):
    messages: tuple
    detach: bool = False


#: A memoryless message rule: (agent name, d neighbor glues, d incoming
#: messages, agent id or None) -> RuleOutput.  Entries are None when empty.
MessageRule = Callable[..., RuleOutput]

_RULES: dict[str, MessageRule] = {}


def register_rule(name: str):
    def deco(fn: MessageRule) -> MessageRule:
        if name in _RULES:
            raise ValueError(f"message rule {name!r} already registered")
        _RULES[name] = fn
        return fn
    return deco


def message_rule(name: str) -> MessageRule:
    try:
        return _RULES[name]
    except KeyError:
        raise KeyError(f"unknown message rule {name!r}; registered: {sorted(_RULES)}")


@register_rule("ping")
def _ping_rule(agent: str, glues, messages, my_id=None) -> RuleOutput:
    """Emit the symbol "p" on every side, unconditionally."""
    return RuleOutput(tuple("p" for _ in glues))


@dataclass(frozen=True)
class AgentType:
    """A finite-state unit: d glue labels, a color, an optional message rule."""

    name: str
    glues: tuple[Optional[str], ...]
    color: int = 1
    rule: Optional[str] = None

    def __post_init__(self):
        if len(self.glues) not in (4, 6):
            raise ValueError(f"agent {self.name!r} needs 4 or 6 glues, got {len(self.glues)}")
        if self.color < 1:
            raise ValueError(f"agent {self.name!r} color must be >= 1")

    @property
    def k(self) -> int:
        return len(self.glues) // 2

    @property
    def d(self) -> int:
        return len(self.glues)


class BindingRules:
    """Symmetric relation over glue labels with integer strengths.

    Strengths may be negative to model error-prone bonds; negative values
    only ever lower a bond total, never a probability.
    """

    def __init__(self, rules: Mapping[tuple[str, str], int] | Sequence[tuple[str, str, int]]):
        self._strengths: dict[tuple[str, str], int] = {}
        items = rules.items() if isinstance(rules, Mapping) else ((pair[:2], pair[2]) for pair in rules)
        for (a, b), s in items:
            key = (a, b) if a <= b else (b, a)
            if key in self._strengths and self._strengths[key] != s:
                raise ValueError(f"conflicting strengths for rule {key}")
            self._strengths[key] = int(s)

    def bond(self, a: Optional[str], b: Optional[str]) -> int:
        if a is None or b is None:
            return 0
        key = (a, b) if a <= b else (b, a)
        return self._strengths.get(key, 0)

    def pairs(self) -> dict[tuple[str, str], int]:
        return dict(self._strengths)

    def labels(self) -> set:
        out = set()
        for a, b in self._strengths:
            out.add(a)
            out.add(b)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, BindingRules) and self._strengths == other._strengths


@dataclass(frozen=True)
class Kinetics:
    lambda_on: float = 1.0
    detach: bool = False
    p_off: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.lambda_on <= 1.0:
            raise ValueError(f"lambda_on must lie in (0, 1], got {self.lambda_on}")
        if not 0.0 <= self.p_off < 1.0:
            raise ValueError(f"p_off must lie in [0, 1), got {self.p_off}")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str
    path: str = ""

    def as_dict(self) -> dict:
        return {"severity": self.severity, "code": self.code,
                "message": self.message, "path": self.path}


class ModelValidationError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.message for d in self.diagnostics))


@dataclass(frozen=True, eq=False)
class AgentModel:
    """Agent types, binding rules, temperature, seed, nucleation, kinetics.

    Compares and hashes by identity (it holds mappings); a model is built
    once and shared.
    """

    types: Mapping[str, AgentType]
    rules: BindingRules
    temperature: int
    seed: Mapping[Point, str] = field(default_factory=dict)
    pi_nu: float = 0.0
    kinetics: Kinetics = Kinetics()
    messages: tuple[str, ...] = ()
    use_ids: bool = False
    k: int = 2

    def __post_init__(self):
        errors = [d for d in validate_model(self) if d.severity == "error"]
        if errors:
            raise ModelValidationError(errors)

    @property
    def d(self) -> int:
        return 2 * self.k

    @property
    def type_names(self) -> tuple[str, ...]:
        return tuple(self.types)

    @property
    def glue_labels(self) -> set:
        out = set()
        for t in self.types.values():
            out |= {g for g in t.glues if g is not None}
        return out

    @property
    def colors(self) -> int:
        return max((t.color for t in self.types.values()), default=1)


def validate_model(model: AgentModel, strict: bool = False) -> list[Diagnostic]:
    """Machine-readable diagnostics; severity "error" makes a model unusable."""
    diags: list[Diagnostic] = []

    def err(code, message, path=""):
        diags.append(Diagnostic("error", code, message, path))

    def warn(code, message, path=""):
        diags.append(Diagnostic("warning", code, message, path))

    if model.k not in (2, 3):
        err("bad-dimension", f"dimension {model.k} unsupported; only 2 and 3", "k")
    if not model.types:
        err("no-agents", "model declares no agent types", "agents")
    if not 0.0 <= model.pi_nu <= 1.0:
        err("bad-pi-nu", f"pi_nu {model.pi_nu} outside [0, 1]", "pi_nu")
    if model.temperature < 0:
        err("bad-temperature", "temperature must be nonnegative", "temperature")
    elif model.temperature == 0:
        warn("temperature-zero", "temperature 0: every location accepts every type",
             "temperature")
    for name, t in model.types.items():
        if name != t.name:
            err("name-mismatch", f"agent registered as {name!r} but named {t.name!r}",
                f"agents.{name}")
        if not name or any(c.isspace() for c in name):
            err("bad-name", f"agent name {name!r} must be nonempty without whitespace "
                "(trace records are space-separated)", f"agents.{name}")
        if t.d != model.d:
            err("bad-glue-count",
                f"agent {name!r} has {t.d} glues; dimension {model.k} needs {model.d}",
                f"agents.{name}.glues")
        if t.rule is not None and t.rule not in _RULES:
            err("unknown-rule", f"agent {name!r} names unknown message rule {t.rule!r}",
                f"agents.{name}.rule")
    agent_labels = model.glue_labels
    for (a, b), s in model.rules.pairs().items():
        for label in (a, b):
            if label not in agent_labels:
                err("dangling-rule",
                    f"binding rule ({a!r}, {b!r}) uses label {label!r} carried by no agent",
                    "rules")
        if s < 0 and strict:
            warn("negative-strength",
                 f"rule ({a!r}, {b!r}) has negative strength {s}; "
                 "strict nonnegativity was requested", "rules")
    for v, name in model.seed.items():
        if len(v) != model.k:
            err("bad-seed-location", f"seed location {v} is not {model.k}-dimensional",
                "seed")
        if name not in model.types:
            err("bad-seed-type", f"seed names undefined agent type {name!r} at {v}", "seed")
    for sym in model.messages:
        if not sym or len(sym) > MAX_SYMBOL_LENGTH:
            err("bad-symbol",
                f"message symbol {sym!r} must be 1..{MAX_SYMBOL_LENGTH} characters",
                "messages")
    return diags


class TransitionLaw:
    """One-round local update law induced by a model's binding rules.

    Maps (occupant or None, d neighbor glues, d neighbor messages) to a
    probability distribution over the next occupant; for every input the
    probabilities sum to one exactly.
    """

    def __init__(self, model: AgentModel):
        self.model = model
        self._cache: dict = {}

    def bond_total(self, type_name: str, glues: Sequence[Optional[str]]) -> int:
        t = self.model.types[type_name]
        rules = self.model.rules
        return sum(rules.bond(t.glues[i], g) for i, g in enumerate(glues))

    def candidates(self, glues: Sequence[Optional[str]]) -> tuple[str, ...]:
        """Agent types whose bond total against these glues meets the temperature."""
        tau = self.model.temperature
        return tuple(
            name for name in self.model.types
            if self.bond_total(name, glues) >= tau
        )

    def _detach_intent(self, type_name: str, glues, messages) -> bool:
        rule = self.model.types[type_name].rule
        if rule is None:
            return False
        return message_rule(rule)(type_name, tuple(glues), tuple(messages), None).detach

    def distribution(self, occupant: Optional[str], glues, messages) -> dict:
        """Exact next-occupant distribution for one cell; keys are agent
        names plus None for empty."""
        return dict(self._distribution(occupant, tuple(glues), tuple(messages)))

    def _distribution(self, occupant, glues, messages) -> dict:
        # the input domain is finite, so memoize; callers must not mutate
        key = (occupant, glues, messages)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        dist = self._compute_distribution(occupant, glues, messages)
        self._cache[key] = dist
        return dist

    def _compute_distribution(self, occupant, glues, messages) -> dict:
        kin = self.model.kinetics
        if occupant is not None:
            if occupant not in self.model.types:
                raise KeyError(f"unknown occupant type {occupant!r}")
            unstable = self.bond_total(occupant, glues) < self.model.temperature
            if kin.detach and (unstable or self._detach_intent(occupant, glues, messages)):
                return {occupant: 1.0 - kin.p_off, None: kin.p_off}
            return {occupant: 1.0}
        stable = self.candidates(glues)
        if not stable:
            return {None: 1.0}
        dist: dict[Optional[str], float] = {}
        stable_set = set(stable)
        share_stable = (1.0 - kin.epsilon) * kin.lambda_on / len(stable)
        share_any = kin.epsilon * kin.lambda_on / len(self.model.types)
        attach_mass = 0.0
        for name in self.model.types:
            p = share_any + (share_stable if name in stable_set else 0.0)
            if p > 0.0:
                dist[name] = p
                attach_mass += p
        if kin.lambda_on < 1.0:
            dist[None] = 1.0 - attach_mass
        return dist

    def sample(self, occupant: Optional[str], glues, messages,
               rng: random.Random) -> Optional[str]:
        dist = self._distribution(occupant, tuple(glues), tuple(messages))
        if len(dist) == 1:
            return next(iter(dist))
        r = rng.random()
        acc = 0.0
        last = None
        for key, p in dist.items():
            acc += p
            last = key
            if r < acc:
                return key
        return last

    def forced(self, occupant: Optional[str], glues, messages) -> bool:
        """True when the next state is deterministic (a single-outcome law)."""
        return len(self._distribution(occupant, tuple(glues), tuple(messages))) == 1


def induce_transition_law(model: AgentModel) -> TransitionLaw:
    return TransitionLaw(model)


_LAWS = WeakKeyDictionary()


def law_for(model: AgentModel) -> TransitionLaw:
    """Shared per-model law instance, so its distribution memo is reused."""
    law = _LAWS.get(model)
    if law is None:
        law = TransitionLaw(model)
        _LAWS[model] = law
    return law


@dataclass(frozen=True)
class SurfaceState:
    """Occupancy, per-side outgoing messages, and ids of agents on a window."""

    occupancy: Mapping[Point, str]
    window: Mesh | Box
    out_messages: Mapping[Point, tuple] = field(default_factory=dict)
    ids: Mapping[Point, int] = field(default_factory=dict)
    stage: int = 0
    next_id: int = 0

    def occupant(self, v: Point) -> Optional[str]:
        return self.occupancy.get(v)

    def as_configuration(self) -> Configuration:
        return Configuration(dict(self.occupancy), self.window, self.window.k)


def initial_state(model: AgentModel, window: Mesh | Box) -> SurfaceState:
    """Stage-0 state holding just the seed assembly (before any nucleation)."""
    for v in model.seed:
        if not window.contains(v):
            raise ValueError(f"seed location {v} lies outside the window")
    occupancy = dict(model.seed)
    next_id = 0
    ids = {}
    if model.use_ids:
        for v in sorted(occupancy):
            ids[v] = next_id
            next_id += 1
    state = SurfaceState(occupancy, window, {}, ids, stage=0, next_id=next_id)
    return replace(state, out_messages=_recompute_messages(state, model, state))


def surface_inputs(state: SurfaceState, model: AgentModel, v: Point):
    """(glues, messages) seen by location v: per canonical direction, the
    facing glue label and outgoing message of the occupied neighbor, or
    None for empty and off-window directions."""
    glues = [None] * model.d
    msgs = [None] * model.d
    occupancy = state.occupancy
    for i, w, j in neighbor_table(state.window)[v]:
        occ = occupancy.get(w)
        if occ is not None:
            glues[i] = model.types[occ].glues[j]
            out = state.out_messages.get(w)
            if out:
                msgs[i] = out[j]
    return tuple(glues), tuple(msgs)


def has_occupied_neighbor(state: SurfaceState, model: AgentModel, v: Point) -> bool:
    occupancy = state.occupancy
    return any(w in occupancy for _, w, _ in neighbor_table(state.window)[v])


def _recompute_messages(pre: SurfaceState, model: AgentModel,
                        post: SurfaceState) -> dict:
    """Outgoing messages for every occupied cell of `post`, with rules fed
    the inputs that were visible during the step (from `pre`)."""
    if all(t.rule is None for t in model.types.values()):
        return {}  # silent agents: absent entries read as no message
    out: dict[Point, tuple] = {}
    no_msgs = (None,) * model.d
    for v, name in post.occupancy.items():
        rule_name = model.types[name].rule
        if rule_name is None:
            out[v] = no_msgs
            continue
        glues, msgs = surface_inputs(pre, model, v)
        my_id = post.ids.get(v) if model.use_ids else None
        result = message_rule(rule_name)(name, glues, msgs, my_id)
        if len(result.messages) != model.d:
            raise ValueError(f"rule {rule_name!r} emitted {len(result.messages)} messages; "
                             f"expected {model.d}")
        for sym in result.messages:
            if sym is not None and sym not in model.messages:
                raise ValueError(f"rule {rule_name!r} emitted {sym!r}, "
                                 "not in the declared message alphabet")
        out[v] = tuple(result.messages)
    return out


def nucleate(state: SurfaceState, model: AgentModel, rng: random.Random) -> SurfaceState:
    """Round-0 multiple nucleation: each empty location independently
    receives a uniformly random agent type with probability pi_nu."""
    if state.stage != 0:
        raise ValueError("nucleation happens at stage 0 only")
    names = model.type_names
    occupancy = dict(state.occupancy)
    ids = dict(state.ids)
    next_id = state.next_id
    for v in state.window.vertices():
        if v in occupancy:
            continue
        if rng.random() < model.pi_nu:
            occupancy[v] = names[rng.randrange(len(names))]
            if model.use_ids:
                ids[v] = next_id
                next_id += 1
    nucleated = SurfaceState(occupancy, state.window, {}, ids, stage=0, next_id=next_id)
    return replace(nucleated, out_messages=_recompute_messages(nucleated, model, nucleated))


SCHEDULERS = ("sequential", "synchronous")


def model_step(state: SurfaceState, model: AgentModel, scheduler: str,
               rng: random.Random) -> SurfaceState:
    """One stage of model dynamics.

    "sequential" updates a single uniformly chosen location; "synchronous"
    samples every location's transition law simultaneously from the
    pre-round state, exactly as one round of the processor-mesh simulation.
    Locations with no occupied neighbor idle: an attachment needs a bond
    partner, and an isolated occupant hears no messages to react to.
    """
    if scheduler not in SCHEDULERS:
        raise ValueError(f"unknown scheduler {scheduler!r}; choose from {SCHEDULERS}")
    law = law_for(model)
    occupancy = dict(state.occupancy)
    ids = dict(state.ids)
    next_id = state.next_id

    def update_cell(v: Point, make_rng):
        nonlocal next_id
        if not has_occupied_neighbor(state, model, v):
            return
        glues, msgs = surface_inputs(state, model, v)
        old = state.occupancy.get(v)
        if law.forced(old, glues, msgs):
            new = law.sample(old, glues, msgs, None)
        else:
            new = law.sample(old, glues, msgs, make_rng())
        if new == old:
            return
        if new is None:
            occupancy.pop(v, None)
            ids.pop(v, None)
        else:
            occupancy[v] = new
            if model.use_ids:
                ids[v] = next_id
                next_id += 1

    if scheduler == "sequential":
        cells = vertex_list(state.window)
        update_cell(cells[rng.randrange(len(cells))], lambda: rng)
    else:
        step_seed = rng.getrandbits(64)
        table = neighbor_table(state.window)
        active = set()
        for v in state.occupancy:
            for _, w, _ in table[v]:
                active.add(w)
        for v in sorted(active):
            update_cell(v, lambda v=v: random.Random(derive_seed(step_seed, v)))

    post = SurfaceState(occupancy, state.window, {}, ids,
                        stage=state.stage + 1, next_id=next_id)
    return replace(post, out_messages=_recompute_messages(state, model, post))


def embed_tile_system(system: TileAssemblySystem) -> AgentModel:
    """Recast a tile assembly system as a model of message-free agents.

    Tile glues become agent glue labels that fold the strength into the
    label, so two sides bind exactly when the original glues were equal;
    each distinct positive glue yields one self-binding rule at its
    strength.  Dynamics are irreversible and error-free, with no
    nucleation: frontier growth matches the tile engine stage for stage.
    """
    label_strength: dict[str, int] = {}
    agents: dict[str, AgentType] = {}
    for name, t in system.tiles.items():
        labels = []
        for g in t.glues:
            if g.strength > 0:
                mangled = f"{g.label}~{g.strength}"
                label_strength[mangled] = g.strength
                labels.append(mangled)
            else:
                labels.append(None)
        agents[name] = AgentType(name, tuple(labels), t.color)
    rules = BindingRules({(lbl, lbl): s for lbl, s in label_strength.items()})
    return AgentModel(
        types=agents,
        rules=rules,
        temperature=system.temperature,
        seed=system.seed.cells(),
        pi_nu=0.0,
        kinetics=Kinetics(lambda_on=1.0, detach=False, p_off=0.0, epsilon=0.0),
        messages=(),
        use_ids=False,
        k=system.k,
    )
