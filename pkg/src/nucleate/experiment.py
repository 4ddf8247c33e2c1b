"""Experiment campaigns and the mesh-vs-model fidelity driver.

A campaign runs independent simulation trials per surface size and scores
each against the success predicate "after exactly t rounds the surface is
fully covered and weakly colored".  Solving later than the budget counts as
failure: the question under test is what a constant round budget can do as
the surface grows.  Reported uncertainty is a 95% Wilson interval.

The fidelity driver compares, on a small mesh, the one-round outcome
distribution of the processor network against the one-step distribution of
the synchronous model dynamics, and both against the exact per-location
product law computed by direct enumeration.
"""

import csv
import io
import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt
from typing import Optional

from .agents import AgentModel, initial_state, message_rule, model_step
from .coloring import check_weak_coloring
from .lattice import Mesh, add, directions, opposite_index
from .meshnet import MeshNetwork
from .rng import derive_seed, derived_rng

THREADS_ENV = "NUCLEATE_THREADS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% confidence interval for a binomial proportion (Wilson score)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return (lo, hi)


@dataclass(frozen=True)
class ExperimentSpec:
    model: AgentModel
    sizes: tuple[int, ...]
    rounds: int
    trials: int
    master_seed: int = 0
    track_rounds_to_valid: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if list(self.sizes) != sorted(self.sizes) or len(set(self.sizes)) != len(self.sizes):
            raise ValueError("sizes must be strictly ascending")
        if self.rounds < 0:
            raise ValueError("round budget must be nonnegative")


@dataclass(frozen=True)
class SizeOutcome:
    size: int
    trials: int
    successes: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    mean_rounds_to_valid: Optional[float] = None


@dataclass(frozen=True)
class ExperimentResult:
    model_hash: str
    master_seed: int
    rounds: int
    trials: int
    outcomes: tuple[SizeOutcome, ...]


def surface_success(net: MeshNetwork) -> bool:
    """Full coverage plus a valid weak coloring of the extracted surface."""
    if len(net.states) != net.mesh.size:
        return False
    _, col = net.extract_configuration()
    return check_weak_coloring(col).valid


def _run_trial(model: AgentModel, size: int, seed: int, rounds: int,
               track: bool) -> tuple[bool, Optional[int]]:
    net = MeshNetwork(model, size, master_seed=seed, record_trace=False)
    net.init_round0()
    first_valid = 0 if (track and surface_success(net)) else None
    for r in range(1, rounds + 1):
        net.run_round()
        if track and first_valid is None and surface_success(net):
            first_valid = r
    return surface_success(net), first_valid


def run_experiment(spec: ExperimentSpec, model_hash: str = "") -> ExperimentResult:
    """Run every (size, trial) campaign; trials are independent and may run
    on a small thread pool capped by NUCLEATE_THREADS."""
    outcomes = []
    workers = worker_count()
    for size in spec.sizes:
        def one(trial: int):
            seed = derive_seed(spec.master_seed, size, trial)
            return _run_trial(spec.model, size, seed, spec.rounds,
                              spec.track_rounds_to_valid)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(one, range(spec.trials)))
        else:
            results = [one(t) for t in range(spec.trials)]
        successes = sum(1 for ok, _ in results if ok)
        rounds_to_valid = [r for _, r in results if r is not None]
        lo, hi = wilson_interval(successes, spec.trials)
        outcomes.append(SizeOutcome(
            size=size,
            trials=spec.trials,
            successes=successes,
            p_hat=successes / spec.trials,
            ci_lo=lo,
            ci_hi=hi,
            mean_rounds_to_valid=(sum(rounds_to_valid) / len(rounds_to_valid)
                                  if rounds_to_valid else None),
        ))
    return ExperimentResult(model_hash, spec.master_seed, spec.rounds,
                            spec.trials, tuple(outcomes))


CSV_COLUMNS = ("n", "trials", "successes", "p_hat", "ci_lo", "ci_hi")


def experiment_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for o in result.outcomes:
        writer.writerow([o.size, o.trials, o.successes,
                         repr(o.p_hat), repr(o.ci_lo), repr(o.ci_hi)])
    return buf.getvalue()


def parse_experiment_csv(text: str) -> list[dict]:
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append({
            "n": int(row["n"]),
            "trials": int(row["trials"]),
            "successes": int(row["successes"]),
            "p_hat": float(row["p_hat"]),
            "ci_lo": float(row["ci_lo"]),
            "ci_hi": float(row["ci_hi"]),
        })
    return rows


def experiment_json(result: ExperimentResult) -> str:
    doc = {
        "model": result.model_hash,
        "seed": result.master_seed,
        "rounds": result.rounds,
        "trials": result.trials,
        "outcomes": [
            {
                "n": o.size,
                "trials": o.trials,
                "successes": o.successes,
                "p_hat": o.p_hat,
                "ci_lo": o.ci_lo,
                "ci_hi": o.ci_hi,
                "mean_rounds_to_valid": o.mean_rounds_to_valid,
            }
            for o in result.outcomes
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_experiment_json(text: str) -> ExperimentResult:
    doc = json.loads(text)
    return ExperimentResult(
        model_hash=doc["model"],
        master_seed=doc["seed"],
        rounds=doc["rounds"],
        trials=doc["trials"],
        outcomes=tuple(
            SizeOutcome(o["n"], o["trials"], o["successes"], o["p_hat"],
                        o["ci_lo"], o["ci_hi"], o["mean_rounds_to_valid"])
            for o in doc["outcomes"]
        ),
    )


# -- fidelity ----------------------------------------------------------

MAX_FIDELITY_SIDE = 3


def exact_round_law(model: AgentModel, side: int) -> dict:
    """Per-location next-occupant distributions after one round from the
    seed-only state, by direct enumeration of bond sums.

    This is an independent evaluation path: it recomputes candidate sets
    and kinetics arithmetic from the model definition rather than calling
    the shared transition-law object.  Locations with no occupied neighbor
    idle, mirroring the no-message branches of the round loop.
    """
    if model.pi_nu != 0:
        raise ValueError("exact one-round law needs a deterministic start; set pi_nu = 0")
    mesh = Mesh(model.k, side)
    dirs = directions(model.k)
    kin = model.kinetics
    occupied = dict(model.seed)
    law: dict = {}
    for v in mesh.vertices():
        facing = []
        has_neighbor = False
        for d in dirs:
            w = add(v, d.vector)
            occ = occupied.get(w) if mesh.contains(w) else None
            if occ is None:
                facing.append(None)
            else:
                has_neighbor = True
                facing.append(model.types[occ].glues[opposite_index(d.index)])
        current = occupied.get(v)
        if not has_neighbor:
            law[v] = {current: 1.0}
            continue
        if current is None:
            stable = []
            for name, t in model.types.items():
                total = sum(model.rules.bond(t.glues[i], g) for i, g in enumerate(facing))
                if total >= model.temperature:
                    stable.append(name)
            if not stable:
                law[v] = {None: 1.0}
                continue
            dist = {}
            attach = 0.0
            for name in model.types:
                p = kin.epsilon * kin.lambda_on / len(model.types)
                if name in stable:
                    p += (1 - kin.epsilon) * kin.lambda_on / len(stable)
                if p > 0:
                    dist[name] = p
                    attach += p
            dist[None] = 1.0 - attach
            law[v] = dist
        else:
            t = model.types[current]
            total = sum(model.rules.bond(t.glues[i], g) for i, g in enumerate(facing))
            intent = False
            if t.rule is not None:
                intent = message_rule(t.rule)(current, tuple(facing),
                                              (None,) * model.d, None).detach
            if kin.detach and (total < model.temperature or intent):
                law[v] = {current: 1.0 - kin.p_off, None: kin.p_off}
            else:
                law[v] = {current: 1.0}
    return law


def product_law(per_cell: dict) -> dict:
    """Joint distribution over surface outcomes from independent cells.

    Keys are frozensets of (location, agent type) pairs for occupied cells.
    """
    active = [(v, dist) for v, dist in sorted(per_cell.items()) if len(dist) > 1]
    fixed = frozenset(
        (v, next(iter(dist)))
        for v, dist in per_cell.items()
        if len(dist) == 1 and next(iter(dist)) is not None
    )
    joint: dict = {}
    choices = [sorted(dist.items(), key=lambda kv: (kv[0] is None, kv[0] or "")) for _, dist in active]
    for combo in itertools.product(*choices):
        p = 1.0
        placed = set(fixed)
        for (v, _), (occupant, prob) in zip(active, combo):
            p *= prob
            if occupant is not None:
                placed.add((v, occupant))
        key = frozenset(placed)
        joint[key] = joint.get(key, 0.0) + p
    return joint


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


@dataclass(frozen=True)
class FidelityReport:
    side: int
    samples: int
    tv_mesh_vs_model: float
    tv_mesh_vs_exact: float
    tv_model_vs_exact: float
    support_exact: int
    support_mesh: int
    support_model: int
    supports_equal: bool
    per_cell_law: dict


def run_fidelity(model: AgentModel, side: int, samples: int,
                 master_seed: int = 0) -> FidelityReport:
    """Sample both simulators for one round/step and compare distributions."""
    if side > MAX_FIDELITY_SIDE:
        raise ValueError(f"fidelity windows are capped at "
                         f"{MAX_FIDELITY_SIDE}x{MAX_FIDELITY_SIDE}; got {side}")
    per_cell = exact_round_law(model, side)
    exact = product_law(per_cell)

    mesh_counts: dict = {}
    for i in range(samples):
        net = MeshNetwork(model, side, master_seed=derive_seed(master_seed, "mesh", i),
                          record_trace=False)
        net.init_round0()
        net.run_round()
        key = frozenset(net.states.items())
        mesh_counts[key] = mesh_counts.get(key, 0) + 1

    window = Mesh(model.k, side)
    start = initial_state(model, window)
    model_counts: dict = {}
    for i in range(samples):
        rng = derived_rng(master_seed, "model", i)
        after = model_step(start, model, "synchronous", rng)
        key = frozenset(after.occupancy.items())
        model_counts[key] = model_counts.get(key, 0) + 1

    mesh_emp = {k: c / samples for k, c in mesh_counts.items()}
    model_emp = {k: c / samples for k, c in model_counts.items()}
    exact_support = {k for k, p in exact.items() if p > 0}
    return FidelityReport(
        side=side,
        samples=samples,
        tv_mesh_vs_model=total_variation(mesh_emp, model_emp),
        tv_mesh_vs_exact=total_variation(mesh_emp, exact),
        tv_model_vs_exact=total_variation(model_emp, exact),
        support_exact=len(exact_support),
        support_mesh=len(mesh_emp),
        support_model=len(model_emp),
        supports_equal=set(mesh_emp) == exact_support == set(model_emp),
        per_cell_law=per_cell,
    )


def fidelity_document(report: FidelityReport) -> dict:
    return {
        "side": report.side,
        "samples": report.samples,
        "tv_mesh_vs_model": report.tv_mesh_vs_model,
        "tv_mesh_vs_exact": report.tv_mesh_vs_exact,
        "tv_model_vs_exact": report.tv_model_vs_exact,
        "support": {
            "exact": report.support_exact,
            "mesh": report.support_mesh,
            "model": report.support_model,
            "equal": report.supports_equal,
        },
        "per_cell_law": {
            ",".join(str(c) for c in v): {name or "EMPTY": p for name, p in dist.items()}
            for v, dist in sorted(report.per_cell_law.items())
        },
    }
