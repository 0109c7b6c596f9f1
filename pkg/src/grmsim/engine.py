"""Synchronous world stepping and full-trial execution.

One step: freeze the snapshot, compute every agent's percept summary from
it, apply the walk/stop control, reorient agents that just stopped, advance
everyone, then detect collisions and encounter transitions on the new
positions.  Stop records carry the positions and velocities every agent had
at the triggering snapshot, because classification later needs the state
"at the moment of the stop".

Everything is deterministic in (params, seed): agents are processed in
ident order and each consumes randomness only from its own stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import analysis, dynamics, perception
from .dynamics import AgentState, RngStream, SimParams
from .geometry import min_image_delta


@dataclass(frozen=True)
class StopRecord:
    """A single walk-to-stop transition, with the snapshot that caused it."""

    t: int
    agent: int
    cause_agents: frozenset[int]
    channel: str  # "GRM", "LOOM" or "both"
    frozen_velocities: dict[int, tuple[float, float]]
    frozen_positions: dict[int, tuple[float, float]]


@dataclass(frozen=True)
class CollisionRecord:
    """First step of a contact episode between a pair of agents."""

    t: int
    pair: tuple[int, int]


@dataclass(frozen=True)
class EncounterRecord:
    """A pair entering perception range (< arena/2) and separating again."""

    pair: tuple[int, int]
    t_enter: int
    t_exit: int


@dataclass
class StepEvents:
    stops: list[StopRecord] = field(default_factory=list)
    collisions: list[CollisionRecord] = field(default_factory=list)
    encounters: list[EncounterRecord] = field(default_factory=list)


@dataclass(eq=False)
class WorldState:
    """Frozen world at one time step, plus pair bookkeeping for debouncing."""

    time_step: int
    agents: list[AgentState]
    params: SimParams
    contacts: frozenset[tuple[int, int]] = frozenset()
    open_encounters: tuple[tuple[tuple[int, int], int], ...] = ()


def make_world(agents: list[AgentState], params: SimParams) -> WorldState:
    agents = sorted(agents, key=lambda a: a.ident)
    idents = [a.ident for a in agents]
    if len(set(idents)) != len(idents):
        raise ValueError("agent idents must be unique")
    return WorldState(0, agents, params)


def _pair_dist2(agents: list[AgentState], side: float) -> np.ndarray:
    pos = np.array([a.pos for a in agents])
    delta = min_image_delta(pos[:, None, :], pos[None, :, :], side)
    return (delta ** 2).sum(axis=-1)


def _pairs_below(agents, dist2: np.ndarray, threshold: float) -> set[tuple[int, int]]:
    hit = dist2 < threshold ** 2
    pairs = set()
    n = len(agents)
    for i in range(n):
        row = hit[i]
        for j in range(i + 1, n):
            if row[j]:
                pairs.add((agents[i].ident, agents[j].ident))
    return pairs


def _pair_set(agents: list[AgentState], side: float, threshold: float) -> set[tuple[int, int]]:
    return _pairs_below(agents, _pair_dist2(agents, side), threshold)


def detect_collisions(agents: list[AgentState], params: SimParams) -> list[tuple[int, int]]:
    """Pairs whose minimum-image center distance is below the collision distance."""
    return sorted(_pair_set(agents, params.arena, params.collision_distance))


def step(world: WorldState, rngs: list[RngStream]) -> tuple[WorldState, StepEvents]:
    """Advance the world one time step; returns the new world and its events."""
    params = world.params
    agents = world.agents
    t = world.time_step
    summaries = perception.world_summaries(agents, params)

    events = StepEvents()
    frozen_vel = frozen_pos = None
    new_agents = []
    for i, agent in enumerate(agents):
        new_moving = dynamics.control_step(agent, summaries[i], params, rngs[i])
        if agent.moving and not new_moving:
            heading, sigma = dynamics.reorient_on_stop(agent, rngs[i], params)
            if frozen_vel is None:
                frozen_vel, frozen_pos = {}, {}
                for a in agents:
                    vel = a.velocity()
                    frozen_vel[a.ident] = (float(vel[0]), float(vel[1]))
                    frozen_pos[a.ident] = (float(a.pos[0]), float(a.pos[1]))
            s = summaries[i]
            grm_hit = s.max_grm > params.t_grm
            loom_hit = s.omega_loom > params.t_loom
            channel = "both" if (grm_hit and loom_hit) else ("GRM" if grm_hit else "LOOM")
            causes = (s.grm_causes if grm_hit else frozenset()) | \
                     (s.loom_causes if loom_hit else frozenset())
            events.stops.append(StopRecord(
                t=t, agent=agent.ident, cause_agents=causes, channel=channel,
                frozen_velocities=frozen_vel, frozen_positions=frozen_pos))
        else:
            heading = agent.heading
            sigma = dynamics.decay_sigma(agent, params)
        successor = AgentState(
            ident=agent.ident, pos=agent.pos, heading=heading, speed=agent.speed,
            moving=new_moving, sigma=sigma, moving_prev=agent.moving)
        successor.pos = dynamics.advance(successor, params)
        new_agents.append(successor)

    dist2 = _pair_dist2(new_agents, params.arena)

    # collision detection with per-episode debouncing
    contact_now = _pairs_below(new_agents, dist2, params.collision_distance)
    for pair in sorted(contact_now - world.contacts):
        events.collisions.append(CollisionRecord(t=t + 1, pair=pair))

    # encounter episodes: pairs inside perception range (half the arena)
    seen_now = _pairs_below(new_agents, dist2, params.arena / 2.0)
    open_map = dict(world.open_encounters)
    for pair in sorted(seen_now - open_map.keys()):
        open_map[pair] = t + 1
    for pair in sorted(open_map.keys() - seen_now):
        events.encounters.append(EncounterRecord(pair, open_map.pop(pair), t + 1))

    new_world = WorldState(
        time_step=t + 1, agents=new_agents, params=params,
        contacts=frozenset(contact_now),
        open_encounters=tuple(sorted(open_map.items())))
    return new_world, events


@dataclass
class TrajectoryLog:
    """Dense per-step state record for rendering: step axis first."""

    pos: np.ndarray      # (steps+1, n, 2)
    heading: np.ndarray  # (steps+1, n)
    moving: np.ndarray   # (steps+1, n)


def run_trial(params: SimParams, seed: int,
              log_trajectories: bool = False) -> "analysis.TrialResult":
    """Run one seeded trial for ``params.horizon_steps`` steps and classify it."""
    params.validate()
    init_rng, agent_rngs = dynamics.trial_streams(seed, params.n_agents)
    world = make_world(dynamics.init_agents(params, init_rng), params)

    stops: list[StopRecord] = []
    collisions: list[CollisionRecord] = []
    encounters: list[EncounterRecord] = []
    pos_log, heading_log, moving_log = [], [], []

    def log(w: WorldState):
        pos_log.append([a.pos.copy() for a in w.agents])
        heading_log.append([a.heading for a in w.agents])
        moving_log.append([a.moving for a in w.agents])

    if log_trajectories:
        log(world)
    for _ in range(params.horizon_steps):
        world, events = step(world, agent_rngs)
        stops.extend(events.stops)
        collisions.extend(events.collisions)
        encounters.extend(events.encounters)
        if log_trajectories:
            log(world)

    trajectory = None
    if log_trajectories:
        trajectory = TrajectoryLog(
            pos=np.array(pos_log), heading=np.array(heading_log),
            moving=np.array(moving_log, dtype=int))

    labels = analysis.label_stops(
        stops, arena=params.arena, d_coll=params.collision_distance,
        horizon=params.predict_horizon)
    counts = analysis.count_events(
        stops, collisions, encounters, arena=params.arena,
        d_coll=params.collision_distance, horizon=params.predict_horizon)
    return analysis.TrialResult(
        params=params, seed=seed, counts=counts,
        metrics=analysis.counts_to_metrics(counts),
        stops=stops, stop_labels=labels, collisions=collisions,
        encounters=encounters, trajectory=trajectory)
