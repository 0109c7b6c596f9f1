"""Per-agent state machine: constant-speed walking, threshold stops,
coin-flip restarts, and Gaussian reorientation with a sensitizing spread.

Every random draw comes from an explicitly passed ``numpy.random.Generator``.
A trial owns one seed; ``trial_streams`` splits it into one independent
stream for initialization plus one per agent, so each agent's behavior is
invariant to the order agents are processed in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, min_image_delta, wrap_torus

# numpy Generator backed by PCG64: identical seeds give identical draw
# sequences on every platform
RngStream = np.random.Generator


@dataclass(frozen=True)
class SimParams:
    """Simulation constants.

    Angles are radians, lengths mm, speeds mm/s, times s.  ``t_grm`` and
    ``t_loom`` are the stop thresholds (rad/s) on the two visual channels;
    32 rad/s acts as an "effectively disabled" sentinel but is treated as an
    ordinary value.
    """

    dt: float = 0.005
    arena: float = 50.0
    n_agents: int = 10
    body_length: float = 2.0
    d_eye: float = 0.55
    v_min: float = 10.0
    v_max: float = 30.0
    p_restart: float = 0.008
    t_loom: float = 32.0
    t_grm: float = 6.0
    cva: float = math.radians(30.0)
    ipsi_field: float = math.radians(120.0)
    sigma_jump: float = math.radians(30.0)
    sigma_decay: float = 0.992
    n_body_points: int = 14
    horizon_steps: int = 10000
    collision_distance: float = 1.2
    predict_horizon: float = 2.0

    def validate(self) -> "SimParams":
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.arena <= 0:
            raise ValueError("arena side must be positive")
        if self.n_agents < 1:
            raise ValueError("need at least one agent")
        if not 0 < self.v_min <= self.v_max:
            raise ValueError("need 0 < v_min <= v_max")
        if not 0.0 <= self.p_restart <= 1.0:
            raise ValueError("p_restart must be a probability")
        if not 0.0 <= self.sigma_decay <= 1.0:
            raise ValueError("sigma_decay must be in [0, 1]")
        if self.n_body_points != 14:
            raise ValueError("the body outline has exactly 14 points")
        if min(self.t_grm, self.t_loom, self.cva, self.sigma_jump,
               self.collision_distance, self.predict_horizon) < 0:
            raise ValueError("thresholds and distances must be non-negative")
        if not 0 < self.ipsi_field <= math.pi:
            raise ValueError("ipsilateral field must be in (0, pi]")
        if not 0 <= self.cva <= math.pi / 2:
            raise ValueError("cva must be in [0, pi/2]")
        if self.horizon_steps < 0:
            raise ValueError("horizon_steps must be non-negative")
        return self


@dataclass(eq=False)
class AgentState:
    """Pose and motion state of one agent.

    ``speed`` is fixed for the agent's lifetime; ``moving`` is the 0/1 walk
    flag and ``moving_prev`` its value on the previous step.  ``sigma`` is
    the standard deviation used for the reorientation draw at the next stop.
    """

    ident: int
    pos: np.ndarray
    heading: float
    speed: float
    moving: int = 1
    sigma: float = 0.0
    moving_prev: int = 1

    def velocity(self) -> np.ndarray:
        if not self.moving:
            return np.zeros(2)
        return self.speed * heading_unit(self.heading)


def heading_unit(heading: float) -> np.ndarray:
    return np.array([math.cos(heading), math.sin(heading)])


def make_rng(seed) -> RngStream:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def trial_streams(seed, n_agents: int) -> tuple[RngStream, list[RngStream]]:
    """Split a trial seed into an init stream plus one stream per agent."""
    children = np.random.SeedSequence(seed).spawn(n_agents + 1)
    init = np.random.Generator(np.random.PCG64(children[0]))
    agents = [np.random.Generator(np.random.PCG64(c)) for c in children[1:]]
    return init, agents


def init_agents(params: SimParams, rng: RngStream) -> list[AgentState]:
    """Place agents uniformly at random without initial overlap.

    Candidate positions are redrawn until every pairwise minimum-image
    center distance exceeds the collision distance; gives up after 10^4
    candidate draws (arena too crowded).
    """
    params.validate()
    placed: list[np.ndarray] = []
    attempts = 0
    while len(placed) < params.n_agents:
        attempts += 1
        if attempts > 10_000:
            raise RuntimeError(
                f"could not place {params.n_agents} agents without overlap "
                f"in a {params.arena}mm arena after 10^4 draws")
        candidate = rng.uniform(0.0, params.arena, size=2)
        deltas = [min_image_delta(candidate, p, params.arena) for p in placed]
        if all(float(d @ d) > params.collision_distance ** 2 for d in deltas):
            placed.append(candidate)
    speeds = rng.uniform(params.v_min, params.v_max, size=params.n_agents)
    headings = rng.uniform(0.0, TWO_PI, size=params.n_agents)
    return [
        AgentState(ident=i, pos=placed[i], heading=float(headings[i]),
                   speed=float(speeds[i]))
        for i in range(params.n_agents)
    ]


def control_step(state: AgentState, summary, params: SimParams,
                 rng: RngStream) -> int:
    """Next value of the walk flag given this step's percept summary.

    A walking agent stops iff the strongest GRM or the looming strength
    exceeds its threshold.  A stopped agent flips a coin every step and
    restarts only when the coin succeeds and both signals are strictly
    below threshold.
    """
    if state.moving:
        if summary.max_grm > params.t_grm or summary.omega_loom > params.t_loom:
            return 0
        return 1
    u = rng.random()
    if (summary.max_grm < params.t_grm and summary.omega_loom < params.t_loom
            and u < params.p_restart):
        return 1
    return 0


def reorient_on_stop(state: AgentState, rng: RngStream,
                     params: SimParams) -> tuple[float, float]:
    """Heading and sigma update for an agent stopping this step.

    Draws the new heading from a Gaussian centered on the current heading
    with the *pre-update* sigma, then applies the full per-step sigma
    recurrence ``sigma' = decay * sigma + jump``.  Callers must not apply
    the plain decay again for this agent on the same step.
    """
    new_heading = float(rng.normal(state.heading, state.sigma)) % TWO_PI
    new_sigma = params.sigma_decay * state.sigma + params.sigma_jump
    return new_heading, new_sigma


def decay_sigma(state: AgentState, params: SimParams) -> float:
    """Per-step geometric decay of the reorientation spread."""
    return params.sigma_decay * state.sigma


def advance(state: AgentState, params: SimParams) -> np.ndarray:
    """New wrapped position after one time step at the current walk flag."""
    step = state.moving * state.speed * params.dt
    return wrap_torus(state.pos + step * heading_unit(state.heading), params.arena)
