"""Two-eyed retinal model.

Each agent body is a fixed 14-point outline.  An observer projects every
point of every other agent onto each of its two eyes, keeps the points
inside that eye's visual field, and reads two scalar signals off the
resulting percepts:

* GRM: the largest magnitude of contralateral motion (counter-clockwise on
  the right eye, clockwise on the left eye);
* looming: the smaller of the strongest outward motions in the two body
  hemifields, so only bilaterally expanding stimuli register.

Both signals come with the set of agents that caused them.  The module has
two equivalent code paths: an object-level one (``project_points`` plus the
two detectors) and a vectorized one (``world_summaries``) used by the
engine's inner loop; their agreement is covered by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import AgentState, SimParams

# Body outline in the body frame (+y is the heading), mm.  Length 2, max
# width 0.9, left/right symmetric, with two midline points on the spine.
BODY_OUTLINE = np.array([
    (0.00, 1.00),
    (0.25, 0.85), (-0.25, 0.85),
    (0.40, 0.50), (-0.40, 0.50),
    (0.45, 0.00), (-0.45, 0.00),
    (0.40, -0.50), (-0.40, -0.50),
    (0.25, -0.85), (-0.25, -0.85),
    (0.00, -1.00),
    (0.00, 0.60), (0.00, -0.60),
])

# Eyes sit at the head end of the 2mm body, half the inter-eye distance to
# each side of the midline.
EYE_FORWARD = 0.7

EYE_SIDES = ("left", "right")

# Relative tolerance for attributing a percept maximum to several agents.
CAUSE_REL_TOL = 1e-12


@dataclass(frozen=True)
class EyeConfig:
    """One eye: body-frame offset and azimuthal field [field_lo, field_hi]."""

    side: str
    offset: tuple[float, float]
    field_lo: float
    field_hi: float


@dataclass(frozen=True)
class PointPercept:
    """One body point of one agent as seen by one eye of the observer.

    ``phi`` and ``phi_dot`` are measured about the eye center; ``phi_body``
    is the azimuth of the same point about the observer's body center and
    decides hemifield membership for looming.
    """

    source_agent: int
    point_index: int
    eye: str
    phi: float
    phi_dot: float
    phi_body: float


@dataclass(frozen=True)
class PerceptSummary:
    """Per-observer, per-step reduction of all percepts."""

    max_grm: float
    grm_causes: frozenset[int]
    omega_loom: float
    loom_causes: frozenset[int]


EMPTY_SUMMARY = PerceptSummary(0.0, frozenset(), 0.0, frozenset())


def eye_fields(cva: float, theta_i: float, d_eye: float = 0.55) -> tuple[EyeConfig, EyeConfig]:
    """Left and right eye configurations.

    The right eye covers azimuths [-theta_i, +cva], the left eye
    [-cva, +theta_i]: each field spans the ipsilateral side and crosses the
    midline by the contralateral visual angle.
    """
    if not 0.0 <= cva <= math.pi / 2:
        raise ValueError("cva must be in [0, pi/2]")
    if not 0.0 < theta_i <= math.pi:
        raise ValueError("theta_i must be in (0, pi]")
    left = EyeConfig("left", (-d_eye / 2.0, EYE_FORWARD), -cva, theta_i)
    right = EyeConfig("right", (d_eye / 2.0, EYE_FORWARD), -theta_i, cva)
    return left, right


def _snapshot(agents: list[AgentState]):
    pos = np.array([a.pos for a in agents])
    heading = np.array([a.heading for a in agents])
    vel = np.array([a.velocity() for a in agents])
    return pos, heading, vel


def _wrap(angles: np.ndarray) -> np.ndarray:
    return (angles + math.pi) % (2.0 * math.pi) - math.pi


def _percept_fields(pos, heading, vel, params: SimParams):
    """All pairwise retinal quantities for one frozen world snapshot.

    Returns arrays indexed (observer, eye, source, point) plus the
    body-centered azimuth indexed (observer, source, point).
    """
    n = pos.shape[0]
    side = params.arena
    ca = np.cos(heading - math.pi / 2.0)
    sa = np.sin(heading - math.pi / 2.0)

    bx, by = BODY_OUTLINE[:, 0], BODY_OUTLINE[:, 1]
    px = pos[:, 0, None] + ca[:, None] * bx - sa[:, None] * by      # (n, 14)
    py = pos[:, 1, None] + sa[:, None] * bx + ca[:, None] * by

    offs = eye_offsets(params.d_eye)
    # eye offsets rotated into the world frame, (n, 2 eyes)
    ex = pos[:, 0, None] + ca[:, None] * offs[:, 0] - sa[:, None] * offs[:, 1]
    ey = pos[:, 1, None] + sa[:, None] * offs[:, 0] + ca[:, None] * offs[:, 1]

    halfside = 0.5 * side
    dx = (px[None, None, :, :] - ex[:, :, None, None] + halfside) % side - halfside
    dy = (py[None, None, :, :] - ey[:, :, None, None] + halfside) % side - halfside
    d2 = dx * dx + dy * dy

    phi = _wrap(np.arctan2(dy, dx) - heading[:, None, None, None])

    rvx = vel[None, :, 0] - vel[:, None, 0]                          # (n, n)
    rvy = vel[None, :, 1] - vel[:, None, 1]
    with np.errstate(invalid="ignore", divide="ignore"):
        phi_dot = np.where(
            d2 > 0.0,
            (rvy[:, None, :, None] * dx - rvx[:, None, :, None] * dy) / np.where(d2 > 0, d2, 1.0),
            0.0)

    bdx = (px[None, :, :] - pos[:, 0, None, None] + halfside) % side - halfside
    bdy = (py[None, :, :] - pos[:, 1, None, None] + halfside) % side - halfside
    phi_body = _wrap(np.arctan2(bdy, bdx) - heading[:, None, None])  # (n, n, 14)

    lo = np.array([-params.cva, -params.ipsi_field])                 # left, right
    hi = np.array([params.ipsi_field, params.cva])
    in_field = (phi >= lo[None, :, None, None]) & (phi <= hi[None, :, None, None])

    not_self = ~np.eye(n, dtype=bool)
    valid = in_field & (d2 > 0.0) & not_self[:, None, :, None]
    coincident = (d2 == 0.0) & not_self[:, None, :, None]
    return phi, phi_dot, phi_body, valid, coincident


def eye_offsets(d_eye: float) -> np.ndarray:
    """Body-frame eye positions, rows (left, right)."""
    return np.array([(-d_eye / 2.0, EYE_FORWARD), (d_eye / 2.0, EYE_FORWARD)])


def _cause_set(per_source: list[float], best: float, idents) -> frozenset[int]:
    threshold = best * (1.0 - CAUSE_REL_TOL)
    return frozenset(idents[k] for k, v in enumerate(per_source) if v >= threshold)


def world_summaries(agents: list[AgentState], params: SimParams) -> list[PerceptSummary]:
    """Percept summary for every agent against one frozen snapshot."""
    n = len(agents)
    if n < 2:
        return [EMPTY_SUMMARY] * n
    pos, heading, vel = _snapshot(agents)
    phi, phi_dot, phi_body, valid, _ = _percept_fields(pos, heading, vel, params)
    idents = [a.ident for a in agents]

    # left eye (index 0) reads clockwise, right eye (index 1) counter-clockwise
    contra = np.empty_like(valid)
    contra[:, 0] = phi_dot[:, 0] < 0.0
    contra[:, 1] = phi_dot[:, 1] > 0.0
    grm_mag = np.where(valid & contra, np.abs(phi_dot), 0.0)
    grm_by_source = grm_mag.max(axis=(1, 3))                         # (n, n)

    left_hemi = (phi_body > 0.0)[:, None, :, :]
    right_hemi = (phi_body < 0.0)[:, None, :, :]
    ccw = np.where(valid & left_hemi & (phi_dot > 0.0), phi_dot, 0.0)
    cw = np.where(valid & right_hemi & (phi_dot < 0.0), -phi_dot, 0.0)
    ccw_by_source = ccw.max(axis=(1, 3))
    cw_by_source = cw.max(axis=(1, 3))

    best_grm = grm_by_source.max(axis=1).tolist()
    best_ccw = ccw_by_source.max(axis=1).tolist()
    best_cw = cw_by_source.max(axis=1).tolist()
    grm_rows = grm_by_source.tolist()
    ccw_rows = ccw_by_source.tolist()
    cw_rows = cw_by_source.tolist()

    summaries = []
    for i in range(n):
        grm_causes = _cause_set(grm_rows[i], best_grm[i], idents) \
            if best_grm[i] > 0.0 else frozenset()
        if best_ccw[i] > 0.0 and best_cw[i] > 0.0:
            omega = min(best_ccw[i], best_cw[i])
            loom_causes = _cause_set(ccw_rows[i], best_ccw[i], idents) | \
                _cause_set(cw_rows[i], best_cw[i], idents)
        else:
            omega, loom_causes = 0.0, frozenset()
        summaries.append(PerceptSummary(best_grm[i], grm_causes, omega, loom_causes))
    return summaries


def project_points(observer: AgentState, others: list[AgentState],
                   params: SimParams, diagnostics: dict | None = None) -> list[PointPercept]:
    """All in-field percepts of one observer, one per (agent, point, eye).

    ``others`` must not contain the observer.  Points coinciding exactly
    with an eye center are skipped; when a ``diagnostics`` dict is passed
    their count is accumulated under ``"coincident_skipped"``.
    """
    agents = [observer, *others]
    if any(o.ident == observer.ident for o in others):
        raise ValueError("observer must not appear among the other agents")
    pos, heading, vel = _snapshot(agents)
    phi, phi_dot, phi_body, valid, coincident = _percept_fields(pos, heading, vel, params)
    if diagnostics is not None:
        diagnostics["coincident_skipped"] = (
            diagnostics.get("coincident_skipped", 0) + int(coincident[0].sum()))
    percepts = []
    for e, side_name in enumerate(EYE_SIDES):
        for k in range(1, len(agents)):
            for j in range(BODY_OUTLINE.shape[0]):
                if valid[0, e, k, j]:
                    percepts.append(PointPercept(
                        source_agent=agents[k].ident,
                        point_index=j,
                        eye=side_name,
                        phi=float(phi[0, e, k, j]),
                        phi_dot=float(phi_dot[0, e, k, j]),
                        phi_body=float(phi_body[0, k, j]),
                    ))
    return percepts


def detect_grm(percepts: list[PointPercept]) -> tuple[float, frozenset[int]]:
    """Largest contralateral motion magnitude and the agents causing it."""
    per_source: dict[int, float] = {}
    for p in percepts:
        contra = p.phi_dot > 0.0 if p.eye == "right" else p.phi_dot < 0.0
        if not contra:
            continue
        mag = abs(p.phi_dot)
        if mag > per_source.get(p.source_agent, 0.0):
            per_source[p.source_agent] = mag
    if not per_source:
        return 0.0, frozenset()
    best = max(per_source.values())
    threshold = best * (1.0 - CAUSE_REL_TOL)
    return best, frozenset(a for a, m in per_source.items() if m >= threshold)


def looming_strength(percepts: list[PointPercept]) -> tuple[float, frozenset[int]]:
    """Bilateral expansion strength: min of the strongest outward motions.

    Outward means counter-clockwise in the left body hemifield or clockwise
    in the right one (membership by the body-center azimuth sign; a point at
    exactly 0 belongs to neither).  Returns 0 with no causes unless both
    sides contribute.
    """
    ccw: dict[int, float] = {}
    cw: dict[int, float] = {}
    for p in percepts:
        if p.phi_body > 0.0 and p.phi_dot > 0.0:
            if p.phi_dot > ccw.get(p.source_agent, 0.0):
                ccw[p.source_agent] = p.phi_dot
        elif p.phi_body < 0.0 and p.phi_dot < 0.0:
            if -p.phi_dot > cw.get(p.source_agent, 0.0):
                cw[p.source_agent] = -p.phi_dot
    if not ccw or not cw:
        return 0.0, frozenset()
    best_ccw = max(ccw.values())
    best_cw = max(cw.values())
    causes = frozenset(
        a for a, m in ccw.items() if m >= best_ccw * (1.0 - CAUSE_REL_TOL)) | frozenset(
        a for a, m in cw.items() if m >= best_cw * (1.0 - CAUSE_REL_TOL))
    return min(best_ccw, best_cw), causes


def summarize(percepts: list[PointPercept]) -> PerceptSummary:
    """Object-path equivalent of one ``world_summaries`` entry."""
    max_grm, grm_causes = detect_grm(percepts)
    omega, loom_causes = looming_strength(percepts)
    return PerceptSummary(max_grm, grm_causes, omega, loom_causes)
