"""One full trial, narrated: ten agents, stops, collisions, classification.

Runs 10 seconds of simulated time at the standard operating point, prints
what happened, and dumps SVG stills next to this script.
"""

import collections
import math
from pathlib import Path

from grmsim import engine
from grmsim.dynamics import SimParams
from grmsim.harness import emit_frames

params = SimParams(t_grm=6.0, t_loom=32.0, cva=math.radians(30),
                   horizon_steps=2000)
result = engine.run_trial(params, seed=7, log_trajectories=True)

print(f"{params.n_agents} agents, {params.horizon_steps} steps of {params.dt}s")
print(f"stops: {len(result.stops)}, collisions: {len(result.collisions)}, "
      f"closed encounters: {len(result.encounters)}")

by_label = collections.Counter(result.stop_labels)
print(f"stop classification: {dict(by_label)}")
c, m = result.counts, result.metrics
print(f"counts tp={c.tp} fp={c.fp} tn={c.tn} fn={c.fn}")
print(f"mobility {m.mobility:.3f}  safety {m.safety:.3f}")

print("\nfirst few stops:")
for stop, label in list(zip(result.stops, result.stop_labels))[:5]:
    causes = ", ".join(str(a) for a in sorted(stop.cause_agents))
    print(f"  t={stop.t * params.dt:6.3f}s agent {stop.agent} stopped on "
          f"{stop.channel} from agent(s) {causes}: {label}")

out_dir = Path(__file__).resolve().parent / "output" / "trial_frames"
frames = emit_frames(result, out_dir, stride=250)
print(f"\nwrote {len(frames)} stills to {out_dir}")
print("green circle = warranted stop, red = false alarm, segments point at causes")
