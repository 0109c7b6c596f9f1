"""Tour of the geometry kernel: azimuths, image motion, and the closed forms.

Walks through the quantities a two-eyed agent reads off its retina and
checks the crossing/wall closed forms against the generic angular-velocity
formula and against brute finite differences.
"""

import math

import numpy as np

from grmsim import geometry as geo

# An observer facing +y watches a point 10mm ahead-left moving rightwards.
rel_pos = np.array([-2.0, 10.0])
rel_vel = np.array([15.0, 0.0])
phi = geo.azimuth(rel_pos, math.pi / 2)
phi_dot = geo.angular_velocity(rel_pos, rel_vel)
print(f"azimuth {math.degrees(phi):+.1f} deg, angular velocity {phi_dot:+.3f} rad/s")

# The same rate out of a central finite difference of the azimuth.
dt = 1e-6
fd = geo.wrap_angle(
    geo.azimuth(rel_pos + dt * rel_vel, math.pi / 2)
    - geo.azimuth(rel_pos - dt * rel_vel, math.pi / 2)) / (2 * dt)
print(f"finite-difference check: {fd:+.6f} rad/s (analytic {phi_dot:+.6f})")

# Rightward motion of a leftward point is motion toward the nose: regressive,
# and therefore GRM for any contralateral visual angle.
print(f"regressive: {geo.is_regressive(phi, phi_dot)}, "
      f"grm(cva=30deg): {geo.is_grm(phi, phi_dot, math.radians(30))}")

# Two agents on crossing trajectories.  The one that gets to the crossing
# second sees regressive motion the whole time the other is still short of
# it, and progressive motion afterwards, no matter the speeds and angle.
print("\ncrossing scenario: observer arrives 5mm late")
base = dict(speed_obs=12.0, speed_other=22.0, approach_angle=math.radians(70),
            arrival_gap=-5.0)
for progress in (-6.0, -2.0, 2.0, 6.0):
    s = geo.CrossingScenario(**base, progress=progress)
    phi = geo.crossing_azimuth(s)
    phi_dot = geo.crossing_angular_velocity(s)
    generic = geo.angular_velocity(*geo.crossing_relative_state(s))
    tag = "regressive" if geo.is_regressive(phi, phi_dot) else "progressive"
    print(f"  progress {progress:+5.1f}mm: phi={math.degrees(phi):+7.1f} deg "
          f"rate={phi_dot:+.3f} (generic {generic:+.3f}) -> {tag}")

# Walking into a wall: some wall point inside the frontal cone always beats
# any finite rate threshold once the wall is close enough.
print("\nwall approach at 35 deg, 20 mm/s, cone point at 12 deg azimuth")
alpha, speed, cone_phi = math.radians(35), 20.0, math.radians(12)
y = 16.0
for _ in range(12):
    point = (y * math.tan(alpha - cone_phi), y)
    rate = geo.wall_angular_velocity(geo.WallScenario(alpha, speed, point))
    print(f"  wall distance {y:7.3f}mm -> |rate| {abs(rate):7.3f} rad/s")
    if abs(rate) > 8.0:
        print("  threshold 8 rad/s exceeded before contact")
        break
    y /= 2
