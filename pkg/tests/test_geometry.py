import math

import numpy as np
import pytest

from grmsim import geometry as geo


def fd_angular_velocity(rel_pos, rel_vel, dt=1e-6):
    """Independent oracle: central finite difference of the azimuth."""
    p = np.asarray(rel_pos, dtype=float)
    v = np.asarray(rel_vel, dtype=float)
    a_plus = math.atan2(*(p + dt * v)[::-1])
    a_minus = math.atan2(*(p - dt * v)[::-1])
    return geo.wrap_angle(a_plus - a_minus) / (2.0 * dt)


# ---------------------------------------------------------------- torus ops

def test_wrap_torus_examples():
    assert np.allclose(geo.wrap_torus((55.0, -5.0), 50.0), (5.0, 45.0))
    assert np.allclose(geo.wrap_torus((0.0, 0.0), 50.0), (0.0, 0.0))
    assert np.allclose(geo.wrap_torus((50.0, 50.0), 50.0), (0.0, 0.0))


def test_wrap_torus_idempotent():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-200, 200, size=(500, 2))
    once = geo.wrap_torus(pts, 50.0)
    assert np.array_equal(geo.wrap_torus(once, 50.0), once)
    assert np.all((once >= 0.0) & (once < 50.0))


def test_min_image_examples():
    assert np.allclose(geo.min_image_delta((1, 1), (49, 1), 50.0), (-2.0, 0.0))
    assert np.allclose(geo.min_image_delta((10, 10), (12, 10), 50.0), (2.0, 0.0))
    # tie at exactly R/2 resolves to -R/2
    assert np.allclose(geo.min_image_delta((0, 0), (25, 0), 50.0), (-25.0, 0.0))


def test_min_image_range_and_consistency():
    rng = np.random.default_rng(11)
    a = rng.uniform(0, 50, size=(1000, 2))
    b = rng.uniform(0, 50, size=(1000, 2))
    d = geo.min_image_delta(a, b, 50.0)
    assert np.all(d >= -25.0) and np.all(d < 25.0)
    # a + delta is congruent to b modulo the arena
    assert np.allclose(geo.wrap_torus(a + d, 50.0), geo.wrap_torus(b, 50.0), atol=1e-9)


def test_bad_side_rejected():
    with pytest.raises(ValueError):
        geo.wrap_torus((1, 1), 0.0)
    with pytest.raises(ValueError):
        geo.min_image_delta((1, 1), (2, 2), -5.0)


# ------------------------------------------------------------ azimuth / rate

def test_azimuth_examples():
    fwd = math.pi / 2.0  # facing +y
    assert geo.azimuth((0, 5), fwd) == pytest.approx(0.0)
    assert geo.azimuth((-3, 0), fwd) == pytest.approx(math.pi / 2.0)
    # full-quadrant arctangent oracle: atan2(1, 1) - pi/2
    assert geo.azimuth((1, 1), fwd) == pytest.approx(math.atan2(1, 1) - math.pi / 2.0)
    assert geo.azimuth((1, 1), fwd) == pytest.approx(-math.pi / 4.0)


def test_azimuth_range_and_left_positive():
    rng = np.random.default_rng(3)
    for _ in range(300):
        heading = rng.uniform(0, 2 * math.pi)
        rel = rng.normal(size=2) * 10
        if rel[0] == 0 and rel[1] == 0:
            continue
        phi = geo.azimuth(rel, heading)
        assert -math.pi <= phi < math.pi
        # rotating rel_pos a touch counter-clockwise increases phi near 0
    left = geo.azimuth((-1e-3, 5), math.pi / 2)
    right = geo.azimuth((1e-3, 5), math.pi / 2)
    assert left > 0 > right


def test_azimuth_zero_vector_rejected():
    with pytest.raises(ValueError):
        geo.azimuth((0.0, 0.0), 0.3)


def test_angular_velocity_examples():
    assert geo.angular_velocity((5, 0), (2, 0)) == pytest.approx(0.0)
    # frozen from the central finite-difference oracle
    assert fd_angular_velocity((0, 10), (20, 0)) == pytest.approx(-2.0, rel=1e-6)
    assert geo.angular_velocity((0, 10), (20, 0)) == pytest.approx(-2.0)
    assert fd_angular_velocity((5, 0), (0, 1)) == pytest.approx(0.2, rel=1e-6)
    assert geo.angular_velocity((5, 0), (0, 1)) == pytest.approx(0.2)


def test_angular_velocity_zero_rejected():
    with pytest.raises(ValueError):
        geo.angular_velocity((0.0, 0.0), (1.0, 1.0))


def test_angular_velocity_matches_finite_difference():
    # analytic rate vs central difference over 1000 random configurations
    rng = np.random.default_rng(17)
    for _ in range(1000):
        direction = rng.uniform(0, 2 * math.pi)
        radius = rng.uniform(0.1, 100.0)
        rel_pos = radius * np.array([math.cos(direction), math.sin(direction)])
        rel_vel = rng.normal(size=2) * 30.0
        analytic = geo.angular_velocity(rel_pos, rel_vel)
        numeric = fd_angular_velocity(rel_pos, rel_vel)
        assert analytic == pytest.approx(numeric, rel=1e-5, abs=1e-9)


def test_tangential_momentum_constant_along_line():
    # along a straight relative trajectory <perp(v), x(t)> is constant,
    # so |phi_dot| * D^2 is constant too
    rng = np.random.default_rng(23)
    for _ in range(200):
        x0 = rng.normal(size=2) * 20
        v = rng.normal(size=2) * 10
        if np.allclose(v, 0):
            continue
        values = []
        for t in np.linspace(0.0, 2.0, 9):
            x = x0 + t * v
            d2 = float(x @ x)
            if d2 < 1e-6:
                continue
            values.append(geo.angular_velocity(x, v) * d2)
        assert np.allclose(values, values[0], rtol=1e-9, atol=1e-12)


# ------------------------------------------------------- crossing scenarios

def test_crossing_validation():
    with pytest.raises(ValueError):
        geo.CrossingScenario(0.0, 10.0, math.pi / 2, -5.0)
    with pytest.raises(ValueError):
        geo.CrossingScenario(10.0, 10.0, 0.0, -5.0)  # parallel


def test_crossing_azimuth_straight_ahead():
    s = geo.CrossingScenario(10.0, 20.0, math.pi / 2, -5.0, progress=0.0)
    assert geo.crossing_azimuth(s) == pytest.approx(0.0)


def test_crossing_azimuth_matches_explicit_construction():
    s = geo.CrossingScenario(10.0, 10.0, math.pi / 2, -5.0, progress=-1.0)
    # construct the relative position by hand from the trajectory definition
    ratio = s.progress * s.speed_other / s.speed_obs
    rel = np.array([
        -ratio * math.sin(s.approach_angle),
        ratio * math.cos(s.approach_angle) - (s.arrival_gap + s.progress),
    ])
    assert geo.crossing_azimuth(s) == pytest.approx(geo.azimuth(rel, math.pi / 2))


def test_crossing_azimuth_sign_for_positive_progress():
    rng = np.random.default_rng(5)
    for _ in range(300):
        s = geo.CrossingScenario(
            speed_obs=rng.uniform(5, 30),
            speed_other=rng.uniform(5, 30),
            approach_angle=rng.uniform(0.1, math.pi - 0.1),
            arrival_gap=rng.uniform(-15, 15),
            progress=rng.uniform(0.05, 10),
        )
        phi = geo.crossing_azimuth(s)
        assert 0.0 < phi <= math.pi or phi == -math.pi


def test_crossing_angular_velocity_example():
    s = geo.CrossingScenario(10.0, 20.0, math.pi / 2, -5.0, progress=0.0)
    # -gap*v2*sin(psi)/D^2 with D^2 = 25
    assert geo.crossing_angular_velocity(s) == pytest.approx(4.0)


def test_crossing_angular_velocity_sign():
    rng = np.random.default_rng(29)
    for _ in range(200):
        s = geo.CrossingScenario(
            speed_obs=rng.uniform(5, 30),
            speed_other=rng.uniform(5, 30),
            approach_angle=rng.uniform(0.1, math.pi - 0.1),
            arrival_gap=-rng.uniform(0.5, 15),
            progress=rng.uniform(-10, 10),
        )
        assert geo.crossing_angular_velocity(s) > 0.0


def test_crossing_angular_velocity_cross_check():
    # closed form agrees with the generic inner-product rate on 1000 scenarios
    rng = np.random.default_rng(31)
    for _ in range(1000):
        psi = rng.uniform(-math.pi + 0.1, math.pi - 0.1)
        if abs(math.sin(psi)) < 1e-3:
            continue
        s = geo.CrossingScenario(
            speed_obs=rng.uniform(5, 30),
            speed_other=rng.uniform(5, 30),
            approach_angle=psi,
            arrival_gap=rng.uniform(-15, 15),
            progress=rng.uniform(-10, 10),
        )
        rel_pos, rel_vel = geo.crossing_relative_state(s)
        if float(rel_pos @ rel_pos) < 1e-9:
            continue
        assert geo.crossing_angular_velocity(s) == pytest.approx(
            geo.angular_velocity(rel_pos, rel_vel), rel=1e-9, abs=1e-12)


def test_crossing_degenerate_raises():
    s = geo.CrossingScenario(10.0, 20.0, math.pi / 2, 0.0, progress=0.0)
    with pytest.raises(ValueError):
        geo.crossing_azimuth(s)
    with pytest.raises(ValueError):
        geo.crossing_angular_velocity(s)


# ------------------------------------------------------------ wall scenario

def test_wall_validation():
    with pytest.raises(ValueError):
        geo.WallScenario(0.0, 10.0, (1.0, 1.0))
    with pytest.raises(ValueError):
        geo.WallScenario(math.pi / 2, 10.0, (1.0, 1.0))
    with pytest.raises(ValueError):
        geo.WallScenario(math.pi / 4, 0.0, (1.0, 1.0))


def test_wall_angular_velocity_example():
    s = geo.WallScenario(math.pi / 4, 10.0, (0.0, 10.0))
    # 10*10*(sqrt(2)/2)/100, confirmed by the finite-difference oracle
    assert geo.wall_angular_velocity(s) == pytest.approx(math.sqrt(2) / 2)
    vel = np.array([10.0 * math.sin(s.approach_angle), 10.0 * math.cos(s.approach_angle)])
    assert fd_angular_velocity((0.0, 10.0), -vel) == pytest.approx(
        geo.wall_angular_velocity(s), rel=1e-6)


def test_wall_point_on_velocity_ray_is_radial():
    alpha = 0.7
    y = 4.0
    s = geo.WallScenario(alpha, 20.0, (y * math.tan(alpha), y))
    assert geo.wall_angular_velocity(s) == pytest.approx(0.0, abs=1e-12)


def test_wall_rate_scales_inverse_distance():
    alpha = 0.5
    for y in (8.0, 4.0, 2.0, 1.0):
        x = y * math.tan(alpha / 2)  # fixed x/y ratio
        full = geo.wall_angular_velocity(geo.WallScenario(alpha, 15.0, (x, y)))
        halved = geo.wall_angular_velocity(geo.WallScenario(alpha, 15.0, (x / 2, y / 2)))
        assert halved == pytest.approx(2.0 * full)


def test_wall_matches_generic_rate():
    rng = np.random.default_rng(37)
    for _ in range(300):
        alpha = rng.uniform(0.05, math.pi / 2 - 0.05)
        v = rng.uniform(5, 30)
        point = rng.normal(size=2) * 10
        if np.allclose(point, 0):
            continue
        s = geo.WallScenario(alpha, v, (point[0], point[1]))
        vel = np.array([v * math.sin(alpha), v * math.cos(alpha)])
        assert geo.wall_angular_velocity(s) == pytest.approx(
            geo.angular_velocity(point, -vel), rel=1e-12, abs=1e-15)


# ----------------------------------------------------- regressive / GRM flags

def test_is_regressive_examples():
    assert geo.is_regressive(0.5, -0.1)
    assert not geo.is_regressive(-0.5, -0.1)
    assert geo.is_regressive(0.0, 3.0)  # boundary product == 0


def test_is_grm_examples():
    cva = math.radians(30)
    assert geo.is_grm(0.3, 1.0, cva)
    assert not geo.is_grm(1.0, 1.0, cva)
    # with cva == pi the two intervals cover everything for phi_dot != 0
    rng = np.random.default_rng(41)
    for _ in range(100):
        phi = rng.uniform(-math.pi, math.pi)
        phi_dot = rng.normal()
        if phi_dot == 0:
            continue
        assert geo.is_grm(phi, phi_dot, math.pi)


def test_regressive_implies_grm():
    # random triples with nonzero rate: regressive motion is always GRM
    rng = np.random.default_rng(43)
    phi = rng.uniform(-math.pi, math.pi, size=20000)
    phi_dot = rng.normal(size=20000) * 5
    cva = rng.uniform(0, math.pi / 2, size=20000)
    for p, pd, c in zip(phi, phi_dot, cva):
        if geo.is_regressive(p, pd) and pd != 0.0:
            assert geo.is_grm(p, pd, c)


# --------------------------------------------------------- theorem properties

def _random_crossing(rng, gap_sign=-1):
    psi = rng.uniform(0.1, math.pi - 0.1) * rng.choice([-1.0, 1.0])
    return dict(
        speed_obs=rng.uniform(5, 30),
        speed_other=rng.uniform(5, 30),
        approach_angle=psi,
        arrival_gap=gap_sign * rng.uniform(0.5, 15),
    )


def test_theorem_crossing_sign_structure():
    # the observer arriving second sees regressive motion exactly while the
    # other agent has not yet reached the crossing
    rng = np.random.default_rng(47)
    for _ in range(500):
        base = _random_crossing(rng)
        eps = rng.uniform(0.05, 12)
        before = geo.CrossingScenario(**base, progress=-eps)
        after = geo.CrossingScenario(**base, progress=+eps)
        assert geo.is_regressive(
            geo.crossing_azimuth(before), geo.crossing_angular_velocity(before))
        assert not geo.is_regressive(
            geo.crossing_azimuth(after), geo.crossing_angular_velocity(after))


def test_theorem_crossing_first_arriver_frame():
    # mirrored frame: the agent arriving first sees progressive motion until
    # the other crosses, regressive afterwards
    rng = np.random.default_rng(53)
    for _ in range(500):
        base = _random_crossing(rng)
        gap = base["arrival_gap"]
        eps2 = rng.uniform(0.05, 12) * rng.choice([-1.0, 1.0])
        # reparametrize around the moment the late agent reaches the crossing
        eps = -gap + eps2 * base["speed_obs"] / base["speed_other"]
        mirrored = geo.CrossingScenario(
            speed_obs=base["speed_other"],
            speed_other=base["speed_obs"],
            approach_angle=-base["approach_angle"],
            arrival_gap=-gap * base["speed_other"] / base["speed_obs"],
            progress=eps2,
        )
        regressive = geo.is_regressive(
            geo.crossing_azimuth(mirrored), geo.crossing_angular_velocity(mirrored))
        assert regressive == (eps2 > 0)
        # consistency of the reparametrization with the original scenario clock
        assert (eps > -gap) == (eps2 > 0)


def test_theorem_wall_cone_point_exceeds_any_threshold():
    # for any threshold there is a wall point inside the frontal GRM cone
    # whose angular velocity exceeds it once the wall is close enough
    rng = np.random.default_rng(59)
    for _ in range(50):
        alpha = rng.uniform(math.radians(6), math.radians(84))
        v = rng.uniform(10, 30)
        cva = rng.uniform(math.radians(10), math.radians(90))
        cone_phi = 0.5 * min(cva, alpha - math.radians(1))
        for threshold in (0.1, 2.0, 32.0):
            y = 20.0
            found = False
            for _ in range(200):
                x = y * math.tan(alpha - cone_phi)
                rate = geo.wall_angular_velocity(geo.WallScenario(alpha, v, (x, y)))
                if abs(rate) > threshold:
                    found = True
                    break
                y *= 0.5
            assert found and y > 0.0
            assert rate > 0.0  # counter-clockwise: toward the nose
            assert geo.is_grm(cone_phi, rate, cva)
