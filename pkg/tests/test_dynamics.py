"""Two-body Hamiltonian system: potential, motion, symmetry, inertia."""

import math

import numpy as np
import pytest

from h2body import (
    AlgebraElement,
    CoalgebraElement,
    Collision,
    Configuration,
    NotCanonical,
    Params,
    PhaseState,
    Point,
    augmented_potential,
    augmented_potential_gradient,
    coadjoint,
    group_act_phase,
    hamiltonian,
    hamiltonian_vector_field,
    hyperbolic_distance,
    hyperbolic_inner,
    infinitesimal_generator,
    kinetic_energy,
    legendre,
    locked_inertia,
    momentum_at_canonical,
    momentum_map,
    phase_state,
    potential,
    potential_gradient,
    velocity_vectors,
)

from conftest import fd_gradient, random_algebra, random_config_state, random_group


def _potential_of_coords(coords, params):
    cfg = Configuration(Point(coords[0], coords[1]), Point(coords[2], coords[3]))
    return potential(cfg, params)


class TestParamsAndStates:
    def test_params_validation(self):
        with pytest.raises(ValueError):
            Params(-1.0, 2.0)
        with pytest.raises(ValueError):
            Params(1.0, 0.0)
        with pytest.raises(ValueError):
            Params(1.0, 1.0, k=-0.1)

    def test_configuration_rejects_collision(self):
        with pytest.raises(Collision):
            Configuration(Point(0.0, 1.0), Point(0.0, 1.0))
        with pytest.raises(Collision):
            Configuration(Point(0.0, 1.0), Point(1e-10, 1.0))

    def test_array_round_trip(self):
        s = phase_state(0.1, 1.2, -0.4, 0.8, 1.0, -2.0, 3.0, 0.5)
        arr = s.as_array()
        assert np.allclose(arr, [0.1, 1.2, -0.4, 0.8, 1.0, -2.0, 3.0, 0.5])
        back = PhaseState.from_array(arr)
        assert back == s


class TestPotential:
    def test_matches_coth_of_distance(self, rng):
        # dual route: the coordinate formula against coth(acosh-based d)
        for _ in range(100):
            s, params = random_config_state(rng)
            d = s.config.distance()
            ref = -params.k * params.m1 * params.m2 / math.tanh(d)
            assert potential(s.config, params) == pytest.approx(ref, rel=1e-12)

    def test_unit_distance_value(self):
        cfg = Configuration(Point(0.0, 1.0), Point(0.0, math.e))
        params = Params(2.0, 3.0, k=1.5)
        # coth(1), fixed reference
        assert potential(cfg, params) == pytest.approx(
            -2.0 * 3.0 * 1.5 * 1.3130352854993312, rel=1e-14
        )

    def test_far_field_plateau(self):
        cfg = Configuration(Point(0.0, 1.0), Point(0.0, math.exp(30.0)))
        params = Params(1.0, 1.0)
        assert potential(cfg, params) == pytest.approx(-1.0, rel=1e-12)

    def test_gradient_matches_fd(self, rng):
        for _ in range(50):
            s, params = random_config_state(rng)
            coords = s.as_array()[:4]
            grad = potential_gradient(s.config, params)
            fd = fd_gradient(lambda c: _potential_of_coords(c, params), coords)
            assert np.allclose(grad, fd, rtol=1e-6, atol=1e-8)

    def test_gradient_survives_near_collision(self):
        # vertical pair a chart distance 1e-6 apart; the y2 entry must match
        # k m1 m2 / sinh(d)^2 to high relative accuracy. A naive
        # cosh^2 - 1 evaluation loses four digits here.
        h = 1e-6
        cfg = Configuration(Point(0.0, 1.0), Point(0.0, 1.0 + h))
        params = Params(1.0, 1.0)
        d = hyperbolic_distance(cfg.q1, cfg.q2)
        g = potential_gradient(cfg, params)
        ref = 1.0 / math.sinh(d) ** 2 / (1.0 + h)  # chain rule d(d)/dy2 = 1/y2
        assert g[3] == pytest.approx(ref, rel=1e-9)
        assert g[1] == pytest.approx(-ref * (1.0 + h), rel=1e-9)

    def test_gradient_pair_antisymmetry_in_x(self, rng):
        for _ in range(20):
            s, params = random_config_state(rng)
            g = potential_gradient(s.config, params)
            assert g[2] == -g[0]


class TestEnergyAndField:
    def test_kinetic_by_hand(self):
        s = phase_state(0.0, 2.0, 1.0, 0.5, 3.0, 0.0, 0.0, 4.0)
        params = Params(2.0, 1.0)
        # y^2 |p|^2 / (2m) per body
        assert kinetic_energy(s, params) == pytest.approx(
            4.0 * 9.0 / 4.0 + 0.25 * 16.0 / 2.0, rel=1e-15
        )

    def test_hamiltonian_splits(self, rng):
        s, params = random_config_state(rng)
        assert hamiltonian(s, params) == pytest.approx(
            kinetic_energy(s, params) + potential(s.config, params), rel=1e-14
        )

    def test_field_is_symplectic_gradient(self, rng):
        # dq/dt = dH/dp, dp/dt = -dH/dq against finite differences
        for _ in range(50):
            s, params = random_config_state(rng)
            z = s.as_array()

            def ham_of(arr):
                return hamiltonian(PhaseState.from_array(arr), params)

            dh = fd_gradient(ham_of, z)
            f = hamiltonian_vector_field(s, params)
            assert np.allclose(f[:4], dh[4:], rtol=1e-6, atol=1e-7)
            assert np.allclose(f[4:], -dh[:4], rtol=1e-6, atol=1e-7)

    def test_velocities_raise_momenta(self, rng):
        s, params = random_config_state(rng)
        v1, v2 = velocity_vectors(s, params)
        assert v1.vx == pytest.approx(s.config.q1.y ** 2 * s.px1 / params.m1)
        assert v2.vy == pytest.approx(s.config.q2.y ** 2 * s.py2 / params.m2)

    def test_legendre_inverts_velocity(self, rng):
        # lowering the generator field then raising it returns the field
        for _ in range(50):
            s, params = random_config_state(rng)
            xi = random_algebra(rng)
            state = legendre(s.config, params, xi)
            v1, v2 = velocity_vectors(state, params)
            g1 = infinitesimal_generator(xi, s.config.q1)
            g2 = infinitesimal_generator(xi, s.config.q2)
            assert np.allclose([v1.vx, v1.vy], [g1.vx, g1.vy], atol=1e-12)
            assert np.allclose([v2.vx, v2.vy], [g2.vx, g2.vy], atol=1e-12)


class TestMomentumMap:
    def test_pairing_definition(self, rng):
        # <J(z), xi> = p1 . gen(xi)(q1) + p2 . gen(xi)(q2)
        for _ in range(100):
            s, _ = random_config_state(rng)
            xi = random_algebra(rng)
            g1 = infinitesimal_generator(xi, s.config.q1)
            g2 = infinitesimal_generator(xi, s.config.q2)
            ref = (
                s.px1 * g1.vx + s.py1 * g1.vy + s.px2 * g2.vx + s.py2 * g2.vy
            )
            assert momentum_map(s).pair(xi) == pytest.approx(ref, rel=1e-12, abs=1e-12)

    def test_equivariance(self, rng):
        # J(g . z) = g-transport of J(z)
        for _ in range(100):
            s, _ = random_config_state(rng)
            g = random_group(rng)
            lhs = momentum_map(group_act_phase(g, s)).coords()
            rhs = coadjoint(g, momentum_map(s)).coords()
            assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


class TestGroupActPhase:
    def test_preserves_hamiltonian(self, rng):
        for _ in range(100):
            s, params = random_config_state(rng)
            g = random_group(rng)
            h0 = hamiltonian(s, params)
            h1 = hamiltonian(group_act_phase(g, s), params)
            assert h1 == pytest.approx(h0, rel=1e-10, abs=1e-10)

    def test_left_action(self, rng):
        for _ in range(50):
            s, _ = random_config_state(rng)
            g, h = random_group(rng), random_group(rng)
            lhs = group_act_phase(g.compose(h), s).as_array()
            rhs = group_act_phase(g, group_act_phase(h, s)).as_array()
            assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)

    def test_momenta_transform_is_mass_free(self):
        # the lift never sees Params; transforming then pairing with any
        # velocity reproduces the chart pairing
        s = phase_state(0.2, 1.0, -0.3, 2.0, 1.0, 2.0, -1.0, 0.5)
        from h2body import GroupElement

        g = GroupElement(1.2, 0.3, -0.4, 0.7)
        moved = group_act_phase(g, s)
        assert isinstance(moved, PhaseState)


def _canonical_setup(t1, t2, m2=1.0, k=1.0):
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    m1 = m2 * c2 * s1 * s1 / (s2 * s2 * c1)
    params = Params(m1, m2, k)
    cfg = Configuration(Point(c1, s1), Point(-c2, s2))
    return cfg, params


class TestMomentumAtCanonical:
    def test_matches_legendre_route(self, rng):
        # dual route: closed-form matrix against momentum_map(legendre(...))
        for _ in range(50):
            t1 = float(rng.uniform(0.3, 1.3))
            t2 = float(rng.uniform(0.3, 1.3))
            m2 = float(rng.uniform(0.5, 2.0))
            cfg, params = _canonical_setup(t1, t2, m2)
            E, H, P = (float(v) for v in rng.normal(size=3))
            mu = momentum_map(legendre(cfg, params, AlgebraElement(E, H, P)))
            closed = momentum_at_canonical(t1, t2, E, H, P, params)
            assert np.allclose(mu.matrix(), closed, rtol=1e-10, atol=1e-12)

    def test_rejects_wrong_masses(self):
        with pytest.raises(NotCanonical):
            momentum_at_canonical(0.6, 0.85, 1.0, 0.0, 0.0, Params(1.0, 1.0))


class TestLockedInertia:
    def test_gram_matrix_oracle(self, rng):
        # definitional route: mass-weighted inner products of the three
        # generator fields
        basis = [
            AlgebraElement(1.0, 0.0, 0.0),
            AlgebraElement(0.0, 1.0, 0.0),
            AlgebraElement(0.0, 0.0, 1.0),
        ]
        for _ in range(50):
            s, params = random_config_state(rng)
            closed = locked_inertia(s.config, params).m
            gram = np.zeros((3, 3))
            for i in range(3):
                for j in range(3):
                    acc = 0.0
                    for (p, m) in (
                        (s.config.q1, params.m1),
                        (s.config.q2, params.m2),
                    ):
                        acc += m * hyperbolic_inner(
                            infinitesimal_generator(basis[i], p),
                            infinitesimal_generator(basis[j], p),
                        )
                    gram[i, j] = acc
            assert np.allclose(closed, gram, rtol=1e-10, atol=1e-10)

    def test_canonical_closed_form(self, rng):
        # at the canonical configuration the tensor collapses to a sparse
        # matrix in u = cos t1, v = cos t2
        for _ in range(20):
            t1 = float(rng.uniform(0.3, 1.3))
            t2 = float(rng.uniform(0.3, 1.3))
            m2 = float(rng.uniform(0.5, 2.0))
            cfg, params = _canonical_setup(t1, t2, m2)
            u, v = math.cos(t1), math.cos(t2)
            s2 = math.sin(t2)
            closed = (
                m2
                * (u + v)
                / (s2 * s2)
                * np.array(
                    [[v, 0.0, -v], [0.0, 1.0 / u, 0.0], [-v, 0.0, 1.0 / u]]
                )
            )
            assert np.allclose(
                locked_inertia(cfg, params).m, closed, rtol=1e-12, atol=1e-12
            )

    def test_apply_inverse_round_trip(self, rng):
        s, params = random_config_state(rng)
        ii = locked_inertia(s.config, params)
        xi = random_algebra(rng)
        back = ii.inverse_apply(ii.apply(xi))
        assert np.allclose(back.coords(), xi.coords(), rtol=1e-10, atol=1e-12)

    def test_positive_definite(self, rng):
        for _ in range(50):
            s, params = random_config_state(rng)
            ii = locked_inertia(s.config, params)
            ell = ii.cholesky()  # raises if not PD
            assert np.allclose(ell @ ell.T, ii.m, rtol=1e-12, atol=1e-12)

    def test_bilinear_is_quadratic_form(self, rng):
        s, params = random_config_state(rng)
        ii = locked_inertia(s.config, params)
        xi, eta = random_algebra(rng), random_algebra(rng)
        assert ii.bilinear(xi, eta) == pytest.approx(ii.bilinear(eta, xi), rel=1e-12)
        mu = ii.apply(xi)
        assert mu.pair(eta) == pytest.approx(ii.bilinear(xi, eta), rel=1e-12)


class TestAugmentedPotential:
    def test_reduces_to_plain_potential_at_zero(self, rng):
        s, params = random_config_state(rng)
        xi0 = AlgebraElement(0.0, 0.0, 0.0)
        assert augmented_potential(s.config, params, xi0) == potential(
            s.config, params
        )

    def test_definition(self, rng):
        for _ in range(20):
            s, params = random_config_state(rng)
            xi = random_algebra(rng)
            va = augmented_potential(s.config, params, xi)
            ref = potential(s.config, params) - 0.5 * locked_inertia(
                s.config, params
            ).bilinear(xi, xi)
            assert va == pytest.approx(ref, rel=1e-13)

    def test_gradient_matches_fd(self, rng):
        for _ in range(50):
            s, params = random_config_state(rng)
            xi = random_algebra(rng)
            coords = s.as_array()[:4]

            def va_of(c):
                cfg = Configuration(Point(c[0], c[1]), Point(c[2], c[3]))
                return augmented_potential(cfg, params, xi)

            grad = augmented_potential_gradient(s.config, params, xi)
            fd = fd_gradient(va_of, coords)
            assert np.allclose(grad, fd, rtol=1e-5, atol=1e-6)


def test_momentum_map_returns_coalgebra():
    s = phase_state(0.0, 1.0, 1.0, 1.0, 0.5, -0.5, 0.25, 0.75)
    mu = momentum_map(s)
    assert isinstance(mu, CoalgebraElement)
    # horizontal translation component is the plain momentum sum
    assert mu.p == pytest.approx(0.75, abs=1e-15)
