"""Hamiltonian mechanics of two gravitating bodies on the hyperbolic plane.

States are cotangent: chart positions (x1, y1, x2, y2) and conjugate
momenta (px1, py1, px2, py2). The kinetic metric is the hyperbolic one
scaled by each mass, the potential is -k m1 m2 coth(distance), and the
isometry group acts by the cotangent lift of the Moebius action with an
equivariant momentum map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Collision, NotCanonical
from .geom import Point, TangentVector, hyperbolic_distance
from .liegroup import (
    AlgebraElement,
    CoalgebraElement,
    GroupElement,
    infinitesimal_generator,
    moebius_act,
)

# separations at or below this are treated as collision
COLLISION_EPSILON = 1e-8
# relative slack for the canonical mass-angle relation
_CANONICAL_TOL = 1e-10


@dataclass(frozen=True)
class Params:
    """Masses and gravitational coupling, all positive."""

    m1: float
    m2: float
    k: float = 1.0

    def __post_init__(self):
        for name in ("m1", "m2", "k"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class Configuration:
    """Positions of the two bodies, bounded away from collision."""

    q1: Point
    q2: Point

    def __post_init__(self):
        if self.distance() <= COLLISION_EPSILON:
            raise Collision(
                f"separation {self.distance():.3e} is inside the collision cutoff"
            )

    def distance(self) -> float:
        return hyperbolic_distance(self.q1, self.q2)


@dataclass(frozen=True)
class PhaseState:
    """Cotangent state: a configuration plus chart momenta."""

    config: Configuration
    px1: float
    py1: float
    px2: float
    py2: float

    def as_array(self) -> np.ndarray:
        q1, q2 = self.config.q1, self.config.q2
        return np.array(
            [q1.x, q1.y, q2.x, q2.y, self.px1, self.py1, self.px2, self.py2]
        )

    @staticmethod
    def from_array(arr) -> "PhaseState":
        x1, y1, x2, y2, px1, py1, px2, py2 = (float(v) for v in arr)
        return PhaseState(
            Configuration(Point(x1, y1), Point(x2, y2)), px1, py1, px2, py2
        )


def phase_state(x1, y1, x2, y2, px1, py1, px2, py2) -> PhaseState:
    """Convenience constructor from eight chart coordinates."""
    return PhaseState(Configuration(Point(x1, y1), Point(x2, y2)), px1, py1, px2, py2)


# -- potential -----------------------------------------------------------

def _cosh_distance(x1, y1, x2, y2):
    dx = x1 - x2
    dy = y1 - y2
    return 1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2)


def potential(config: Configuration, params: Params) -> float:
    """Attractive cotangent potential -k m1 m2 coth(d).

    Evaluated through the chart formula so no inverse hyperbolic function
    appears; it agrees with the coth-of-distance form to rounding. Tends to
    -inf like -1/d at collision and to -k m1 m2 at infinite separation.
    """
    q1, q2 = config.q1, config.q2
    dx = q1.x - q2.x
    a = dx * dx + (q1.y - q2.y) ** 2
    b = dx * dx + (q1.y + q2.y) ** 2
    num = dx * dx + q1.y * q1.y + q2.y * q2.y
    return -params.k * params.m1 * params.m2 * num / math.sqrt(a * b)


def potential_gradient(config: Configuration, params: Params) -> np.ndarray:
    """Chart gradient of the potential, ordered (x1, y1, x2, y2).

    Chain rule through cosh(d): dV/dc = k m1 m2 * d(cosh d)/dc / sinh(d)^3.
    """
    x1, y1 = config.q1.x, config.q1.y
    x2, y2 = config.q2.x, config.q2.y
    dx = x1 - x2
    dy = y1 - y2
    a = dx * dx + dy * dy
    u = a / (2.0 * y1 * y2)
    # sinh(d)^2 = cosh(d)^2 - 1 factored as u (2 + u); the squared form
    # cancels catastrophically once the bodies are close
    sh3 = (u * (2.0 + u)) ** 1.5
    pre = params.k * params.m1 * params.m2 / sh3
    dch_x1 = dx / (y1 * y2)
    dch_y1 = dy / (y1 * y2) - a / (2.0 * y1 * y1 * y2)
    dch_y2 = -dy / (y1 * y2) - a / (2.0 * y1 * y2 * y2)
    return pre * np.array([dch_x1, dch_y1, -dch_x1, dch_y2])


# -- energy and equations of motion --------------------------------------

def kinetic_energy(state: PhaseState, params: Params) -> float:
    q1, q2 = state.config.q1, state.config.q2
    t1 = q1.y * q1.y * (state.px1 * state.px1 + state.py1 * state.py1) / params.m1
    t2 = q2.y * q2.y * (state.px2 * state.px2 + state.py2 * state.py2) / params.m2
    return 0.5 * (t1 + t2)


def hamiltonian(state: PhaseState, params: Params) -> float:
    """Total energy: cometric kinetic term plus potential."""
    return kinetic_energy(state, params) + potential(state.config, params)


def hamiltonian_vector_field(state: PhaseState, params: Params) -> np.ndarray:
    """Right-hand side of Hamilton's equations, ordered like as_array()."""
    return _field_array(state.as_array(), params.m1, params.m2, params.k)


def _field_array(z, m1, m2, k):
    """Array-in, array-out equations of motion; hot path for integrators."""
    x1, y1, x2, y2, px1, py1, px2, py2 = z
    dx = x1 - x2
    dy = y1 - y2
    a = dx * dx + dy * dy
    u = a / (2.0 * y1 * y2)
    sh3 = (u * (2.0 + u)) ** 1.5
    pre = k * m1 * m2 / sh3
    gx1 = pre * dx / (y1 * y2)
    gy1 = pre * (dy / (y1 * y2) - a / (2.0 * y1 * y1 * y2))
    gy2 = pre * (-dy / (y1 * y2) - a / (2.0 * y1 * y2 * y2))
    r1 = y1 * y1 / m1
    r2 = y2 * y2 / m2
    return np.array(
        [
            r1 * px1,
            r1 * py1,
            r2 * px2,
            r2 * py2,
            -gx1,
            -(y1 / m1) * (px1 * px1 + py1 * py1) - gy1,
            gx1,
            -(y2 / m2) * (px2 * px2 + py2 * py2) - gy2,
        ]
    )


def velocity_vectors(state: PhaseState, params: Params):
    """Chart velocities obtained by raising the momenta with the cometric."""
    q1, q2 = state.config.q1, state.config.q2
    r1 = q1.y * q1.y / params.m1
    r2 = q2.y * q2.y / params.m2
    return (
        TangentVector(q1, r1 * state.px1, r1 * state.py1),
        TangentVector(q2, r2 * state.px2, r2 * state.py2),
    )


def legendre(config: Configuration, params: Params, xi: AlgebraElement) -> PhaseState:
    """State whose velocity is the generator flow of xi at each body.

    Lowers the generator vector field with the kinetic metric: momentum
    m/y^2 times chart velocity.
    """
    g1 = infinitesimal_generator(xi, config.q1)
    g2 = infinitesimal_generator(xi, config.q2)
    c1 = params.m1 / (config.q1.y * config.q1.y)
    c2 = params.m2 / (config.q2.y * config.q2.y)
    return PhaseState(config, c1 * g1.vx, c1 * g1.vy, c2 * g2.vx, c2 * g2.vy)


# -- symmetry ------------------------------------------------------------

def momentum_map(state: PhaseState) -> CoalgebraElement:
    """Conserved momentum of the isometry action; mass-independent in the
    momenta. Components pair with algebra elements: <J, xi> = sum p(xi_Q)."""
    z = state.as_array()
    return CoalgebraElement(_j_e(z), _j_h(z), _j_p(z))


def _j_h(z):
    x1, y1, x2, y2, px1, py1, px2, py2 = z
    return x1 * px1 + y1 * py1 + x2 * px2 + y2 * py2


def _j_p(z):
    return z[4] + z[6]


def _j_e(z):
    x1, y1, x2, y2, px1, py1, px2, py2 = z
    t1 = 0.5 * px1 * (y1 * y1 - x1 * x1 - 1.0) - py1 * x1 * y1
    t2 = 0.5 * px2 * (y2 * y2 - x2 * x2 - 1.0) - py2 * x2 * y2
    return t1 + t2


def group_act_phase(g: GroupElement, state: PhaseState) -> PhaseState:
    """Cotangent lift of the Moebius action.

    Momenta transform by the inverse transpose of the chart Jacobian; for
    a conformal map that is complex multiplication by conj((c z + d)^2).
    The lift is metric-independent, hence mass-independent.
    """
    out = []
    for (p, px, py) in (
        (state.config.q1, state.px1, state.py1),
        (state.config.q2, state.px2, state.py2),
    ):
        ux = g.c * p.x + g.d
        uy = g.c * p.y
        # conj((cz+d)^2)
        wx = ux * ux - uy * uy
        wy = -2.0 * ux * uy
        out.append((moebius_act(g, p), px * wx - py * wy, px * wy + py * wx))
    (q1, px1, py1), (q2, px2, py2) = out
    return PhaseState(Configuration(q1, q2), px1, py1, px2, py2)


def momentum_at_canonical(
    theta1: float, theta2: float, E: float, H: float, P: float, params: Params
) -> np.ndarray:
    """Momentum matrix at the canonical configuration moving with generator
    (E, H, P), as a 2x2 coalgebra matrix.

    The canonical configuration places the bodies at angles theta1, theta2
    on the unit half-circle, center of mass at (0, 1); the masses must
    satisfy the canonical relation for those angles.
    """
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    ratio = params.m1 / params.m2
    rel = c2 * s1 * s1 / (s2 * s2 * c1)
    if abs(ratio - rel) > _CANONICAL_TOL * max(ratio, rel):
        raise NotCanonical(
            f"mass ratio {ratio:.12g} does not match the canonical relation "
            f"{rel:.12g} for angles ({theta1}, {theta2})"
        )
    f = params.m2 * (c2 + c1) / (2.0 * s2 * s2 * c1)
    return f * np.array(
        [
            [H, (1.0 - 2.0 * c1 * c2) * P + c1 * c2 * E],
            [P - c1 * c2 * E, -H],
        ]
    )


# -- locked inertia and augmented potential ------------------------------

@dataclass(frozen=True)
class LockedInertia:
    """Locked inertia tensor as a symmetric 3x3 matrix on algebra
    coordinates, index order (E, H, P)."""

    m: np.ndarray

    def apply(self, xi: AlgebraElement) -> CoalgebraElement:
        e, h, p = self.m @ xi.coords()
        return CoalgebraElement(e, h, p)

    def inverse_apply(self, mu: CoalgebraElement) -> AlgebraElement:
        E, H, P = np.linalg.solve(self.m, mu.coords())
        return AlgebraElement(E, H, P)

    def bilinear(self, xi: AlgebraElement, eta: AlgebraElement) -> float:
        return float(xi.coords() @ self.m @ eta.coords())

    def cholesky(self) -> np.ndarray:
        """Lower Cholesky factor; fails if the tensor is not positive
        definite, which cannot happen for an actual configuration."""
        return np.linalg.cholesky(self.m)


def locked_inertia(config: Configuration, params: Params) -> LockedInertia:
    """Kinetic-metric Gram matrix of the three generator fields.

    Entry (i, j) is sum_bodies m <xi_i at q, xi_j at q> in the hyperbolic
    metric; closed forms below avoid assembling the generators.
    """
    i11 = i22 = i33 = i12 = i13 = i23 = 0.0
    for (p, m) in ((config.q1, params.m1), (config.q2, params.m2)):
        x, y = p.x, p.y
        y2 = y * y
        r2 = x * x + y2
        i11 += 0.25 * m * ((r2 + 1.0) ** 2 - 4.0 * y2) / y2
        i22 += m * r2 / y2
        i33 += m / y2
        i12 += -0.5 * m * x * (1.0 + r2) / y2
        i13 += -0.5 * m * (1.0 + x * x - y2) / y2
        i23 += m * x / y2
    return LockedInertia(
        np.array(
            [
                [i11, i12, i13],
                [i12, i22, i23],
                [i13, i23, i33],
            ]
        )
    )


def augmented_potential(
    config: Configuration, params: Params, xi: AlgebraElement
) -> float:
    """Potential corrected by the rotational kinetic term,
    V - 1/2 <II xi, xi>. Relative equilibria are its critical points."""
    return potential(config, params) - 0.5 * locked_inertia(config, params).bilinear(
        xi, xi
    )


def augmented_potential_gradient(
    config: Configuration, params: Params, xi: AlgebraElement
) -> np.ndarray:
    """Chart gradient of the augmented potential, ordered (x1, y1, x2, y2).

    The correction term per body is m |gen(xi)|^2 / (2 y^2), differentiated
    with the generator's chart Jacobian in closed form.
    """
    grad = potential_gradient(config, params)
    out = np.array(grad)
    for i, (p, m) in enumerate(((config.q1, params.m1), (config.q2, params.m2))):
        x, y = p.x, p.y
        g = infinitesimal_generator(xi, p)
        # chart Jacobian of the generator field
        dgx_dx = -xi.E * x + xi.H
        dgx_dy = xi.E * y
        dgy_dx = -xi.E * y
        dgy_dy = -xi.E * x + xi.H
        y2 = y * y
        d_dx = (g.vx * dgx_dx + g.vy * dgy_dx) * m / y2
        d_dy = (g.vx * dgx_dy + g.vy * dgy_dy) * m / y2 - m * (
            g.vx * g.vx + g.vy * g.vy
        ) / (y2 * y)
        out[2 * i] -= d_dx
        out[2 * i + 1] -= d_dy
    return out
