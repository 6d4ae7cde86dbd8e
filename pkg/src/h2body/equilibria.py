"""Relative equilibria of the two-body problem.

Every relative equilibrium can be moved by an isometry to a canonical
position: both bodies on the unit half-circle at angles theta1 (first
quadrant) and theta2 (second quadrant, measured from the negative x-axis),
center of mass at (0, 1). Two one-parameter families exist, generated by
the dilation field (bodies race along a common geodesic) and the rotation
field (bodies circle the fixed center of mass). Mixed rotation-translation
and parabolic generators admit no equilibria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import MassDistanceMismatch, NonPositiveDistance, OutOfRange
from .geom import (
    Orientation,
    Point,
    arc_coordinate,
    geodesic_point_at,
    geodesic_through,
    hyperbolic_distance,
    hyperbolic_inner,
    normal_orientation,
)
from .liegroup import (
    XI_E,
    XI_H,
    XI_P,
    AlgebraElement,
    GroupElement,
    infinitesimal_generator,
    moebius_act,
    normalizing_isometry,
)
from .dynamics import (
    Configuration,
    Params,
    PhaseState,
    augmented_potential_gradient,
    legendre,
    momentum_at_canonical,
)

# z -> -1/z; on the unit half-circle this is the reflection (x, y) -> (-x, y)
_QUARTER_TURN = GroupElement(0.0, -1.0, 1.0, 0.0)

# relative slack on m1 sinh(2 d1) = m2 sinh(2 d2) before rejecting input
_BALANCE_TOL = 1e-9


class Family(Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"


# -- center of mass ------------------------------------------------------

@dataclass(frozen=True)
class CenterOfMassSplit:
    """Center of mass with the arc distances to each body, d1 + d2 = d."""

    com: Point
    d1: float
    d2: float


def _bisect_secant(f, lo, hi, tol):
    """Root of f on a sign-changing bracket: bisection, secant polish."""
    flo = f(lo)
    for _ in range(52):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-6:
            break
    a, b = lo, hi
    fa, fb = f(a), f(b)
    for _ in range(60):
        if fb == fa:
            break
        c = b - fb * (b - a) / (fb - fa)
        if not lo - 1e-9 <= c <= hi + 1e-9:
            c = 0.5 * (a + b)
        fc = f(c)
        a, fa, b, fb = b, fb, c, fc
        if abs(b - a) < tol:
            break
    return b


def center_of_mass(q1: Point, q2: Point, params: Params) -> CenterOfMassSplit:
    """Point on the connecting geodesic where m1 sinh(2 d1) = m2 sinh(2 d2).

    d1 and d2 are the arc distances to bodies 1 and 2. The balance function
    is strictly monotone, so the root is unique; it is found by bisection
    with a secant polish to 1e-13 in arc length.
    """
    geo = geodesic_through(q1, q2)
    s1 = arc_coordinate(geo, q1)
    s2 = arc_coordinate(geo, q2)
    d = abs(s2 - s1)
    direction = 1.0 if s2 > s1 else -1.0

    def balance(t):
        return params.m1 * math.sinh(2.0 * t) - params.m2 * math.sinh(2.0 * (d - t))

    t = _bisect_secant(balance, 0.0, d, 1e-13)
    com = geodesic_point_at(geo, s1 + direction * t).base
    return CenterOfMassSplit(com=com, d1=t, d2=d - t)


def partner_distance(d1: float, params: Params) -> float:
    """The d2 that balances d1: m1 sinh(2 d1) = m2 sinh(2 d2)."""
    if not d1 > 0.0:
        raise NonPositiveDistance(f"d1 must be positive, got {d1!r}")
    return 0.5 * math.asinh(params.m1 / params.m2 * math.sinh(2.0 * d1))


# -- canonical position --------------------------------------------------

def canonical_angles_from_distances(d1: float, d2: float) -> tuple[float, float]:
    """Unit-circle angles with tanh(d_i) = cos(theta_i), sech = sin."""
    for name, d in (("d1", d1), ("d2", d2)):
        if not d > 0.0:
            raise NonPositiveDistance(f"{name} must be positive, got {d!r}")
    t1 = math.atan2(1.0 / math.cosh(d1), math.tanh(d1))
    t2 = math.atan2(1.0 / math.cosh(d2), math.tanh(d2))
    return t1, t2


def distance_of_angle(theta: float) -> float:
    """Inverse of the angle map: arc distance atanh(cos theta)."""
    if not 0.0 < theta < 0.5 * math.pi:
        raise OutOfRange(f"theta must lie in (0, pi/2), got {theta!r}")
    return math.atanh(math.cos(theta))


def canonical_configuration(theta1: float, theta2: float) -> Configuration:
    """Bodies at (cos t1, sin t1) and (-cos t2, sin t2) on the unit circle."""
    return Configuration(
        Point(math.cos(theta1), math.sin(theta1)),
        Point(-math.cos(theta2), math.sin(theta2)),
    )


@dataclass(frozen=True)
class CanonicalForm:
    """Result of moving a configuration to canonical position."""

    isometry: GroupElement
    theta1: float
    theta2: float


def to_canonical(q1: Point, q2: Point, params: Params) -> CanonicalForm:
    """Isometry taking the pair to canonical position.

    Sends the center of mass to (0, 1) and the connecting geodesic to the
    unit half-circle; if body 1 lands in the second quadrant, a quarter
    turn (z -> -1/z) flips the circle so it lands in the first.
    """
    split = center_of_mass(q1, q2, params)
    geo = geodesic_through(q1, q2)
    tangent = geodesic_point_at(geo, arc_coordinate(geo, split.com))
    g = normalizing_isometry(split.com, math.atan2(tangent.vy, tangent.vx))
    img1 = moebius_act(g, q1)
    if img1.x < 0.0:
        g = _QUARTER_TURN.compose(g)
        img1 = moebius_act(g, q1)
    img2 = moebius_act(g, q2)
    return CanonicalForm(
        isometry=g,
        theta1=math.atan2(img1.y, img1.x),
        theta2=math.atan2(img2.y, -img2.x),
    )


# -- admissible generators -----------------------------------------------

@dataclass(frozen=True)
class GeneratorCases:
    """Which generator directions can produce relative equilibria at a
    canonical configuration.

    The dilation and rotation cases each come with the rate that makes the
    augmented potential critical (the same squared rate for both). The
    mixed rotation-translation direction has no critical rate: its
    closed-form obstruction ``mixed_residual`` is positive whenever both
    angles are, and the reported minimum of the gradient norm over rates
    stays positive as the numerical route to the same fact. Parabolic
    generators fail earlier, their momentum commutator is nonzero for any
    nonzero rate.
    """

    theta1: float
    theta2: float
    params: Params
    omega2: float
    dilation_gradient_norm: float
    rotation_gradient_norm: float
    mixed_residual: float
    mixed_min_gradient_norm: float
    parabolic_commutator_norm: float

    def commutator(self, E: float, H: float, P: float) -> np.ndarray:
        """[J, xi] at the canonical configuration moving with (E, H, P)."""
        j = momentum_at_canonical(self.theta1, self.theta2, E, H, P, self.params)
        m = AlgebraElement(E, H, P).matrix()
        return j @ m - m @ j

    @property
    def dilation_admissible(self) -> bool:
        return self.dilation_gradient_norm <= 1e-8 * self._scale()

    @property
    def rotation_admissible(self) -> bool:
        return self.rotation_gradient_norm <= 1e-8 * self._scale()

    @property
    def mixed_admissible(self) -> bool:
        return self.mixed_min_gradient_norm <= 1e-8 * self._scale()

    def _scale(self):
        return self.params.k * self.params.m1 * self.params.m2


def _omega2_canonical(theta1: float, theta2: float, params: Params) -> float:
    """Squared equilibrium rate at canonical angles; shared by the
    dilation and rotation families."""
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    return (
        params.k
        * params.m1
        * s1 * s1 * s2 * s2 / (c1 + c2) ** 2
        * (s2 * s2 / c2)
    )


def admissible_generators(theta1: float, theta2: float, params: Params) -> GeneratorCases:
    """Scan the commuting generator directions at a canonical configuration.

    For each direction the relevant test is whether some rate makes the
    augmented potential critical there; the returned report carries the
    gradient norms. Mixed directions are scanned over a rate grid and
    polished with a golden-section refinement.
    """
    config = canonical_configuration(theta1, theta2)
    omega2 = _omega2_canonical(theta1, theta2, params)
    omega = math.sqrt(omega2)

    def grad_norm(xi):
        return float(
            np.linalg.norm(augmented_potential_gradient(config, params, xi))
        )

    dilation = grad_norm(omega * XI_H)
    rotation = grad_norm(omega * XI_E)

    mixed_dir = AlgebraElement(1.0, 0.0, 1.0)
    mixed = min(grad_norm(w * mixed_dir) for w in np.linspace(0.0, 4.0 * omega, 161))
    lo, hi = 0.0, 4.0 * omega
    for _ in range(80):
        probe_a = lo + (hi - lo) / 3.0
        probe_b = hi - (hi - lo) / 3.0
        if grad_norm(probe_a * mixed_dir) < grad_norm(probe_b * mixed_dir):
            hi = probe_b
        else:
            lo = probe_a
    mixed = min(mixed, grad_norm(0.5 * (lo + hi) * mixed_dir))

    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    # criticality obstruction of the mixed direction in closed form
    residual = params.m2 ** 2 * params.k * c2 * s2 * s2 * s1 ** 4 * (c1 + c2)

    j = momentum_at_canonical(theta1, theta2, 0.0, 0.0, 1.0, params)
    m = XI_P.matrix()
    comm = j @ m - m @ j
    parabolic = float(np.sqrt(np.sum(comm * comm)))

    return GeneratorCases(
        theta1=theta1,
        theta2=theta2,
        params=params,
        omega2=omega2,
        dilation_gradient_norm=dilation,
        rotation_gradient_norm=rotation,
        mixed_residual=residual,
        mixed_min_gradient_norm=mixed,
        parabolic_commutator_norm=parabolic,
    )


# -- the two families ----------------------------------------------------

@dataclass(frozen=True)
class RelativeEquilibrium:
    """A relative equilibrium in canonical position.

    ``omega`` is the signed rate; the generator is omega times the
    dilation field (hyperbolic family) or the rotation field (elliptic
    family). The distance between the bodies is d1 + d2.
    """

    family: Family
    params: Params
    d1: float
    d2: float
    theta1: float
    theta2: float
    omega: float
    xi: AlgebraElement
    config: Configuration

    @property
    def distance(self) -> float:
        return self.d1 + self.d2

    @property
    def period(self) -> float:
        """Period of the elliptic motion, 2 pi / |omega|."""
        return 2.0 * math.pi / abs(self.omega)


def build_relative_equilibrium(
    family: Family, d1: float, d2: float, params: Params, sign: int = 1
) -> RelativeEquilibrium:
    """Construct the relative equilibrium with the given arc distances.

    The distances must balance the masses: m1 sinh(2 d1) = m2 sinh(2 d2)
    within 1e-9 relative, else MassDistanceMismatch. ``sign`` picks the
    sense of motion. The construction cross-checks the intrinsic and
    canonical-angle rate formulas and the criticality of the augmented
    potential before returning.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    for name, d in (("d1", d1), ("d2", d2)):
        if not d > 0.0:
            raise NonPositiveDistance(f"{name} must be positive, got {d!r}")
    b1 = params.m1 * math.sinh(2.0 * d1)
    b2 = params.m2 * math.sinh(2.0 * d2)
    if abs(b1 - b2) > _BALANCE_TOL * max(b1, b2):
        raise MassDistanceMismatch(
            f"m1 sinh(2 d1) = {b1:.12g} but m2 sinh(2 d2) = {b2:.12g}; "
            "the distances do not balance the masses"
        )

    theta1, theta2 = canonical_angles_from_distances(d1, d2)
    d = d1 + d2
    omega2 = 2.0 * params.k * params.m1 / (math.sinh(d) ** 2 * math.sinh(2.0 * d2))
    omega2_alt = 2.0 * params.k * params.m2 / (math.sinh(d) ** 2 * math.sinh(2.0 * d1))
    omega2_trig = _omega2_canonical(theta1, theta2, params)
    if abs(omega2 - omega2_trig) > 1e-10 * omega2 or abs(omega2 - omega2_alt) > 1e-8 * omega2:
        raise ValueError(
            "rate formulas disagree: intrinsic "
            f"{omega2:.17g} / {omega2_alt:.17g}, canonical {omega2_trig:.17g}"
        )

    omega = sign * math.sqrt(omega2)
    basis = XI_H if family is Family.HYPERBOLIC else XI_E
    xi = omega * basis
    config = canonical_configuration(theta1, theta2)

    grad = augmented_potential_gradient(config, params, xi)
    scale = params.k * params.m1 * params.m2
    if float(np.linalg.norm(grad)) > 1e-8 * max(1.0, scale):
        raise ValueError(
            f"augmented potential is not critical (|grad| = {np.linalg.norm(grad):.3e})"
        )

    return RelativeEquilibrium(
        family=family,
        params=params,
        d1=d1,
        d2=d2,
        theta1=theta1,
        theta2=theta2,
        omega=omega,
        xi=xi,
        config=config,
    )


def initial_state(re: RelativeEquilibrium) -> PhaseState:
    """Phase state of the equilibrium motion at t = 0."""
    return legendre(re.config, re.params, re.xi)


def analytic_trajectory(re: RelativeEquilibrium, t: float) -> PhaseState:
    """Exact state at time t.

    Hyperbolic family: both bodies slide along the common geodesic, the
    canonical picture scaled by exp(omega t). Elliptic family: rigid
    rotation of the unit circle about (0, 1). Momenta come from the
    generator at the transported configuration.
    """
    w = re.omega * t
    if re.family is Family.HYPERBOLIC:
        lam = math.exp(w)
        c1, s1 = math.cos(re.theta1), math.sin(re.theta1)
        c2, s2 = math.cos(re.theta2), math.sin(re.theta2)
        config = Configuration(
            Point(lam * c1, lam * s1), Point(-lam * c2, lam * s2)
        )
    else:
        c1, s1 = math.cos(re.theta1), math.sin(re.theta1)
        c2, s2 = math.cos(re.theta2), math.sin(re.theta2)
        cw, sw = math.cos(w), math.sin(w)
        config = Configuration(
            Point(c1 * cw / (1.0 + c1 * sw), s1 / (1.0 + c1 * sw)),
            Point(-c2 * cw / (1.0 - c2 * sw), s2 / (1.0 - c2 * sw)),
        )
    return legendre(config, re.params, re.xi)


# -- intrinsic verification ----------------------------------------------

@dataclass(frozen=True)
class IntrinsicReport:
    """Geometric facts checked along an equilibrium trajectory."""

    family: Family
    n_samples: int
    expected_orientation: Orientation
    orientation: Orientation | None
    orientation_consistent: bool
    expected_speeds: tuple[float, float]
    max_speed_error: float
    max_perp_residual: float
    max_com_error: float
    com_speed: float
    ok: bool

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "n_samples": self.n_samples,
            "expected_orientation": self.expected_orientation.value,
            "orientation": self.orientation.value if self.orientation else None,
            "orientation_consistent": self.orientation_consistent,
            "expected_speeds": list(self.expected_speeds),
            "max_speed_error": self.max_speed_error,
            "max_perp_residual": self.max_perp_residual,
            "max_com_error": self.max_com_error,
            "com_speed": self.com_speed,
            "ok": self.ok,
        }


def intrinsic_checks(re: RelativeEquilibrium, n_samples: int = 16) -> IntrinsicReport:
    """Verify the hallmark geometry of the motion at sampled times.

    Checks that body velocities stay normal to the connecting geodesic,
    that the two normals point to the same side for the hyperbolic family
    and to opposite sides for the elliptic one, that speeds match
    |omega| cosh(d_i) respectively |omega| sinh(d_i), and that the center
    of mass moves up a vertical geodesic at speed |omega| (hyperbolic) or
    stays pinned at (0, 1) (elliptic).
    """
    w = abs(re.omega)
    if re.family is Family.HYPERBOLIC:
        expected = Orientation.EQUAL
        speeds = (w * math.cosh(re.d1), w * math.cosh(re.d2))
        t_max = 10.0 / max(1.0, w)
    else:
        expected = Orientation.OPPOSITE
        speeds = (w * math.sinh(re.d1), w * math.sinh(re.d2))
        t_max = re.period
    times = np.linspace(0.0, t_max, n_samples, endpoint=False)

    verdicts = set()
    max_perp = 0.0
    max_speed_err = 0.0
    max_com_err = 0.0
    for t in times:
        state = analytic_trajectory(re, t)
        q1, q2 = state.config.q1, state.config.q2
        geo = geodesic_through(q1, q2)
        v1 = infinitesimal_generator(re.xi, q1)
        v2 = infinitesimal_generator(re.xi, q2)
        for v, expected_speed in ((v1, speeds[0]), (v2, speeds[1])):
            tangent = geodesic_point_at(geo, arc_coordinate(geo, v.base))
            max_perp = max(
                max_perp,
                abs(hyperbolic_inner(v, tangent))
                / (v.hyperbolic_norm() * tangent.hyperbolic_norm()),
            )
            max_speed_err = max(
                max_speed_err, abs(v.hyperbolic_norm() - expected_speed)
            )
        verdicts.add(normal_orientation(geo, v1, v2))

        split = center_of_mass(q1, q2, re.params)
        if re.family is Family.HYPERBOLIC:
            com_expected = Point(0.0, math.exp(re.omega * t))
        else:
            com_expected = Point(0.0, 1.0)
        max_com_err = max(
            max_com_err, hyperbolic_distance(split.com, com_expected)
        )

    consistent = len(verdicts) == 1
    verdict = next(iter(verdicts)) if consistent else None
    ok = (
        consistent
        and verdict is expected
        and max_perp <= 1e-9
        and max_speed_err <= 1e-9 * max(1.0, speeds[0], speeds[1])
        and max_com_err <= 1e-9
    )
    return IntrinsicReport(
        family=re.family,
        n_samples=len(times),
        expected_orientation=expected,
        orientation=verdict,
        orientation_consistent=consistent,
        expected_speeds=speeds,
        max_speed_error=max_speed_err,
        max_perp_residual=max_perp,
        max_com_error=max_com_err,
        com_speed=w if re.family is Family.HYPERBOLIC else 0.0,
        ok=ok,
    )
