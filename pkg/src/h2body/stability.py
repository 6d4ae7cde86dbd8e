"""Nonlinear stability of the relative equilibria.

The reduced energy-momentum test splits the admissible variations at an
equilibrium into a rigid part, spanned by algebra directions transverse to
the momentum isotropy, and an internal shape part. Definiteness of the
second variation on each part decides stability. Both blocks have closed
forms here; each also has an independent numerical oracle (a definitional
assembly for the rigid block, a finite-difference Hessian for the internal
one) so the closed forms never go unchecked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonPositiveDistance, OutOfRange
from .geom import Point
from .liegroup import (
    XI_E,
    XI_H,
    XI_P,
    AlgebraElement,
    CoalgebraElement,
    ad_star,
    bracket,
)
from .dynamics import (
    Configuration,
    Params,
    augmented_potential,
    legendre,
    locked_inertia,
    momentum_map,
)
from .equilibria import Family, RelativeEquilibrium

# |internal block| below this (times m2^2 k) is reported as degenerate
_DEGENERATE_BAND = 1e-9
# step for the directional derivative of the locked inertia tensor
_DII_STEP = 1e-6
# step for the finite-difference Hessian of the augmented potential; the
# fourth-order stencil keeps roundoff near 1e-9 at this step
_HESS_STEP = 1e-3


class Verdict(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    DEGENERATE = "degenerate"


# -- shape functions of the elliptic family ------------------------------

def stability_indicator(u: float, v: float) -> float:
    """Sign decides elliptic stability: positive on the stable side.

    u and v are the cosines of the canonical angles (equivalently tanh of
    the arc distances to the center of mass).
    """
    return 1.0 - 3.0 * u * u * v * v - u * u - v * v


def v_of_u(u: float, c: float) -> float:
    """Partner cosine: the v in (0, 1) balancing mass ratio c at cosine u.

    Positive root of c u v^2 + (1 - u^2) v - c u = 0, the mass-balance
    relation cleared of denominators; v = u when c = 1.
    """
    if not 0.0 < u < 1.0:
        raise OutOfRange(f"u must lie in (0, 1), got {u!r}")
    if not c > 0.0:
        raise OutOfRange(f"mass ratio must be positive, got {c!r}")
    t = u * u - 1.0
    return (t + math.sqrt(t * t + 4.0 * c * c * u * u)) / (2.0 * c * u)


def stability_polynomial(x: float, c: float) -> float:
    """Polynomial whose unique root in (0, 1) is the stability threshold.

    Equals (3 x^2 + 1)(x^2 - 1)^3 + 16 c^2 x^6; negative exactly on the
    stable side."""
    x2 = x * x
    return 3.0 * x2 ** 4 + (16.0 * c * c - 8.0) * x2 ** 3 + 6.0 * x2 ** 2 - 1.0


def _stability_polynomial_deriv(x: float, c: float) -> float:
    x2 = x * x
    return 24.0 * x * x2 ** 3 + 6.0 * (16.0 * c * c - 8.0) * x * x2 ** 2 + 24.0 * x * x2


# -- momentum and rigid block --------------------------------------------

def _angles(re: RelativeEquilibrium):
    return (
        math.cos(re.theta1),
        math.sin(re.theta1),
        math.cos(re.theta2),
        math.sin(re.theta2),
    )


def momentum_of(re: RelativeEquilibrium) -> CoalgebraElement:
    """Momentum of the equilibrium motion, via the full phase-space map."""
    return momentum_map(legendre(re.config, re.params, re.xi))


def rig_basis(family: Family) -> tuple[AlgebraElement, AlgebraElement]:
    """Algebra directions transverse to the momentum isotropy subalgebra.

    The hyperbolic family's momentum is dual to the dilation, so rotation
    and translation are transverse; the elliptic family's momentum is dual
    to the rotation, leaving the dilation and a rotation-translation mix.
    """
    if family is Family.HYPERBOLIC:
        return XI_E, XI_P
    return XI_H, XI_E + XI_P


def rig_block(re: RelativeEquilibrium) -> np.ndarray:
    """Closed-form rigid block of the second variation, in rig_basis order."""
    c1, s1, c2, s2 = _angles(re)
    w2 = re.omega * re.omega
    m2 = re.params.m2
    if re.family is Family.HYPERBOLIC:
        pre = m2 * w2 * (c1 + c2) * c2 / (s2 * s2 * (1.0 - c1 * c2))
        return pre * np.array(
            [[1.0, -1.0], [-1.0, 1.0 / (c1 * c1 * c2 * c2)]]
        )
    pre = m2 * w2 * (c1 + c2) * c2 / (s2 * s2)
    return pre * np.array(
        [[1.0 / (1.0 - c1 * c2), 0.0], [0.0, 1.0 + c1 * c2]]
    )


def rig_block_oracle(re: RelativeEquilibrium) -> np.ndarray:
    """Rigid block assembled from its definition.

    Entry (i, j) pairs ad*_{lam_i} mu against the algebra correction
    II^{-1} ad*_{lam_j} mu + [lam_j, II^{-1} mu], with mu taken from the
    phase-space momentum map rather than any closed form.
    """
    mu = momentum_of(re)
    ii = locked_inertia(re.config, re.params)
    xi0 = ii.inverse_apply(mu)
    lams = rig_basis(re.family)
    out = np.empty((2, 2))
    for i, li in enumerate(lams):
        lhs = ad_star(li, mu)
        for j, lj in enumerate(lams):
            rhs = ii.inverse_apply(ad_star(lj, mu)) + bracket(lj, xi0)
            out[i, j] = lhs.pair(rhs)
    return out


# -- internal block ------------------------------------------------------

def v_int_generator(family: Family, theta1: float, theta2: float) -> np.ndarray:
    """Chart direction spanning the internal variation space, ordered
    (x1, y1, x2, y2). The same direction works for both families: it is
    tangential at each body, hence metric-orthogonal to the radial
    isotropy orbit directions."""
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    return np.array(
        [
            -s1 * s1 * c1 * (c2 * c2 + 1.0),
            s1 * c1 * c1 * (c2 * c2 + 1.0),
            s2 * s2 * c2 * (c1 * c1 + 1.0),
            s2 * c2 * c2 * (c1 * c1 + 1.0),
        ]
    )


def internal_block(re: RelativeEquilibrium) -> float:
    """Closed-form internal (shape) block on the v_int direction.

    Negative for every hyperbolic-family equilibrium. For the elliptic
    family the sign follows the stability indicator at the cosine pair."""
    c1, s1, c2, s2 = _angles(re)
    m2, k = re.params.m2, re.params.k
    if re.family is Family.HYPERBOLIC:
        return (
            -k
            * m2
            * m2
            * c2
            * s1 ** 4
            * (c1 * c2 + 1.0)
            * (c1 * c1 + s1 * s1 * c2 * c2 + 3.0)
            / ((c1 + c2) * c1)
        )
    u, v = c1, c2
    return (
        m2
        * m2
        * k
        * v
        * (1.0 - u * u) ** 2
        * (1.0 + u * v)
        * stability_indicator(u, v)
        / (u * (u + v))
    )


def locked_inertia_derivative(
    config: Configuration, params: Params, w: np.ndarray
) -> np.ndarray:
    """Directional derivative of the locked inertia tensor along the chart
    direction w, by central differences with step 1e-6 (scaled)."""
    q = np.array([config.q1.x, config.q1.y, config.q2.x, config.q2.y])
    h = _DII_STEP * max(1.0, float(np.max(np.abs(q))))
    wn = np.asarray(w, dtype=float)
    plus = locked_inertia(_config_of(q + h * wn), params).m
    minus = locked_inertia(_config_of(q - h * wn), params).m
    return (plus - minus) / (2.0 * h)


def _config_of(q) -> Configuration:
    return Configuration(Point(q[0], q[1]), Point(q[2], q[3]))


def _correction(re: RelativeEquilibrium, w: np.ndarray) -> tuple[float, AlgebraElement]:
    """Momentum-constraint correction <(DII w) xi, II^{-1} (DII w) xi> and
    the algebra element II^{-1} (DII w) xi it hinges on."""
    dii = locked_inertia_derivative(re.config, re.params, w)
    mvec = dii @ re.xi.coords()
    ii = locked_inertia(re.config, re.params)
    eta = np.linalg.solve(ii.m, mvec)
    return float(mvec @ eta), AlgebraElement(eta[0], eta[1], eta[2])


def internal_block_oracle(re: RelativeEquilibrium) -> float:
    """Internal block by finite differences, independent of the closed form.

    Second directional difference of the augmented potential along the
    internal direction (five-point fourth-order stencil, so the oracle
    itself is reliable to ~1e-9 absolute) plus the locked-inertia
    correction term."""
    w = v_int_generator(re.family, re.theta1, re.theta2)
    q = np.array([re.config.q1.x, re.config.q1.y, re.config.q2.x, re.config.q2.y])
    wnorm = float(np.linalg.norm(w))
    wn = w / wnorm
    h = _HESS_STEP * max(1.0, float(np.max(np.abs(q))))

    def f(step):
        return augmented_potential(_config_of(q + step * wn), re.params, re.xi)

    d2 = (
        (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h))
        / (12.0 * h * h)
        * wnorm
        * wnorm
    )
    corr, _ = _correction(re, w)
    return d2 + corr


def internal_membership(re: RelativeEquilibrium) -> dict:
    """Check that the correction element lies in the momentum isotropy.

    Returns the coordinates of II^{-1} (DII w) xi together with the norms
    of its isotropy component and of the complement; the complement should
    vanish, which is what makes the one-direction internal block complete.
    """
    w = v_int_generator(re.family, re.theta1, re.theta2)
    _, eta = _correction(re, w)
    if re.family is Family.HYPERBOLIC:
        member = abs(eta.H)
        complement = math.hypot(eta.E, eta.P)
    else:
        member = abs(eta.E)
        complement = math.hypot(eta.H, eta.P)
    return {
        "coords": (eta.E, eta.H, eta.P),
        "member_norm": member,
        "complement_norm": complement,
    }


# -- verdicts ------------------------------------------------------------

@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the reduced energy-momentum test at one equilibrium."""

    family: Family
    d1: float
    d2: float
    omega: float
    mass_ratio: float
    u: float
    v: float
    rig: np.ndarray
    rig_definite: bool
    internal: float
    signature: tuple[str, str, str, str]
    verdict: Verdict

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "d1": self.d1,
            "d2": self.d2,
            "omega": self.omega,
            "mass_ratio": self.mass_ratio,
            "u": self.u,
            "v": self.v,
            "rig_block": [list(map(float, row)) for row in self.rig],
            "rig_definite": self.rig_definite,
            "internal_block": self.internal,
            "signature": list(self.signature),
            "verdict": self.verdict.value,
        }


def classify_stability(re: RelativeEquilibrium) -> StabilityReport:
    """Run the reduced energy-momentum test on an equilibrium.

    The signature lists the sign of the two rigid directions, the internal
    direction, and the kinetic block (positive by construction). All plus
    means nonlinearly stable modulo the residual symmetry; a minus means
    unstable; a zero marks the degenerate band |internal| < 1e-9 m2^2 k
    where the quadratic test is silent.
    """
    ar = rig_block(re)
    try:
        np.linalg.cholesky(ar)
        ar_definite = True
    except np.linalg.LinAlgError:
        ar_definite = False
    internal = internal_block(re)

    band = _DEGENERATE_BAND * re.params.m2 * re.params.m2 * re.params.k
    ar_signs = ("+", "+") if ar_definite else ("-", "-")
    if abs(internal) < band:
        internal_sign = "0"
        verdict = Verdict.DEGENERATE
    elif internal > 0.0:
        internal_sign = "+"
        verdict = Verdict.STABLE if ar_definite else Verdict.UNSTABLE
    else:
        internal_sign = "-"
        verdict = Verdict.UNSTABLE

    c1 = math.cos(re.theta1)
    c2 = math.cos(re.theta2)
    return StabilityReport(
        family=re.family,
        d1=re.d1,
        d2=re.d2,
        omega=re.omega,
        mass_ratio=re.params.m1 / re.params.m2,
        u=c1,
        v=c2,
        rig=ar,
        rig_definite=ar_definite,
        internal=internal,
        signature=ar_signs + (internal_sign, "+"),
        verdict=verdict,
    )


# -- threshold curve -----------------------------------------------------

@dataclass(frozen=True)
class MassRatioCurve:
    """A point of the stability threshold curve at mass ratio c."""

    c: float
    u0: float
    d1: float
    residual: float


def threshold(c: float) -> MassRatioCurve:
    """Stability threshold for the elliptic family at mass ratio c.

    Bisection on the threshold polynomial over (0, 1), followed by a few
    Newton steps; the polynomial is negative below the root (stable) and
    positive above. At c = 1 the root is 1/sqrt(3).
    """
    if not c > 0.0:
        raise OutOfRange(f"mass ratio must be positive, got {c!r}")
    lo, hi = 0.0, 1.0
    flo = stability_polynomial(lo, c)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = stability_polynomial(mid, c)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-15:
            break
    x = 0.5 * (lo + hi)
    for _ in range(4):
        dfx = _stability_polynomial_deriv(x, c)
        if dfx == 0.0:
            break
        step = stability_polynomial(x, c) / dfx
        x -= step
        if abs(step) < 1e-16:
            break
    return MassRatioCurve(
        c=c, u0=x, d1=math.atanh(x), residual=abs(stability_polynomial(x, c))
    )


def intrinsic_stability_bound(d1: float, c: float) -> bool:
    """Stability test in intrinsic data: true when the mass ratio sits
    below sqrt(3 tanh(d1)^2 + 1) / (4 sinh(d1)^3)."""
    if not d1 > 0.0:
        raise NonPositiveDistance(f"d1 must be positive, got {d1!r}")
    if not c > 0.0:
        raise OutOfRange(f"mass ratio must be positive, got {c!r}")
    t = math.tanh(d1)
    return c < math.sqrt(3.0 * t * t + 1.0) / (4.0 * math.sinh(d1) ** 3)


def momentum_norm_profile(c: float, u_grid) -> np.ndarray:
    """Frobenius norm of the elliptic-family momentum along the family.

    Normalized to m2 = k = 1, m1 = c. Vanishes at both ends of (0, 1) and
    is extremal exactly where the stability indicator vanishes, which ties
    the fold of this curve to the loss of stability.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    lam = c / math.sqrt(2.0)
    out = np.empty_like(u_grid)
    for i, u in enumerate(u_grid):
        v = v_of_u(float(u), c)
        out[i] = lam * math.sqrt(u * (1.0 - v * v))
    return out
