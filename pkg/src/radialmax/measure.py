"""Ball and cap measures under radial power-law densities d(mu) = |y|^(-beta) dy.

Rotational symmetry reduces every ball to (center distance c, radius R);
its measure is a one-dimensional integral of spherical cap areas over the
slice radius s.  Slices with s <= R - c are full spheres and integrate in
closed form; the cap-regime remainder goes to the adaptive log-space
quadrature.  Everything returns logs since the quantities overflow doubles
once d reaches the low hundreds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, QuadratureError, log_integrate_batch
from .specfun import (
    NEG_INF,
    LogValue,
    log_beta,
    log_gamma,
    log_sin_power_from_trig,
    log_sin_power_integral,
    log_sphere_area,
)

__all__ = [
    "PowerLawMeasure",
    "BallSpec",
    "QuadratureConfig",
    "QuadratureError",
    "cap_angle",
    "log_cap_area",
    "log_ball_centered",
    "log_ball_offcenter",
    "log_ball_offcenter_unit_closed",
    "log_ball_offcenter_shell",
    "log_intersection_with_centered",
    "log_unit_ball_volume",
    "shift_condition_ratio",
    "shift_condition_ratios",
]


@dataclass(frozen=True)
class PowerLawMeasure:
    """The measure |y|^(-beta) dy on R^d; locally finite only for beta < d."""

    d: int
    beta: float = 0.0

    def __post_init__(self):
        if self.d < 1 or int(self.d) != self.d:
            raise ValueError("dimension d must be an integer >= 1")
        if not self.beta < self.d:
            raise ValueError(
                f"beta={self.beta} >= d={self.d}: measure is not locally finite at the origin"
            )

    @property
    def homogeneity(self) -> float:
        """Scaling degree: mu(lambda A) = lambda^(d - beta) mu(A)."""
        return self.d - self.beta


@dataclass(frozen=True)
class BallSpec:
    """A closed euclidean ball reduced by rotation invariance.

    center_distance == 0 denotes a centered ball.
    """

    center_distance: float
    radius: float

    def __post_init__(self):
        if self.center_distance < 0:
            raise ValueError("center_distance must be >= 0")
        if not self.radius > 0:
            raise ValueError("radius must be > 0")


def log_unit_ball_volume(d: int) -> float:
    """ln of the Lebesgue volume of the unit ball: ln(pi^{d/2} / Gamma(d/2 + 1))."""
    return 0.5 * d * math.log(math.pi) - log_gamma(0.5 * d + 1.0)


def cap_angle(c: float, s: float, R: float) -> float:
    """Half-angle of the cap cut from the sphere of radius s by B(c e1, R).

    Cosine law on the triangle with sides c, s, R:
        cos(beta_s) = (c^2 + s^2 - R^2) / (2 c s).
    Requires |c - R| <= s <= c + R (the spheres actually intersect) and
    c > 0.  Degenerates to 0 at the exit point s = c + R and to pi at the
    entry point s = R - c of a ball covering the origin.
    """
    if c <= 0 or s <= 0:
        raise ValueError("cap_angle requires c > 0 and s > 0")
    slack = 1e-12 * (c + R)
    if not (abs(c - R) - slack <= s <= c + R + slack):
        raise ValueError(
            f"slice radius s={s} outside the intersection window [{abs(c - R)}, {c + R}]"
        )
    # factored half-angle forms avoid the catastrophic cancellation of
    # (c^2 + s^2 - R^2)/(2cs) when the cap is within sqrt(eps) of degenerate
    q_minus = max(0.0, (R - c + s) * (R + c - s)) / (2.0 * c * s)  # 1 - cos
    q_plus = max(0.0, (c + s - R) * (c + s + R)) / (2.0 * c * s)   # 1 + cos
    sin_b = math.sqrt(max(0.0, q_minus * q_plus))
    return math.atan2(sin_b, 0.5 * (q_plus - q_minus))


def log_cap_area(d: int, s: float, phi: float) -> LogValue:
    """Area of the cap {angle <= phi} on the sphere of radius s in R^d.

    Equals omega_{d-2} s^{d-1} int_0^phi sin^{d-2}; for d = 2 the constant
    omega_0 = 2 makes this the arc length 2 s phi.
    """
    if d < 2:
        raise ValueError("log_cap_area requires d >= 2")
    if not 0.0 <= phi <= math.pi:
        raise ValueError("cap half-angle must lie in [0, pi]")
    if phi == 0.0:
        return LogValue(NEG_INF)
    return LogValue(
        log_sphere_area(d - 1) + (d - 1) * math.log(s) + log_sin_power_integral(phi, d - 2)
    )


def log_ball_centered(m: PowerLawMeasure, rho: float) -> LogValue:
    """mu(B(0, rho)) = omega_{d-1} rho^{d-beta} / (d - beta), in log form."""
    if not rho > 0:
        raise ValueError("radius must be > 0")
    p = m.homogeneity
    return LogValue(log_sphere_area(m.d) + p * math.log(rho) - math.log(p))


def _log_power_interval(p: float, a: float, b: float) -> float:
    """log of (b^p - a^p)/p for 0 <= a < b, p > 0, stable for huge p."""
    if b <= a:
        return NEG_INF
    top = p * math.log(b)
    if a <= 0.0:
        return top - math.log(p)
    rel = -math.expm1(p * (math.log(a) - math.log(b)))  # 1 - (a/b)^p
    if rel <= 0.0:  # a, b adjacent floats
        return NEG_INF
    return top + math.log(rel) - math.log(p)


def _cap_log_integrand_u(d: int, beta: float, C: np.ndarray, RR: np.ndarray):
    """ln[capArea(s) s^(-beta) R] at u = (s - c)/R, batched over segments.

    Working in u keeps the half-angle trigonometry cancellation-free:
        1 - cos(phi) = R^2 (1-u)(1+u) / (2 c s),
        1 + cos(phi) = (c+s-R)(c+s+R) / (2 c s),
    exact even when R/c is near roundoff; the extra ln R is the jacobian.
    """
    lw = log_sphere_area(d - 1)
    expo = (d - 1) - beta

    def log_f(seg, u):
        c = C[seg]
        Rb = RR[seg]
        s = c + u * Rb
        inv = 1.0 / (2.0 * c * s)
        q_minus = np.maximum(0.0, Rb * Rb * (1.0 - u) * (1.0 + u)) * inv
        q_plus = np.maximum(0.0, (c + s - Rb) * (c + s + Rb)) * inv
        sin_sq = np.clip(q_minus * q_plus, 0.0, 1.0)
        cos = 0.5 * (q_plus - q_minus)
        return (
            lw + expo * np.log(s) + log_sin_power_from_trig(sin_sq, cos, d - 2)
            + np.log(Rb)
        )

    return log_f


def _batched_shell_logs(m: PowerLawMeasure, cs, Rs, r_ins, r_outs,
                        quad: QuadratureConfig) -> np.ndarray:
    """log mu(B(c_i e1, R_i) intersect {r_in_i <= |y| <= r_out_i}) for many balls.

    Shares one adaptive quadrature run across all cap-regime pieces, which
    is what keeps parameter sweeps (shift ratios, radius grids, level
    sets) fast.
    """
    if m.d < 2:
        raise ValueError("off-center ball measures require d >= 2")
    cs = np.asarray(cs, dtype=float)
    Rs = np.asarray(Rs, dtype=float)
    r_ins = np.asarray(r_ins, dtype=float)
    r_outs = np.asarray(r_outs, dtype=float)
    n = len(cs)
    p = m.homogeneity
    lw_full = log_sphere_area(m.d)

    closed = np.full(n, NEG_INF)
    # cap-regime quadrature jobs live in u = (s - c)/R per ball
    job_lo = np.zeros(n)
    job_hi = np.zeros(n)
    for i in range(n):
        c, R = cs[i], Rs[i]
        a = max(max(0.0, c - R), r_ins[i])
        b = min(c + R, r_outs[i])
        if b <= a:
            continue
        if c == 0.0:
            # centered ball: every slice is a full sphere
            closed[i] = lw_full + _log_power_interval(p, a, b)
            continue
        if c < R:
            entry = R - c
            full_hi = min(b, entry)
            if full_hi > a:
                closed[i] = lw_full + _log_power_interval(p, a, full_hi)
            u_lo = max((a - c) / R, 1.0 - 2.0 * c / R)
        else:
            u_lo = max((a - c) / R, -1.0)
        u_hi = 1.0 if b >= c + R else (b - c) / R
        if u_hi > u_lo:
            job_lo[i] = u_lo
            job_hi[i] = u_hi

    log_f = _cap_log_integrand_u(m.d, m.beta, cs, Rs)
    cap_logs, _ = log_integrate_batch(log_f, job_lo, job_hi, quad)
    return np.logaddexp(closed, cap_logs)


def log_ball_offcenter_shell(m: PowerLawMeasure, ball: BallSpec, r_in: float, r_out: float,
                             quad: QuadratureConfig = DEFAULT_QUADRATURE) -> LogValue:
    """mu(B(c e1, R) intersect {r_in <= |y| <= r_out}) by slice quadrature."""
    out = _batched_shell_logs(m, [ball.center_distance], [ball.radius], [r_in], [r_out], quad)
    return LogValue(float(out[0]))


def log_ball_offcenter(m: PowerLawMeasure, ball: BallSpec,
                       quad: QuadratureConfig = DEFAULT_QUADRATURE) -> LogValue:
    """mu(B(c e1, R)) for any center distance c >= 0."""
    if ball.center_distance == 0.0:
        return log_ball_centered(m, ball.radius)
    return log_ball_offcenter_shell(m, ball, 0.0, math.inf, quad)


def log_intersection_with_centered(m: PowerLawMeasure, ball: BallSpec, r: float,
                                   quad: QuadratureConfig = DEFAULT_QUADRATURE) -> LogValue:
    """mu(B(c e1, R) intersect B(0, r)); zero when r <= c - R (disjoint)."""
    if r <= max(0.0, ball.center_distance - ball.radius):
        return LogValue(NEG_INF)
    return log_ball_offcenter_shell(m, ball, 0.0, r, quad)


def log_ball_offcenter_unit_closed(m: PowerLawMeasure) -> LogValue:
    """mu(B(e1, 1)) in closed form, no quadrature.

    Polar coordinates over the half-disk of slice parameters give
        mu(B(e1,1)) = 2^{d-beta-1} omega_{d-2} B((d-beta+1)/2, (d-1)/2) / (d-beta).
    """
    if m.d < 2:
        raise ValueError("closed off-center form requires d >= 2")
    p = m.homogeneity
    return LogValue(
        (p - 1.0) * math.log(2.0)
        + log_sphere_area(m.d - 1)
        + log_beta(0.5 * (p + 1.0), 0.5 * (m.d - 1))
        - math.log(p)
    )


def shift_condition_ratios(m: PowerLawMeasure, rs,
                           quad: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """Measure ratio of the origin-shifted ball to the original, per r.

    ratio(r) = mu(B(sqrt(1-r^2) e1, r)) / mu(B(e1, r)) evaluated at unit
    center norm; by homogeneity the ratio at any x depends only on r.  At
    r = 1 the numerator ball is centered and the ratio becomes
    mu(B(0,1)) / mu(B(e1,1)).
    """
    rs = np.asarray(rs, dtype=float)
    if np.any((rs <= 0) | (rs > 1)):
        raise ValueError("shift condition is defined for 0 < r <= 1")
    shifted_c = np.sqrt(np.maximum(0.0, 1.0 - rs * rs))
    cs = np.concatenate([shifted_c, np.ones_like(rs)])
    RR = np.concatenate([rs, rs])
    inner = np.zeros_like(cs)
    outer = np.full_like(cs, math.inf)
    logs = _batched_shell_logs(m, cs, RR, inner, outer, quad)
    k = len(rs)
    return np.exp(logs[:k] - logs[k:])


def shift_condition_ratio(m: PowerLawMeasure, r: float,
                          quad: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return float(shift_condition_ratios(m, [r], quad)[0])
