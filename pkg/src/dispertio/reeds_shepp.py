"""Closed-form Reeds-Shepp shortest paths.

The word families (CSC, CCC, CCCC, CCSC, CCSCC) follow Reeds & Shepp (1990)
in the formulation popularised by OMPL: each base formula is evaluated on the
goal expressed in the start frame and on its time-flipped, reflected and
backwards variants. Candidates are visited in a fixed order and a later word
replaces the incumbent only when strictly shorter, which makes the chosen word
deterministic when lengths tie.

Everything here works in units of the turning radius; callers scale by rho.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

PI = math.pi
HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi
# Sign tolerance on unit-radius segment lengths. Accepting a segment of -1e-10
# only adds a tiny reverse move, so every length is still a real path; a
# tighter value drops the optimal word when a segment is exactly zero.
ZERO = 1e-10

NOP, LEFT, STRAIGHT, RIGHT = 0, 1, 2, 3

# rows indexed by word type, columns are segment kinds
WORD_TYPES = np.array([
    [LEFT, RIGHT, LEFT, NOP, NOP],
    [RIGHT, LEFT, RIGHT, NOP, NOP],
    [LEFT, RIGHT, LEFT, RIGHT, NOP],
    [RIGHT, LEFT, RIGHT, LEFT, NOP],
    [LEFT, RIGHT, STRAIGHT, LEFT, NOP],
    [RIGHT, LEFT, STRAIGHT, RIGHT, NOP],
    [LEFT, STRAIGHT, RIGHT, LEFT, NOP],
    [RIGHT, STRAIGHT, LEFT, RIGHT, NOP],
    [LEFT, RIGHT, STRAIGHT, RIGHT, NOP],
    [RIGHT, LEFT, STRAIGHT, LEFT, NOP],
    [RIGHT, STRAIGHT, RIGHT, LEFT, NOP],
    [LEFT, STRAIGHT, LEFT, RIGHT, NOP],
    [LEFT, STRAIGHT, RIGHT, NOP, NOP],
    [RIGHT, STRAIGHT, LEFT, NOP, NOP],
    [LEFT, STRAIGHT, LEFT, NOP, NOP],
    [RIGHT, STRAIGHT, RIGHT, NOP, NOP],
    [LEFT, RIGHT, STRAIGHT, LEFT, RIGHT],
    [RIGHT, LEFT, STRAIGHT, RIGHT, LEFT],
], dtype=np.int64)

_LETTERS = {LEFT: "L", STRAIGHT: "S", RIGHT: "R"}


@njit(cache=True)
def _mod2pi(x):
    if -TWO_PI < x < TWO_PI:
        v = x
    else:
        v = np.fmod(x, TWO_PI)
    if v < -PI:
        v += TWO_PI
    elif v > PI:
        v -= TWO_PI
    return v


@njit(cache=True)
def _tau_omega(u, v, xi, eta, phi):
    delta = _mod2pi(u - v)
    a = math.sin(u) - math.sin(delta)
    b = math.cos(u) - math.cos(delta) - 1.0
    t1 = math.atan2(eta * a - xi * b, xi * a + eta * b)
    t2 = 2.0 * (math.cos(delta) - math.cos(v) - math.cos(u)) + 3.0
    tau = _mod2pi(t1 + PI) if t2 < 0 else _mod2pi(t1)
    omega = _mod2pi(tau - u + v - phi)
    return tau, omega


# -- base formulas; each returns (ok, t, u, v) -----------------------------

@njit(cache=True)
def _lp_sp_lp(x, y, phi, sphi, cphi):
    xi = x - sphi
    eta = y - 1.0 + cphi
    u = math.sqrt(xi * xi + eta * eta)
    t = math.atan2(eta, xi)
    if t >= -ZERO:
        v = _mod2pi(phi - t)
        if v >= -ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_sp_rp(x, y, phi, sphi, cphi):
    xi = x + sphi
    eta = y - 1.0 - cphi
    u1 = xi * xi + eta * eta
    t1 = math.atan2(eta, xi)
    if u1 >= 4.0:
        u = math.sqrt(u1 - 4.0)
        theta = math.atan2(2.0, u)
        t = _mod2pi(t1 + theta)
        v = _mod2pi(t - phi)
        if t >= -ZERO and v >= -ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_rm_l(x, y, phi, sphi, cphi):
    xi = x - sphi
    eta = y - 1.0 + cphi
    u1 = math.sqrt(xi * xi + eta * eta)
    theta = math.atan2(eta, xi)
    if u1 <= 4.0:
        u = -2.0 * math.asin(0.25 * u1)
        t = _mod2pi(theta + 0.5 * u + PI)
        v = _mod2pi(phi - t + u)
        if t >= -ZERO and u <= ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_rup_lum_rm(x, y, phi, sphi, cphi):
    xi = x + sphi
    eta = y - 1.0 - cphi
    rho = 0.25 * (2.0 + math.sqrt(xi * xi + eta * eta))
    if rho <= 1.0:
        u = math.acos(rho)
        t, v = _tau_omega(u, -u, xi, eta, phi)
        if t >= -ZERO and v <= ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_rum_lum_rp(x, y, phi, sphi, cphi):
    xi = x + sphi
    eta = y - 1.0 - cphi
    rho = (20.0 - xi * xi - eta * eta) / 16.0
    if 0.0 <= rho <= 1.0:
        u = -math.acos(rho)
        if u >= -HALF_PI:
            t, v = _tau_omega(u, u, xi, eta, phi)
            if t >= -ZERO and v >= -ZERO:
                return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_rm_sm_lm(x, y, phi, sphi, cphi):
    xi = x - sphi
    eta = y - 1.0 + cphi
    rho = math.sqrt(xi * xi + eta * eta)
    theta = math.atan2(eta, xi)
    if rho >= 2.0:
        r = math.sqrt(rho * rho - 4.0)
        u = 2.0 - r
        t = _mod2pi(theta + math.atan2(r, -2.0))
        v = _mod2pi(phi - HALF_PI - t)
        if t >= -ZERO and u <= ZERO and v <= ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_rm_sm_rm(x, y, phi, sphi, cphi):
    xi = x + sphi
    eta = y - 1.0 - cphi
    rho = math.sqrt(eta * eta + xi * xi)
    theta = math.atan2(xi, -eta)
    if rho >= 2.0:
        t = theta
        u = 2.0 - rho
        v = _mod2pi(t + HALF_PI - phi)
        if t >= -ZERO and u <= ZERO and v <= ZERO:
            return True, t, u, v
    return False, 0.0, 0.0, 0.0


@njit(cache=True)
def _lp_rm_s_lm_rp(x, y, phi, sphi, cphi):
    xi = x + sphi
    eta = y - 1.0 - cphi
    rho = math.sqrt(xi * xi + eta * eta)
    if rho >= 2.0:
        u = 4.0 - math.sqrt(rho * rho - 4.0)
        if u <= ZERO:
            t = _mod2pi(math.atan2((4.0 - u) * xi - 2.0 * eta, -2.0 * xi + (u - 4.0) * eta))
            v = _mod2pi(t - phi)
            if t >= -ZERO and v >= -ZERO:
                return True, t, u, v
    return False, 0.0, 0.0, 0.0


# -- word search -------------------------------------------------------------

@njit(cache=True)
def solve_local(x, y, phi, out):
    """Shortest word to goal ``(x, y, phi)`` given in the unit-radius start frame.

    Writes the five signed segment lengths into ``out`` and returns
    ``(word_type, total_length)``.
    """
    best = np.inf
    kind = -1
    for i in range(5):
        out[i] = 0.0
    sphi = math.sin(phi)
    cphi = math.cos(phi)

    # CSC
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_sp_lp(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v)
            if best > L:
                best = L
                kind = 14 if variant < 2 else 15
                out[0] = sgn * t; out[1] = sgn * u; out[2] = sgn * v; out[3] = 0.0; out[4] = 0.0
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_sp_rp(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v)
            if best > L:
                best = L
                kind = 12 if variant < 2 else 13
                out[0] = sgn * t; out[1] = sgn * u; out[2] = sgn * v; out[3] = 0.0; out[4] = 0.0

    # CCC, forwards then backwards
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_l(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v)
            if best > L:
                best = L
                kind = 0 if variant < 2 else 1
                out[0] = sgn * t; out[1] = sgn * u; out[2] = sgn * v; out[3] = 0.0; out[4] = 0.0
    xb = x * cphi + y * sphi
    yb = x * sphi - y * cphi
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_l(sx * xb, sy * yb, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v)
            if best > L:
                best = L
                kind = 0 if variant < 2 else 1
                out[0] = sgn * v; out[1] = sgn * u; out[2] = sgn * t; out[3] = 0.0; out[4] = 0.0

    # CCCC
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rup_lum_rm(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + 2.0 * abs(u) + abs(v)
            if best > L:
                best = L
                kind = 2 if variant < 2 else 3
                out[0] = sgn * t; out[1] = sgn * u; out[2] = -sgn * u; out[3] = sgn * v; out[4] = 0.0
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rum_lum_rp(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + 2.0 * abs(u) + abs(v)
            if best > L:
                best = L
                kind = 2 if variant < 2 else 3
                out[0] = sgn * t; out[1] = sgn * u; out[2] = sgn * u; out[3] = sgn * v; out[4] = 0.0

    # CCSC, forwards then backwards; the fixed quarter turn adds pi/2
    if best <= HALF_PI:
        return kind, best
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_sm_lm(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v) + HALF_PI
            if best > L:
                best = L
                kind = 4 if variant < 2 else 5
                out[0] = sgn * t; out[1] = -sgn * HALF_PI; out[2] = sgn * u; out[3] = sgn * v; out[4] = 0.0
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_sm_rm(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v) + HALF_PI
            if best > L:
                best = L
                kind = 8 if variant < 2 else 9
                out[0] = sgn * t; out[1] = -sgn * HALF_PI; out[2] = sgn * u; out[3] = sgn * v; out[4] = 0.0
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_sm_lm(sx * xb, sy * yb, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v) + HALF_PI
            if best > L:
                best = L
                kind = 6 if variant < 2 else 7
                out[0] = sgn * v; out[1] = sgn * u; out[2] = -sgn * HALF_PI; out[3] = sgn * t; out[4] = 0.0
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_sm_rm(sx * xb, sy * yb, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v) + HALF_PI
            if best > L:
                best = L
                kind = 10 if variant < 2 else 11
                out[0] = sgn * v; out[1] = sgn * u; out[2] = -sgn * HALF_PI; out[3] = sgn * t; out[4] = 0.0

    # CCSCC, two quarter turns
    if best <= PI:
        return kind, best
    for variant in range(4):
        sx = -1.0 if variant == 1 or variant == 3 else 1.0
        sy = -1.0 if variant >= 2 else 1.0
        sp = sx * sy
        sgn = sx
        ok, t, u, v = _lp_rm_s_lm_rp(sx * x, sy * y, sp * phi, sp * sphi, cphi)
        if ok:
            L = abs(t) + abs(u) + abs(v) + PI
            if best > L:
                best = L
                kind = 16 if variant < 2 else 17
                out[0] = sgn * t; out[1] = -sgn * HALF_PI; out[2] = sgn * u
                out[3] = -sgn * HALF_PI; out[4] = sgn * v

    return kind, best


@njit(cache=True)
def to_local(x0, y0, th0, x1, y1, th1, rho):
    dx = x1 - x0
    dy = y1 - y0
    c = math.cos(th0)
    s = math.sin(th0)
    return (c * dx + s * dy) / rho, (-s * dx + c * dy) / rho, th1 - th0


@njit(cache=True)
def distance(x0, y0, th0, x1, y1, th1, rho):
    lx, ly, lphi = to_local(x0, y0, th0, x1, y1, th1, rho)
    buf = np.empty(5)
    _, length = solve_local(lx, ly, lphi, buf)
    return length * rho


@njit(cache=True)
def distance_many(a, targets, rho, out):
    """``out[i] = dist(a, targets[i])`` for a batch of targets."""
    buf = np.empty(5)
    for i in range(targets.shape[0]):
        lx, ly, lphi = to_local(a[0], a[1], a[2], targets[i, 0], targets[i, 1], targets[i, 2], rho)
        _, length = solve_local(lx, ly, lphi, buf)
        out[i] = length * rho


@njit(cache=True)
def state_along(x0, y0, th0, rho, kind, lengths, s):
    """State after travelling arc length ``s`` (world units) along a word."""
    remaining = s / rho
    x = 0.0
    y = 0.0
    phi = th0
    for i in range(5):
        seg = WORD_TYPES[kind, i]
        if seg == NOP or remaining <= 0.0:
            break
        v = lengths[i]
        if abs(v) > remaining:
            v = remaining if v > 0 else -remaining
        remaining -= abs(v)
        if seg == LEFT:
            x += math.sin(phi + v) - math.sin(phi)
            y += -math.cos(phi + v) + math.cos(phi)
            phi += v
        elif seg == RIGHT:
            x += -math.sin(phi - v) + math.sin(phi)
            y += math.cos(phi - v) - math.cos(phi)
            phi -= v
        else:
            x += v * math.cos(phi)
            y += v * math.sin(phi)
    return x0 + x * rho, y0 + y * rho, phi


def word_string(kind: int, lengths) -> str:
    """Human-readable word, e.g. ``L+S+R-``; zero-length segments are dropped."""
    parts = []
    for seg, v in zip(WORD_TYPES[kind], lengths):
        if seg == NOP or abs(v) <= 1e-12:
            continue
        parts.append(_LETTERS[int(seg)] + ("+" if v > 0 else "-"))
    return "".join(parts)
