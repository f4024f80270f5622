"""Ground states of the profile equation phi'' + (d-1)/r phi' - omega phi + f(phi) = 0.

The solver shoots from r = 0 (phi'(0) = 0) and bisects the initial height
between two terminal outcomes: the trajectory crossing zero ("overshoot") and
the trajectory turning back upward ("undershoot").  Past the point where the
profile has decayed by a fixed factor the sampled solution is continued with
the matched linearized tail A e^{-mu r} (r0/r)^{(d-1)/2}; this removes the
exponentially growing contamination that any shooting method accumulates and
makes the decay certificates honest all the way to the grid end.

For d = 1 pure powers the ground state is known in closed form,
Q(x) = ((alpha+2)/2)^{1/alpha} sech^{2/alpha}(alpha x / 2), and
phi_omega(x) = omega^{1/alpha} Q(sqrt(omega) x); ``closed_form_bound_state``
packages it through the same interface for use as an oracle and as a fast
profile source for train assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import CertificateUnbounded, NoBoundState, NotConverged

#: d = 1: profile height (relative to phi(0)) beyond which the tail is rebuilt
#: from the energy-zero reduction dphi/dr = -sqrt(omega phi^2 - 2F(phi)).
REDUCTION_ANCHOR = 3e-3
#: d >= 2: height below which the matched exponential tail takes over.
TAIL_SWITCH = 1e-5

#: Default radial extent: the a < 1 certificate envelopes underflow before this.
R_MAX_FACTOR = 30.0

BISECT_DEPTH = 60


def _default_n_points(nl, omega, r_max):
    # Node spacing fixed in the rescaled variable sqrt(omega) r, shrunk for
    # steep cores (large upper exponent) so the five-point residual stencil
    # stays an order below the 1e-8 tolerance.
    h_y = 0.005 * min(1.0, (2.0 / nl.alpha2) ** 1.5)
    return max(4001, int(math.sqrt(omega) * r_max / h_y) + 1)


def closed_form_q(alpha, x):
    """d = 1 ground state of phi'' - phi + phi^{1+alpha} = 0 (frequency 1)."""
    x = np.asarray(x, dtype=float)
    amp = ((alpha + 2.0) / 2.0) ** (1.0 / alpha)
    return amp * np.cosh(0.5 * alpha * x) ** (-2.0 / alpha)


@dataclass
class DecayCertificate:
    """Constant D_a with |phi| + omega^{-1/2}|phi'| <= D_a omega^{1/alpha1} e^{-a sqrt(omega) r}."""

    a: float
    d_a: float
    alpha1: float
    peak_r: float

    def to_dict(self):
        return {"a": self.a, "d_a": self.d_a, "alpha1": self.alpha1, "peak_r": self.peak_r}


@dataclass
class BoundState:
    """Radial ground-state profile with a verified equation residual.

    ``r``/``phi``/``dphi`` sample [0, r_max] uniformly; beyond ``tail_r`` the
    samples already lie on the matched exponential tail, whose parameters are
    kept so evaluation beyond the grid stays meaningful.
    """

    omega: float
    d: int
    nl: object
    r: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    residual_max: float
    tail_r: float
    tail_amp: float
    tail_mu: float

    def __post_init__(self):
        self._spline = CubicSpline(self.r, self.phi)
        self._dspline = CubicSpline(self.r, self.dphi)

    @property
    def phi0(self):
        return float(self.phi[0])

    @property
    def r_max(self):
        return float(self.r[-1])

    def _tail(self, rr):
        decay = self.tail_amp * np.exp(-self.tail_mu * (rr - self.tail_r))
        if self.d > 1:
            decay = decay * (self.tail_r / rr) ** ((self.d - 1) / 2.0)
        return decay

    def _tail_deriv(self, rr):
        val = self._tail(rr)
        mu_eff = self.tail_mu + (self.d - 1) / (2.0 * rr)
        return -mu_eff * val

    def eval(self, x):
        """Even extension phi(|x|), valid for any |x| via the analytic tail."""
        rr = np.abs(np.asarray(x, dtype=float))
        out = np.empty_like(rr)
        inner = rr <= self.tail_r
        out[inner] = self._spline(rr[inner])
        out[~inner] = self._tail(rr[~inner])
        return out

    def eval_deriv(self, x):
        """Odd extension of the radial derivative: sign(x) phi'(|x|)."""
        x = np.asarray(x, dtype=float)
        rr = np.abs(x)
        out = np.empty_like(rr)
        inner = rr <= self.tail_r
        out[inner] = self._dspline(rr[inner])
        out[~inner] = self._tail_deriv(rr[~inner])
        return np.sign(x) * out

    def to_header(self):
        return {"omega": self.omega, "d": self.d, "nonlinearity": self.nl.to_config(),
                "phi0": self.phi0, "residual_max": self.residual_max,
                "r_max": self.r_max, "tail_r": self.tail_r}


def _rhs(nl, omega, d):
    def rhs(r, y):
        phi, dphi = y
        f_val = nl.g(phi * phi) * phi
        if r == 0.0:
            acc = (omega * phi - f_val) / d
        else:
            acc = omega * phi - f_val - (d - 1) / r * dphi
        return (dphi, acc)
    return rhs


def _series_coeffs(nl, omega, d, phi0):
    """Even-series coefficients at the origin: phi = phi0 + c2 r^2 + c4 r^4 + c6 r^6.

    Matching phi'' + (d-1)/r phi' = omega phi - f(phi) order by order, with
    h(s) = omega s - f(s):  2d c2 = h,  (4d+8) c4 = h' c2,
    (6d+24) c6 = h' c4 + h'' c2^2 / 2.
    """
    h0 = omega * phi0 - nl.g(phi0 * phi0) * phi0
    hp0 = omega - nl.f_prime_real(phi0)
    hpp0 = -nl.f_second_real(phi0)
    c2 = h0 / (2.0 * d)
    c4 = hp0 * c2 / (4.0 * d + 8.0)
    c6 = (hp0 * c4 + 0.5 * hpp0 * c2 * c2) / (6.0 * d + 24.0)
    return c2, c4, c6


def _series_eval(phi0, coeffs, r):
    c2, c4, c6 = coeffs
    phi = phi0 + c2 * r**2 + c4 * r**4 + c6 * r**6
    dphi = 2.0 * c2 * r + 4.0 * c4 * r**3 + 6.0 * c6 * r**5
    return phi, dphi


def _start_radius(omega):
    # Inside this radius the sextic origin series beats the integrator, whose
    # 1/r friction term degrades the first steps for d >= 2; at the handoff
    # the series' own equation residual is O(r^6) and far below 1e-9.
    return 0.015 / math.sqrt(max(omega, 1.0))


def _classify(nl, omega, d, phi0, r_end, rtol=1e-10):
    """Outcome of one shot: 'cross', 'turn' or 'decay' (no event by r_end)."""
    def ev_cross(r, y):
        return y[0]
    ev_cross.terminal = True
    ev_cross.direction = -1.0

    def ev_turn(r, y):
        return y[1] - 1e-30
    ev_turn.terminal = True
    ev_turn.direction = 1.0

    r0 = _start_radius(omega)
    y0 = _series_eval(phi0, _series_coeffs(nl, omega, d, phi0), r0)
    sol = solve_ivp(_rhs(nl, omega, d), (r0, r_end), y0, method="DOP853",
                    rtol=rtol, atol=1e-14 * phi0, events=(ev_cross, ev_turn),
                    first_step=r0, dense_output=False)
    if sol.t_events[0].size:
        return "cross"
    if sol.t_events[1].size:
        return "turn"
    return "decay"


def _zero_energy_height(nl, omega, s_max, n=4000):
    """First root of U(phi) = F(phi) - omega phi^2 / 2 and the end of its window.

    U < 0 near zero for every admissible nonlinearity; the first upward sign
    change (refined by brentq) is the d = 1 ground-state height exactly, and a
    lower bound on it for d >= 2 where friction costs energy.
    """
    from scipy.optimize import brentq

    grid = np.linspace(0.0, s_max, n)[1:]
    u = nl.big_f(grid) - 0.5 * omega * grid**2
    root = None
    for i in range(len(grid) - 1):
        if u[i] < 0 <= u[i + 1]:
            root = brentq(lambda p: nl.big_f(p) - 0.5 * omega * p * p,
                          grid[i], grid[i + 1], xtol=1e-300, rtol=1e-15)
            break
    if root is None:
        return None, None
    above = grid[(grid > root) & (u < 0)]
    upper = float(above[0]) if above.size else s_max
    return float(root), upper


def _seed_candidates(nl, omega, s_max):
    """Initial-height candidates, bracketing the zero-energy level when one exists."""
    if s_max is None:
        s_max = 8.0 * max(1.0, omega) ** (1.0 / nl.alpha1)
    phi_u, upper = _zero_energy_height(nl, omega, s_max)
    if phi_u is not None:
        lo_side = phi_u * np.array([0.99, 0.9999, 0.99999999])
        hi_side = np.geomspace(phi_u * 1.00000001, max(upper, phi_u * 1.01), 60)
        return np.concatenate([lo_side, hi_side])
    return np.geomspace(s_max * 1e-4, s_max, 120)


def solve_bound_state(nl, omega, d=1, r_max=None, tol=1e-8, n_points=None,
                      s_max=None, bisect_depth=BISECT_DEPTH):
    """Ground state at frequency omega by bisection shooting on phi(0).

    Raises NoBoundState when no undershoot/overshoot bracket exists within
    (0, s_max] (frequency outside the existence range), NotConverged when the
    sampled profile misses the residual tolerance.
    """
    if omega <= 0:
        raise NoBoundState("omega must be positive")
    if r_max is None:
        r_max = R_MAX_FACTOR / math.sqrt(omega)
    if n_points is None:
        n_points = _default_n_points(nl, omega, r_max)

    candidates = _seed_candidates(nl, omega, s_max)
    lo = hi = None
    prev = None
    for phi0 in candidates:
        outcome = _classify(nl, omega, d, float(phi0), r_max)
        if outcome == "decay":
            lo = hi = float(phi0)
            break
        if prev is not None and prev[1] == "turn" and outcome == "cross":
            lo, hi = prev[0], float(phi0)
            break
        prev = (float(phi0), outcome)
    if lo is None:
        raise NoBoundState(
            f"no shooting bracket for {nl.label()} at omega = {omega:g} (d = {d})")

    if hi > lo:
        for _ in range(bisect_depth):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            outcome = _classify(nl, omega, d, mid, r_max, rtol=1e-12)
            if outcome == "cross":
                hi = mid
            elif outcome == "turn":
                lo = mid
            else:
                lo = hi = mid
                break
    phi0 = 0.5 * (lo + hi)

    r = np.linspace(0.0, r_max, n_points)
    r0 = _start_radius(omega)
    coeffs = _series_coeffs(nl, omega, d, phi0)
    y0 = _series_eval(phi0, coeffs, r0)
    sol = solve_ivp(_rhs(nl, omega, d), (r0, r_max), y0, method="DOP853",
                    rtol=1e-12, atol=1e-14 * phi0, first_step=r0,
                    dense_output=True)
    inner = r < r0
    phi = np.empty_like(r)
    dphi = np.empty_like(r)
    phi[inner], dphi[inner] = _series_eval(phi0, coeffs, r[inner])
    y = sol.sol(r[~inner])
    phi[~inner], dphi[~inner] = y[0], y[1]

    # Rebuild the tail past the anchor height: the shooting solution carries an
    # e^{+sqrt(omega) r} contamination (bisection can only pin phi(0) to a few
    # ulps) which would dominate the samples long before r_max.
    delta = REDUCTION_ANCHOR if d == 1 else TAIL_SWITCH
    switch = np.nonzero((phi < delta * phi0) & (dphi < 0.0))[0]
    if switch.size == 0:
        raise NotConverged(
            f"profile never decayed below {delta:g} of phi(0); increase r_max")
    i_s = int(switch[0])
    r_s = float(r[i_s])
    amp = float(phi[i_s])

    if d == 1:
        # Energy-zero reduction: exact for the homoclinic, and contracting, so
        # it tracks the decaying branch to machine accuracy.
        def reduced(_, y_):
            p = omega * y_[0] ** 2 - 2.0 * nl.big_f(y_[0])
            return (-math.sqrt(max(p, 0.0)),)

        red = solve_ivp(reduced, (r_s, r_max), (amp,), method="DOP853",
                        rtol=1e-12, atol=1e-300, dense_output=True)
        phi[i_s:] = red.sol(r[i_s:])[0]
        p_tail = omega * phi[i_s:] ** 2 - 2.0 * nl.big_f(phi[i_s:])
        dphi[i_s:] = -np.sqrt(np.maximum(p_tail, 0.0))
        mu = math.sqrt(omega)
        tail_r, tail_amp = float(r[-2]), float(phi[-2])
    else:
        mu = -float(dphi[i_s]) / amp - (d - 1) / (2.0 * r_s)
        if mu <= 0:
            raise NotConverged("non-decaying tail slope at the switch radius")
        tail = amp * np.exp(-mu * (r[i_s:] - r_s)) * (r_s / r[i_s:]) ** ((d - 1) / 2.0)
        phi[i_s:] = tail
        dphi[i_s:] = -(mu + (d - 1) / (2.0 * r[i_s:])) * tail
        tail_r, tail_amp = r_s, amp

    bs = BoundState(omega=float(omega), d=int(d), nl=nl, r=r, phi=phi, dphi=dphi,
                    residual_max=0.0, tail_r=tail_r, tail_amp=tail_amp, tail_mu=mu)
    bs.residual_max = profile_residual(bs)
    if bs.residual_max > tol:
        raise NotConverged(
            f"equation residual {bs.residual_max:.3e} exceeds tol = {tol:g}")
    return bs


def _d4(values, h):
    """Fourth-order five-point first derivative on interior nodes [2, -2)."""
    return (values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]) / (12 * h)


def profile_residual(bs):
    """Max interior residual of phi'' + (d-1)/r phi' - omega phi + f(phi).

    phi'' is the fourth-order stencil applied to the stored derivative samples,
    and the stored derivative is itself cross-checked against the stencil of
    phi, so the check stays independent of the integrator that produced them.
    """
    r, phi, dphi = bs.r, bs.phi, bs.dphi
    h = r[1] - r[0]
    consistency = float(np.max(np.abs(_d4(phi, h) - dphi[2:-2])))
    lap = _d4(dphi, h)
    rr = r[2:-2]
    f_val = bs.nl.g(phi[2:-2] ** 2) * phi[2:-2]
    res = lap + (bs.d - 1) / rr * dphi[2:-2] - bs.omega * phi[2:-2] + f_val
    return max(float(np.max(np.abs(res))), consistency)


def closed_form_bound_state(alpha, omega=1.0, d=1, r_max=None, n_points=None,
                            nl=None):
    """Exact d = 1 pure-power ground state packaged as a BoundState.

    phi_omega(r) = omega^{1/alpha} Q(sqrt(omega) r); the derivative samples are
    analytic, the tail parameters exact (rate sqrt(omega) times the sech
    correction at the switch radius).
    """
    if d != 1:
        raise NoBoundState("closed form only available for d = 1")
    if nl is None:
        from .nonlinearity import pure_power
        nl = pure_power(alpha)
    if r_max is None:
        r_max = R_MAX_FACTOR / math.sqrt(omega)
    if n_points is None:
        n_points = _default_n_points(nl, omega, r_max)
    r = np.linspace(0.0, r_max, n_points)
    sw = math.sqrt(omega)
    scale = omega ** (1.0 / alpha)
    y = sw * r
    phi = scale * closed_form_q(alpha, y)
    # d/dr [Q(sqrt(omega) r)] = sqrt(omega) Q'(y); Q'/Q = -tanh(alpha y / 2).
    dphi = -sw * phi * np.tanh(0.5 * alpha * y)

    idx = np.nonzero(phi < TAIL_SWITCH * phi[0])[0]
    i_s = int(idx[0]) if idx.size else n_points - 2
    r_s = float(r[i_s])
    amp = float(phi[i_s])
    mu = sw * math.tanh(0.5 * alpha * sw * r_s)
    bs = BoundState(omega=float(omega), d=1, nl=nl, r=r, phi=phi, dphi=dphi,
                    residual_max=0.0, tail_r=r_s, tail_amp=amp, tail_mu=mu)
    bs.residual_max = profile_residual(bs)
    return bs


def certify_decay(bs, a):
    """Minimal D_a for the envelope e^{-a sqrt(omega) r} at decay share a in (0,1).

    CertificateUnbounded when the maximand has not visibly peaked before the
    grid end (last value above half the maximum), which happens when a is too
    close to the true decay rate for the available extent.
    """
    if not 0 < a < 1:
        raise ValueError("need 0 < a < 1")
    omega = bs.omega
    weight = (np.abs(bs.phi) + np.abs(bs.dphi) / math.sqrt(omega)) \
        * omega ** (-1.0 / bs.nl.alpha1)
    maximand = weight * np.exp(a * math.sqrt(omega) * bs.r)
    peak = int(np.argmax(maximand))
    if maximand[-1] > 0.5 * maximand[peak]:
        raise CertificateUnbounded(
            f"envelope at a = {a:g} has not dominated by r_max = {bs.r_max:g}")
    return DecayCertificate(a=float(a), d_a=float(maximand[peak]),
                            alpha1=float(bs.nl.alpha1), peak_r=float(bs.r[peak]))


@dataclass
class BifurcationReport:
    """Small-frequency scaling of the correction to the rescaled ground state."""

    omegas: np.ndarray
    sup_xi: np.ndarray
    m_fitted: float
    m_expected: float
    r_squared: float

    def to_dict(self):
        return {"omegas": list(map(float, self.omegas)),
                "sup_xi": list(map(float, self.sup_xi)),
                "m_fitted": self.m_fitted, "m_expected": self.m_expected,
                "r_squared": self.r_squared}


def bifurcation_scan(nl, omega_list, d=1, y_cap=15.0, **solver_kwargs):
    """Fit sup |xi_omega| ~ omega^m where phi_omega = omega^{1/a}[Q + xi](sqrt(omega) x).

    Q is the frequency-1 pure-power ground state with the same small-amplitude
    exponent; the expected slope for the double power is
    m = (beta/alpha - 1)/min(1, alpha).
    """
    if nl.kind != "double_power":
        raise ValueError("bifurcation scan is defined for the double power family")
    alpha, beta = nl.alpha, nl.beta
    m_expected = (beta / alpha - 1.0) / min(1.0, alpha)

    if d == 1:
        q_eval = lambda y: closed_form_q(alpha, y)
    else:
        from .nonlinearity import pure_power
        q_state = solve_bound_state(pure_power(alpha), 1.0, d=d, **solver_kwargs)
        q_eval = q_state.eval

    sups = []
    for omega in omega_list:
        bs = solve_bound_state(nl, omega, d=d, **solver_kwargs)
        y = np.linspace(0.0, y_cap, 2001)
        xi = bs.eval(y / math.sqrt(omega)) / omega ** (1.0 / alpha) - q_eval(y)
        sups.append(float(np.max(np.abs(xi))))

    logw = np.log(np.asarray(omega_list, dtype=float))
    logx = np.log(np.asarray(sups))
    slope, intercept = np.polyfit(logw, logx, 1)
    resid = logx - (slope * logw + intercept)
    ss_tot = float(np.sum((logx - logx.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return BifurcationReport(omegas=np.asarray(omega_list, dtype=float),
                             sup_xi=np.asarray(sups), m_fitted=float(slope),
                             m_expected=float(m_expected), r_squared=float(r2))
