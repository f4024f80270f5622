"""Exponent arithmetic: the working integrability index r0, side conditions of the
four train-existence statements, and admissible space-time pairs.

All decay estimates downstream are driven by a handful of inequalities between
the nonlinearity exponents (alpha1, alpha2), the dimension d, the index r0 used
to measure the train profile, and r2 = 2 + alpha2.  This module owns those
inequalities so every experiment report can embed the exact configuration it
ran under.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConditionViolated, InvalidPair

INF = math.inf


def alpha_max(d):
    """Energy-subcritical ceiling for the nonlinearity power."""
    if d <= 2:
        return INF
    return 4.0 / (d - 2.0)


def holder_conjugate(r):
    if r == 1.0:
        return INF
    if r == INF:
        return 1.0
    return r / (r - 1.0)


@dataclass
class ConditionCheck:
    name: str
    satisfied: bool
    detail: str


@dataclass
class ExponentConfig:
    """Resolved exponent bundle for one run.

    theta = d(1/2 - 1/r2) is the dispersive-decay exponent; s is the auxiliary
    integrability index used to interpolate the source term between L^inf and
    L^{r2'}.  alpha_tilde is the Hoelder exponent of f' at the kink plateau
    (0 when no kink is involved).
    """

    d: int
    alpha1: float
    alpha2: float
    r0: float
    alpha_tilde: float = 0.0
    epsilon: float = 0.0
    r2: float = field(init=False)
    theta: float = field(init=False)
    s: float = field(init=False)

    def __post_init__(self):
        self.r2 = 2.0 + self.alpha2
        self.theta = self.d * (0.5 - 1.0 / self.r2)
        self.s = interpolation_index(self.alpha1, self.r0, self.r2)

    def to_dict(self):
        return {
            "d": self.d, "alpha1": self.alpha1, "alpha2": self.alpha2,
            "r0": self.r0, "r2": self.r2, "alpha_tilde": self.alpha_tilde,
            "epsilon": self.epsilon, "theta": self.theta, "s": self.s,
        }


def interpolation_index(alpha1, r0, r2):
    """Index s with (1+alpha1)/r0 > 1/s > 1/r2' and s > 1.

    Midpoint of the admissible interval for 1/s.  The upper endpoint is capped
    at 1 so that s > 1 always holds; the interval is nonempty exactly when
    1 < (1+alpha1)/r0 + 1/r2.
    """
    r2p = holder_conjugate(r2)
    lo = 1.0 / r2p
    hi = min((1.0 + alpha1) / r0, 1.0)
    if not hi > lo:
        raise ConditionViolated(
            f"no interpolation index: need (1+a1)/r0 > 1/r2', got {hi:.6g} <= {lo:.6g}")
    return 2.0 / (lo + hi)


def _range_ok(d, alpha1, r0):
    # Profile-measurability range: r0 >= 1 and d*alpha1/2 < r0 < 2 + alpha1.
    # (The summability exponent 1/alpha1 - d/(2 r0) is then positive.)
    return r0 >= 1.0 and d * alpha1 / 2.0 < r0 < 2.0 + alpha1


def choose_r0(d, alpha1, alpha2, max_ldexp=40):
    """Select r0 = max(1, d*alpha1/2) + eps with a deterministic dyadic margin.

    eps is the largest value 2^-k <= 1/16 for which all three side conditions
    hold, plus r0 <= 2 whenever alpha1 < 4/d.  Raises ConditionViolated when
    alpha2/(2+alpha2) > alpha1 (the construction needs the gradient-free
    pathway in that regime) or the exponents are out of the subcritical range.
    """
    amax = alpha_max(d)
    if not 0 < alpha1 <= alpha2 or not alpha2 < amax:
        raise ConditionViolated(
            f"need 0 < alpha1 <= alpha2 < alpha_max({d}) = {amax:g}")
    if alpha2 / (2.0 + alpha2) > alpha1:
        raise ConditionViolated(
            f"alpha2/(2+alpha2) = {alpha2/(2+alpha2):.6g} exceeds alpha1 = {alpha1:g}")
    base = max(1.0, d * alpha1 / 2.0)
    r2 = 2.0 + alpha2
    for k in range(4, max_ldexp + 1):
        eps = math.ldexp(1.0, -k)
        r0 = base + eps
        if r0 >= 2.0 + alpha1:
            continue
        if alpha1 / r0 + 1.0 / r2 < 0.5:
            continue
        if (alpha1 + 1.0) / r0 + 1.0 / r2 <= 1.0:
            continue
        if alpha1 < 4.0 / d and r0 > 2.0:
            continue
        return r0
    raise ConditionViolated("no dyadic margin <= 1/16 satisfies the side conditions")


def build_config(d, alpha1, alpha2, alpha_tilde=0.0):
    """choose_r0 plus the derived quantities, bundled for report headers."""
    r0 = choose_r0(d, alpha1, alpha2)
    eps = r0 - max(1.0, d * alpha1 / 2.0)
    return ExponentConfig(d=d, alpha1=alpha1, alpha2=alpha2, r0=r0,
                          alpha_tilde=alpha_tilde, epsilon=eps)


@dataclass
class TheoremReport:
    theorem: str
    passed: bool
    conditions: list

    def failing(self):
        return [c for c in self.conditions if not c.satisfied]


def check_theorem_conditions(cfg, theorem):
    """Evaluate the hypotheses of one existence statement; reports, never throws.

    ``theorem`` is one of 'T1_1', 'T1_2', 'T1_3', 'T1_4': plain trains via the
    dispersive route, plain trains via the gradient route, kink trains via the
    dispersive route, kink trains via the gradient route.
    """
    d, a1, a2, r0 = cfg.d, cfg.alpha1, cfg.alpha2, cfg.r0
    at = cfg.alpha_tilde
    r2 = cfg.r2
    checks = []

    def add(name, ok, detail):
        checks.append(ConditionCheck(name, bool(ok), detail))

    amax = alpha_max(d)
    add("subcritical", 0 < a1 <= a2 < amax,
        f"0 < {a1:g} <= {a2:g} < {amax:g}")

    if theorem in ("T1_1", "T1_3"):
        add("lower_exponent_floor", a2 / (2.0 + a2) <= a1,
            f"a2/(2+a2) = {a2/(2+a2):.6g} <= a1 = {a1:g}")
        add("r0_range", _range_ok(d, a1, r0),
            f"1 <= r0 and d*a1/2 = {d*a1/2:g} < r0 = {r0:g} < 2+a1 = {2+a1:g}")
        add("linear_term_bound", 0.5 <= a1 / r0 + 1.0 / r2,
            f"a1/r0 + 1/r2 = {a1/r0 + 1/r2:.6g} >= 1/2")
        add("source_integrability", 1.0 < (a1 + 1.0) / r0 + 1.0 / r2,
            f"(a1+1)/r0 + 1/r2 = {(a1+1)/r0 + 1/r2:.6g} > 1")
        add("dispersive_exponent", 0.0 < cfg.theta < 1.0,
            f"theta = {cfg.theta:.6g} in (0,1)")
    if theorem == "T1_2":
        add("r0_range", _range_ok(d, a1, r0),
            f"1 <= r0 and d*a1/2 < r0 < 2+a1")
        add("small_alpha1", 0 < a1 < 4.0 / (d + 2.0),
            f"a1 = {a1:g} < 4/(d+2) = {4/(d+2):.6g}")
    if theorem == "T1_3":
        add("dimension", d == 1, f"d = {d} == 1")
        add("plateau_linear_bound", 0.5 <= at / r0 + 1.0 / r2,
            f"at/r0 + 1/r2 = {at/r0 + 1/r2:.6g} >= 1/2")
        add("plateau_source_bound", 1.0 < (at + 1.0) / r0 + 1.0 / r2,
            f"(at+1)/r0 + 1/r2 = {(at+1)/r0 + 1/r2:.6g} > 1")
    if theorem == "T1_4":
        add("dimension", d == 1, f"d = {d} == 1")
        add("r0_range", _range_ok(d, a1, r0), "1 <= r0 and d*a1/2 < r0 < 2+a1")
        add("small_alpha1", 0 < a1 < 4.0 / 3.0, f"a1 = {a1:g} < 4/3")
        add("plateau_exponent_floor", r0 * (a1 + 1.0) < (at + 1.0) * (a1 + 2.0),
            f"r0(a1+1) = {r0*(a1+1):.6g} < (at+1)(a1+2) = {(at+1)*(a1+2):.6g}")

    return TheoremReport(theorem=theorem, passed=all(c.satisfied for c in checks),
                         conditions=checks)


# -- admissible space-time pairs ----------------------------------------------


def validate_pair(d, q, r, tol=1e-12):
    """Check 2/q + d/r = d/2 with 2 <= q, r <= inf and (d,q,r) != (2,2,inf)."""
    if not (q >= 2.0 and r >= 2.0):
        raise InvalidPair(f"(q,r) = ({q:g},{r:g}) outside [2, inf]^2")
    if d == 2 and q == 2.0 and r == INF:
        raise InvalidPair("(d,q,r) = (2,2,inf) is the forbidden endpoint")
    iq = 0.0 if q == INF else 1.0 / q
    ir = 0.0 if r == INF else 1.0 / r
    if abs(2.0 * iq + d * ir - d / 2.0) > tol:
        raise InvalidPair(
            f"2/q + d/r = {2*iq + d*ir:.15g} != d/2 = {d/2:.15g} for (q,r)=({q:g},{r:g})")


def _q_of_r(d, r):
    if r == 2.0:
        return INF
    if r == INF:
        return 4.0 / d  # only valid for d = 1 (d = 2 is the forbidden endpoint)
    return 4.0 * r / (d * (r - 2.0))


def admissible_pairs(d, r_cap=None, requested=None):
    """A fixed sampling of admissible pairs, (inf, 2) first, r_cap endpoint last.

    For d != 2 the cap defaults to the full admissible range (r = inf for d <= 2,
    r = 2d/(d-2) for d >= 3); for d = 2 a finite ``r_cap`` is mandatory because
    the r = inf endpoint is excluded.  ``requested`` pairs are validated and
    returned as-is (InvalidPair on violation).
    """
    if requested is not None:
        for q, r in requested:
            validate_pair(d, q, r)
        return [(float(q), float(r)) for q, r in requested]

    if d == 1:
        r_end = INF
    elif d == 2:
        if r_cap is None or r_cap == INF:
            raise InvalidPair("d = 2 needs a finite r_cap (endpoint excluded)")
        r_end = r_cap
    else:
        r_end = 2.0 * d / (d - 2.0)
    if r_cap is not None:
        r_end = min(r_end, r_cap)

    rs = [2.0]
    if r_end == INF:
        rs += [4.0, INF]
    else:
        mid = 2.0 + 0.5 * (r_end - 2.0)
        if mid > 2.0 and mid < r_end:
            rs.append(mid)
        rs.append(r_end)
    pairs = []
    for r in rs:
        q = _q_of_r(d, r)
        validate_pair(d, q, r)
        pairs.append((q, r))
    return pairs
