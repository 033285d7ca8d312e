"""Closed-form partition-function bounds and the toy torus identity.

The upper bound counts configurations compatible with a reflected defect
pattern (3 choices per ordered-graph site given a root value, q choices per
chaotic site and per component root) against the energy it fixes; the lower
bounds sum either fully disordered or fully ordered configurations of the
same slab.  Everything is evaluated in the log domain.
"""

import math
from dataclasses import dataclass
from fractions import Fraction


class BoundError(ValueError):
    pass


CASES = ("od", "oo", "dd", "ddb", "glued")


@dataclass(frozen=True)
class BoundParams:
    q: int
    beta: float
    alpha_prime: float = 0.05

    def __post_init__(self):
        if self.q < 2 or self.beta < 0 or self.alpha_prime <= 0:
            raise BoundError("q >= 2, beta >= 0 and alpha' > 0 required")


def a_of_q(q: int, alpha_prime: float) -> float:
    """Peierls base for non-problematic defects: 9 q^(-alpha')."""
    return 9.0 * q ** (-alpha_prime)


def glued_a_of_q(q: int) -> float:
    """Peierls base for a glued problematic pair."""
    if q <= 18:
        raise BoundError(f"glued formula needs q > 18, got {q}")
    return math.sqrt(2.0 * (3.0 * q / (q - 18)) ** 4 * q ** (-3.0 / 50.0))


def glued_a_below_one(q: int) -> bool:
    """Exact integer test of glued a(q) < 1.

    a(q)^2 < 1 iff 2 (3q)^4 q^(-3/50) < (q-18)^4, i.e. raised to the 50th
    power, 2^50 3^200 q^197 < (q-18)^200.
    """
    if q <= 18:
        raise BoundError(f"glued formula needs q > 18, got {q}")
    return 2 ** 50 * 3 ** 200 * q ** 197 < (q - 18) ** 200


def glued_threshold_q() -> int:
    """Smallest integer q with glued a(q) < 1, by exact bisection."""
    lo, hi = 19, 10 ** 40
    assert not glued_a_below_one(lo) and glued_a_below_one(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if glued_a_below_one(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _lse(a: float, b: float) -> float:
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def evaluate_bounds(params: BoundParams, case: str, n: int, l: int,
                    m: int = 1, D: int = 0, K: int = 0, Q: int = 0) -> dict:
    """Named bound values for one defect slab, log domain.

    case: od / oo (order-disorder, order-order), dd (bulk disorder-disorder),
    ddb (boundary disorder-disorder), glued (glued problematic pair, l is
    then the glued slab height, at most 4).
    """
    if case not in CASES:
        raise BoundError(f"case must be one of {CASES}")
    q, beta = params.q, params.beta
    nn = n * n
    if case == "glued" and l > 4:
        raise BoundError("glued slab height exceeds 4")

    log_upper = (2 * m * nn * math.log(3)
                 + (K + Q + 2 * l * n) * math.log(q)
                 + beta * ((3 * l + 1) * nn - D))
    log_dis = l * nn * math.log(q - 18) if q > 18 else float("-inf")
    if case in ("od", "oo"):
        log_ord = 3 * beta * l * nn
        regime = "q^(1/3)"
        crossover = q ** (1.0 / 3.0)
    elif case == "dd":
        log_ord = beta * (3 * l - 1) * nn
        regime = f"q^(L/(3L-1))"
        crossover = q ** (l / (3 * l - 1.0))
    elif case == "ddb":
        # at least a quarter of the boundary bonds stay ordered
        log_ord = beta * (3 * l - 0.75) * nn
        regime = f"q^(L/(3L-3/4))"
        crossover = q ** (l / (3 * l - 0.75))
    else:
        log_ord = beta * (3 * l + 1) * nn
        regime = f"q^(L/(3L+1))"
        crossover = q ** (l / (3 * l + 1.0))
    log_lower = _lse(log_dis, log_ord)
    out = {
        "case": case,
        "log_upper": log_upper,
        "log_lower_disordered": log_dis,
        "log_lower_ordered": log_ord,
        "log_lower": log_lower,
        "log_ratio_bound": log_upper - log_lower,
        "regime": regime,
        "e_beta": math.exp(beta),
        "regime_crossover": crossover,
        "a_q": a_of_q(q, params.alpha_prime),
    }
    if q > 18:
        out["a_q_glued"] = glued_a_of_q(q)
    return out


def chessboard_aggregate(column_probs, n: int) -> float:
    """mu(event) <= prod_c mu(reflected event in column c)^(1/N^2)."""
    if any(p < 0 or p > 1 for p in column_probs):
        raise BoundError("probabilities must lie in [0, 1]")
    if any(p == 0 for p in column_probs):
        return 0.0
    return math.exp(sum(math.log(p) for p in column_probs) / (n * n))


def peierls_bound(a: float, w: int) -> float:
    """Probability bound a^w for observing a plaquette collection of weight w."""
    if not (0 < a) or w < 0:
        raise BoundError("need a > 0 and w >= 0")
    return a ** w


# ---------------------------------------------------------------------------
# toy torus identity: for a translation-invariant 0/1 field on T_R,
# mu(xi_0 = 1, sum xi = k) = (k / R^2) mu(sum xi = k), exactly.

class InvarianceError(ValueError):
    def __init__(self, shift, subset):
        self.shift = shift
        self.subset = subset
        super().__init__(f"measure not invariant under shift {shift} of {sorted(subset)}")


def _shift(subset, t, r):
    dx, dy = t
    return frozenset(((x + dx) % r, (y + dy) % r) for x, y in subset)


def orbit_mixture(r: int, subsets) -> dict:
    """Uniform mixture over the translation orbits of the given subsets."""
    weights = {}
    share = Fraction(1, len(subsets))
    for subset in subsets:
        subset = frozenset((x % r, y % r) for x, y in subset)
        orbit = {_shift(subset, (dx, dy), r) for dx in range(r) for dy in range(r)}
        per = share / len(orbit)
        for member in orbit:
            weights[member] = weights.get(member, Fraction(0)) + per
    return weights


def toy_identity_check(r: int, subsets=None, weights: dict | None = None) -> dict:
    """Exact check of the point-marginal identity for every occupation count.

    Either pass subsets (an orbit mixture is built, translation-invariant by
    construction) or an explicit weights map {frozenset: Fraction}, which is
    first checked for translation invariance (witness shift reported if not).
    """
    if weights is None:
        if not subsets:
            raise ValueError("need subsets or an explicit weights map")
        weights = orbit_mixture(r, subsets)
    else:
        for subset, w in weights.items():
            for dx in range(r):
                for dy in range(r):
                    moved = _shift(subset, (dx, dy), r)
                    if weights.get(moved, Fraction(0)) != w:
                        raise InvarianceError((dx, dy), subset)
    total = sum(weights.values())
    if total != 1:
        raise ValueError(f"weights must sum to 1, got {total}")

    by_k = {}
    for subset, w in weights.items():
        k = len(subset)
        at_origin = (0, 0) in subset
        lhs, rhs = by_k.get(k, (Fraction(0), Fraction(0)))
        by_k[k] = (lhs + (w if at_origin else 0), rhs + w)
    results = {}
    exact = True
    for k, (lhs, rhs) in sorted(by_k.items()):
        want = Fraction(k, r * r) * rhs
        ok = lhs == want
        exact = exact and ok
        results[k] = {"lhs": lhs, "rhs": want, "ok": ok}
    return {"exact": exact, "by_count": results}
