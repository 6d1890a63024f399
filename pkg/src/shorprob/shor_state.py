"""Closed-form measurement probabilities after the inverse QFT.

Every sine ratio that appears has the shape

    sin^2(pi * m * e / 2^bits) / sin^2(pi * e / 2^bits)

with ``e`` an integer (``r * (h + delta_s)`` is always integral), so angles are
reduced modulo 2^bits in integer arithmetic before touching floating point.
Sums go through :func:`math.fsum`, which is order independent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, GerjuoyInapplicableError, RegisterTooSmallError
from .modular import OrderInstance, count_periodic_terms, is_prime_power

__all__ = [
    "ProbabilityReport",
    "TargetKind",
    "TargetSet",
    "check_window_applicable",
    "delta",
    "exact_P",
    "exact_P_tilde",
    "exact_P_tilde_q",
    "fejer_ratio",
    "m_value",
    "offset_numerator",
    "p_outcome",
    "sum_p_outcome",
    "target_set_members",
]


class TargetKind(enum.Enum):
    NEAREST_INTEGER = "nearest"
    WINDOW_2 = "window"
    WINDOW_Q = "window-q"


@dataclass(frozen=True)
class TargetSet:
    """S (nearest integers), S~ (radius 2) or S~_q (radius 2^(q+1) on n + q qubits)."""

    kind: TargetKind
    q_pad: int = 0

    def __post_init__(self):
        if self.kind is not TargetKind.WINDOW_Q and self.q_pad != 0:
            raise ValueError(f"{self.kind.name} takes q_pad = 0")
        if self.q_pad < 0:
            raise ValueError("q_pad must be nonnegative")

    @property
    def radius(self) -> int | None:
        if self.kind is TargetKind.NEAREST_INTEGER:
            return None
        return 2 << self.q_pad


@dataclass
class ProbabilityReport:
    """Probability mass on the target sets, with the pieces it is assembled from.

    For the window sets ``P_tilde == P + P1_pair + inner + Pt + edge``:
    ``Pt`` is the one-sided outermost ring (for each s, the outcome at distance
    2^(q+1) on the side nearer s 2^n / r, and the lower one when s 2^n / r is an
    integer), ``edge`` is the upper ring for those integer cases, and ``inner``
    collects 2 <= |h| < 2^(q+1) (always 0 when q = 0).
    """

    P: float
    P1_pair: float | None = None
    Pt: float | None = None
    P_tilde: float | None = None
    edge: float | None = None
    inner: float | None = None
    q_pad: int = 0
    components: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "P": self.P,
            "P1_pair": self.P1_pair,
            "Pt": self.Pt,
            "P_tilde": self.P_tilde,
            "edge": self.edge,
            "inner": self.inner,
            "q_pad": self.q_pad,
            "components": {
                "multiples_of_r_prime": self.components.get("multiples_of_r_prime"),
                "P_direct": self.components.get("P_direct"),
                "per_h": {str(h): v for h, v in self.components.get("per_h", {}).items()},
            },
        }


def m_value(inst: OrderInstance) -> int:
    """Number of terms ceil((2^(n+q) - x0) / r) in the periodic state."""
    if not 0 <= inst.x0 < inst.r:
        raise ValueError(f"x0 must lie in [0, {inst.r})")
    return count_periodic_terms(inst.n_total, inst.r, inst.x0)


def _signed_residue(k: int, bits: int) -> int:
    modulus = 1 << bits
    k %= modulus
    return k - modulus if 2 * k > modulus else k


def fejer_ratio(e: int, m: int, bits: int) -> float:
    """sin^2(pi m e / 2^bits) / sin^2(pi e / 2^bits), with the limit m^2 at e = 0 mod 2^bits."""
    k = _signed_residue(e, bits)
    if k == 0:
        return float(m) * m
    num = math.sin(math.pi * math.ldexp(_signed_residue(m * e, bits), -bits))
    den = math.sin(math.pi * math.ldexp(k, -bits))
    return (num * num) / (den * den)


def _fejer_array(e: np.ndarray, m: int, bits: int) -> np.ndarray:
    """Vectorised :func:`fejer_ratio`; needs bits <= 31 so products fit in int64."""
    if bits > 31:
        raise ValueError("vectorised ratio needs bits <= 31")
    modulus = 1 << bits
    k = np.mod(e, modulus).astype(np.int64)
    km = np.mod(k * (m % modulus), modulus)
    k = np.where(2 * k > modulus, k - modulus, k)
    km = np.where(2 * km > modulus, km - modulus, km)
    den = np.sin(np.pi * np.ldexp(k.astype(np.float64), -bits))
    num = np.sin(np.pi * np.ldexp(km.astype(np.float64), -bits))
    zero = k == 0
    out = np.empty(k.shape, dtype=np.float64)
    out[zero] = float(m) * m
    out[~zero] = (num[~zero] ** 2) / (den[~zero] ** 2)
    return out


def offset_numerator(s: int, r: int, n_total: int) -> int:
    """The integer r * delta_s, where delta_s = nint(s 2^n / r) - s 2^n / r."""
    rho = (s * pow(2, n_total, r)) % r
    if 2 * rho == r:
        raise ConsistencyError(f"s 2^n / r is a half-integer for s={s}, r={r}, n={n_total}")
    return -rho if 2 * rho < r else r - rho


def delta(s: int, inst: OrderInstance) -> float:
    if not 1 <= s <= inst.r - 1:
        raise ValueError(f"s must lie in [1, {inst.r - 1}]")
    return offset_numerator(s, inst.r, inst.n_total) / inst.r


def p_outcome(s: int, h: int, inst: OrderInstance) -> float:
    """Probability of measuring y_s + h."""
    if not 1 <= s <= inst.r - 1:
        raise ValueError(f"s must lie in [1, {inst.r - 1}]")
    e = inst.r * h + offset_numerator(s, inst.r, inst.n_total)
    return fejer_ratio(e, inst.m, inst.n_total) / (math.ldexp(inst.m, inst.n_total))


def sum_p_outcome(inst: OrderInstance, h: int = 0) -> float:
    """P_h = sum over s of p(y_s + h), outcome by outcome (no closed-form grouping)."""
    r, bits, m = inst.r, inst.n_total, inst.m
    if bits <= 31:
        s = np.arange(1, r, dtype=np.int64)
        rho = (s * pow(2, bits, r)) % r
        e0 = np.where(2 * rho < r, -rho, r - rho)
        terms = _fejer_array(r * h + e0, m, bits)
        return math.fsum(terms.tolist()) / math.ldexp(m, bits)
    return math.fsum(
        fejer_ratio(r * h + offset_numerator(s, r, bits), m, bits) for s in range(1, r)
    ) / math.ldexp(m, bits)


def _require_register(inst: OrderInstance) -> None:
    if inst.n_total <= inst.n0:
        raise RegisterTooSmallError(
            f"input register ({inst.n_total} qubits) must exceed output register ({inst.n0})"
        )


def exact_P(inst: OrderInstance, cross_check: bool = True, tol: float = 1e-10) -> ProbabilityReport:
    """Probability of observing an element of S = {nint(s 2^n / r)}.

    Evaluated in the grouped form (a sum over j <= floor(r'/2) plus the
    contribution of multiples of r'); with ``cross_check`` the plain sum of
    p(y_s) over all s is computed as well and must agree to ``tol``.
    """
    _require_register(inst)
    kappa, r_prime, m, bits = inst.kappa, inst.r_prime, inst.m, inst.n_total
    scale = math.ldexp(m, bits)
    grouped = math.fsum(fejer_ratio(j, m, bits - kappa) for j in range(1, r_prime // 2 + 1))
    main = (1 << kappa) * 2 * grouped / scale
    multiples = ((1 << kappa) - 1) * m / math.ldexp(1.0, bits)
    P = math.fsum([main, multiples])
    components = {"multiples_of_r_prime": multiples}
    if cross_check:
        direct = sum_p_outcome(inst, 0)
        components["P_direct"] = direct
        if abs(direct - P) > tol:
            raise ConsistencyError(f"grouped P = {P!r} but direct sum = {direct!r}")
    return ProbabilityReport(P=P, q_pad=inst.q_pad, components=components)


def check_window_applicable(inst: OrderInstance, allow_prime_power: bool = False) -> None:
    """Raise unless the window sets are well defined (disjoint) for this instance.

    The windows only need r < N/2.  That is guaranteed when N is not a prime
    power; for prime powers the caller must opt in and r < N/2 is checked.
    """
    if is_prime_power(inst.N) and not allow_prime_power:
        raise GerjuoyInapplicableError(
            f"N = {inst.N} is a prime power; pass allow_prime_power=True to use r < N/2 directly"
        )
    if 2 * inst.r >= inst.N:
        raise GerjuoyInapplicableError(f"r = {inst.r} is not below N/2 = {inst.N / 2}")


def _P_h(inst: OrderInstance, h: int) -> float:
    """Grouped closed form of P_h = sum_s p(y_s + h)."""
    kappa, r_prime, r, m, bits = inst.kappa, inst.r_prime, inst.r, inst.m, inst.n_total
    step = 1 << kappa
    terms = []
    for j in range(1, r_prime // 2 + 1):
        terms.append(fejer_ratio(step * j + r * h, m, bits))
        terms.append(fejer_ratio(step * j - r * h, m, bits))
    body = step * math.fsum(terms)
    tail = (step - 1) * fejer_ratio(r * h, m, bits)
    return math.fsum([body, tail]) / math.ldexp(m, bits)


def exact_P_tilde_q(inst: OrderInstance, allow_prime_power: bool = False) -> ProbabilityReport:
    """Probability of the window set S~_q of radius 2^(q+1) on n + q qubits (q = inst.q_pad)."""
    check_window_applicable(inst, allow_prime_power)
    _require_register(inst)
    kappa, r_prime, r, m, bits = inst.kappa, inst.r_prime, inst.r, inst.m, inst.n_total
    reach = 2 << inst.q_pad
    step = 1 << kappa
    scale = math.ldexp(m, bits)

    window = math.fsum(
        fejer_ratio(step * j + r * h, m, bits)
        for h in range(-reach, reach)
        for j in range(1, r_prime // 2 + 1)
    )
    multiples = (step - 1) * m / math.ldexp(1.0, bits)
    fringe = math.fsum(fejer_ratio(r * j, m, bits) for j in range(1, reach + 1))
    P_tilde = math.fsum([step * 2 * window / scale, multiples, 2 * (step - 1) * fringe / scale])

    per_h = {h: _P_h(inst, h) for h in range(-(reach - 1), reach)}
    P = exact_P(inst, cross_check=False).P
    per_h[0] = P
    P1_pair = math.fsum([per_h[1], per_h[-1]])
    inner = math.fsum(v for h, v in per_h.items() if abs(h) >= 2)
    # nearer side of the outer ring; integer centres contribute their lower neighbour here
    one_sided = math.fsum(fejer_ratio(r * reach - step * j, m, bits) for j in range(1, r_prime // 2 + 1))
    ring_at_multiples = (step - 1) * fejer_ratio(r * reach, m, bits) / scale
    Pt = math.fsum([step * 2 * one_sided / scale, ring_at_multiples])
    edge = ring_at_multiples
    return ProbabilityReport(
        P=P, P1_pair=P1_pair, Pt=Pt, P_tilde=P_tilde, edge=edge, inner=inner,
        q_pad=inst.q_pad,
        components={"multiples_of_r_prime": multiples, "per_h": per_h},
    )


def exact_P_tilde(inst: OrderInstance, allow_prime_power: bool = False) -> ProbabilityReport:
    """Probability of S~ = {y : |y - s 2^n / r| <= 2} on Shor's n-qubit register."""
    if inst.q_pad != 0:
        raise ValueError("exact_P_tilde is defined on the unpadded register; use exact_P_tilde_q")
    return exact_P_tilde_q(inst, allow_prime_power)


def target_set_members(inst: OrderInstance, target: TargetSet, allow_prime_power: bool = False) -> list[int]:
    """Sorted members of the target set within [0, 2^(n+q))."""
    r, bits = inst.r, inst.n_total
    if target.kind is TargetKind.NEAREST_INTEGER:
        members = []
        for s in range(1, r):
            e0 = offset_numerator(s, r, bits)
            members.append(((s << bits) + e0) // r)
        return sorted(set(members))
    if target.kind is TargetKind.WINDOW_2:
        radius = 2
    else:
        if target.q_pad != inst.q_pad:
            raise ValueError(f"target q_pad {target.q_pad} does not match instance q_pad {inst.q_pad}")
        radius = target.radius
    check_window_applicable(inst, allow_prime_power)
    members = []
    last = -1
    for s in range(1, r):
        centre = s << bits
        lo = -((radius * r - centre) // r)  # ceil((centre - radius r) / r)
        hi = (centre + radius * r) // r
        if lo <= last:
            raise ConsistencyError(f"windows for s={s - 1} and s={s} overlap")
        members.extend(range(lo, hi + 1))
        last = hi
    if members and (members[0] < 0 or members[-1] >= (1 << bits)):
        raise ConsistencyError("window members fall outside the register")
    return members
