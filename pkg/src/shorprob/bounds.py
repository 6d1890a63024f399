"""Rigorous lower bounds on the success probabilities and their asymptotes.

Bounds are always evaluated and returned, even when negative (vacuous) or
when their hypotheses fail; the hypotheses are recorded on the report so the
caller decides whether the number means anything.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from scipy import integrate, special

from .errors import UnreachableError
from .modular import OrderInstance, is_prime_power, register_sizes

__all__ = [
    "AsymptoticKind",
    "BoundKind",
    "BoundReport",
    "MAX_Q_PAD",
    "SearchVar",
    "asymptotic_bound",
    "bounds_for_instance",
    "integral_lower_bound_P",
    "integral_lower_bound_window",
    "series_lower_bound",
    "sinc2_integral",
    "sine_integral",
    "threshold_search",
    "window_integral_sum",
]

MAX_Q_PAD = 8
QUAD_TOL = 1e-13


class BoundKind(enum.Enum):
    SERIES_ODD = "series-odd"
    SERIES_EVEN = "series-even"
    INTEGRAL_P = "integral-P"
    INTEGRAL_P_TILDE = "integral-P-tilde"
    INTEGRAL_P_TILDE_Q = "integral-P-tilde-q"
    ASYMPTOTIC = "asymptotic"


class AsymptoticKind(enum.Enum):
    NEAREST = "S"
    WINDOW_Q = "window-q"


@dataclass
class BoundReport:
    """A lower-bound value plus the hypotheses it was derived under.

    ``preconditions`` are what the bound's proof needs; ``claim_conditions``
    are the extra hypotheses of the quoted numerical claims (70 %, 90 %, ...).
    """

    bound_kind: BoundKind
    value: float
    preconditions: list[tuple[str, bool]] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    claim_conditions: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return all(ok for _, ok in self.preconditions)

    def as_dict(self) -> dict:
        return {
            "bound_kind": self.bound_kind.value,
            "value": self.value,
            "applicable": self.applicable,
            "preconditions": [{"name": k, "met": v} for k, v in self.preconditions],
            "claim_conditions": [{"name": k, "met": v} for k, v in self.claim_conditions],
            "parameters": dict(self.parameters),
        }


def sine_integral(x: float) -> float:
    """Si(x), the integral of sin(t)/t from 0 to x."""
    if x < 0:
        raise ValueError(f"sine_integral is defined here for x >= 0, got {x}")
    return float(special.sici(x)[0])


def _sinc2_shifted(h: int) -> Callable[[float], float]:
    if h == 0:
        def f(x: float) -> float:
            if abs(x) < 1e-8:
                return math.pi ** 2
            s = math.sin(math.pi * x)
            return (s * s) / (x * x)
    else:
        def f(x: float) -> float:
            s = math.sin(math.pi * x)
            return (s * s) / ((x + h) * (x + h))
    return f


def sinc2_integral(a: float, b: float, h: int = 0) -> float:
    """Integral of sin^2(pi x) / (x + h)^2 over [a, b] (h an integer, a >= 0, b <= 1/2 + 1/2)."""
    value, _ = integrate.quad(_sinc2_shifted(h), a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return value


def asymptotic_bound(kind: AsymptoticKind | str, q_pad: int = 0) -> float:
    """Limit of the lower bounds as N and r' grow.

    NEAREST: (2/pi^2)(pi Si(pi) - 2).  WINDOW_Q: 2 Si(2^(q+2) pi) / pi.
    """
    kind = AsymptoticKind(kind)
    if kind is AsymptoticKind.NEAREST:
        return 2.0 / math.pi ** 2 * (math.pi * sine_integral(math.pi) - 2.0)
    _check_q(q_pad)
    return 2.0 * sine_integral(math.ldexp(math.pi, q_pad + 2)) / math.pi


def _check_q(q_pad: int) -> None:
    if not 0 <= q_pad <= MAX_Q_PAD:
        raise ValueError(f"q_pad must lie in [0, {MAX_Q_PAD}], got {q_pad}")


def series_lower_bound(n: int, n0: int, kappa: int, r_prime: int) -> BoundReport:
    """Maclaurin-series lower bound on P; needs only n > n0.

    With d = n - n0, for odd r (kappa = 0)

        (1 - 2^-d - 1/r)(1 - pi^2/36 ((r+1)/r + 2^-(d-1) + 2^-2d))

    and for even r

        (1 - 2^-d - 1/r')(1 - pi^2/36 ((r'+1)/r' + 2^-(d-2) + 2^-(2d-1)))
            + 1/r' - 1/(2^kappa r') - 2^-d.
    """
    d = n - n0
    rp = r_prime
    c = math.pi ** 2 / 36.0
    if kappa == 0:
        value = (1 - 2.0 ** -d - 1 / rp) * (1 - c * ((rp + 1) / rp + 2.0 ** -(d - 1) + 2.0 ** (-2 * d)))
        kind = BoundKind.SERIES_ODD
    else:
        value = ((1 - 2.0 ** -d - 1 / rp) * (1 - c * ((rp + 1) / rp + 2.0 ** -(d - 2) + 2.0 ** -(2 * d - 1)))
                 + 1 / rp - 1 / (2.0 ** kappa * rp) - 2.0 ** -d)
        kind = BoundKind.SERIES_EVEN
    r = rp * (1 << kappa)  # rp may be real when probing the continuous shape
    return BoundReport(
        bound_kind=kind,
        value=value,
        preconditions=[
            ("n > n0", n > n0),
            ("r_prime odd", rp % 2 == 1),
            ("r_prime >= 3", rp >= 3),
            ("r < 2^n0", r < (1 << n0)),
        ],
        claim_conditions=[("n - n0 >= 11", d >= 11), ("r >= 40", r >= 40)],
        parameters={"n": n, "n0": n0, "kappa": kappa, "r_prime": rp},
    )


def integral_lower_bound_P(N: int, kappa: int, r_prime: int, n: int | None = None) -> BoundReport:
    """Integral lower bound F(N, kappa, r') on P, valid when N^2 <= 2^n.

    ``n`` defaults to Shor's register size for N, for which N^2 <= 2^n holds.
    """
    if n is None:
        n = register_sizes(N)[0]
    rp = r_prime
    prefactor = (1 - math.pi ** 2 / (4.0 * N * N)) / (1 + 1.0 / N)
    integral = sinc2_integral(1.0 / rp, 0.5 + 0.5 / rp, 0)
    value = prefactor * (2 / math.pi ** 2) * integral - 3.0 / N + 1.0 / rp - 1.0 / (2.0 ** kappa * rp)
    return BoundReport(
        bound_kind=BoundKind.INTEGRAL_P,
        value=value,
        preconditions=[
            ("r_prime odd", rp % 2 == 1),
            ("r_prime >= 3", rp >= 3),
            ("r < N", (rp << kappa) < N),
            ("N^2 <= 2^n", N * N <= (1 << n)),
        ],
        parameters={"N": N, "kappa": kappa, "r_prime": rp, "n": n, "q_pad": 0},
    )


def window_integral_sum(r_prime: int | None, q_pad: int) -> float:
    """Sum over h in [-2^(q+1), 2^(q+1)) of (2/pi^2) * integral_0^{1/2 - 1/(2r')} sin^2(pi x)/(x+h)^2 dx.

    ``r_prime=None`` integrates up to 1/2 (the r' -> infinity limit).
    """
    upper = 0.5 if r_prime is None else 0.5 - 0.5 / r_prime
    reach = 2 << q_pad
    return math.fsum(
        2 / math.pi ** 2 * sinc2_integral(0.0, upper, h) for h in range(-reach, reach)
    )


def integral_lower_bound_window(N: int, kappa: int, r_prime: int, q_pad: int = 0,
                                n: int | None = None) -> BoundReport:
    """Integral lower bound on the window probability on n + q_pad qubits (q_pad = 0: radius 2)."""
    _check_q(q_pad)
    if n is None:
        n = register_sizes(N)[0]
    rp = r_prime
    half_reach = 2.0 ** (q_pad + 1)
    prefactor = ((1 - (math.pi / N) ** 2) * (1 - (math.pi / (2.0 ** (q_pad + 2) * N)) ** 2)
                 / (1 + 1 / (half_reach * N)))
    value = (prefactor * window_integral_sum(rp, q_pad)
             - 1.0 / rp
             - 7.0 / (N * half_reach)
             - 16.0 / (math.pi * N * (1 - 1 / (N * half_reach)))
             - 1.0 / (2.0 ** kappa * rp))
    kind = BoundKind.INTEGRAL_P_TILDE if q_pad == 0 else BoundKind.INTEGRAL_P_TILDE_Q
    return BoundReport(
        bound_kind=kind,
        value=value,
        preconditions=[
            ("r_prime odd", rp % 2 == 1),
            ("r_prime >= 3", rp >= 3),
            ("N not a prime power", N >= 2 and not is_prime_power(N)),
            ("r < N/2", 2 * (rp << kappa) < N),
            ("N^2 <= 2^n", N * N <= (1 << n)),
        ],
        parameters={"N": N, "kappa": kappa, "r_prime": rp, "q_pad": q_pad, "n": n},
    )


def bounds_for_instance(inst: OrderInstance) -> list[BoundReport]:
    """Every bound for the instance's register (n + q_pad qubits), with preconditions evaluated.

    The series and P-integral bounds compare against exact P on the padded
    register; the window bound compares against the window probability for
    ``inst.q_pad``.
    """
    reports = [
        series_lower_bound(inst.n_total, inst.n0, inst.kappa, inst.r_prime),
        integral_lower_bound_P(inst.N, inst.kappa, inst.r_prime, n=inst.n_total),
    ]
    if inst.q_pad <= MAX_Q_PAD:
        reports.append(
            integral_lower_bound_window(inst.N, inst.kappa, inst.r_prime, inst.q_pad, n=inst.n)
        )
    return reports


class SearchVar(enum.Enum):
    R_PRIME = "r_prime"
    N = "N"


def _bound_function(kind: BoundKind, N: int | None, kappa: int, r_prime: int | None,
                    q_pad: int, n_minus_n0: int | None) -> Callable[[int, int], float]:
    """Return f(N, r_prime) -> bound value for the requested family."""
    if kind is BoundKind.INTEGRAL_P:
        return lambda N_, rp: integral_lower_bound_P(N_, kappa, rp).value
    if kind in (BoundKind.INTEGRAL_P_TILDE, BoundKind.INTEGRAL_P_TILDE_Q):
        q = 0 if kind is BoundKind.INTEGRAL_P_TILDE else q_pad
        return lambda N_, rp: integral_lower_bound_window(N_, kappa, rp, q).value
    if kind in (BoundKind.SERIES_ODD, BoundKind.SERIES_EVEN):
        if n_minus_n0 is None:
            raise ValueError("series bounds need n_minus_n0")
        return lambda N_, rp: series_lower_bound(n_minus_n0 + 1, 1, kappa, rp).value
    raise ValueError(f"no threshold search for {kind}")


def threshold_search(kind: BoundKind | str, target: float, search_var: SearchVar | str = "r_prime", *,
                     N: int | None = None, kappa: int = 0, r_prime: int | None = None,
                     q_pad: int = 0, n_minus_n0: int | None = None,
                     r_prime_cap: int = (1 << 25) - 1, log2_N_cap: int = 60) -> int:
    """Least odd r' (or least power-of-two N) at which the bound reaches ``target``.

    Relies on the bound being nondecreasing in the search variable; this is
    spot-checked on a sample of points before the binary search.
    """
    kind = BoundKind(kind)
    search_var = SearchVar(search_var)
    f = _bound_function(kind, N, kappa, r_prime, q_pad, n_minus_n0)

    if search_var is SearchVar.R_PRIME:
        if N is None and kind not in (BoundKind.SERIES_ODD, BoundKind.SERIES_EVEN):
            raise ValueError("searching over r_prime needs a fixed N")
        cap_index = (r_prime_cap - 3) // 2

        def value_at(i: int) -> float:
            return f(N, 3 + 2 * i)
        result_of = lambda i: 3 + 2 * i  # noqa: E731
    else:
        if r_prime is None:
            raise ValueError("searching over N needs a fixed r_prime")
        cap_index = log2_N_cap - 2

        def value_at(i: int) -> float:
            return f(1 << (i + 2), r_prime)
        result_of = lambda i: 1 << (i + 2)  # noqa: E731

    _assert_monotone(value_at, cap_index)
    if value_at(cap_index) < target:
        raise UnreachableError(
            f"{kind.value} bound stays below {target} up to {search_var.value} = {result_of(cap_index)}"
        )
    lo, hi = 0, cap_index
    while lo < hi:
        mid = (lo + hi) // 2
        if value_at(mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    return result_of(lo)


def _assert_monotone(value_at: Callable[[int], float], cap_index: int, samples: int = 24) -> None:
    points = sorted({round(cap_index * (k / samples) ** 3) for k in range(samples + 1)})
    values = [value_at(i) for i in points]
    for (i, a), (j, b) in zip(zip(points, values), zip(points[1:], values[1:])):
        if b < a - 1e-12:
            raise ValueError(f"bound is not monotone in the search variable between indices {i} and {j}")
