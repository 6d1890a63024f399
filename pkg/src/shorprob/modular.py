"""Integer number theory behind order finding.

Everything here is exact integer arithmetic: multiplicative orders, the
2-adic split of the order, register sizing, prime-power detection and
continued-fraction divisor extraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ModulusTooLargeError, NotCoprimeError

MAX_MODULUS = 1 << 25


@dataclass(frozen=True)
class OrderInstance:
    """Full problem context for one run of order finding.

    ``n`` is Shor's register size for ``N``; the machine actually measured has
    ``n + q_pad`` input qubits (see :attr:`n_total`).  ``m`` is the number of
    nonzero entries of the periodic state left after the output register is
    measured with offset ``x0``.
    """

    N: int
    b: int
    r: int
    kappa: int
    r_prime: int
    n: int
    n0: int
    q_pad: int
    x0: int
    m: int

    @classmethod
    def from_base(cls, N: int, b: int, x0: int = 0, q_pad: int = 0) -> "OrderInstance":
        r = multiplicative_order(b, N)
        kappa, r_prime = decompose_order(r)
        n, n0 = register_sizes(N)
        if q_pad < 0:
            raise ValueError(f"q_pad must be nonnegative, got {q_pad}")
        if not 0 <= x0 < r:
            raise ValueError(f"x0 must lie in [0, {r}), got {x0}")
        m = count_periodic_terms(n + q_pad, r, x0)
        return cls(N=N, b=b, r=r, kappa=kappa, r_prime=r_prime, n=n, n0=n0,
                   q_pad=q_pad, x0=x0, m=m)

    @property
    def n_total(self) -> int:
        return self.n + self.q_pad

    def with_x0(self, x0: int) -> "OrderInstance":
        return OrderInstance.from_base(self.N, self.b, x0=x0, q_pad=self.q_pad)

    def with_q_pad(self, q_pad: int) -> "OrderInstance":
        return OrderInstance.from_base(self.N, self.b, x0=self.x0, q_pad=q_pad)


@dataclass(frozen=True)
class KLDecomposition:
    """``2**(n - kappa) == q_int * r_prime + t``, i.e. 2^n / r = q_int + t / r_prime."""

    q_int: int
    t: int


@dataclass(frozen=True)
class ConvergentList:
    entries: tuple[tuple[int, int], ...]
    target: Fraction

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.entries

    @property
    def denominators(self) -> list[int]:
        return [den for _, den in self.entries]


def multiplicative_order(b: int, N: int) -> int:
    """Least r >= 1 with b**r == 1 (mod N), by repeated multiplication."""
    if N >= MAX_MODULUS:
        raise ModulusTooLargeError(f"N = {N} exceeds the desk-scale limit 2^25")
    if not 1 < b < N:
        raise ValueError(f"base must satisfy 1 < b < N, got b={b}, N={N}")
    if math.gcd(b, N) != 1:
        raise NotCoprimeError(f"gcd({b}, {N}) = {math.gcd(b, N)} != 1")
    # N < 2^25 keeps every product below 2^50
    value, r = b, 1
    while value != 1:
        value = (value * b) % N
        r += 1
    return r


def decompose_order(r: int) -> tuple[int, int]:
    """Split r = 2**kappa * r_prime with r_prime odd."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    kappa = (r & -r).bit_length() - 1
    return kappa, r >> kappa


def register_sizes(N: int) -> tuple[int, int]:
    """Return (n, n0): N^2 <= 2^n < 2 N^2 and n0 minimal with N <= 2^n0."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    n = (N * N - 1).bit_length()
    n0 = (N - 1).bit_length()
    return n, n0


def count_periodic_terms(n_total: int, r: int, x0: int) -> int:
    """ceil((2^n_total - x0) / r): how many x = x0 + k r fit in the register."""
    return -((x0 - (1 << n_total)) // r)


def kl_decompose(n_total: int, kappa: int, r_prime: int) -> KLDecomposition:
    if r_prime < 1 or r_prime % 2 == 0:
        raise ValueError(f"r_prime must be a positive odd integer, got {r_prime}")
    if (1 << n_total) <= (r_prime << kappa):
        raise ValueError("2^n_total must exceed r = 2^kappa * r_prime")
    q_int, t = divmod(1 << (n_total - kappa), r_prime)
    return KLDecomposition(q_int=q_int, t=t)


def integer_root(value: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer, by binary search."""
    if value < 0 or k < 1:
        raise ValueError("integer_root needs value >= 0 and k >= 1")
    if value < 2 or k == 1:
        return value
    lo, hi = 1, 1 << (value.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= value:
            lo = mid
        else:
            hi = mid - 1
    return lo


def is_prime(n: int) -> bool:
    """Deterministic trial division; intended for n < 2^25."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def is_prime_power(N: int) -> bool:
    """True iff N = p**j for a prime p and j >= 1."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    for j in range(N.bit_length() - 1, 0, -1):
        root = integer_root(N, j)
        if root ** j == N and is_prime(root):
            return True
    return False


def continued_fraction_convergents(y: int, denominator: int) -> ConvergentList:
    """All convergents of y / denominator, in lowest terms, ending at the fraction itself.

    When the first partial quotient after the integer part is 1, the leading
    0/1 convergent shares its denominator with the next one (1/1) and is
    dropped, so denominators strictly increase.
    """
    if denominator < 1 or not 0 <= y < denominator:
        raise ValueError(f"need 0 <= y < denominator, got y={y}, denominator={denominator}")
    entries: list[tuple[int, int]] = []
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    num, den = y, denominator
    while den:
        a, rem = divmod(num, den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if entries and entries[-1][1] == k:
            entries.pop()
        entries.append((h, k))
        num, den = den, rem
    return ConvergentList(entries=tuple(entries), target=Fraction(y, denominator))


def extract_divisor(y: int, n_total: int, N: int, max_denominator: int | None = None) -> int | None:
    """Largest convergent denominator of y / 2^n_total usable as a divisor of the order.

    A convergent s/d qualifies when 1 < d < ``max_denominator`` (default N)
    and |y/2^n - s/d| <= 1/(2 d^2).  Returns None when nothing qualifies.
    """
    if not 0 <= y < (1 << n_total):
        raise ValueError(f"y must lie in [0, 2^{n_total}), got {y}")
    limit = N if max_denominator is None else max_denominator
    convergents = continued_fraction_convergents(y, 1 << n_total)
    x = convergents.target
    best = None
    for num, den in convergents:
        if 1 < den < limit and abs(x - Fraction(num, den)) <= Fraction(1, 2 * den * den):
            best = den
    return best
