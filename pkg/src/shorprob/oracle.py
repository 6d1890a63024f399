"""Brute-force check of the closed forms.

Builds the periodic state left in the input register after the output
register is measured (1/sqrt(m) at positions x0 + k r), applies the unitary
inverse DFT, and reads off |amplitude|^2.  Two transforms are available: an
iterative radix-2 FFT and, for small registers, the O(4^n) matrix-free DFT.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import RegisterTooLargeError
from .modular import OrderInstance
from .shor_state import TargetKind, TargetSet, _fejer_array, fejer_ratio, target_set_members

__all__ = [
    "AmplitudeTable",
    "Backend",
    "FULL_TRANSFORM_MAX_BITS",
    "NAIVE_DFT_MAX_BITS",
    "amplitude_sq",
    "closed_form_table",
    "fft_radix2",
    "figure1_dump",
    "full_transform",
    "mass_on_set",
    "naive_dft",
    "periodic_state",
    "write_figure1_csv",
]

FULL_TRANSFORM_MAX_BITS = 22
NAIVE_DFT_MAX_BITS = 12


class Backend(enum.Enum):
    FULL_TRANSFORM = "full-transform"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class AmplitudeTable:
    n_total: int
    probabilities: np.ndarray
    backend: Backend

    def __post_init__(self):
        self.probabilities.setflags(write=False)

    def __getitem__(self, y):
        return self.probabilities[y]

    def __len__(self) -> int:
        return len(self.probabilities)

    def total(self) -> float:
        return math.fsum(self.probabilities.tolist())


def _bit_reverse_indices(bits: int) -> np.ndarray:
    idx = np.arange(1 << bits, dtype=np.int64)
    rev = np.zeros_like(idx)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft_radix2(x: np.ndarray, inverse: bool = False, norm: str = "ortho") -> np.ndarray:
    """Iterative decimation-in-time radix-2 FFT.

    ``inverse=True`` uses the e^{+2 pi i xy / M} kernel.  ``norm="ortho"``
    scales by 1/sqrt(M) (unitary); ``norm="backward"`` matches numpy's default
    (no scaling forward, 1/M on the inverse).
    """
    a = np.asarray(x, dtype=np.complex128)
    size = a.shape[0]
    bits = size.bit_length() - 1
    if size == 0 or size != 1 << bits:
        raise ValueError(f"length must be a power of two, got {size}")
    a = a[_bit_reverse_indices(bits)]
    sign = 1.0 if inverse else -1.0
    span = 2
    while span <= size:
        half = span // 2
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / span)
        blocks = a.reshape(-1, span)
        even = blocks[:, :half]
        odd = blocks[:, half:] * twiddle
        a = np.concatenate([even + odd, even - odd], axis=1).reshape(-1)
        span *= 2
    if norm == "ortho":
        a /= math.sqrt(size)
    elif norm == "backward":
        if inverse:
            a /= size
    else:
        raise ValueError(f"unknown norm {norm!r}")
    return a


def naive_dft(x: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Unitary DFT by direct summation, one output at a time (small sizes only)."""
    a = np.asarray(x, dtype=np.complex128)
    size = a.shape[0]
    if size > 1 << NAIVE_DFT_MAX_BITS:
        raise RegisterTooLargeError(f"naive DFT is limited to 2^{NAIVE_DFT_MAX_BITS} points")
    sign = 1.0 if inverse else -1.0
    positions = np.arange(size)
    out = np.empty(size, dtype=np.complex128)
    for k in range(size):
        phase = (k * positions) % size
        out[k] = np.sum(a * np.exp(sign * 2j * np.pi * phase / size))
    return out / math.sqrt(size)


def periodic_state(inst: OrderInstance) -> np.ndarray:
    """Input-register vector after the output measurement: 1/sqrt(m) at x0 + k r."""
    size = 1 << inst.n_total
    v = np.zeros(size, dtype=np.complex128)
    v[inst.x0::inst.r][: inst.m] = 1.0 / math.sqrt(inst.m)
    return v


def full_transform(inst: OrderInstance, method: str = "fft") -> AmplitudeTable:
    """|amplitude|^2 of the inverse QFT of the periodic state, for every y.

    ``method`` is ``"fft"`` (radix-2) or ``"naive"`` (direct DFT, n + q <= 12).
    """
    if inst.n_total > FULL_TRANSFORM_MAX_BITS:
        raise RegisterTooLargeError(
            f"full transform needs n + q <= {FULL_TRANSFORM_MAX_BITS}, got {inst.n_total}"
        )
    v = periodic_state(inst)
    if method == "fft":
        z = fft_radix2(v, inverse=True)
    elif method == "naive":
        z = naive_dft(v, inverse=True)
    else:
        raise ValueError(f"unknown method {method!r}")
    return AmplitudeTable(inst.n_total, np.abs(z) ** 2, Backend.FULL_TRANSFORM)


def amplitude_sq(y: int, inst: OrderInstance) -> float:
    """|amplitude of y|^2 via the geometric-series closed form.

    The global phase e^{2 pi i x0 y / 2^n} drops out, so x0 enters only through m.
    """
    if not 0 <= y < 1 << inst.n_total:
        raise ValueError(f"y must lie in [0, 2^{inst.n_total})")
    return fejer_ratio(inst.r * y, inst.m, inst.n_total) / math.ldexp(inst.m, inst.n_total)


def closed_form_table(inst: OrderInstance) -> AmplitudeTable:
    if inst.n_total > 31:
        raise RegisterTooLargeError("a full closed-form table needs n + q <= 31")
    y = np.arange(1 << inst.n_total, dtype=np.int64)
    e = np.mod(inst.r * y, 1 << inst.n_total)
    probs = _fejer_array(e, inst.m, inst.n_total) / math.ldexp(inst.m, inst.n_total)
    return AmplitudeTable(inst.n_total, probs, Backend.CLOSED_FORM)


def mass_on_set(source: AmplitudeTable | OrderInstance, members: Iterable[int]) -> float:
    """Total probability of the listed outcomes, from a table or the closed form."""
    members = list(members)
    if any(b <= a for a, b in zip(members, members[1:])):
        raise ValueError("members must be sorted and free of duplicates")
    if isinstance(source, AmplitudeTable):
        if members and not (0 <= members[0] and members[-1] < len(source)):
            raise ValueError("members fall outside the table")
        return math.fsum(source.probabilities[members].tolist()) if members else 0.0
    return math.fsum(amplitude_sq(y, source) for y in members)


def figure1_dump(inst: OrderInstance, source: AmplitudeTable | None = None) -> list[tuple[int, float, float, int]]:
    """Rows (y, y / 2^(n+q), probability, flag) with flag = 1 on the nearest-integer targets y_s."""
    if source is None:
        source = (full_transform(inst) if inst.n_total <= FULL_TRANSFORM_MAX_BITS
                  else closed_form_table(inst))
    flagged = set(target_set_members(inst, TargetSet(TargetKind.NEAREST_INTEGER)))
    scale = 1 << inst.n_total
    probs = source.probabilities
    return [(y, y / scale, float(probs[y]), int(y in flagged)) for y in range(scale)]


def write_figure1_csv(rows, out: TextIO | None = None) -> str | None:
    """Write rows as CSV with header ``y,frac,prob,flag``; returns the text when ``out`` is None."""
    buffer = io.StringIO() if out is None else out
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["y", "frac", "prob", "flag"])
    for y, frac, prob, flag in rows:
        writer.writerow([y, f"{frac:.17g}", f"{prob:.17g}", flag])
    return buffer.getvalue() if out is None else None
