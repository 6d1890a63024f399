import functools
import math
import random

import pytest

from shorprob.modular import OrderInstance, is_prime_power, register_sizes

SWEEP_SEED = 20241016
SWEEP_SIZE = 200
SWEEP_Q_PADS = (0, 1, 3)
SWEEP_MAX_BITS = 20


@pytest.fixture(scope="session")
def inst247():
    return OrderInstance.from_base(247, 4)


@functools.lru_cache(maxsize=None)
def sweep_instances(seed=SWEEP_SEED, size=SWEEP_SIZE, max_bits=SWEEP_MAX_BITS, x0_random=False):
    """Random non-prime-power instances with n + q_pad <= max_bits.

    N is drawn log-uniformly so that register sizes spread over the whole
    range instead of piling up at the largest allowed n.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        q = rng.choice(SWEEP_Q_PADS)
        n_cap = max_bits - q
        # largest N with register_sizes(N)[0] <= n_cap
        n_max = math.isqrt(1 << n_cap)
        N = int(round(math.exp(rng.uniform(math.log(6), math.log(min(n_max, 4096))))))
        if N < 6 or is_prime_power(N) or register_sizes(N)[0] + q > max_bits:
            continue
        b = rng.choice([c for c in range(2, N) if math.gcd(c, N) == 1])
        inst = OrderInstance.from_base(N, b, q_pad=q)
        if x0_random:
            inst = inst.with_x0(rng.randrange(inst.r))
        out.append(inst)
    return tuple(out)


ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    """Log one acceptance verdict (printed in the terminal summary) and return ok."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
