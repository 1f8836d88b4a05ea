"""Independent counting oracles, computed without any Lie-algebra machinery."""
from __future__ import annotations

from math import comb


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    out, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            out = -out
        k += 1
    return -out if m > 1 else out


def witt_dimension(generators: int, weight: int) -> int:
    """Number of primitive necklaces: (1/n) sum_{d | n} mu(d) k^{n/d}."""
    total = sum(mobius(d) * generators ** (weight // d) for d in range(1, weight + 1) if weight % d == 0)
    return total // weight


def multigraded_witt(counts: tuple[int, ...]) -> int:
    """Lie words with counts[i] copies of letter i (all letters of degree 0).

    (1/n) sum_{d | gcd} mu(d) (n/d)! / prod (c_i/d)!
    """
    n = sum(counts)
    if n == 0:
        return 0
    from math import gcd

    g = 0
    for c in counts:
        g = gcd(g, c)
    total = 0
    for d in range(1, g + 1):
        if g % d:
            continue
        ways, left = 1, n // d
        for c in counts:
            ways *= comb(left, c // d)
            left -= c // d
        total += mobius(d) * ways
    return total // n
