"""Register-level reciprocal: one-hot exponent plus one Newton step.

For an integer eigenvalue estimate k read off the phase register, the
reciprocal 1/k is seeded as x0 = 2**-p with p chosen so that k * x0 lands
in [0.75, 1.5), then sharpened by a single Newton iteration for f(x) =
1/x - k, giving x1 = 2 * x0 - k * x0**2. One step is enough for the
controlled rotation: k * x1 stays within [0.75, 1.0].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


def x0_exponent(k: int, n: Optional[int] = None) -> Optional[int]:
    """One-hot exponent p with k * 2**-p in [0.75, 1.5), or None for k < 2.

    ``n`` optionally bounds the register: k must lie in [0, 2**n). The seed
    rounds k to its top bit, or to the next power of two when the second
    bit is also set (a leading "11" is nearer the power above).
    """
    k = int(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    if n is not None and k >= (1 << n):
        raise ValueError(f"k={k} does not fit in {n} bits")
    if k < 2:
        return None
    q = k.bit_length() - 1
    second_bit = (k >> (q - 1)) & 1  # set means k is nearer the power above
    return q + 1 if second_bit else q


def newton_x1(k: int, p: int) -> float:
    """One Newton step for 1/k from the seed 2**-p."""
    return 2.0 ** (-p + 1) - k * 2.0 ** (-2 * p)


@dataclass(frozen=True)
class InvSpec:
    """Reciprocal-exponent table for an n-bit register.

    ``exponents[k]`` is p(k) for k in [0, 2**n); entries 0 and 1 are None
    (no rotation branch). Construction checks the seed invariant
    k * 2**-p(k) in [0.75, 1.5) for every k.
    """

    n: int
    exponents: tuple

    @classmethod
    def build(cls, n: int) -> "InvSpec":
        if n < 1:
            raise ValueError("register needs at least one bit")
        exps = tuple(x0_exponent(k, n) for k in range(1 << n))
        return cls(n, exps)

    def __post_init__(self):
        if len(self.exponents) != (1 << self.n):
            raise ValueError("exponent table has wrong length")
        for k, p in enumerate(self.exponents):
            if k < 2:
                if p is not None:
                    raise ValueError(f"k={k} must have no exponent")
                continue
            ratio = k * 2.0 ** (-p)
            if not 0.75 <= ratio < 1.5:
                raise ValueError(f"seed invariant violated at k={k}: {ratio}")
