"""Dense exact linear algebra over a prime field.

This is the engine of the randomized interpolation oracle.  The field
modulus defaults to a prime just below ``2**31`` so that a product of
two reduced entries fits in int64, which lets the row elimination run
as exact vectorised numpy arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 2_147_483_647  # 2**31 - 1, prime

_MASK64 = (1 << 64) - 1
# Witness set proving primality for every input below 3.3 * 10**24,
# far beyond the 64-bit moduli accepted here.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit integers."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """Prime field of order ``p``; primality is checked at construction."""

    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError("field modulus must be an integer")
        if self.p >= 1 << 63:
            raise ValueError("field modulus must fit in a signed 64-bit word")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


class SeededRng:
    """Deterministic pseudorandom stream.

    Identical seeds reproduce identical streams across runs and
    platforms (Mersenne twister via :mod:`random`).
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = random.Random(self.seed)

    def randrange(self, n: int) -> int:
        return self._gen.randrange(n)


def derive_seed(base_seed: int, index: int) -> int:
    """Stable per-worker seed, a splitmix64 step of the base seed."""
    x = (int(base_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def sample_distinct(rng: SeededRng, count: int, field: PrimeField) -> list[int]:
    """``count`` pairwise-distinct field elements, deterministic in the seed."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count >= field.p:
        raise ValueError(f"cannot draw {count} distinct elements from a field of {field.p}")
    seen: set[int] = set()
    out: list[int] = []
    while len(out) < count:
        x = rng.randrange(field.p)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


class PrimeFieldMatrix:
    """Dense row-major matrix with entries reduced modulo the field prime."""

    def __init__(self, field: PrimeField, data: np.ndarray):
        if data.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        self.field = field
        self.data = np.asarray(data, dtype=np.int64)

    @classmethod
    def from_entries(cls, field: PrimeField, rows: int, cols: int, entries) -> "PrimeFieldMatrix":
        flat = [int(x) % field.p for x in entries]
        if len(flat) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        data = np.array(flat, dtype=np.int64).reshape(rows, cols)
        return cls(field, data)

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "PrimeFieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    def transpose(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.data.T.copy())

    def __repr__(self) -> str:  # pragma: no cover
        return f"PrimeFieldMatrix({self.rows}x{self.cols} mod {self.field.p})"


def rank(matrix: PrimeFieldMatrix) -> int:
    """Rank over the prime field by exact modular row elimination.

    Pivots are inverted with Fermat's little theorem; a product of two
    reduced entries stays below 2**62, so the vectorised updates never
    overflow int64.
    """
    p = matrix.field.p
    a = matrix.data % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        below = a[r + 1 :, c]
        mask = below != 0
        if mask.any():
            factors = (below[mask] * inv) % p
            a[r + 1 :][mask] = (a[r + 1 :][mask] - factors[:, None] * a[r]) % p
        r += 1
    return r
