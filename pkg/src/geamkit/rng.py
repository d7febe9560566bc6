"""Portable deterministic random numbers.

Random fixtures must be reproducible bit-for-bit from a seed alone, also by
re-implementations in other languages, so this module avoids numpy's
``Generator`` and pins the whole scheme explicitly:

* stream: splitmix64 -- state advances by the golden-ratio increment
  ``0x9E3779B97F4A7C15`` mod 2^64 and each output is the standard
  xor-shift/multiply finalizer of the new state;
* uniforms on [0, 1): the top 53 bits of an output word,
  ``(x >> 11) * 2**-53``;
* Gaussians: Box-Muller on a pair of uniforms,
  ``r = sqrt(-2 ln(1 - u1))``, angle ``2 pi u2``; the cosine variate is
  returned first and the sine variate is cached for the next call;
* complex Gaussians: real part drawn before imaginary part;
* matrices: entries drawn in row-major order;
* substreams: ``derive_seed(seed, index)`` feeds ``seed + (index + 1) *
  0x9E3779B97F4A7C15`` through the finalizer twice.
"""

from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Decorrelated child seed for substream `index` (restarts, batch items)."""
    z = (seed + (index + 1) * _GOLDEN) & _MASK64
    return _finalize(_finalize(z))


class PortableRng:
    """splitmix64 stream with Box-Muller Gaussians; fully specified by `seed`."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64
        self._spare: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _finalize(self._state)

    def uniform(self) -> float:
        """Uniform on [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0**-53

    def gaussian(self) -> float:
        """Standard normal variate."""
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log1p(-u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def gaussians(self, n: int) -> np.ndarray:
        return np.array([self.gaussian() for _ in range(n)])

    def complex_matrix(self, rows: int, cols: int) -> np.ndarray:
        """Matrix of independent complex Gaussians (unit-variance parts)."""
        out = np.empty((rows, cols), dtype=complex)
        for i in range(rows):
            for j in range(cols):
                re = self.gaussian()
                im = self.gaussian()
                out[i, j] = complex(re, im)
        return out

    def unit_vector(self, n: int) -> np.ndarray:
        """Haar-like random unit vector in C^n."""
        v = self.complex_matrix(n, 1)[:, 0]
        return v / np.linalg.norm(v)

    def antisymmetric(self, n: int) -> np.ndarray:
        """Real antisymmetric matrix with Gaussian upper triangle (row-major)."""
        t = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                t[i, j] = self.gaussian()
        return t - t.T

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates shuffle of range(n) driven by the uniform stream."""
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = int(self.uniform() * (i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        return perm
