"""SplitMix64 stream with Box-Muller normals.

Output k (k = 1, 2, ...) of seed s is ``mix(s + k * 0x9E3779B97F4A7C15 mod 2**64)``
with the standard SplitMix64 finalizer. Uniform doubles use the top 53 bits;
normal pairs come from Box-Muller on consecutive uniforms (u1, u2) as
``sqrt(-2 ln(1 - u1)) * (cos, sin)(2 pi u2)``. A complex normal is
``(x + i y) / sqrt(2)`` for consecutive normals x, y.
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self, n):
        k = np.arange(1, n + 1, dtype=np.uint64)
        z = np.uint64(self.state) + k * np.uint64(GOLDEN)
        self.state = (self.state + n * GOLDEN) & MASK64
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    def uniform(self, n):
        return (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))

    def normal(self, n):
        m = (n + 1) // 2
        u = self.uniform(2 * m)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        ang = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(ang)
        out[1::2] = r * np.sin(ang)
        return out[:n]

    def complex_normal(self, shape):
        n = int(np.prod(shape))
        z = self.normal(2 * n)
        return ((z[0::2] + 1j * z[1::2]) / np.sqrt(2.0)).reshape(shape)
