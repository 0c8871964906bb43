"""Seeded random streams.

Every random decision in the package comes from xoshiro256** streams whose
64-bit seeds are derived from a single user seed with :func:`derive_seed`.
The generator is implemented here (not taken from numpy or ``random``) so
the exact bit stream is fixed and reproducible across platforms.

Stream layout
-------------
``derive_seed(seed, *keys)`` folds each key into the seed with the
splitmix64 finalizer: ``s = mix64(s ^ key)``.  Phases use the tags below as
their first key; per-row / per-trial / per-attempt streams add an index.

=================  ==========================================
tag                stream
=================  ==========================================
GNNP, row          one stream per left vertex in ``gnnp``
RIGHT_REGULAR, v   one stream per right vertex
BIHOLE, attempt    left-vertex sampling in the bi-hole finder
RETRY, attempt     pipeline seed for coloring attempt ``attempt``
PHASE1             left colors
PHASE2             right colors chosen from the available lists
RESAMPLE           residual-set sampling and resampling
COUPON, trial      one stream per coupon-collector trial
=================  ==========================================

Draw primitives
---------------
* ``bernoulli``: ``(x >> 11) < floor(p * 2**53)``
* ``below(k)``: ``((x >> 32) * k) >> 32`` (requires ``k < 2**32``); this is
  the "j-th smallest of k" rule with a 32-bit uniform.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

TAG_GNNP = 1
TAG_BIHOLE = 2
TAG_RETRY = 3
TAG_PHASE1 = 4
TAG_PHASE2 = 5
TAG_RESAMPLE = 6
TAG_COUPON = 7
TAG_RIGHT_REGULAR = 8
TAG_MIXED = 9


def mix64(x: int) -> int:
    """splitmix64 output for state ``x`` (increment then finalize)."""
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    s = seed & MASK64
    for k in keys:
        s = mix64(s ^ (k & MASK64))
    return s


def seed_state(seed: int) -> tuple[int, int, int, int]:
    """xoshiro256 state from a 64-bit seed: four successive splitmix64 outputs."""
    s = seed & MASK64
    return tuple(mix64((s + i * GOLDEN) & MASK64) for i in range(4))


def bernoulli_threshold(p: float) -> int:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return int(p * (1 << 53))


class Xoshiro256:
    """xoshiro256** generator (Blackman & Vigna)."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        self.s0, self.s1, self.s2, self.s3 = seed_state(seed)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s1 * 5) & MASK64
        x = ((x << 7) | (x >> 57)) & MASK64
        result = (x * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bernoulli(self, threshold: int) -> bool:
        """True with probability ``threshold / 2**53`` (see :func:`bernoulli_threshold`)."""
        return (self.next_u64() >> 11) < threshold

    def below(self, k: int) -> int:
        return ((self.next_u64() >> 32) * k) >> 32

    def sample_distinct(self, population: int, count: int) -> list[int]:
        """``count`` distinct values from ``range(population)``, sorted (Floyd's algorithm)."""
        if count > population:
            raise ValueError("cannot sample more values than the population holds")
        chosen = set()
        for j in range(population - count, population):
            r = self.below(j + 1)
            chosen.add(j if r in chosen else r)
        return sorted(chosen)
