"""
Seeded OuMv instance generators.

Each generator owns a dedicated ``random.Random`` so a fixed seed always
yields the same instance.
"""

import logging
import math
import random
from typing import List, Optional, Tuple

from .instance import BitMatrix, BitVector, OuMvInstance

logger = logging.getLogger(__name__)

INSTANCE_MODES = ("uniform", "planted_one", "planted_zero", "sparse")


class InstanceGenerator:
    """
    Generates OuMv instances with known ground truth.

    Modes:
        uniform: every bit is an independent fair coin.
        planted_one: each pair gets a forced triple u_i = M_ij = v_j = 1.
        planted_zero: M is cleared wherever a pair would hit it, so every bit is 0.
        sparse: supports of u, v and of every matrix row capped at ceil(sqrt(n)).
    """

    def __init__(self, seed: Optional[int] = None):
        self.seed = seed
        self.rng = random.Random(seed)

    def reset_seed(self, seed: Optional[int] = None):
        if seed is not None:
            self.seed = seed
        self.rng = random.Random(self.seed)

    def _random_word(self, n: int) -> int:
        return self.rng.getrandbits(n)

    def _sparse_word(self, n: int) -> int:
        cap = math.isqrt(n - 1) + 1 if n > 1 else 1
        size = self.rng.randint(0, cap)
        word = 0
        for index in self.rng.sample(range(n), size):
            word |= 1 << index
        return word

    def generate(self, n: int, mode: str = "uniform") -> OuMvInstance:
        if n < 1:
            raise ValueError(f"Instance dimension must be positive, got {n}")
        if mode == "uniform":
            return self._uniform(n)
        if mode == "planted_one":
            return self._planted_one(n)
        if mode == "planted_zero":
            return self._planted_zero(n)
        if mode == "sparse":
            return self._sparse(n)
        raise ValueError(f"Unsupported instance mode: {mode} (expected one of {INSTANCE_MODES})")

    def _uniform(self, n: int) -> OuMvInstance:
        matrix = BitMatrix(n, tuple(self._random_word(n) for _ in range(n)))
        pairs = [(BitVector(n, self._random_word(n)), BitVector(n, self._random_word(n)))
                 for _ in range(n)]
        return OuMvInstance(matrix, tuple(pairs))

    def _planted_one(self, n: int) -> OuMvInstance:
        rows = [self._random_word(n) for _ in range(n)]
        pairs: List[Tuple[BitVector, BitVector]] = []
        for _ in range(n):
            i = self.rng.randint(1, n)
            j = self.rng.randint(1, n)
            rows[i - 1] |= 1 << (j - 1)
            u = self._random_word(n) | (1 << (i - 1))
            v = self._random_word(n) | (1 << (j - 1))
            pairs.append((BitVector(n, u), BitVector(n, v)))
        return OuMvInstance(BitMatrix(n, tuple(rows)), tuple(pairs))

    def _planted_zero(self, n: int) -> OuMvInstance:
        words = [(self._random_word(n), self._random_word(n)) for _ in range(n)]
        rows = [self._random_word(n) for _ in range(n)]
        for u, v in words:
            for i in range(n):
                if (u >> i) & 1:
                    rows[i] &= ~v
        pairs = tuple((BitVector(n, u), BitVector(n, v)) for u, v in words)
        return OuMvInstance(BitMatrix(n, tuple(rows)), pairs)

    def _sparse(self, n: int) -> OuMvInstance:
        matrix = BitMatrix(n, tuple(self._sparse_word(n) for _ in range(n)))
        pairs = [(BitVector(n, self._sparse_word(n)), BitVector(n, self._sparse_word(n)))
                 for _ in range(n)]
        return OuMvInstance(matrix, tuple(pairs))


def generate_instance(n: int, mode: str, seed: Optional[int]) -> OuMvInstance:
    """Build one instance; deterministic for a fixed seed."""
    instance = InstanceGenerator(seed).generate(n, mode)
    logger.debug("Generated %s instance n=%d seed=%s truth=%s", mode, n, seed, instance.truth)
    return instance


def all_small_queries(n: int):
    """Yield every (u, M, v) of dimension n; 2^(n^2 + 2n) triples."""
    for matrix_word in range(1 << (n * n)):
        rows = tuple((matrix_word >> (row * n)) & ((1 << n) - 1) for row in range(n))
        matrix = BitMatrix(n, rows)
        for u_word in range(1 << n):
            for v_word in range(1 << n):
                yield BitVector(n, u_word), matrix, BitVector(n, v_word)
