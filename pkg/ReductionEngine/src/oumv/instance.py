"""
Boolean vectors, matrices and OuMv instances.

Bits are packed into Python integers (bit ``i - 1`` holds entry ``i``); the
public API is 1-based so gadget code can use the same indices as the
construction labels.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

from ..exceptions import DimensionMismatchError


def _pack(bits: Iterable) -> Tuple[int, int]:
    word = 0
    count = 0
    for position, bit in enumerate(bits):
        if bit:
            word |= 1 << position
        count = position + 1
    return word, count


@dataclass(frozen=True)
class BitVector:
    """A length-n boolean vector."""

    n: int
    word: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Vector dimension must be positive, got {self.n}")
        if self.word < 0 or self.word >> self.n:
            raise ValueError(f"Packed word has bits beyond dimension {self.n}")

    @classmethod
    def from_bits(cls, bits: Sequence) -> "BitVector":
        word, count = _pack(bits)
        return cls(count, word)

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        return cls(n, (1 << n) - 1)

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        """The vector e_i (1-based)."""
        if not 1 <= i <= n:
            raise IndexError(f"Index {i} outside [1, {n}]")
        return cls(n, 1 << (i - 1))

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"Index {i} outside [1, {self.n}]")
        return (self.word >> (i - 1)) & 1

    def __len__(self) -> int:
        return self.n

    @property
    def bits(self) -> List[int]:
        return [(self.word >> k) & 1 for k in range(self.n)]

    def support(self) -> int:
        """Number of ones."""
        return bin(self.word).count("1")

    def ones_indices(self) -> List[int]:
        return [i for i in range(1, self.n + 1) if (self.word >> (i - 1)) & 1]

    def padded(self, n: int) -> "BitVector":
        """Zero-extend to dimension ``n``."""
        if n < self.n:
            raise DimensionMismatchError(f"Cannot pad dimension {self.n} down to {n}")
        return BitVector(n, self.word)

    def with_bit(self, i: int, value: int) -> "BitVector":
        word = self.word | (1 << (i - 1)) if value else self.word & ~(1 << (i - 1))
        return BitVector(self.n, word)

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class BitMatrix:
    """A square boolean matrix stored as packed rows."""

    n: int
    rows: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Matrix dimension must be positive, got {self.n}")
        rows = tuple(self.rows) if self.rows else (0,) * self.n
        if len(rows) != self.n:
            raise DimensionMismatchError(f"Matrix of dimension {self.n} given {len(rows)} rows")
        for row in rows:
            if row < 0 or row >> self.n:
                raise ValueError(f"Row word has bits beyond dimension {self.n}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "BitMatrix":
        n = len(rows)
        packed = []
        for row in rows:
            word, count = _pack(row)
            if count != n:
                raise DimensionMismatchError(f"Row of length {count} in a {n}x{n} matrix")
            packed.append(word)
        return cls(n, tuple(packed))

    @classmethod
    def zeros(cls, n: int) -> "BitMatrix":
        return cls(n, (0,) * n)

    @classmethod
    def ones(cls, n: int) -> "BitMatrix":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << k for k in range(n)))

    @classmethod
    def single(cls, n: int, i: int, j: int) -> "BitMatrix":
        """The matrix with a single one at (i, j)."""
        return cls.zeros(n).with_bit(i, j, 1)

    def get(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"Entry ({i}, {j}) outside [1, {self.n}]^2")
        return (self.rows[i - 1] >> (j - 1)) & 1

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.get(*key)

    def row(self, i: int) -> BitVector:
        return BitVector(self.n, self.rows[i - 1])

    def with_bit(self, i: int, j: int, value: int) -> "BitMatrix":
        rows = list(self.rows)
        if value:
            rows[i - 1] |= 1 << (j - 1)
        else:
            rows[i - 1] &= ~(1 << (j - 1))
        return BitMatrix(self.n, tuple(rows))

    def ones_positions(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1) if self.get(i, j)]

    def count(self) -> int:
        return sum(bin(row).count("1") for row in self.rows)

    def transpose(self) -> "BitMatrix":
        rows = []
        for j in range(self.n):
            word = 0
            for i in range(self.n):
                if (self.rows[i] >> j) & 1:
                    word |= 1 << i
            rows.append(word)
        return BitMatrix(self.n, tuple(rows))

    def padded(self, n: int) -> "BitMatrix":
        if n < self.n:
            raise DimensionMismatchError(f"Cannot pad dimension {self.n} down to {n}")
        return BitMatrix(n, self.rows + (0,) * (n - self.n))

    def to_strings(self) -> List[str]:
        return ["".join(str((row >> k) & 1) for k in range(self.n)) for row in self.rows]


def transpose(matrix: BitMatrix) -> BitMatrix:
    return matrix.transpose()


def vmv(u: BitVector, matrix: BitMatrix, v: BitVector) -> int:
    """Return u·M·v over the booleans: 1 iff some u_i = M_ij = v_j = 1."""
    if not (u.n == matrix.n == v.n):
        raise DimensionMismatchError(
            f"Dimensions disagree: u has {u.n}, M has {matrix.n}, v has {v.n}")
    for i in u.ones_indices():
        if matrix.rows[i - 1] & v.word:
            return 1
    return 0


def augment_instance(u: BitVector, matrix: BitMatrix,
                     v: BitVector) -> Tuple[BitVector, BitMatrix, BitVector]:
    """Double the dimension: û = (u 0), v̂ = (v 0) and M̂ = (M 1; 1 1)."""
    if not (u.n == matrix.n == v.n):
        raise DimensionMismatchError(
            f"Dimensions disagree: u has {u.n}, M has {matrix.n}, v has {v.n}")
    n = matrix.n
    upper = ((1 << n) - 1) << n
    rows = tuple(row | upper for row in matrix.rows) + ((1 << (2 * n)) - 1,) * n
    return u.padded(2 * n), BitMatrix(2 * n, rows), v.padded(2 * n)


@dataclass(frozen=True)
class OuMvInstance:
    """A matrix plus a stream of n vector pairs, with eagerly computed answers."""

    matrix: BitMatrix
    pairs: Tuple[Tuple[BitVector, BitVector], ...]
    truth: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = tuple((u, v) for u, v in self.pairs)
        n = self.matrix.n
        if len(pairs) != n:
            raise DimensionMismatchError(f"Instance of dimension {n} has {len(pairs)} pairs")
        for u, v in pairs:
            if u.n != n or v.n != n:
                raise DimensionMismatchError(
                    f"Pair dimensions ({u.n}, {v.n}) do not match matrix dimension {n}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "truth", tuple(vmv(u, self.matrix, v) for u, v in pairs))

    @property
    def n(self) -> int:
        return self.matrix.n

    def ground_truth(self) -> List[int]:
        return list(self.truth)

    def padded(self, n: int) -> "OuMvInstance":
        """Zero-pad matrix and vectors to dimension n, repeating zero pairs at the tail."""
        if n < self.n:
            raise DimensionMismatchError(f"Cannot pad dimension {self.n} down to {n}")
        pairs = [(u.padded(n), v.padded(n)) for u, v in self.pairs]
        pairs.extend((BitVector.zeros(n), BitVector.zeros(n)) for _ in range(n - self.n))
        return OuMvInstance(self.matrix.padded(n), tuple(pairs))


def next_power_of_two(n: int) -> int:
    power = 2
    while power < n:
        power *= 2
    return power


def pad_instance(instance: OuMvInstance, n: int) -> OuMvInstance:
    return instance.padded(n)


def pad_to_power_of_two(instance: OuMvInstance) -> OuMvInstance:
    """Zero padding to the next power of two (at least 2); bits are preserved."""
    target = next_power_of_two(instance.n)
    return instance if target == instance.n else instance.padded(target)
