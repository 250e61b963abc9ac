"""
Plain-text instance format.

Line 1 holds ``n``, the next n lines are matrix rows as 0/1 strings and the
final n lines are ``u-bits v-bits`` pairs.
"""

from pathlib import Path
from typing import List

from .instance import BitMatrix, BitVector, OuMvInstance


def format_instance(instance: OuMvInstance) -> str:
    lines = [str(instance.n)]
    lines.extend(instance.matrix.to_strings())
    lines.extend(f"{u.to_string()} {v.to_string()}" for u, v in instance.pairs)
    return "\n".join(lines) + "\n"


def _parse_bits(token: str, n: int, line_number: int) -> List[int]:
    if len(token) != n or any(ch not in "01" for ch in token):
        raise ValueError(f"Line {line_number}: expected {n} bits, got {token!r}")
    return [int(ch) for ch in token]


def parse_instance(text: str) -> OuMvInstance:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("Empty instance text")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"Line 1: expected dimension, got {lines[0]!r}")
    if n < 1:
        raise ValueError(f"Line 1: dimension must be positive, got {n}")
    if len(lines) != 1 + 2 * n:
        raise ValueError(f"Expected {1 + 2 * n} non-empty lines, got {len(lines)}")
    rows = [_parse_bits(lines[1 + r], n, 2 + r) for r in range(n)]
    pairs = []
    for p in range(n):
        line_number = 2 + n + p
        tokens = lines[1 + n + p].split()
        if len(tokens) != 2:
            raise ValueError(f"Line {line_number}: expected 'u-bits v-bits'")
        u = BitVector.from_bits(_parse_bits(tokens[0], n, line_number))
        v = BitVector.from_bits(_parse_bits(tokens[1], n, line_number))
        pairs.append((u, v))
    return OuMvInstance(BitMatrix.from_rows(rows), tuple(pairs))


def read_instance(path) -> OuMvInstance:
    file_path = Path(path)
    try:
        with open(file_path, "r") as f:
            return parse_instance(f.read())
    except FileNotFoundError:
        raise FileNotFoundError(f"Instance file not found: {file_path}")


def write_instance(instance: OuMvInstance, path) -> None:
    with open(Path(path), "w") as f:
        f.write(format_instance(instance))
