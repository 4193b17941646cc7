"""
GF2 Module - Bitset linear algebra over the binary field
"""

from typing import Iterable, List, Sequence


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask with bit v set for every v"""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def bits_of(mask: int) -> List[int]:
    """Set bit positions of mask in increasing order"""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def reduce_against(vec: int, basis: Sequence[int]) -> int:
    """Reduce vec by a basis kept sorted with distinct leading bits"""
    for b in basis:
        vec = min(vec, vec ^ b)
    return vec


def insert_basis(basis: List[int], vec: int) -> bool:
    """
    Add vec to an echelon basis in place

    Args:
        basis: list of rows with pairwise distinct leading bits, sorted descending
        vec: row to insert

    Returns:
        bool: True when vec was independent of the basis
    """
    vec = reduce_against(vec, basis)
    if not vec:
        return False
    basis.append(vec)
    basis.sort(reverse=True)
    return True


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of integer bit rows"""
    basis: List[int] = []
    rank = 0
    for row in rows:
        if insert_basis(basis, row):
            rank += 1
    return rank


def gf2_is_in_span(vec: int, rows: Iterable[int]) -> bool:
    """Check whether vec lies in the row span of rows"""
    basis: List[int] = []
    for row in rows:
        insert_basis(basis, row)
    return reduce_against(vec, basis) == 0


__all__ = [
    "mask_of",
    "bits_of",
    "popcount",
    "reduce_against",
    "insert_basis",
    "gf2_rank",
    "gf2_is_in_span",
]
