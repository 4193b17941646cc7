"""
Bounds Module - Exact evaluators for the explicit bound functions
"""

from math import comb
from typing import Callable, Dict, Optional

from config import cap_or_default
from errors import BoundOverflow, InvalidOperation


class BoundTable:
    """
    Closed-form bound functions evaluated with exact Python integers

    Responsibilities:
    - Evaluate g, k0, L, d and the path / clique constellation chains
    - Refuse values whose bit length passes the configured cap

    Does NOT handle:
    - Bounds defined through Ramsey numbers (reported symbolically)
    """

    def __init__(self, max_bits: Optional[int] = None):
        self.max_bits = cap_or_default(max_bits, "bound_max_bits")

    def _checked(self, name: str, value: int) -> int:
        if value.bit_length() > self.max_bits:
            raise BoundOverflow(name, self.max_bits, value.bit_length())
        return value

    def _exp2(self, name: str, exponent: int) -> int:
        if exponent + 1 > self.max_bits:
            raise BoundOverflow(name, self.max_bits, exponent + 1)
        return 1 << exponent

    @staticmethod
    def _positive(name: str, **values: int):
        for key, value in values.items():
            if value < 1:
                raise InvalidOperation(f"{name}: {key} must be positive, got {value}")

    def g(self, n: int) -> int:
        """Side-size function for (m, f)-connectivity: (6^n - 1) / 5"""
        if n < 0:
            raise InvalidOperation(f"g: n must be non-negative, got {n}")
        if n * 3 > self.max_bits:
            raise BoundOverflow("g", self.max_bits, n * 3)
        return self._checked("g", (6 ** n - 1) // 5)

    def k0(self, k: int) -> int:
        self._positive("k0", k=k)
        return self._exp2("k0", k - 1) + 1

    def L(self, k: int) -> int:
        """Connectivity needed to disentangle a k-link: 2^(k+k0-2) + 2k - 1"""
        self._positive("L", k=k)
        k0 = self.k0(k)
        return self._checked("L", self._exp2("L", k + k0 - 2) + 2 * k - 1)

    def d(self, s: int, m: int) -> int:
        """Set size after s halving rounds: m * 2^(m-s)"""
        self._positive("d", s=s, m=m)
        if s > m:
            raise InvalidOperation(f"d: s={s} exceeds m={m}")
        return self._checked("d", m * self._exp2("d", m - s))

    def path_chain(self, n: int) -> Dict[str, int]:
        """
        Leaf sizes for path constellations at grid order n

        Returns:
            dict: m, k3, k2, k1, n_paths, k_paths
        """
        self._positive("path_chain", n=n)
        m = n * n
        k3 = self._checked("k3", m * self._exp2("k3", m - 1))
        k2 = k3 + m - 1
        k1 = k2 + m - 1
        return {
            "m": m,
            "k3": k3,
            "k2": k2,
            "k1": k1,
            "n_paths": (n * n - 1) * m,
            "k_paths": self._checked("k_paths", max(k1, comb(n * n, 2))),
        }

    def clique_chain(self, n: int) -> Dict[str, object]:
        """Leaf size and (symbolic) hub count for clique constellations"""
        self._positive("clique_chain", n=n)
        return {
            "k_cliques": max(n * n, comb(n * n, 2)),
            "n_cliques": f"R_3({n * n})",
        }

    def grid_k(self, n: int) -> int:
        """Leaf size sufficient for every constellation shape at grid order n"""
        return max(n * n + 2, self.clique_chain(n)["k_cliques"], self.path_chain(n)["k_paths"])

    def path_pipeline_k(self, m: int) -> int:
        """Smallest leaf size the path pipeline accepts for m hubs"""
        self._positive("path_pipeline_k", m=m)
        return self._checked("path_pipeline_k", m * self._exp2("path_pipeline_k", m - 1) + 2 * (m - 1))

    def evaluators(self) -> Dict[str, Callable]:
        """Name -> callable map used by the bounds verb"""
        return {
            "g": self.g,
            "k0": self.k0,
            "L": self.L,
            "d": self.d,
            "path": self.path_chain,
            "clique": self.clique_chain,
            "gridk": self.grid_k,
            "pathk": self.path_pipeline_k,
        }

    def evaluate(self, name: str, *args: int):
        table = self.evaluators()
        if name not in table:
            raise InvalidOperation(f"unknown bound '{name}', choose from {', '.join(sorted(table))}")
        return table[name](*args)
