"""Symmetric multi-index machinery and exact monomial-moment integration.

Multi-indices are 1-based tuples (each entry in 1..D) stored sorted ascending.
The two combinatorial delta tensors evaluate to exact integers: the fully
symmetric one sums over all perfect pairings of its slots ((2N-1)!! terms),
the orthonormality one sums over permutations of one index block against the
other (N! terms).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from .errors import DomainError

__all__ = [
    "canonical_index",
    "iter_multi_indices",
    "index_multiplicity",
    "enumerate_pairings",
    "delta_full",
    "delta_ortho",
    "count_terms",
    "decomposition_counts",
    "double_factorial",
    "SymTensor",
    "MultivarPoly",
    "monomial_moment",
    "integrate_poly",
]


def canonical_index(indices: Iterable[int]) -> tuple[int, ...]:
    """Sorted-ascending representative of a multi-index."""
    return tuple(sorted(indices))


def iter_multi_indices(D: int, rank: int) -> Iterator[tuple[int, ...]]:
    """All canonical multi-indices of the given rank over 1..D."""
    return itertools.combinations_with_replacement(range(1, D + 1), rank)


def index_multiplicity(indices: tuple[int, ...]) -> int:
    """Number of distinct permutations of a multi-index (multinomial count)."""
    counts = [len(list(g)) for _, g in itertools.groupby(sorted(indices))]
    return math.factorial(len(indices)) // math.prod(math.factorial(c) for c in counts)


def double_factorial(n: int) -> int:
    """(n)!! for odd n >= -1; used for per-axis pairing counts."""
    if n <= 0:
        return 1
    return math.prod(range(n, 0, -2))


def enumerate_pairings(slots: int) -> list[list[tuple[int, int]]]:
    """All perfect pairings of slot positions 0..slots-1.

    Pairs the first free slot with each later slot and recurses, which is
    itself the (2N-1)!! counting argument.
    """
    if slots % 2 != 0:
        raise DomainError(f"cannot pair an odd number of slots ({slots})")
    positions = list(range(slots))

    def rec(rem: list[int]) -> list[list[tuple[int, int]]]:
        if not rem:
            return [[]]
        first, rest = rem[0], rem[1:]
        out = []
        for k in range(len(rest)):
            partner = rest[k]
            for sub in rec(rest[:k] + rest[k + 1:]):
                out.append([(first, partner)] + sub)
        return out

    return rec(positions)


def delta_full(indices: Iterable[int]) -> int:
    """Fully symmetric delta tensor at concrete indices.

    Sums over all perfect pairings of the slots, each pairing contributing
    the product of Kronecker deltas of the paired values.
    """
    idx = tuple(indices)
    if len(idx) % 2 != 0:
        raise DomainError("fully symmetric delta needs an even number of indices")
    if len(idx) > 8:
        raise DomainError("rank above 8 is out of scope")

    def rec(rem: tuple[int, ...]) -> int:
        if not rem:
            return 1
        first, rest = rem[0], rem[1:]
        total = 0
        for k in range(len(rest)):
            if rest[k] == first:
                total += rec(rest[:k] + rest[k + 1:])
        return total

    return rec(idx)


def delta_ortho(i_block: Iterable[int], j_block: Iterable[int]) -> int:
    """Orthonormality delta: sum over permutations of the i block against j."""
    i_idx, j_idx = tuple(i_block), tuple(j_block)
    if len(i_idx) != len(j_idx):
        raise DomainError("index blocks must have equal rank")
    if len(i_idx) > 4:
        raise DomainError("rank above 4 is out of scope")
    total = 0
    for perm in itertools.permutations(i_idx):
        if all(a == b for a, b in zip(perm, j_idx)):
            total += 1
    return total


def count_terms(kind: str, N: int) -> int:
    """Term count of the delta tensors: 'ortho' -> N!, 'full' -> (2N-1)!!."""
    if N < 1:
        raise DomainError("N must be >= 1")
    k = kind.lower()
    if k == "ortho":
        return math.factorial(N)
    if k == "full":
        return double_factorial(2 * N - 1)
    raise DomainError(f"unknown delta kind {kind!r}")


def decomposition_counts(N: int) -> list[int]:
    """Split the (2N-1)!! pairings of an i-block against a j-block by the
    number of pure ii pairs (equivalently jj pairs).

    Slots 0..N-1 are i's, N..2N-1 are j's. Returns counts ordered by
    increasing number of pure pairs.
    """
    if not 2 <= N <= 4:
        raise DomainError("decomposition is tabulated for 2 <= N <= 4")
    buckets: dict[int, int] = {}
    for pairing in enumerate_pairings(2 * N):
        pure = sum(1 for a, b in pairing if a < N and b < N)
        buckets[pure] = buckets.get(pure, 0) + 1
    return [buckets[k] for k in sorted(buckets)]


@dataclass(frozen=True)
class SymTensor:
    """Dense symmetric tensor of the given rank over dimension D.

    Values are stored on canonical (sorted) multi-indices; any permutation of
    an index retrieves the same entry.
    """

    D: int
    rank: int
    entries: Mapping[tuple[int, ...], float] = field(default_factory=dict)

    @classmethod
    def from_function(cls, D: int, rank: int,
                      fn: Callable[[tuple[int, ...]], float]) -> "SymTensor":
        vals = {idx: float(fn(idx)) for idx in iter_multi_indices(D, rank)}
        return cls(D, rank, vals)

    def __getitem__(self, indices) -> float:
        if self.rank == 0:
            return self.entries.get((), 0.0)
        key = canonical_index(indices if isinstance(indices, tuple) else (indices,))
        if len(key) != self.rank or not all(1 <= i <= self.D for i in key):
            raise DomainError(f"index {key} invalid for rank {self.rank}, D={self.D}")
        return self.entries.get(key, 0.0)

    def components(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for idx in iter_multi_indices(self.D, self.rank):
            yield idx, self.entries.get(idx, 0.0)

    def max_abs(self) -> float:
        return max((abs(v) for _, v in self.components()), default=0.0)

    def to_json_obj(self) -> dict:
        return {
            "rank": self.rank,
            "D": self.D,
            "entries": [[list(idx), val] for idx, val in self.components()],
        }


class MultivarPoly:
    """Polynomial in xi_1..xi_D stored as {exponent vector: coefficient}.

    Zero coefficients are never stored. Supports the ring operations needed
    by the exact integrator plus an exact argument shift.
    """

    __slots__ = ("D", "terms")

    def __init__(self, D: int, terms: Mapping[tuple[int, ...], float] | None = None):
        self.D = D
        self.terms: dict[tuple[int, ...], float] = {}
        if terms:
            for expo, coeff in terms.items():
                if coeff != 0.0:
                    if len(expo) != D or any(e < 0 for e in expo):
                        raise DomainError(f"bad exponent vector {expo} for D={D}")
                    self.terms[tuple(expo)] = self.terms.get(tuple(expo), 0.0) + coeff
            self._prune()

    def _prune(self) -> None:
        for k in [k for k, v in self.terms.items() if v == 0.0]:
            del self.terms[k]

    @classmethod
    def constant(cls, D: int, c: float) -> "MultivarPoly":
        return cls(D, {(0,) * D: c})

    @classmethod
    def variable(cls, D: int, k: int) -> "MultivarPoly":
        """The monomial xi_k (k is 1-based)."""
        expo = [0] * D
        expo[k - 1] = 1
        return cls(D, {tuple(expo): 1.0})

    @classmethod
    def radius_squared(cls, D: int) -> "MultivarPoly":
        """xi^2 = sum_k xi_k^2."""
        terms = {}
        for k in range(D):
            expo = [0] * D
            expo[k] = 2
            terms[tuple(expo)] = 1.0
        return cls(D, terms)

    def copy(self) -> "MultivarPoly":
        return MultivarPoly(self.D, dict(self.terms))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other: "MultivarPoly") -> "MultivarPoly":
        out = dict(self.terms)
        for expo, coeff in other.terms.items():
            out[expo] = out.get(expo, 0.0) + coeff
        return MultivarPoly(self.D, out)

    def __sub__(self, other: "MultivarPoly") -> "MultivarPoly":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, MultivarPoly):
            out: dict[tuple[int, ...], float] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    expo = tuple(a + b for a, b in zip(e1, e2))
                    out[expo] = out.get(expo, 0.0) + c1 * c2
            return MultivarPoly(self.D, out)
        return MultivarPoly(self.D, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def evaluate(self, xi) -> float:
        total = 0.0
        for expo, coeff in self.terms.items():
            term = coeff
            for x, e in zip(xi, expo):
                if e:
                    term *= x ** e
            total += term
        return total

    def shift(self, u) -> "MultivarPoly":
        """p(xi + u) as a polynomial in xi, for a numeric displacement u."""
        if len(u) != self.D:
            raise DomainError("displacement length must equal D")
        out = MultivarPoly.constant(self.D, 0.0)
        for expo, coeff in self.terms.items():
            factor = MultivarPoly.constant(self.D, coeff)
            for k, e in enumerate(expo):
                if e == 0:
                    continue
                base = MultivarPoly(self.D, {
                    tuple(j if i == k else 0 for i in range(self.D)): math.comb(e, j) * u[k] ** (e - j)
                    for j in range(e + 1)
                })
                factor = factor * base
            out = out + factor
        return out


def monomial_moment(table, exponents: Iterable[int]) -> float:
    """Weighted integral of prod_k xi_k^{a_k} reduced to the stored moments.

    Zero when any exponent is odd; otherwise I_{sum a} times the number of
    pairings internal to each axis, prod_k (a_k - 1)!!.
    """
    a = tuple(exponents)
    if any(e % 2 for e in a):
        return 0.0
    total = sum(a)
    return table.i2n(total) * math.prod(double_factorial(e - 1) for e in a)


def integrate_poly(table, p: MultivarPoly) -> float:
    """Linear extension of monomial_moment over a polynomial's terms."""
    return math.fsum(coeff * monomial_moment(table, expo)
                     for expo, coeff in p.terms.items())
