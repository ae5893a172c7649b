"""Closed-form counts for star/chain mergings and the pieces they decompose into.

All arithmetic is on Python integers, so nothing overflows.

The edge terms of :func:`F_V1` and :func:`F_V2` count colorings with colors
drawn from an empty range; such terms are zero for every exponent, including
``m = 0`` (see :func:`_edge_pow`).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import comb


def convolution(u: Sequence[int], v: Sequence[int]) -> int:
    """``sum_i u_i * v_{k-i+1}`` for vectors of common length ``k``."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, reversed(v)))


def convolution_entry(m: int, i: int, j: int) -> int:
    """``a_{i,j} = sum_{k=1}^{j} (k (i+j-k))^m``."""
    if i < 1 or j < 1:
        raise ValueError("array indices start at 1")
    u = [k**m for k in range(1, j + 1)]
    v = [(i + k - 1) ** m for k in range(1, j + 1)]
    return convolution(u, v)


@dataclass(frozen=True)
class ConvolutionArray:
    m: int
    rows: int
    cols: int

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(convolution_entry(self.m, i, j) for j in range(1, self.cols + 1))
            for i in range(1, self.rows + 1)
        )

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(ij)
        return convolution_entry(self.m, i, j)


def _check_nonneg(**kw: int) -> None:
    for name, value in kw.items():
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")


def _edge_pow(base: int, m: int) -> int:
    """``base**m`` with a zero base contributing nothing, even for ``m = 0``."""
    return 0 if base == 0 else base**m


def C(m: int, n: int) -> int:  # noqa: N802
    """``sum_{k=1}^{n} k^m (n-k+1)^{m+1}``."""
    _check_nonneg(m=m, n=n)
    return sum(k**m * (n - k + 1) ** (m + 1) for k in range(1, n + 1))


def C_antidiagonal(m: int, n: int) -> int:  # noqa: N802
    """``C(m, n)`` as the sum of the ``n``-th antidiagonal of the convolution array."""
    _check_nonneg(m=m, n=n)
    return sum(convolution_entry(m, l, n - l + 1) for l in range(1, n + 1))  # noqa: E741


def F_sc(m: int, n: int) -> int:  # noqa: N802
    """Number of proper mergings of an ``m``-star and an ``n``-chain."""
    _check_nonneg(m=m, n=n)
    return sum(k**m * (n - k + 2) ** (m + 1) for k in range(1, n + 2))


def F_V1(m: int, n: int, k1: int) -> int:  # noqa: N802
    """Colorings of the first layer of ``K_{m,m}`` whose largest color is ``n+2-k1``.

    ``k1 = n+1`` is the class with empty ``R``; it has exactly one member.
    """
    _check_nonneg(m=m, n=n)
    if not 1 <= k1 <= n + 1:
        raise ValueError(f"k1 must lie in 1..{n + 1}, got {k1}")
    return _edge_pow(n + 2 - k1, m) - _edge_pow(n + 1 - k1, m)


def F_V2(m: int, k2: int, l: int) -> int:  # noqa: N802, E741
    """Colorings of the second layer with colors spanning exactly ``[n+1-k2, n+1-l]``."""
    _check_nonneg(m=m, k2=k2, l=l)
    if l > k2:
        raise ValueError(f"need l <= k2, got l={l}, k2={k2}")
    if k2 == l:
        return 1
    d = k2 - l
    return _edge_pow(d + 1, m) - 2 * _edge_pow(d, m) + _edge_pow(d - 1, m)


def fiber_size(k1: int, l: int) -> int:  # noqa: E741
    """Size of the preimage of one antichain/chain merging of class ``(k1, *, l)``."""
    if k1 < 1 or l < 0 or l >= k1:
        raise ValueError(f"need k1 >= 1 and 0 <= l < k1, got k1={k1}, l={l}")
    return k1 * (l + 1) - comb(l + 1, 2)


def class_triples(n: int):
    """Valid ``(k1, k2, l)`` with ``n+1 >= k1 > k2 >= l >= 0``."""
    for k1 in range(1, n + 2):
        for k2 in range(k1):
            for l in range(k2 + 1):  # noqa: E741
                yield k1, k2, l


def class_size(m: int, n: int, k1: int, k2: int, l: int) -> int:  # noqa: E741
    return F_V1(m, n, k1) * F_V2(m, k2, l)


def ac_count(m: int, n: int) -> int:
    """Proper antichain/chain mergings, summed over classes."""
    return sum(class_size(m, n, *t) for t in class_triples(n))


def nested_sum(m: int, n: int) -> int:
    """Fiber sizes weighted by class sizes, summed over all classes."""
    _check_nonneg(m=m, n=n)
    total = 0
    for k1 in range(1, n + 2):
        inner = 0
        for k2 in range(k1):
            for l in range(k2 + 1):  # noqa: E741
                inner += F_V2(m, k2, l) * fiber_size(k1, l)
        total += F_V1(m, n, k1) * inner
    return total


def verify_appendix_identity(m: int, n: int) -> bool:
    return nested_sum(m, n) == C(m, n + 1)


def galois_count(m: int, n: int) -> int:
    """Galois connections between the chain and star scales: ``sum_{k=1}^{n+1} k^m``."""
    _check_nonneg(m=m, n=n)
    return sum(k**m for k in range(1, n + 2))
