"""Discrete control measures and complex kernel tensors.

A kernel of order (p, q) is a dense complex tensor over the cells of a
discretized control measure, stored in the orthonormal cell basis
e_i = 1_{E_i} / sqrt(mu(E_i)).  In this basis the Hilbert space norm, the
inner product and all contractions reduce to plain index algebra, so no
measure weights appear in any inner loop.  Storage is dense with hard caps
on order and cell count (n**(p+q) entries), and symmetrizations enumerate
permutations directly: at desk scale, brute force is cheap and obviously
correct.

All operations are pure functions of immutable values; kernels are safe to
share between threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "MAX_CELLS",
    "MAX_TOTAL_ORDER",
    "ContractionSpec",
    "DiscreteMeasure",
    "Kernel",
    "contract",
    "indicator_to_orthonormal",
    "inner",
    "ito_symmetrize",
    "norm",
    "ordinary_symmetrize",
    "random_kernel",
    "reversed_conjugate",
]

# Dense storage blows up as n**(p+q); these caps keep everything enumerable.
MAX_TOTAL_ORDER = 8
MAX_CELLS = 8


@dataclass(frozen=True)
class DiscreteMeasure:
    """Masses mu(E_1), ..., mu(E_n) of the disjoint cells of a discretized
    control measure.  Cells are identified by their index."""

    masses: tuple[float, ...]

    def __init__(self, masses: Sequence[float]) -> None:
        cells = tuple(float(m) for m in masses)
        if not cells:
            raise ValueError("a discrete measure needs at least one cell")
        if len(cells) > MAX_CELLS:
            raise ValueError(f"cell count {len(cells)} exceeds cap {MAX_CELLS}")
        for m in cells:
            if not math.isfinite(m) or m <= 0.0:
                raise ValueError(f"cell masses must be positive and finite, got {m!r}")
        object.__setattr__(self, "masses", cells)

    @property
    def n(self) -> int:
        return len(self.masses)


@dataclass(frozen=True, eq=False)
class Kernel:
    """An order-(p, q) coefficient tensor in orthonormal cell coordinates.

    ``coeffs[i_1, ..., i_p, j_1, ..., j_q]`` multiplies
    e_{i_1} x ... x e_{i_p} x e_{j_1} x ... x e_{j_q}, where the first block
    feeds the p unconjugated integrator slots and the second block the q
    conjugated ones.  A (0, 0) kernel is a bare complex scalar (0-d array).
    Repeated cell indices are allowed; the chaos expansion resolves them
    through Hermite multiplicities.
    """

    p: int
    q: int
    n: int
    coeffs: np.ndarray

    def __init__(self, p: int, q: int, n: int, coeffs) -> None:
        if p < 0 or q < 0:
            raise ValueError("orders must be non-negative")
        if p + q > MAX_TOTAL_ORDER:
            raise ValueError(f"total order {p + q} exceeds cap {MAX_TOTAL_ORDER}")
        if not 1 <= n <= MAX_CELLS:
            raise ValueError(f"cell count {n} outside 1..{MAX_CELLS}")
        arr = np.array(coeffs, dtype=np.complex128)
        expected = (n,) * (p + q)
        if arr.shape != expected:
            raise ValueError(f"coefficient shape {arr.shape} != {expected}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", arr)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, p: int, q: int, n: int) -> "Kernel":
        return cls(p, q, n, np.zeros((n,) * (p + q), dtype=np.complex128))

    @classmethod
    def scalar(cls, value: complex, n: int = 1) -> "Kernel":
        return cls(0, 0, n, np.asarray(complex(value)))

    @classmethod
    def basis(cls, p: int, q: int, indices: Sequence[int], n: int) -> "Kernel":
        """Elementary tensor e_{i_1} x ... x e_{j_q} for the given cell indices."""
        if len(indices) != p + q:
            raise ValueError("need p + q cell indices")
        arr = np.zeros((n,) * (p + q), dtype=np.complex128)
        arr[tuple(indices)] = 1.0
        return cls(p, q, n, arr)

    @classmethod
    def from_entries(
        cls, p: int, q: int, n: int, entries: Mapping[tuple[int, ...], complex]
    ) -> "Kernel":
        """Sparse construction; omitted multi-indices are zero."""
        arr = np.zeros((n,) * (p + q), dtype=np.complex128)
        for idx, value in entries.items():
            if len(idx) != p + q:
                raise ValueError(f"multi-index {idx} has length != {p + q}")
            arr[tuple(idx)] = complex(value)
        return cls(p, q, n, arr)

    # -- linear structure ----------------------------------------------------

    @property
    def order(self) -> tuple[int, int]:
        return (self.p, self.q)

    def _check_same_shape(self, other: "Kernel") -> None:
        if self.order != other.order or self.n != other.n:
            raise ValueError(
                f"shape mismatch: {self.order}/{self.n} vs {other.order}/{other.n}"
            )

    def __add__(self, other: "Kernel") -> "Kernel":
        self._check_same_shape(other)
        return Kernel(self.p, self.q, self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: "Kernel") -> "Kernel":
        self._check_same_shape(other)
        return Kernel(self.p, self.q, self.n, self.coeffs - other.coeffs)

    def __neg__(self) -> "Kernel":
        return Kernel(self.p, self.q, self.n, -self.coeffs)

    def __mul__(self, scalar: complex) -> "Kernel":
        return Kernel(self.p, self.q, self.n, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def isclose(self, other: "Kernel", rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        if self.order != other.order or self.n != other.n:
            return False
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol))

    def __repr__(self) -> str:  # concise, the tensor itself can be large
        return f"Kernel(p={self.p}, q={self.q}, n={self.n}, norm={norm(self):.6g})"


@dataclass(frozen=True)
class ContractionSpec:
    """How many slot pairings to integrate out: ``i`` pairs a first-block slot
    of the left kernel with a second-block slot of the right kernel, ``j`` the
    other way around.  Inadmissible (i, j) yield the zero kernel by convention.
    """

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i < 0 or self.j < 0:
            raise ValueError("contraction counts must be non-negative")


def _block_symmetrized(arr: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Average over all permutations of the given axes (others fixed)."""
    k = len(axes)
    if k <= 1:
        return np.array(arr)
    axset = list(axes)
    total = np.zeros_like(arr)
    for perm in itertools.permutations(axset):
        order = list(range(arr.ndim))
        for src, dst in zip(axset, perm):
            order[dst] = src
        total += arr.transpose(order)
    return total / math.factorial(k)


def ito_symmetrize(f: Kernel) -> Kernel:
    """Average over permutations within the first p slots and, separately,
    the last q slots.  Idempotent; never increases the norm."""
    arr = _block_symmetrized(f.coeffs, range(f.p))
    arr = _block_symmetrized(arr, range(f.p, f.p + f.q))
    return Kernel(f.p, f.q, f.n, arr)


def ordinary_symmetrize(f: Kernel) -> Kernel:
    """Average over all permutations of the p + q slots; the (p, q) split is
    kept as a label on the result."""
    return Kernel(f.p, f.q, f.n, _block_symmetrized(f.coeffs, range(f.p + f.q)))


def reversed_conjugate(f: Kernel) -> Kernel:
    """Conjugate the coefficients and swap the two slot blocks, giving an
    order-(q, p) kernel.  Applying twice is the identity."""
    perm = tuple(range(f.p, f.p + f.q)) + tuple(range(f.p))
    return Kernel(f.q, f.p, f.n, np.conj(f.coeffs).transpose(perm))


def contract(f: Kernel, g: Kernel, spec: ContractionSpec) -> Kernel:
    """Integrate out ``spec.i`` pairings between f's first block and g's
    second block plus ``spec.j`` pairings between f's second block and g's
    first block.

    The paired slots are the trailing ones of each block.  In orthonormal
    coordinates the pairing is a plain (bilinear, unconjugated) index
    summation.  The result keeps f's free slots first in each block:
    first block = f's leading p1-i slots then g's leading p2-j slots,
    second block = f's leading q1-j slots then g's leading q2-i slots.
    ``ContractionSpec(0, 0)`` is the tensor product.  Counts outside
    i <= min(p1, q2), j <= min(q1, p2) return the zero kernel.
    """
    if f.n != g.n:
        raise ValueError(f"cell count mismatch: {f.n} vs {g.n}")
    i, j = spec.i, spec.j
    p1, q1, p2, q2 = f.p, f.q, g.p, g.q
    out_p = p1 + p2 - i - j
    out_q = q1 + q2 - i - j
    if i > min(p1, q2) or j > min(q1, p2):
        return Kernel.zeros(max(out_p, 0), max(out_q, 0), f.n)
    f_axes = list(range(p1 - i, p1)) + list(range(p1 + q1 - j, p1 + q1))
    g_axes = list(range(p2 + q2 - i, p2 + q2)) + list(range(p2 - j, p2))
    out = np.tensordot(f.coeffs, g.coeffs, axes=(f_axes, g_axes))
    # tensordot leaves [f-first, f-second, g-first, g-second]; interleave the
    # two first blocks and the two second blocks.
    ft = list(range(0, p1 - i))
    fs = list(range(p1 - i, p1 - i + q1 - j))
    gt = list(range(p1 - i + q1 - j, p1 - i + q1 - j + p2 - j))
    gs = list(range(p1 - i + q1 - j + p2 - j, out_p + out_q))
    out = out.transpose(ft + gt + fs + gs)
    return Kernel(out_p, out_q, f.n, out)


def norm(f: Kernel) -> float:
    """Hilbert norm: sqrt of the sum of squared coefficient moduli."""
    return float(np.linalg.norm(f.coeffs))


def inner(f: Kernel, g: Kernel) -> complex:
    """Inner product, conjugate-linear in the second argument."""
    f._check_same_shape(g)
    return complex(np.vdot(g.coeffs, f.coeffs))


def indicator_to_orthonormal(measure: DiscreteMeasure, p: int, q: int, coeffs) -> Kernel:
    """Ingest a kernel given in raw indicator coordinates (basis 1_{E_i}) by
    scaling each entry with the product of sqrt-masses of its cells."""
    arr = np.array(coeffs, dtype=np.complex128)
    w = np.sqrt(np.asarray(measure.masses))
    for axis in range(p + q):
        shape = [1] * (p + q)
        shape[axis] = measure.n
        arr = arr * w.reshape(shape)
    return Kernel(p, q, measure.n, arr)


def random_kernel(
    p: int, q: int, n: int, rng: np.random.Generator, normalize: bool = True
) -> Kernel:
    """Dense kernel with iid standard complex Gaussian entries, unit norm by
    default so certification residuals stay on a comparable scale."""
    shape = (n,) * (p + q)
    arr = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if normalize:
        scale = np.linalg.norm(arr)
        if scale > 0:
            arr = arr / scale
    return Kernel(p, q, n, arr)
