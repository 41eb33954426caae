"""Homogeneous kernels and whole series on a finite circular grid.

Conventions used everywhere in the package:

* a signal is a length-L complex vector indexed mod L;
* its spectrum is the unnormalized DFT  s_hat(k) = sum_t s(t) exp(-2i pi k t / L)
  (numpy's default), so the inverse carries the 1/L;
* an order-j kernel is a dense complex tensor over the delay lattice
  {0..M-1}^j, and its frequency response is the j-dimensional DFT of the
  kernel zero-embedded into {0..L-1}^j.

Kernels are stored dense; the practical caps are order <= 4 and memory
M <= 16 unless a caller knows better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ContractViolation, GridError

__all__ = [
    "VolterraKernel",
    "VolterraFRF",
    "VolterraSeries",
    "DEFAULT_MAX_ORDER",
    "kernel_from_array",
    "delta_kernel",
    "constant_kernel",
    "zero_pad",
    "symmetrize_plain",
    "symmetrize_weighted",
    "symmetric_part_max_deviation",
    "vfrf",
    "elementary_series",
    "identity_series",
    "delay_series",
    "differencer_series",
    "memoryless_polynomial_series",
    "series_from_kernels",
    "zero_series",
]

DEFAULT_MAX_ORDER = 4


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


@dataclass(frozen=True)
class VolterraKernel:
    """Order-j weight tensor over the delay lattice {0..M-1}^j.

    ``data`` has shape ``(M,) * order``; an order-0 kernel is a 0-d array
    holding the constant term.
    """

    order: int
    memory: int
    data: np.ndarray

    def __post_init__(self):
        if self.order < 0:
            raise ContractViolation(f"kernel order must be >= 0, got {self.order}")
        if self.memory < 1:
            raise ContractViolation(f"kernel memory must be >= 1, got {self.memory}")
        data = _as_complex(self.data)
        if data.shape != (self.memory,) * self.order:
            raise ContractViolation(
                f"kernel data shape {data.shape} != {(self.memory,) * self.order}"
            )
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def constant(self) -> complex:
        if self.order != 0:
            raise ContractViolation("constant is only defined for order-0 kernels")
        return complex(self.data)


@dataclass(frozen=True)
class VolterraFRF:
    """Frequency response of a kernel: the j-dim DFT on the length-L grid."""

    order: int
    length: int
    data: np.ndarray

    def __post_init__(self):
        data = _as_complex(self.data)
        if data.shape != (self.length,) * self.order:
            raise ContractViolation(
                f"frf data shape {data.shape} != {(self.length,) * self.order}"
            )
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)


def kernel_from_array(data, memory=None) -> VolterraKernel:
    """Wrap an ndarray as a kernel; order and memory are read off the shape."""
    data = _as_complex(data)
    if data.ndim == 0:
        return VolterraKernel(0, memory or 1, data)
    sizes = set(data.shape)
    if len(sizes) != 1:
        raise ContractViolation(f"kernel tensor must be hypercubic, got shape {data.shape}")
    return VolterraKernel(data.ndim, data.shape[0], data)


def delta_kernel(order: int, memory: int, position=None, value=1.0) -> VolterraKernel:
    """Kernel with a single nonzero entry (defaults to the origin)."""
    if position is None:
        position = (0,) * order
    position = tuple(int(p) for p in position)
    if len(position) != order or any(not 0 <= p < memory for p in position):
        raise GridError(f"delta position {position} outside {{0..{memory - 1}}}^{order}")
    data = np.zeros((memory,) * order, dtype=np.complex128)
    data[position] = value
    return VolterraKernel(order, memory, data)


def constant_kernel(value) -> VolterraKernel:
    return VolterraKernel(0, 1, np.asarray(value, dtype=np.complex128))


def zero_pad(kernel: VolterraKernel, memory: int) -> VolterraKernel:
    """Embed the kernel into a larger delay lattice, padding with zeros."""
    if memory < kernel.memory:
        raise ContractViolation(f"cannot shrink memory {kernel.memory} -> {memory}")
    if memory == kernel.memory or kernel.order == 0:
        return VolterraKernel(kernel.order, memory, kernel.data)
    data = np.zeros((memory,) * kernel.order, dtype=np.complex128)
    data[tuple(slice(0, kernel.memory) for _ in range(kernel.order))] = kernel.data
    return VolterraKernel(kernel.order, memory, data)


def _orbit_buckets(order: int, memory: int):
    """Bucket id (index of the sorted delay multiset) and orbit size per point."""
    grid = np.indices((memory,) * order).reshape(order, -1).T
    canon = np.sort(grid, axis=1)
    flat = np.ravel_multi_index(canon.T, (memory,) * order)
    # relabel sorted-tuple ids compactly
    uniq, bucket = np.unique(flat, return_inverse=True)
    counts = np.bincount(bucket)
    return bucket, counts


def symmetrize_plain(kernel: VolterraKernel) -> VolterraKernel:
    """Average the kernel over all j! permutations of its delay axes.

    Computed by orbit averaging (group points by their sorted delay
    multiset), which equals the permutation average and stays tractable
    for high orders.
    """
    j, M = kernel.order, kernel.memory
    if j <= 1:
        return kernel
    bucket, counts = _orbit_buckets(j, M)
    flat = kernel.data.ravel()
    sums = np.bincount(bucket, weights=flat.real) + 1j * np.bincount(bucket, weights=flat.imag)
    means = sums / counts
    return VolterraKernel(j, M, means[bucket].reshape(kernel.data.shape))


def symmetrize_weighted(kernel: VolterraKernel) -> VolterraKernel:
    """Permutation sum divided by the multinomial of each point's multiset.

    The divisor n*(tau) = j!/prod(multiplicities!) equals the orbit size, so
    the output at tau is (j! / orbit) * orbit mean.  On a j = 2 diagonal
    point this gives 2 v(a, a), unlike the plain average.
    """
    j, M = kernel.order, kernel.memory
    if j <= 1:
        return kernel
    bucket, counts = _orbit_buckets(j, M)
    flat = kernel.data.ravel()
    sums = np.bincount(bucket, weights=flat.real) + 1j * np.bincount(bucket, weights=flat.imag)
    scaled = sums * (math.factorial(j) / counts**2)
    return VolterraKernel(j, M, scaled[bucket].reshape(kernel.data.shape))


def symmetric_part_max_deviation(kernel: VolterraKernel) -> float:
    """Max abs difference between the kernel and its permutation average."""
    return float(np.max(np.abs(kernel.data - symmetrize_plain(kernel).data))) if kernel.order else 0.0


def vfrf(kernel: VolterraKernel, L: int) -> VolterraFRF:
    """j-dimensional DFT of the kernel zero-embedded into {0..L-1}^j."""
    if kernel.memory > L:
        raise GridError(f"kernel memory {kernel.memory} exceeds grid length {L}")
    if kernel.order == 0:
        return VolterraFRF(0, L, kernel.data)
    embedded = np.zeros((L,) * kernel.order, dtype=np.complex128)
    embedded[tuple(slice(0, kernel.memory) for _ in range(kernel.order))] = kernel.data
    return VolterraFRF(kernel.order, L, np.fft.fftn(embedded))


@dataclass(frozen=True)
class VolterraSeries:
    """A finite indexed family of kernels.

    ``kernels`` maps an opaque index to its kernel; the order map is read
    off the kernels.  The canonical form has at most one index per order
    (with the order itself as the index); sums and morphism targets may
    carry several kernels of the same order.
    """

    kernels: Mapping[object, VolterraKernel] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kernels", dict(self.kernels))

    @property
    def indices(self) -> tuple:
        return tuple(self.kernels)

    def order_of(self, index) -> int:
        return self.kernels[index].order

    def orders(self) -> tuple[int, ...]:
        return tuple(sorted({k.order for k in self.kernels.values()}))

    @property
    def max_order(self) -> int:
        return max((k.order for k in self.kernels.values()), default=0)

    @property
    def memory(self) -> int:
        return max((k.memory for k in self.kernels.values() if k.order > 0), default=1)

    @property
    def constant(self) -> complex:
        return complex(sum(complex(k.data) for k in self.kernels.values() if k.order == 0))

    def kernel_of_order(self, j: int) -> VolterraKernel | None:
        """Sum of all kernels of order j on a common grid, or None."""
        same = [k for k in self.kernels.values() if k.order == j]
        if not same:
            return None
        if len(same) == 1:
            return same[0]
        M = max(k.memory for k in same)
        data = sum(zero_pad(k, M).data for k in same)
        return VolterraKernel(j, M, data)

    def canonical(self) -> "VolterraSeries":
        """Merge kernels level-wise so each order appears exactly once."""
        return VolterraSeries({j: self.kernel_of_order(j) for j in self.orders()})

    def is_canonical(self) -> bool:
        orders = [k.order for k in self.kernels.values()]
        return len(orders) == len(set(orders))

    def map_kernels(self, fn) -> "VolterraSeries":
        return VolterraSeries({i: fn(k) for i, k in self.kernels.items()})


def series_from_kernels(kernels) -> VolterraSeries:
    """Build a canonical series from an iterable or order->kernel mapping."""
    if isinstance(kernels, Mapping):
        items = kernels.items()
        for j, k in items:
            if k.order != j:
                raise ContractViolation(f"kernel of order {k.order} filed under order {j}")
        return VolterraSeries(dict(items))
    out = {}
    for k in kernels:
        if k.order in out:
            raise ContractViolation(f"duplicate order {k.order}; use VolterraSeries directly")
        out[k.order] = k
    return VolterraSeries(out)


def zero_series() -> VolterraSeries:
    return VolterraSeries({})


def identity_series() -> VolterraSeries:
    """Order-1 delta at zero delay: the unit of series composition."""
    return series_from_kernels([delta_kernel(1, 1)])


def delay_series(d: int, memory: int | None = None) -> VolterraSeries:
    """Pure delay by d samples as an order-1 kernel."""
    if d < 0:
        raise GridError(f"delay must be >= 0, got {d}")
    M = memory if memory is not None else d + 1
    if d >= M:
        raise GridError(f"delay {d} outside the grid {{0..{M - 1}}}")
    return series_from_kernels([delta_kernel(1, M, (d,))])


def differencer_series(r: int) -> VolterraSeries:
    """First-difference stencil [1, -1] composed r times.

    A discrete surrogate for r-fold differentiation; the exact spectral
    multiplier is available through the actions module instead.
    """
    if r < 0:
        raise ContractViolation(f"differencer order must be >= 0, got {r}")
    taps = np.array([1.0])
    for _ in range(r):
        taps = np.convolve(taps, [1.0, -1.0])
    return series_from_kernels([kernel_from_array(taps.astype(np.complex128))])


def memoryless_polynomial_series(coeffs, max_order: int | None = None) -> VolterraSeries:
    """sum_n a_n s(t)^n as one delta-at-origin kernel per nonzero a_n."""
    coeffs = list(coeffs)
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if len(coeffs) - 1 > cap:
        raise ContractViolation(
            f"polynomial order {len(coeffs) - 1} exceeds configured max order {cap}"
        )
    kernels = {}
    for n, a in enumerate(coeffs):
        if a == 0:
            continue
        kernels[n] = constant_kernel(a) if n == 0 else delta_kernel(n, 1, value=a)
    return VolterraSeries(kernels)


def elementary_series(kind: str, **params) -> VolterraSeries:
    """Constructor dispatcher for the stock elementary systems.

    kinds: ``identity``, ``delay`` (d, memory), ``differencer`` (r),
    ``memoryless-polynomial`` / ``polynomial`` (coeffs, max_order).
    """
    if kind == "identity":
        return identity_series()
    if kind == "delay":
        return delay_series(**params)
    if kind == "differencer":
        return differencer_series(**params)
    if kind in ("polynomial", "memoryless-polynomial"):
        return memoryless_polynomial_series(**params)
    raise ContractViolation(f"unknown elementary system kind {kind!r}")
