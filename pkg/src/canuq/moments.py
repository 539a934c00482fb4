"""Moment sequences and canonical moments on a bounded interval.

A measure on [lower, upper] is described here only through its raw moments
c_1..c_N. Rescaling the support to [0,1] turns those into a point of the
[0,1] moment space; the canonical moments p_k then give the relative
position of c_k between the extreme values c_k^- and c_k^+ attainable
given the lower orders. Canonical moments live in [0,1], are invariant
under affine maps of the support, and are the natural optimizer
coordinates used everywhere else in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ._kernels import impl as _k
from .errors import NonFiniteInput, OutsideMomentSpace

#: canonical moments closer than this to {0,1} are treated as boundary values
INTERIOR_EPS = 1e-9


def _check_finite(values, name="values"):
    arr = np.asarray(values, dtype=float)
    if arr.size and not np.isfinite(arr).all():
        raise NonFiniteInput(f"{name} must be finite, got {values!r}")
    return arr


def rescale_matrix(lower: float, upper: float, order: int) -> np.ndarray:
    """Lower-triangular map sending (1, c_1..c_N) on [lower,upper] to c'_1..c'_N on [0,1].

    Row j-1 implements
    c'_j = (upper-lower)^{-j} * sum_k C(j,k) (-lower)^{j-k} c_k.
    """
    span = upper - lower
    mat = np.zeros((order, order + 1))
    for j in range(1, order + 1):
        for k in range(j + 1):
            mat[j - 1, k] = math.comb(j, k) * (-lower) ** (j - k) / span**j
    return mat


def unrescale_matrix(lower: float, upper: float, order: int) -> np.ndarray:
    """Inverse of `rescale_matrix`: maps (1, c'_1..c'_N) back to raw moments."""
    span = upper - lower
    mat = np.zeros((order, order + 1))
    for j in range(1, order + 1):
        for k in range(j + 1):
            mat[j - 1, k] = math.comb(j, k) * lower ** (j - k) * span**k
    return mat


def affine_rescale_moments(raw: Sequence[float], lower: float, upper: float) -> list[float]:
    """Moments of the affine image on [0,1] of a measure on [lower, upper].

    `raw[j-1]` is the order-j raw moment; the order-0 moment is implicitly 1.

    >>> affine_rescale_moments([1.0, 4/3], 0.0, 2.0)
    [0.5, 0.3333333333333333]
    """
    if not lower < upper:
        raise ValueError(f"need lower < upper, got [{lower}, {upper}]")
    arr = _check_finite(raw, "moments")
    _check_finite([lower, upper], "bounds")
    if arr.size == 0:
        return []
    mat = rescale_matrix(lower, upper, len(arr))
    return list(mat @ np.concatenate([[1.0], arr]))


def affine_unrescale_moments(moments01: Sequence[float], lower: float, upper: float) -> list[float]:
    """Raw moments on [lower, upper] of the measure whose [0,1] image has `moments01`."""
    if not lower < upper:
        raise ValueError(f"need lower < upper, got [{lower}, {upper}]")
    arr = _check_finite(moments01, "moments")
    if arr.size == 0:
        return []
    mat = unrescale_matrix(lower, upper, len(arr))
    return list(mat @ np.concatenate([[1.0], arr]))


@dataclass(frozen=True)
class CanonicalVector:
    """A canonical-moment sequence p_1..p_n with optional boundary marker.

    `degeneracy_index` (1-based) is the first order at which the underlying
    moment sequence touches the moment-space boundary; there p is 0 or 1,
    the measure is uniquely determined, and all later entries are 0.
    """

    values: tuple[float, ...]
    degeneracy_index: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        vals = self.values
        deg = self.degeneracy_index
        if any(not 0.0 <= v <= 1.0 for v in vals):
            raise ValueError(f"canonical moments must lie in [0,1], got {vals}")
        if deg is not None:
            if not 1 <= deg <= len(vals):
                raise ValueError(f"degeneracy index {deg} out of range for {len(vals)} values")
            if vals[deg - 1] not in (0.0, 1.0):
                raise ValueError(f"p_{deg} = {vals[deg - 1]} but a degenerate entry must be 0 or 1")
            if any(v != 0.0 for v in vals[deg:]):
                raise ValueError("canonical moments beyond the degeneracy index must be 0")
            interior = vals[: deg - 1]
        else:
            interior = vals
        if any(v <= 0.0 or v >= 1.0 for v in interior):
            raise ValueError("canonical moments before the degeneracy index must lie in (0,1)")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def is_degenerate(self) -> bool:
        return self.degeneracy_index is not None


def moments_to_canonical(moments01: Sequence[float]) -> CanonicalVector:
    """Canonical moments of a [0,1] moment sequence.

    p_1 = c_1 and p_2 = (c_2 - c_1^2) / (c_1 (1 - c_1)); higher orders are
    computed sequentially from the extreme moments compatible with the
    prefix. A boundary touch (within INTERIOR_EPS) sets the degeneracy
    index; the remaining input moments must then match the unique
    continuation.

    Raises
    ------
    OutsideMomentSpace
        If some prefix is not a valid moment sequence; `.index` is the
        first offending order.
    """
    arr = _check_finite(moments01, "moments")
    if arr.size == 0:
        return CanonicalVector(())
    p, deg, err = _k.p_from_moments01(arr)
    if err:
        raise OutsideMomentSpace(int(err))
    return CanonicalVector(tuple(p), int(deg) if deg else None)


def canonical_to_moments(p: Union[CanonicalVector, Sequence[float]]) -> list[float]:
    """Raw moments on [0,1] of the (unique) moment sequence with canonical moments p.

    Exact inverse of `moments_to_canonical`, including degenerate vectors.
    """
    values = p.values if isinstance(p, CanonicalVector) else tuple(p)
    if isinstance(p, CanonicalVector):
        pass
    else:
        p = CanonicalVector(values)  # validates range and the boundary rule
    if not values:
        return []
    return list(_k.moments01_from_p(np.asarray(values, dtype=float)))


def zeta_sequence(p: Union[CanonicalVector, Sequence[float]]) -> list[float]:
    """Recursion coefficients zeta_1 = p_1, zeta_k = (1 - p_{k-1}) p_k."""
    values = p.values if isinstance(p, CanonicalVector) else tuple(float(v) for v in p)
    if not values:
        return []
    return list(_k.zeta_from_p(np.asarray(values, dtype=float)))


@dataclass(frozen=True)
class EqualityMoments:
    """Raw moments enforced exactly; values[j-1] is the order-j moment."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class IntervalMoments:
    """Componentwise bounds on raw moments: lowers[j-1] <= c_j <= uppers[j-1]."""

    lowers: tuple[float, ...]
    uppers: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lowers", tuple(float(v) for v in self.lowers))
        object.__setattr__(self, "uppers", tuple(float(v) for v in self.uppers))
        if len(self.lowers) != len(self.uppers):
            raise ValueError("lowers and uppers must have the same length")
        for j, (lo, hi) in enumerate(zip(self.lowers, self.uppers), start=1):
            if not lo <= hi:
                raise ValueError(f"moment bound {j}: lower {lo} exceeds upper {hi}")

    def __len__(self):
        return len(self.lowers)


class MomentSpec:
    """Bounds plus moment constraints for one scalar input.

    For `EqualityMoments` the rescaled sequence must lie strictly inside
    the [0,1] moment space (every canonical moment in the open interval
    (0,1)); boundary or invalid sequences are constructor errors. For
    `IntervalMoments` feasibility is checked lazily during optimization.
    """

    def __init__(self, lower: float, upper: float,
                 constraint: Union[EqualityMoments, IntervalMoments],
                 name: str = ""):
        _check_finite([lower, upper], "bounds")
        if not lower < upper:
            raise ValueError(f"need lower < upper, got [{lower}, {upper}]")
        self.lower = float(lower)
        self.upper = float(upper)
        self.constraint = constraint
        self.name = name
        self.order = len(constraint)
        self.n_atoms = self.order + 1

        if isinstance(constraint, EqualityMoments):
            self.is_equality = True
            self.raw_moments = np.asarray(constraint.values, dtype=float)
            _check_finite(self.raw_moments, f"moments of {name or 'input'}")
            self.moments01 = np.asarray(
                affine_rescale_moments(self.raw_moments, lower, upper))
            label = f" for input {name!r}" if name else ""
            try:
                canonical = moments_to_canonical(self.moments01)
            except OutsideMomentSpace as exc:
                raise OutsideMomentSpace(
                    exc.index,
                    f"moment sequence{label} leaves the moment space of "
                    f"[{lower}, {upper}] at order {exc.index}") from None
            if canonical.is_degenerate:
                raise OutsideMomentSpace(
                    canonical.degeneracy_index,
                    f"moment sequence{label} touches the moment-space boundary at order "
                    f"{canonical.degeneracy_index}; equality constraints must be strictly "
                    "interior (the measure would be uniquely determined)")
            self.canonical_prefix = np.asarray(canonical.values)
        elif isinstance(constraint, IntervalMoments):
            self.is_equality = False
            self.raw_lowers = np.asarray(constraint.lowers, dtype=float)
            self.raw_uppers = np.asarray(constraint.uppers, dtype=float)
            _check_finite(self.raw_lowers, f"moment bounds of {name or 'input'}")
            _check_finite(self.raw_uppers, f"moment bounds of {name or 'input'}")
            self._build_boxes()
        else:
            raise TypeError(f"constraint must be EqualityMoments or IntervalMoments, got {constraint!r}")

    def _build_boxes(self):
        """Interval hull on [0,1] of the rescaled image of the raw moment box.

        The rescaling map is linear in each raw moment, so the hull is
        obtained by picking, per coefficient sign, the box corner that
        minimizes/maximizes each output coordinate. For lower = 0 the map
        is diagonal and the hull equals the componentwise rescaled bounds.
        """
        n = self.order
        mat = rescale_matrix(self.lower, self.upper, n)
        lo = np.empty(n)
        hi = np.empty(n)
        ext = np.vstack([[1.0, 1.0], np.column_stack([self.raw_lowers, self.raw_uppers])])
        for j in range(n):
            coef = mat[j]
            lo[j] = sum(c * (ext[k, 0] if c >= 0 else ext[k, 1]) for k, c in enumerate(coef))
            hi[j] = sum(c * (ext[k, 1] if c >= 0 else ext[k, 0]) for k, c in enumerate(coef))
        self.box01_lower = np.clip(lo, 0.0, 1.0)
        self.box01_upper = np.clip(hi, 0.0, 1.0)

    def __repr__(self):
        kind = "equality" if self.is_equality else "interval"
        name = f" {self.name!r}" if self.name else ""
        return (f"MomentSpec({kind}{name}, [{self.lower}, {self.upper}], "
                f"order={self.order})")
