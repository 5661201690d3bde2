"""Overflow-safe Schatten p-norms for p in (0, inf].

The exponent is a plain float: ``math.inf`` is the operator norm, finite
p > 0 the usual p-norm of the singular value vector. Exponents in (0, 1)
are quasi-norms (the triangle inequality can fail) and trip a
:class:`QuasiNormWarning`. p = 0 is rejected here because it counts
nonzero singular values rather than measuring size; see
:func:`srlab.ranks.numerical_rank`.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .matrices import Matrix, Spectrum, singular_values

INF = math.inf


class QuasiNormWarning(UserWarning):
    """p in (0, 1) yields a quasi-norm; triangle-based reasoning is off."""


def validate_exponent(p) -> float:
    """Coerce and range-check a Schatten/stable-rank exponent (p >= 0)."""
    p = float(p)
    if math.isnan(p) or p < 0:
        raise ValueError(f"exponent must be nonnegative or inf, got {p!r}")
    return p


def normalized_power_sum(values: np.ndarray, p: float) -> float:
    """sum over j of (v_j / v_0) ** p for a descending nonnegative sequence.

    This is the overflow-safe core shared by the norms and the stable
    ranks: the leading value is factored out before powering, so huge or
    tiny spectra never overflow. Returns 0.0 for an all-zero sequence.
    """
    top = float(values[0]) if len(values) else 0.0
    if top == 0.0:
        return 0.0
    ratios = values / top
    return float(np.sum(ratios**p))


def schatten_norm_from_spectrum(s, p) -> float:
    """Schatten p-norm evaluated from a precomputed singular spectrum.

    Accepts a :class:`Spectrum` of kind "singular" or a raw descending
    nonnegative sequence; lets one decomposition serve many exponents.
    """
    p = validate_exponent(p)
    if p == 0.0:
        raise ValueError(
            "p = 0 counts nonzero singular values rather than measuring size; "
            "use srlab.ranks.numerical_rank"
        )
    if isinstance(s, Spectrum):
        if s.kind != "singular":
            raise ValueError("schatten norms need a singular spectrum")
        values = s.values
    else:
        values = np.asarray(s, dtype=np.float64)
    if p < 1.0:
        warnings.warn(
            f"p={p} gives a quasi-norm: the triangle inequality may fail",
            QuasiNormWarning,
            stacklevel=2,
        )
    top = float(values[0]) if len(values) else 0.0
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    return top * normalized_power_sum(values, p) ** (1.0 / p)


def schatten_norm(a: Matrix, p) -> float:
    """Schatten p-norm of a matrix: the l_p norm of its singular values.

    p = 1 is the nuclear norm, p = 2 the Frobenius norm, p = inf the
    operator two-norm. Evaluation normalizes by the top singular value
    before powering, so large p cannot overflow.
    """
    return schatten_norm_from_spectrum(singular_values(a), p)
