"""Constructive families of matrices with analytic stable-rank and
intrinsic-dimension values, including every family that violates a
classical rank property.

Each builder returns a :class:`FamilyInstance` bundling the matrices, the
construction parameters, the predicted values, and (where the family is a
counterexample) an exact threshold predicate telling whether the parameters
cross into the violating regime. Threshold predicates are evaluated with
:mod:`fractions` so strict inequalities near the boundary are decided
exactly.

Builders accept ``rotate_seed`` to conjugate the instance by seeded random
orthogonal matrices: diagonality is destroyed while every predicted value
is preserved (rotations are similarities wherever a predicted quantity
requires PSD input, and are shared across related matrices so sums and
products stay exact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .matrices import (
    DEFAULT_TOL,
    Matrix,
    PreconditionError,
    Tolerances,
    haar_unitary,
    is_psd,
    prescribed_spectrum_matrix,
    projector_matrix,
    rank1_psd_matrix,
)
from .ranks import (
    DEFAULT_RANK_RTOL,
    intrinsic_dimension,
    numerical_rank,
    p_stable_rank,
    stable_rank,
)
from .schatten import validate_exponent

GEOMETRIC_NOTE = (
    "sr equals the geometric series (1 - ratio^(2n)) / (1 - ratio^2); "
    "the simpler closed form (4/3)*(1 - 1/n) sometimes quoted for "
    "ratio = 1/2 is not the series value, though the bound sr <= 4/3 "
    "holds either way."
)


@dataclass(frozen=True)
class FamilyInstance:
    """One parameterized example: matrices plus analytic predictions."""

    name: str
    matrices: dict[str, Matrix]
    params: dict
    predicted: dict[str, float]
    threshold_met: bool | None
    thresholds: dict[str, bool] = field(default_factory=dict)
    notes: str = ""


def evaluate(
    instance: FamilyInstance,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> dict[str, dict[str, float]]:
    """Compute every predicted quantity and report relative errors.

    Predicted keys follow the convention ``<quantity>_<matrix key>`` with
    quantity one of sr, intdim, srp (uses ``params['p']``), or rank.
    """
    out = {}
    for key, predicted in instance.predicted.items():
        quantity, _, mat_key = key.partition("_")
        a = instance.matrices[mat_key]
        if quantity == "sr":
            computed = stable_rank(a).value
        elif quantity == "intdim":
            computed = intrinsic_dimension(a, tol).value
        elif quantity == "srp":
            computed = p_stable_rank(a, instance.params["p"], rtol).value
        elif quantity == "rank":
            computed = float(numerical_rank(a, rtol))
        else:
            raise ValueError(f"unknown predicted quantity {key!r}")
        rel_err = abs(computed - predicted) / max(1.0, abs(predicted))
        out[key] = {"predicted": float(predicted), "computed": computed, "rel_err": rel_err}
    return out


def _freeze(matrices: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    for a in matrices.values():
        a.setflags(write=False)
    return matrices


def _diag(values) -> np.ndarray:
    return np.diag(np.asarray(values, dtype=np.float64))


def _orthogonal(rng, n: int) -> np.ndarray:
    return haar_unitary(rng, n, "real")


def geometric_decay(n: int, ratio: float, rotate_seed: int | None = None) -> FamilyInstance:
    """Diagonal matrix with geometrically decaying singular values ratio**j."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ratio = float(ratio)
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
    a = _diag(ratio ** np.arange(n))
    if rotate_seed is not None:
        rng = np.random.default_rng(rotate_seed)
        a = _orthogonal(rng, n) @ a @ _orthogonal(rng, n).T
    sr = float(n) if ratio == 1.0 else (1.0 - ratio ** (2 * n)) / (1.0 - ratio**2)
    return FamilyInstance(
        name="geometric_decay",
        matrices=_freeze({"A": a}),
        params={"n": n, "ratio": ratio},
        predicted={"sr_A": sr, "rank_A": float(n)},
        threshold_met=None,
        notes=GEOMETRIC_NOTE,
    )


def deletion_family(n: int, alpha: float, rotate_seed: int | None = None) -> FamilyInstance:
    """diag(I_{n-1}, alpha): deleting the trailing column (or row and
    column) raises the stable rank once alpha crosses sqrt((n-1)/(n-2)),
    and the intrinsic dimension once alpha crosses (n-1)/(n-2).
    """
    n = int(n)
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    alpha = float(alpha)
    if alpha < 1.0:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    a = _diag([1.0] * (n - 1) + [alpha])
    a_hat_col = np.delete(a, n - 1, axis=1)
    a_hat_rowcol = np.eye(n - 1)
    if rotate_seed is not None:
        rng = np.random.default_rng(rotate_seed)
        q = _orthogonal(rng, n)
        a = q @ a @ q.T
        a_hat_col = _orthogonal(rng, n) @ a_hat_col @ _orthogonal(rng, n - 1).T
    thresholds = {
        "sr": Fraction(alpha) ** 2 > Fraction(n - 1, n - 2),
        "intdim": Fraction(alpha) > Fraction(n - 1, n - 2),
    }
    return FamilyInstance(
        name="deletion_family",
        matrices=_freeze({"A": a, "A_hat_col": a_hat_col, "A_hat_rowcol": a_hat_rowcol}),
        params={"n": n, "alpha": alpha},
        predicted={
            "sr_A": 1.0 + (n - 1) / alpha**2,
            "sr_A_hat_col": float(n - 1),
            "intdim_A": 1.0 + (n - 1) / alpha,
            "intdim_A_hat_rowcol": float(n - 1),
            "rank_A": float(n),
        },
        threshold_met=thresholds["sr"],
        thresholds=thresholds,
    )


def sum_violation_family(n: int, alpha: float, rotate_seed: int | None = None) -> FamilyInstance:
    """A = diag(alpha, 2I), B = diag(-alpha, -I): the stable rank of A+B
    exceeds sr(A) + sr(B) once alpha^2 crosses 5(n-1)/(n-3).
    """
    n = int(n)
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    alpha = float(alpha)
    if abs(alpha) < 2.0:
        raise ValueError(f"|alpha| must be >= 2, got {alpha}")
    a = _diag([alpha] + [2.0] * (n - 1))
    b = _diag([-alpha] + [-1.0] * (n - 1))
    if rotate_seed is not None:
        q = _orthogonal(np.random.default_rng(rotate_seed), n)
        a = q @ a @ q.T
        b = q @ b @ q.T
    s = a + b
    thresholds = {"sr_sum": Fraction(alpha) ** 2 > Fraction(5 * (n - 1), n - 3)}
    return FamilyInstance(
        name="sum_violation_family",
        matrices=_freeze({"A": a, "B": b, "A_plus_B": s}),
        params={"n": n, "alpha": alpha},
        predicted={
            "sr_A": 1.0 + 4.0 * (n - 1) / alpha**2,
            "sr_B": 1.0 + (n - 1) / alpha**2,
            "sr_A_plus_B": float(n - 1),
        },
        threshold_met=thresholds["sr_sum"],
        thresholds=thresholds,
        notes="B is indefinite, so the PSD-only subadditivity bounds do not apply.",
    )


def rank1_drop_family(n: int, beta: float, rotate_seed: int | None = None) -> FamilyInstance:
    """Adding the rank-1 PSD matrix diag(beta, 0) to diag(0, I_{n-1})
    lowers the intrinsic dimension by more than one once beta crosses
    (n-1)/(n-3).
    """
    n = int(n)
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    beta = float(beta)
    if beta < 1.0:
        raise ValueError(f"beta must be >= 1, got {beta}")
    a = _diag([0.0] + [1.0] * (n - 1))
    b = _diag([beta] + [0.0] * (n - 1))
    if rotate_seed is not None:
        q = _orthogonal(np.random.default_rng(rotate_seed), n)
        a = q @ a @ q.T
        b = q @ b @ q.T
    thresholds = {"intdim_drop": Fraction(beta) > Fraction(n - 1, n - 3)}
    return FamilyInstance(
        name="rank1_drop_family",
        matrices=_freeze({"A": a, "B": b, "A_plus_B": a + b}),
        params={"n": n, "beta": beta},
        predicted={
            "intdim_A": float(n - 1),
            "intdim_B": 1.0,
            "intdim_A_plus_B": 1.0 + (n - 1) / beta,
            "rank_B": 1.0,
        },
        threshold_met=thresholds["intdim_drop"],
        thresholds=thresholds,
    )


def product_violation_family(n: int, alpha: float, rotate_seed: int | None = None) -> FamilyInstance:
    """A = diag(I, alpha), B = diag(I, 1/alpha): AB = I has larger stable
    rank and intrinsic dimension than either factor whenever alpha > 1.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    alpha = float(alpha)
    if alpha < 1.0:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    a = _diag([1.0] * (n - 1) + [alpha])
    b = _diag([1.0] * (n - 1) + [1.0 / alpha])
    if rotate_seed is not None:
        q = _orthogonal(np.random.default_rng(rotate_seed), n)
        a = q @ a @ q.T
        b = q @ b @ q.T
    ab = a @ b
    thresholds = {"product": Fraction(alpha) > 1}
    return FamilyInstance(
        name="product_violation_family",
        matrices=_freeze({"A": a, "B": b, "AB": ab}),
        params={"n": n, "alpha": alpha},
        predicted={
            "sr_A": 1.0 + (n - 1) / alpha**2,
            "sr_B": (n - 1) + 1.0 / alpha**2,
            "sr_AB": float(n),
            "intdim_A": 1.0 + (n - 1) / alpha,
            "intdim_B": (n - 1) + 1.0 / alpha,
            "intdim_AB": float(n),
        },
        threshold_met=thresholds["product"],
        thresholds=thresholds,
    )


def cross_gap_family(n: int, alpha: float, rotate_seed: int | None = None) -> FamilyInstance:
    """diag(1, alpha I): the Gram matrix A*A has strictly smaller stable
    rank and intrinsic dimension than A for alpha < 1.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    a = _diag([1.0] + [alpha] * (n - 1))
    if rotate_seed is not None:
        q = _orthogonal(np.random.default_rng(rotate_seed), n)
        a = q @ a @ q.T
    gram = a.conj().T @ a
    thresholds = {"strict_gap": alpha < 1.0}
    return FamilyInstance(
        name="cross_gap_family",
        matrices=_freeze({"A": a, "AtA": gram}),
        params={"n": n, "alpha": alpha},
        predicted={
            "sr_A": 1.0 + (n - 1) * alpha**2,
            "sr_AtA": 1.0 + (n - 1) * alpha**4,
            "intdim_A": 1.0 + (n - 1) * alpha,
            "intdim_AtA": 1.0 + (n - 1) * alpha**2,
        },
        threshold_met=thresholds["strict_gap"],
        thresholds=thresholds,
    )


def maximizer_multiplier(a: Matrix, rtol: float = DEFAULT_RANK_RTOL) -> FamilyInstance:
    """Nonsingular B built from the SVD of A so that sr(AB) = rank(A)."""
    a = np.asarray(a, dtype=np.complex128 if np.iscomplexobj(a) else np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"requires a square matrix, got shape {a.shape}")
    n = a.shape[0]
    s, vh = np.linalg.svd(a)[1:]
    r = int(np.count_nonzero(s > rtol * s[0])) if s[0] > 0 else 0
    if r < 1:
        raise PreconditionError("requires a nonzero matrix", rank=r)
    d = np.ones(n)
    d[:r] = 1.0 / s[:r]
    b = vh.conj().T * d
    ab = a @ b
    return FamilyInstance(
        name="maximizer_multiplier",
        matrices=_freeze({"A": a.copy(), "B": b, "AB": ab}),
        params={"n": n, "r": r},
        predicted={"sr_AB": float(r), "rank_AB": float(r)},
        threshold_met=None,
    )


def minimizer_multiplier(
    a: Matrix, alpha: float, rtol: float = DEFAULT_RANK_RTOL
) -> FamilyInstance:
    """Nonsingular B shrinking all but the top singular value of AB by
    alpha, so that sr(AB) = 1 + (r-1) alpha^2 approaches 1 as alpha -> 0.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    a = np.asarray(a, dtype=np.complex128 if np.iscomplexobj(a) else np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"requires a square matrix, got shape {a.shape}")
    n = a.shape[0]
    s, vh = np.linalg.svd(a)[1:]
    r = int(np.count_nonzero(s > rtol * s[0])) if s[0] > 0 else 0
    if r < 2:
        raise PreconditionError(f"requires rank >= 2, got {r}", rank=r)
    d = np.ones(n)
    d[0] = 1.0 / s[0]
    d[1:r] = alpha / s[1:r]
    b = vh.conj().T * d
    ab = a @ b
    return FamilyInstance(
        name="minimizer_multiplier",
        matrices=_freeze({"A": a.copy(), "B": b, "AB": ab}),
        params={"n": n, "r": r, "alpha": alpha},
        predicted={"sr_AB": 1.0 + (r - 1) * alpha**2},
        threshold_met=None,
    )


def _psd_eigendecomposition(a: np.ndarray, tol: Tolerances):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"requires a square matrix, got shape {a.shape}")
    if not is_psd(a, tol):
        raise PreconditionError("requires a positive semi-definite matrix")
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def congruence_maximizer(
    a: Matrix, tol: Tolerances = DEFAULT_TOL, rtol: float = DEFAULT_RANK_RTOL
) -> FamilyInstance:
    """Congruence B*AB with nonsingular B raising intdim to rank(A)."""
    a = np.asarray(a)
    w, v = _psd_eigendecomposition(a, tol)
    n = a.shape[0]
    r = int(np.count_nonzero(w > rtol * w[0])) if w[0] > 0 else 0
    if r < 1:
        raise PreconditionError("requires a nonzero matrix", rank=r)
    d = np.ones(n)
    d[:r] = 1.0 / np.sqrt(w[:r])
    b = (v * d) @ v.conj().T
    bab = b.conj().T @ a @ b
    return FamilyInstance(
        name="congruence_maximizer",
        matrices=_freeze({"A": np.array(a), "B": b, "BAB": bab}),
        params={"n": n, "r": r},
        predicted={"intdim_BAB": float(r)},
        threshold_met=None,
    )


def congruence_minimizer(
    a: Matrix,
    alpha: float,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> FamilyInstance:
    """Congruence B*AB lowering intdim to 1 + (r-1) alpha, close to 1."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    a = np.asarray(a)
    w, v = _psd_eigendecomposition(a, tol)
    n = a.shape[0]
    r = int(np.count_nonzero(w > rtol * w[0])) if w[0] > 0 else 0
    if r < 2:
        raise PreconditionError(f"requires rank >= 2, got {r}", rank=r)
    d = np.ones(n)
    d[0] = np.sqrt(1.0 / w[0])
    d[1:r] = np.sqrt(alpha / w[1:r])
    b = (v * d) @ v.conj().T
    bab = b.conj().T @ a @ b
    return FamilyInstance(
        name="congruence_minimizer",
        matrices=_freeze({"A": np.array(a), "B": b, "BAB": bab}),
        params={"n": n, "r": r, "alpha": alpha},
        predicted={"intdim_BAB": 1.0 + (r - 1) * alpha},
        threshold_met=None,
    )


EQUALITY_KINDS = ("rank1", "scaled_unitary", "flat_spectrum", "projector")


def equality_cases(
    kind: str, n: int, p, rank: int | None = None, seed: int = 0
) -> FamilyInstance:
    """Instances where the p-stable rank equals the rank exactly.

    For kinds other than rank1 the exponent must be finite (at p = inf the
    p-stable rank of any nonzero matrix is 1).
    """
    if kind not in EQUALITY_KINDS:
        raise ValueError(f"unknown kind {kind!r}; known: {', '.join(EQUALITY_KINDS)}")
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = validate_exponent(p)
    if kind != "rank1" and math.isinf(p):
        raise ValueError("sr_p equals the rank at p = inf only in the rank-1 case")
    rng = np.random.default_rng(seed)
    predicted: dict[str, float]
    if kind == "rank1":
        a = rank1_psd_matrix(rng, n)
        predicted = {"srp_A": 1.0, "rank_A": 1.0}
        rank = 1
    elif kind == "scaled_unitary":
        a = 2.0 * haar_unitary(rng, n)
        predicted = {"srp_A": float(n), "rank_A": float(n)}
        rank = n
    elif kind == "flat_spectrum":
        if rank is None or not 1 <= rank <= n:
            raise ValueError("flat_spectrum requires 1 <= rank <= n")
        a = prescribed_spectrum_matrix(rng, n, n, [1.5] * rank)
        predicted = {"srp_A": float(rank), "rank_A": float(rank)}
    else:
        if rank is None or not 1 <= rank <= n:
            raise ValueError("projector requires 1 <= rank <= n")
        a = projector_matrix(rng, n, rank)
        predicted = {"srp_A": float(rank), "rank_A": float(rank), "intdim_A": float(rank)}
    return FamilyInstance(
        name="equality_cases",
        matrices=_freeze({"A": a}),
        params={"kind": kind, "n": n, "p": p, "rank": rank, "seed": int(seed)},
        predicted=predicted,
        threshold_met=None,
    )


# Families constructible from scalar parameters alone (the CLI builds the
# matrix-input families from a file plus flags).
PARAMETRIC_FAMILIES = {
    "geometric_decay": (geometric_decay, ("n", "ratio")),
    "deletion_family": (deletion_family, ("n", "alpha")),
    "sum_violation_family": (sum_violation_family, ("n", "alpha")),
    "rank1_drop_family": (rank1_drop_family, ("n", "beta")),
    "product_violation_family": (product_violation_family, ("n", "alpha")),
    "cross_gap_family": (cross_gap_family, ("n", "alpha")),
}

MATRIX_INPUT_FAMILIES = {
    "maximizer_multiplier": (maximizer_multiplier, ()),
    "minimizer_multiplier": (minimizer_multiplier, ("alpha",)),
    "congruence_maximizer": (congruence_maximizer, ()),
    "congruence_minimizer": (congruence_minimizer, ("alpha",)),
}

ALL_FAMILIES = (
    list(PARAMETRIC_FAMILIES) + list(MATRIX_INPUT_FAMILIES) + ["equality_cases"]
)
