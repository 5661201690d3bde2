"""One checker per matrix inequality, each returning a structured
:class:`CheckReport` with numeric slack.

Conventions shared by every checker:

* ``slack`` is the smallest signed margin over all clauses of the check
  (for an inequality lhs <= rhs the margin is rhs - lhs; for an equality
  it is minus the absolute deviation), so ``holds`` is simply
  ``slack >= -abs_tol`` with ``abs_tol = 1e-10 * max(1, |lhs|, |rhs|)``.
* Violated preconditions yield a not-applicable report
  (``preconditions_met=False``, ``holds=None``), never a failure.
* Two-sided bounds produce one report with per-side slacks in ``details``.

Exponent-dependent checks also come in ``grid_*`` form, which decomposes
the inputs once and evaluates every exponent in a grid; ``check_*`` is the
single-exponent special case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrices import (
    DEFAULT_TOL,
    DecompositionError,
    Matrix,
    Tolerances,
    is_hermitian,
    pivoted_cholesky,
    singular_values,
)
from .ranks import DEFAULT_RANK_RTOL, numerical_rank_from_spectrum
from .schatten import normalized_power_sum

SLACK_RTOL = 1e-10

_NAN = float("nan")


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality check on concrete matrices."""

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool | None
    preconditions_met: bool
    details: dict

    @property
    def status(self) -> str:
        if not self.preconditions_met:
            return "not-applicable"
        return "pass" if self.holds else "fail"

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": _encode(self.lhs),
            "rhs": _encode(self.rhs),
            "slack": _encode(self.slack),
            "holds": self.holds,
            "preconditions_met": self.preconditions_met,
            "status": self.status,
            "details": _encode(self.details),
        }

    @staticmethod
    def from_json_dict(d: dict) -> "CheckReport":
        return CheckReport(
            name=d["name"],
            lhs=_decode(d["lhs"]),
            rhs=_decode(d["rhs"]),
            slack=_decode(d["slack"]),
            holds=d["holds"],
            preconditions_met=d["preconditions_met"],
            details=_decode(d["details"]),
        )


def _encode(v):
    """JSON-safe encoding: non-finite floats become sentinel strings."""
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return v


def _decode(v):
    if isinstance(v, dict):
        return {k: _decode(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_decode(x) for x in v]
    if v == "nan":
        return float("nan")
    if v == "inf":
        return float("inf")
    if v == "-inf":
        return float("-inf")
    return v


def _abs_tol(lhs: float, rhs: float) -> float:
    scale = 1.0
    for v in (lhs, rhs):
        if math.isfinite(v):
            scale = max(scale, abs(v))
    return SLACK_RTOL * scale


def _finish(name: str, lhs: float, rhs: float, margins, details: dict) -> CheckReport:
    slack = float(min(margins))
    holds = bool(slack >= -_abs_tol(float(lhs), float(rhs)))
    return CheckReport(
        name=name,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=slack,
        holds=holds,
        preconditions_met=True,
        details=details,
    )


def _not_applicable(name: str, reason: str, **details) -> CheckReport:
    details = {k: v for k, v in details.items() if v is not None}
    return CheckReport(
        name=name,
        lhs=_NAN,
        rhs=_NAN,
        slack=_NAN,
        holds=None,
        preconditions_met=False,
        details={"reason": reason, **details},
    )


def _proot(x: float, p: float) -> float:
    """x ** (1/p) for x >= 0, with the p = inf limit (1 for positive x)."""
    if math.isinf(p):
        return 1.0 if x > 0 else 0.0
    return x ** (1.0 / p)


def _srp_from_values(values: np.ndarray, p: float) -> float:
    """p-stable rank of a descending nonnegative spectrum."""
    if len(values) == 0 or values[0] <= 0.0:
        return 0.0
    if math.isinf(p):
        return 1.0
    return normalized_power_sum(values, p)


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _psd_eigs(a: np.ndarray, tol: Tolerances) -> np.ndarray | None:
    """Descending eigenvalues if ``a`` is Hermitian PSD within tol, else None."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return None
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.conj().T))) > tol.hermitian_asym * scale:
        return None
    w = np.linalg.eigvalsh(_hermitize(a))
    if w[0] < -tol.psd_negativity * max(1.0, float(w[-1])):
        return None
    return w[::-1]


def _sigma_any(a: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, bool]:
    """(descending singular values, PSD flag) with one decomposition.

    Hermitian inputs go through the eigenvalue route (singular values are
    the absolute eigenvalues), all others through the SVD.
    """
    square = a.ndim == 2 and a.shape[0] == a.shape[1]
    if square:
        scale = max(1.0, float(np.max(np.abs(a))))
        if float(np.max(np.abs(a - a.conj().T))) <= tol.hermitian_asym * scale:
            w = np.linalg.eigvalsh(_hermitize(a))
            psd = bool(w[0] >= -tol.psd_negativity * max(1.0, float(w[-1])))
            return np.sort(np.abs(w))[::-1], psd
    return np.linalg.svd(a, compute_uv=False), False


def _psd_sigma(w: np.ndarray) -> np.ndarray:
    """Singular values of a PSD matrix from its descending eigenvalues."""
    return np.maximum(w, 0.0)


def _intdim_from_eigs(a: np.ndarray, w: np.ndarray) -> float:
    lam_max = float(w[0])
    if lam_max <= 0.0:
        return 0.0
    return float(np.trace(a).real) / lam_max


def _intdim_psd(a: np.ndarray) -> float:
    """trace / two-norm for input the caller has already established PSD."""
    w = np.linalg.eigvalsh(_hermitize(np.asarray(a)))
    lam_max = float(w[-1])
    if lam_max <= 0.0:
        return 0.0
    return float(np.trace(a).real) / lam_max


def _sr_from_values(values: np.ndarray) -> float:
    return _srp_from_values(values, 2.0)


def _is_zero(a: np.ndarray) -> bool:
    return not np.asarray(a).any()


def _same_square(a: np.ndarray, b: np.ndarray) -> bool:
    return a.ndim == 2 and a.shape == b.shape and a.shape[0] == a.shape[1]


# ---------------------------------------------------------------------------
# Exponent-independent checkers


def check_weyl(a: Matrix, b: Matrix, tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """lam_1(A+B) >= lam_1(A) + lam_n(B) >= lam_1(A) for PSD A, B."""
    name = "weyl"
    a = np.asarray(a)
    b = np.asarray(b)
    if not _same_square(a, b):
        return _not_applicable(name, "requires two square matrices of equal size")
    wa = _psd_eigs(a, tol)
    if wa is None:
        return _not_applicable(name, "A is not positive semi-definite")
    wb = _psd_eigs(b, tol)
    if wb is None:
        return _not_applicable(name, "B is not positive semi-definite")
    wab = np.linalg.eigvalsh(_hermitize(a + b))
    top_sum = float(wab[-1])
    base = float(wa[0])
    mid = base + float(wb[-1])
    margins = [top_sum - mid, mid - base]
    details = {
        "lam1_sum": top_sum,
        "lam1_a": base,
        "lamn_b": float(wb[-1]),
        "slack_sum_bound": margins[0],
        "slack_base_bound": margins[1],
    }
    return _finish(name, mid, top_sum, margins, details)


def check_intdim_subadditive(
    a: Matrix, b: Matrix, tol: Tolerances = DEFAULT_TOL
) -> CheckReport:
    """intdim(A+B) <= intdim(A) + intdim(B) for nonzero PSD A, B."""
    name = "intdim_subadditive"
    a = np.asarray(a)
    b = np.asarray(b)
    if not _same_square(a, b):
        return _not_applicable(name, "requires two square matrices of equal size")
    if _is_zero(a) or _is_zero(b):
        return _not_applicable(name, "requires nonzero matrices")
    wa = _psd_eigs(a, tol)
    wb = _psd_eigs(b, tol)
    if wa is None or wb is None:
        return _not_applicable(name, "requires positive semi-definite matrices")
    ws = np.linalg.eigvalsh(_hermitize(a + b))[::-1]
    id_a = _intdim_from_eigs(a, wa)
    id_b = _intdim_from_eigs(b, wb)
    lhs = _intdim_from_eigs(a + b, ws)
    rhs = id_a + id_b
    return _finish(name, lhs, rhs, [rhs - lhs], {"intdim_a": id_a, "intdim_b": id_b})


def check_block_diag_sr(
    a11: Matrix, a22: Matrix, tol: Tolerances = DEFAULT_TOL
) -> CheckReport:
    """min(sr(A11), sr(A22)) <= sr(diag(A11, A22)) <= sr(A11) + sr(A22)."""
    name = "block_diag_sr"
    a11 = np.asarray(a11)
    a22 = np.asarray(a22)
    if a11.ndim != 2 or a22.ndim != 2:
        raise ValueError("block_diag_sr requires two matrices")
    dtype = np.result_type(a11.dtype, a22.dtype, np.float64)
    m1, n1 = a11.shape
    m2, n2 = a22.shape
    block = np.zeros((m1 + m2, n1 + n2), dtype=dtype)
    block[:m1, :n1] = a11
    block[m1:, n1:] = a22
    sr11 = _sr_from_values(singular_values(a11).values)
    sr22 = _sr_from_values(singular_values(a22).values)
    sr_block = _sr_from_values(singular_values(block).values)
    low = min(sr11, sr22)
    high = sr11 + sr22
    margins = [sr_block - low, high - sr_block]
    details = {
        "sr_a11": sr11,
        "sr_a22": sr22,
        "lower_bound": low,
        "upper_bound": high,
        "slack_lower": margins[0],
        "slack_upper": margins[1],
    }
    return _finish(name, sr_block, high, margins, details)


def check_block_intdim(a: Matrix, k: int, tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """intdim(A) <= intdim(A11) + intdim(A22) for principal blocks of PSD A."""
    name = "block_intdim"
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return _not_applicable(name, "requires a square matrix")
    n = a.shape[0]
    k = int(k)
    if not 1 <= k < n:
        raise ValueError(f"block split k must satisfy 1 <= k < n, got k={k}, n={n}")
    w = _psd_eigs(a, tol)
    if w is None:
        return _not_applicable(name, "requires a positive semi-definite matrix")
    id_full = _intdim_from_eigs(a, w)
    id_11 = _intdim_psd(a[:k, :k])
    id_22 = _intdim_psd(a[k:, k:])
    rhs = id_11 + id_22
    details = {"k": k, "intdim_a11": id_11, "intdim_a22": id_22}
    return _finish(name, id_full, rhs, [rhs - id_full], details)


def check_deletion(
    a: Matrix,
    drop_col: int,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> CheckReport:
    """rank(A with a column deleted) <= rank(A); stable ranks reported only.

    The rank clause must hold; the stable-rank comparison can go either
    way and is recorded in ``details`` without being asserted.
    """
    name = "deletion"
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("deletion requires a matrix")
    n = a.shape[1]
    if n < 2:
        return _not_applicable(name, "requires at least 2 columns")
    drop_col = int(drop_col)
    if not 0 <= drop_col < n:
        raise ValueError(f"drop_col must lie in [0, {n}), got {drop_col}")
    ahat = np.delete(a, drop_col, axis=1)
    sa = singular_values(a)
    sh = singular_values(ahat)
    rank_a = numerical_rank_from_spectrum(sa, rtol)
    rank_h = numerical_rank_from_spectrum(sh, rtol)
    sr_a = _sr_from_values(sa.values)
    sr_h = _sr_from_values(sh.values)
    details = {
        "drop_col": drop_col,
        "rank_a": rank_a,
        "rank_deleted": rank_h,
        "sr_a": sr_a,
        "sr_deleted": sr_h,
        "sr_increased": bool(sr_h > sr_a),
    }
    if a.shape[0] == a.shape[1]:
        wa = _psd_eigs(a, tol)
        if wa is not None:
            details["intdim_a"] = _intdim_from_eigs(a, wa)
    return _finish(name, float(rank_h), float(rank_a), [float(rank_a - rank_h)], details)


def check_cholesky_intdim(a: Matrix, tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    """intdim(A) <= sr(L) for the pivoted Cholesky factor P*AP = LL*.

    The two quantities coincide analytically (trace(A) = ||L||_F^2 and
    ||A||_2 = ||L||_2^2), so the slack certifies the factorization as much
    as the inequality. The naive ratio trace(L)/||L||_2 is reported in
    ``details`` but not asserted; it is only a genuine intrinsic dimension
    when L is Hermitian PSD, in which case intdim(A) <= intdim(L) is
    asserted as well.
    """
    name = "cholesky_intdim"
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return _not_applicable(name, "requires a square matrix")
    w = _psd_eigs(a, tol)
    if w is None:
        return _not_applicable(name, "requires a positive semi-definite matrix")
    L, perm, rank = pivoted_cholesky(a, tol)
    n = a.shape[0]
    permuted = a[np.ix_(perm, perm)]
    residual = float(np.linalg.norm(permuted - L @ L.conj().T))
    if residual > 1e-8 * max(1.0, float(np.linalg.norm(a))):
        raise DecompositionError(
            f"pivoted Cholesky residual {residual:.3e} too large; input likely indefinite"
        )
    intdim_a = _intdim_from_eigs(a, w)
    sl = singular_values(L).values if rank > 0 else np.zeros(0)
    sr_l = _sr_from_values(sl)
    margins = [sr_l - intdim_a]
    details = {
        "factor_stable_rank": sr_l,
        "chol_rank": rank,
        "residual": residual,
        "permutation": [int(j) for j in perm],
    }
    if rank == n and len(sl) and sl[0] > 0.0:
        details["factor_trace_ratio"] = float(np.trace(L).real) / float(sl[0])
        if is_hermitian(L, tol):
            intdim_l = _intdim_psd(L)
            details["factor_intdim"] = intdim_l
            margins.append(intdim_l - intdim_a)
    return _finish(name, intdim_a, sr_l, margins, details)


# ---------------------------------------------------------------------------
# Exponent-dependent checkers (grid form decomposes once per input set)


def _finite_p_or_na(name: str, p: float) -> CheckReport | float:
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        return _not_applicable(name, f"requires finite p >= 1, got p={p}", p=p)
    return p


def _p_or_na(name: str, p: float) -> CheckReport | float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        return _not_applicable(name, f"requires p >= 1, got p={p}", p=p)
    return p


def grid_sum_subadditivity_proot(
    a: Matrix, b: Matrix, p_grid, tol: Tolerances = DEFAULT_TOL
) -> list[CheckReport]:
    """srp(A+B)^(1/p) <= srp(A)^(1/p) + srp(B)^(1/p) for nonzero PSD A, B."""
    name = "sum_subadditivity_proot"
    a = np.asarray(a)
    b = np.asarray(b)
    reason = None
    if not _same_square(a, b):
        reason = "requires two square matrices of equal size"
    elif _is_zero(a) or _is_zero(b):
        reason = "requires nonzero matrices"
    else:
        wa = _psd_eigs(a, tol)
        wb = _psd_eigs(b, tol)
        if wa is None or wb is None:
            reason = "requires positive semi-definite matrices"
    if reason is not None:
        return [_not_applicable(name, reason, p=float(p)) for p in p_grid]
    sig_a = _psd_sigma(wa)
    sig_b = _psd_sigma(wb)
    sig_sum = _psd_sigma(np.linalg.eigvalsh(_hermitize(a + b))[::-1])
    out = []
    for p in p_grid:
        p_ok = _finite_p_or_na(name, p)
        if isinstance(p_ok, CheckReport):
            out.append(p_ok)
            continue
        p = p_ok
        root_a = _proot(_srp_from_values(sig_a, p), p)
        root_b = _proot(_srp_from_values(sig_b, p), p)
        lhs = _proot(_srp_from_values(sig_sum, p), p)
        rhs = root_a + root_b
        details = {"p": p, "proot_a": root_a, "proot_b": root_b}
        out.append(_finish(name, lhs, rhs, [rhs - lhs], details))
    return out


def check_sum_subadditivity_proot(
    a: Matrix, b: Matrix, p: float, tol: Tolerances = DEFAULT_TOL
) -> CheckReport:
    return grid_sum_subadditivity_proot(a, b, [p], tol)[0]


def grid_rank1_addition(
    a: Matrix,
    b: Matrix,
    p_grid,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> list[CheckReport]:
    """srp(A+B)^(1/p) - srp(A)^(1/p) <= 1 for PSD A and rank-1 PSD B."""
    name = "rank1_addition"
    a = np.asarray(a)
    b = np.asarray(b)
    reason = None
    extra: dict = {}
    if not _same_square(a, b):
        reason = "requires two square matrices of equal size"
    else:
        wa = _psd_eigs(a, tol)
        wb = _psd_eigs(b, tol)
        if wa is None or wb is None:
            reason = "requires positive semi-definite matrices"
        else:
            rank_b = numerical_rank_from_spectrum(_psd_sigma(wb), rtol)
            if rank_b != 1:
                reason = f"requires rank(B) = 1, got {rank_b}"
                extra = {"rank_b": rank_b}
    if reason is not None:
        return [_not_applicable(name, reason, p=float(p), **extra) for p in p_grid]
    sig_a = _psd_sigma(wa)
    sig_sum = _psd_sigma(np.linalg.eigvalsh(_hermitize(a + b))[::-1])
    out = []
    for p in p_grid:
        p_ok = _p_or_na(name, p)
        if isinstance(p_ok, CheckReport):
            out.append(p_ok)
            continue
        p = p_ok
        root_a = _proot(_srp_from_values(sig_a, p), p)
        root_sum = _proot(_srp_from_values(sig_sum, p), p)
        lhs = root_sum - root_a
        details = {"p": p, "proot_a": root_a, "proot_sum": root_sum}
        out.append(_finish(name, lhs, 1.0, [1.0 - lhs], details))
    return out


def check_rank1_addition(
    a: Matrix,
    b: Matrix,
    p: float,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> CheckReport:
    return grid_rank1_addition(a, b, [p], tol, rtol)[0]


def grid_product_kappa(
    a: Matrix,
    b: Matrix,
    p_grid,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> list[CheckReport]:
    """srp(B) / kappa2(A)^p <= srp(AB) <= kappa2(A)^p * srp(B), A nonsingular."""
    name = "product_kappa"
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return [_not_applicable(name, "requires square A", p=float(p)) for p in p_grid]
    if b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} @ {b.shape}")
    sa = singular_values(a)
    if numerical_rank_from_spectrum(sa, rtol) != a.shape[0]:
        return [
            _not_applicable(name, "A is numerically singular", p=float(p)) for p in p_grid
        ]
    kappa = float(sa.values[0] / sa.values[-1])
    sig_b = singular_values(b).values
    sig_ab = singular_values(a @ b).values
    out = []
    for p in p_grid:
        p_ok = _finite_p_or_na(name, p)
        if isinstance(p_ok, CheckReport):
            out.append(p_ok)
            continue
        p = p_ok
        kappa_p = kappa**p
        srp_b = _srp_from_values(sig_b, p)
        srp_ab = _srp_from_values(sig_ab, p)
        upper = kappa_p * srp_b if srp_b > 0 else 0.0
        lower = srp_b / kappa_p
        margins = [upper - srp_ab, srp_ab - lower]
        details = {
            "p": p,
            "kappa2": kappa,
            "sr_p_b": srp_b,
            "lower_bound": lower,
            "upper_bound": upper,
            "slack_upper": margins[0],
            "slack_lower": margins[1],
        }
        out.append(_finish(name, srp_ab, upper, margins, details))
    return out


def check_product_kappa(
    a: Matrix,
    b: Matrix,
    p: float,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> CheckReport:
    return grid_product_kappa(a, b, [p], tol, rtol)[0]


def grid_cross_product(
    a: Matrix, p_grid, tol: Tolerances = DEFAULT_TOL
) -> list[CheckReport]:
    """srp(A*A) <= srp(A), srp(AA*) <= srp(A), and srp(A*A) = sr_{2p}(A)."""
    name = "cross_product"
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"cross_product requires a matrix, got shape {a.shape}")
    sig_a = singular_values(a).values
    sig_left = singular_values(a.conj().T @ a).values
    sig_right = singular_values(a @ a.conj().T).values
    out = []
    for p in p_grid:
        p_ok = _p_or_na(name, p)
        if isinstance(p_ok, CheckReport):
            out.append(p_ok)
            continue
        p = p_ok
        srp_a = _srp_from_values(sig_a, p)
        two_p = math.inf if math.isinf(p) else 2.0 * p
        sr_2p_a = _srp_from_values(sig_a, two_p)
        gram_left = _srp_from_values(sig_left, p)
        gram_right = _srp_from_values(sig_right, p)
        ident_left = -abs(gram_left - sr_2p_a)
        ident_right = -abs(gram_right - sr_2p_a)
        margins = [srp_a - gram_left, srp_a - gram_right, ident_left, ident_right]
        details = {
            "p": p,
            "sr_p_a": srp_a,
            "sr_p_gram_left": gram_left,
            "sr_p_gram_right": gram_right,
            "sr_2p_a": sr_2p_a,
            "identity_abs_err": max(-ident_left, -ident_right),
        }
        out.append(_finish(name, gram_left, srp_a, margins, details))
    return out


def check_cross_product(a: Matrix, p: float, tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    return grid_cross_product(a, [p], tol)[0]


def grid_perturbation(
    a: Matrix,
    e: Matrix,
    p_grid,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> list[CheckReport]:
    """Two-sided conditioning bounds for srp(A+E)^(1/p) when eps < 1.

    With eps = ||E||_2 / ||A||_2 and r = rank(E):

        (srp(A)^(1/p) - r^(1/p) eps) / (1+eps) <= srp(A+E)^(1/p)
            <= (srp(A)^(1/p) + r^(1/p) eps) / (1-eps)

    When A and E are both PSD, the sharper pair

        srp(A)^(1/p) / (1+eps) <= srp(A+E)^(1/p) <= srp(A)^(1/p) + r^(1/p) eps

    is verified as well.
    """
    name = "perturbation"
    a = np.asarray(a)
    e = np.asarray(e)
    if a.shape != e.shape or a.ndim != 2:
        return [
            _not_applicable(name, "requires matrices of equal shape", p=float(p))
            for p in p_grid
        ]
    sig_a, psd_a = _sigma_any(a, tol)
    norm_a = float(sig_a[0])
    if norm_a == 0.0:
        return [_not_applicable(name, "A is the zero matrix", p=float(p)) for p in p_grid]
    sig_e, psd_e = _sigma_any(e, tol)
    eps = float(sig_e[0]) / norm_a
    if eps >= 1.0:
        return [
            _not_applicable(name, f"requires eps < 1, got eps={eps:.6g}", p=float(p), epsilon=eps)
            for p in p_grid
        ]
    r = numerical_rank_from_spectrum(sig_e, rtol)
    sig_sum, _ = _sigma_any(a + e, tol)
    psd_pair = psd_a and psd_e
    out = []
    for p in p_grid:
        p_ok = _p_or_na(name, p)
        if isinstance(p_ok, CheckReport):
            out.append(p_ok)
            continue
        p = p_ok
        rp = _proot(float(r), p)
        x = _proot(_srp_from_values(sig_a, p), p)
        y = _proot(_srp_from_values(sig_sum, p), p)
        gen_lower = (x - rp * eps) / (1.0 + eps)
        gen_upper = (x + rp * eps) / (1.0 - eps)
        margins = [y - gen_lower, gen_upper - y]
        details = {
            "p": p,
            "epsilon": eps,
            "rank_e": r,
            "base_proot": x,
            "actual_proot": y,
            "gen_lower": gen_lower,
            "gen_upper": gen_upper,
            "psd_pair": psd_pair,
        }
        if psd_pair:
            psd_lower = x / (1.0 + eps)
            psd_upper = x + rp * eps
            margins += [y - psd_lower, psd_upper - y]
            details.update(psd_lower=psd_lower, psd_upper=psd_upper)
        out.append(_finish(name, y, gen_upper, margins, details))
    return out


def check_perturbation(
    a: Matrix,
    e: Matrix,
    p: float,
    tol: Tolerances = DEFAULT_TOL,
    rtol: float = DEFAULT_RANK_RTOL,
) -> CheckReport:
    return grid_perturbation(a, e, [p], tol, rtol)[0]


# ---------------------------------------------------------------------------
# Registry

CHECKS = {
    "weyl": check_weyl,
    "intdim_subadditive": check_intdim_subadditive,
    "sum_subadditivity_proot": check_sum_subadditivity_proot,
    "rank1_addition": check_rank1_addition,
    "product_kappa": check_product_kappa,
    "cross_product": check_cross_product,
    "perturbation": check_perturbation,
    "block_diag_sr": check_block_diag_sr,
    "block_intdim": check_block_intdim,
    "cholesky_intdim": check_cholesky_intdim,
    "deletion": check_deletion,
}

# Input slots per check, consumed by the CLI: names "p", "k" and "drop_col"
# come from flags, everything else is a matrix file argument.
CHECK_SIGNATURES = {
    "weyl": ("A", "B"),
    "intdim_subadditive": ("A", "B"),
    "sum_subadditivity_proot": ("A", "B", "p"),
    "rank1_addition": ("A", "B", "p"),
    "product_kappa": ("A", "B", "p"),
    "cross_product": ("A", "p"),
    "perturbation": ("A", "E", "p"),
    "block_diag_sr": ("A11", "A22"),
    "block_intdim": ("A", "k"),
    "cholesky_intdim": ("A",),
    "deletion": ("A", "drop_col"),
}


def canonical_check_name(name: str) -> str:
    """Accept either "weyl" or "check_weyl" style identifiers."""
    short = name[6:] if name.startswith("check_") else name
    if short not in CHECKS:
        raise ValueError(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
    return short
