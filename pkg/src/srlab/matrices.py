"""Dense matrix substrate: validated arrays, spectral decompositions,
Hermitian/PSD classification, pivoted Cholesky, and seeded random sampling.

A "matrix" throughout the package is a plain 2-D numpy array of float64 or
complex128 entries, validated and frozen by :func:`as_matrix`. Every function
here is pure and all returned arrays are read-only, so values can be shared
freely across threads. Sampling is a deterministic function of the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Matrix = np.ndarray

SCALAR_FIELDS = ("real", "complex")
SAMPLE_KINDS = (
    "gaussian",
    "psd_gram",
    "prescribed_spectrum",
    "rank1_psd",
    "orthogonal_projector",
)
SPECTRUM_KINDS = ("singular", "hermitian_eigen")


class DecompositionError(RuntimeError):
    """An eigenvalue or singular value routine failed to converge."""


class PreconditionError(ValueError):
    """An operation was invoked on input that violates its contract.

    The offending quantities (for example ``lambda_min`` or
    ``max_asymmetry``) are attached in :attr:`data`.
    """

    def __init__(self, message: str, **data):
        super().__init__(message)
        self.data = data


@dataclass(frozen=True)
class Tolerances:
    """Relative thresholds for spectral comparisons and PSD classification."""

    rel_spectral: float = 1e-10
    hermitian_asym: float = 1e-12
    psd_negativity: float = 1e-10

    def __post_init__(self):
        for name in ("rel_spectral", "hermitian_asym", "psd_negativity"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(entries) -> Matrix:
    """Validate array-like input as a dense matrix and freeze it.

    Returns a C-contiguous 2-D array of float64 or complex128 with positive
    dimensions and all entries finite. The result is marked read-only.
    """
    a = np.array(entries, order="C")
    if a.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {a.shape}")
    target = np.complex128 if np.iscomplexobj(a) else np.float64
    a = a.astype(target, copy=False)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must all be finite")
    a.setflags(write=False)
    return a


def scalar_field(a: Matrix) -> str:
    return "complex" if np.iscomplexobj(a) else "real"


@dataclass(frozen=True)
class Spectrum:
    """A descending sequence of singular values or Hermitian eigenvalues.

    ``kind`` is "singular" (values nonnegative, length min of the source
    dims) or "hermitian_eigen" (real values, length equal to the square
    source dimension).
    """

    values: np.ndarray
    kind: str
    source_dims: tuple[int, int]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("spectrum values must be a 1-D sequence")
        if self.kind not in SPECTRUM_KINDS:
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        m, n = self.source_dims
        expected = min(m, n) if self.kind == "singular" else m
        if self.kind == "hermitian_eigen" and m != n:
            raise ValueError("hermitian_eigen spectra require square source dims")
        if len(v) != expected:
            raise ValueError(
                f"spectrum length {len(v)} does not match source dims {self.source_dims}"
            )
        if np.any(np.diff(v) > 0):
            raise ValueError("spectrum values must be sorted non-increasing")
        if self.kind == "singular" and len(v) and v[-1] < 0:
            raise ValueError("singular values must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "source_dims", (int(m), int(n)))


def _require_2d(a, op: str) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"{op} requires a 2-D matrix, got shape {a.shape}")
    return a


def _require_square(a, op: str) -> np.ndarray:
    a = _require_2d(a, op)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{op} requires a square matrix, got shape {a.shape}")
    return a


def singular_values(a: Matrix) -> Spectrum:
    """Descending singular values via LAPACK, clamped at zero.

    Raises :class:`DecompositionError` if the iteration fails to converge.
    """
    a = _require_2d(a, "singular_values")
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD did not converge: {exc}") from exc
    return Spectrum(np.maximum(s, 0.0), "singular", a.shape)


def hermitian_asymmetry(a: Matrix) -> float:
    """max |A - A*| over all entries."""
    a = _require_square(a, "hermitian_asymmetry")
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: Matrix, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = _require_square(a, "is_hermitian")
    scale = max(1.0, float(np.max(np.abs(a))))
    return hermitian_asymmetry(a) <= tol.hermitian_asym * scale


def hermitian_eigenvalues(a: Matrix, tol: Tolerances = DEFAULT_TOL) -> Spectrum:
    """Descending real eigenvalues of a Hermitian matrix.

    Raises :class:`PreconditionError` (carrying ``max_asymmetry``) if the
    input is not Hermitian within ``tol.hermitian_asym``.
    """
    a = _require_square(a, "hermitian_eigenvalues")
    asym = hermitian_asymmetry(a)
    bound = tol.hermitian_asym * max(1.0, float(np.max(np.abs(a))))
    if asym > bound:
        raise PreconditionError(
            f"matrix is not Hermitian: max asymmetry {asym:.6e} exceeds {bound:.6e}",
            max_asymmetry=asym,
        )
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"eigendecomposition did not converge: {exc}") from exc
    return Spectrum(w[::-1].copy(), "hermitian_eigen", a.shape)


def is_psd(a: Matrix, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Hermitian with smallest eigenvalue above the relative negativity floor."""
    a = _require_square(a, "is_psd")
    if not is_hermitian(a, tol):
        return False
    w = np.linalg.eigvalsh(a)
    return bool(w[0] >= -tol.psd_negativity * max(1.0, float(w[-1])))


def two_norm(a: Matrix) -> float:
    """Largest singular value."""
    return float(singular_values(a).values[0])


def trace(a: Matrix):
    a = _require_square(a, "trace")
    t = np.trace(a)
    return complex(t) if np.iscomplexobj(a) else float(t)


def conj_transpose(a: Matrix) -> Matrix:
    return np.conj(np.asarray(a)).T


def matmul(a: Matrix, b: Matrix) -> Matrix:
    a = _require_2d(a, "matmul")
    b = _require_2d(b, "matmul")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch for matmul: {a.shape} @ {b.shape}")
    return a @ b


def pivoted_cholesky(
    a: Matrix, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray, int]:
    """Diagonally pivoted Cholesky factorization of a PSD matrix.

    Returns ``(L, perm, rank)`` with ``a[perm][:, perm] ~= L @ L*`` and ``L``
    of shape ``(n, rank)``. Pivoting always takes the largest remaining
    diagonal entry; the sweep stops once it drops below
    ``psd_negativity * trace(a) / n`` and raises :class:`DecompositionError`
    if it turns significantly negative (indefinite input).
    """
    a = _require_square(a, "pivoted_cholesky")
    n = a.shape[0]
    w = np.array(a, dtype=np.complex128 if np.iscomplexobj(a) else np.float64)
    perm = np.arange(n)
    total = max(float(np.trace(w).real), 0.0)
    threshold = tol.psd_negativity * total / n
    rank = n
    for i in range(n):
        d = np.real(np.diagonal(w))
        j = i + int(np.argmax(d[i:]))
        pivot = d[j]
        if pivot <= threshold:
            if pivot < -tol.psd_negativity * max(1.0, total):
                raise DecompositionError(
                    f"pivoted Cholesky breakdown: negative pivot {pivot:.6e}"
                )
            rank = i
            break
        if j != i:
            w[:, [i, j]] = w[:, [j, i]]
            w[[i, j], :] = w[[j, i], :]
            perm[[i, j]] = perm[[j, i]]
        w[i, i] = np.sqrt(pivot)
        w[i + 1 :, i] /= w[i, i]
        w[i + 1 :, i + 1 :] -= np.outer(w[i + 1 :, i], np.conj(w[i + 1 :, i]))
    L = np.tril(w)[:, :rank]
    return L, perm, rank


# ---------------------------------------------------------------------------
# Seeded sampling


@dataclass(frozen=True)
class SampleSpec:
    """Recipe for one deterministic random matrix draw."""

    kind: str
    dims: tuple[int, int]
    spectrum: tuple[float, ...] | None = None
    rank: int | None = None
    seed: int = 0
    scalar_field: str = "real"

    def __post_init__(self):
        if self.kind not in SAMPLE_KINDS:
            raise ValueError(f"unknown sample kind {self.kind!r}")
        if self.scalar_field not in SCALAR_FIELDS:
            raise ValueError(f"unknown scalar field {self.scalar_field!r}")
        m, n = self.dims
        if m < 1 or n < 1:
            raise ValueError(f"dims must be positive, got {self.dims}")
        if self.spectrum is not None:
            object.__setattr__(self, "spectrum", tuple(float(s) for s in self.spectrum))
        if self.kind == "prescribed_spectrum":
            s = self.spectrum
            if s is None or len(s) == 0:
                raise ValueError("prescribed_spectrum requires a nonempty spectrum")
            if len(s) > min(m, n):
                raise ValueError("spectrum longer than min(dims)")
            if any(x < 0 for x in s) or any(s[i] < s[i + 1] for i in range(len(s) - 1)):
                raise ValueError("spectrum must be nonnegative and sorted descending")
        if self.kind in ("rank1_psd", "orthogonal_projector") and m != n:
            raise ValueError(f"{self.kind} requires square dims, got {self.dims}")
        if self.kind == "orthogonal_projector":
            if self.rank is None or not 1 <= self.rank <= n:
                raise ValueError("orthogonal_projector requires 1 <= rank <= n")


def gaussian_matrix(rng: np.random.Generator, m: int, n: int, field: str = "real") -> np.ndarray:
    if field == "complex":
        return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    return rng.standard_normal((m, n))


def haar_unitary(rng: np.random.Generator, n: int, field: str = "real") -> np.ndarray:
    """Haar-distributed orthogonal/unitary matrix via QR with a sign-fixed R."""
    q, r = np.linalg.qr(gaussian_matrix(rng, n, n, field))
    d = np.diagonal(r)
    absd = np.abs(d)
    phase = np.where(absd == 0, 1.0, d / np.where(absd == 0, 1.0, absd))
    return q * phase


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def psd_gram_matrix(rng: np.random.Generator, m: int, n: int, field: str = "real") -> np.ndarray:
    x = gaussian_matrix(rng, m, n, field)
    return _hermitize(x.conj().T @ x / n)


def prescribed_spectrum_matrix(
    rng: np.random.Generator, m: int, n: int, sigma, field: str = "real"
) -> np.ndarray:
    k = min(m, n)
    s = np.zeros(k)
    sigma = np.asarray(sigma, dtype=np.float64)
    s[: len(sigma)] = sigma
    u = haar_unitary(rng, m, field)
    v = haar_unitary(rng, n, field)
    return (u[:, :k] * s) @ v[:, :k].conj().T


def rank1_psd_matrix(rng: np.random.Generator, n: int, field: str = "real") -> np.ndarray:
    v = gaussian_matrix(rng, n, 1, field)[:, 0]
    return np.outer(v, v.conj())


def projector_matrix(rng: np.random.Generator, n: int, r: int, field: str = "real") -> np.ndarray:
    q, _ = np.linalg.qr(gaussian_matrix(rng, n, r, field))
    return _hermitize(q @ q.conj().T)


def sample(spec: SampleSpec) -> Matrix:
    """Draw the matrix described by ``spec``; bit-identical for equal specs."""
    rng = np.random.default_rng(spec.seed)
    m, n = spec.dims
    field = spec.scalar_field
    if spec.kind == "gaussian":
        a = gaussian_matrix(rng, m, n, field)
    elif spec.kind == "psd_gram":
        a = psd_gram_matrix(rng, m, n, field)
    elif spec.kind == "prescribed_spectrum":
        a = prescribed_spectrum_matrix(rng, m, n, spec.spectrum, field)
    elif spec.kind == "rank1_psd":
        a = rank1_psd_matrix(rng, n, field)
    else:
        a = projector_matrix(rng, n, spec.rank, field)
    a.setflags(write=False)
    return a
