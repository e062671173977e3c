"""Dense quaternion matrix algebra.

A quaternion matrix is stored as a (rows, cols, 4) float64 array with
components in (w, x, y, z) order. Products and Hermitian transposes are
evaluated directly in the quaternion domain (through the kernel backends),
while solves and eigendecompositions go through the complex adjoint
representation: writing each entry q = alpha + beta*j with alpha = w + x*i
and beta = y + z*i, the 2M x 2N complex block matrix

    [[ alpha,        beta      ],
     [ -conj(beta),  conj(alpha) ]]

is a faithful multiplicative image of the quaternion matrix, so complex
LAPACK routines can do the heavy lifting. Eigenvalues of the adjoint of a
Hermitian quaternion matrix come in duplicated pairs; one representative per
pair is kept and its eigenvector is mapped back to a quaternion right
eigenvector (convention R u = u lambda, lambda real).
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .quaternion import Quaternion

HERMITIAN_TOL = 1e-12
ADJOINT_SYMMETRY_TOL = 1e-8
EIG_PAIR_GAP_RTOL = 1e-8
COND_LIMIT = 1e12


class StructureError(RuntimeError):
    """The symplectic block structure of an adjoint matrix is broken.

    Raised when a complex matrix claimed to represent a quaternion matrix
    fails the block symmetry check, or when adjoint eigenvalues cannot be
    split into duplicated pairs. Either condition signals a backend bug or a
    corrupted input, not a data-dependent failure.
    """


class IllConditionedError(RuntimeError):
    """A Hermitian solve was refused because the matrix is near singular."""


class QMatrix:
    """Dense quaternion matrix with value semantics.

    The backing array is copied on construction and marked read-only;
    operations return new instances.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError("expected an array of shape (rows, cols, 4)")
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n), 0] = 1.0
        return cls(data)

    @classmethod
    def from_quaternions(cls, rows) -> "QMatrix":
        data = [[q.to_tuple() for q in row] for row in rows]
        return cls(np.array(data, dtype=np.float64))

    @classmethod
    def column(cls, quaternions) -> "QMatrix":
        return cls.from_quaternions([[q] for q in quaternions])

    @classmethod
    def from_real(cls, real_matrix) -> "QMatrix":
        real_matrix = np.asarray(real_matrix, dtype=np.float64)
        data = np.zeros(real_matrix.shape + (4,))
        data[..., 0] = real_matrix
        return cls(data)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, r: int, c: int) -> Quaternion:
        return Quaternion(*self._data[r, c])

    def __getitem__(self, index) -> Quaternion:
        r, c = index
        return self.entry(r, c)

    def __matmul__(self, other) -> "QMatrix":
        return qmatmul(self, other)

    def __add__(self, other) -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self._data + other._data)

    def __sub__(self, other) -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self._data - other._data)

    def __mul__(self, scalar) -> "QMatrix":
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return QMatrix(self._data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self._data)

    def hermitian(self) -> "QMatrix":
        return hermitian_transpose(self)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self._data))

    def max_abs(self) -> float:
        norms = np.sqrt((self._data**2).sum(axis=2))
        return float(norms.max()) if norms.size else 0.0

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        if self.rows != self.cols:
            return False
        diff = self._data - hermitian_transpose(self)._data
        scale = max(1.0, self.max_abs())
        return bool(np.abs(diff).max() <= tol * scale)

    def allclose(self, other: "QMatrix", tol: float = 1e-12) -> bool:
        if self.shape != other.shape:
            return False
        scale = max(1.0, self.max_abs(), other.max_abs())
        return bool(np.abs(self._data - other._data).max() <= tol * scale)

    def __repr__(self) -> str:
        return f"QMatrix(shape={self.shape})"


def qmatmul(a: QMatrix, b: QMatrix) -> QMatrix:
    """Quaternion matrix product; factor order is preserved entrywise."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return QMatrix(_kernels.qmm4(a.data, b.data))


def hermitian_transpose(a: QMatrix) -> QMatrix:
    """Conjugate transpose: entry (r, c) becomes conj(entry(c, r))."""
    out = a.data.transpose(1, 0, 2).copy()
    out[..., 1:] = -out[..., 1:]
    return QMatrix(out)


def adjoint_complex(a: QMatrix) -> np.ndarray:
    """Complex adjoint representation of shape (2*rows, 2*cols).

    Multiplicative: adjoint(A @ B) == adjoint(A) @ adjoint(B), and the
    adjoint of a Hermitian quaternion matrix is complex Hermitian.
    """
    d = a.data
    alpha = d[..., 0] + 1j * d[..., 1]
    beta = d[..., 2] + 1j * d[..., 3]
    return np.block([[alpha, beta], [-beta.conj(), alpha.conj()]])


def _blocks(c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    rows2, cols2 = c.shape
    m, n = rows2 // 2, cols2 // 2
    return c[:m, :n], c[:m, n:], c[m:, :n], c[m:, n:]


def _project_adjoint(c: np.ndarray) -> QMatrix:
    # Orthogonal projection onto the image of adjoint_complex; averages the
    # two redundant copies of each quaternion entry.
    a11, a12, a21, a22 = _blocks(c)
    alpha = 0.5 * (a11 + a22.conj())
    beta = 0.5 * (a12 - a21.conj())
    data = np.stack([alpha.real, alpha.imag, beta.real, beta.imag], axis=-1)
    return QMatrix(data)


def from_adjoint(c: np.ndarray, tol: float = ADJOINT_SYMMETRY_TOL) -> QMatrix:
    """Invert :func:`adjoint_complex`, checking the block symmetry first.

    Raises :class:`StructureError` when the input does not carry the
    symplectic symmetry within ``tol`` (relative to the matrix magnitude).
    """
    c = np.asarray(c, dtype=np.complex128)
    if c.ndim != 2 or c.shape[0] % 2 or c.shape[1] % 2:
        raise ValueError("adjoint matrices have even dimensions")
    a11, a12, a21, a22 = _blocks(c)
    scale = max(1.0, float(np.abs(c).max()) if c.size else 0.0)
    violation = 0.0
    if c.size:
        violation = max(
            float(np.abs(a22 - a11.conj()).max()),
            float(np.abs(a21 + a12.conj()).max()),
        )
    if violation > tol * scale:
        raise StructureError(
            f"adjoint block symmetry violated (residual {violation:.3e}, "
            f"tolerance {tol * scale:.3e})"
        )
    return _project_adjoint(c)


def _require_hermitian(r: QMatrix, tol: float = 1e-10) -> None:
    if r.rows != r.cols:
        raise ValueError(f"expected a square matrix, got {r.shape}")
    if not r.is_hermitian(tol):
        raise ValueError("matrix is not Hermitian within tolerance")


def qsolve_hermitian(r: QMatrix, b: QMatrix, cond_limit: float = COND_LIMIT) -> QMatrix:
    """Solve R x = b for Hermitian R through the adjoint representation.

    Raises :class:`IllConditionedError` when the condition estimate exceeds
    ``cond_limit``; adding diagonal loading to R is the usual remedy.
    """
    _require_hermitian(r)
    if b.rows != r.rows:
        raise ValueError(f"shape mismatch: R is {r.shape}, b is {b.shape}")
    h = adjoint_complex(r)
    h = 0.5 * (h + h.conj().T)
    eigvals = np.linalg.eigvalsh(h)
    small = float(np.abs(eigvals).min())
    large = float(np.abs(eigvals).max())
    cond = np.inf if small == 0.0 else large / small
    if cond > cond_limit:
        raise IllConditionedError(
            f"condition estimate {cond:.3e} exceeds {cond_limit:.1e}; "
            "apply diagonal loading before solving"
        )
    x = np.linalg.solve(h, adjoint_complex(b))
    return _project_adjoint(x)


class EigenDecomposition:
    """Eigenvalues (real, ascending) and unit right eigenvectors (columns)."""

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: QMatrix):
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        self.eigenvectors = eigenvectors

    def __repr__(self) -> str:
        return f"EigenDecomposition(eigenvalues={self.eigenvalues!r})"


def _symplectic_partner(w: np.ndarray) -> np.ndarray:
    m = w.shape[0] // 2
    return np.concatenate([-w[m:].conj(), w[:m].conj()])


def _quaternion_column(w: np.ndarray) -> np.ndarray:
    # Column [u; v] of the adjoint corresponds to the quaternion vector
    # u - conj(v) * j, entrywise.
    m = w.shape[0] // 2
    u, v = w[:m], w[m:]
    col = np.empty((m, 4))
    col[:, 0] = u.real
    col[:, 1] = u.imag
    col[:, 2] = -v.real
    col[:, 3] = v.imag
    return col


def qeig_hermitian(r: QMatrix, pair_gap_rtol: float = EIG_PAIR_GAP_RTOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian quaternion matrix.

    The adjoint (2M x 2M complex Hermitian) is decomposed with LAPACK; its
    spectrum is the quaternion spectrum with every eigenvalue duplicated.
    Eigenvalues are grouped into clusters by sorted adjacency (gap below
    ``pair_gap_rtol`` relative to the spectral radius); each cluster spans a
    symplectically closed subspace from which one quaternion eigenvector per
    eigenvalue pair is extracted. Odd-sized clusters raise
    :class:`StructureError`.
    """
    _require_hermitian(r)
    m = r.rows
    h = adjoint_complex(r)
    h = 0.5 * (h + h.conj().T)
    lam, vecs = np.linalg.eigh(h)

    # Cluster tolerance is relative to the eigenvalue magnitudes involved,
    # with an absolute floor (relative to the spectral radius) so that the
    # rounding jitter of genuinely zero or duplicated eigenvalues clusters,
    # while small-but-real eigenvalues stay separate from the zero block.
    scale = max(float(np.abs(lam).max()), np.finfo(np.float64).tiny)
    abs_floor = 1e-12 * scale

    clusters: list[list[int]] = [[0]]
    for idx in range(1, 2 * m):
        gap_tol = pair_gap_rtol * max(abs(lam[idx]), abs(lam[idx - 1])) + abs_floor
        if lam[idx] - lam[idx - 1] <= gap_tol:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])

    out_vals = np.empty(m)
    out_vecs = np.empty((m, m, 4))
    pos = 0
    for cluster in clusters:
        if len(cluster) % 2:
            raise StructureError(
                f"eigenvalue cluster of odd size {len(cluster)} near "
                f"{lam[cluster[0]]:.6e}; cannot split into symplectic pairs"
            )
        basis = vecs[:, cluster]
        cluster_vals = lam[cluster]
        for t in range(len(cluster) // 2):
            w = basis[:, 0]
            w = w / np.linalg.norm(w)
            jw = _symplectic_partner(w)
            # jw is exactly orthogonal to w and lies in the cluster subspace
            # up to rounding; project for hygiene before deflating.
            jw = basis @ (basis.conj().T @ jw)
            jw = jw / np.linalg.norm(jw)
            out_vals[pos] = 0.5 * (cluster_vals[2 * t] + cluster_vals[2 * t + 1])
            col = _quaternion_column(w)
            col /= np.linalg.norm(col)
            out_vecs[:, pos, :] = col
            pos += 1
            if 2 * (t + 1) == len(cluster):
                break
            rem = basis - np.outer(w, w.conj() @ basis) - np.outer(jw, jw.conj() @ basis)
            # Orthonormal basis of what is left of the cluster subspace.
            u_svd, s_svd, _ = np.linalg.svd(rem, full_matrices=False)
            basis = u_svd[:, : len(cluster) - 2 * (t + 1)]
            if s_svd[len(cluster) - 2 * (t + 1) - 1] < 0.1:
                raise StructureError("cluster deflation lost rank; pairing failed")
    return EigenDecomposition(out_vals, QMatrix(out_vecs))


def noise_subspace(eig: EigenDecomposition, noise_dim: int) -> QMatrix:
    """Columns spanning the eigenspace of the ``noise_dim`` smallest eigenvalues."""
    m = eig.eigenvectors.rows
    if not 1 <= noise_dim <= m:
        raise ValueError(f"noise dimension {noise_dim} out of range 1..{m}")
    return QMatrix(eig.eigenvectors.data[:, :noise_dim, :])
