"""Dense PSD matrix storage, the access-counted entry oracle, seeded
randomness, and synthetic instance generators.

Everything downstream reads matrix entries only through :class:`PsdOracle`,
which counts distinct symmetric entry pairs. Generators are deterministic
functions of (parameters, seed).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class NotPsdError(ValidationError):
    """Raised when a matrix required to be PSD has a significantly negative
    eigenvalue."""


class SingularMatrixError(ValidationError):
    """Raised when a system that must be nonsingular is singular."""


class NumericalError(RuntimeError):
    """Raised when a randomized routine stays degenerate after retries."""


# ---------------------------------------------------------------------------
# Seeded randomness
# ---------------------------------------------------------------------------

def substream(seed: int, label: str) -> np.random.Generator:
    """Return a counter-based generator for an independent named stream.

    The (seed, label) pair is hashed into a Philox key, so distinct labels
    give statistically independent streams and identical pairs reproduce
    bit-identical draws on any platform.
    """
    import hashlib

    digest = hashlib.blake2b(
        f"{seed:#x}:{label}".encode(), digest_size=16
    ).digest()
    key = np.frombuffer(digest, dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def inverse_cdf_sample(p: np.ndarray, t: int, gen: np.random.Generator) -> np.ndarray:
    """Draw ``t`` indices i.i.d. from the distribution ``p`` by inverting the
    cumulative distribution with binary search."""
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    u = gen.random(t)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


# ---------------------------------------------------------------------------
# Matrix and oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PsdMatrix:
    """A symmetric n x n matrix of float64, stored dense row-major.

    Symmetry is exact: construction mirrors the upper triangle, so
    ``values[i, j] == values[j, i]`` bit-for-bit. Positive semidefiniteness
    of generated instances is a test-time check, not a construction check.
    """

    values: np.ndarray

    def __post_init__(self):
        a = self.values
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"matrix must be square, got shape {a.shape}")
        if not np.isfinite(a).all():
            raise ValidationError("matrix entries must be finite")

    @staticmethod
    def from_dense(values: np.ndarray) -> "PsdMatrix":
        """Build from a nearly-symmetric dense array, symmetrizing exactly by
        mirroring the upper triangle."""
        a = np.array(values, dtype=np.float64, order="C")
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"matrix must be square, got shape {a.shape}")
        upper = np.triu(a)
        sym = upper + upper.T - np.diag(np.diag(a))
        return PsdMatrix(np.ascontiguousarray(sym))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def oracle(self) -> "PsdOracle":
        return PsdOracle(self)


class PsdOracle:
    """Entry-access gateway to a :class:`PsdMatrix`.

    All algorithmic reads go through the read methods below, which mark the
    canonical (min(i,j), max(i,j)) pair as seen. ``access_count`` is the
    number of distinct symmetric pairs read so far; re-reading a cached pair
    is free. The counter is guarded by a lock so concurrent runs sharing one
    oracle keep an exact count.
    """

    def __init__(self, matrix: PsdMatrix):
        self.matrix = matrix
        n = matrix.n
        self._seen = np.zeros((n, n), dtype=bool)
        self._count = 0
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def access_count(self) -> int:
        return self._count

    def accessed_pairs(self) -> np.ndarray:
        """Canonical (i, j) pairs read so far, i <= j, as an (m, 2) array."""
        return np.argwhere(self._seen)

    def _mark(self, rows: np.ndarray, cols: np.ndarray) -> None:
        lo = np.minimum(rows, cols)
        hi = np.maximum(rows, cols)
        with self._lock:
            fresh = ~self._seen[lo, hi]
            self._count += int(np.count_nonzero(fresh))
            self._seen[lo, hi] = True

    def entry(self, i: int, j: int) -> float:
        """Read a single entry A[i, j]."""
        n = self.n
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"entry ({i}, {j}) out of range for n={n}")
        self._mark(np.array([i]), np.array([j]))
        return float(self.matrix.values[i, j])

    def diagonal(self) -> np.ndarray:
        """Read the full diagonal (n distinct pairs)."""
        idx = np.arange(self.n)
        self._mark(idx, idx)
        return self.matrix.values[idx, idx].copy()

    def columns(self, cols: np.ndarray) -> np.ndarray:
        """Read full columns, returning an (n, len(cols)) block.

        Duplicate column indices are served from cache and counted once.
        """
        cols = np.asarray(cols, dtype=np.int64)
        uniq = np.unique(cols)
        rows = np.arange(self.n)
        rr, cc = np.meshgrid(rows, uniq, indexing="ij")
        self._mark(rr.ravel(), cc.ravel())
        return self.matrix.values[:, cols].copy()

    def submatrix(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Read the block A[rows, :][:, cols]; duplicates counted once."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        ur, uc = np.unique(rows), np.unique(cols)
        rr, cc = np.meshgrid(ur, uc, indexing="ij")
        self._mark(rr.ravel(), cc.ravel())
        return self.matrix.values[np.ix_(rows, cols)].copy()

    def rows(self, rows: np.ndarray) -> np.ndarray:
        """Read full rows, returning a (len(rows), n) block."""
        return self.submatrix(rows, np.arange(self.n))

    def pairs(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Read scattered entries A[rows[j], cols[j]] elementwise."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        self._mark(rows, cols)
        return self.matrix.values[rows, cols].copy()

    def full(self) -> np.ndarray:
        """Dense read of the whole matrix: exactly n(n+1)/2 distinct pairs."""
        n = self.n
        rr, cc = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        self._mark(rr.ravel(), cc.ravel())
        return self.matrix.values.copy()


def entry(oracle: PsdOracle, i: int, j: int) -> float:
    """Read one entry through the oracle (counted)."""
    return oracle.entry(i, j)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def random_orthonormal(n: int, gen: np.random.Generator) -> np.ndarray:
    """Rotation-invariant random orthonormal basis via QR of a Gaussian draw.

    Signs are fixed so the factorization is unique, keeping the output a
    deterministic function of the generator state.
    """
    g = gen.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    q *= np.sign(np.where(np.diag(r) == 0.0, 1.0, np.diag(r)))
    return q


def gen_spectrum_psd(n: int, eigenvalues, seed: int) -> PsdMatrix:
    """PSD matrix with a prescribed spectrum in a seeded random basis.

    Returns U diag(lam) U^T for a random orthonormal U; the output spectrum
    matches ``eigenvalues`` to 1e-8 relative accuracy.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if lam.shape != (n,):
        raise ValidationError(f"need {n} eigenvalues, got {lam.shape}")
    if (lam < 0).any():
        raise ValidationError("eigenvalues must be nonnegative")
    u = random_orthonormal(n, substream(seed, "spectrum-basis"))
    a = (u * lam) @ u.T
    return PsdMatrix.from_dense(a)


def gen_powerlaw_psd(n: int, seed: int, decay: float = 1.0) -> PsdMatrix:
    """Power-law spectrum lambda_i = i^(-decay) in a random basis."""
    lam = np.arange(1, n + 1, dtype=np.float64) ** (-decay)
    return gen_spectrum_psd(n, lam, seed)


def gen_identity(n: int) -> PsdMatrix:
    return PsdMatrix(np.eye(n))


@dataclass(frozen=True)
class HardInstanceSpec:
    """Parameters for the planted-block distributions.

    variant "mu": one planted all-ones block of size round(sqrt(16*eps*n))
    on a random subset, identity diagonal. variant "nu": the identity.
    variant "gamma": fair coin between mu and nu. variant "gamma_b": a
    random half of the indices is split into k sub-blocks of size n/(2k),
    each independently a mu or nu draw.
    """

    n: int
    k: int
    eps: float
    variant: str
    seed: int

    def __post_init__(self):
        if self.variant not in ("mu", "nu", "gamma", "gamma_b"):
            raise ValidationError(f"unknown variant {self.variant!r}")
        if self.variant == "gamma_b":
            if 2 * self.n * self.k / self.eps > self.n**2:
                raise ValidationError("need 2nk/eps <= n^2 for gamma_b")
            if self.n % (2 * self.k) != 0:
                raise ValidationError("n/(2k) must be an integer for gamma_b")
        elif self.variant in ("mu", "gamma"):
            m = self.n
            if m / self.eps > m**2:
                raise ValidationError("need m/eps <= m^2")
            if 16.0 * self.eps > m:
                raise ValidationError("need 16*eps <= m so the planted set fits")


def planted_subset_size(m: int, eps: float) -> int:
    """Planted all-ones set size: sqrt(16*eps*m) rounded to the nearest
    integer and clamped into [2, m]."""
    return int(min(m, max(2, round(np.sqrt(16.0 * eps * m)))))


@dataclass
class PlantedBlock:
    """One sub-block of a hard instance: its index set and, when the block
    carries a planted all-ones set, those indices (None for identity draws)."""

    indices: np.ndarray
    planted: np.ndarray | None


def _draw_mu_block(indices: np.ndarray, eps: float, gen: np.random.Generator,
                   out: np.ndarray) -> np.ndarray:
    m = len(indices)
    s = planted_subset_size(m, eps)
    chosen = np.sort(gen.choice(m, size=s, replace=False))
    planted = indices[chosen]
    out[np.ix_(planted, planted)] = 1.0
    return planted


def gen_hard_instance(spec: HardInstanceSpec) -> tuple[PsdMatrix, list[PlantedBlock]]:
    """Draw a planted-block matrix and return it with the ground truth.

    All diagonal entries are 1. Every matrix in the support is PSD: after a
    permutation it is block diagonal with all-ones blocks and an identity.
    """
    gen = substream(spec.seed, f"hard-{spec.variant}")
    n = spec.n
    a = np.eye(n)
    blocks: list[PlantedBlock] = []

    if spec.variant == "nu":
        blocks.append(PlantedBlock(np.arange(n), None))
    elif spec.variant == "mu":
        planted = _draw_mu_block(np.arange(n), spec.eps, gen, a)
        blocks.append(PlantedBlock(np.arange(n), planted))
    elif spec.variant == "gamma":
        if gen.random() < 0.5:
            planted = _draw_mu_block(np.arange(n), spec.eps, gen, a)
            blocks.append(PlantedBlock(np.arange(n), planted))
        else:
            blocks.append(PlantedBlock(np.arange(n), None))
    else:  # gamma_b
        half = gen.choice(n, size=n // 2, replace=False)
        half = gen.permutation(half)
        m = n // (2 * spec.k)
        for ell in range(spec.k):
            idx = np.sort(half[ell * m:(ell + 1) * m])
            if gen.random() < 0.5:
                planted = _draw_mu_block(idx, spec.eps, gen, a)
                blocks.append(PlantedBlock(idx, planted))
            else:
                blocks.append(PlantedBlock(idx, None))

    return PsdMatrix.from_dense(a), blocks


def hard_instance_best_rank_k_tail(spec: HardInstanceSpec,
                                   blocks: list[PlantedBlock]) -> float:
    """Closed-form optimal rank-k Frobenius tail for a gamma_b draw.

    The spectrum is: one eigenvalue s per planted block, eigenvalue 1 with
    multiplicity n - (total planted), and zeros. The best rank-k
    approximation takes the b planted eigenvalues plus k - b unit
    eigenvalues, so the tail is n - sum(s_l) - max(0, k - b).
    """
    sizes = [len(b.planted) for b in blocks if b.planted is not None]
    b = len(sizes)
    return float(spec.n - sum(sizes) - max(0, spec.k - b))


def gen_counterexample_pair(n: int, k: int, eps: float, alpha: float,
                            beta: float) -> tuple[PsdMatrix, np.ndarray]:
    """Build a diagonal matrix paired with a rank-k matrix that approximates
    its square root well but spans a poor approximation of the matrix itself.

    A is diagonal with k entries alpha^2, one zero, and beta^2 elsewhere;
    B is zero except B[i,i] = alpha for i < k and
    B[0, k+1] = sqrt(eps*(n-k-1))*beta. Requires alpha > beta > 0 and
    n >= k + 2. The returned B satisfies
    ||sqrt(A) - B||_F^2 = (1 + eps) * (n - k - 1) * beta^2 exactly while any
    matrix in B's rowspan approximates A itself poorly.
    """
    if not (alpha > beta > 0):
        raise ValidationError("need alpha > beta > 0")
    if n < k + 2:
        raise ValidationError("need n >= k + 2")
    diag = np.full(n, beta**2)
    diag[:k] = alpha**2
    diag[k] = 0.0
    a = PsdMatrix(np.diag(diag))

    b = np.zeros((n, n))
    for i in range(k):
        b[i, i] = alpha
    b[0, k + 1] = np.sqrt(eps * (n - k - 1)) * beta
    return a, b


def check_diagonal_domination(matrix: PsdMatrix, tol: float = 1e-9) -> bool:
    """PSD entry bound: |A[i,j]| <= max(A[i,i], A[j,j]) + tol for all i, j."""
    a = matrix.values
    d = np.diag(a)
    cap = np.maximum.outer(d, d)
    return bool((np.abs(a) <= cap + tol).all())
