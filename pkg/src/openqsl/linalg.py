"""Dense complex matrix kernels.

Everything here accepts plain numpy arrays. Functions that make sense on a
stack of matrices (singular values, Schatten norms, spread norm) broadcast over
leading axes, which is how trajectories store their per-time operators.
"""

import numpy as np

from .errors import ContractViolation, DomainError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-9


def as_matrix(a):
    """Return `a` as a finite 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ContractViolation(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return m


def _require_square(m):
    if m.shape[-1] != m.shape[-2]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")


def hermitian_defect(a):
    m = np.asarray(a)
    return float(np.max(np.abs(m - np.swapaxes(m, -1, -2).conj()), initial=0.0))


def density_matrix(rho):
    """Validate a density matrix and return its re-symmetrised copy.

    Raises ContractViolation if `rho` is not Hermitian within 1e-10, not unit
    trace within 1e-9 or has an eigenvalue below -1e-9.
    """
    m = as_matrix(rho)
    _require_square(m)
    if hermitian_defect(m) > HERMITIAN_TOL:
        raise ContractViolation(f"density matrix not Hermitian (defect {hermitian_defect(m):.3g})")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractViolation(f"density matrix trace {tr:.12g} != 1")
    lo = np.linalg.eigvalsh(m)[0]
    if lo < -PSD_TOL:
        raise ContractViolation(f"density matrix not positive semidefinite (min eigenvalue {lo:.3g})")
    return m


def hermitian_eigensystem(a):
    """Eigenvalues in descending order and the matching unitary eigenvector matrix."""
    m = as_matrix(a)
    _require_square(m)
    if hermitian_defect(m) > HERMITIAN_TOL:
        raise ContractViolation("hermitian_eigensystem needs a Hermitian matrix")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(rho):
    """Square root of a positive semidefinite matrix.

    Eigenvalues at round-off level (including small negatives) are set to 0;
    otherwise a 1e-16 eigenvalue would leak in as a 1e-8 square root.
    """
    w, v = hermitian_eigensystem(rho)
    floor = w.size * np.finfo(float).eps * max(abs(w[0]), abs(w[-1]))
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def singular_values(a):
    """Descending singular values; works on a single matrix or a stack."""
    m = np.asarray(a, dtype=complex)
    if m.ndim < 2:
        raise ContractViolation(f"expected matrix input, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return np.linalg.svd(m, compute_uv=False)


def schatten_norm(a, p):
    """Schatten p-norm. ``p="op"`` (or ``np.inf``) gives the largest singular value."""
    if isinstance(p, str):
        if p != "op":
            raise DomainError(f"unknown norm selector {p!r}")
        p = np.inf
    if not p >= 1:
        raise DomainError(f"Schatten norm needs p >= 1, got {p}")
    s = singular_values(a)
    if np.isinf(p):
        return s[..., 0]
    if p == 1:
        return s.sum(axis=-1)
    return np.sum(s**p, axis=-1) ** (1.0 / p)


def operator_norm(a):
    return schatten_norm(a, "op")


def trace_norm(a):
    return schatten_norm(a, 1)


def hs_norm(a):
    return schatten_norm(a, 2)


NORM_FLAVORS = {"op": operator_norm, "tr": trace_norm, "hs": hs_norm}


def spread_norm(a):
    """Largest minus smallest singular value, zeros included for rank-deficient input."""
    m = np.asarray(a)
    if m.ndim < 2:
        raise ContractViolation(f"expected matrix input, got shape {m.shape}")
    _require_square(m)
    s = singular_values(m)
    return s[..., 0] - s[..., -1]


def hamiltonian_spread(h):
    """Spread norm of a Hermitian operator after shifting its ground energy to zero."""
    w = np.linalg.eigvalsh(as_matrix(h))
    return spread_norm(np.diag(w - w[0]))


def commutator(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-2:] != b.shape[-2:]:
        raise ContractViolation(f"commutator dimension mismatch {a.shape} vs {b.shape}")
    _require_square(a)
    return a @ b - b @ a


def partial_trace_env(rho_total, sys_dim, env_dim):
    """Trace out the environment of a system (slow index) x environment state."""
    m = as_matrix(rho_total)
    if m.shape != (sys_dim * env_dim, sys_dim * env_dim):
        raise ContractViolation(
            f"state of shape {m.shape} does not factor as {sys_dim} x {env_dim}"
        )
    return np.trace(m.reshape(sys_dim, env_dim, sys_dim, env_dim), axis1=1, axis2=3)


# random ensembles, used by the inequality campaign and the test-suite


def random_complex(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_hermitian(rng, dim):
    g = random_complex(rng, dim)
    return 0.5 * (g + g.conj().T)


def random_psd(rng, dim, rank=None):
    g = random_complex(rng, dim, dim if rank is None else rank)
    return g @ g.conj().T


def random_density_matrix(rng, dim, rank=None):
    w = random_psd(rng, dim, rank)
    w = 0.5 * (w + w.conj().T)
    return w / np.trace(w).real


def random_pure_state(rng, dim):
    psi = random_complex(rng, dim, 1)[:, 0]
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
