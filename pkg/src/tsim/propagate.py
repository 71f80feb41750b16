"""Time evolution exp(-i*H*t) applied to state vectors.

Small operators go through exact scaling-and-squaring exponentiation; larger
ones through a Lanczos Krylov projection with full reorthogonalization,
adaptive subspace growth, and time substepping.  Block-tagged operators have
a fast path that propagates each frozen-configuration block independently.

Repeated applications with the same (operator, duration) reuse a small cache
of dense stage propagators kept on the operator object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, expm

from .model import SparseHermitianOperator

_PROP_CACHE_MAX = 8


class PropagationError(RuntimeError):
    """Krylov iteration failed to reach the requested accuracy."""

    def __init__(self, message: str, *, subspace_dim: int, substeps: int,
                 residual: float):
        super().__init__(
            f"{message} (subspace_dim={subspace_dim}, substeps={substeps}, "
            f"residual={residual:.3e})"
        )
        self.subspace_dim = subspace_dim
        self.substeps = substeps
        self.residual = residual


@dataclass(frozen=True)
class PropagatorSettings:
    dense_threshold: int = 512
    krylov_tol: float = 1e-10
    krylov_max_dim: int = 48
    substep_cap: float = 16.0  # max |t| * ||H|| handled by one Krylov solve

    def __post_init__(self):
        if self.dense_threshold <= 0 or self.krylov_max_dim <= 0:
            raise ValueError("dimension settings must be positive")
        if self.substep_cap <= 0:
            raise ValueError("substep_cap must be positive")
        if self.krylov_tol < 1e-14:
            raise ValueError("krylov_tol below 1e-14 is not achievable")


DEFAULT_SETTINGS = PropagatorSettings()


@dataclass(frozen=True)
class ManyBodyState:
    """Normalized amplitude vector over the composite (tau, upsilon) basis."""

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        d_x, d_y = self.dims
        object.__setattr__(self, "dims", (int(d_x), int(d_y)))
        if amps.shape != (d_x * d_y,):
            raise ValueError(
                f"amplitude length {amps.shape} does not match dims {self.dims}"
            )

    @classmethod
    def normalized(cls, amplitudes, dims) -> "ManyBodyState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        nrm = np.linalg.norm(amps)
        if nrm == 0.0 or not np.isfinite(nrm):
            raise ValueError("amplitudes are not normalizable")
        return cls(amplitudes=amps / nrm, dims=tuple(dims))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def gamma(self) -> np.ndarray:
        """Coefficient matrix view: gamma[m, n] over (tau, upsilon) configs."""
        return self.amplitudes.reshape(self.dims)


def _dense_propagator(op: SparseHermitianOperator, t: float) -> np.ndarray:
    cache = op._prop_cache
    key = ("dense", t)
    if key not in cache:
        if len(cache) >= _PROP_CACHE_MAX:
            cache.pop(next(iter(cache)))
        cache[key] = expm(-1j * t * op.to_dense())
    return cache[key]


def _lanczos_expv(op: SparseHermitianOperator, v: np.ndarray, t: float,
                  tol: float, max_dim: int) -> tuple[np.ndarray, int, float]:
    """One Krylov solve: w ~= exp(-i*t*H) v, with v assumed unit norm.

    Returns (w, subspace size, residual estimate).  The residual combines the
    beta * |last component of exp(-i*t*T) e1| a posteriori bound with the
    norm of the change between successive approximants.
    """
    csr = op.to_csr()
    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    residual = np.inf
    prev_small = None
    for j in range(max_dim):
        w = csr @ basis[j]
        a = float(np.vdot(basis[j], w).real)
        alphas.append(a)
        w -= a * basis[j]
        if j > 0:
            w -= betas[j - 1] * basis[j - 1]
        # full reorthogonalization; subspaces are small
        for u in basis:
            w -= np.vdot(u, w) * u
        b = float(np.linalg.norm(w))
        evals, evecs = eigh_tridiagonal(np.array(alphas), np.array(betas))
        small = evecs @ (np.exp(-1j * t * evals) * evecs[0])
        if b < 1e-14 * max(1.0, abs(a)):
            # invariant subspace: the projected solution is exact
            return np.stack(basis, axis=1) @ small, j + 1, 0.0
        residual = abs(b * small[-1]) * max(1.0, abs(t))
        if prev_small is not None:
            # orthonormal columns: approximant change is computable in T-space
            change = float(np.linalg.norm(small[:-1] - prev_small)) + abs(small[-1])
            residual = max(residual, change)
            if residual < tol:
                return np.stack(basis, axis=1) @ small, j + 1, residual
        prev_small = small
        betas.append(b)
        basis.append(w / b)
    raise PropagationError(
        "Krylov subspace cap reached without convergence",
        subspace_dim=max_dim, substeps=1, residual=residual,
    )


def _krylov_apply(op: SparseHermitianOperator, amps: np.ndarray, t: float,
                  settings: PropagatorSettings) -> np.ndarray:
    scale = abs(t) * op.norm_bound()
    steps = max(1, int(np.ceil(scale / settings.substep_cap)))
    tol = settings.krylov_tol / (2 * steps)
    out = amps
    for _ in range(steps):
        nrm = np.linalg.norm(out)
        w, _, _ = _lanczos_expv(op, out / nrm, t / steps, tol,
                                settings.krylov_max_dim)
        out = nrm * w
    return out


def _apply_flat(op: SparseHermitianOperator, amps: np.ndarray, t: float,
                settings: PropagatorSettings) -> np.ndarray:
    if t == 0.0:
        return amps.copy()
    if op.dim <= settings.dense_threshold:
        return _dense_propagator(op, t) @ amps
    return _krylov_apply(op, amps, t, settings)


def evolve(state: ManyBodyState, op: SparseHermitianOperator, t: float,
           settings: PropagatorSettings = DEFAULT_SETTINGS) -> ManyBodyState:
    """exp(-i*op*t) applied to ``state``; negative t reverses the evolution."""
    if op.dim != state.amplitudes.shape[0]:
        raise ValueError(
            f"operator dim {op.dim} does not match state length "
            f"{state.amplitudes.shape[0]}"
        )
    if t == 0.0:
        return ManyBodyState(state.amplitudes.copy(), state.dims)
    out = _apply_flat(op, state.amplitudes, t, settings)
    out /= np.linalg.norm(out)
    return ManyBodyState(out, state.dims)


def _block_propagators(op: SparseHermitianOperator, t: float):
    """Dense per-block stage propagators, cached on the operator."""
    cache = op._prop_cache
    key = ("blocks", t)
    if key not in cache:
        if len(cache) >= _PROP_CACHE_MAX:
            cache.pop(next(iter(cache)))
        cache[key] = [expm(-1j * t * op.extract_block(b)) for b in op.blocks]
    return cache[key]


def evolve_blockwise(state: ManyBodyState, op: SparseHermitianOperator, t: float,
                     settings: PropagatorSettings = DEFAULT_SETTINGS) -> ManyBodyState:
    """Blockwise exp(-i*op*t): each frozen-configuration block evolves
    independently.  Identical to :func:`evolve` with the flat operator up to
    the Krylov tolerance."""
    if op.blocks is None:
        raise ValueError("operator carries no block tags")
    if op.dim != state.amplitudes.shape[0]:
        raise ValueError(
            f"operator dim {op.dim} does not match state length "
            f"{state.amplitudes.shape[0]}"
        )
    if t == 0.0:
        return ManyBodyState(state.amplitudes.copy(), state.dims)
    out = state.amplitudes.copy()
    block_dim = max(b.count for b in op.blocks)
    if block_dim <= settings.dense_threshold:
        props = _block_propagators(op, t)
        for b, u in zip(op.blocks, props):
            idx = b.indices()
            sub = out[idx]
            if np.any(sub):
                out[idx] = u @ sub
    else:
        for b in op.blocks:
            idx = b.indices()
            sub = out[idx]
            if not np.any(sub):
                continue
            sub_op = SparseHermitianOperator.from_entries(
                b.count, *_local_entries(op, b)
            )
            out[idx] = _krylov_apply(sub_op, sub, t, settings)
    out /= np.linalg.norm(out)
    return ManyBodyState(out, state.dims)


def _local_entries(op: SparseHermitianOperator, b):
    inside = np.zeros(op.dim, dtype=bool)
    local = np.zeros(op.dim, dtype=np.int64)
    idx = b.indices()
    inside[idx] = True
    local[idx] = np.arange(b.count)
    sel = inside[op.rows] & inside[op.cols]
    return local[op.rows[sel]], local[op.cols[sel]], op.vals[sel]
