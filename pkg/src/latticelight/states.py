"""Initial states of the light field in the two representations used by the
propagation engines: truncated Fock amplitude vectors and exact field moments.

The Fock basis keeps every occupation vector with total photon number up to
``max_total``, grouped by total.  Truncated states record the probability
mass they discarded (``tail_mass``) and are renormalized, so every state has
unit norm while the truncation error stays visible to callers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TruncationWarning",
    "FockBasis",
    "FockState",
    "MomentSet",
    "build_fock",
    "build_coherent",
    "build_path_entangled",
    "build_tmsv",
    "moments_of",
    "analytic_moments_tmsv",
]


class TruncationWarning(UserWarning):
    """A truncated state discarded more probability than the configured bound."""


class FockBasis:
    """Occupation-number basis with bounded total photon number.

    Basis vectors are grouped by total photon number (ascending).  Within a
    total, occupation vectors are ordered with photons pushed to the lowest
    mode indices first, e.g. for two modes and total 2: (2,0), (1,1), (0,2).
    With that ordering the one-photon sector runs through the modes in
    order, so its Hamiltonian block coincides with the coupling matrix.
    """

    def __init__(self, num_modes: int, max_total: int):
        if num_modes < 1:
            raise ValueError("need at least one mode")
        if max_total < 0:
            raise ValueError("max_total must be non-negative")
        self.num_modes = int(num_modes)
        self.max_total = int(max_total)
        states: list[tuple[int, ...]] = []
        self._sector_bounds: list[tuple[int, int]] = []
        for total in range(max_total + 1):
            start = len(states)
            states.extend(_compositions(total, num_modes))
            self._sector_bounds.append((start, len(states)))
        self.occupations = np.array(states, dtype=np.int64)
        self.occupations.setflags(write=False)
        self._index = {occ: i for i, occ in enumerate(states)}
        self._lowering_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    @property
    def size(self) -> int:
        return self.occupations.shape[0]

    def index_of(self, occupation) -> int:
        """Position of an occupation vector in the basis."""
        key = tuple(int(n) for n in occupation)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(f"occupation {key} is not in the basis") from None

    def sector(self, total: int) -> tuple[int, int]:
        """Index range [start, stop) of the fixed-total-photon sector."""
        if not 0 <= total <= self.max_total:
            raise ValueError(f"no sector with {total} photons in this basis")
        return self._sector_bounds[total]

    def same_shape(self, other: "FockBasis") -> bool:
        return (
            self.num_modes == other.num_modes and self.max_total == other.max_total
        )

    def _lowering(self, mode: int):
        """Sparse action of the annihilation operator on mode ``mode``."""
        if mode not in self._lowering_cache:
            occ = self.occupations
            src = np.nonzero(occ[:, mode] > 0)[0]
            amps = np.sqrt(occ[src, mode].astype(float))
            dst = np.empty(src.size, dtype=np.int64)
            for i, s in enumerate(src):
                lowered = occ[s].copy()
                lowered[mode] -= 1
                dst[i] = self._index[tuple(lowered)]
            self._lowering_cache[mode] = (src, dst, amps)
        return self._lowering_cache[mode]

    def apply_annihilation(self, amplitudes: np.ndarray, mode: int) -> np.ndarray:
        """Amplitudes of a_mode |psi> in this same basis."""
        if not 0 <= mode < self.num_modes:
            raise ValueError(f"mode {mode} out of range")
        src, dst, amps = self._lowering(mode)
        out = np.zeros(self.size, dtype=complex)
        out[dst] = amps * amplitudes[src]
        return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class FockState:
    """Unit-norm amplitude vector over a FockBasis.

    ``tail_mass`` is the probability discarded by truncation before the
    renormalization that restored unit norm (zero for states that fit the
    basis exactly).
    """

    basis: FockBasis
    amplitudes: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.size,):
            raise ValueError("amplitude vector does not match the basis size")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class MomentSet:
    """Second moments <a_j^dag a_k> and fourth moments <a_j^dag a_k^dag a_l a_m>."""

    second: np.ndarray
    fourth: np.ndarray

    def __post_init__(self):
        second = np.asarray(self.second, dtype=complex)
        fourth = np.asarray(self.fourth, dtype=complex)
        n = second.shape[0]
        if second.shape != (n, n) or fourth.shape != (n, n, n, n):
            raise ValueError("moment arrays must be N x N and N x N x N x N")
        second.setflags(write=False)
        fourth.setflags(write=False)
        object.__setattr__(self, "second", second)
        object.__setattr__(self, "fourth", fourth)

    @property
    def num_modes(self) -> int:
        return self.second.shape[0]

    def total_photons(self) -> float:
        return float(np.trace(self.second).real)


def build_fock(basis: FockBasis, occupation) -> FockState:
    """Product Fock state |n_0, ..., n_{N-1}>."""
    occ = tuple(int(n) for n in occupation)
    if len(occ) != basis.num_modes:
        raise ValueError("occupation length does not match the number of modes")
    if any(n < 0 for n in occ):
        raise ValueError("occupations must be non-negative")
    amps = np.zeros(basis.size, dtype=complex)
    amps[basis.index_of(occ)] = 1.0
    return FockState(basis, amps, tail_mass=0.0)


def build_coherent(basis: FockBasis, alphas, tail_bound: float = 1e-8) -> FockState:
    """Product of coherent states, truncated to the basis and renormalized.

    Parameters
    ----------
    alphas : sequence of complex
        One coherent amplitude per mode.
    tail_bound : float
        A TruncationWarning is emitted when the discarded probability
        exceeds this bound.
    """
    alphas = np.asarray(alphas, dtype=complex)
    if alphas.shape != (basis.num_modes,):
        raise ValueError("need one coherent amplitude per mode")
    # coef[j, n] = exp(-|alpha_j|^2 / 2) alpha_j^n / sqrt(n!)
    n_values = np.arange(basis.max_total + 1)
    log_fact = np.cumsum(np.log(np.maximum(n_values, 1)))
    coef = np.empty((basis.num_modes, basis.max_total + 1), dtype=complex)
    for j, alpha in enumerate(alphas):
        prefactor = math.exp(-0.5 * abs(alpha) ** 2)
        coef[j] = prefactor * alpha**n_values / np.exp(0.5 * log_fact)
    amps = np.prod(coef[np.arange(basis.num_modes), basis.occupations], axis=1)
    return _truncate_and_normalize(basis, amps, tail_bound)


def build_path_entangled(basis: FockBasis, mode_a: int, mode_b: int) -> FockState:
    """Single photon shared between two modes, (|1_a> + |1_b>) / sqrt(2)."""
    _check_mode_pair(basis, mode_a, mode_b)
    if basis.max_total < 1:
        raise ValueError("basis holds no one-photon sector")
    amps = np.zeros(basis.size, dtype=complex)
    for mode in (mode_a, mode_b):
        occ = [0] * basis.num_modes
        occ[mode] = 1
        amps[basis.index_of(occ)] = 2**-0.5
    return FockState(basis, amps, tail_mass=0.0)


def build_tmsv(
    basis: FockBasis, mode_a: int, mode_b: int, r: float, tail_bound: float = 1e-8
) -> FockState:
    """Two-mode squeezed vacuum with squeezing parameter r >= 0.

    Amplitudes tanh(r)**j / cosh(r) on the pair occupations |j, j>, kept for
    2 j <= max_total, then renormalized; the discarded geometric tail is
    recorded as ``tail_mass``.
    """
    _check_mode_pair(basis, mode_a, mode_b)
    if r < 0:
        raise ValueError("squeezing parameter r must be non-negative")
    amps = np.zeros(basis.size, dtype=complex)
    tanh_r = math.tanh(r)
    for j in range(basis.max_total // 2 + 1):
        occ = [0] * basis.num_modes
        occ[mode_a] = j
        occ[mode_b] = j
        amps[basis.index_of(occ)] = tanh_r**j / math.cosh(r)
    return _truncate_and_normalize(basis, amps, tail_bound)


def moments_of(state: FockState) -> MomentSet:
    """Second and fourth moments of a Fock state by exact ladder action."""
    basis = state.basis
    N = basis.num_modes
    lowered = [basis.apply_annihilation(state.amplitudes, j) for j in range(N)]
    second = np.empty((N, N), dtype=complex)
    for j in range(N):
        for k in range(N):
            second[j, k] = np.vdot(lowered[j], lowered[k])

    # pair[a, b] = a_a a_b |psi>; symmetric in (a, b) since the operators commute
    pair = np.empty((N, N, basis.size), dtype=complex)
    for a in range(N):
        for b in range(a, N):
            vec = basis.apply_annihilation(lowered[b], a)
            pair[a, b] = vec
            pair[b, a] = vec
    fourth = np.einsum("jkx,lmx->jklm", pair.conj(), pair)
    return MomentSet(second, fourth)


def analytic_moments_tmsv(r: float, mode_a: int, mode_b: int, N: int) -> MomentSet:
    """Exact (untruncated) moments of a two-mode squeezed vacuum.

    Gaussian states obey Wick factorization, so the fourth moments follow
    from the second moments and the pair correlations:
    F[j,k,l,m] = C[j,l] C[k,m] + C[j,m] C[k,l] + conj(A[j,k]) A[l,m]
    with C the number correlations and A[a,b] = <a_a a_b> = sinh r cosh r on
    the squeezed pair.  This route never touches a truncated basis, which
    makes it an independent reference for ``moments_of``.
    """
    if r < 0:
        raise ValueError("squeezing parameter r must be non-negative")
    if N < 2:
        raise ValueError("need at least two modes")
    if not (0 <= mode_a < N and 0 <= mode_b < N) or mode_a == mode_b:
        raise ValueError("mode_a and mode_b must be distinct in-range modes")
    nbar = math.sinh(r) ** 2
    second = np.zeros((N, N), dtype=complex)
    second[mode_a, mode_a] = nbar
    second[mode_b, mode_b] = nbar
    pair_corr = np.zeros((N, N), dtype=complex)
    pair_corr[mode_a, mode_b] = math.sinh(r) * math.cosh(r)
    pair_corr[mode_b, mode_a] = pair_corr[mode_a, mode_b]
    fourth = (
        np.einsum("jl,km->jklm", second, second)
        + np.einsum("jm,kl->jklm", second, second)
        + np.einsum("jk,lm->jklm", pair_corr.conj(), pair_corr)
    )
    return MomentSet(second, fourth)


def _truncate_and_normalize(basis, amps, tail_bound) -> FockState:
    kept = float(np.sum(np.abs(amps) ** 2))
    if kept <= 0:
        raise ValueError("state has no support inside the truncated basis")
    tail = max(0.0, 1.0 - kept)
    if tail > tail_bound:
        warnings.warn(
            f"truncation discarded probability {tail:.3e} "
            f"(bound {tail_bound:.1e}); consider a larger max_total",
            TruncationWarning,
            stacklevel=3,
        )
    return FockState(basis, amps / math.sqrt(kept), tail_mass=tail)


def _check_mode_pair(basis, mode_a, mode_b):
    for mode in (mode_a, mode_b):
        if not 0 <= mode < basis.num_modes:
            raise ValueError(f"mode {mode} out of range")
    if mode_a == mode_b:
        raise ValueError("the two modes must be distinct")
