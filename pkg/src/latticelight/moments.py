"""Heisenberg-picture propagation engine.

Mode operators evolve linearly through the transfer matrix, a_p(z) =
sum_k U[p, k] a_k(0), so mean photon numbers contract the initial second
moments with one row of U and photon-number correlations contract the
initial fourth moments with two rows.  The correlation <n_p n_q> is computed
exactly as written, i.e. including the commutator term delta_{p,q} <n_p>
rather than its normally-ordered part alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import Spectrum, TransferMatrix, transfer_matrix
from .states import MomentSet

__all__ = [
    "NumericalInconsistencyError",
    "ObservableSample",
    "mean_photons",
    "g2",
    "trace_observables",
]

_IMAG_LIMIT = 1e-8


class NumericalInconsistencyError(RuntimeError):
    """An exactly-real or conserved quantity drifted beyond its tolerance."""


@dataclass(frozen=True, eq=False)
class ObservableSample:
    """Observables at one propagation distance."""

    z: float
    mean_photons: np.ndarray
    g2: dict[tuple[int, int], float]


def mean_photons(U: TransferMatrix, m: MomentSet) -> np.ndarray:
    """Mean photon number per waveguide after propagation through U."""
    if U.size != m.num_modes:
        raise ValueError("transfer matrix and moments have different mode counts")
    values = np.einsum("pk,kl,pl->p", U.entries.conj(), m.second, U.entries)
    worst = float(np.max(np.abs(values.imag)))
    if worst > _IMAG_LIMIT:
        raise NumericalInconsistencyError(
            f"mean photon numbers acquired imaginary part {worst:.3e}"
        )
    return values.real.copy()


def g2(U: TransferMatrix, m: MomentSet, p: int, q: int) -> float:
    """Two-point photon-number correlation <n_p(z) n_q(z)>.

    The normally-ordered part contracts the fourth moments with rows p and
    q of U; for p == q the bosonic commutator adds <n_p(z)> on top.
    """
    N = U.size
    if N != m.num_modes:
        raise ValueError("transfer matrix and moments have different mode counts")
    if not (0 <= p < N and 0 <= q < N):
        raise ValueError(f"indices ({p}, {q}) out of range for {N} modes")
    a, b = sorted((int(p), int(q)))
    row_a = U.entries[a]
    row_b = U.entries[b]
    value = complex(
        np.einsum(
            "j,k,l,m,jklm->",
            row_a.conj(),
            row_b.conj(),
            row_a,
            row_b,
            m.fourth,
            optimize=True,
        )
    )
    if a == b:
        value += complex(np.einsum("k,kl,l->", row_a.conj(), m.second, row_a))
    if abs(value.imag) > _IMAG_LIMIT:
        raise NumericalInconsistencyError(
            f"correlation g2[{p},{q}] acquired imaginary part {value.imag:.3e}"
        )
    return float(value.real)


def trace_observables(
    spectrum: Spectrum,
    m: MomentSet,
    z_grid,
    pairs=(),
) -> list[ObservableSample]:
    """Observables sampled along a propagation-distance grid.

    ``pairs`` selects which (p, q) correlations to evaluate; an empty list
    yields samples with mean photon numbers only.  Each sample is checked
    for photon conservation and non-negative means before it is returned.
    """
    z_values = np.asarray(z_grid, dtype=float)
    if z_values.ndim != 1:
        raise ValueError("z_grid must be one-dimensional")
    if not np.all(np.isfinite(z_values)):
        raise ValueError("z_grid must be finite")
    if np.any(np.diff(z_values) < 0):
        raise ValueError("z_grid must be sorted ascending")
    pair_list = [(int(p), int(q)) for p, q in pairs]

    total = m.total_photons()
    samples = []
    for z in z_values:
        U = transfer_matrix(spectrum, z)
        means = mean_photons(U, m)
        if float(np.min(means)) < -1e-10:
            raise NumericalInconsistencyError(
                f"negative mean photon number {np.min(means):.3e} at z={z}"
            )
        drift = abs(float(np.sum(means)) - total)
        if drift > 1e-10:
            raise NumericalInconsistencyError(
                f"total photon number drifted by {drift:.3e} at z={z}"
            )
        correlations = {pair: g2(U, m, *pair) for pair in pair_list}
        samples.append(ObservableSample(float(z), means, correlations))
    return samples
