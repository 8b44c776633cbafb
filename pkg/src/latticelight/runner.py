"""Config-driven runs: parse a JSON run configuration, execute the requested
engines and render deterministic CSV.

Numbers are printed with 12 significant digits (round-half-even), so running
the same configuration twice produces byte-identical output.  Every CSV
starts with a comment line pinning the 0-based waveguide indexing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .fockspace import FockEvolver, expectation_g2, expectation_n, fidelity, mirror_state
from .lattice import (
    LatticeSpec,
    make_binary,
    make_glauber_fock,
    make_jacobi_semi_infinite,
    make_perfect_transfer,
    make_uniform,
)
from .moments import NumericalInconsistencyError, trace_observables
from .spectral import eigendecompose
from .states import (
    FockBasis,
    FockState,
    build_coherent,
    build_fock,
    build_path_entangled,
    build_tmsv,
    moments_of,
)

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config",
           "parse_lattice", "run_spectrum", "run_propagate"]

INDEXING_NOTE = "# waveguide indices are 0-based: index 0 is the first waveguide"

DEFAULT_N_MAX = 12
ENGINES = ("moments", "fock", "both")
FIDELITY_TARGETS = ("initial", "mirror")

_FAMILY_PARAMS = {
    "uniform": ("N", "omega", "g"),
    "glauber_fock": ("N", "omega", "g"),
    "binary": ("N", "omega", "g"),
    "perfect_transfer": ("N", "z_t"),
    "jacobi_semi_infinite": ("N", "omega"),
}

_FAMILY_BUILDERS = {
    "uniform": make_uniform,
    "glauber_fock": make_glauber_fock,
    "binary": make_binary,
    "perfect_transfer": make_perfect_transfer,
    "jacobi_semi_infinite": make_jacobi_semi_infinite,
}


class ConfigError(ValueError):
    """A run configuration failed to parse or validate."""


@dataclass
class RunConfig:
    """Fully validated run configuration with all objects built."""

    spec: LatticeSpec
    basis: FockBasis
    state: FockState
    z_values: np.ndarray
    n_max: int
    pairs: list[tuple[int, int]] = field(default_factory=list)
    fidelity_targets: list[str] = field(default_factory=list)
    engine: str = "both"


def load_config(path: str) -> dict:
    """Read and JSON-parse a configuration file."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(
            f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return raw


def parse_lattice(section) -> LatticeSpec:
    """Build a LatticeSpec from the ``lattice`` config section."""
    if not isinstance(section, dict):
        raise ConfigError("lattice: must be an object")
    if "explicit" in section:
        explicit = section["explicit"]
        if not isinstance(explicit, dict):
            raise ConfigError("lattice.explicit: must be an object")
        omegas = _number_list(explicit.get("omegas"), "lattice.explicit.omegas")
        couplings = _number_list(
            explicit.get("couplings"), "lattice.explicit.couplings"
        )
        try:
            return LatticeSpec(np.array(omegas), np.array(couplings))
        except ValueError as err:
            raise ConfigError(f"lattice.explicit: {err}") from err
    family = section.get("family")
    if family not in _FAMILY_PARAMS:
        known = ", ".join(sorted(_FAMILY_PARAMS))
        raise ConfigError(
            f"lattice.family: expected one of {known} (or an 'explicit' block), "
            f"got {family!r}"
        )
    kwargs = {}
    for name in _FAMILY_PARAMS[family]:
        if name not in section:
            raise ConfigError(f"lattice.{name}: required for family '{family}'")
        kwargs[name] = section[name]
    if not isinstance(kwargs["N"], int) or isinstance(kwargs["N"], bool):
        raise ConfigError("lattice.N: must be an integer")
    for name, value in kwargs.items():
        if name != "N":
            kwargs[name] = _number(value, f"lattice.{name}")
    try:
        return _FAMILY_BUILDERS[family](**kwargs)
    except ValueError as err:
        raise ConfigError(f"lattice: {err}") from err


def parse_config(raw: dict) -> RunConfig:
    """Validate a full propagation configuration and build its objects."""
    spec = parse_lattice(raw.get("lattice"))
    N = spec.size

    n_max = raw.get("n_max", DEFAULT_N_MAX)
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 1:
        raise ConfigError("n_max: must be a positive integer")

    grid = raw.get("z_grid")
    if not isinstance(grid, dict):
        raise ConfigError("z_grid: must be an object with start, stop, steps")
    start = _number(grid.get("start"), "z_grid.start")
    stop = _number(grid.get("stop"), "z_grid.stop")
    steps = grid.get("steps")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise ConfigError("z_grid.steps: must be an integer >= 2")
    if not start < stop:
        raise ConfigError("z_grid: start must be strictly below stop")
    if start < 0:
        raise ConfigError("z_grid.start: must be non-negative")
    z_values = np.linspace(start, stop, steps)

    pairs = []
    for i, pair in enumerate(raw.get("pairs", [])):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise ConfigError(f"pairs[{i}]: must be a pair of integers")
        p, q = pair
        if not (0 <= p < N and 0 <= q < N):
            raise ConfigError(f"pairs[{i}]: indices out of range for N={N}")
        pairs.append((p, q))

    targets = []
    for i, target in enumerate(raw.get("fidelity_targets", [])):
        if target not in FIDELITY_TARGETS:
            raise ConfigError(
                f"fidelity_targets[{i}]: expected 'initial' or 'mirror', got {target!r}"
            )
        targets.append(target)

    engine = raw.get("engine", "both")
    if engine not in ENGINES:
        raise ConfigError(f"engine: expected one of {ENGINES}, got {engine!r}")
    if targets and engine == "moments":
        raise ConfigError(
            "fidelity_targets: fidelities need the Fock engine; "
            "use engine 'fock' or 'both'"
        )

    basis = FockBasis(N, n_max)
    state = _build_state(raw.get("state"), basis)
    return RunConfig(spec, basis, state, z_values, n_max, pairs, targets, engine)


def run_spectrum(raw: dict) -> str:
    """CSV spectrum table: one row per eigenvalue with its eigenvector."""
    spec = parse_lattice(raw.get("lattice") if isinstance(raw, dict) else None)
    spectrum = eigendecompose(spec)
    lines = [INDEXING_NOTE]
    lines.append("k,lambda," + ",".join(f"v_{j}" for j in range(spec.size)))
    for k in range(spec.size):
        row = [str(k), _fmt(spectrum.eigenvalues[k])]
        row.extend(_fmt(v) for v in spectrum.eigenvectors[k])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def run_propagate(raw: dict) -> str:
    """CSV propagation trace for a validated configuration.

    Columns: z, the N mean photon numbers, one fidelity column per requested
    target, one correlation column per requested pair.  With engine 'both'
    the printed numbers come from the Fock engine and the moments engine is
    used as a cross-check at tolerance max(1e-8, 10 * tail_mass).
    """
    cfg = parse_config(raw)
    N = cfg.spec.size
    want_moments = cfg.engine in ("moments", "both")
    want_fock = cfg.engine in ("fock", "both")

    moment_samples = None
    if want_moments:
        spectrum = eigendecompose(cfg.spec)
        moment_samples = trace_observables(
            spectrum, moments_of(cfg.state), cfg.z_values, cfg.pairs
        )

    fock_rows = None
    if want_fock:
        evolver = FockEvolver(cfg.spec, cfg.basis)
        target_states = {
            "initial": cfg.state,
            "mirror": mirror_state(cfg.state),
        }
        fock_rows = []
        for z in cfg.z_values:
            evolved = evolver.evolve(cfg.state, float(z))
            means = np.array([expectation_n(evolved, j) for j in range(N)])
            fids = [
                fidelity(target_states[name], evolved) for name in cfg.fidelity_targets
            ]
            corr = {pair: expectation_g2(evolved, *pair) for pair in cfg.pairs}
            fock_rows.append((float(z), means, fids, corr))

    if want_moments and want_fock:
        tolerance = max(1e-8, 10.0 * cfg.state.tail_mass)
        worst = 0.0
        for sample, (_, means, _, corr) in zip(moment_samples, fock_rows):
            worst = max(worst, float(np.max(np.abs(sample.mean_photons - means))))
            for pair in cfg.pairs:
                worst = max(worst, abs(sample.g2[pair] - corr[pair]))
        if worst > tolerance:
            raise NumericalInconsistencyError(
                f"engines disagree by {worst:.3e} (tolerance {tolerance:.3e})"
            )

    header = ["z"] + [f"n_{j}" for j in range(N)]
    header += [f"F_{name}" for name in cfg.fidelity_targets]
    header += [f"g2_{p}_{q}" for p, q in cfg.pairs]
    lines = [INDEXING_NOTE, ",".join(header)]

    if want_fock:
        for z, means, fids, corr in fock_rows:
            cells = [_fmt(z)]
            cells.extend(_fmt(v) for v in means)
            cells.extend(_fmt(v) for v in fids)
            cells.extend(_fmt(corr[pair]) for pair in cfg.pairs)
            lines.append(",".join(cells))
    else:
        for sample in moment_samples:
            cells = [_fmt(sample.z)]
            cells.extend(_fmt(v) for v in sample.mean_photons)
            cells.extend(_fmt(sample.g2[pair]) for pair in cfg.pairs)
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _build_state(section, basis: FockBasis) -> FockState:
    if not isinstance(section, dict):
        raise ConfigError("state: must be an object with a 'kind' field")
    kind = section.get("kind")
    try:
        if kind == "fock":
            occupation = section.get("occupation")
            if not isinstance(occupation, list) or not all(
                isinstance(n, int) and not isinstance(n, bool) and n >= 0
                for n in occupation
            ):
                raise ConfigError(
                    "state.occupation: must be a list of non-negative integers"
                )
            if sum(occupation) > basis.max_total:
                raise ConfigError(
                    "state.occupation: total photon number exceeds n_max"
                )
            return build_fock(basis, occupation)
        if kind == "coherent":
            raw_alphas = section.get("alphas")
            if not isinstance(raw_alphas, list):
                raise ConfigError("state.alphas: must be a list of amplitudes")
            alphas = [
                _complex_number(a, f"state.alphas[{i}]")
                for i, a in enumerate(raw_alphas)
            ]
            return build_coherent(basis, alphas)
        if kind == "path_entangled":
            mode_a, mode_b = _mode_pair(section, basis)
            return build_path_entangled(basis, mode_a, mode_b)
        if kind == "tmsv":
            mode_a, mode_b = _mode_pair(section, basis)
            r = _number(section.get("r"), "state.r")
            if r < 0:
                raise ConfigError("state.r: must be non-negative")
            return build_tmsv(basis, mode_a, mode_b, r)
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(f"state: {err}") from err
    raise ConfigError(
        f"state.kind: expected fock, coherent, path_entangled or tmsv, got {kind!r}"
    )


def _mode_pair(section, basis) -> tuple[int, int]:
    modes = []
    for name in ("mode_a", "mode_b"):
        value = section.get(name)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"state.{name}: must be an integer mode index")
        if not 0 <= value < basis.num_modes:
            raise ConfigError(f"state.{name}: out of range for N={basis.num_modes}")
        modes.append(value)
    if modes[0] == modes[1]:
        raise ConfigError("state: mode_a and mode_b must differ")
    return modes[0], modes[1]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: must be a number")
    return float(value)


def _complex_number(value, where: str) -> complex:
    """A real number, or a [re, im] pair."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{where}: must be a number or a [re, im] pair")


def _number_list(value, where: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: must be a non-empty list of numbers")
    return [_number(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _fmt(x: float) -> str:
    """12 significant digits; IEEE round-half-even via Python's formatter."""
    x = float(x)
    if x == 0.0:
        x = 0.0
    return f"{x:.12g}"
