"""Scenario evaluation: time sweeps over the dynamics, CSV output, plot scripts.

A scenario names one curve family (single-qubit coherence, mode-mode
correlation, two-qubit concurrence or coherence, each with a stationary
variant where meaningful) plus the physical parameters.  Rows are evaluated
one time point at a time, optionally across a process pool; because every
point is a pure function of the scenario, the assembled table is identical
for any worker count, and the CSV writer pins the formatting so reruns are
byte-identical.
"""
from __future__ import annotations

import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .composite import BellSpec, bell_state, concurrence, evolve_two_qubit, two_qubit_coherence
from .dynamics import (
    ModeParams,
    QubitAmplitudes,
    evolve_state,
    reduced_qubit_density,
    single_qubit_map,
    stationary_evolve,
)
from .errors import ParameterError
from .fock import choose_truncation, coherent_amplitudes
from .observables import l1_coherence, mode_moments

#: scenario modes with a vibrating qubit (two-mode sideband dynamics)
VIBRATING_MODES = (
    "single-coherence",
    "single-coherence-excited",
    "mode-correlation",
    "concurrence",
    "tqc",
)
#: stationary counterparts; mode-correlation has none (no vibrational mode exists)
STATIONARY_MODES = (
    "stationary-single-coherence",
    "stationary-single-coherence-excited",
    "stationary-concurrence",
    "stationary-tqc",
)
ALL_MODES = VIBRATING_MODES + STATIONARY_MODES

_COLUMNS = {
    "single-coherence": ("t", "eta_kappa_t", "zeta"),
    "single-coherence-excited": ("t", "eta_kappa_t", "zeta"),
    "mode-correlation": ("t", "eta_kappa_t", "n_a", "n_b", "joint", "cross_corr", "g2"),
    "concurrence": ("t", "eta_kappa_t", "value"),
    "tqc": ("t", "eta_kappa_t", "value"),
    "stationary-single-coherence": ("t", "kappa_t", "zeta"),
    "stationary-single-coherence-excited": ("t", "kappa_t", "zeta"),
    "stationary-concurrence": ("t", "kappa_t", "value"),
    "stationary-tqc": ("t", "kappa_t", "value"),
}

_METADATA_KEYS = (
    "mode",
    "eta",
    "kappa",
    "alpha_sq",
    "beta_sq",
    "c_e",
    "c_g",
    "bell",
    "mu",
    "upsilon",
    "t_max",
    "n_steps",
    "tail_tol",
)


@dataclass(frozen=True)
class Scenario:
    """One runnable curve: mode name plus every physical and sweep parameter.

    ``c_e``/``c_g`` drive the single-qubit modes; ``bell_kind``/``mu`` drive
    the two-qubit ones (``upsilon`` is the real non-negative complement).
    The irrelevant half is carried anyway so the emitted metadata is the
    full parameter set regardless of mode.
    """

    mode: str
    c_e: complex = 2.0 ** -0.5
    c_g: complex = 2.0 ** -0.5
    bell_kind: str = "phi"
    mu: float = 2.0 ** -0.5
    eta: float = 0.02
    kappa: float = 1.0
    alpha_sq: float = 1.0
    beta_sq: float = 1.0
    t_max: float = 2500.0
    n_steps: int = 501
    tail_tol: float = 1e-12
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ALL_MODES:
            raise ParameterError(
                f"unknown scenario mode {self.mode!r}; expected one of {', '.join(ALL_MODES)}"
            )
        if self.n_steps < 2:
            raise ParameterError(f"n_steps must be >= 2, got {self.n_steps}")
        if not (self.t_max > 0):
            raise ParameterError(f"t_max must be > 0, got {self.t_max!r}")
        if not (0.0 <= self.mu <= 1.0):
            raise ParameterError(f"mu must lie in [0, 1], got {self.mu!r}")
        if self.bell_kind not in ("phi", "psi"):
            raise ParameterError(f"bell kind must be 'phi' or 'psi', got {self.bell_kind!r}")
        if self.alpha_sq < 0 or self.beta_sq < 0:
            raise ParameterError("alpha_sq and beta_sq must be >= 0")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        # fail fast on anything ModeParams or QubitAmplitudes would reject
        self.mode_params()
        if not self.mode.endswith(("concurrence", "tqc")):
            QubitAmplitudes(self.c_e, self.c_g)

    @property
    def upsilon(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.mu * self.mu))

    @property
    def stationary(self) -> bool:
        return self.mode.startswith("stationary-")

    def mode_params(self) -> ModeParams:
        return ModeParams(
            eta=self.eta,
            kappa=self.kappa,
            alpha_mag=math.sqrt(self.alpha_sq),
            beta_mag=math.sqrt(self.beta_sq),
        )

    def times(self) -> np.ndarray:
        """Row grid: t_i = i * t_max / (n_steps - 1)."""
        return np.arange(self.n_steps) * (self.t_max / (self.n_steps - 1))

    def columns(self) -> tuple[str, ...]:
        return _COLUMNS[self.mode]


def stationary_variant(mode: str) -> str:
    """Map a base mode name to its stationary counterpart."""
    if mode.startswith("stationary-"):
        return mode
    name = f"stationary-{mode}"
    if name not in STATIONARY_MODES:
        raise ParameterError(
            f"mode {mode!r} has no stationary variant (the vibrational mode is essential to it)"
        )
    return name


def _evaluate_point(s: Scenario, t: float) -> tuple[float, ...]:
    """One row of the table; pure in (s, t) so scheduling cannot matter."""
    p = s.mode_params()
    axis = (s.eta * s.kappa if not s.stationary else s.kappa) * t
    wb = coherent_amplitudes(p.beta_mag, choose_truncation(s.beta_sq, s.tail_tol))
    if not s.stationary:
        wa = coherent_amplitudes(p.alpha_mag, choose_truncation(s.alpha_sq, s.tail_tol))

    if s.mode in ("single-coherence", "single-coherence-excited"):
        state = evolve_state(QubitAmplitudes(s.c_e, s.c_g), p, wa, wb, t)
        return (t, axis, l1_coherence(reduced_qubit_density(state)))
    if s.mode in ("stationary-single-coherence", "stationary-single-coherence-excited"):
        state = stationary_evolve(QubitAmplitudes(s.c_e, s.c_g), p, wb, t)
        return (t, axis, l1_coherence(reduced_qubit_density(state)))
    if s.mode == "mode-correlation":
        state = evolve_state(QubitAmplitudes(s.c_e, s.c_g), p, wa, wb, t)
        sample = mode_moments(state)
        g2 = float("nan") if sample.g2 is None else sample.g2
        return (t, axis, sample.n_a_mean, sample.n_b_mean, sample.joint_mean, sample.cross_corr, g2)

    # two-qubit modes
    kind = "stationary" if s.stationary else "vibrating"
    if s.stationary:
        m = single_qubit_map(p, wb, wb, t, mode=kind)
    else:
        m = single_qubit_map(p, wa, wb, t, mode=kind)
    rho0 = bell_state(BellSpec(s.bell_kind, s.mu, s.upsilon))
    rho = evolve_two_qubit(rho0, m, m)
    value = concurrence(rho) if s.mode.endswith("concurrence") else two_qubit_coherence(rho)
    return (t, axis, value)


def _evaluate_indexed(args: tuple[Scenario, int, float]) -> tuple[int, tuple[float, ...]]:
    s, i, t = args
    return i, _evaluate_point(s, t)


def run_scenario(s: Scenario) -> list[tuple[float, ...]]:
    """Evaluate every row of the scenario, in row order.

    With ``workers > 1`` the points are spread over a process pool; rows are
    reassembled strictly by index, so the result never depends on worker
    count or completion order.
    """
    times = s.times()
    if s.workers == 1:
        return [_evaluate_point(s, float(t)) for t in times]
    jobs = [(s, i, float(t)) for i, t in enumerate(times)]
    rows: list[tuple[float, ...] | None] = [None] * len(jobs)
    with ProcessPoolExecutor(max_workers=s.workers) as pool:
        for i, row in pool.map(_evaluate_indexed, jobs, chunksize=max(1, len(jobs) // (4 * s.workers))):
            rows[i] = row
    return rows  # type: ignore[return-value]


def _format_value(x: float) -> str:
    return f"{x:.8e}"


def _metadata_lines(s: Scenario) -> list[str]:
    values = {
        "mode": s.mode,
        "eta": _format_value(s.eta),
        "kappa": _format_value(s.kappa),
        "alpha_sq": _format_value(s.alpha_sq),
        "beta_sq": _format_value(s.beta_sq),
        "c_e": f"{complex(s.c_e).real:.8e},{complex(s.c_e).imag:.8e}",
        "c_g": f"{complex(s.c_g).real:.8e},{complex(s.c_g).imag:.8e}",
        "bell": s.bell_kind,
        "mu": _format_value(s.mu),
        "upsilon": _format_value(s.upsilon),
        "t_max": _format_value(s.t_max),
        "n_steps": str(s.n_steps),
        "tail_tol": _format_value(s.tail_tol),
    }
    return [f"# {key} = {values[key]}" for key in _METADATA_KEYS]


def render_csv(s: Scenario, rows: list[tuple[float, ...]]) -> str:
    """Render metadata, header, and rows; 9 significant digits throughout.

    Output path and worker count are deliberately left out of the metadata:
    the same physics must serialize to the same bytes wherever and however
    it was computed.
    """
    buf = io.StringIO()
    for line in _metadata_lines(s):
        buf.write(line + "\n")
    buf.write(",".join(s.columns()) + "\n")
    for row in rows:
        buf.write(",".join(_format_value(x) for x in row) + "\n")
    return buf.getvalue()


def write_csv(s: Scenario, rows: list[tuple[float, ...]], path: str) -> None:
    text = render_csv(s, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_csv_header(path: str) -> tuple[dict[str, str], list[str]]:
    """Metadata dict and column list of a scenario CSV; used by plot-script."""
    if not os.path.exists(path):
        raise ParameterError(f"CSV not found: {path}")
    metadata: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                if "=" in line:
                    key, _, value = line[1:].partition("=")
                    metadata[key.strip()] = value.strip()
                continue
            if not line:
                continue
            return metadata, line.split(",")
    raise ParameterError(f"CSV {path} has no header row")


def emit_plot_script(csv_path: str, mode: str | None = None) -> str:
    """Text of a gnuplot script rendering the scenario curve.

    ``mode`` defaults to the value recorded in the CSV metadata.  The CSV
    must exist and carry the exact column set of that mode.
    """
    metadata, columns = read_csv_header(csv_path)
    if mode is None:
        mode = metadata.get("mode")
        if mode is None:
            raise ParameterError(f"CSV {csv_path} has no mode metadata; pass the mode explicitly")
    if mode not in _COLUMNS:
        raise ParameterError(f"unknown scenario mode {mode!r}")
    expected = list(_COLUMNS[mode])
    if columns != expected:
        raise ParameterError(
            f"CSV {csv_path} columns {columns} do not match mode {mode!r} (expected {expected})"
        )

    axis = expected[1]
    axis_label = "eta*kappa*t" if axis == "eta_kappa_t" else "kappa*t"
    if mode == "mode-correlation":
        y_col, y_label, y_range = 6, "cross correlation", None
    elif "coherence" in mode:
        y_col, y_label, y_range = 3, "coherence", (0, 1)
    elif "concurrence" in mode:
        y_col, y_label, y_range = 3, "concurrence", (0, 1)
    else:
        # two-qubit coherence of a 4x4 density can exceed 1, so autoscale
        y_col, y_label, y_range = 3, "two-qubit coherence", None

    lines = [
        "# gnuplot script generated from a scenario CSV",
        "set datafile separator ','",
        f"set xlabel '{axis_label}'",
        f"set ylabel '{y_label}'",
        "set key off",
        "set grid",
    ]
    if y_range is not None:
        lines.append(f"set yrange [{y_range[0]}:{y_range[1]}]")
    lines.append(f"plot '{csv_path}' using 2:{y_col} with lines")
    return "\n".join(lines) + "\n"
