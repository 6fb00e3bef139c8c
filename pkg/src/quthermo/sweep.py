"""Temperature and parameter sweeps with deterministic CSV output.

A sweep evaluates one model over a temperature grid (and measurement
path), emitting one record per (grid point, path) in grid order.  Records
carry every plotted quantity; numeric fields that do not apply hold the
literal tag 'na'.  CSV numbers use 17 significant digits so values
round-trip bit-faithfully.
"""

from __future__ import annotations

import concurrent.futures
import datetime
import math
from dataclasses import dataclass, replace

import numpy as np

from .asymptotics import high_temperature_regime, relative_metric
from .correlations import (
    classical_correlation,
    diagonal_discord,
    diagonal_discord_rate,
    multipartite_diagonal_discord,
    mutual_information,
)
from .derivatives import REL_STEP
from .errors import QuthermoError, UsageError
from .models import (
    ChainParams,
    PartitionedHamiltonian,
    TwoQubitXYZParams,
    build_chain,
    build_two_qubit,
    build_xy_anisotropy,
)
from .thermometry import (
    DEFAULT_MODE,
    MEASUREMENT_MODES,
    gibbs,
    greedy_locc_qfi,
    local_qfi,
    qfi_gibbs,
)

MODEL_KINDS = ("two_qubit", "chain", "xy_pair")


@dataclass(frozen=True)
class ModelSpec:
    """Picklable model description; build() turns it into a Hamiltonian."""

    kind: str
    params: tuple[tuple[str, float], ...]

    @staticmethod
    def of(kind: str, **params: float) -> "ModelSpec":
        if kind not in MODEL_KINDS:
            raise UsageError(f"unknown model kind {kind!r}; use one of {MODEL_KINDS}")
        return ModelSpec(kind, tuple(sorted(params.items())))

    def as_dict(self) -> dict[str, float]:
        return dict(self.params)

    def build(self) -> PartitionedHamiltonian:
        p = self.as_dict()
        if self.kind == "two_qubit":
            return build_two_qubit(
                TwoQubitXYZParams(
                    p.get("b1", 0.0), p.get("b2", 0.0),
                    p.get("jx", 0.0), p.get("jy", 0.0), p.get("jz", 0.0),
                )
            )
        if self.kind == "chain":
            return build_chain(
                ChainParams(int(p.get("n", 3)), p.get("b", 0.0), p.get("j", 0.0),
                            p.get("alpha", 1.0))
            )
        return build_xy_anisotropy(p.get("j", 0.0), p.get("lam", 0.0), p.get("jz", 0.0))

    def nsub(self) -> int:
        return int(self.as_dict().get("n", 3)) if self.kind == "chain" else 2


def encode_path(path: tuple[int, ...]) -> str:
    if len(path) <= 9:
        return "".join(str(k + 1) for k in path)
    return "-".join(str(k + 1) for k in path)


def decode_path(text: str) -> tuple[int, ...]:
    parts = text.split("-") if "-" in text else list(text)
    return tuple(int(p) - 1 for p in parts)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: model, temperature grid, measurement paths, policies."""

    model: ModelSpec
    t_min: float
    t_max: float
    count: int
    spacing: str = "log"
    paths: tuple[tuple[int, ...], ...] = ()
    mode: str = DEFAULT_MODE
    rel_step: float = REL_STEP
    output: str = "sweep.csv"

    def __post_init__(self):
        if self.count < 2:
            raise UsageError(f"grid count must be >= 2, got {self.count}")
        if not (self.t_min > 0 and math.isfinite(self.t_min) and math.isfinite(self.t_max)):
            raise UsageError(f"need finite t_max >= t_min > 0, got [{self.t_min}, {self.t_max}]")
        if self.t_max < self.t_min:
            raise UsageError("t_max must be >= t_min")
        if self.spacing not in ("log", "linear"):
            raise UsageError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.mode not in MEASUREMENT_MODES:
            raise UsageError(f"mode must be one of {MEASUREMENT_MODES}, got {self.mode!r}")
        if not (math.isfinite(self.rel_step) and self.rel_step > 0):
            raise UsageError(f"rel_step must be positive, got {self.rel_step}")
        for key, value in self.model.params:
            if not math.isfinite(value):
                raise UsageError(f"model parameter {key} must be finite, got {value}")
        n = self.model.nsub()
        paths = self.paths or (tuple(range(n)),)
        for p in paths:
            if sorted(p) != list(range(n)):
                raise UsageError(f"path {p} is not a permutation of 0..{n - 1}")
        object.__setattr__(self, "paths", tuple(tuple(p) for p in paths))

    def temperatures(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.count)
        return np.linspace(self.t_min, self.t_max, self.count)

    def jobs_list(self) -> list[tuple[ModelSpec, float, tuple[int, ...], str, float]]:
        return [
            (self.model, float(t), p, self.mode, self.rel_step)
            for t in self.temperatures()
            for p in self.paths
        ]


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a config from a parsed TOML document."""
    try:
        model_tbl = dict(raw["model"])
        kind = str(model_tbl.pop("kind"))
        grid = raw.get("grid", {})
        scheme = raw.get("scheme", {})
        deriv = raw.get("derivatives", {})
        output = raw.get("output", {})
        paths = tuple(decode_path(str(p)) for p in scheme.get("paths", []))
        return ExperimentConfig(
            model=ModelSpec.of(kind, **{k: float(v) for k, v in model_tbl.items()}),
            t_min=float(grid.get("t_min", 0.1)),
            t_max=float(grid.get("t_max", 100.0)),
            count=int(grid.get("count", 100)),
            spacing=str(grid.get("spacing", "log")),
            paths=paths,
            mode=str(scheme.get("mode", DEFAULT_MODE)),
            rel_step=float(deriv.get("rel_step", REL_STEP)),
            output=str(output.get("path", "sweep.csv")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed experiment config: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            return config_from_dict(tomllib.load(fh))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated grid point; optional fields are None when not applicable."""

    model: str
    params: tuple[tuple[str, float], ...]
    t: float
    path: tuple[int, ...]
    f_global: float | None = None
    f_local: tuple[float, ...] = ()
    f_locc: float | None = None
    delta_f: float | None = None
    mutual_info: float | None = None
    classical_corr: float | None = None
    discord: float | None = None
    diag_discord: float | None = None
    discord_rate: float | None = None
    rel_metric: float | None = None
    high_t_regime: bool = False
    status: str = "ok"


PARAM_COLUMNS = ("b1", "b2", "jx", "jy", "jz", "n", "b", "j", "alpha", "lam")
SCALAR_COLUMNS = (
    "f_global", "f_locc", "delta_f", "mutual_info", "classical_corr",
    "discord", "diag_discord", "discord_rate", "rel_metric",
)


def evaluate_point(job) -> SweepRecord:
    """Compute every record column at one (model, T, path) point.

    Numerical failures are captured in the record's status; they never
    abort a sweep.
    """
    spec, t, path, mode, rel_step = job
    base = SweepRecord(model=spec.kind, params=spec.params, t=t, path=path)
    try:
        model = spec.build()
        ens = gibbs(model, t)
        n = len(model.layout.dims)
        f_global = qfi_gibbs(ens)
        f_local = tuple(local_qfi(ens, k, rel_step) for k in range(n))
        f_locc = greedy_locc_qfi(ens, path, mode, rel_step)
        delta_f = f_global - f_locc
        measured = path[0]
        mutual = mutual_information(ens.state, measured)
        try:
            classical = classical_correlation(ens.state, measured)
            discord = mutual - classical
        except UsageError:
            classical = discord = None
        if n == 2:
            diag = diagonal_discord(ens.state, measured)
        else:
            diag = multipartite_diagonal_discord(ens, path)
        rate = diagonal_discord_rate(model, t, path, rel_step)
        metric = relative_metric(delta_f, rate)
        return replace(
            base,
            f_global=f_global,
            f_local=f_local,
            f_locc=f_locc,
            delta_f=delta_f,
            mutual_info=mutual,
            classical_corr=classical,
            discord=discord,
            diag_discord=diag,
            discord_rate=rate,
            rel_metric=metric,
            high_t_regime=high_temperature_regime(model, t),
        )
    except (QuthermoError, FloatingPointError, np.linalg.LinAlgError) as exc:
        return replace(base, status=f"failed: {exc}")


def run_jobs(jobs, workers: int = 1) -> list[SweepRecord]:
    """Evaluate jobs, preserving order; workers > 1 uses separate processes."""
    if workers <= 1:
        return [evaluate_point(j) for j in jobs]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_point, jobs))


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[SweepRecord]:
    return run_jobs(config.jobs_list(), workers)


# ---------------------------------------------------------------------------
# CSV emission and parsing
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return "na"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _parse(text: str):
    if text == "na" or text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    return float(text)


def csv_header(nsub: int) -> list[str]:
    cols = ["model", *PARAM_COLUMNS, "t", "path"]
    cols += ["f_global"] + [f"f_local_{k + 1}" for k in range(nsub)]
    cols += [c for c in SCALAR_COLUMNS if c != "f_global"]
    cols += ["high_t_regime", "status"]
    return cols


def record_row(rec: SweepRecord, nsub: int) -> list[str]:
    params = dict(rec.params)
    row = [rec.model]
    row += [_fmt(params[c]) if c in params else "na" for c in PARAM_COLUMNS]
    row += [_fmt(rec.t), encode_path(rec.path)]
    row += [_fmt(rec.f_global)]
    locals_ = list(rec.f_local) + [None] * (nsub - len(rec.f_local))
    row += [_fmt(v) for v in locals_[:nsub]]
    for col in SCALAR_COLUMNS:
        if col == "f_global":
            continue
        row.append(_fmt(getattr(rec, col)))
    row += [_fmt(rec.high_t_regime), rec.status]
    return row


def render_csv(records: list[SweepRecord], nsub: int, reproducible: bool = False) -> str:
    lines = []
    if not reproducible:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        lines.append(f"# generated: {stamp}")
    lines.append(",".join(csv_header(nsub)))
    for rec in records:
        lines.append(",".join(record_row(rec, nsub)))
    return "\n".join(lines) + "\n"


def write_csv(path: str, records: list[SweepRecord], nsub: int, reproducible: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(records, nsub, reproducible))


def parse_csv(text: str) -> list[dict]:
    """Parse an emitted CSV back into dicts of typed values."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        cells = line.split(",")
        row = {}
        for key, cell in zip(header, cells):
            if key in ("model", "status"):
                row[key] = cell
            elif key == "path":
                row[key] = decode_path(cell)
            else:
                row[key] = _parse(cell)
        out.append(row)
    return out


def read_csv(path: str) -> list[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_csv(fh.read())


# ---------------------------------------------------------------------------
# Named presets reproducing the benchmark parameter sets
# ---------------------------------------------------------------------------

_T_GRID = dict(t_min=0.1, t_max=100.0, count=200, spacing="log")
_T_GRID_CHAIN = dict(t_min=0.1, t_max=100.0, count=120, spacing="log")


def _preset_two_qubit(b1, b2, jx, jy, jz) -> ExperimentConfig:
    return ExperimentConfig(
        model=ModelSpec.of("two_qubit", b1=b1, b2=b2, jx=jx, jy=jy, jz=jz), **_T_GRID
    )


def _preset_chain(b, j, alpha) -> ExperimentConfig:
    return ExperimentConfig(
        model=ModelSpec.of("chain", n=3, b=b, j=j, alpha=alpha),
        paths=((0, 1, 2), (0, 2, 1), (1, 0, 2)),
        **_T_GRID_CHAIN,
    )


FIGURE_GRID_POINTS = 21
FIGURE_GRID_RANGE = 1.5


def _figure4_jobs(t: float):
    vals = np.linspace(-FIGURE_GRID_RANGE, FIGURE_GRID_RANGE, FIGURE_GRID_POINTS)
    return [
        (ModelSpec.of("xy_pair", j=1.0, lam=float(lam), jz=float(jz)), t, (0, 1),
         DEFAULT_MODE, REL_STEP)
        for lam in vals
        for jz in vals
    ]


FIGURE_PRESETS = {
    "fig2a": lambda: _preset_two_qubit(3.0, 1.0, 1.0, 1.0, 2.0).jobs_list(),
    "fig2b": lambda: _preset_two_qubit(0.0, 0.0, 1.0, 0.0, 2.0).jobs_list(),
    "fig3a": lambda: _preset_chain(1.0, 1.0, 0.3).jobs_list(),
    "fig3b": lambda: _preset_chain(2.0, 1.0, 0.3).jobs_list(),
    "fig4a": lambda: _figure4_jobs(0.4),
    "fig4b": lambda: _figure4_jobs(2.0),
}


def figure_records(name: str, workers: int = 1) -> list[SweepRecord]:
    if name not in FIGURE_PRESETS:
        raise UsageError(f"unknown figure {name!r}; choose from {sorted(FIGURE_PRESETS)}")
    return run_jobs(FIGURE_PRESETS[name](), workers)


def figure_nsub(name: str) -> int:
    return 3 if name.startswith("fig3") else 2
