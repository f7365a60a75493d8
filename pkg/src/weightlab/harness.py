"""Experiment orchestration: config handling, weight archives, and the
pipeline commands behind the CLI subcommands.

Everything is deterministic: fixed summation order in the kernels, repr-level
float serialization, sorted JSON keys, no timestamps.  Two runs from one
config produce byte-identical artifacts.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import conformal, diagnostics, welding
from .errors import ValidationError
from .maximal import WeightBundle, maximal_fast, power_weight
from .riesz import FtildeSpec, build_ftilde, plan_indices
from .sampling import SampledFunction, default_grid_size

DEFAULT_T_VALUES = (0.0, 0.3, 0.6, 0.9, 1.0)
DEFAULT_P_VALUES = (1.25, 1.5, 2.0)
DEFAULT_DELTAS = (0.25, 0.5)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: weight construction parameters plus probe grids."""

    epsilon: float = 0.9
    terms: int = 2
    grid_exponent: int = 8
    t_values: tuple = DEFAULT_T_VALUES
    p_values: tuple = DEFAULT_P_VALUES
    delta_values: tuple = DEFAULT_DELTAS
    scales: int = 0  # 0 means every triadic scale the grid supports
    seed: int = 0
    output_dir: str = "out"
    index_policy: str = "capped"  # or "strict"
    threshold_base: float = 4.0
    llogl_convention: str = "prenormalized"
    interval_family: str = ""  # "" = auto by grid size
    pair_budget: int = 200_000

    def __post_init__(self):
        object.__setattr__(self, "t_values", tuple(float(t) for t in self.t_values))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        object.__setattr__(
            self, "delta_values", tuple(float(d) for d in self.delta_values)
        )

    def validate(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"config field epsilon out of range (0,1): {self.epsilon}")
        if self.terms < 1:
            raise ValidationError(f"config field terms must be >= 1: {self.terms}")
        if self.grid_exponent < 2:
            raise ValidationError(
                f"config field grid_exponent must be >= 2: {self.grid_exponent}"
            )
        for t in self.t_values:
            if not 0.0 <= t <= 1.0:
                raise ValidationError(f"config field t_values entry out of [0,1]: {t}")
        for p in self.p_values:
            if p < 1.0:
                raise ValidationError(f"config field p_values entry below 1: {p}")
        for d in self.delta_values:
            if d <= 0.0:
                raise ValidationError(f"config field delta_values entry <= 0: {d}")
        if self.scales < 0 or self.scales > self.grid_exponent:
            raise ValidationError(
                f"config field scales must be in 0..grid_exponent: {self.scales}"
            )
        if self.index_policy not in ("capped", "strict"):
            raise ValidationError(
                f"config field index_policy must be 'capped' or 'strict': {self.index_policy}"
            )
        if self.interval_family not in ("", "all", "triadic"):
            raise ValidationError(
                f"config field interval_family must be '', 'all' or 'triadic': "
                f"{self.interval_family}"
            )
        if self.pair_budget < 1:
            raise ValidationError(f"config field pair_budget must be >= 1: {self.pair_budget}")
        return self

    @property
    def grid_size(self) -> int:
        return default_grid_size(self.grid_exponent)

    @property
    def max_scale(self) -> int:
        return self.scales if self.scales else self.grid_exponent

    def tag(self, t: float | None = None) -> str:
        base = f"eps{self.epsilon:g}_K{self.terms}_m{self.grid_exponent}"
        return base if t is None else f"{base}_t{t:g}"

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def with_overrides(self, **kv) -> "ExperimentConfig":
        kv = {k: v for k, v in kv.items() if v is not None}
        return replace(self, **kv) if kv else self

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


@dataclass(eq=False)
class WeightArchive:
    """Weight samples plus provenance, round-tripping bit-exactly via CSV."""

    header: dict
    samples: np.ndarray

    def to_bundle(self) -> WeightBundle:
        G = int(self.header["grid_size"])
        return WeightBundle(
            omega=SampledFunction(grid_size=G, values=self.samples.copy()),
            t=float(self.header["t"]),
            provenance=dict(self.header),
        )


def save_archive(archive: WeightArchive, path):
    lines = []
    for key in sorted(archive.header):
        lines.append(f"# {key}={_header_str(archive.header[key])}\n")
    with open(path, "w", newline="\n") as fh:
        fh.writelines(lines)
        for v in archive.samples:
            fh.write(repr(float(v)))
            fh.write("\n")


def _header_str(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return ",".join(_header_str(x) for x in v)
    return str(v)


def load_archive(path) -> WeightArchive:
    header = {}
    samples = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                header[key.strip()] = val.strip()
            else:
                samples.append(float(line))
    arr = np.array(samples, dtype=np.float64)
    if "grid_size" in header and int(header["grid_size"]) != len(arr):
        raise ValidationError(
            f"archive {path}: header grid {header['grid_size']} != {len(arr)} samples"
        )
    return WeightArchive(header=header, samples=arr)


def archive_path(outdir: Path, config: ExperimentConfig, t: float) -> Path:
    return Path(outdir) / f"weight_{config.tag(t)}.csv"


def _build_pipeline(config: ExperimentConfig):
    """Shared front half: indices, density, maximal function."""
    config.validate()
    N_max = config.grid_exponent - 1
    indices, met = plan_indices(
        config.epsilon,
        config.terms,
        N_max,
        threshold_base=config.threshold_base,
        strict=config.index_policy == "strict",
    )
    spec = FtildeSpec(
        epsilon=config.epsilon,
        terms=config.terms,
        selected_indices=tuple(indices),
        llogl_convention=config.llogl_convention,
    )
    ftilde = build_ftilde(spec, config.grid_size)
    M = maximal_fast(ftilde).values
    return spec, met, ftilde, M


def cmd_build_weight(config: ExperimentConfig) -> list:
    """Select indices, build the density and its maximal function, archive
    omega^t for every configured t.  Returns the written paths."""
    spec, met, ftilde, M = _build_pipeline(config)
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    provenance = {
        "epsilon": config.epsilon,
        "terms": config.terms,
        "selected_indices": tuple(spec.selected_indices),
        "threshold_met": tuple(met),
        "threshold_base": config.threshold_base,
        "llogl_convention": config.llogl_convention,
        "grid_size": config.grid_size,
        "grid_exponent": config.grid_exponent,
        "seed": config.seed,
    }
    print(f"selected indices (eps={config.epsilon:g}, K={config.terms}):")
    for n, (N, ok) in enumerate(zip(spec.selected_indices, met), start=1):
        marker = "threshold met" if ok else "grid-capped fallback"
        print(f"  n={n}  p={1 + 1 / n:.4g}  N_{n}={N}  [{marker}]")
    paths = []
    # the base weight (t = 1) is what diagnose/welding/curve load, so it is
    # always archived even when absent from t_values
    for t in sorted(set(config.t_values) | {1.0}):
        powered = power_weight(M.values, t)
        header = dict(provenance)
        header["t"] = float(t)
        path = archive_path(outdir, config, t)
        save_archive(WeightArchive(header=header, samples=powered), path)
        paths.append(path)
    print(f"wrote {len(paths)} archives to {outdir}")
    return paths


def _load_bundle(config: ExperimentConfig, t: float) -> WeightBundle:
    path = archive_path(Path(config.output_dir), config, t)
    if not path.exists():
        raise ValidationError(f"missing weight archive: {path} (run build-weight first)")
    return load_archive(path).to_bundle()


def cmd_diagnose(config: ExperimentConfig) -> Path:
    """Diagnostic battery on the base weight (t = 1), one JSON report."""
    config.validate()
    bundle = _load_bundle(config, 1.0)
    family = config.interval_family or None
    report = diagnostics.diagnose(
        bundle,
        p_values=config.p_values,
        delta_values=config.delta_values,
        max_scale=min(config.max_scale, config.grid_exponent),
        family=family,
    )
    out = Path(config.output_dir) / f"diagnostics_{config.tag(1.0)}.json"
    out.write_text(report.to_json() + "\n")
    print(f"wrote {out}")
    return out


def cmd_welding(config: ExperimentConfig) -> Path:
    """Welding CSV per t plus one quasisymmetry/BMO table."""
    config.validate()
    bundle = _load_bundle(config, 1.0)
    table = {}
    outdir = Path(config.output_dir)
    log_omega = SampledFunction(bundle.grid_size, np.log(bundle.omega.values))
    bmo_log = diagnostics.bmo_norm(log_omega, "triadic")
    for t in config.t_values:
        wmap = welding.build_welding(bundle, t)
        welding.save_welding_csv(wmap, outdir / f"welding_{config.tag(t)}.csv")
        real, _imag = welding.log_derivative_parts(wmap, bundle)
        table[f"t_{t:g}"] = {
            "quasisymmetry": welding.quasisymmetry_constant(wmap, config.max_scale),
            "bmo_log_ht": diagnostics.bmo_norm(real, "triadic"),
            "t_times_bmo_log_omega": t * bmo_log,
            "total_mass": wmap.total_mass,
        }
    out = outdir / f"welding_table_{config.tag()}.json"
    out.write_text(json.dumps(table, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out}")
    return out


def cmd_curve(config: ExperimentConfig) -> Path:
    """Curve trace CSV plus chord-arc / Bloch / Jensen-H1 report."""
    config.validate()
    bundle = _load_bundle(config, 1.0)
    outdir = Path(config.output_dir)
    trace = conformal.trace_curve(bundle)
    conformal.save_curve_csv(trace, outdir / f"curve_{config.tag()}.csv")
    probe = conformal.jensen_h1_probe(bundle)
    report = {
        "chord_arc": conformal.chord_arc_scan(trace, config.pair_budget),
        "closure_defect": trace.closure_defect,
        "total_length": trace.total_length,
        "l1_norm": probe.h1_bound,
        "bloch": conformal.bloch_norm_probe(bundle),
        "jensen_min_gap": {f"r_{r:g}": v for r, v in probe.min_jensen_gap.items()},
        "h1_means": {f"r_{r:g}": v for r, v in probe.h1_means.items()},
        "h1_monotone": probe.monotone,
    }
    out = outdir / f"curve_report_{config.tag()}.json"
    out.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out}")
    return out


def cmd_report(config: ExperimentConfig) -> Path:
    """Collate every JSON report in the output directory into one summary."""
    config.validate()
    outdir = Path(config.output_dir)
    if not outdir.exists():
        raise ValidationError(f"missing output directory: {outdir}")
    summary = {}
    for path in sorted(outdir.glob("*.json")):
        if path.name == "summary.json":
            continue
        summary[path.name] = json.loads(path.read_text())
    out = outdir / "summary.json"
    out.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    rows = sorted(summary)
    print(f"collated {len(rows)} reports into {out}")
    for name in rows:
        print(f"  {name}")
    return out
