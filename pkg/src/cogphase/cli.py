"""Command-line interface: ``cogphase generate | run | inspect``.

All randomness flows from ``--seed``; there are no environment overrides.
A JSON run-spec file (``run --spec-file``) may supply any ``run`` option;
flags given on the command line win over file values.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cogphase import __version__
from cogphase.classifiers import NBParams, SVMParams
from cogphase.config import DEFAULT_CONFIG, STARPLUS_SIEVE_N, SYNTH_SEED
from cogphase.core import RngSeed
from cogphase.dataio import (
    SynthParams,
    generate_synthetic,
    is_generated,
    load_dataset,
    normalize_dim,
    save_dataset,
)
from cogphase.errors import CogPhaseError, InvalidParamsError
from cogphase.experiment import ConfigId, EvalReport, parse_configs, run_all
from cogphase.report import (
    format_confusion,
    format_dataset_summary,
    format_subject_summary,
    format_summary_table,
    write_report_json,
)
from cogphase.spectral import DhtMode

logger = logging.getLogger(__name__)


# =============================================================================
# Run specification
# =============================================================================

@dataclass
class RunSpec:
    """Everything ``run`` needs, from flags and/or a spec file."""
    data: List[Path] = field(default_factory=list)
    sidecar: List[Path] = field(default_factory=list)
    configs: Tuple[ConfigId, ...] = tuple(ConfigId)
    sieve_n: Optional[int] = None
    sieve_m: Optional[int] = None
    dht_mode: DhtMode = DhtMode.ANALYTIC
    repetitions: int = DEFAULT_CONFIG.repetitions
    seed: int = 0
    out: Path = Path("report.json")
    threads: int = 1
    show_confusion: bool = False
    export_masks: bool = False
    c_cap: float = DEFAULT_CONFIG.svm_c_cap
    max_passes: int = DEFAULT_CONFIG.svm_max_passes

    def __post_init__(self):
        self.data = [Path(p) for p in self.data]
        self.sidecar = [Path(p) for p in self.sidecar]
        self.configs = parse_configs(self.configs) if isinstance(self.configs, str) else tuple(
            c if isinstance(c, ConfigId) else ConfigId.parse(c) for c in self.configs
        )
        self.dht_mode = DhtMode(self.dht_mode)
        self.out = Path(self.out)
        if not self.data:
            raise InvalidParamsError("run needs at least one --data file")
        if self.sidecar and len(self.sidecar) != len(self.data):
            raise InvalidParamsError(
                f"got {len(self.sidecar)} --sidecar paths for {len(self.data)} --data files"
            )
        if not self.configs:
            raise InvalidParamsError("no configurations selected")
        if self.repetitions < 1:
            raise InvalidParamsError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.threads < 1:
            raise InvalidParamsError(f"threads must be >= 1, got {self.threads}")
        RngSeed(self.seed)

    @classmethod
    def from_sources(cls, args: argparse.Namespace) -> "RunSpec":
        """Merge a spec file (if any) with explicitly given flags."""
        values: Dict[str, Any] = {}
        if args.spec_file:
            loaded = json.loads(Path(args.spec_file).read_text(encoding="utf-8"))
            known = {f.name for f in fields(cls)}
            unknown = sorted(set(loaded) - known)
            if unknown:
                raise InvalidParamsError(f"unknown keys in spec file: {', '.join(unknown)}")
            values.update(loaded)
        for f in fields(cls):
            flag = getattr(args, f.name, None)
            if flag is not None and flag is not False:
                values[f.name] = flag
        return cls(**values)

    def report_path(self, subject_id: str, used: set) -> Path:
        if len(self.data) == 1:
            return self.out
        path = self.out.with_name(f"{self.out.stem}_{subject_id}{self.out.suffix}")
        i = 2
        while path in used:
            path = self.out.with_name(f"{self.out.stem}_{subject_id}_{i}{self.out.suffix}")
            i += 1
        return path


# =============================================================================
# Commands
# =============================================================================

def cmd_generate(args: argparse.Namespace) -> int:
    """Write a synthetic dataset and its sidecar."""
    defaults = SynthParams()
    params = SynthParams(
        n_features=args.n if args.n is not None else defaults.n_features,
        samples_per_class=(
            args.samples_per_class if args.samples_per_class is not None
            else defaults.samples_per_class
        ),
        harmonics=tuple(args.harmonics) if args.harmonics else defaults.harmonics,
        delta_phi=args.delta_phi if args.delta_phi is not None else defaults.delta_phi,
        gain_range=(
            args.gain_min if args.gain_min is not None else defaults.gain_range[0],
            args.gain_max if args.gain_max is not None else defaults.gain_range[1],
        ),
        noise_sigma=args.noise_sigma if args.noise_sigma is not None else defaults.noise_sigma,
        sign_flip=not args.no_sign_flip,
        scale_decades=(
            args.scale_decades if args.scale_decades is not None else defaults.scale_decades
        ),
        seed=args.seed,
    )
    ds = generate_synthetic(params)
    csv_path, sidecar = save_dataset(ds, args.out, args.sidecar,
                                     extra={"generator": params.to_dict()})
    counts = ds.class_counts()
    print(f"Dataset written: {csv_path} (sidecar {sidecar})")
    per_class = ", ".join(f"class {c.value}: {n}" for c, n in counts.items())
    print(f"  {ds.n_samples} samples x {ds.feature_dim} features, {per_class}")
    print(f"  seed {params.seed}, harmonics {list(params.harmonics)}, "
          f"delta_phi {params.delta_phi:.4f}, noise sigma {params.noise_sigma:g}")
    print(f"  sign flip {'on' if params.sign_flip else 'off'}, "
          f"scale decades {params.scale_decades:g}")
    return 0


def _resolve_sieve_n(spec: RunSpec, path: Path, sidecar: Optional[Path], n_data: int) -> int:
    """Explicit --sieve-n, else the data's N for generated sets, else the StarPlus N."""
    if spec.sieve_n is not None:
        return spec.sieve_n
    if is_generated(path, sidecar):
        return n_data
    return STARPLUS_SIEVE_N


def _run_subject(spec: RunSpec, path: Path, sidecar: Optional[Path] = None) -> EvalReport:
    ds = load_dataset(path, sidecar)
    sieve_n = _resolve_sieve_n(spec, path, sidecar, ds.feature_dim)
    logger.info("Using sieve N = %d for %s", sieve_n, path)
    ds = normalize_dim(ds, sieve_n)
    return run_all(
        ds,
        seed=spec.seed,
        repetitions=spec.repetitions,
        configs=spec.configs,
        sieve_n=sieve_n,
        sieve_m=spec.sieve_m,
        dht_mode=spec.dht_mode,
        nb_params=NBParams(),
        svm_params=SVMParams(c_cap=spec.c_cap, max_passes=spec.max_passes),
        n_jobs=spec.threads,
        export_masks=spec.export_masks,
    )


def cmd_run(args: argparse.Namespace) -> int:
    """Evaluate the selected configurations on every data file."""
    spec = RunSpec.from_sources(args)
    reports = []
    used: set = set()
    sidecars = spec.sidecar or [None] * len(spec.data)
    for path, sidecar in zip(spec.data, sidecars):
        report = _run_subject(spec, path, sidecar)
        out = spec.report_path(report.subject_id, used)
        used.add(out)
        write_report_json(report, out)
        reports.append(report)

        print(format_summary_table(report))
        if spec.show_confusion:
            for c in report.configs:
                print()
                print(format_confusion(c))
        print(f"Report written: {out}")

    if len(reports) > 1:
        print()
        print(format_subject_summary(reports))
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    ds = load_dataset(args.data, args.sidecar)
    print(format_dataset_summary(ds))
    return 0


# =============================================================================
# Parser
# =============================================================================

def _int_list(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogphase",
        description="Random-sieve phase features for two-class cognitive task decoding.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log progress (INFO)")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic phase-coded dataset")
    gen.add_argument("--out", type=Path, required=True, help="CSV output path")
    gen.add_argument("--sidecar", type=Path, help="sidecar path (default: <out>.json)")
    gen.add_argument("--seed", type=int, default=SYNTH_SEED)
    gen.add_argument("--n", type=int, help="feature dimension N (default 1024)")
    gen.add_argument("--samples-per-class", type=int, help="default 40")
    gen.add_argument("--harmonics", type=_int_list, help="harmonic bins, e.g. 3,7,12")
    gen.add_argument("--delta-phi", type=float, help="class phase separation in (0, pi]")
    gen.add_argument("--gain-min", type=float)
    gen.add_argument("--gain-max", type=float)
    gen.add_argument("--noise-sigma", type=float)
    gen.add_argument("--no-sign-flip", action="store_true",
                     help="keep every sample's polarity (default: half of each class negated)")
    gen.add_argument("--scale-decades", type=float,
                     help="spread of the log-uniform per-sample scale (default 5, 0 disables)")
    gen.set_defaults(func=cmd_generate)

    run = sub.add_parser("run", help="evaluate configurations C1..C8")
    run.add_argument("--data", type=Path, action="append",
                     help="dataset CSV (repeat for several subjects)")
    run.add_argument("--sidecar", type=Path, action="append",
                     help="sidecar for the matching --data (default: <data>.json)")
    run.add_argument("--spec-file", type=Path, help="JSON file with run options")
    run.add_argument("--configs", type=parse_configs, help="'all' or e.g. c1,c5 (default all)")
    run.add_argument("--sieve-n", type=int,
                     help=("feature dimension N; longer data is truncated (default: data's N for "
                           f"generated sets, {STARPLUS_SIEVE_N} otherwise)"))
    run.add_argument("--sieve-m", type=int, help="sieved positions per mask (default N/2)")
    run.add_argument("--dht-mode", choices=[m.value for m in DhtMode])
    run.add_argument("--repetitions", type=int, help="repetitions per sieve config (default 50)")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", type=Path, help="JSON report path (default report.json)")
    run.add_argument("--threads", type=int, help="worker threads (default 1)")
    run.add_argument("--c-cap", type=float, help="SVM box bound (default 1e8)")
    run.add_argument("--max-passes", type=int, help="SMO pass budget (default 200)")
    run.add_argument("--show-confusion", action="store_true",
                     help="print each configuration's mean confusion matrix")
    run.add_argument("--export-masks", action="store_true",
                     help="record each repetition's sieve indices in the report")
    run.set_defaults(func=cmd_run)

    ins = sub.add_parser("inspect", help="print a dataset summary")
    ins.add_argument("--data", type=Path, required=True)
    ins.add_argument("--sidecar", type=Path)
    ins.set_defaults(func=cmd_inspect)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.INFO if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CogPhaseError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
