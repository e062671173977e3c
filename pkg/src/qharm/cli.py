"""Command-line interface: ``qharm {simulate,spectrum,montecarlo}``.

Every experiment parameter can come from a flat key=value config file
(``--config``) and be overridden by the flag of the same name. Numbers,
grids (start:stop:step), SNR values ("40", "inf", or "25:45:5"), and
harmonic lists ("2:0.06,3:0.06", relative to the fundamental amplitude)
share one parser between the file and the flags.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .experiment import ExperimentConfig, run_montecarlo, run_simulate, run_spectrum

_TRIPLE_KEYS = ("grid",)
_INT_KEYS = ("trials", "k", "m", "m0", "seed", "count")
_FLOAT_KEYS = (
    "fundamental_hz",
    "sample_rate_hz",
    "phase_rad",
    "v1",
    "threshold_db",
    "pairing_tol_hz",
    "miss_tolerance_hz",
)


def _parse_triple(raw: str) -> tuple[float, float, float]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected START:STOP:STEP, got {raw!r}")
    return (float(parts[0]), float(parts[1]), float(parts[2]))


def _parse_harmonics(raw: str) -> tuple[tuple[int, float], ...]:
    if not raw.strip():
        return ()
    out = []
    for item in raw.split(","):
        order, _, amp = item.partition(":")
        if not amp:
            raise ValueError(f"expected ORDER:RELATIVE_AMPLITUDE, got {item!r}")
        out.append((int(order), float(amp)))
    return tuple(out)


def _convert(key: str, raw: str, params: dict) -> None:
    """Convert one config key's raw string and update the parameter dict."""
    if key == "out":
        params["output_dir"] = raw
    elif key == "model":
        params["models"] = ("complex", "quaternion") if raw == "both" else (raw,)
    elif key == "estimator":
        params["estimators"] = ("ft", "mvdr", "music") if raw == "all" else (raw,)
    elif key == "snr":
        if ":" in raw:
            params["snr_sweep"] = _parse_triple(raw)
            params["snr_db"] = None
        else:
            params["snr_db"] = float(raw)
            params["snr_sweep"] = None
    elif key == "harmonics":
        params["harmonics"] = _parse_harmonics(raw)
    elif key in _TRIPLE_KEYS:
        params[key] = _parse_triple(raw)
    elif key in _INT_KEYS:
        params[key] = int(raw)
    elif key in _FLOAT_KEYS:
        params[key] = float(raw)
    else:
        raise ValueError(f"unknown configuration key {key!r}")


def _read_config_file(path: str, params: dict) -> None:
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].split(";", 1)[0].strip()
            if not text or text.startswith("["):
                continue
            key, sep, value = text.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {line.rstrip()!r}")
            _convert(key.strip(), value.strip(), params)


_FLAG_HELP = {
    "out": "output directory for CSV artifacts",
    "seed": "master seed; Monte Carlo trial t uses seed XOR t",
    "grid": "frequency grid START:STOP:STEP in Hz (signed)",
    "model": "signal embedding to analyze",
    "estimator": "spectrum estimator to run",
    "snr": 'SNR in dB ("40", "inf") or sweep START:STOP:STEP',
    "trials": "Monte Carlo trials per SNR point",
    "k": "number of snapshot columns in the covariance estimate",
    "m": "covariance window length (matrix dimension)",
    "m0": "noise subspace dimension for MUSIC",
    "fundamental_hz": "fundamental frequency in Hz",
    "sample_rate_hz": "sample rate in Hz",
    "phase_rad": "initial phase in radians",
    "v1": "fundamental amplitude (absolute)",
    "harmonics": "extra harmonics as ORDER:REL_AMP[,ORDER:REL_AMP...]",
    "threshold_db": "keep peaks within this many dB of the spectrum maximum",
    "pairing_tol_hz": "mirror-pair tolerance in Hz (default: two grid steps)",
    "miss_tolerance_hz": "treat errors above this as misses in Monte Carlo runs",
    "count": "number of samples to generate",
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="flat key=value config file")
    for key, help_text in _FLAG_HELP.items():
        flag = "--" + key.replace("_", "-")
        if key == "model":
            parser.add_argument(flag, choices=["complex", "quaternion", "both"], help=help_text)
        elif key == "estimator":
            parser.add_argument(flag, choices=["ft", "mvdr", "music", "all"], help=help_text)
        else:
            parser.add_argument(flag, default=None, help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qharm",
        description="Quaternion-domain harmonic analysis of three-phase signals",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "write raw three-phase, complex, and quaternion series CSVs"),
        ("spectrum", "estimate spectra for one realization and classify the peaks"),
        ("montecarlo", "sweep SNR and tabulate frequency-estimation errors"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    params: dict = {}
    if args.config:
        _read_config_file(args.config, params)
    for key in _FLAG_HELP:
        value = getattr(args, key, None)
        if value is not None:
            _convert(key, str(value), params)
    valid = {f.name for f in fields(ExperimentConfig)}
    unknown = set(params) - valid
    if unknown:
        raise ValueError(f"unknown configuration fields: {sorted(unknown)}")
    return ExperimentConfig(**params)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "simulate":
            if config.output_dir is None:
                raise ValueError("simulate needs --out DIR")
            written = run_simulate(config)
            for path in written:
                print(path)
        elif args.command == "spectrum":
            if config.output_dir is None:
                raise ValueError("spectrum needs --out DIR")
            result = run_spectrum(config)
            print(result.summary, end="")
            written = result.written
        else:
            if config.output_dir is None:
                raise ValueError("montecarlo needs --out DIR")
            mc = run_montecarlo(config)
            print(mc.summary, end="")
            written = mc.written
        missing = [p for p in written if not p.exists()]
        if missing:
            print(f"error: failed to write {missing}", file=sys.stderr)
            return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
