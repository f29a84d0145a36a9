"""Command-line front end: run sweeps, persist CSV/JSONL results, compute gaps.

Output files are a pure function of the configuration (seed included), so
re-runs are byte-identical. Config files are flat key=value lines with `#`
comments; command-line flags override file values.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import ConfigurationError
from .harness import BerRecord, BerTable, SimulationConfig, run_point, run_sweep
from .precoder import SchemeMode

# Table-style pairwise comparisons emitted per SNR: conventional pair, the
# same pair reached through the unified family at u=0, and the u>0 pair.
GAP_PAIRS = (
    ("LZFP", "LMMSEP", "LZFP", "LMMSEP"),
    ("LZFP_u0", "LMMSEP_u0", "LZFP", "LMMSEP"),
    ("ULZFP", "ULMMSEP", "ULZFP", "ULMMSEP"),
)

_INT_KEYS = {"tx_antennas", "pool_users", "active_users", "realizations",
             "frames", "symbols_per_frame", "seed"}
_FLOAT_KEYS = {"snr_offset_db", "u", "m"}
_BOOL_KEYS = {"normalize_data_block_only"}
_LIST_KEYS = {"snr_db", "schemes"}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _LIST_KEYS


def _parse_bool(key: str, raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"key {key!r}: expected a boolean, got {raw!r}")


def read_config_file(path: str | Path) -> dict:
    """Parse a flat key=value config file; unknown keys are errors."""
    values: dict = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _FLOAT_KEYS:
                values[key] = float(raw)
            elif key in _BOOL_KEYS:
                values[key] = _parse_bool(key, raw)
            elif key == "snr_db":
                values[key] = tuple(float(v) for v in raw.split(",") if v.strip())
            elif key == "schemes":
                values[key] = tuple(v.strip() for v in raw.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{lineno}: key {key!r}: {exc}") from exc
    return values


def build_config(values: dict) -> SimulationConfig:
    """SimulationConfig from parsed key=value pairs, defaults for the rest."""
    u = float(values.pop("u", 1.0))
    m = float(values.pop("m", 1.0))
    labels = values.pop("schemes", ("LZFP", "LMMSEP", "ULZFP", "ULMMSEP"))
    schemes = tuple(SchemeMode.from_label(lbl, u=u, m=m) for lbl in labels)
    config = SimulationConfig(schemes=schemes, **values)
    config.validate()
    return config


def sci(x: float) -> str:
    """Scientific notation with 3 significant digits, e.g. 1.50e-1."""
    if x == 0:
        return "0.00e0"
    exp = math.floor(math.log10(abs(x)))
    mant = x / 10.0 ** exp
    # Rounding can push the mantissa to 10.00.
    if abs(round(mant, 2)) >= 10.0:
        mant /= 10.0
        exp += 1
    return f"{mant:.2f}e{exp}"


def emit_table(table: BerTable, path: str | Path, gaps_path: str | Path) -> None:
    """Write the result CSV and the pairwise-gap CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["snr_db", "scheme", "u", "m", "bit_errors", "bits_total",
                         "ber", "std_err", "low_confidence"])
        for r in table.records:
            writer.writerow([r.snr_db, r.scheme_label, r.u, r.m, r.bit_errors,
                             r.bits_total, sci(r.ber), sci(r.standard_error),
                             int(r.low_confidence)])
    emit_gaps(table, gaps_path)


def emit_gaps(table: BerTable, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["snr_db", "scheme_a", "scheme_b", "gap"])
        for snr_db in table.config.snr_db:
            for name_a, name_b, rec_a, rec_b in GAP_PAIRS:
                try:
                    gap = table.lookup(rec_a, snr_db).ber - table.lookup(rec_b, snr_db).ber
                except KeyError:
                    continue
                writer.writerow([snr_db, name_a, name_b, sci(gap)])


def emit_plot_data(table: BerTable, path: str | Path) -> None:
    """Long-format BER-vs-SNR series, one row per (snr, scheme)."""
    with open(path, "w", newline="") as fh:
        fh.write("# ber is best viewed on a log scale\n")
        writer = csv.writer(fh)
        writer.writerow(["snr_db", "scheme", "ber"])
        for r in table.records:
            writer.writerow([r.snr_db, r.scheme_label, sci(r.ber)])


def emit_run_log(table: BerTable, path: str | Path) -> None:
    """JSON-lines provenance log: full precision, one object per record."""
    digest = table.config.digest()
    with open(path, "w") as fh:
        for r in table.records:
            fh.write(json.dumps({
                "scheme": r.scheme_label, "u": r.u, "m": r.m, "snr_db": r.snr_db,
                "bit_errors": r.bit_errors, "bits_total": r.bits_total,
                "ber": r.ber, "std_err": r.standard_error,
                "low_confidence": r.low_confidence,
                "seed": table.config.seed, "config_sha256": digest,
                "version": table.version,
            }, sort_keys=True) + "\n")


def read_table_csv(path: str | Path) -> list[BerRecord]:
    """Reconstruct records from a result CSV; exact, via the integer counts."""
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(BerRecord(
                scheme_label=row["scheme"], u=float(row["u"]), m=float(row["m"]),
                snr_db=float(row["snr_db"]), bit_errors=int(row["bit_errors"]),
                bits_total=int(row["bits_total"]),
            ))
    return records


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--snr", help="comma-separated SNR list in dB")
    parser.add_argument("--schemes", help="comma-separated scheme labels")
    parser.add_argument("--realizations", type=int, help="Monte Carlo channel realizations")
    parser.add_argument("--frames", type=int, help="frames per realization")
    parser.add_argument("--symbols", type=int, help="symbol vectors per frame")
    parser.add_argument("--workers", type=int, default=1, help="parallel workers")
    parser.add_argument("--snr-offset-db", type=float, help="global SNR calibration offset")
    parser.add_argument("--out", default=".", help="output directory")


def _config_from_args(args) -> SimulationConfig:
    values = read_config_file(args.config) if args.config else {}
    if args.seed is not None:
        values["seed"] = args.seed
    if args.snr is not None:
        values["snr_db"] = tuple(float(v) for v in args.snr.split(",") if v.strip())
    if args.schemes is not None:
        values["schemes"] = tuple(v.strip() for v in args.schemes.split(",") if v.strip())
    if args.realizations is not None:
        values["realizations"] = args.realizations
    if args.frames is not None:
        values["frames"] = args.frames
    if args.symbols is not None:
        values["symbols_per_frame"] = args.symbols
    if args.snr_offset_db is not None:
        values["snr_offset_db"] = args.snr_offset_db
    return build_config(values)


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = run_sweep(config, workers=args.workers)
    emit_table(table, out / "results.csv", out / "gaps.csv")
    emit_plot_data(table, out / "plot.csv")
    emit_run_log(table, out / "run_log.jsonl")
    print(f"wrote {len(table.records)} records to {out / 'results.csv'}")
    return 0


def _cmd_point(args) -> int:
    config = _config_from_args(args)
    scheme = SchemeMode.from_label(args.scheme, u=args.u, m=args.m)
    record = run_point(config, scheme, args.point_snr, workers=args.workers)
    print("snr_db,scheme,u,m,bit_errors,bits_total,ber,std_err,low_confidence")
    print(",".join(str(v) for v in [
        record.snr_db, record.scheme_label, record.u, record.m, record.bit_errors,
        record.bits_total, sci(record.ber), sci(record.standard_error),
        int(record.low_confidence)]))
    return 0


def _cmd_gaps(args) -> int:
    records = read_table_csv(args.table)
    by_key = {(r.scheme_label, r.snr_db): r for r in records}
    snrs = sorted({r.snr_db for r in records})
    rows = []
    for snr_db in snrs:
        for name_a, name_b, rec_a, rec_b in GAP_PAIRS:
            a = by_key.get((rec_a, snr_db))
            b = by_key.get((rec_b, snr_db))
            if a is None or b is None:
                continue
            rows.append([snr_db, name_a, name_b, sci(a.ber - b.ber)])
    writer = csv.writer(sys.stdout)
    writer.writerow(["snr_db", "scheme_a", "scheme_b", "gap"])
    writer.writerows(rows)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ulpsim",
        description="Multi-user MIMO precoding BER simulator (ZF/MMSE/unified)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run the full SNR x scheme sweep")
    _add_common_flags(sweep)
    sweep.set_defaults(func=_cmd_sweep)

    point = sub.add_parser("point", help="run a single (scheme, SNR) cell")
    _add_common_flags(point)
    point.add_argument("--scheme", required=True, help="scheme label")
    point.add_argument("--point-snr", "--snr-db", dest="point_snr", type=float,
                       required=True, help="operating SNR in dB")
    point.add_argument("--u", type=float, default=1.0, help="augmentation weight")
    point.add_argument("--m", type=float, default=1.0, help="regularizer multiplier")
    point.set_defaults(func=_cmd_point)

    gaps = sub.add_parser("gaps", help="pairwise BER gaps from an existing result CSV")
    gaps.add_argument("--table", required=True, help="result CSV from a sweep")
    gaps.set_defaults(func=_cmd_gaps)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
