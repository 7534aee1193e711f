"""Command-line entry point: ``polarmlc <subcommand> ...``; every table is CSV.

Exit status: 0 on success, 2 for invalid arguments or inputs, 3 when a
numerical routine fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import construction, latency, mlc, simulate
from .exceptions import NumericalRangeError
from .polar import format_code_file, read_code_file

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included within half a step), a comma list, or one value."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must look like start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise UsageError(f"grid {text!r} needs step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 0.5)) + 1
        return [round(start + k * step, 12) for k in range(count)]
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None


def _num(x: float) -> str:
    return format(float(x), ".10g")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _epsilon(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 0.5:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 0.5), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polarmlc", description=__doc__.splitlines()[0])
    p.add_argument("--output", "-o", help="write results here instead of standard output")
    p.add_argument("--quiet", "-q", action="store_true", help="suppress progress messages")
    # the same flags after the subcommand; SUPPRESS keeps the top-level values otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS,
                        help="write results here instead of standard output")
    common.add_argument("--quiet", "-q", action="store_true", default=argparse.SUPPRESS,
                        help="suppress progress messages")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)
    sub.add_parser = add_parser

    s = sub.add_parser("construct", help="design an information set by GA density evolution")
    s.add_argument("--n", type=_positive_int, required=True, help="tree depth, N = 2**n")
    s.add_argument("--k", type=int, required=True, help="number of information bits K")
    s.add_argument("--design-snr-db", type=float, default=None,
                   help="design Es/sigma^2 in dB (default: SNR where BPSK capacity = K/N + gap)")
    s.add_argument("--capacity-gap", type=float, default=0.02,
                   help="capacity margin of the default design rule (default 0.02)")
    s.add_argument("--list-size", type=_positive_int, default=None,
                   help="list size recorded in the emitted code file")

    s = sub.add_parser("tc", help="decoding time complexity of one code")
    s.add_argument("--code", required=True, help="code description file (n=, L=, A= lines)")
    s.add_argument("--list-size", type=_positive_int, default=None,
                   help="list size L (default: the file's L= line)")

    s = sub.add_parser("tc-sweep", help="time complexity against code rate")
    s.add_argument("--n", type=_positive_int, required=True,
                   help="tree depth / per-level block length 2**n")
    s.add_argument("--list-size", type=_positive_int, required=True, help="list size L")
    s.add_argument("--rates", required=True, help="rate grid, e.g. 0.05:0.95:0.05")
    s.add_argument("--design-snr-db", type=float, default=None,
                   help="fixed design SNR for every rate (default: per-rate capacity rule)")
    s.add_argument("--capacity-gap", type=float, default=0.02,
                   help="capacity margin of the default design rule (default 0.02)")

    s = sub.add_parser("mlc-rates", help="per-level conditional mutual information of M-ASK")
    s.add_argument("--m", type=int, required=True, help="bits per symbol, M = 2**m")
    s.add_argument("--snr-db", required=True, help="SNR grid Es/sigma^2 in dB")
    s.add_argument("--msb-first", action="store_true",
                   help="level 1 = most significant label bit (default: least significant)")

    s = sub.add_parser("mlc-tc", help="time complexity of multi-level polar coding")
    s.add_argument("--m", type=int, required=True, help="bits per symbol, M = 2**m")
    s.add_argument("--n", type=_positive_int, required=True, help="per-level block length 2**n")
    s.add_argument("--list-size", type=_positive_int, required=True, help="list size L")
    s.add_argument("--epsilon", type=_epsilon, default=0.01,
                   help="levels with rate below eps are frozen, above 1-eps uncoded (default 0.01)")
    s.add_argument("--snr-db", required=True,
                   help="SNR grid Es/sigma^2 in dB: start:stop:step, a,b,c or one value")
    s.add_argument("--msb-first", action="store_true",
                   help="level 1 = most significant label bit (default: least significant)")

    s = sub.add_parser("simulate", help="Monte-Carlo BPSK/AWGN simulation of one code")
    s.add_argument("--code", required=True, help="code description file (n=, L=, A= lines)")
    s.add_argument("--list-size", type=_positive_int, default=None,
                   help="list size L (default: the file's L= line)")
    s.add_argument("--snr-db", required=True,
                   help="SNR grid Es/sigma^2 in dB: start:stop:step, a,b,c or one value")
    s.add_argument("--frames", type=_positive_int, required=True, help="frames per SNR point")
    s.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    s.add_argument("--fast-nodes", action="store_true", help="use Rate-0/Rate-1 shortcuts")
    s.add_argument("--max-frame-errors", type=_positive_int, default=None,
                   help="stop a point early once this many frames failed")
    s.add_argument("--workers", type=_positive_int, default=1,
                   help="worker processes (results do not depend on it)")

    s = sub.add_parser("simulate-mlc", help="Monte-Carlo simulation of multi-stage decoding")
    s.add_argument("--m", type=int, required=True, help="bits per symbol, M = 2**m")
    s.add_argument("--n", type=_positive_int, required=True,
                   help="tree depth / per-level block length 2**n")
    s.add_argument("--list-size", type=_positive_int, required=True, help="list size L")
    s.add_argument("--epsilon", type=_epsilon, default=0.01,
                   help="levels with rate below eps are frozen, above 1-eps uncoded (default 0.01)")
    s.add_argument("--snr-db", required=True,
                   help="SNR grid Es/sigma^2 in dB: start:stop:step, a,b,c or one value")
    s.add_argument("--frames", type=_positive_int, required=True, help="frames per SNR point")
    s.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    s.add_argument("--genie", action="store_true",
                   help="condition each level on the true lower-level bits")
    s.add_argument("--msb-first", action="store_true",
                   help="level 1 = most significant label bit (default: least significant)")
    s.add_argument("--fast-nodes", action="store_true", help="use Rate-0/Rate-1 shortcuts")
    s.add_argument("--max-frame-errors", type=_positive_int, default=None,
                   help="stop a point early once this many frames failed")
    s.add_argument("--workers", type=_positive_int, default=1,
                   help="worker processes (results do not depend on it)")
    return p


def _check_m(m):
    if not 1 <= m <= 8:
        raise UsageError(f"--m must lie in 1..8, got {m}")


def _load_code(args):
    code, file_L = read_code_file(args.code)
    L = args.list_size if args.list_size is not None else file_L
    if L is None:
        raise UsageError("no list size: pass --list-size or add L= to the code file")
    return code, L


def _cmd_construct(args, out, log):
    N = 2 ** args.n
    if not 0 <= args.k <= N:
        raise UsageError(f"--k must lie in 0..{N}")
    code = construction.construct_code(args.n, args.k, args.design_snr_db, args.capacity_gap)
    out.write(format_code_file(code, args.list_size))


def _cmd_tc(args, out, log):
    code, L = _load_code(args)
    report = latency.tc_code(code, L)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["total_tc", report.total])
    w.writerow(["depth", "index", "first_leaf", "last_leaf", "kind", "cost"])
    for item in report.breakdown:
        v = item.node
        w.writerow([v.depth, v.index, v.first_leaf, v.last_leaf, item.kind.value, item.cost])


def _cmd_tc_sweep(args, out, log):
    rates = parse_grid(args.rates)
    if any(not 0 < r < 1 for r in rates):
        raise UsageError("rates must lie in (0, 1)")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["rate", "K", "tc"])
    for r in rates:
        row = latency.tc_rate_sweep(args.n, args.list_size, [r], args.design_snr_db,
                                    args.capacity_gap)[0]
        w.writerow([_num(row.rate), row.K, row.tc])
        log(f"rate {row.rate}: tc {row.tc}")


def _cmd_mlc_rates(args, out, log):
    _check_m(args.m)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["snr_db"] + [f"rate_{i + 1}" for i in range(args.m)] + ["total_mi"])
    for snr in parse_grid(args.snr_db):
        lr = mlc.level_rates(args.m, snr, args.msb_first)
        w.writerow([_num(snr)] + [_num(r) for r in lr.rates] + [_num(lr.total)])


def _cmd_mlc_tc(args, out, log):
    _check_m(args.m)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["snr_db"] + [f"tc_{i + 1}" for i in range(args.m)] + ["tc_total"])
    for snr in parse_grid(args.snr_db):
        row = mlc.mlc_tc_sweep(args.m, [snr], args.n, args.list_size, args.epsilon,
                               args.msb_first)[0]
        w.writerow([_num(snr)] + list(row.level_tc) + [row.total_tc])
        log(f"snr {snr} dB: tc {row.total_tc}")


_SIM_COLUMNS = ["snr_db", "frames", "bit_errors", "frame_errors", "ber", "fer"]


def _sim_cells(snr, r):
    return [_num(snr), r.frames, r.bit_errors, r.frame_errors, _num(r.ber), _num(r.fer)]


def _cmd_simulate(args, out, log):
    code, L = _load_code(args)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(_SIM_COLUMNS)
    for snr in parse_grid(args.snr_db):
        r = simulate.run_single_code(code, L, simulate.ChannelConfig(snr, args.seed), args.frames,
                                     fast_nodes=args.fast_nodes, workers=args.workers,
                                     max_frame_errors=args.max_frame_errors)
        w.writerow(_sim_cells(snr, r))
        log(f"snr {snr} dB: fer {r.fer:.3g}")


def _cmd_simulate_mlc(args, out, log):
    _check_m(args.m)
    w = csv.writer(out, lineterminator="\n")
    level_cols = []
    for i in range(1, args.m + 1):
        level_cols += [f"status_{i}", f"rate_{i}", f"bit_errors_{i}", f"frame_errors_{i}"]
    w.writerow(_SIM_COLUMNS + ["symbol_errors"] + level_cols)
    for snr in parse_grid(args.snr_db):
        design = mlc.design_mlc(args.m, snr, args.n, args.list_size, args.epsilon, args.msb_first)
        r = simulate.run_mlc(design, simulate.ChannelConfig(snr, args.seed), args.frames,
                             genie=args.genie, fast_nodes=args.fast_nodes, workers=args.workers,
                             max_frame_errors=args.max_frame_errors)
        cells = _sim_cells(snr, r.aggregate) + [r.symbol_errors]
        for lv, res in zip(design.levels, r.levels):
            cells += [lv.status.value, _num(lv.rate), res.bit_errors, res.frame_errors]
        w.writerow(cells)
        log(f"snr {snr} dB: fer {r.aggregate.fer:.3g}")


_COMMANDS = {
    "construct": _cmd_construct,
    "tc": _cmd_tc,
    "tc-sweep": _cmd_tc_sweep,
    "mlc-rates": _cmd_mlc_rates,
    "mlc-tc": _cmd_mlc_tc,
    "simulate": _cmd_simulate,
    "simulate-mlc": _cmd_simulate_mlc,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    def log(msg):
        if not args.quiet:
            print(msg, file=sys.stderr)

    buf = io.StringIO()
    try:
        _COMMANDS[args.command](args, buf, log)
    except NumericalRangeError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
