"""Command-line front end.

Every subcommand takes the same core flags.  Multi-valued flags (``--code``,
``--distance``, ``--p``, ``--asymmetry``) accept comma-separated lists where
the subcommand sweeps over them.  A flat ``key = value`` file given with
``--config`` supplies defaults; flags on the command line override it.

Exit status is 0 on success, 2 on a usage error and 1 on an internal failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
import traceback
from typing import Optional, Sequence

from . import __version__
from .analysis import (
    DEFAULT_BUDGET,
    beta,
    class_label,
    classes,
    enumerate_fractions,
    lemma1_count,
    lemma1_fraction,
    pl_approx,
    weight_enumerator,
)
from .channel import make_channel, parse_asymmetry
from .codes import FAMILIES, build_code
from .decoder import MatchingDecoder, residual_class, update_weights
from .montecarlo import CSV_FIELDS, grid, read_csv, run, to_csv
from .pauli import PauliOperator, compose, syndrome

PROG = "zzzy"
SUBCOMMANDS = ("build", "decode", "enumerate", "analyze", "simulate", "plot")


class UsageError(Exception):
    """Bad flag values detected after argparse has accepted the syntax."""


# -- value parsers ----------------------------------------------------------


def _split(text) -> list[str]:
    if isinstance(text, list):
        return text
    items = [t.strip() for t in str(text).split(",")]
    if not all(items):
        raise argparse.ArgumentTypeError(f"empty item in list {text!r}")
    return items


def families(text) -> list[str]:
    out = _split(text)
    for f in out:
        if f not in FAMILIES:
            raise argparse.ArgumentTypeError(f"unknown code {f!r}; choose from {', '.join(FAMILIES)}")
    return out


def distances(text) -> list[int]:
    out = []
    for item in _split(text):
        try:
            d = int(item)
        except ValueError:
            raise argparse.ArgumentTypeError(f"distance must be an integer, got {item!r}") from None
        if d < 3 or d % 2 == 0:
            raise argparse.ArgumentTypeError(f"distance must be odd and >= 3, got {d}")
        out.append(d)
    return out


def probabilities(text) -> list[float]:
    out = []
    for item in _split(text):
        try:
            p = float(item)
        except ValueError:
            raise argparse.ArgumentTypeError(f"p must be a number, got {item!r}") from None
        if not 0 <= p <= 1:
            raise argparse.ArgumentTypeError(f"p must lie in [0, 1], got {p}")
        out.append(p)
    return out


def asymmetries(text) -> list[float]:
    out = []
    for item in _split(text):
        try:
            out.append(parse_asymmetry(item))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return out


def positive_int(text) -> int:
    try:
        value = int(float(text)) if "e" in str(text).lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def nonnegative_int(text) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def boolean(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


# -- config files -------------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file.  ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise UsageError(f"{path}:{lineno}: empty key")
            out[key.replace("-", "_")] = value
    return out


# -- parser -------------------------------------------------------------------


def _common(sub: argparse.ArgumentParser, multi: bool) -> None:
    sub.add_argument("--code", type=families, default=["zzzy"], help="code family" + (" list" if multi else ""))
    sub.add_argument("--distance", type=distances, default=[3], help="odd code distance" + (" list" if multi else ""))
    sub.add_argument("--out", help="write output here instead of stdout")
    sub.add_argument("--config", help="flat key = value file of defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="ZZZY, surface and XZZX codes with matching decoders.")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    subs = parser.add_subparsers(dest="command", metavar="command")
    subs.required = True

    sub = subs.add_parser("build", help="print the stabilizer generators")
    _common(sub, multi=False)

    sub = subs.add_parser("decode", help="decode one error and report the outcome")
    _common(sub, multi=False)
    sub.add_argument("--error", required=True, help='error such as "Z2 Z3" (1-based qubits)')
    sub.add_argument("--trace", action="store_true", help="show weights, both matchings and the flip step")
    sub.add_argument("--no-weights", dest="weights", action="store_false", help="skip the weight update")
    sub.add_argument("--no-safeguard", dest="safeguard", action="store_false", help="never fall back to plain matching")

    sub = subs.add_parser("enumerate", help="fractions of uncorrected weight-j errors per class")
    _common(sub, multi=False)
    sub.add_argument("--weight", type=positive_int, help="error weight j (default t+1)")
    sub.add_argument("--budget", type=positive_int, default=DEFAULT_BUDGET, help="maximum exhaustive decodes")
    sub.add_argument("--sample", action="store_true", help="sample classes that exceed the budget")
    sub.add_argument("--samples-per-class", type=positive_int, default=10**6, help="draws per class when sampling")
    sub.add_argument("--seed", type=nonnegative_int, default=0, help="seed for sampling and random ties")
    sub.add_argument("--tie-break", choices=("deterministic", "random"), default="deterministic", help="matching tie rule")
    sub.add_argument("--no-weights", dest="weights", action="store_false", help="skip the weight update")
    sub.add_argument("--no-safeguard", dest="safeguard", action="store_false", help="never fall back to plain matching")

    sub = subs.add_parser("analyze", help="beta, approximate logical error rate, row-confined failure counts, enumerator")
    _common(sub, multi=True)
    sub.add_argument("--p", type=probabilities, default=[0.001], help="physical error rate list")
    sub.add_argument("--asymmetry", type=asymmetries, default=[math.inf], help="p_z/p_x list, inf for phase flip")
    sub.add_argument("--wep", action="store_true", help="emit the undetectable-error weight enumerator")
    sub.add_argument("--budget", type=positive_int, default=DEFAULT_BUDGET, help="maximum exhaustive decodes")
    sub.add_argument("--sample", action="store_true", help="sample classes that exceed the budget")
    sub.add_argument("--samples-per-class", type=positive_int, default=10**6, help="draws per class when sampling")
    sub.add_argument("--seed", type=nonnegative_int, default=0, help="sampling seed")

    sub = subs.add_parser("simulate", help="Monte Carlo logical error rates as CSV")
    _common(sub, multi=True)
    sub.add_argument("--p", type=probabilities, default=[0.001], help="physical error rate list")
    sub.add_argument("--asymmetry", type=asymmetries, default=[math.inf], help="p_z/p_x list, inf for phase flip")
    sub.add_argument("--trials", type=positive_int, default=10**6, help="trials per configuration")
    sub.add_argument("--seed", type=nonnegative_int, default=0, help="Philox key")
    sub.add_argument("--workers", type=positive_int, default=1, help="worker processes (results do not depend on it)")

    sub = subs.add_parser("plot", help="SVG of p_L against A or p from simulate or analyze CSV")
    sub.add_argument("--in", dest="inputs", action="append", required=True, help="CSV file (repeatable)")
    sub.add_argument("--x", choices=("A", "p"), default="A", help="horizontal axis")
    sub.add_argument("--title", default="", help="chart title")
    sub.add_argument("--out", required=True, help="SVG path")
    sub.add_argument("--config", help="flat key = value file of defaults")
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    # first pass only locates the subcommand and --config, so flags a config
    # file may supply are not yet required
    required = [
        a for name in SUBCOMMANDS for a in _subparser(parser, name)._actions if a.required
    ]
    for action in required:
        action.required = False
    args = parser.parse_args(argv)
    for action in required:
        action.required = True
    if args.config:
        values = read_config(args.config)
        sub = _subparser(parser, args.command)
        known = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
        defaults = {}
        for key, raw in values.items():
            action = known.get(key)
            if action is None:
                raise UsageError(f"{args.config}: unknown key {key!r} for {args.command}")
            if action.nargs == 0:
                # keys name the destination, so "weights = false" reads naturally
                value = boolean(raw)
            elif action.type is not None:
                try:
                    value = action.type(raw)
                except argparse.ArgumentTypeError as exc:
                    raise UsageError(f"{args.config}: {key}: {exc}") from None
            else:
                value = raw
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"{args.config}: {key}: {value!r} not in {sorted(action.choices)}")
            if isinstance(action, argparse._AppendAction):
                value = [value]
            defaults[key] = value
        sub.set_defaults(**defaults)
        for action in sub._actions:
            if action.dest in defaults:
                action.required = False
    return parser.parse_args(argv)


# -- output helpers ------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, list):
        return ",".join(_fmt(v) for v in value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return str(value)


def header_lines(args: argparse.Namespace) -> list[str]:
    """Tool version plus every resolved option, one comment line each."""
    lines = [f"{PROG} {__version__}", f"command: {args.command}"]
    for key in sorted(vars(args)):
        if key in ("command", "out"):
            continue
        lines.append(f"{key} = {_fmt(getattr(args, key))}")
    return lines


def _emit(args: argparse.Namespace, body: str, stdout, commented: bool = False) -> None:
    """Write ``body`` to ``--out`` (with header) or to ``stdout``."""
    header = "".join(f"# {line}\n" for line in header_lines(args))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(header + body)
    else:
        stdout.write((header if commented else "") + body)


def _single(args: argparse.Namespace) -> tuple[str, int]:
    if len(args.code) != 1 or len(args.distance) != 1:
        raise UsageError(f"{args.command} takes a single --code and --distance")
    return args.code[0], args.distance[0]


# -- subcommands ------------------------------------------------------------------


def cmd_build(args, stdout) -> None:
    family, d = _single(args)
    _emit(args, build_code(family, d).dump() + "\n", stdout)


def cmd_decode(args, stdout) -> None:
    family, d = _single(args)
    code = build_code(family, d)
    try:
        e = PauliOperator.from_string(code.n, args.error)
    except ValueError as exc:
        raise UsageError(f"--error: {exc}") from None
    dec = MatchingDecoder(code, use_weights=args.weights, safeguard=args.safeguard)
    s = syndrome(code, e)
    result = dec.decode(s)
    residual = compose(e, result.e_hat)
    outcome = residual_class(e, result.e_hat, code)

    def labels(rows) -> str:
        return " ".join(code.label(r) for r in sorted(rows, key=lambda r: code.labels[r])) or "none"

    def pairs(p) -> str:
        if not p.pairing:
            return "none"
        parts = [f"{code.label(a)}-{'boundary' if b is None else code.label(b)}" for a, b in p.pairing]
        return ", ".join(parts) + f"  (cost {p.cost:.4g})"

    out = [f"code: [[{code.n},1,{code.d}]] {code.family}", f"error: {e}"]
    out.append(f"syndrome: {labels(i for i in range(code.r) if s[i])}")
    if args.trace:
        prim, sec = dec.pass_operators(result)
        if dec.use_weights:
            q = update_weights(s, [1.0] * code.n, code)
            out.append("weights: " + " ".join(f"q({qb + 1})={q[qb]:g}" for qb in code.y_qubits))
            if result.fallback:
                weighted = MatchingDecoder(code, safeguard=False).decode(s).e_hat
                out.append(
                    f"safeguard: weighted matching gives {weighted} (weight {weighted.weight}); "
                    f"plain matching gives weight {result.e_hat.weight} <= t = {code.t}, "
                    "so the uniform-weight passes below are used"
                )
        else:
            out.append("weights: uniform")
        out.append(f"primary matching: {pairs(result.primary)}")
        out.append(f"primary correction: {prim}")
        if result.flipped_rows:
            flips = ", ".join(f"{code.label(r)} (Y on qubit {code.h_map[r] + 1})" for r in result.flipped_rows)
            out.append(f"flip step: toggled {flips}")
        else:
            out.append("flip step: none")
        out.append(f"secondary syndrome: {labels(i for i in code.z_rows if result.flipped[i])}")
        out.append(f"secondary matching: {pairs(result.secondary)}")
        out.append(f"secondary correction: {sec}")
    out.append(f"correction: {result.e_hat}")
    out.append(f"residual: {residual}")
    out.append(f"outcome: {outcome.value}")
    _emit(args, "\n".join(out) + "\n", stdout)


def _table(table, j: int) -> str:
    cols = [class_label(j, i, l) for i, l in classes(j)]
    width = max(7, max(len(c) for c in cols) + 2)
    name = f"{table.family} d={table.d}"
    lines = [
        f"{'code':<16}" + "".join(f"{c:>{width}}" for c in cols),
        f"{name:<16}" + "".join(f"{_sig2(table.f(i, l)):>{width}}" for i, l in classes(j)),
        "",
        "exact counts (failures/patterns):",
    ]
    for i, l in classes(j):
        st = table.stats[(i, l)]
        tag = "" if st.exact else f"  sampled, 95% CI [{st.ci()[0]:.3g}, {st.ci()[1]:.3g}]"
        lines.append(f"  {class_label(j, i, l):<{width}} {st.failures}/{st.total}{tag}")
    return "\n".join(lines) + "\n"


def _sig2(x: float) -> str:
    return "0" if x == 0 else f"{x:.2g}"


def _table_csv(table, j: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "d", "j", "class", "i", "l", "numerator", "denominator", "fraction", "exact"])
    for i, l in classes(j):
        st = table.stats[(i, l)]
        w.writerow([table.family, table.d, j, class_label(j, i, l), i, l, st.failures, st.total, f"{st.fraction:.6g}", int(st.exact)])
    return buf.getvalue()


def cmd_enumerate(args, stdout) -> None:
    family, d = _single(args)
    code = build_code(family, d)
    j = args.weight or code.t + 1
    if j > code.t + 1:
        raise UsageError(f"--weight must be at most t+1 = {code.t + 1} for d={d}")
    start = time.perf_counter()
    table = enumerate_fractions(
        code,
        j,
        decoder=MatchingDecoder(code, use_weights=args.weights, safeguard=args.safeguard),
        budget=args.budget,
        sample=args.sample,
        samples_per_class=args.samples_per_class,
        seed=args.seed,
        tie_break=args.tie_break,
    )
    elapsed = time.perf_counter() - start
    if args.out:
        _emit(args, _table_csv(table, j), stdout)
    stdout.write(_table(table, j))
    stdout.write(f"elapsed: {elapsed:.1f} s\n")


ANALYZE_FIELDS = ("family", "d", "p", "A", "quantity", "value")


def cmd_analyze(args, stdout) -> None:
    rows = []
    for family in args.code:
        for d in args.distance:
            code = build_code(family, d)
            if args.wep:
                wep = weight_enumerator(code)
                for w, c in wep.nonzero().items():
                    rows.append((family, d, "", "", f"wep_{w}", c))
                rows.append((family, d, "", "", "wep_total", wep.total))
                continue
            table = enumerate_fractions(
                code,
                code.t + 1,
                budget=args.budget,
                sample=args.sample,
                samples_per_class=args.samples_per_class,
                seed=args.seed,
            )
            zclass = (code.t + 1, 0)  # (number of Z, number of X)
            rows.append((family, d, "", "", "uncorrected_z_count", table.stats[zclass].failures))
            rows.append((family, d, "", "", "uncorrected_z_fraction", f"{table.f(*zclass):.6g}"))
            if family == "zzzy" and d > 3:
                rows.append((family, d, "", "", "lemma1_count", lemma1_count(d)))
                rows.append((family, d, "", "", "lemma1_fraction", f"{lemma1_fraction(d):.6g}"))
            for p in args.p:
                for A in args.asymmetry:
                    if p == 0:
                        raise UsageError("analyze needs p > 0")
                    ch = make_channel(p, A)
                    rows.append((family, d, p, _fmt(A), f"beta_{code.t + 1}", f"{beta(table, ch):.6g}"))
                    rows.append((family, d, p, _fmt(A), "pl_approx", f"{pl_approx(code, ch, table):.6g}"))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ANALYZE_FIELDS)
    w.writerows(rows)
    _emit(args, buf.getvalue(), stdout, commented=True)


def cmd_simulate(args, stdout) -> None:
    cells = grid(args.code, args.distance, args.p, args.asymmetry, args.trials, args.seed)
    results = []
    for cfg in cells:
        res = run(cfg, workers=args.workers)
        results.append(res)
        if res.mismatch:
            raise RuntimeError(f"{res.mismatch} corrections left a nonzero syndrome for {cfg}")
        if args.out:
            stdout.write(
                f"{cfg.family} d={cfg.d} p={cfg.p:g} A={_fmt(cfg.A)}: "
                f"{res.failures}/{res.trials} pl={res.pl:.3g} ({res.wall_time:.1f} s)\n"
            )
    _emit(args, to_csv(results), stdout, commented=True)


def _load_rows(path: str) -> list[dict]:
    with open(path) as fh:
        text = fh.read()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise UsageError(f"{path}: no data")
    head = lines[0].split(",")
    if tuple(head) == CSV_FIELDS:
        return read_csv(text)
    if tuple(head) == ANALYZE_FIELDS:
        rows = []
        for row in csv.DictReader(lines):
            if row["quantity"] != "pl_approx":
                continue
            pl = float(row["value"])
            rows.append(
                {
                    "family": row["family"] + " (analytic)",
                    "d": int(row["d"]),
                    "p": float(row["p"]),
                    "A": parse_asymmetry(row["A"]),
                    "pl": pl,
                    "ci_lo": pl,
                    "ci_hi": pl,
                }
            )
        return rows
    raise UsageError(f"{path}: not a simulate or analyze CSV")


def cmd_plot(args, stdout) -> None:
    from .plotting import plot_rows

    rows = []
    for path in args.inputs:
        rows.extend(_load_rows(path))
    meta = " | ".join(header_lines(args))
    drawn = plot_rows(rows, args.x, args.out, title=args.title, metadata=meta)
    stdout.write(f"wrote {args.out} ({drawn} points)\n")


COMMANDS = {
    "build": cmd_build,
    "decode": cmd_decode,
    "enumerate": cmd_enumerate,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "plot": cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    except (UsageError, OSError) as exc:
        stderr.write(f"{PROG}: error: {exc}\n")
        return 2
    try:
        COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        stderr.write(f"{PROG} {args.command}: error: {exc}\n")
        return 2
    except ValueError as exc:
        # domain validation from the library, e.g. a budget overrun
        stderr.write(f"{PROG} {args.command}: error: {exc}\n")
        return 2
    except Exception:
        stderr.write(traceback.format_exc())
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
