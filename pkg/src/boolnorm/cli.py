"""Command-line interface.

Results go to stdout (or ``--out``), progress and statistics to stderr.
Function files hold a ``m=<int>`` header followed by one hex truth table
per line.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .bent import SpectralKind, spectral_class
from .core import BoolFun, format_function_lines, parse_function_lines, restrict
from .equiv import bucket_by_fingerprint, parse_certificate, verify_ea_certificate
from .exceptions import BoolNormError, BudgetExceededError, CapacityError
from .expand import DEFAULT_BUDGET, DEFAULT_PAIR_BUDGET, expansion
from .normality import Normality, WORKERS_ENV, classify_normality, default_workers, r_degree
from .sieve import sieving
from .spaces import parse_flat

log = logging.getLogger("boolnorm")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class CheckFailed(Exception):
    pass


def _read_functions(path: str) -> tuple[int, list[BoolFun]]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_function_lines(text.splitlines())


def _flat_text(flat) -> str:
    return flat.to_text() if flat is not None else "-"


def cmd_analyze(args, out: TextIO) -> None:
    _, funcs = _read_functions(args.input)
    for f in funcs:
        spec = spectral_class(f)
        nc = classify_normality(f, args.workers)
        out.write(f"{f.to_hex()} deg={f.degree} wt={f.weight} spectrum={spec.kind.value} "
                  f"class={nc.kind.value} half_degree={nc.half_degree} witness={_flat_text(nc.witness)}\n")


def cmd_spectrum(args, out: TextIO) -> None:
    _, funcs = _read_functions(args.input)
    for f in funcs:
        values = " ".join(str(int(v)) for v in f.walsh().values)
        out.write(f"{f.to_hex()} {values}\n")


def cmd_rdegree(args, out: TextIO) -> None:
    _, funcs = _read_functions(args.input)
    for f in funcs:
        rd = r_degree(f, args.r, args.workers)
        out.write(f"{f.to_hex()} deg_{args.r}={rd.value} witness={rd.witness.to_text()}\n")


def cmd_abnormal(args, out: TextIO) -> None:
    _, funcs = _read_functions(args.input)
    for f in funcs:
        nc = classify_normality(f, args.workers)
        out.write(f"{f.to_hex()} {nc.kind.value} {nc.half_degree} {_flat_text(nc.witness)}\n")


def cmd_restrict(args, out: TextIO) -> None:
    m, funcs = _read_functions(args.input)
    flat = parse_flat(args.flat, m)
    for f in funcs:
        fr = restrict(f, flat)
        out.write(f"{f.to_hex()} {fr.to_anf_string()} deg={fr.degree}\n")


def cmd_sieve(args, out: TextIO) -> None:
    m, funcs = _read_functions(args.input)
    abnormal = []
    for f in funcs:
        qset = sieving(f, args.workers)
        out.write(f"{f.to_hex()} |Q(f)|={len(qset)}\n")
        for q in qset:
            out.write(f"  {q}\n")
            abnormal.append(f + q.to_boolfun())
        log.info("sieved %s: %d survivors", f.to_hex(), len(qset))
    if args.emit_abnormal:
        Path(args.emit_abnormal).write_text(format_function_lines(m, abnormal))


def _verify_expansion(g: BoolFun, f: BoolFun) -> bool:
    half = f.table[: 1 << g.m]
    return spectral_class(f).kind is SpectralKind.BENT and (half == g.table).all()


def cmd_expand(args, out: TextIO) -> None:
    _, funcs = _read_functions(args.input)
    failures = 0
    total = 0
    for g in funcs:
        fs = expansion(g, args.budget, pair_budget=args.pair_budget, workers=args.workers)
        log.info("expanded %s: %d bent expansions", g.to_hex(), len(fs))
        for f in fs:
            total += 1
            if args.verify and not _verify_expansion(g, f):
                failures += 1
                log.error("verification failed for %s -> %s", g.to_hex(), f.to_hex())
            out.write(f"{g.to_hex()} -> {f.to_hex()}\n")
    if args.verify:
        log.info("verified %d expansions: %d bent with matching restriction, %d failures",
                 total, total - failures, failures)
        if failures:
            raise CheckFailed(f"{failures} expansions failed verification")


def cmd_verify_ea(args, out: TextIO) -> None:
    m, funcs = _read_functions(args.input)
    if len(funcs) != 2:
        raise BoolNormError(f"verify-ea needs exactly two functions, got {len(funcs)}")
    text = args.cert
    if Path(text).is_file():
        text = Path(text).read_text().strip()
    cert = parse_certificate(text)
    verdict = verify_ea_certificate(funcs[0], funcs[1], cert)
    if verdict:
        out.write("TRUE\n")
    else:
        x = verdict.counterexample
        out.write(f"FALSE counterexample={x:0{max(1, -(-m // 4))}x}\n")
        raise CheckFailed("certificate rejected")


# campaign: sieve -> dedup -> expand -> check, each stage reading the previous checkpoint

STAGES = ("sieve", "dedup", "expand", "check")
CHECKPOINTS = {"sieve": "abnormal.hex", "dedup": "representatives.hex", "expand": "expansions.hex",
               "check": "check.txt"}


def _stage_input(args, stage: str) -> str:
    idx = STAGES.index(stage)
    if args.stage == stage and args.input:
        return args.input
    if idx == 0:
        if not args.input:
            raise BoolNormError("campaign sieve needs --in")
        return args.input
    return str(Path(args.out_dir) / CHECKPOINTS[STAGES[idx - 1]])


def _campaign_sieve(args, src: str, dst: Path) -> None:
    m, funcs = _read_functions(src)
    found: dict[bytes, BoolFun] = {}
    for f in funcs:
        for q in sieving(f, args.workers):
            h = f + q.to_boolfun()
            found.setdefault(h.table.tobytes(), h)
        log.info("sieve %s: %d abnormal so far", f.to_hex(), len(found))
    out = sorted(found.values(), key=lambda h: h.to_int())
    dst.write_text(format_function_lines(m, out))


def _campaign_dedup(args, src: str, dst: Path) -> None:
    m, funcs = _read_functions(src)
    near = [f for f in funcs if spectral_class(f).kind is SpectralKind.NEAR_BENT]
    buckets = bucket_by_fingerprint(near, args.workers)
    reps = sorted((group[0] for group in buckets.values()), key=lambda f: f.to_int())
    log.info("dedup: %d inputs, %d near-bent, %d fingerprint buckets", len(funcs), len(near), len(reps))
    dst.write_text(format_function_lines(m, reps))


def _campaign_expand(args, src: str, dst: Path) -> None:
    m, funcs = _read_functions(src)
    found: dict[bytes, BoolFun] = {}
    lines = []
    skipped = []
    for g in funcs:
        try:
            fs = expansion(g, args.budget, pair_budget=args.pair_budget, workers=args.workers)
        except BudgetExceededError as e:
            log.error("expand %s skipped: %s", g.to_hex(), e)
            skipped.append(g)
            continue
        log.info("expand %s: %d", g.to_hex(), len(fs))
        for f in fs:
            found.setdefault(f.table.tobytes(), f)
            lines.append(f"{g.to_hex()} -> {f.to_hex()}\n")
    out = sorted(found.values(), key=lambda f: f.to_int())
    dst.write_text(format_function_lines(m + 1, out))
    dst.with_suffix(".map").write_text("".join(lines))
    dst.with_suffix(".skipped").write_text(format_function_lines(m, skipped))
    if skipped:
        raise BudgetExceededError(f"{len(skipped)} inputs exceeded the budget; see {dst.with_suffix('.skipped')}",
                                  len(skipped), args.budget)


def _campaign_check(args, src: str, dst: Path) -> None:
    _, funcs = _read_functions(src)
    lines, bad = [], 0
    for f in funcs:
        nc = classify_normality(f, args.workers)
        bad += nc.kind is Normality.ABNORMAL
        lines.append(f"{f.to_hex()} {nc.kind.value} {nc.half_degree} {_flat_text(nc.witness)}\n")
    dst.write_text("".join(lines))
    log.info("check: %d functions, %d abnormal", len(funcs), bad)
    if bad:
        raise CheckFailed(f"{bad} expansions are abnormal")


def cmd_campaign(args, out: TextIO) -> None:
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    stages = STAGES if args.stage == "all" else (args.stage,)
    runners = {"sieve": _campaign_sieve, "dedup": _campaign_dedup, "expand": _campaign_expand,
               "check": _campaign_check}
    for stage in stages:
        src = args.input if (stage == stages[0] and args.input) else _stage_input(args, stage)
        dst = outdir / CHECKPOINTS[stage]
        log.info("stage %s: %s -> %s", stage, src, dst)
        runners[stage](args, src, dst)
        out.write(f"{stage} {dst}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boolnorm", description="Normality analysis of Boolean functions.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING", help="logging level for stderr (default WARNING)")
    common.add_argument("--in", dest="input", help="function file ('-' for stdin)")
    common.add_argument("--out", help="write results here instead of stdout")
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default ${WORKERS_ENV} or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, helptext):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(func=func)
        return sp

    add("analyze", cmd_analyze, "degree, weight, spectral class and normality")
    add("spectrum", cmd_spectrum, "Walsh spectrum")
    sp = add("rdegree", cmd_rdegree, "minimum relative degree over r-flats")
    sp.add_argument("--r", type=int, required=True)
    add("abnormal", cmd_abnormal, "normal / weakly_normal / abnormal with a witness flat")
    sp = add("restrict", cmd_restrict, "restriction to a flat")
    sp.add_argument("--flat", required=True, help="basis=<hex>,...;a=<hex>")
    sp = add("sieve", cmd_sieve, "quadratic forms q making f + q abnormal")
    sp.add_argument("--emit-abnormal", metavar="FILE", help="write every f + q to FILE")
    for name, func, helptext in (("expand", cmd_expand, "bent expansions of near-bent functions"),
                                 ("campaign", cmd_campaign, "sieve -> dedup -> expand -> check")):
        sp = add(name, func, helptext)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max assignments per admissible set")
        sp.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET, help="max pair checks per merge")
        if name == "expand":
            sp.add_argument("--verify", action="store_true", help="re-check bentness and the restriction to x_m=0")
        else:
            sp.add_argument("--stage", choices=STAGES + ("all",), default="all")
            sp.add_argument("--out-dir", default="campaign", help="checkpoint directory")
    sp = add("verify-ea", cmd_verify_ea, "check f2(x) = f(xA+b) + a(x) for a certificate")
    sp.add_argument("--cert", required=True, help="certificate text or a file containing it")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.handlers = [handler]
    log.propagate = False
    try:
        log.setLevel(args.log_level.upper())
    except ValueError:
        parser.error(f"unknown log level {args.log_level!r}")
    if args.workers is None:
        args.workers = default_workers()
    if args.input is None and args.command != "campaign":
        parser.error(f"{args.command} needs --in")
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        args.func(args, out)
    except CheckFailed as e:
        log.error("%s", e)
        return EXIT_FAIL
    except (BudgetExceededError, CapacityError) as e:
        log.error("%s", e)
        return EXIT_RESOURCE
    except (BoolNormError, ValueError, OSError) as e:
        log.error("%s", e)
        return EXIT_INPUT
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
