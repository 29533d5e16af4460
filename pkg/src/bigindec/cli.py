"""Command-line interface.

Exit codes: 0 = success / VALID certificate; 1 = verification failure or
INVALID certificate; 2 = input error; 3 = search or resource exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cliio, config
from .errors import (
    BigIndecError,
    CharacteristicGuardError,
    DepthZeroError,
    HomogeneityError,
    MinorWorkGuardError,
    ModuleDecomposableError,
    NotFiniteLengthError,
    ParseError,
    RingMismatchError,
    SearchExhaustedError,
    ZeroModuleError,
)
from .homext import ext_module
from .modlib import (
    depth,
    free_resolution,
    length_and_hilbert,
    minimal_generator_count,
    punctured_rank,
    rank_punctured_certificate,
)
from .pipeline import (
    canonical_seed,
    construct_big_indecomposable,
    decompose,
    ghp_fit,
    verify_certificate,
)
from .ringkernel import poly_str

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_EXHAUSTED = 3

_INPUT_ERRORS = (ParseError, HomogeneityError, RingMismatchError, ZeroModuleError,
                 DepthZeroError, ModuleDecomposableError, NotFiniteLengthError, ValueError, KeyError)
_EXHAUSTION_ERRORS = (SearchExhaustedError, MinorWorkGuardError, CharacteristicGuardError)


def _load_workspace(path: str) -> cliio.WorkspaceSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return cliio.parse_spec(fh.read())


def _module_or_die(ws, name):
    if name not in ws.modules:
        raise KeyError(f"unknown module {name!r}")
    return ws.module(name), ws.modules[name][0]


def _emit(payload, out_path=None):
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    ws = _load_workspace(args.file)
    _emit({
        "rings": sorted(ws.rings),
        "modules": sorted(ws.modules),
        "primes": sorted(ws.primes),
    })
    return EXIT_OK


def cmd_resolve(args) -> int:
    ws = _load_workspace(args.file)
    module, _ = _module_or_die(ws, args.module)
    res = free_resolution(module, args.length)
    payload = {
        "module": args.module,
        "length": args.length,
        "betti": [res.betti(i) for i in range(args.length + 1)],
        "degrees": [list(res.f_degs[i]) if i <= res.length else [] for i in range(args.length + 1)],
        "differentials": [
            [[poly_str(col[i]) for col in res.differential(step)] for i in range(len(res.f_degs[step - 1]))]
            if step <= res.length else []
            for step in range(1, args.length + 1)
        ],
    }
    _emit(payload, args.output)
    return EXIT_OK


def cmd_ext(args) -> int:
    ws = _load_workspace(args.file)
    module, ring_name = _module_or_die(ws, args.module)
    ring = ws.rings[ring_name]
    from .modlib import truncation_module
    T = truncation_module(ring, args.n)
    ext = ext_module(module, T, args.i)
    basis = ext.basis
    payload = {
        "module": args.module,
        "n": args.n,
        "i": args.i,
        "dim": basis.dim,
        "degrees": [e[0] for e in basis.elements],
        "nu_R": basis.nu_R() if args.i == 1 else None,
    }
    _emit(payload, args.output)
    return EXIT_OK


def cmd_hilbert_ext(args) -> int:
    ws = _load_workspace(args.file)
    module, _ = _module_or_die(ws, args.module)
    fit = ghp_fit(module, args.n_max)
    payload = fit.as_dict()
    payload["module"] = args.module
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("n,length,nu_R\n")
            for n in sorted(fit.table):
                fh.write(f"{n},{fit.table[n]},{fit.nu_table[n]}\n")
    _emit(payload, args.output)
    return EXIT_OK


def cmd_depth(args) -> int:
    ws = _load_workspace(args.file)
    module, _ = _module_or_die(ws, args.module)
    payload = {"module": args.module, "depth": depth(module)}
    _emit(payload, args.output)
    return EXIT_OK


def cmd_rank(args) -> int:
    ws = _load_workspace(args.file)
    module, ring_name = _module_or_die(ws, args.module)
    primes = ws.witness_primes(ring_name)
    if args.t is not None:
        cert = rank_punctured_certificate(module, args.t, primes)
        payload = {"module": args.module, "certificate": cert.as_dict()}
        _emit(payload, args.output)
        return EXIT_OK if cert.passed else EXIT_INVALID
    t, cert = punctured_rank(module, primes)
    payload = {"module": args.module, "rank": t, "certificate": cert.as_dict() if cert else None}
    _emit(payload, args.output)
    return EXIT_OK if t is not None else EXIT_INVALID


def cmd_seed(args) -> int:
    ws = _load_workspace(args.file)
    if len(ws.rings) != 1:
        raise ValueError("seed needs a workspace declaring exactly one ring")
    ring = next(iter(ws.rings.values()))
    seed = canonical_seed(ring)
    payload = {
        "generators": list(seed.module.gen_degs),
        "relations": cliio._module_dict(seed.module)["relations"],
        "rank": seed.rank,
        "depth": seed.depth,
        "summands": len(seed.summands),
        "warnings": seed.warnings,
    }
    _emit(payload, args.output)
    return EXIT_OK


def cmd_decompose(args) -> int:
    ws = _load_workspace(args.file)
    module, _ = _module_or_die(ws, args.module)
    summands = decompose(module)
    payload = {
        "module": args.module,
        "count": len(summands),
        "summands": [
            {"generators": minimal_generator_count(s.module), "degrees": list(s.module.gen_degs)}
            for s in summands
        ],
    }
    _emit(payload, args.output)
    return EXIT_OK


def cmd_construct(args) -> int:
    ws = _load_workspace(args.file)
    module, ring_name = _module_or_die(ws, args.module)
    primes = ws.witness_primes(ring_name)
    seed = config.default_seed() if args.seed is None else args.seed
    cert = construct_big_indecomposable(
        module, args.r, n_max=args.n_max, witness_primes=primes,
        seed=seed, idempotent_trials=args.trials,
    )
    text = cliio.certificate_json(cert, include_timings=args.timings)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cert.valid:
        print("VALID", file=sys.stderr)
        return EXIT_OK
    print(f"INVALID: {', '.join(cert.failed_checks)}", file=sys.stderr)
    return EXIT_INVALID


def cmd_verify(args) -> int:
    with open(args.certificate, "r", encoding="utf-8") as fh:
        data = cliio.load_certificate(fh.read())
    report = verify_certificate(data)
    payload = {"checks": [{"name": n, "ok": ok} for n, ok in report.checks], "ok": report.ok}
    _emit(payload, args.output)
    if report.ok:
        print("VALID", file=sys.stderr)
        return EXIT_OK
    print(f"FAILED: {report.failed}", file=sys.stderr)
    return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bigindec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")
        return p

    p = add("check", cmd_check, help="parse and validate a workspace file")
    p.add_argument("file")

    p = add("resolve", cmd_resolve, help="minimal free resolution prefix")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)
    p.add_argument("-l", "--length", type=int, required=True)

    p = add("ext", cmd_ext, help="dimensions of Ext^i(M, R/m^n)")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-i", type=int, default=1)

    p = add("hilbert-ext", cmd_hilbert_ext, help="growth table of Ext^1(M, R/m^n)")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--csv", default=None)

    p = add("depth", cmd_depth, help="depth of a module")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)

    p = add("rank", cmd_rank, help="punctured-spectrum rank certificate")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)
    p.add_argument("-t", type=int, default=None)

    p = add("seed", cmd_seed, help="canonical seed module of the ring")
    p.add_argument("file")

    p = add("decompose", cmd_decompose, help="indecomposable summands")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)

    p = add("construct", cmd_construct, help="run the construction and emit a certificate")
    p.add_argument("file")
    p.add_argument("-m", "--module", required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--n-max", type=int, default=config.DEFAULT_N_MAX)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-stability)")

    p = add("verify", cmd_verify, help="re-check a certificate from its own data")
    p.add_argument("certificate")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _EXHAUSTION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BigIndecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
