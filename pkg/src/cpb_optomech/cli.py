"""Command-line front end.

Subcommands: point, sweep, compare, oracle, validate-config.
Exit codes: 0 success, 1 config error, 2 numerical-flag threshold exceeded
(for CI gating), 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import fock, sweep
from .circuit import circuit_couplings, effective_ck_hamiltonian
from .errors import ConfigInvalid, CpbOptomechError, IoFailure, NotInPureCkRegime
from .params import BiasPoint

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def _add_common(p):
    p.add_argument("--config", required=True, help="JSON sweep config")
    p.add_argument("--jobs", type=int, default=None,
                   help="parallel workers (env CPB_OPTOMECH_JOBS overrides default)")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="cpb-optomech",
        description="CPB-mediated optomechanical and cross-Kerr couplings",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate all configured models at one bias")
    _add_common(p)
    p.add_argument("--n-g", type=float, required=True)
    p.add_argument("--f", type=float, default=0.0)

    p = sub.add_parser("sweep", help="run the configured (n_g, f) grid")
    _add_common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--max-flagged", type=float, default=1.0,
                   help="exit 2 if the flagged-row fraction exceeds this")

    p = sub.add_parser("compare", help="model-comparison report against a reference")
    _add_common(p)
    p.add_argument("--out", default=None)
    p.add_argument("--band", type=float, default=0.2,
                   help="tolerance band on |ratio - 1| (exit 2 when exceeded)")
    p.add_argument("--reference", default="circuit")

    p = sub.add_parser("oracle", help="Fock-oracle extraction at one bias")
    _add_common(p)
    p.add_argument("--n-g", type=float, required=True)
    p.add_argument("--f", type=float, default=0.0)

    p = sub.add_parser("validate-config", help="parse, validate, print derived values")
    p.add_argument("--config", required=True)
    return ap


def _print_rows(rows):
    print(sweep.CSV_HEADER)
    two_pi = 2.0 * math.pi
    for r in rows:
        print(",".join([repr(r.n_g), repr(r.f), r.model,
                        repr(r.omega_c / two_pi), repr(r.g_rp / two_pi),
                        repr(r.g_0 / two_pi), repr(r.g_ck / two_pi),
                        repr(r.enhancement), r.flags]))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = sweep.load_config(args.config)
    except (ConfigInvalid, CpbOptomechError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "validate-config":
            vp = cfg.validated_params()
            print(json.dumps({
                "fingerprint": sweep.config_fingerprint(cfg),
                "E_C_GHz": vp.e_c / 6.62607015e-34 / 1e9,
                "E_J_GHz": vp.e_j / 6.62607015e-34 / 1e9,
                "d": vp.d_asym,
                "Z0_ohm": vp.z0,
                "eta": vp.eta,
                "C_J_fF": vp.c_j * 1e15,
                "C_Sigma1_fF": vp.c_sigma1 * 1e15,
            }, indent=1))
            return EXIT_OK

        if args.command == "point":
            vp = cfg.validated_params()
            rows = sweep.eval_point(
                vp, BiasPoint(n_g0=args.n_g, f=args.f), cfg.models,
                cfg.charge_channel,
                fock.FockConfig(n_cavity=cfg.n_cavity, n_mech=cfg.n_mech,
                                charge_channel=cfg.charge_channel))
            _print_rows(rows)
            return EXIT_OK

        if args.command == "sweep":
            table = sweep.run_sweep(cfg, jobs=args.jobs)
            fmt = args.format or cfg.fmt
            sweep.emit(table, args.out, fmt)
            flagged = sum(1 for r in table.rows if r.flags)
            frac = flagged / max(1, len(table.rows))
            print(f"wrote {len(table.rows)} rows to {args.out} "
                  f"({flagged} flagged, fingerprint {table.config_fingerprint[:12]})")
            return EXIT_NUMERICAL if frac > args.max_flagged else EXIT_OK

        if args.command == "compare":
            report = sweep.compare_models(cfg, jobs=args.jobs, band=args.band,
                                          reference=args.reference)
            text = report.table()
            if args.out:
                try:
                    with open(args.out, "w", encoding="utf-8") as fh:
                        fh.write(text + "\n")
                except OSError as exc:
                    raise IoFailure(str(exc)) from exc
            else:
                print(text)
            for (model, which), q in sorted(report.quantiles.items()):
                print(f"# {model}/{report.reference} {which} quartiles: "
                      f"{q[0]:.4f} {q[1]:.4f} {q[2]:.4f}")
            print(f"# band |ratio-1| <= {report.band}: "
                  f"{'PASS' if report.passed else 'FAIL'}")
            return EXIT_OK if report.passed else EXIT_NUMERICAL

        if args.command == "oracle":
            vp = cfg.validated_params()
            res = fock.oracle_couplings(
                vp, BiasPoint(n_g0=args.n_g, f=args.f),
                fock.FockConfig(n_cavity=cfg.n_cavity, n_mech=cfg.n_mech,
                                charge_channel=cfg.charge_channel))
            _print_rows([sweep.Row(args.n_g, args.f, res.model_tag, res.omega_c,
                                   res.g_rp, res.g_0, res.g_ck, res.enhancement)])
            return EXIT_OK

    except IoFailure as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotInPureCkRegime as exc:
        print(f"numerical gate: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CpbOptomechError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
