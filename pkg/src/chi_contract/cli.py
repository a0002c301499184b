"""Command-line interface.

Subcommands: channel (make/check), hmatrix, fluctuation, adversary, bound,
simulate, verify.  Every subcommand echoes a one-line summary and writes
JSON/CSV to --out when given.  Unknown flags exit 2; numeric failures exit 1
with a machine-readable error record on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import verify as verify_mod
from .adversary import adversarial_perturbation
from .bounds import lb_table
from .channels import check_comm, check_ldp, standard_channel
from .contraction import h_matrix
from .fluctuation import (chi2_fluctuation, decoupled_fluctuation,
                          induced_chi2_fluctuation,
                          induced_decoupled_fluctuation)
from .perturbations import PerturbedFamily
from .prob import Channel, Distribution, dump_json, load_json
from .simulate import ProtocolConfig, simulate_smp


def _load_channels(spec: str) -> list[Channel]:
    return [Channel.from_json(load_json(path)) for path in spec.split(",")]


def _cmd_channel(args) -> int:
    if args.action == "make":
        ch = standard_channel(args.kind, args.k, bits=args.bits, rho=args.rho,
                              m=args.m)
        dump_json(ch.to_json(), args.out)
        print(f"wrote {args.kind} channel k={ch.k} m={ch.m} -> {args.out}")
        return 0
    ch = Channel.from_json(load_json(args.file))
    ok = True
    parts = []
    if args.ldp is not None:
        ldp_ok, ratio = check_ldp(ch, args.ldp)
        ok &= ldp_ok
        parts.append(f"ldp(rho={args.ldp}): {'pass' if ldp_ok else 'fail'} "
                     f"(worst ratio {ratio:.6g})")
    if args.comm is not None:
        comm_ok = check_comm(ch, args.comm)
        ok &= comm_ok
        parts.append(f"comm(bits={args.comm}): {'pass' if comm_ok else 'fail'}")
    if not parts:
        parts.append("valid channel (no constraint requested)")
    print(f"{args.file}: " + "; ".join(parts))
    return 0 if ok else 1


def _cmd_hmatrix(args) -> int:
    ch = Channel.from_json(load_json(args.file))
    H = h_matrix(ch)
    payload = H.to_json()
    summary = ""
    if args.bits is not None or args.rho is not None:
        from .channels import ConstraintSpec
        from .contraction import verify_norm_bounds
        kind = "comm" if args.bits is not None else "ldp"
        spec = ConstraintSpec(kind, ch.k, bits=args.bits, rho=args.rho)
        rep = verify_norm_bounds(ch, spec)
        payload["bound_check"] = {
            "constraint": rep.constraint, "passed": rep.passed,
            "bound_nuclear": rep.bound_nuclear,
            "bound_frobenius_sq": rep.bound_frobenius_sq}
        summary = f" bounds[{rep.constraint}]={'pass' if rep.passed else 'fail'}"
    if args.report:
        dump_json(payload, args.report)
    print(f"{args.file}: dim={H.dim} nuclear={H.nuclear:.6g} "
          f"frobenius^2={H.frobenius_sq:.6g} "
          f"spectral_radius={H.spectral_radius:.6g}{summary}")
    return 0


def _cmd_fluctuation(args) -> int:
    fam = PerturbedFamily.from_json(load_json(args.family))
    channels = _load_channels(args.channels) if args.channels else []
    if args.kind == "chi2":
        rep = chi2_fluctuation(fam)
    elif args.kind == "decoupled":
        rep = decoupled_fluctuation(fam, args.n)
    elif args.kind == "induced_chi2":
        if len(channels) != 1:
            raise ValueError("induced_chi2 needs exactly one channel")
        rep = induced_chi2_fluctuation(channels[0], fam)
    else:
        if not channels:
            raise ValueError("induced_decoupled needs --channels")
        seq = [channels[i % len(channels)] for i in range(args.n or len(channels))]
        rep = induced_decoupled_fluctuation(seq, fam)
    record = {"kind": rep.kind, "value": rep.value, "method": rep.method,
              "n": rep.n, "mc_stderr": rep.mc_stderr, "family_id": rep.family_id,
              "channel_ids": list(rep.channel_ids)}
    if args.out:
        dump_json(record, args.out)
    print(f"{rep.kind}: value={rep.value:.10g} method={rep.method} n={rep.n}")
    return 0


def _cmd_adversary(args) -> int:
    channels = _load_channels(args.channels)
    adv = adversarial_perturbation(channels, args.eps, seed=args.seed)
    if args.out:
        dump_json(adv.family.to_json(), args.out)
    if args.report:
        dump_json(adv.to_json(), args.report)
    print(f"adversarial family k={adv.k} n={adv.n}: fluctuation="
          f"{adv.fluctuation.value:.6g} certificate_alpha={adv.certificate.alpha_hat:.4g} "
          f"invalid_rate={adv.invalid_rate:.4g} regime_ok={adv.regime_ok}")
    return 0


def _cmd_bound(args) -> int:
    reports = lb_table(args.k, args.eps, bits=args.bits, rho=args.rho)
    if args.format == "csv":
        rows = [["task", "constraint", "k", "eps", "value", "formula"]]
        rows += [r.to_row() for r in reports]
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                csv.writer(fh).writerows(rows)
        else:
            csv.writer(sys.stdout).writerows(rows)
    else:
        payload = [r.to_json() for r in reports]
        if args.out:
            dump_json(payload, args.out)
        else:
            json.dump(payload, sys.stdout, indent=2)
            print()
    cells = ", ".join(f"{r.task}[{r.constraint}]={r.value:.6g}" for r in reports)
    print(f"k={args.k} eps={args.eps}: {cells}")
    return 0


def _cmd_simulate(args) -> int:
    candidates = _load_channels(args.channels)
    fam = PerturbedFamily.from_json(load_json(args.family))
    null = Distribution.from_json(load_json(args.null)) if args.null \
        else Distribution.uniform(fam.k)
    cfg = ProtocolConfig(args.n, args.coin, candidates, args.seed)
    rep = simulate_smp(cfg, null, fam, args.trials)
    if args.out:
        dump_json(rep.to_json(), args.out)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["state", "null_count", "alt_count"])
            for s in range(rep.n_states):
                writer.writerow([s, int(rep.empirical_counts[0, s]),
                                 int(rep.empirical_counts[1, s])])
    exact = "n/a" if rep.exact_tv is None else f"{rep.exact_tv:.6g}"
    print(f"simulate n={rep.n} coin={rep.coin_mode} trials={rep.trials}: "
          f"empirical_tv={rep.empirical_tv:.6g} stderr={rep.stderr:.3g} "
          f"exact_tv={exact}")
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_suite(quick=args.quick)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.detail} ({r.seconds:.2f}s)")
        failed += not r.passed
    print(f"verify: {len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chi-contract",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ch = sub.add_parser("channel", help="make or check channels")
    ch_sub = ch.add_subparsers(dest="action", required=True)
    mk = ch_sub.add_parser("make")
    mk.add_argument("--kind", required=True,
                    choices=["identity", "constant", "parity", "quantizer",
                             "randomized_response"])
    mk.add_argument("--k", type=int, required=True)
    mk.add_argument("--bits", type=int)
    mk.add_argument("--rho", type=float)
    mk.add_argument("--m", type=int)
    mk.add_argument("--out", required=True)
    ck = ch_sub.add_parser("check")
    ck.add_argument("file")
    ck.add_argument("--ldp", type=float)
    ck.add_argument("--comm", type=int)

    hm = sub.add_parser("hmatrix", help="informativeness matrix of a channel")
    hm.add_argument("file")
    hm.add_argument("--report")
    hm.add_argument("--bits", type=int, help="also check the ell-bit norm bounds")
    hm.add_argument("--rho", type=float, help="also check the rho-LDP norm bounds")

    fl = sub.add_parser("fluctuation", help="fluctuation functionals")
    fl.add_argument("--family", required=True)
    fl.add_argument("--channels")
    fl.add_argument("--n", type=int, default=1)
    fl.add_argument("--kind", required=True,
                    choices=["chi2", "decoupled", "induced_chi2",
                             "induced_decoupled"])
    fl.add_argument("--out")

    ad = sub.add_parser("adversary", help="fooling family for fixed channels")
    ad.add_argument("--channels", required=True)
    ad.add_argument("--eps", type=float, required=True)
    ad.add_argument("--seed", type=int, default=0)
    ad.add_argument("--out")
    ad.add_argument("--report")

    bd = sub.add_parser("bound", help="sample-complexity lower bounds")
    bd.add_argument("--k", type=int, required=True)
    bd.add_argument("--eps", type=float, required=True)
    bd.add_argument("--bits", type=int)
    bd.add_argument("--rho", type=float)
    bd.add_argument("--format", choices=["csv", "json"], default="csv")
    bd.add_argument("--out")

    sm = sub.add_parser("simulate", help="SMP protocol simulation")
    sm.add_argument("--channels", required=True,
                    help="comma-separated candidate channel files")
    sm.add_argument("--family", required=True)
    sm.add_argument("--null")
    sm.add_argument("--n", type=int, required=True)
    sm.add_argument("--coin", choices=["private", "public"], default="private")
    sm.add_argument("--trials", type=int, default=10_000)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--out")
    sm.add_argument("--csv", help="write per-state empirical counts for plotting")

    vf = sub.add_parser("verify", help="run the invariant suite")
    vf.add_argument("--quick", action="store_true")
    return parser


_DISPATCH = {
    "channel": _cmd_channel,
    "hmatrix": _cmd_hmatrix,
    "fluctuation": _cmd_fluctuation,
    "adversary": _cmd_adversary,
    "bound": _cmd_bound,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, TypeError, ArithmeticError, OSError, RuntimeError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
