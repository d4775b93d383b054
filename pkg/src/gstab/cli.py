"""Command-line interface.

Exit codes: 0 success (or "close" for ``test``), 3 "far", 2 usage or input
error, 4 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass

from . import caps, io
from .caps import CapExceededError
from .combinatorics import conjecture_search, write_search_csv
from .sampling import DEFAULT_C, estimate_gowers3_pow8, estimate_weyl_expect_q, write_samples_csv
from .stabilizer import stabilizer_covering, stabilizer_fidelity_bruteforce
from .state import (
    char_table,
    gowers3_pow8,
    haar_random_state,
    make_phase_state,
    make_stabilizer_state,
    noisy_stabilizer,
    random_stabilizer_state,
    weyl_expect_q,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAR = 3
EXIT_CAP = 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# tester


@dataclass(frozen=True)
class TesterConfig:
    eps1: float
    eps2: float | None = None
    exponent_C: float = 6.0
    delta: float | None = None  # None means auto
    shots: int | None = None  # None means auto
    seed: int = 0
    c: float = DEFAULT_C

    def validate(self) -> None:
        if not 0.0 < self.eps1 <= 1.0:
            raise UsageError("eps1 must lie in (0, 1]")
        if self.exponent_C <= 1.0:
            raise UsageError("exponent C must exceed 1")
        if self.delta is None and self.eps2 is not None and self.eps2 > self.eps1 ** self.exponent_C:
            raise UsageError(
                f"eps2 = {self.eps2} exceeds eps1^C = {self.eps1 ** self.exponent_C:.6g}; "
                "the tester only separates eps2 <= eps1^C"
            )
        if self.delta is not None and self.delta <= 0.0:
            raise UsageError("delta must be positive")
        if self.shots is not None and self.shots < 1:
            raise UsageError("shots must be positive")

    def resolved_delta(self) -> float:
        return self.eps1 ** 6 / 10.0 if self.delta is None else self.delta

    def threshold(self) -> float:
        return self.eps1 ** 6 - self.resolved_delta() / 2.0


@dataclass(frozen=True)
class TesterVerdict:
    decision: str
    estimate: dict
    threshold: float
    delta: float
    config: dict
    fidelity_lower_bound: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def run_tester(psi, cfg: TesterConfig) -> TesterVerdict:
    """Estimate E_{x~q} <W_x>^2 to error delta/2 and compare with eps1^6 - delta/2."""
    cfg.validate()
    delta = cfg.resolved_delta()
    target = delta / 2.0
    shots = cfg.shots if cfg.shots is not None else math.ceil(cfg.c / target ** 2)
    est = estimate_weyl_expect_q(psi, seed=cfg.seed, shots=shots, c=cfg.c)
    est_d = est.to_dict()
    est_d["target_error"] = target if cfg.shots is None else est.target_error
    thr = cfg.threshold()
    decision = "close" if est.mean >= thr else "far"
    lower = (4.0 * est.mean - 1.0) / 3.0 if est.mean >= 0.25 else None
    return TesterVerdict(decision, est_d, thr, delta, asdict(cfg), lower)


# ---------------------------------------------------------------------------
# subcommands


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this command")


def cmd_gen(args) -> int:
    kind = args.kind
    extra = {}
    if kind == "stabilizer":
        if args.gens:
            gens = [g for g in args.gens.split(",") if g.strip()]
            psi = make_stabilizer_state(gens)
            params = {"generators": gens}
        else:
            _need(args, "n")
            psi = random_stabilizer_state(args.n, args.seed)
            params = {"n": args.n, "seed": args.seed}
    elif kind == "phase":
        _need(args, "n", "d", "poly")
        psi = make_phase_state(args.n, args.d, args.poly)
        params = {"n": args.n, "d": args.d, "poly": args.poly}
    elif kind == "haar":
        _need(args, "n")
        psi = haar_random_state(args.n, args.seed)
        params = {"n": args.n, "seed": args.seed}
    else:
        _need(args, "n", "eps")
        psi = noisy_stabilizer(args.n, args.eps, args.seed)
        params = {"n": args.n, "eps": args.eps, "seed": args.seed}
        extra["base_fidelity"] = 1.0 - args.eps
    caps.check(psi.n, caps.table_max_n(), "state qubits")
    io.save_state(psi, args.out, kind=kind, params=params, **extra)
    return EXIT_OK


def cmd_exact(args) -> int:
    psi = io.load_state(args.state)
    q = args.quantity
    if q == "fidelity":
        val, best = stabilizer_fidelity_bruteforce(psi)
        io.write_json({"n": psi.n, "quantity": q, "value": val, "argmax_generators": best.generators()}, args.out)
        return EXIT_OK
    ct = char_table(psi)
    if q == "gowers3":
        io.write_json({"n": psi.n, "quantity": q, "value": gowers3_pow8(ct)}, args.out)
    elif q == "weylq":
        io.write_json({"n": psi.n, "quantity": q, "value": weyl_expect_q(ct)}, args.out)
    elif args.format == "csv":
        with io.open_out(args.out, newline="") as fh:
            ct.write_csv(fh)
    else:
        io.write_json({"n": psi.n, "quantity": q, "p": [float(x) for x in ct.p]}, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    psi = io.load_state(args.state)
    if args.delta is None and args.shots is None:
        raise UsageError("give --delta or --shots")
    fn = estimate_gowers3_pow8 if args.quantity == "gowers3" else estimate_weyl_expect_q
    try:
        est, xs, outcomes = fn(psi, delta=args.delta, seed=args.seed, shots=args.shots, return_samples=True)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.samples:
        with io.open_out(args.samples, newline="") as fh:
            write_samples_csv(fh, psi.n, xs, outcomes)
    io.write_json(est.to_dict(), args.out)
    return EXIT_OK


def _auto_float(text: str) -> float | None:
    return None if text == "auto" else float(text)


def _auto_int(text: str) -> int | None:
    return None if text == "auto" else int(text)


def cmd_test(args) -> int:
    psi = io.load_state(args.state)
    cfg = TesterConfig(
        eps1=args.eps1,
        eps2=args.eps2,
        exponent_C=args.exponent_c,
        delta=_auto_float(args.delta),
        shots=_auto_int(args.shots),
        seed=args.seed,
    )
    verdict = run_tester(psi, cfg)
    io.write_json(verdict.to_dict(), args.out)
    return EXIT_OK if verdict.decision == "close" else EXIT_FAR


def cmd_cover(args) -> int:
    V = io.load_subgroup(args.subgroup)
    cov = stabilizer_covering(V, args.mode)
    io.write_json(cov.to_dict(), args.out)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    _need(args, "n")
    rows = conjecture_search(args.n, args.k_max, args.trials, args.seed, args.exponent)
    if args.format == "json":
        io.write_json({"n": args.n, "K_max": args.k_max, "exponent": args.exponent, "rows": rows}, args.out)
    else:
        with io.open_out(args.out, newline="") as fh:
            write_search_csv(fh, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gstab", description="Gowers norms, Weyl distributions and stabilizer testing.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a state file")
    g.add_argument("kind", choices=["stabilizer", "phase", "haar", "noisy"])
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--d", type=int, help="phase-state degree")
    g.add_argument("--poly", help='phase polynomial, e.g. "x1x2 + 4x1x2x3"')
    g.add_argument("--gens", help='comma-separated signed labels, e.g. "XX,-ZZ"')
    g.add_argument("--eps", type=float, help="noise weight for noisy states")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("exact", help="exact quantities of a state")
    e.add_argument("state")
    e.add_argument("quantity", choices=["gowers3", "weylq", "chartable", "fidelity"])
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.add_argument("--out")
    e.set_defaults(func=cmd_exact)

    s = sub.add_parser("estimate", help="shot-based estimate")
    s.add_argument("state")
    s.add_argument("--quantity", choices=["gowers3", "weylq"], default="weylq")
    s.add_argument("--delta", type=float)
    s.add_argument("--shots", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", help="also write per-shot CSV here")
    s.add_argument("--out")
    s.set_defaults(func=cmd_estimate)

    t = sub.add_parser("test", help="tolerant stabilizer tester")
    t.add_argument("state")
    t.add_argument("--eps1", type=float, required=True)
    t.add_argument("--eps2", type=float)
    t.add_argument("--exponent-c", type=float, default=6.0)
    t.add_argument("--delta", default="auto")
    t.add_argument("--shots", default="auto")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    t.set_defaults(func=cmd_test)

    c = sub.add_parser("cover", help="stabilizer covering of a subgroup")
    c.add_argument("subgroup")
    c.add_argument("--mode", choices=["mub", "paulis"], default="mub")
    c.add_argument("--out")
    c.set_defaults(func=cmd_cover)

    k = sub.add_parser("conjecture", help="small-doubling nac search")
    k.add_argument("--n", type=int)
    k.add_argument("--k-max", type=float, default=8.0)
    k.add_argument("--trials", type=int, default=100)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--exponent", type=float, default=3.0)
    k.add_argument("--format", choices=["csv", "json"], default="csv")
    k.add_argument("--out")
    k.set_defaults(func=cmd_conjecture)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"gstab: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"gstab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
