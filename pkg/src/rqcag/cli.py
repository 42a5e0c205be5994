"""Command-line interface: `python3 -m rqcag <command> ...` or `rqcag <command> ...`.

Exit codes: 0 success, 1 domain failure (decryption failure, infeasible
estimate, KAT mismatch, failed attack), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import estimator as est
from . import labattack as lab
from . import scheme
from .gabidulin import dfr_bits, dfr_monte_carlo, dfr_probability


class DomainError(Exception):
    pass


# ------------------------------------------------------------------ helpers

def parse_seed(text: str | None) -> bytes:
    """Hex seed, at most 40 bytes, zero-padded; fresh entropy when omitted."""
    if text is None:
        return os.urandom(scheme.SEED_BYTES)
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be hex") from None
    if len(raw) > scheme.SEED_BYTES:
        raise argparse.ArgumentTypeError(f"seed longer than {scheme.SEED_BYTES} bytes")
    return raw.ljust(scheme.SEED_BYTES, b"\0")


def rng_for(args, label: str) -> scheme.Xof:
    return scheme.Xof(args.seed, "cli-" + label)


class Out:
    """Collects rows and prints them as aligned text or CSV."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.rows: list[list] = []
        self.header: list[str] | None = None

    def head(self, *cols):
        self.header = list(cols)

    def row(self, *vals):
        self.rows.append(list(vals))

    def emit(self, stream=None):
        stream = stream or sys.stdout
        if self.fmt == "csv":
            w = csv.writer(stream, lineterminator="\n")
            if self.header:
                w.writerow(self.header)
            w.writerows(self.rows)
            return
        if self.header:
            stream.write("  ".join(self.header) + "\n")
        for r in self.rows:
            stream.write("  ".join(_fmt(v) for v in r) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise DomainError(str(e)) from None


def _params(name: str) -> scheme.ParameterSet:
    try:
        return scheme.get_params(name)
    except KeyError as e:
        raise DomainError(e.args[0]) from None


def kb(nbytes: int) -> str:
    """Bytes to KB (1000 bytes) with one decimal, halves rounded up."""
    tenths = (nbytes * 10 + 500) // 1000
    return f"{tenths // 10}.{tenths % 10}"


# ----------------------------------------------------------------- commands

def cmd_params(args):
    out = Out(args.format)
    names = list(scheme.PARAMS) if args.action == "list" else [args.name]
    if args.action == "list":
        out.head("name", "level", "pk_bytes", "ct_bytes", "pk_kb", "ct_kb")
        for name in names:
            p = _params(name)
            out.row(p.name, p.level, p.pk_bytes, p.ct_bytes, kb(p.pk_bytes), kb(p.ct_bytes))
    else:
        p = _params(args.name)
        out.head("field", "value")
        for f in ("name", "structure", "level", "m", "n_prime", "n1", "n2", "n", "k", "epsilon",
                  "w", "w1", "w2"):
            out.row(f, getattr(p, f))
        out.row("delta", p.delta)
        out.row("pk_bytes", p.pk_bytes)
        out.row("sk_bytes", p.sk_bytes)
        out.row("ct_bytes", p.ct_bytes)
        out.row("dfr_bits", round(p.dfr_bits(), 2))
    out.emit()


def cmd_sizes(args):
    out = Out(args.format)
    out.head("name", "pk_bytes", "sk_bytes", "ct_bytes", "pk_kb", "ct_kb")
    for name in ([args.params] if args.params else scheme.PARAMS):
        p = _params(name)
        pk, ct = scheme.sizes(p)
        out.row(p.name, pk, p.sk_bytes, ct, kb(pk), kb(ct))
    out.emit()


def cmd_keygen(args):
    p = _params(args.params)
    kp = scheme.keygen(p, rng_for(args, "keygen"))
    Path(args.out_pk).write_bytes(kp.pk.to_bytes())
    Path(args.out_sk).write_bytes(kp.sk.to_bytes())
    out = Out(args.format)
    out.head("params", "pk_bytes", "sk_bytes")
    out.row(p.name, p.pk_bytes, p.sk_bytes)
    out.emit()


def cmd_encrypt(args):
    p = _params(args.params)
    pk = scheme.PublicKey.from_bytes(p, _read(args.pk))
    if args.msg is not None:
        try:
            raw = bytes.fromhex(args.msg)
        except ValueError:
            raise DomainError("message must be hex") from None
    else:
        raw = _read(args.msg_file)
    if len(raw) > p.msg_bytes:
        raise DomainError(f"message longer than {p.msg_bytes} bytes")
    msg = scheme.msg_from_bytes(p, raw.ljust(p.msg_bytes, b"\0"))
    theta = scheme.seed_bytes(rng_for(args, "encrypt"))
    ct = scheme.encrypt(pk, msg, theta)
    Path(args.out).write_bytes(ct.to_bytes())
    out = Out(args.format)
    out.head("params", "ct_bytes")
    out.row(p.name, p.ct_bytes)
    out.emit()


def cmd_decrypt(args):
    p = _params(args.params)
    pk = scheme.PublicKey.from_bytes(p, _read(args.pk))
    sk = scheme.SecretKey.from_bytes(p, _read(args.sk))
    ct = scheme.Ciphertext.from_bytes(p, _read(args.ct))
    out = scheme.decrypt_outcome(pk, sk, ct)
    if not out.ok:
        raise DomainError(f"decryption failed: {out.failure.value}")
    data = scheme.msg_to_bytes(p, out.message)
    if args.out:
        Path(args.out).write_bytes(data)
    o = Out(args.format)
    o.head("message")
    o.row(data.hex())
    o.emit()


def _mc_chunk(job):
    seed, idx, delta, tail, eps, trials = job
    return dfr_monte_carlo(scheme.Xof(seed, f"mc{idx}"), delta, tail, eps, trials) * trials


def _pool_map(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(fn, jobs))


def cmd_dfr(args):
    out = Out(args.format)
    if args.monte_carlo:
        d, t, e = args.delta, args.tail, args.epsilon
        if None in (d, t, e):
            raise DomainError("--monte-carlo needs --delta, --tail and --epsilon")
        chunk = 100_000
        jobs = [(args.seed, i, d, t, e, min(chunk, args.monte_carlo - i * chunk))
                for i in range(-(-args.monte_carlo // chunk))]
        fails = round(sum(_pool_map(_mc_chunk, jobs, args.jobs)))
        p = dfr_probability(d, t, e)
        out.head("delta", "tail", "epsilon", "trials", "failures", "measured", "model")
        out.row(d, t, e, args.monte_carlo, fails, f"{fails / args.monte_carlo:.6g}", f"{float(p):.6g}")
    elif args.delta is not None:
        out.head("delta", "tail", "epsilon", "dfr_bits")
        out.row(args.delta, args.tail, args.epsilon, dfr_bits(args.delta, args.tail, args.epsilon))
    else:
        out.head("name", "delta", "tail", "epsilon", "dfr_bits", "reference")
        for name in ([args.params] if args.params else scheme.PARAMS):
            p = _params(name)
            out.row(p.name, p.delta, p.gab_len - p.n_prime, p.epsilon, p.dfr_bits(), p.dfr_reference)
    out.emit()


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError("missing " + ", ".join("--" + n for n in missing))
    return [getattr(args, n) for n in names]


def cmd_estimate(args):
    a = args.attack
    try:
        if a == "rgv":
            q, m, n, k = args.q, *_need(args, "m", "n", "k")
            out = Out(args.format)
            out.head("q", "m", "n", "k", "rgv")
            out.row(q, m, n, k, est.rgv(q, m, n, k))
            out.emit()
            return
        if a == "threshold":
            m, n, k, r = _need(args, "m", "n", "k", "r")
            out = Out(args.format)
            out.head("m", "n", "k", "r", "threshold")
            out.row(m, n, k, r, est.rsl_polynomial_threshold(m, n, k, r))
            out.emit()
            return
        if a == "rsd-comb":
            rep = est.rsd_combinatorial_bits(*_need(args, "m", "n", "k", "w"), pessimism=args.pessimism)
        elif a == "rsd-mm":
            rep = est.rsd_maxminors_bits(*_need(args, "m", "n", "k", "w"), omega=args.omega)
        elif a == "nhrsd-comb":
            rep = est.nhrsd_combinatorial_bits(*_need(args, "m", "n", "n1", "w1", "w2"),
                                               pessimism=args.pessimism)
        elif a == "nhrsd-mm":
            rep = est.nhrsd_maxminors_bits(*_need(args, "m", "n", "n1", "w1", "w2"), omega=args.omega)
        elif a in ("rsl-comb", "rsl"):
            rep = est.rsl_combinatorial_bits(*_need(args, "m", "n", "k", "r", "N"),
                                             pessimism=args.pessimism)
        elif a == "rsl-alg":
            rep = est.rsl_algebraic_bits(*_need(args, "m", "n", "k", "r", "N"), omega=args.omega,
                                         nb_full_nprime=args.variant)
        elif a == "nhrsl-comb":
            rep = est.nhrsl_combinatorial_bits(*_need(args, "m", "n", "n1", "w1", "w2", "N"),
                                               swapped=args.swapped, pessimism=args.pessimism)
        else:  # pragma: no cover - argparse restricts choices
            raise DomainError(f"unknown attack {a}")
    except (est.Infeasible, est.OutOfRegime, est.Degenerate, ValueError) as e:
        raise DomainError(str(e)) from None
    if args.format == "csv":
        out = Out("csv")
        out.head("attack", *rep.instance, *rep.params, "bits", "polynomial")
        out.row(rep.attack, *rep.instance.values(), *rep.params.values(), f"{rep.bits:.4f}",
                int(rep.polynomial))
        out.emit()
    else:
        print(rep.to_text())


def cmd_figure3(args):
    rows = est.figure3_series(args.m, args.n, args.k, args.r, args.omega,
                              range(args.N_min or args.n - args.k - args.r + 1, args.N_max + 1),
                              algebraic=not args.no_algebraic, nb_full_nprime=args.variant)
    buf = io.StringIO()
    if args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(est.FIG3_HEADER)
        w.writerows([N, name, f"{bits:.4f}"] for N, name, bits in rows)
    else:
        for N, name, bits in rows:
            buf.write(f"{N}  {name}  {bits:.2f}\n")
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def cmd_attack(args):
    rng = rng_for(args, "attack-" + args.kind)
    out = Out(args.format)
    if args.kind == "rsl":
        r1 = args.r1 or lab.rsl_default_r1(args.m, args.n, args.k, args.N, args.r)
        succ = 0
        for _ in range(args.runs):
            inst = lab.gen_rsl_instance(rng, args.m, args.n, args.k, args.r, args.N)
            res, _, _ = lab.rsl_try(inst, r1, rng)
            succ += res.success
        p = float(lab.rsl_guess_probability(args.m, args.r, r1))
        out.head("runs", "r1", "successes", "measured", "predicted", "exponent")
        out.row(args.runs, r1, succ, f"{succ / args.runs:.4f}", f"{p:.4f}",
                f"{2.0 ** (-args.r * (args.m - r1)):.4f}")
    elif args.kind == "nhrsd":
        succ = 0
        for _ in range(args.runs):
            inst = lab.gen_nhrsd_instance(rng, args.m, args.n, args.n1, args.w1, args.w2)
            succ += lab.nhrsd_try(inst, args.r, args.rho, rng).success
        p = float(est.nhrsd_success_probability(2, args.m, args.w1, args.w2, args.r, args.rho).pi)
        out.head("runs", "successes", "measured", "predicted")
        out.row(args.runs, succ, f"{succ / args.runs:.5f}", f"{p:.5f}")
    else:
        demo = lab.rsl_polynomial_regime_demo(rng, args.m, args.n, args.k, args.r, reps=args.runs)
        if args.transcript:
            Path(args.transcript).write_text(demo.transcript())
        out.head("threshold", "N_above", "success_within_5", "N_below", "r1", "per_try", "predicted")
        out.row(demo.threshold, demo.above[0][0], f"{demo.success_rate_above():.3f}",
                demo.below[0][0], demo.r1_below, f"{demo.per_try_below():.4f}",
                f"{demo.predicted_below:.4f}")
    out.emit()


def cmd_kat(args):
    if args.action == "generate":
        p = _params(args.params)
        text = scheme.format_kat(scheme.kat_records(p, args.count, args.seed))
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return
    problems = scheme.verify_kat(scheme.parse_kat(_read(args.file).decode()))
    for line in problems:
        print(line)
    if problems:
        raise DomainError(f"{len(problems)} KAT mismatches")
    print("ok")


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "csv"], default="text")
    common.add_argument("--seed", type=parse_seed, default=None,
                        help="hex seed (<= 40 bytes); fresh entropy when omitted")
    common.add_argument("--jobs", type=int, default=1)

    ap = argparse.ArgumentParser(prog="rqcag", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[common])
    ps = p.add_subparsers(dest="action", required=True)
    ps.add_parser("list", parents=[common])
    sh = ps.add_parser("show", parents=[common])
    sh.add_argument("name")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("sizes", parents=[common])
    p.add_argument("--params")
    p.set_defaults(func=cmd_sizes)

    p = sub.add_parser("keygen", parents=[common])
    p.add_argument("--params", required=True)
    p.add_argument("--out-pk", required=True)
    p.add_argument("--out-sk", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", parents=[common])
    p.add_argument("--params", required=True)
    p.add_argument("--pk", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--msg", help="message as hex")
    g.add_argument("--msg-file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", parents=[common])
    p.add_argument("--params", required=True)
    p.add_argument("--pk", required=True)
    p.add_argument("--sk", required=True)
    p.add_argument("--ct", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("dfr", parents=[common])
    p.add_argument("--params")
    p.add_argument("--delta", type=int)
    p.add_argument("--tail", type=int, help="n - n'")
    p.add_argument("--epsilon", type=int)
    p.add_argument("--monte-carlo", type=int, metavar="TRIALS")
    p.set_defaults(func=cmd_dfr)

    p = sub.add_parser("estimate", parents=[common])
    p.add_argument("attack", choices=["rsd-comb", "rsd-mm", "nhrsd-comb", "nhrsd-mm", "rsl-comb",
                                      "rsl", "rsl-alg", "nhrsl-comb", "rgv", "threshold"])
    for name in ("m", "n", "k", "w", "n1", "w1", "w2", "r", "N"):
        p.add_argument("--" + name, type=int)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--omega", type=float, default=est.OMEGA)
    p.add_argument("--pessimism", action="store_true", help="add 3 log2(system width)")
    p.add_argument("--swapped", action="store_true")
    p.add_argument("--variant", action="store_true", help="equation count over all N' columns")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("figure3", parents=[common])
    p.add_argument("--m", type=int, default=61)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--r", type=int, default=7)
    p.add_argument("--N-min", type=int)
    p.add_argument("--N-max", type=int, default=300)
    p.add_argument("--omega", type=float, default=est.OMEGA)
    p.add_argument("--no-algebraic", action="store_true")
    p.add_argument("--variant", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure3)

    p = sub.add_parser("attack-sim", parents=[common])
    p.add_argument("kind", choices=["rsl", "nhrsd", "poly-demo"])
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--r1", type=int)
    p.add_argument("--n1", type=int, default=4)
    p.add_argument("--w1", type=int, default=1)
    p.add_argument("--w2", type=int, default=1)
    p.add_argument("--rho", type=int, default=2)
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--transcript")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("kat", parents=[common])
    ks = p.add_subparsers(dest="action", required=True)
    kg = ks.add_parser("generate", parents=[common])
    kg.add_argument("--params", required=True)
    kg.add_argument("--count", type=int, default=3)
    kg.add_argument("--out")
    kv = ks.add_parser("verify", parents=[common])
    kv.add_argument("file")
    p.set_defaults(func=cmd_kat)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.seed is None:
        args.seed = parse_seed(None)
    try:
        args.func(args)
    except (DomainError, scheme.DecryptFailure, lab.Exhausted) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
