"""Command-line front end.

Exit status: 0 on success, 1 if ``selftest`` finds a defect, 2 when a
ciphertext does not decrypt into the <ba> cycle, 64 on usage errors, 65 on
malformed documents and 66 when an input file cannot be read.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys

from . import baselines, documents, harness, scheme, selftest
from .distributions import (
    DEFAULT_FRAC_BITS,
    fig_export,
    table_report,
    write_fig_csv,
    write_report_csv,
)
from .errors import DlogFailure, DocumentError, InvalidParams, NotInCycle
from .sampling import RandomSource

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_NOT_IN_CYCLE = 2

SEED_ENV = "M2TLWE_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer, got {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _source(args) -> RandomSource:
    if args.seed is not None:
        return RandomSource(args.seed)
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return RandomSource(_seed(env))
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{SEED_ENV}: {exc}") from None
    return RandomSource(int.from_bytes(os.urandom(8), "big"))


def _read(path: str):
    with open(path, encoding="utf-8") as fh:
        return documents.loads(fh.read())


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


@contextlib.contextmanager
def _out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_keygen(args) -> int:
    src = _source(args)
    if args.scheme == "m2t":
        for name in ("t", "m", "n", "nc"):
            if getattr(args, name) is None:
                raise UsageError(f"--{name} is required for --scheme m2t")
        sigma = args.sigma if args.sigma is not None else 2 ** ((args.t - 1) / 4)
        params = scheme.M2tParams(args.t, args.m, args.n, args.nc, sigma)
        pk, sk = scheme.keygen(src, params)
    elif args.scheme == "regev":
        if args.n is None:
            raise UsageError("--n is required for --scheme regev")
        params = baselines.RegevParams.for_dimension(args.n, args.sigma if args.sigma is not None else 2.0)
        if args.m is not None:
            params = baselines.RegevParams(params.n, params.q, args.m, params.sigma)
        pk, sk = baselines.regev_keygen(src, params)
    else:
        if args.n is None:
            raise UsageError("--n is required for --scheme sylow")
        params = baselines.sylow_param_gen(src, args.n, args.sigma if args.sigma is not None else 1.5)
        pk, sk = baselines.sylow_keygen(src, params)
    _write(args.out_pub, documents.dumps(pk))
    _write(args.out_sec, documents.dumps(sk))
    return 0


def cmd_encrypt(args) -> int:
    pk = _read(args.pub)
    src = _source(args)
    if isinstance(pk, scheme.PublicKey):
        ct = scheme.encrypt(src, pk, args.bit)
    elif isinstance(pk, baselines.RegevPublicKey):
        ct = baselines.regev_encrypt(src, pk, args.bit)
    elif isinstance(pk, baselines.SylowPublicKey):
        ct = baselines.sylow_encrypt(src, pk, args.bit)
    else:
        raise DocumentError(f"{args.pub}: not a public key")
    _write(args.out, documents.dumps(ct, pk=pk))
    return 0


def cmd_decrypt(args) -> int:
    sk = _read(args.sec)
    loaded = _read(args.ct)
    if not isinstance(loaded, tuple):
        raise DocumentError(f"{args.ct}: not a ciphertext")
    tag, ct = loaded
    if isinstance(sk, scheme.SecretKey) and isinstance(ct, scheme.Ciphertext):
        if tag != sk.params.t or len(ct.w) != sk.params.n:
            raise DocumentError("ciphertext parameters do not match the secret key")
        bit = scheme.decrypt(sk, ct)
    elif isinstance(sk, baselines.RegevSecretKey) and isinstance(ct, baselines.RegevCiphertext):
        if tag != sk.params.q or len(ct.a) != sk.params.n:
            raise DocumentError("ciphertext parameters do not match the secret key")
        bit = baselines.regev_decrypt(sk, ct)
    elif isinstance(sk, baselines.SylowSecretKey) and isinstance(ct, baselines.SylowCiphertext):
        if tag != sk.params.p or len(ct.a) != sk.params.n:
            raise DocumentError("ciphertext parameters do not match the secret key")
        bit = baselines.sylow_decrypt(sk, ct)
    else:
        raise DocumentError("secret key and ciphertext belong to different schemes")
    print(bit)
    return 0


def cmd_failure_table(args) -> int:
    rhos = [1 << (l) for l in args.log2rho_list]
    if any(l < 3 for l in args.log2rho_list) or any(r < 1 for r in args.r_list):
        raise UsageError("need r >= 1 and log2(rho) >= 3")
    rows = table_report(args.r_list, rhos, args.precision)
    with _out(args.out) as fh:
        write_report_csv(fh, rows)
    return 0


def cmd_fig_data(args) -> int:
    if args.rho < 4 or args.rho & (args.rho - 1):
        raise UsageError("--rho must be a power of two >= 4")
    p0, p1 = fig_export(args.rho, args.sigma, args.r, args.precision)
    with _out(args.out) as fh:
        write_fig_csv(fh, p0, p1)
    return 0


def cmd_distinguish(args) -> int:
    m = args.m if args.m is not None else 2 * args.n
    sigma = args.sigma if args.sigma is not None else 2 ** ((args.t - 1) / 4)
    params = scheme.M2tParams(args.t, m, args.n, args.nc, sigma)
    rows = harness.run_distinguisher_suite(_source(args), params, args.trials, args.training)
    with _out(args.out) as fh:
        harness.write_harness_csv(fh, rows)
    return 0


def cmd_selftest(args) -> int:
    ok = True
    for name, passed in selftest.run():
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok &= passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="m2tlwe", description="LWE encryption in the modular-maximal cyclic group M_{2^t}.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def seed_arg(p):
        p.add_argument("--seed", type=_seed, help=f"64-bit seed (default: ${SEED_ENV}, else OS entropy)")

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--scheme", choices=["m2t", "regev", "sylow"], default="m2t")
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--nc", type=int)
    p.add_argument("--sigma", type=float)
    seed_arg(p)
    p.add_argument("--out-pub", required=True)
    p.add_argument("--out-sec", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt one bit")
    p.add_argument("--pub", required=True)
    p.add_argument("--bit", type=int, choices=[0, 1], required=True)
    seed_arg(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext and print the bit")
    p.add_argument("--sec", required=True)
    p.add_argument("--ct", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("failure-table", help="exact decryption failure probabilities (sigma = rho^(1/4))")
    p.add_argument("--r-list", type=_int_list, required=True)
    p.add_argument("--log2rho-list", type=_int_list, required=True)
    p.add_argument("--precision", type=int, default=DEFAULT_FRAC_BITS, help="fractional bits")
    p.add_argument("--out")
    p.set_defaults(func=cmd_failure_table)

    p = sub.add_parser("fig-data", help="error-term distributions for bits 0 and 1")
    p.add_argument("--rho", type=int, default=256)
    p.add_argument("--sigma", type=float, default=4)
    p.add_argument("--r", type=int, default=10)
    p.add_argument("--precision", type=int, default=DEFAULT_FRAC_BITS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fig_data)

    p = sub.add_parser("distinguish", help="uniformity tests and the real-or-random game")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nc", type=int, required=True)
    p.add_argument("--m", type=int, help="equations (default 2n)")
    p.add_argument("--sigma", type=float)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--training", type=int, default=20_000, help="encryptions seen by the frequency adversary")
    seed_arg(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("selftest", help="exhaustive group checks at t = 4, 5")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"m2tlwe: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except InvalidParams as exc:
        print(f"m2tlwe: invalid parameters: {exc}", file=sys.stderr)
        return EX_USAGE
    except NotInCycle as exc:
        print(f"m2tlwe: decryption anomaly: {exc}", file=sys.stderr)
        return EX_NOT_IN_CYCLE
    except (DocumentError, DlogFailure) as exc:
        print(f"m2tlwe: {exc}", file=sys.stderr)
        return EX_DATAERR
    except OSError as exc:
        print(f"m2tlwe: {exc}", file=sys.stderr)
        return EX_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
