"""Command-line front end: ``dims``, ``verify`` and ``export``.

Exit codes: 0 pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

if os.environ.get("WBA_THREADS"):
    # only effective when numpy has not been imported yet, as under the console script
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, os.environ["WBA_THREADS"])

import numpy as np  # noqa: E402

from . import algebra22 as a22  # noqa: E402
from .gram import gram_matrix
from .matrixunits import unit_matrix
from .partitions import Partition, enumerate_partitions, irrep_dimension, multiplicity
from .suites import SUITES, run_suite
from .tensor import DenseOperator
from .walled import q_matrix, q_trace_closed_form, v_matrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "binary")
OBJECTS = ("unit", "arc", "q", "g2", "g1", "g0", "gram")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int = 2
    d: int = 3
    tolerance: float | None = None
    fmt: str = "json"
    out: str | None = None

    def __post_init__(self) -> None:
        if self.d < 2:
            raise UsageError("d must be at least 2")
        if self.command in ("verify", "dims") and not 1 <= self.p <= 3:
            raise UsageError(f"p={self.p} unsupported; use 1, 2 or 3")
        if self.fmt not in FORMATS:
            raise UsageError(f"unknown format {self.fmt!r}")


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


# dims


def dims_table(p: int, d: int) -> dict:
    if p == 1:
        blocks = [
            {"ideal": "1-P+", "kind": "scalar", "size": 1, "trace": d * d - 1},
            {"ideal": "P+", "kind": "scalar", "size": 1, "trace": 1},
        ]
        return {"p": 1, "d": d, "blocks": blocks, "dim": 2}
    if p == 2:
        dec = a22.decompose_22(d)
        out = dec.to_json()
        out["p"] = 2
        out["signature"] = dec.signature()
        return out
    # p = 3: the S_p x S_p sector and the traces of the Q ideals
    pairs = sum(
        irrep_dimension(mu) ** 2 * irrep_dimension(nu) ** 2
        for mu in enumerate_partitions(p)
        for nu in enumerate_partitions(p)
        if multiplicity(mu, d) and multiplicity(nu, d)
    )
    ideals = [{"ideal": f"Q{k}", "trace": q_trace_closed_form(k, p, d)} for k in range(p + 1)]
    return {"p": p, "d": d, "ideals": ideals, "top_sector_dim": pairs}


# export


def _parse_shape(text: str) -> Partition:
    try:
        return Partition(tuple(int(x) for x in text.split(",") if x))
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}") from exc


def build_object(args, p: int, d: int) -> DenseOperator | np.ndarray:
    name = args.object
    if name == "unit":
        mu = _parse_shape(args.mu) if args.mu else Partition((p,))
        try:
            arr = unit_matrix(mu, args.i, args.j, d, args.orientation)
        except (IndexError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        return DenseOperator(d, mu.weight, arr)
    if name in ("arc", "q"):
        k = p if args.k is None else args.k
        if not 0 <= k <= p:
            raise UsageError(f"k={k} outside 0..{p}")
        arr = v_matrix(p, d, k) if name == "arc" else q_matrix(k, p, d)
        return DenseOperator(d, 2 * p, arr)
    if name in ("g2", "g1", "g0"):
        label = args.label
        if name != "g1" and label is not None and (len(label) != 2 or set(label) - set(a22.LABELS)):
            raise UsageError(f"bad label {label!r}")
        if name == "g2":
            k, l = (label or "SS")
            return a22.g2_unit(k, l, d).operator
        if name == "g0":
            i, j = (label or "SS")
            return a22.g0_unit(i, j, d).operator
        ij, kl = (label or "SS,SS").split(",")
        if ij not in a22.PAIRS or kl not in a22.PAIRS:
            raise UsageError(f"bad label {label!r}")
        return a22.g1_unit(ij, kl, d).operator
    if name == "gram":
        if p < 2:
            raise UsageError("gram needs p >= 2")
        return gram_matrix(p, d).entries
    raise UsageError(f"unknown object {name!r}")


def _csv_rows(arr: np.ndarray) -> str:
    lines = []
    for row in arr:
        if np.iscomplexobj(row) and np.any(row.imag):
            lines.append(",".join(f"{repr(float(z.real))}{float(z.imag):+}j" for z in row))
        else:
            lines.append(",".join(repr(float(np.real(z))) for z in row))
    return "\n".join(lines) + "\n"


def serialize(obj, fmt: str, meta: dict) -> bytes:
    if isinstance(obj, DenseOperator):
        if fmt == "binary":
            return obj.to_bytes()
        if fmt == "csv":
            return _csv_rows(obj.entries).encode()
        return (dumps({**meta, **obj.to_json()}) + "\n").encode()
    if fmt == "binary":
        raise UsageError("binary export is defined for operators only")
    if fmt == "csv":
        return _csv_rows(obj).encode()
    return (dumps({**meta, "entries": [[float(x) for x in row] for row in obj]}) + "\n").encode()


# commands


def cmd_dims(cfg: RunConfig) -> int:
    sys.stdout.write(dumps(dims_table(cfg.p, cfg.d)) + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    reports = sorted(run_suite(suite, cfg.p, cfg.d, cfg.tolerance), key=lambda r: (r.claim_id, r.p or 0))
    for r in reports:
        sys.stdout.write(dumps(r.to_json()) + "\n")
    failed = [r for r in reports if not r.passed]
    if failed:
        worst = max(failed, key=lambda r: r.max_abs_deviation / max(r.tolerance, 1e-300))
        sys.stderr.write(
            f"FAIL {len(failed)}/{len(reports)} claims; worst {worst.claim_id} "
            f"deviation {worst.max_abs_deviation!r} > {worst.tolerance!r}\n"
        )
        return EXIT_FAIL
    return EXIT_OK


def cmd_export(cfg: RunConfig, args) -> int:
    obj = build_object(args, cfg.p, cfg.d)
    meta = {"object": args.object, "p": cfg.p, "d": cfg.d}
    data = serialize(obj, cfg.fmt, meta)
    if cfg.out:
        Path(cfg.out).write_bytes(data)
    elif cfg.fmt == "binary":
        sys.stdout.buffer.write(data)
    else:
        sys.stdout.write(data.decode())
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=None)
    common.add_argument("--d", type=int, default=3)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--format", dest="fmt", default="json")
    common.add_argument("--out", default=None)

    parser = _Parser(prog="walledbrauer", description="Walled Brauer algebra matrix units and checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("dims", parents=[common], help="block structure and dimensions")
    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=SUITES + ("all",))
    export = sub.add_parser("export", parents=[common], help="write an operator or matrix")
    export.add_argument("object", choices=OBJECTS)
    export.add_argument("--k", type=int, default=None, help="arc count for arc and q")
    export.add_argument("--mu", default=None, help="partition for unit, e.g. 2,1")
    export.add_argument("--i", type=int, default=0)
    export.add_argument("--j", type=int, default=0)
    export.add_argument("--orientation", choices=("LR", "RL"), default="LR")
    export.add_argument("--label", default=None, help="g2/g0: e.g. SA; g1: e.g. SS,AS")
    return parser


def _default_p(command: str, suite: str | None) -> int:
    if suite == "a22":
        return 2
    if command == "verify":
        return 3
    return 2


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        suite = getattr(args, "suite", None)
        p = args.p if args.p is not None else _default_p(args.command, suite)
        cfg = RunConfig(args.command, p, args.d, args.tol, args.fmt, args.out)
        if args.command == "dims":
            return cmd_dims(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, suite)
        return cmd_export(cfg, args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
