"""Command-line front end.

Exit status: 0 for a positive verdict or success, 1 for a negative verdict,
2 for operational errors (bad arguments, unreadable or invalid input).
"""
import argparse
import ast
import csv
import io
import math
import operator
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import matrixfile
from .criterion import (
    DEFAULT_TOL,
    block_partition,
    extend_with_ancilla,
    pointer_basis,
    separability_hint,
    verify_pointer,
    zero_discord_verdict,
)
from .errors import DimensionError, InvalidDensityMatrixError, NonzeroDiscordError, PointerResidualError
from .matrixfile import MatrixFile, MatrixFileError
from .measure import (
    QubitProjectorParams,
    discord_for_basis,
    disturbance_min,
    minimize_discord_qubit,
    xstate_discord_closed_form,
)
from .states import (
    bell_state,
    photon_pair_state,
    pointer_state,
    product_state,
    random_bipartite,
    random_density,
    random_pointer_coefficients,
    random_unitary,
    xstate,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


class UsageError(ValueError):
    pass


def parse_number(text: str) -> float:
    """Evaluate a numeric literal or simple arithmetic in ``pi`` such as ``pi/4``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise UsageError(f"unsupported expression: {text!r}")
    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, (float, np.floating)):
        return f"{v:.12g}"
    return str(v)


def decimal(v: float) -> str:
    return np.format_float_positional(float(v), precision=15, unique=False, fractional=False, trim="k")


# ---------------------------------------------------------------- gen

FAMILIES = {
    # name: (required params, optional params with defaults)
    "xstate": (("x",), {}),
    "photon": (("theta",), {}),
    "bell": ((), {}),
    "product": ((), {"dim_a": 2, "dim_b": 2, "seed": 0}),
    "random": ((), {"dim_a": 2, "dim_b": 2, "rank": None, "seed": 0}),
    "pointer": ((), {"dim_a": 2, "dim_b": 2, "seed": 0}),
}
_INT_PARAMS = {"dim_a", "dim_b", "rank", "seed"}


def _parse_params(family, pairs, seed):
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    required, optional = FAMILIES[family]
    params = dict(optional)
    if seed is not None and "seed" in params:
        params["seed"] = seed
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not key=value")
        if key not in required and key not in optional:
            raise UsageError(f"family {family!r} takes no parameter {key!r}")
        num = parse_number(value)
        if key in _INT_PARAMS:
            if num != int(num):
                raise UsageError(f"{key} must be an integer")
            num = int(num)
        params[key] = num
    missing = [k for k in required if k not in params]
    if missing:
        raise UsageError(f"family {family!r} needs {', '.join(missing)}")
    return params


def generate(family: str, params: dict):
    if family == "xstate":
        return xstate(params["x"])
    if family == "photon":
        return photon_pair_state(params["theta"])
    if family == "bell":
        return bell_state()
    rng = np.random.default_rng(params["seed"])
    if family == "product":
        return product_state(random_density(params["dim_a"], seed=rng), random_density(params["dim_b"], seed=rng))
    if family == "random":
        return random_bipartite(params["dim_a"], params["dim_b"], params["rank"], rng)
    if family == "pointer":
        c = random_pointer_coefficients(params["dim_a"], params["dim_b"], rng)
        return pointer_state(c, random_unitary(params["dim_b"], rng))
    raise UsageError(f"unknown family {family!r}")


def cmd_gen(args, out):
    params = _parse_params(args.family, args.params, args.seed)
    rho = generate(args.family, params)
    mf = MatrixFile.from_state(rho, {"family": args.family, "params": params})
    text = matrixfile.dumps(mf)
    if args.out:
        matrixfile.write(args.out, mf)
    else:
        out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- reports

class Report:
    def __init__(self, machine):
        self.machine = machine
        self.lines = []

    def add(self, key, value, label=None):
        if self.machine:
            self.lines.append(f"{key}={fmt(value)}")
        else:
            self.lines.append(f"{label or key}: {fmt(value)}")

    def text(self, line):
        if not self.machine:
            self.lines.append(line)

    def emit(self, out, path=None):
        body = "\n".join(self.lines) + "\n"
        out.write(body)
        if path:
            with open(path, "w") as fh:
                fh.write(body)


def _label(ij):
    i, j = ij
    return f"rho^({i + 1},{j + 1})"


def _pair_label(pair):
    if pair is None:
        return "none"
    a, b = pair
    return _label(a) if a == b else f"{_label(a)} vs {_label(b)}"


def _load(path):
    mf = matrixfile.read(path)
    return mf, mf.to_state()


def cmd_check(args, out):
    _, rho = _load(args.input)
    v = zero_discord_verdict(rho, args.tol)
    n, m = rho.dims
    r = Report(args.machine)
    r.add("dims", f"{n}x{m}", "dimensions (A x B)")
    r.add("tolerance", v.tolerance_used)
    r.add("step1_blocks", n * n, f"step 1: partition into blocks of size {m}x{m}")
    r.add("step2_normal", v.normality_ok, "step 2: every block normal")
    r.add("normality_defect", v.max_normality_defect, "  max normality defect")
    r.add("step3_commute", v.commutation_ok, "step 3: all blocks commute")
    r.add("commutation_defect", v.max_commutation_defect, "  max commutation defect")
    r.add("adjoint_commutation_defect", v.adjoint_commutation_defect, "  max [B, B'^dag] defect (diagnostic)")
    r.add("worst_pair", _pair_label(v.worst_pair), "worst pair")
    r.add("diagonal_blocks", separability_hint(block_partition(rho), args.tol), "all blocks diagonal (separable)")
    r.add("is_zero", v.is_zero, "verdict zero discord")
    r.text("zero discord" if v.is_zero else "nonzero discord")
    r.emit(out, args.out)
    return EXIT_OK if v.is_zero else EXIT_NEGATIVE


def cmd_pointer(args, out):
    _, rho = _load(args.input)
    r = Report(args.machine)
    try:
        pb = pointer_basis(rho, args.tol)
    except NonzeroDiscordError as exc:
        v = exc.verdict
        r.add("is_zero", False, "verdict zero discord")
        r.add("worst_pair", _pair_label(v.worst_pair), "worst pair")
        r.add("commutation_defect", v.max_commutation_defect, "max commutation defect")
        r.add("normality_defect", v.max_normality_defect, "max normality defect")
        r.text("nonzero discord: no non-disturbing measurement exists")
        r.emit(out, args.out)
        return EXIT_NEGATIVE
    except PointerResidualError as exc:
        r.add("error", str(exc))
        r.emit(out, args.out)
        return EXIT_NEGATIVE

    residual = verify_pointer(rho, pb)
    u = pb.unitary
    n, m = rho.dims
    r.add("is_zero", True, "verdict zero discord")
    r.text("pointer unitary U (columns are |k'_B>):")
    for row in range(m):
        if args.machine:
            for col in range(m):
                r.add(f"unitary[{row},{col}]", u[row, col])
        else:
            r.text("  [" + "  ".join(fmt(z) for z in u[row]) + "]")
    r.text("projectors:")
    for k in range(m):
        vec = ", ".join(fmt(z) for z in u[:, k])
        r.add(f"projector[{k + 1}]", f"({vec})", f"  |{k + 1}'_B>")
    r.text("coefficients C[i,j,k]:")
    for i in range(n):
        for j in range(n):
            for k in range(m):
                r.add(f"C[{i + 1},{j + 1},{k + 1}]", pb.coefficients[i, j, k], f"  C[{i + 1},{j + 1},{k + 1}]")
    r.add("residual", residual, "reconstruction residual")
    r.add("reduced_state_offdiag", pb.reduced_state_residual, "off-diagonal of U^dag rho_B U")
    r.emit(out, args.out)
    ok = residual <= args.tol and pb.reduced_state_residual <= args.tol
    return EXIT_OK if ok else EXIT_NEGATIVE


def _closed_form_x(metadata):
    family = metadata.get("family")
    params = metadata.get("params") or {}
    if family == "xstate" and "x" in params:
        return float(params["x"])
    if family == "photon" and "theta" in params:
        return 0.5 * math.cos(float(params["theta"])) ** 2
    raise UsageError("--method closed needs a file generated from the xstate (or photon) family")


def cmd_discord(args, out):
    mf, rho = _load(args.input)
    r = Report(args.machine)
    if args.method == "closed":
        x = _closed_form_x(mf.metadata)
        r.add("x", x)
        r.add("discord", xstate_discord_closed_form(x), "discord (closed form, bits)")
    elif args.method == "grid":
        est = minimize_discord_qubit(rho, tuple(args.grid), args.refine)
        r.add("discord", est.value, "minimal discord (bits)")
        r.add("theta", est.argmin.theta, "argmin theta")
        r.add("phi", est.argmin.phi, "argmin phi")
        r.add("refinement_iterations", est.refinement_iterations)
    else:
        for item in args.angles:
            key, sep, value = item.partition("=")
            if not sep or key not in ("theta", "phi"):
                raise UsageError(f"expected theta=... or phi=..., got {item!r}")
            setattr(args, key, parse_number(value))
        if args.theta is None or args.phi is None:
            raise UsageError("--method basis needs --theta and --phi")
        if rho.dim_b != 2:
            raise UsageError("--method basis uses Bloch angles and needs dim_b = 2")
        params = QubitProjectorParams(args.theta, args.phi)
        r.add("theta", params.theta)
        r.add("phi", params.phi)
        r.add("discord", discord_for_basis(rho, params.basis()), "discord for basis (bits)")
    r.emit(out, args.out)
    return EXIT_OK


SWEEP_COLUMNS = ["x", "closed_form_discord", "grid_discord", "criterion_is_zero",
                 "normality_defect", "commutation_defect", "disturbance_min"]


def sweep_row(x, tol=DEFAULT_TOL, grid=(64, 128), refine=40):
    rho = xstate(x)
    v = zero_discord_verdict(rho, tol)
    return {
        "x": x,
        "closed_form_discord": xstate_discord_closed_form(x),
        "grid_discord": minimize_discord_qubit(rho, grid, refine).value,
        "criterion_is_zero": v.is_zero,
        "normality_defect": v.max_normality_defect,
        "commutation_defect": v.max_commutation_defect,
        "disturbance_min": disturbance_min(rho, grid, refine),
    }


def _sweep_row_star(a):
    return sweep_row(*a)


def cmd_sweep(args, out):
    if args.points < 3:
        raise UsageError("--points must be at least 3")
    xs = [0.5 * i / (args.points - 1) for i in range(args.points)]
    jobs = [(x, args.tol, tuple(args.grid), args.refine) for x in xs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_row_star, jobs))
    else:
        rows = [_sweep_row_star(j) for j in jobs]
    rows.sort(key=lambda row: row["x"])

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([fmt(row[c]) if isinstance(row[c], bool) else decimal(row[c]) for c in SWEEP_COLUMNS])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        zeros = [f"{row['x']:g}" for row in rows if row["criterion_is_zero"]]
        out.write(f"wrote {len(rows)} rows to {args.out}; zero discord at x = {', '.join(zeros)}\n")
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_ancilla(args, out):
    if args.ancilla_dim < 1:
        raise UsageError("--ancilla-dim must be at least 1")
    _, rho = _load(args.input)
    rho_c = random_density(args.ancilla_dim, seed=args.seed)
    base, ext = extend_with_ancilla(rho, rho_c, args.tol)
    agree = base.is_zero == ext.is_zero
    r = Report(args.machine)
    r.add("ancilla_dim", args.ancilla_dim)
    r.add("seed", args.seed)
    r.add("base_is_zero", base.is_zero, "zero discord of rho_AB")
    r.add("extended_is_zero", ext.is_zero, "zero discord of rho_AB (x) rho_C")
    r.add("base_commutation_defect", base.max_commutation_defect, "  rho_AB commutation defect")
    r.add("extended_commutation_defect", ext.max_commutation_defect, "  extended commutation defect")
    r.add("agree", agree, "verdicts agree")
    r.emit(out, args.out)
    return EXIT_OK if agree else EXIT_NEGATIVE


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative tolerance on block defects (default %(default)g)")
    common.add_argument("--machine", action="store_true", help="emit key=value lines")
    common.add_argument("--out", help="also write the report (or the generated file) here")

    p = argparse.ArgumentParser(prog="zerodiscord", description="Zero-discord test for bipartite density matrices")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a state file")
    g.add_argument("family", choices=sorted(FAMILIES))
    g.add_argument("params", nargs="*", help="key=value parameters, e.g. x=0.25 or theta=pi/4")
    g.add_argument("--seed", type=int, default=None)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", parents=[common], help="run the block criterion")
    c.add_argument("input")
    c.set_defaults(func=cmd_check)

    pt = sub.add_parser("pointer", parents=[common], help="extract the non-disturbing basis")
    pt.add_argument("input")
    pt.set_defaults(func=cmd_pointer)

    d = sub.add_parser("discord", parents=[common], help="compute discord")
    d.add_argument("input")
    d.add_argument("angles", nargs="*", help="theta=... phi=... for --method basis")
    d.add_argument("--method", choices=["closed", "grid", "basis"], default="grid")
    d.add_argument("--theta", type=parse_number)
    d.add_argument("--phi", type=parse_number)
    d.add_argument("--grid", type=int, nargs=2, default=[64, 128], metavar=("N_THETA", "N_PHI"))
    d.add_argument("--refine", type=int, default=40)
    d.set_defaults(func=cmd_discord)

    s = sub.add_parser("sweep", parents=[common], help="x-sweep of the X-state family to CSV")
    s.add_argument("--family", choices=["xstate"], default="xstate")
    s.add_argument("--points", type=int, default=101)
    s.add_argument("--grid", type=int, nargs=2, default=[64, 128], metavar=("N_THETA", "N_PHI"))
    s.add_argument("--refine", type=int, default=40)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    a = sub.add_parser("ancilla", parents=[common], help="compare verdicts with an ancilla attached to B")
    a.add_argument("input")
    a.add_argument("--ancilla-dim", type=int, default=2)
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=cmd_ancilla)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (MatrixFileError, InvalidDensityMatrixError, DimensionError, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
