"""Command-line front end.

Subcommands cover the library surface: ``nubar`` (level averages of the
vertical momentum as CSV), ``entropy`` (entropy of the time-one map over
a list or range of intensities), ``orbit`` (trajectories of the reduced,
full, or product-twist flow with conserved-quantity columns), ``lattice``
(suspension data of a hyperbolic integer matrix), and ``lie`` (exact
Lie-algebra queries).

Defaults may be overridden by a ``solenoid.conf`` file (key=value lines)
in the working directory or named via --config; command-line flags win
over the file, the file wins over built-in defaults.  All CSV output has
a header row, 17-significant-digit reals, '.' decimals, and LF line
endings, and is byte-identical for a given configuration regardless of
--threads.

Exit codes: 0 success, 2 usage or input error, 3 domain error (for
example a structure-constant table violating the Jacobi identity),
4 numerical failure (non-finite state).
"""

import argparse
import itertools
import os
import sys
from fractions import Fraction

import numpy as np

from . import averaging, euler, liealg, soldyn

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4

CONFIG_NAME = "solenoid.conf"

# Keys honored in solenoid.conf, with casts and built-in defaults.
CONFIG_KEYS = {
    "h": (float, euler.DEFAULT_H),
    "t_max": (float, averaging.DEFAULT_T_MAX),
    "n_nu": (int, averaging.DEFAULT_GRID[0]),
    "n_xi": (int, averaging.DEFAULT_GRID[1]),
    "threads": (int, 1),
    "out_dir": (str, "."),
}

_BUILTIN_FAMILIES = ("heisenberg", "g2n1", "upper_triangular", "abelian")
_BUILTIN_FIXED = ("sol", "sol_x_r")


class CliError(Exception):
    """Usage/input problem; maps to exit code 2."""


class DomainError(Exception):
    """Domain-level rejection (e.g. Jacobi failure); exit code 3."""


# ---------------------------------------------------------------------------
# Config and formatting helpers.

def read_config(path):
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            cfg[key.strip()] = val.strip()
    return cfg


def cfg_value(args, cfg, key):
    """Effective setting: flag beats config file beats default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    cast, default = CONFIG_KEYS[key]
    if key in cfg:
        try:
            return cast(cfg[key])
        except ValueError:
            raise CliError(f"config key {key}: cannot parse {cfg[key]!r}")
    return default


def g17(x):
    return f"{float(x):.17g}"


def out_path(args, cfg, name):
    """Resolve an output file against out_dir; create the directory."""
    if os.path.isabs(name):
        return name
    base = cfg_value(args, cfg, "out_dir")
    if base != ".":
        os.makedirs(base, exist_ok=True)
    return os.path.join(base, name)


def write_csv(path, header, rows):
    """Rows of preformatted strings; LF endings regardless of platform."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_plot_script(csv_path, xlabel, ylabel, columns, title):
    """Companion gnuplot script next to the CSV (same stem, .gnuplot)."""
    stem, _ = os.path.splitext(csv_path)
    script = stem + ".gnuplot"
    data = os.path.basename(csv_path)
    lines = [
        f"# gnuplot companion for {data}; run: gnuplot -p {os.path.basename(script)}",
        "set datafile separator ','",
        "set grid",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        f"plot '{data}' every ::1 using {columns} with lines title '{title}'",
        "",
    ]
    with open(script, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))
    return script


def parse_floats(text, expect=None, what="value list"):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise CliError(f"cannot parse {what}: {text!r}")
    if not vals:
        raise CliError(f"empty {what}")
    if expect is not None and len(vals) != expect:
        raise CliError(f"{what} needs {expect} entries, got {len(vals)}")
    if not all(np.isfinite(vals)):
        raise CliError(f"non-finite entry in {what}")
    return vals


# ---------------------------------------------------------------------------
# nubar

def cmd_nubar(args, cfg):
    s = args.s
    if s == 0.0:
        raise CliError("the level-average profile needs s != 0")
    if args.samples < 2:
        raise CliError("--samples must be at least 2")
    fmin, fmax = euler.casimir_range(s)
    lo = args.f_min if args.f_min is not None else 0.99 * fmin
    hi = args.f_max if args.f_max is not None else 0.99 * fmax
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise CliError(f"invalid f range [{lo}, {hi}]")
    h = cfg_value(args, cfg, "h")
    t_max = cfg_value(args, cfg, "t_max")
    grid = np.linspace(lo, hi, args.samples)
    try:
        prof = averaging.nubar_profile(s, grid, h=h, t_max=t_max)
    except ValueError as exc:
        raise CliError(str(exc))
    path = out_path(args, cfg, args.out)
    rows = [(g17(p.f), g17(p.nu_bar), str(int(p.converged))) for p in prof]
    write_csv(path, ("f", "nu_bar", "converged"), rows)
    script = write_plot_script(path, "f", "nu_bar", "1:2", f"s = {s:g}")
    print(f"wrote {path} ({len(rows)} rows) and {script}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entropy

def parse_s_range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError("--s-range expects lo:hi:step")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise CliError(f"cannot parse --s-range {text!r}")
    if not (np.isfinite(lo) and np.isfinite(hi) and np.isfinite(step)):
        raise CliError("non-finite bound in --s-range")
    if step <= 0 or hi < lo:
        raise CliError("--s-range needs lo <= hi and step > 0")
    vals = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 1e-12 * max(1.0, abs(hi)):
            break
        # s = 0 carries no magnetic term; the range silently skips it.
        if abs(v) > 1e-12:
            vals.append(v)
        k += 1
    if not vals:
        raise CliError("--s-range produced no nonzero values")
    return vals


def cmd_entropy(args, cfg):
    if (args.s_list is None) == (args.s_range is None):
        raise CliError("exactly one of --s-list / --s-range is required")
    if args.s_list is not None:
        s_values = parse_floats(args.s_list, what="--s-list")
        if any(v == 0.0 for v in s_values):
            raise CliError("s = 0 is not allowed (no magnetic term)")
    else:
        s_values = parse_s_range(args.s_range)
    if args.grid is not None:
        pair = args.grid.split(",")
        if len(pair) != 2:
            raise CliError("--grid expects n_nu,n_xi")
        try:
            n_nu, n_xi = int(pair[0]), int(pair[1])
        except ValueError:
            raise CliError(f"cannot parse --grid {args.grid!r}")
    else:
        n_nu = cfg_value(args, cfg, "n_nu")
        n_xi = cfg_value(args, cfg, "n_xi")
    h = cfg_value(args, cfg, "h")
    t_max = cfg_value(args, cfg, "t_max")
    threads = cfg_value(args, cfg, "threads")
    try:
        results = averaging.entropy_curve(s_values, n_nu=n_nu, n_xi=n_xi,
                                          h=h, t_max=t_max, threads=threads)
    except ValueError as exc:
        raise CliError(str(exc))
    path = out_path(args, cfg, args.out)
    rows = [(g17(r.s), g17(r.value), g17(r.fallback_fraction))
            for r in results]
    write_csv(path, ("s", "h_mu", "fallback_fraction"), rows)
    script = write_plot_script(path, "s", "h_mu", "1:2",
                               f"grid {n_nu}x{n_xi}")
    print(f"wrote {path} ({len(rows)} rows) and {script}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# orbit

_SEED_LEN = {"euler": 3, "sol": 6, "variation": 8}


def cmd_orbit(args, cfg):
    mode = args.mode
    seed = parse_floats(args.seed, expect=_SEED_LEN[mode], what="--seed")
    if args.t_end <= 0:
        raise CliError("--t-end must be positive")
    if args.stride < 1:
        raise CliError("--stride must be at least 1")
    h = cfg_value(args, cfg, "h")
    s = args.s

    if mode == "euler":
        norm = float(np.linalg.norm(seed))
        if norm == 0.0:
            raise CliError("euler seed must be nonzero")
        p0 = np.asarray(seed, dtype=float) / norm  # momenta live on the sphere
        rec = euler.integrate_orbit(p0, s, args.t_end, h=h)
        header = ("t", "nu", "a0", "a1", "f", "H")

        def fields(t, x):
            f = s * x[0] + x[1] * x[2]
            ham = 0.5 * float(x @ x)
            return (g17(t), g17(x[0]), g17(x[1]), g17(x[2]), g17(f), g17(ham))

    elif mode == "sol":
        rec = soldyn.sol_integrate(np.asarray(seed), s, args.t_end, h=h)
        header = ("t", "u", "y0", "y1", "nu", "a0", "a1", "i0", "i1", "H")

        def fields(t, x):
            ints = soldyn.first_integrals(x, s)
            return tuple(g17(v) for v in (t, *x, *ints))

    else:
        if s == 0.0:
            raise CliError("the product-twist integral columns need s != 0")
        rec = soldyn.variation_integrate(np.asarray(seed), s, args.t_end, h=h)
        header = ("t", "u", "tflat", "y0", "y1", "nu", "tau", "a0", "a1",
                  "a0a1", "a0exp", "tau_su", "H")

        def fields(t, x):
            ints = soldyn.variation_integrals(x, s)
            return tuple(g17(v) for v in (t, *x, *ints))

    path = out_path(args, cfg, args.out)
    idx = range(0, len(rec.times), args.stride)
    rows = [fields(rec.times[i], rec.states[i]) for i in idx]
    write_csv(path, header, rows)
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# lattice

def cmd_lattice(args, cfg):
    entries = parse_floats(args.matrix, expect=4, what="--matrix")
    if any(v != round(v) for v in entries):
        raise CliError("--matrix entries must be integers")
    mat = np.array(entries, dtype=int).reshape(2, 2)
    try:
        spec = soldyn.lattice_from_matrix(mat)
    except ValueError as exc:
        raise CliError(str(exc))
    p = spec.conjugator
    print(f"matrix: [[{mat[0,0]}, {mat[0,1]}], [{mat[1,0]}, {mat[1,1]}]]")
    print(f"trace: {spec.trace}")
    print(f"lambda: {g17(spec.expanding_eigenvalue)}")
    print(f"P: [[{g17(p[0,0])}, {g17(p[0,1])}], [{g17(p[1,0])}, {g17(p[1,1])}]]")
    print(f"diag_residual: {g17(spec.diag_residual)}")
    print(f"volume: {g17(spec.volume)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# lie

def load_algebra(args):
    name = args.algebra
    if name in _BUILTIN_FIXED:
        return liealg.builtin_algebra(name)
    if name in _BUILTIN_FAMILIES:
        if args.n is None:
            raise CliError(f"--algebra {name} needs --n")
        try:
            return liealg.builtin_algebra(name, args.n)
        except ValueError as exc:
            raise CliError(str(exc))
    if os.path.exists(name):
        try:
            return liealg.load_structure_file(name, dim=args.dim)
        except ValueError as exc:
            if str(exc) == liealg.ERR_JACOBI:
                raise DomainError(str(exc))
            raise CliError(str(exc))
    raise CliError(f"unknown algebra {name!r} (not a builtin, not a file)")


def parse_omega(text, dim):
    toks = text.split()
    if not toks or len(toks) % 3 != 0:
        raise CliError("--omega expects triples 'i j value' (1-based)")
    items = []
    for k in range(0, len(toks), 3):
        try:
            i, j = int(toks[k]), int(toks[k + 1])
            val = Fraction(toks[k + 2])
        except (ValueError, ZeroDivisionError):
            raise CliError(f"cannot parse --omega triple {toks[k:k+3]!r}")
        if not (1 <= i <= dim and 1 <= j <= dim) or i == j:
            raise CliError(f"--omega indices out of range: {i} {j}")
        items.append((i - 1, j - 1, val))
    try:
        return liealg.TwoForm.from_entries(dim, items)
    except ValueError as exc:
        raise CliError(str(exc))


def fmt_vector(alg, coords):
    terms = []
    for name, c in zip(alg.basis_names, coords):
        if c == 0:
            continue
        terms.append(name if c == 1 else f"{c}*{name}")
    return " + ".join(terms) if terms else "0"


def fmt_two_vector(alg, tv):
    terms = []
    for (i, j), c in zip(itertools.combinations(range(alg.dim), 2), tv.coords):
        if c == 0:
            continue
        base = f"{alg.basis_names[i]}^{alg.basis_names[j]}"
        terms.append(base if c == 1 else f"{c}*{base}")
    return " + ".join(terms) if terms else "0"


def cmd_lie(args, cfg):
    alg = load_algebra(args)
    sub = args.lie_cmd

    if sub == "b2":
        print(liealg.ce_b2(alg))
        return EXIT_OK

    if sub == "kernel":
        basis = liealg.kernel_L(alg)
        print(f"algebra: {alg.name} (dim {alg.dim})")
        print(f"kernel dimension: {len(basis)}")
        for tv in basis:
            print(fmt_two_vector(alg, tv))
        return EXIT_OK

    if sub == "check-generators":
        try:
            cert = liealg.verify_decomposable_generation(alg)
        except ValueError as exc:
            raise CliError(str(exc))
        print(f"algebra: {alg.name} (dim {alg.dim})")
        print(f"kernel dimension: {cert.kernel_dim}")
        print(f"span rank: {cert.span_rank}")
        for idx, reason in cert.failures:
            print(f"candidate {idx}: {reason}")
        print(f"generates: {'yes' if cert.ok else 'no'}")
        return EXIT_OK

    if args.omega is None:
        raise CliError(f"lie {sub} needs --omega")
    omega = parse_omega(args.omega, alg.dim)

    if sub == "primitive":
        b = liealg.exact_primitive(alg, omega)
        if b is None:
            print(liealg.ERR_NOT_EXACT)
        else:
            print(" ".join(str(c) for c in b))
        return EXIT_OK

    if sub == "displace":
        pair = liealg.find_displacing_pair(alg, omega)
        if pair is None:
            print("none")
        else:
            x, y = pair
            print(f"x = {fmt_vector(alg, x)}")
            print(f"y = {fmt_vector(alg, y)}")
        return EXIT_OK

    raise CliError(f"unknown lie subcommand {sub!r}")


# ---------------------------------------------------------------------------
# Parser assembly and entry point.

def build_parser():
    parser = argparse.ArgumentParser(
        prog="solmag",
        description="Magnetic flows on the 3-D solvable geometry: level "
                    "averages, entropy curves, orbits, lattices, and exact "
                    "Lie-algebra queries.")
    parser.add_argument("--config", default=None,
                        help=f"config file (default: ./{CONFIG_NAME} if present)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_numeric(p):
        p.add_argument("--h", type=float, default=None, help="integrator step")
        p.add_argument("--t-max", dest="t_max", type=float, default=None,
                       help="period-search horizon")
        p.add_argument("--out-dir", dest="out_dir", default=None,
                       help="directory for output files")

    p = sub.add_parser("nubar", help="level-average profile as CSV")
    p.add_argument("--s", type=float, required=True, help="magnetic intensity")
    p.add_argument("--f-min", dest="f_min", type=float, default=None)
    p.add_argument("--f-max", dest="f_max", type=float, default=None)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--out", default="nubar.csv")
    common_numeric(p)
    p.set_defaults(func=cmd_nubar)

    p = sub.add_parser("entropy", help="entropy of the time-one map vs s")
    p.add_argument("--s-list", dest="s_list", default=None,
                   help="comma-separated intensities")
    p.add_argument("--s-range", dest="s_range", default=None,
                   help="lo:hi:step (s = 0 skipped)")
    p.add_argument("--grid", default=None, help="n_nu,n_xi quadrature grid")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default="entropy.csv")
    common_numeric(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("orbit", help="trajectory CSV with integral columns")
    p.add_argument("--mode", choices=("euler", "sol", "variation"),
                   required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--seed", required=True,
                   help="comma-separated state (3, 6, or 8 reals by mode)")
    p.add_argument("--t-end", dest="t_end", type=float, required=True)
    p.add_argument("--stride", type=int, default=1,
                   help="write every Nth sample")
    p.add_argument("--out", default="orbit.csv")
    common_numeric(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("lattice", help="suspension data of a hyperbolic matrix")
    p.add_argument("--matrix", required=True, help="a,b,c,d row-major integers")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("lie", help="exact Lie-algebra queries")
    p.add_argument("lie_cmd", choices=("b2", "kernel", "check-generators",
                                       "primitive", "displace"))
    p.add_argument("--algebra", required=True,
                   help="builtin name or structure-constant file")
    p.add_argument("--n", type=int, default=None, help="family size")
    p.add_argument("--dim", type=int, default=None,
                   help="dimension override for file input")
    p.add_argument("--omega", default=None,
                   help="2-form entries as 'i j value' triples, 1-based")
    p.set_defaults(func=cmd_lie)

    return parser


def entry(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = {}
        cfg_path = args.config
        if cfg_path is None and os.path.exists(CONFIG_NAME):
            cfg_path = CONFIG_NAME
        if cfg_path is not None:
            if not os.path.exists(cfg_path):
                raise CliError(f"config file not found: {cfg_path}")
            cfg = read_config(cfg_path)
        return args.func(args, cfg)
    except CliError as exc:
        print(f"solmag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"solmag: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except euler.NonFiniteStateError as exc:
        print(f"solmag: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        if str(exc) == liealg.ERR_JACOBI:
            print(f"solmag: domain error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"solmag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(entry())


if __name__ == "__main__":
    main()
