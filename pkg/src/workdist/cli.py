"""Command-line pipeline: JSON scenario configs in, deterministic CSV
(and optional SVG) files out.

Determinism contract: identical config bytes produce byte-identical CSV
output.  Floats are written with 12 significant digits, summation orders
are fixed, headers carry the config hash instead of timestamps, and line
endings are always LF.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure
(cutoff, resolution, quadrature), 4 I/O error.
"""

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, cqed, pointer, scheme_a, svgplot, system
from .errors import ConfigError, WorkdistError
from .svgplot import fmt

COMMANDS = ("scheme-a", "pointer", "cqed-scheme-a", "cqed-husimi",
            "cqed-angular", "moments")

DEFAULTS = {
    "system": {"omega_a": 1.0, "dephase": False},
    "scheme_a": {"lambda_max": 128.0, "samples": 2048, "window_sigma": 0.06,
                 "gl_lambda_max": 4.0 * math.pi, "gl_points": 321},
    "pointer": {"sigma": 0.25, "shift_per_energy": 1.0, "x0": 0.0,
                "grid_points": 2048},
    "cqed": {"phi": 0.5, "alpha": 2.5, "fock_cutoff": None,
             "theta_points": 720, "husimi_half_width": None,
             "husimi_points": 201, "radial_points": 384},
}


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    omega_a: float
    state: system.InitialState
    state_repr: tuple          # ("bloch", [x, y, z]) or ("rho", nested)
    dephase: bool
    unitary: np.ndarray
    drive_repr: tuple          # ("bloch", [...]) or ("unitary", nested)
    scheme_a: dict
    pointer: dict
    cqed: dict
    sha256: str


def _fail(path, message):
    raise ConfigError(f"{path}: {message}")


def _expect_mapping(node, path):
    if not isinstance(node, dict):
        _fail(path, f"expected an object, got {type(node).__name__}")
    return node


def _expect_number(node, path, positive=False, integer=False):
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        _fail(path, f"expected a number, got {type(node).__name__}")
    if not math.isfinite(node):
        _fail(path, "must be finite")
    if positive and not node > 0:
        _fail(path, f"must be positive, got {node}")
    if integer:
        if int(node) != node:
            _fail(path, f"expected an integer, got {node}")
        return int(node)
    return float(node)


def _expect_bool(node, path):
    if not isinstance(node, bool):
        _fail(path, f"expected true/false, got {type(node).__name__}")
    return node


def _reject_unknown(node, allowed, path):
    for key in node:
        if key not in allowed:
            _fail(f"{path}.{key}", "unknown key")


def _real_vector3(node, path):
    if not (isinstance(node, list) and len(node) == 3):
        _fail(path, "expected a list of 3 numbers")
    return [_expect_number(v, f"{path}[{i}]") for i, v in enumerate(node)]


def _complex_matrix(node, path):
    """Nested lists of [re, im] pairs."""
    if not (isinstance(node, list) and node):
        _fail(path, "expected a non-empty list of rows")
    rows = []
    for r, row in enumerate(node):
        if not (isinstance(row, list) and len(row) == len(node)):
            _fail(f"{path}[{r}]", "matrix must be square")
        entries = []
        for c, cell in enumerate(row):
            if not (isinstance(cell, list) and len(cell) == 2):
                _fail(f"{path}[{r}][{c}]", "expected an [re, im] pair")
            re = _expect_number(cell[0], f"{path}[{r}][{c}][0]")
            im = _expect_number(cell[1], f"{path}[{r}][{c}][1]")
            entries.append(complex(re, im))
        rows.append(entries)
    return np.array(rows, dtype=np.complex128)


def _merged(block, defaults, path):
    node = dict(defaults)
    _reject_unknown(block, set(defaults), path)
    node.update(block)
    return node


def parse_config(raw):
    """Validate raw JSON bytes into a ScenarioConfig with defaults applied."""
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ConfigError(f"(root): not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"(root): invalid JSON: {exc}") from exc
    doc = _expect_mapping(doc, "(root)")
    _reject_unknown(doc, {"system", "drive", "scheme_a", "pointer", "cqed"}, "(root)")

    sys_node = _expect_mapping(doc.get("system", {}), "system")
    _reject_unknown(sys_node, {"omega_a", "initial_state", "dephase"}, "system")
    omega_a = _expect_number(sys_node.get("omega_a", DEFAULTS["system"]["omega_a"]),
                             "system.omega_a", positive=True)
    dephase_flag = _expect_bool(sys_node.get("dephase", DEFAULTS["system"]["dephase"]),
                                "system.dephase")
    if "initial_state" not in sys_node:
        _fail("system.initial_state", "required")
    st_node = _expect_mapping(sys_node["initial_state"], "system.initial_state")
    has_bloch, has_rho = "bloch" in st_node, "rho" in st_node
    if has_bloch == has_rho:
        _fail("system.initial_state", "exactly one of 'bloch' or 'rho' must be given")
    _reject_unknown(st_node, {"bloch", "rho"}, "system.initial_state")
    try:
        if has_bloch:
            vec = _real_vector3(st_node["bloch"], "system.initial_state.bloch")
            state = system.state_from_bloch(vec)
            state_repr = ("bloch", vec)
        else:
            mat = _complex_matrix(st_node["rho"], "system.initial_state.rho")
            state = system.initial_state(mat)
            state_repr = ("rho", st_node["rho"])
    except WorkdistError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"system.initial_state: {exc}") from exc

    if "drive" not in doc:
        _fail("drive", "required")
    drv_node = _expect_mapping(doc["drive"], "drive")
    has_bloch, has_u = "bloch" in drv_node, "unitary" in drv_node
    if has_bloch == has_u:
        _fail("drive", "exactly one of 'bloch' or 'unitary' must be given")
    _reject_unknown(drv_node, {"bloch", "unitary"}, "drive")
    try:
        if has_bloch:
            vec = _real_vector3(drv_node["bloch"], "drive.bloch")
            unitary = system.unitary_from_bloch(vec)
            drive_repr = ("bloch", vec)
        else:
            unitary = _complex_matrix(drv_node["unitary"], "drive.unitary")
            from .numerics import require_unitary
            require_unitary(unitary, name="drive.unitary")
            drive_repr = ("unitary", drv_node["unitary"])
    except WorkdistError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"drive: {exc}") from exc
    if unitary.shape[0] != state.dim:
        _fail("drive", f"unitary dimension {unitary.shape[0]} != state dimension {state.dim}")

    sa = _merged(_expect_mapping(doc.get("scheme_a", {}), "scheme_a"),
                 DEFAULTS["scheme_a"], "scheme_a")
    sa["lambda_max"] = _expect_number(sa["lambda_max"], "scheme_a.lambda_max", positive=True)
    sa["samples"] = _expect_number(sa["samples"], "scheme_a.samples", positive=True, integer=True)
    if sa["samples"] & (sa["samples"] - 1):
        _fail("scheme_a.samples", f"must be a power of two, got {sa['samples']}")
    sa["window_sigma"] = _expect_number(sa["window_sigma"], "scheme_a.window_sigma", positive=True)
    sa["gl_lambda_max"] = _expect_number(sa["gl_lambda_max"], "scheme_a.gl_lambda_max", positive=True)
    sa["gl_points"] = _expect_number(sa["gl_points"], "scheme_a.gl_points", positive=True, integer=True)

    po = _merged(_expect_mapping(doc.get("pointer", {}), "pointer"),
                 DEFAULTS["pointer"], "pointer")
    po["sigma"] = _expect_number(po["sigma"], "pointer.sigma", positive=True)
    po["shift_per_energy"] = _expect_number(po["shift_per_energy"], "pointer.shift_per_energy")
    if po["shift_per_energy"] == 0:
        _fail("pointer.shift_per_energy", "must be nonzero")
    po["x0"] = _expect_number(po["x0"], "pointer.x0")
    po["grid_points"] = _expect_number(po["grid_points"], "pointer.grid_points",
                                       positive=True, integer=True)

    cq = _merged(_expect_mapping(doc.get("cqed", {}), "cqed"), DEFAULTS["cqed"], "cqed")
    cq["phi"] = _expect_number(cq["phi"], "cqed.phi")
    cq["alpha"] = _expect_number(cq["alpha"], "cqed.alpha")
    if cq["alpha"] < 0:
        _fail("cqed.alpha", f"must be >= 0, got {cq['alpha']}")
    if cq["fock_cutoff"] is not None:
        cq["fock_cutoff"] = _expect_number(cq["fock_cutoff"], "cqed.fock_cutoff",
                                           positive=True, integer=True)
    cq["theta_points"] = _expect_number(cq["theta_points"], "cqed.theta_points",
                                        positive=True, integer=True)
    if cq["husimi_half_width"] is not None:
        cq["husimi_half_width"] = _expect_number(cq["husimi_half_width"],
                                                 "cqed.husimi_half_width", positive=True)
    cq["husimi_points"] = _expect_number(cq["husimi_points"], "cqed.husimi_points",
                                         positive=True, integer=True)
    cq["radial_points"] = _expect_number(cq["radial_points"], "cqed.radial_points",
                                         positive=True, integer=True)

    return ScenarioConfig(
        omega_a=omega_a, state=state, state_repr=state_repr, dephase=dephase_flag,
        unitary=unitary, drive_repr=drive_repr, scheme_a=sa, pointer=po, cqed=cq,
        sha256=hashlib.sha256(raw).hexdigest())


def serialize_config(cfg):
    """Canonical JSON for a parsed config (defaults made explicit)."""
    doc = {
        "system": {"omega_a": cfg.omega_a, "dephase": cfg.dephase,
                   "initial_state": {cfg.state_repr[0]: cfg.state_repr[1]}},
        "drive": {cfg.drive_repr[0]: cfg.drive_repr[1]},
        "scheme_a": cfg.scheme_a,
        "pointer": cfg.pointer,
        "cqed": cfg.cqed,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def print_defaults():
    doc = {
        "system": {"omega_a": DEFAULTS["system"]["omega_a"],
                   "dephase": DEFAULTS["system"]["dephase"],
                   "initial_state": {"bloch": [0.0, 1.0, 0.0]}},
        "drive": {"bloch": [math.pi / 4, 0.0, 0.0]},
        "scheme_a": DEFAULTS["scheme_a"],
        "pointer": DEFAULTS["pointer"],
        "cqed": DEFAULTS["cqed"],
    }
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# scenario assembly
# ---------------------------------------------------------------------------

def _scenario(cfg):
    h = 0.5 * cfg.omega_a * system.SIGMA_Z if cfg.state.dim == 2 else None
    if h is None:
        raise ConfigError("system: only qubit scenarios are supported by the CLI")
    scn = system.SystemScenario(h0=h, ht=h.copy(), u=cfg.unitary)
    table = system.transition_table(scn)
    state = cfg.state
    if cfg.dephase:
        state = system.dephase(state, table.basis0)
    return scn, table, state


def _dispersive(cfg):
    cutoff = cfg.cqed["fock_cutoff"]
    return cqed.DispersiveParams(
        phi=cfg.cqed["phi"], alpha=cfg.cqed["alpha"],
        fock_cutoff=-1 if cutoff is None else cutoff)


def _workers():
    raw = os.environ.get("WORKDIST_THREADS", "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"WORKDIST_THREADS: expected an integer, got {raw!r}") from exc
    return max(0, n)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _write_csv(path, cfg, command, columns, rows):
    lines = [f"# workdist {__version__}",
             f"# command: {command}",
             f"# config-sha256: {cfg.sha256}",
             "# columns: " + ",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _write_svg(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _atom_rows(dist):
    rows = []
    for w in dist.ws:
        rows.append((float(w), dist.weight_at(w),
                     _part_weight(dist.classical_ws, dist.classical_weights, w),
                     _part_weight(dist.interference_ws, dist.interference_weights, w)))
    return rows


def _part_weight(ws, weights, w):
    mask = np.abs(ws - w) <= 1e-9 * max(1.0, abs(w))
    return float(np.sum(weights[mask]))


def run(command, cfg, out_dir=".", svg=False):
    """Execute one pipeline command; returns the list of files written."""
    os.makedirs(out_dir, exist_ok=True)
    workers = _workers()
    written = []

    def out(name):
        return os.path.join(out_dir, name)

    if command == "scheme-a":
        _, table, state = _scenario(cfg)
        gsum = scheme_a.characteristic_function(state, table)
        dist = scheme_a.quasiprobability(gsum)
        written.append(_write_csv(
            out("scheme_a_atoms.csv"), cfg, command,
            ("work", "weight", "classical_weight", "interference_weight"),
            _atom_rows(dist)))
        lams = np.linspace(-cfg.scheme_a["gl_lambda_max"], cfg.scheme_a["gl_lambda_max"],
                           cfg.scheme_a["gl_points"])
        g = scheme_a.evaluate(gsum, lams)
        written.append(_write_csv(
            out("scheme_a_gl.csv"), cfg, command, ("lambda", "g_real", "g_imag"),
            [(float(l), float(v.real), float(v.imag)) for l, v in zip(lams, g)]))
        if svg:
            written.append(_write_svg(out("scheme_a_atoms.svg"), svgplot.stem_plot(
                dist.ws, dist.weights, "work quasiprobability atoms", "W", "weight")))
            written.append(_write_svg(out("scheme_a_gl.svg"), svgplot.line_plot(
                lams, [g.real, g.imag], ["Re G", "Im G"],
                "characteristic function", "lambda", "G(lambda)")))

    elif command == "pointer":
        _, table, state = _scenario(cfg)
        ptr = pointer.GaussianPointer(x0=cfg.pointer["x0"], sigma=cfg.pointer["sigma"],
                                      shift_per_energy=cfg.pointer["shift_per_energy"])
        grid = pointer.default_grid(table, ptr, cfg.pointer["grid_points"])
        dist = pointer.pointer_distribution(state, table, ptr, grid)
        written.append(_write_csv(
            out("pointer_distribution.csv"), cfg, command, ("dx", "density"),
            [(float(x), float(y)) for x, y in zip(dist.grid, dist.density)]))
        if svg:
            written.append(_write_svg(out("pointer_distribution.svg"), svgplot.line_plot(
                dist.grid, [dist.density], ["P(dx)"],
                "pointer shift distribution", "dx", "density")))

    elif command == "cqed-scheme-a":
        _, table, state = _scenario(cfg)
        params = _dispersive(cfg)
        csum = cqed.cqed_characteristic_function(state, cfg.unitary, params)
        dist = scheme_a.quasiprobability(csum)
        scale = csum.frequency_scale
        rows = [(float(w), float(w * cfg.omega_a / scale), dist.weight_at(w),
                 _part_weight(dist.classical_ws, dist.classical_weights, w),
                 _part_weight(dist.interference_ws, dist.interference_weights, w))
                for w in dist.ws]
        written.append(_write_csv(
            out("cqed_scheme_a_atoms.csv"), cfg, command,
            ("frequency", "work", "weight", "classical_weight", "interference_weight"),
            rows))
        lams = np.linspace(-cfg.scheme_a["gl_lambda_max"], cfg.scheme_a["gl_lambda_max"],
                           cfg.scheme_a["gl_points"])
        g = scheme_a.evaluate(csum, lams)
        written.append(_write_csv(
            out("cqed_scheme_a_gl.csv"), cfg, command, ("two_phi", "g_real", "g_imag"),
            [(float(l), float(v.real), float(v.imag)) for l, v in zip(lams, g)]))
        if svg:
            written.append(_write_svg(out("cqed_scheme_a_gl.svg"), svgplot.line_plot(
                lams, [g.real, g.imag], ["Re G", "Im G"],
                "Fock-pair phase record", "2*phi", "G")))

    elif command == "cqed-husimi":
        _, table, state = _scenario(cfg)
        params = _dispersive(cfg)
        g = cqed.coherent_amplitudes(params.alpha, params.fock_cutoff)
        rho_c = cqed.cavity_state_after_protocol(state, cfg.unitary, g, params)
        half = cfg.cqed["husimi_half_width"]
        if half is None:
            half = params.alpha + 3.0
        grid = cqed.PhaseGrid.square(half, cfg.cqed["husimi_points"])
        hus = cqed.husimi_q(rho_c, grid, workers=workers)
        rows = []
        for a, re in enumerate(grid.re):
            for b, im in enumerate(grid.im):
                rows.append((float(re), float(im), float(hus.q[a, b])))
        written.append(_write_csv(
            out("cqed_husimi.csv"), cfg, command, ("re", "im", "q"), rows))
        if svg:
            written.append(_write_svg(out("cqed_husimi.svg"), svgplot.heatmap(
                grid.re, grid.im, hus.q, "cavity Husimi-Q after protocol",
                "Re xi", "Im xi")))

    elif command == "cqed-angular":
        _, table, state = _scenario(cfg)
        params = _dispersive(cfg)
        thetas = cqed.default_theta_grid(cfg.cqed["theta_points"])
        ang = cqed.angular_distribution(state, cfg.unitary, params, thetas)
        written.append(_write_csv(
            out("cqed_angular.csv"), cfg, command, ("theta", "density"),
            [(float(t), float(d)) for t, d in zip(ang.thetas, ang.density)]))
        if svg:
            written.append(_write_svg(out("cqed_angular.svg"), svgplot.line_plot(
                ang.thetas, [ang.density], ["P(theta)"],
                "angular work distribution", "theta", "density")))

    elif command == "moments":
        _, table, state = _scenario(cfg)
        gsum = scheme_a.characteristic_function(state, table)
        rows = []
        for order in range(1, scheme_a.MAX_MOMENT_ORDER + 1):
            rows.append((order,
                         scheme_a.moments_analytic(gsum, order),
                         _fd_moment(gsum, order)))
        written.append(_write_csv(
            out("moments.csv"), cfg, command,
            ("order", "analytic", "finite_difference"), rows))

    else:
        raise ConfigError(f"unknown command {command!r}")
    return written


_FD_STEPS = {1: 1e-4, 2: 1e-4, 3: 1e-3, 4: 1e-2, 5: 0.05, 6: 0.05}


def fd_coefficients(order, half_width):
    """Central finite-difference stencil for d^order/dx^order at 0,
    solved from the Taylor system on offsets -half_width..half_width."""
    offsets = np.arange(-half_width, half_width + 1, dtype=np.float64)
    a = np.vander(offsets, increasing=True).T
    b = np.zeros(offsets.size)
    b[order] = math.factorial(order)
    return offsets, np.linalg.solve(a, b)


def _fd_moment(gsum, order):
    """<W^n> = (-i)^n d^n G/dlambda^n |_0 by a 4th-order central stencil."""
    h = _FD_STEPS[order]
    offsets, coeffs = fd_coefficients(order, (order + 3) // 2)
    deriv = sum(c * scheme_a.evaluate(gsum, float(o * h)) for o, c in zip(offsets, coeffs))
    deriv /= h ** order
    return float(((-1j) ** order * deriv).real)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="workdist",
        description="Work-distribution measurement simulator (phase-record, "
                    "pointer, and circuit-QED readout schemes).",
        epilog="CSV columns per command: scheme-a: work,weight,classical_weight,"
               "interference_weight and lambda,g_real,g_imag; pointer: dx,density; "
               "cqed-scheme-a: frequency,work,weight,classical_weight,"
               "interference_weight and two_phi,g_real,g_imag; cqed-husimi: re,im,q; "
               "cqed-angular: theta,density; moments: order,analytic,"
               "finite_difference.  WORKDIST_THREADS caps the worker pool "
               "(0 = sequential).")
    parser.add_argument("command", choices=COMMANDS, help="pipeline to run")
    parser.add_argument("--config", help="path to a JSON scenario config")
    parser.add_argument("--out", default=".", help="output directory (default: .)")
    parser.add_argument("--svg", action="store_true", help="also emit SVG figures")
    parser.add_argument("--print-defaults", action="store_true",
                        help="print the default configuration and exit")
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.print_defaults:
        print_defaults()
        return 0
    if not args.config:
        sys.stderr.write("error: --config is required (or use --print-defaults)\n")
        return 2
    try:
        with open(args.config, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        sys.stderr.write(f"error: cannot read config: {exc}\n")
        return 4
    try:
        cfg = parse_config(raw)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    try:
        written = run(args.command, cfg, out_dir=args.out, svg=args.svg)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except WorkdistError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 4
    for path in written:
        sys.stdout.write(path + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
