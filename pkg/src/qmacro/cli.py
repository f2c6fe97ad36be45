"""Command-line interface: one subcommand per result family.

Every subcommand writes machine-readable data (CSV with ``#`` header lines
or JSON with a stable {config, results, meta} schema) plus a one-line
summary on stdout.  Outputs are deterministic: identical configs (and
seeds) give byte-identical files.  Exit codes: 0 ok, 1 user error, 2
internal error.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, cat, chain, coarse, ensemble, leggett_garg, spin, undecidability
from .config import set_tolerances

_FMT = "%.12g"


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _parse_range(text):
    """start:stop:step (inclusive of start, stop within half a step)."""
    try:
        parts = [float(x) for x in text.split(":")]
        start, stop, step = parts
    except ValueError as exc:
        raise _CliError(f"bad range {text!r}; expected start:stop:step") from exc
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def _parse_int_list(text):
    """Comma list and/or a:b spans, e.g. '1:6' or '1,2,5'."""
    out = []
    for chunk in text.split(","):
        if ":" in chunk:
            a, b = chunk.split(":")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(chunk))
    return out


def _out_path(args, default_name):
    if args.output:
        return args.output
    outdir = os.environ.get("QMACRO_OUTDIR", ".")
    return os.path.join(outdir, default_name)


def _write_csv(path, config, columns, rows):
    lines = [f"# qmacro {__version__}", "# config: " + json.dumps(config, sort_keys=True)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_FMT % v if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _write_json(path, config, results):
    payload = {
        "config": config,
        "results": results,
        "meta": {"artifact": "qmacro", "version": __version__},
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _echo(path, summary):
    print(f"{summary}  ->  {path}")


# ---------------------------------------------------------------- subcommands


def _cmd_lg_chsh(args):
    xs = _parse_range(args.sweep_omega_dt)
    rows = []
    for x in xs:
        if x <= 0:
            continue
        k_q = 3.0 * leggett_garg.analytic_parity_correlation(args.j, x) \
            - leggett_garg.analytic_parity_correlation(args.j, 3.0 * x)
        times = [x, 2 * x, 3 * x, 4 * x]
        c = [leggett_garg.classical_rotor_correlation(1.0, times[i], times[k])
             for i, k in ((0, 1), (1, 2), (2, 3), (0, 3))]
        k_cl = c[0] + c[1] + c[2] - c[3]
        rows.append((x, k_q, k_cl))
    path = _write_csv(_out_path(args, "lg_chsh.csv"),
                      {"j": args.j, "sweep": args.sweep_omega_dt},
                      ["omega_dt", "k_quantum", "k_classical"], rows)
    kmax = max(r[1] for r in rows)
    _echo(path, f"lg-chsh: j={args.j}, max K = {kmax:.6f} (bound 2)")


def _cmd_lg_wigner(args):
    xs = _parse_range(args.sweep_de_dt)
    rows = [(x, 2.0 * math.cos(x) - math.cos(2.0 * x)) for x in xs]
    path = _write_csv(_out_path(args, "lg_wigner.csv"), {"sweep": args.sweep_de_dt},
                      ["de_dt", "k"], rows)
    _echo(path, f"lg-wigner: max K = {max(r[1] for r in rows):.6f} (bound 1)")


def _cmd_parity_violation(args):
    xs = _parse_range(args.sweep_x)
    n = int(round(2 * args.j)) + 1
    prop = leggett_garg.Propagator(spin.rotation_hamiltonian(args.j, 1.0))
    obs = leggett_garg.parity_observable(args.j)
    rho0 = np.eye(n) / n
    rows = []
    for x in xs:
        if x <= 0:
            continue
        k_analytic = float(leggett_garg.analytic_k_parity(x))
        dt = x / n

        def corr(ta, tb):
            return leggett_garg.two_time_correlation(rho0, prop, obs, ta, tb)

        k_matrix = leggett_garg.lg_chsh(corr, dt, 2 * dt, 3 * dt, 4 * dt).k_value
        rows.append((x, k_analytic, k_matrix))
    path = _write_csv(_out_path(args, "parity_violation.csv"),
                      {"j": args.j, "sweep": args.sweep_x},
                      ["x", "k_analytic", "k_matrix"], rows)
    x_star, k_star = leggett_garg.find_k_maximum(leggett_garg.analytic_k_parity, 0.5, 2.0)
    _echo(path, f"parity-violation: peak K = {k_star:.4f} at x = {x_star:.4f}")


def _cmd_coarse_overlap(args):
    rows = []
    for j in args.j_list:
        povm = coarse.build_povm(coarse.make_partition(float(j), mode="hemispheres"))
        rho_eq = spin.coherent_state(float(j), math.pi / 2, math.pi)
        gap = coarse.mixture_condition_gap(rho_eq, povm)
        rows.append((j, 1.0 - gap, gap))
    path = _write_csv(_out_path(args, "coarse_overlap.csv"), {"j_list": args.j_list},
                      ["j", "overlap", "gap"], rows)
    if args.dump_q:
        j = float(args.j_list[-1])
        grid = spin.sphere_grid(j)
        q = spin.q_function_grid(spin.coherent_state(j, math.pi / 2, math.pi), grid)
        _write_csv(args.dump_q, {"j": j, "state": "equatorial coherent"},
                   ["theta", "phi", "value"], list(spin.density_csv_rows(q, grid)))
    _echo(path, "coarse-overlap: " + ", ".join(f"j={r[0]}: {r[1]:.4f}" for r in rows))


def _cmd_char_fn(args):
    xis = _parse_range(args.sweep_xi)
    rows = []
    for xi in xis:
        q = coarse.quantum_char_fn(args.j, xi, xi, args.theta)
        c = coarse.classical_char_fn(args.j, xi, xi, args.theta)
        rows.append((xi, q, c, abs(q - c), coarse.classical_limit_deviation(args.j, xi, xi, args.theta)))
    path = _write_csv(_out_path(args, "char_fn.csv"),
                      {"j": args.j, "theta": args.theta, "sweep": args.sweep_xi},
                      ["xi", "quantum", "classical", "abs_diff", "phase_sq_mismatch"], rows)
    _echo(path, f"char-fn: j={args.j}, theta={args.theta}, {len(rows)} points")


def _cmd_cat_lg(args):
    model = cat.CatModel(j=args.j, omega=args.omega)
    dt = args.dt if args.dt else math.pi / (4.0 * model.effective_precession)
    res = cat.hemisphere_lg(model, [dt, 2 * dt, 3 * dt, 4 * dt])
    results = {
        "dt": dt,
        "correlations": [float(c) for c in res.correlations],
        "k": res.k_value,
        "bound": res.bound,
        "violated": res.violated,
    }
    path = _write_json(_out_path(args, "cat_lg.json"),
                       {"j": args.j, "omega": args.omega, "dt": dt}, results)
    _echo(path, f"cat-lg: K = {res.k_value:.6f} (bound {res.bound})")


def _cmd_decoherence(args):
    model = cat.CatModel(j=args.j, omega=args.omega)
    trace = cat.decoherence_trace(model, args.dt, args.steps)
    rows = [(n, float(a), math.cos(args.omega * n * args.dt) ** 2, float(trace.survival_law(n * args.dt)))
            for n, a in enumerate(trace.survival)]
    path = _write_csv(_out_path(args, "decoherence.csv"),
                      {"omega": args.omega, "dt": args.dt, "steps": args.steps},
                      ["n", "survival", "bare_cos2", "fitted_exponential"], rows)
    _echo(path, f"decoherence: nu = {trace.nu:.6f}, A_inf -> 1/2")


def _cmd_cat_circuit(args):
    a_ones, a_zeros, gates = cat.cat_circuit_simulate(args.qubits, args.omega_dt, args.intervals)
    results = {
        "amplitude_ones": [a_ones.real, a_ones.imag],
        "amplitude_zeros": [a_zeros.real, a_zeros.imag],
        "expected_cos": math.cos(args.intervals * args.omega_dt),
        "expected_sin": math.sin(args.intervals * args.omega_dt),
        "gate_tally": gates,
    }
    path = _write_json(_out_path(args, "cat_circuit.json"),
                       {"qubits": args.qubits, "omega_dt": args.omega_dt,
                        "intervals": args.intervals}, results)
    _echo(path, f"cat-circuit: {gates} gates, amplitudes ({a_ones.real:.6f}, {a_zeros.real:.6f})")


def _cmd_chain_epsilon(args):
    params = chain.ChainParams(alpha=args.alpha)
    rows = []
    for n in args.n_list:
        for m in args.m_list:
            if n % m:
                continue
            blocks = chain.BlockSpec(s=n // m, m=m, d=args.d)
            cov = chain.block_covariance(params, blocks)
            rows.append((args.alpha, n, m, blocks.s, args.d,
                         chain.epsilon(cov), chain.duan_witness(cov)))
    path = _write_csv(_out_path(args, "chain_epsilon.csv"),
                      {"alpha": args.alpha, "d": args.d, "n": args.n_list, "m": args.m_list},
                      ["alpha", "n", "m", "s", "d", "epsilon", "duan"], rows)
    _echo(path, f"chain-epsilon: {len(rows)} block configurations")


def _cmd_field_propagator(args):
    rows = []
    for r in args.r_list:
        d_phi, d_pi = chain.field_propagators(args.mass, args.length, r)
        rows.append((args.mass, args.length, r, d_phi, d_pi))
    g, h = chain.field_propagators(args.mass, args.length, 0.0)
    eps_rows = []
    for _, _, r, d_phi, d_pi in rows:
        if r > args.length:
            cov = chain.CovarianceBlock(g=g, h=h, g_ab=d_phi, h_ab=d_pi)
            eps_rows.append(chain.epsilon(cov))
    path = _write_csv(_out_path(args, "field_propagator.csv"),
                      {"mass": args.mass, "L": args.length, "r_list": args.r_list},
                      ["mass", "L", "r", "d_phi", "d_pi"], rows)
    _echo(path, f"field-propagator: epsilon = {max(eps_rows) if eps_rows else 0.0} for all r > L")


def _cmd_ensemble_dicke(args):
    rows = []
    for k in args.k_list:
        _, e_ab = ensemble.dicke_collective(args.n_total, k)
        rows.append((args.n_total, k, e_ab))
    path = _write_csv(_out_path(args, "ensemble_dicke.csv"),
                      {"N": args.n_total, "k_list": args.k_list}, ["N", "k", "e_ab"], rows)
    _echo(path, f"ensemble-dicke: max E_ab = {max(r[2] for r in rows):.6f}")


def _cmd_ensemble_singlet(args):
    rows = [(n, ensemble.singlet_collective(n)) for n in args.n_list]
    path = _write_csv(_out_path(args, "ensemble_singlet.csv"),
                      {"n_list": args.n_list}, ["n", "e_ab"], rows)
    _echo(path, f"ensemble-singlet: E_ab = 1/(2n), {len(rows)} sizes")


def _cmd_ensemble_admixture(args):
    rows = []
    for n in args.n_list:
        for p in args.p_list:
            e_ab, n_c = ensemble.admixture_collective(n, p)
            rows.append((n / 2.0, p, e_ab, n_c if n_c != math.inf else -1))
    path = _write_csv(_out_path(args, "ensemble_admixture.csv"),
                      {"n_list": args.n_list, "p_list": args.p_list},
                      ["s", "p", "e_ab", "n_critical"], rows)
    _echo(path, f"ensemble-admixture: {len(rows)} grid points")


def _cmd_undecidability_audit(args):
    if args.axioms == "bell":
        axioms = undecidability.bell_axioms()
    elif args.axioms == "ghz":
        axioms = undecidability.ghz_axioms()
    elif args.axioms == "single-z":
        axioms = undecidability.AxiomSet(
            (undecidability.PauliString((0,), (1,)),), (0,))
    else:
        raise _CliError(f"unknown axiom set {args.axioms!r}")
    if axioms.n_qubits != args.n_qubits:
        raise _CliError(f"axiom set {args.axioms!r} has N = {axioms.n_qubits}, not {args.n_qubits}")
    rows = undecidability.decidable_randomness_audit(axioms, shots=args.shots, seed=args.seed)
    n_dec = sum(r["decidable"] for r in rows)
    results = {
        "n_strings": len(rows),
        "n_decidable": n_dec,
        "n_undecidable": len(rows) - n_dec,
        "rows": rows,
    }
    path = _write_json(_out_path(args, "undecidability_audit.json"),
                       {"N": args.n_qubits, "axioms": args.axioms,
                        "shots": args.shots, "seed": args.seed}, results)
    _echo(path, f"undecidability-audit: {n_dec} decidable of {len(rows)} (2^N = {2 ** args.n_qubits})")


def _cmd_ghz(args):
    report = undecidability.ghz_contradiction()
    path = _write_json(_out_path(args, "ghz.json"), {}, report)
    print("ghz: axioms", ", ".join(report["axioms"]),
          "derive bit", report["classical_bit"],
          "but quantum gives bit", report["quantum_bit"],
          f"(operator product sign {report['product_sign']:+.0f})")
    _echo(path, "ghz: contradiction = %s" % report["contradiction"])


# ----------------------------------------------------------------- selftests


def _selftest(name):
    """Tiny acceptance subset per subcommand; raises AssertionError on failure."""
    if name in ("lg-chsh", "parity-violation"):
        assert abs(3 * math.cos(math.pi / 4) - math.cos(3 * math.pi / 4) - 2 * math.sqrt(2)) < 1e-12
        x, k = leggett_garg.find_k_maximum(leggett_garg.analytic_k_parity, 0.5, 2.0)
        assert abs(x - 1.054) < 5e-3 and abs(k - 2.481) < 5e-3
    elif name == "lg-wigner":
        assert abs(2 * math.cos(math.pi / 3) - math.cos(2 * math.pi / 3) - 1.5) < 1e-12
    elif name == "coarse-overlap":
        povm = coarse.build_povm(coarse.make_partition(25.0, mode="hemispheres"))
        gap = coarse.mixture_condition_gap(spin.coherent_state(25.0, math.pi / 2, math.pi), povm)
        assert abs((1 - gap) - 0.997) < 3e-3
    elif name == "char-fn":
        assert abs(coarse.quantum_char_fn(100.0, 0.0, 0.0, 1.0) - 1.0) < 1e-12
        j = 1e4
        xi = 0.1 / math.sqrt(j)
        assert abs(coarse.quantum_char_fn(j, xi, xi, 1.0) - coarse.classical_char_fn(j, xi, xi, 1.0)) < 1e-3
    elif name == "cat-lg":
        model = cat.CatModel(j=20.0, omega=1.0)
        dt = math.pi / (4 * model.effective_precession)
        assert abs(cat.hemisphere_lg(model, [dt, 2 * dt, 3 * dt, 4 * dt]).k_value - 2 * math.sqrt(2)) < 1e-5
    elif name == "decoherence":
        tr = cat.decoherence_trace(cat.CatModel(j=2.0), math.pi / 10, 40)
        assert abs(tr.survival[-1] - 0.5) < 1e-3
    elif name == "cat-circuit":
        a1, a0, gates = cat.cat_circuit_simulate(3, 0.3, 1)
        assert abs(a1 - math.cos(0.3)) < 1e-12 and abs(a0 - math.sin(0.3)) < 1e-12 and gates == 3
    elif name == "chain-epsilon":
        cov = chain.block_covariance(chain.ChainParams(0.99), chain.BlockSpec(s=1, m=1, d=1))
        assert chain.epsilon(cov) == 0.0
        cov = chain.block_covariance(chain.ChainParams(0.99), chain.BlockSpec(s=2, m=1, d=1))
        assert chain.epsilon(cov) > 0.0
    elif name == "field-propagator":
        assert abs(chain.window_commutator_norm(1.0) - 1.0) < 1e-6
    elif name == "ensemble-dicke":
        assert abs(ensemble.dicke_collective(8, 4)[1] - 1.0 / 14.0) < 1e-12
    elif name == "ensemble-singlet":
        assert abs(ensemble.singlet_collective(10) - 0.05) < 1e-15
    elif name == "ensemble-admixture":
        e_ab, n_c = ensemble.admixture_collective(2, 0.5)
        assert n_c == 3 and abs(e_ab - 1.0 / 16.0) < 1e-15
    elif name in ("undecidability-audit", "ghz"):
        rep = undecidability.ghz_contradiction()
        assert rep["contradiction"] and rep["product_sign"] == -1.0
    else:
        raise _CliError(f"no selftest for {name!r}")


# --------------------------------------------------------------------- main


def _build_parser():
    parser = _Parser(prog="qmacro", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn, command_name=name)
        p.add_argument("--output", "-o", help="output file (default: derived name in $QMACRO_OUTDIR)")
        p.add_argument("--selftest", action="store_true", help="run this subcommand's acceptance subset")
        p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                       help="override a named tolerance")
        return p

    p = add("lg-chsh", _cmd_lg_chsh, help="CHSH-type K(omega dt) sweep, quantum vs classical rotor")
    p.add_argument("--j", type=float, default=0.5)
    p.add_argument("--sweep-omega-dt", default="0.01:3.2:0.01")

    p = add("lg-wigner", _cmd_lg_wigner, help="Wigner-type two-level K sweep")
    p.add_argument("--sweep-de-dt", default="0.01:6.3:0.01")

    p = add("parity-violation", _cmd_parity_violation, help="large-spin parity K(x), analytic vs matrix")
    p.add_argument("--j", type=float, default=10.0)
    p.add_argument("--sweep-x", default="0.2:3.0:0.05")

    p = add("coarse-overlap", _cmd_coarse_overlap, help="which-hemisphere mixture overlap vs j")
    p.add_argument("--j-list", type=_parse_int_list, default=[25, 100])
    p.add_argument("--dump-q", help="also write the Q surface as (theta, phi, value) CSV")

    p = add("char-fn", _cmd_char_fn, help="quantum vs classical characteristic function")
    p.add_argument("--j", type=float, default=1e4)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--sweep-xi", default="0.0005:0.02:0.0005")

    p = add("cat-lg", _cmd_cat_lg, help="hemisphere LG test of the oscillating cat")
    p.add_argument("--j", type=float, default=50.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=None)

    p = add("decoherence", _cmd_decoherence, help="survival trace under step decoherence")
    p.add_argument("--j", type=float, default=10.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=math.pi / 10)
    p.add_argument("--steps", type=int, default=50)

    p = add("cat-circuit", _cmd_cat_circuit, help="c-not ladder simulation of the cat evolution")
    p.add_argument("--qubits", type=int, default=5)
    p.add_argument("--omega-dt", type=float, default=0.2)
    p.add_argument("--intervals", type=int, default=4)

    p = add("chain-epsilon", _cmd_chain_epsilon, help="collective-block entanglement sweep")
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--n", dest="n_list", type=_parse_int_list, default=[1, 2, 3, 4, 5, 6])
    p.add_argument("--m", dest="m_list", type=_parse_int_list, default=[1])

    p = add("field-propagator", _cmd_field_propagator, help="window-averaged Klein-Gordon propagators")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--length", "-L", type=float, default=1.0)
    p.add_argument("--r-list", type=lambda s: [float(x) for x in s.split(",")],
                   default=[1.5, 2.0, 4.0])

    p = add("ensemble-dicke", _cmd_ensemble_dicke, help="collective negativity of Dicke states")
    p.add_argument("--N", dest="n_total", type=int, default=8)
    p.add_argument("--k", dest="k_list", type=_parse_int_list, default=None)

    p = add("ensemble-singlet", _cmd_ensemble_singlet, help="generalized-singlet collective negativity")
    p.add_argument("--n", dest="n_list", type=_parse_int_list, default=[1, 2, 3, 4, 5, 10, 20])

    p = add("ensemble-admixture", _cmd_ensemble_admixture, help="singlet with z-correlated admixture")
    p.add_argument("--n", dest="n_list", type=_parse_int_list, default=[1, 2, 3, 4, 6, 10])
    p.add_argument("--p", dest="p_list", type=lambda s: [float(x) for x in s.split(",")],
                   default=[0.1, 0.3, 0.5, 0.7, 0.9])

    p = add("undecidability-audit", _cmd_undecidability_audit, help="decidable vs random over all Pauli strings")
    p.add_argument("--N", dest="n_qubits", type=int, default=2)
    p.add_argument("--axioms", default="bell", choices=["bell", "ghz", "single-z"])
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=None)

    add("ghz", _cmd_ghz, help="logic-vs-quantum GHZ report")
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        for item in args.tol:
            name, _, value = item.partition("=")
            if not value:
                raise _CliError(f"bad --tol {item!r}; expected NAME=VALUE")
            set_tolerances(**{name: float(value)})
        if getattr(args, "n_total", None) is not None and getattr(args, "k_list", None) is None:
            args.k_list = list(range(args.n_total + 1))
        if getattr(args, "shots", 0) and args.seed is None:
            raise _CliError("sampling requires --seed")
        if args.selftest:
            _selftest(args.command_name)
            print(f"{args.command_name}: selftest ok")
            return 0
        args.fn(args)
        return 0
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
