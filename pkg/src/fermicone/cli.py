"""Command-line front end.

Exit codes: 0 success (``analyze``: member), 1 input error, 2 non-member
(``analyze``), 3 gap condition violated (``model``), 4 a cross-check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .checks import SUITES, run_suites
from .decompositions import (
    ManyBodyState,
    classify_state,
    expectation,
    grassmann_factor_space,
    occupation_measures,
    pseudo_expectation,
    pseudo_spectral,
    realize,
    semi_spectral,
    spectral,
)
from .dual_cone import canonical_decompose, is_extreme, kernel_dim_bound_check, reconstruct
from .errors import BudgetExceeded, FermiconeError, GapConditionError, InvalidArgument
from .fock import DEFAULT_BUDGET, OccupationState, build_one_body_diagonal, full_spectrum
from .models import (
    Model74Params,
    TypeIIParams,
    TypeIParams,
    analyze_levels,
    build_thm74,
    kernel_dimension_74,
    type_i_model,
    type_ii_model,
)
from .numeric import FLOAT, RATIONAL, NumericPolicy, format_scalar, to_json_scalar
from .spectral import OneBodySpectrum, is_dual_cone_member

EXIT_OK, EXIT_INPUT, EXIT_NONMEMBER, EXIT_GAP, EXIT_CHECK = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        # floats stay strings so rational mode reads 0.1 as 1/10 exactly
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def _field(data: dict, key: str, path: str, kind=None, required=True):
    if key not in data:
        if required:
            raise InputError(f"{path}: missing field '{key}'")
        return None
    val = data[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise InputError(f"{path}: field '{key}' must be an integer, got {val!r}")
    if kind is list and not isinstance(val, list):
        raise InputError(f"{path}: field '{key}' must be a list, got {val!r}")
    return val


def _scalar(policy: NumericPolicy, val, where: str):
    try:
        return policy.coerce(val)
    except InvalidArgument as exc:
        raise InputError(f"{where}: {exc}") from None


def _scalars(policy, vals, where):
    return [_scalar(policy, v, f"{where}[{i}]") for i, v in enumerate(vals)]


def _policy(args, data: Optional[dict] = None) -> NumericPolicy:
    data = data or {}
    mode = args.numeric or data.get("numeric") or RATIONAL
    tol = args.tolerance if args.tolerance is not None else data.get("tolerance")
    if mode not in (RATIONAL, FLOAT):
        raise InputError(f"field 'numeric' must be 'rational' or 'float', got {mode!r}")
    try:
        if mode == FLOAT:
            return NumericPolicy(FLOAT, float(tol) if tol is not None else 1e-9)
        return NumericPolicy(RATIONAL, float(tol or 0.0))
    except (InvalidArgument, ValueError) as exc:
        raise InputError(str(exc)) from None


def load_spectrum(path: str, args, n_particles: Optional[int] = None):
    """Read a spectrum file; returns ``(spectrum, N)``. ``n_particles`` overrides the file's N."""
    data = _read_json(path)
    policy = _policy(args, data)
    raw = _field(data, "eigenvalues", path, list)
    spec = OneBodySpectrum.from_values(_scalars(policy, raw, f"{path}: eigenvalues"), policy) if raw else None
    if spec is None:
        raise InputError(f"{path}: field 'eigenvalues' is empty")
    n = _field(data, "n", path, int, required=False)
    if n is not None and n != spec.n:
        raise InputError(f"{path}: field 'n' = {n} but {spec.n} eigenvalues given")
    N = n_particles if n_particles is not None else _field(data, "N", path, int, required=False)
    if N is None:
        raise InputError(f"{path}: no particle number (field 'N' or --n-particles)")
    if not 1 <= N <= spec.n:
        raise InputError(f"particle number N = {N} must lie in 1..{spec.n}")
    return spec, N


def load_state(path: str, args, normalize: bool = False) -> ManyBodyState:
    data = _read_json(path)
    policy = _policy(args, data)
    n = _field(data, "n", path, int)
    N = _field(data, "N", path, int)
    terms = []
    for k, term in enumerate(_field(data, "terms", path, list)):
        where = f"{path}: terms[{k}]"
        if not isinstance(term, dict) or "occupied" not in term:
            raise InputError(f"{where}: expected an object with 'occupied'")
        occ = term["occupied"]
        if not isinstance(occ, list) or not all(isinstance(o, int) and not isinstance(o, bool) for o in occ):
            raise InputError(f"{where}.occupied: must be a list of orbital labels")
        re = _scalar(policy, term.get("re", 0), f"{where}.re")
        im = _scalar(policy, term.get("im", 0), f"{where}.im")
        terms.append((occ, re, im))
    if not terms:
        raise InputError(f"{path}: field 'terms' is empty")
    try:
        return ManyBodyState.from_terms(n, N, terms, policy, normalize=normalize)
    except InvalidArgument as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(args, report: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(text)


def _j(xs):
    return [to_json_scalar(x) for x in xs]


def _fmt(xs):
    return "(" + ", ".join(format_scalar(x) for x in xs) + ")"


def _level_rows(levels, n, limit):
    rows = []
    for lv in levels[:limit]:
        reps = [list(OccupationState(int(b), n, lv.N).occupied) for b in lv.states[:4]]
        rows.append({"eigenvalue": to_json_scalar(lv.eigenvalue), "degeneracy": lv.degeneracy, "states": reps})
    return rows


def cmd_analyze(args) -> int:
    spec, N = load_spectrum(args.spectrum, args, args.n_particles)
    pol = spec.policy
    verdict = is_dual_cone_member(spec, N)
    report = {
        "n": spec.n,
        "N": N,
        "numeric": pol.mode,
        "eigenvalues": _j(spec.by_label()),
        "membership": {
            "member": bool(verdict),
            "min_pairing": to_json_scalar(verdict.min_pairing),
            "lowest_orbitals": list(spec.labels[:N]),
            "certificate": None if verdict else list(verdict.certificate),
        },
    }
    lines = [
        f"spectrum {_fmt(spec.by_label())}  n={spec.n}  N={N}  ({pol.mode})",
        f"sum of the {N} lowest values: {format_scalar(verdict.min_pairing)}"
        f" over orbitals {list(spec.labels[:N])}",
    ]
    if not verdict:
        lines.append("verdict: NOT a dual-cone member; certificate orbitals " + str(list(verdict.certificate)))
        _emit(args, report, "\n".join(lines))
        return EXIT_NONMEMBER
    lines.append("verdict: member")
    d = canonical_decompose(spec, N)
    recon_ok = reconstruct(d).equals(spec)
    dec = d.to_dict()
    dec["reconstruction_ok"] = recon_ok
    report["decomposition"] = dec
    ext = is_extreme(spec, N)
    report["extreme"] = None if ext is None else {
        "kind": ext[0].kind.value, "label": ext[0].label, "scale": to_json_scalar(ext[1])
    }
    lines += [
        f"split r={d.r}  s={d.s}  t={format_scalar(d.t)}",
        f"holes {list(d.holes)}  particles {list(d.particles)}",
        f"weights by orbital {_fmt(d.gamma_by_label())}",
        f"reconstruction_ok={str(recon_ok).lower()}",
    ]
    if ext is not None:
        lines.append(f"extreme ray: {ext[0].kind.value}({ext[0].label}) scaled by {format_scalar(ext[1])}")
    checks = {
        "reconstruction": {"pass": recon_ok, "identity": "sum of weighted extreme elements = input spectrum"},
        "kernel_bound": {
            "pass": kernel_dim_bound_check(spec, d),
            "identity": "zero eigenvalues number at most r - s and sit in sorted positions s+1..r",
        },
    }
    try:
        ps = pseudo_spectral(d, budget=args.budget)
        report["pseudo_spectral"] = [a.to_dict() for a in ps.atoms]
        fs = full_spectrum(spec, N, args.budget)
        target = build_one_body_diagonal(spec, N, args.budget)
        same = [
            realize(spectral(spec, N, args.budget)) == target,
            realize(semi_spectral(spec, N, budget=args.budget)) == target,
            realize(ps) == target,
        ]
        checks["three_way"] = {
            "pass": all(same),
            "identity": "spectral = semi-spectral = pseudo-spectral realization",
            "per_decomposition": dict(zip(("spectral", "semi_spectral", "pseudo_spectral"), same)),
        }
        report["levels"] = {"count": len(fs.levels), "lowest": _level_rows(fs.levels, spec.n, args.max_levels)}
        lines.append(f"many-body levels: {len(fs.levels)} distinct over {sum(l.degeneracy for l in fs.levels)} states")
        for row in report["levels"]["lowest"]:
            lines.append(f"  {row['eigenvalue']!s:>10}  x{row['degeneracy']}  e.g. {row['states'][0]}")
    except BudgetExceeded as exc:
        report["levels"] = None
        checks["three_way"] = {"pass": None, "identity": "skipped", "reason": str(exc)}
        lines.append(f"many-body checks skipped: {exc}")
    report["cross_checks"] = checks
    for name, c in checks.items():
        state = "skipped" if c["pass"] is None else ("pass" if c["pass"] else "FAIL")
        lines.append(f"check {name}: {state}" + ("" if c["pass"] is not False else f" ({c['identity']})"))
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if all(c["pass"] is not False for c in checks.values()) else EXIT_CHECK


def cmd_spectrum(args) -> int:
    spec, N = load_spectrum(args.spectrum, args, args.n_particles)
    fs = full_spectrum(spec, N, args.budget)
    rows = _level_rows(fs.levels, spec.n, args.max_levels)
    report = {
        "n": spec.n, "N": N, "numeric": spec.policy.mode,
        "level_count": len(fs.levels), "levels": rows,
    }
    lines = [f"{'eigenvalue':>12}  {'deg':>5}  example states"]
    for row in rows:
        lines.append(f"{row['eigenvalue']!s:>12}  {row['degeneracy']:>5}  {row['states']}")
    if len(fs.levels) > len(rows):
        lines.append(f"... {len(fs.levels) - len(rows)} more levels")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def _model_params(kind: str, data: dict, path: str, policy: NumericPolicy):
    f = lambda key, kind_=None, required=True: _field(data, key, path, kind_, required)  # noqa: E731
    if kind == "type1":
        return TypeIParams(
            f("N", int), _scalar(policy, f("beta"), f"{path}: beta"),
            tuple(_scalars(policy, f("alphas", list), f"{path}: alphas")),
            f("n", int), f("m", int, False), policy,
        )
    if kind == "type2":
        return TypeIIParams(
            f("N", int), _scalar(policy, f("beta"), f"{path}: beta"), _scalar(policy, f("alpha"), f"{path}: alpha"),
            tuple(_scalars(policy, f("alphas", list), f"{path}: alphas")),
            f("n", int), f("m", int, False), policy,
        )
    return Model74Params(
        f("n", int), f("N", int), f("r", int), f("m", int),
        tuple(_scalars(policy, f("betas", list), f"{path}: betas")),
        tuple(_scalars(policy, data.get("alphas_mid", []), f"{path}: alphas_mid")),
        tuple(_scalars(policy, f("alphas_normal", list), f"{path}: alphas_normal")),
        policy,
    )


def cmd_model(args) -> int:
    data = _read_json(args.params)
    policy = _policy(args, data)
    p = _model_params(args.kind, data, args.params, policy)
    try:
        if args.kind == "type1":
            spec, diagram = type_i_model(p, args.seed, args.budget)
        elif args.kind == "type2":
            spec, diagram = type_ii_model(p, args.seed, args.budget)
        else:
            spec, d = build_thm74(p)
            diagram = analyze_levels(spec, p.N, d, args.seed, args.budget)
            ground = diagram.level_at(0)
            diagram.checks["ground_degeneracy"] = {
                "pass": ground is not None and ground.degeneracy == kernel_dimension_74(p),
                "observed": ground.degeneracy if ground else 0,
                "expected": kernel_dimension_74(p),
            }
    except GapConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.format == "json":
            print(json.dumps({"error": "gap_condition", "inequality": exc.inequality}, ensure_ascii=False))
        return EXIT_GAP
    report = {"kind": args.kind, **diagram.to_dict()}
    _emit(args, report, diagram.render(max_levels=args.max_levels))
    return EXIT_OK


def cmd_state(args) -> int:
    psi = load_state(args.state, args, normalize=args.normalize)
    norm2 = psi.norm_squared()
    if not psi.policy.eq(norm2, 1):
        print(f"error: state is not normalized: sum |c|^2 = {format_scalar(norm2)}"
              " (pass --normalize to rescale)", file=sys.stderr)
        return EXIT_INPUT
    mu, mu_t = occupation_measures(psi)
    fspace = grassmann_factor_space(psi, args.budget)
    report = {
        "n": psi.n, "N": psi.N,
        "occupations": _j(mu), "vacancies": _j(mu_t),
        "factor_dimension": fspace.dimension, "factors": list(fspace.factors),
        "completely_correlated": fspace.completely_correlated,
        "orbital_classes": {str(i): classify_state(psi, i).value for i in range(1, psi.n + 1)},
    }
    lines = [
        f"n={psi.n}  N={psi.N}  determinants={len(psi.amplitudes)}",
        f"occupations   {_fmt(mu)}",
        f"vacancies     {_fmt(mu_t)}",
        f"factor space  dimension {fspace.dimension}, basis factors {list(fspace.factors)}",
        "orbital class " + " ".join(f"{i}:{c}" for i, c in report["orbital_classes"].items()),
    ]
    code = EXIT_OK
    if args.spectrum:
        spec, N = load_spectrum(args.spectrum, args, psi.N)
        if spec.n != psi.n:
            raise InputError(f"spectrum has {spec.n} orbitals, state has {psi.n}")
        value = expectation(build_one_body_diagonal(spec, N, args.budget), psi)
        report["expectation"] = to_json_scalar(value)
        lines.append(f"expectation   {format_scalar(value)}")
        if is_dual_cone_member(spec, N):
            pseudo = pseudo_expectation(canonical_decompose(spec, N), psi)
            ok = spec.policy.eq(pseudo, value)
            report["identity_check"] = {"pass": ok, "weighted_measures": to_json_scalar(pseudo)}
            lines.append(f"weighted measures {format_scalar(pseudo)}: {'pass' if ok else 'FAIL'}")
            code = EXIT_OK if ok else EXIT_CHECK
        else:
            report["identity_check"] = {"pass": None, "reason": "spectrum is not a dual-cone member"}
            lines.append("weighted measures: skipped (spectrum is not a dual-cone member)")
    _emit(args, report, "\n".join(lines))
    return code


def cmd_check(args) -> int:
    results = run_suites(args.suite, seed=args.seed, trials=args.trials, max_n=args.max_n)
    report = {"seed": args.seed, "trials": args.trials, "max_n": args.max_n,
              "suites": [r.to_dict() for r in results]}
    lines = []
    for r in results:
        lines.append(f"{r.name:<15} {'pass' if r.ok else 'FAIL'}  ({r.trials} trials)")
        lines += [f"    {msg}" for msg in r.failures]
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the same flags appear before or after the subcommand
    common.add_argument("--numeric", choices=[RATIONAL, FLOAT], default=argparse.SUPPRESS)
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=_positive_int, default=argparse.SUPPRESS,
                        help=f"maximum number of occupation states (default {DEFAULT_BUDGET})")

    parser = argparse.ArgumentParser(prog="fermicone", parents=[common],
                                     description="Dual-cone analysis of 1-particle spectra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="membership, canonical decomposition, cross-checks")
    p.add_argument("spectrum")
    p.add_argument("--n-particles", "-N", type=_positive_int)
    p.add_argument("--max-levels", type=int, default=10)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spectrum", parents=[common], help="many-body levels of a 1-particle spectrum")
    p.add_argument("spectrum")
    p.add_argument("--n-particles", "-N", type=_positive_int)
    p.add_argument("--max-levels", type=int, default=20)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("model", parents=[common], help="collective-excitation model level diagram")
    p.add_argument("kind", choices=["type1", "type2", "thm74"])
    p.add_argument("params")
    p.add_argument("--max-levels", type=int, default=12)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("state", parents=[common], help="occupation measures and factor space of a state")
    p.add_argument("state")
    p.add_argument("spectrum", nargs="?")
    p.add_argument("--normalize", action="store_true", help="rescale the state to unit norm")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("check", parents=[common], help="run the randomized cross-validation suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES))
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--max-n", type=_positive_int, default=10)
    p.set_defaults(func=cmd_check)
    return parser


_DEFAULTS = {"numeric": None, "tolerance": None, "format": "text", "seed": 0, "budget": DEFAULT_BUDGET}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    for key, val in _DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FermiconeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
