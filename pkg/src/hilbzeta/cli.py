"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 an identity check failed,
4 oracle counts are not polynomial (or contradict the declared germ).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import jacstrata, oracle, perv, zeta
from .ringkit import NotPolynomialCountError, QPoly, Ring

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_ORACLE = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


@dataclass
class RunConfig:
    truncation: int = 8
    primes: tuple = oracle.DEFAULT_PRIMES
    fmt: str = "table"
    registry: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.truncation < 0:
            raise UsageError("truncation must be non-negative")
        if len(set(self.primes)) != len(self.primes):
            raise UsageError("primes must be distinct")
        bad = [p for p in self.primes if not _is_prime(p)]
        if bad:
            raise UsageError(f"not prime: {bad}")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")


@dataclass
class Output:
    payload: dict
    lines: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    code: int = EXIT_OK


# --- germ registry -----------------------------------------------------------


def load_registry(path) -> dict:
    """``{label: record}`` from a JSON list of germ records."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"registry {path} not found") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"registry {path} is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise UsageError("registry must be a JSON list of germ records")
    out = {}
    for rec in data:
        missing = {"label", "branches", "cogenus"} - set(rec)
        if missing:
            raise UsageError(f"registry record lacks {sorted(missing)}")
        out[rec["label"]] = rec
    return out


def save_registry(path, record: dict) -> None:
    p = Path(path)
    records = load_registry(p) if p.exists() else {}
    records[record["label"]] = record
    text = json.dumps([records[k] for k in sorted(records)], sort_keys=True, indent=2)
    p.write_text(text + "\n", encoding="utf-8")


def _registry_factor(rec) -> QPoly | None:
    if rec.get("factor") is None:
        return None
    return QPoly.from_json_terms(Ring.LEFSCHETZ, rec["factor"])


# --- commands ----------------------------------------------------------------


def _parse_germ_flag(text: str):
    label, _, count = text.partition(":")
    if count:
        if not count.isdigit() or int(count) < 1:
            raise UsageError(f"bad germ count in {text!r}")
        return label, int(count)
    return label, 1


def _oracle_factor(spec, cfg: RunConfig):
    try:
        return zeta.local_factor(spec, cfg.primes, jobs=cfg.jobs)
    except (NotPolynomialCountError, oracle.OracleMismatchError):
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_zeta(args, cfg: RunConfig) -> Output:
    registry = load_registry(cfg.registry) if cfg.registry else {}
    factors, germs, labels = [], [], []
    for flag in args.germ or []:
        label, count = _parse_germ_flag(flag)
        if label in zeta.BUILTIN_GERMS:
            spec = zeta.BUILTIN_GERMS[label]
            factor = spec.local_factor
        elif label in registry:
            rec = registry[label]
            spec = zeta.GermSpec(label, rec["branches"], rec["cogenus"], rec.get("equation"))
            factor = _registry_factor(rec)
            if factor is None:
                factor = _oracle_factor(spec, cfg)
        else:
            raise UsageError(
                f"unknown germ {label!r} (built-ins: {', '.join(sorted(zeta.BUILTIN_GERMS))}); "
                "use --eq with --branches/--cogenus or a --registry file"
            )
        for _ in range(count):
            factors.append(factor)
            germs.append(spec)
        labels.append(f"{label}x{count}" if count > 1 else label)
    if args.eq:
        if args.branches is None or args.cogenus is None:
            raise UsageError("--eq needs --branches and --cogenus")
        oracle.parse_poly(args.eq)
        spec = zeta.GermSpec(args.eq, args.branches, args.cogenus, args.eq)
        factors.append(_oracle_factor(spec, cfg))
        germs.append(spec)
        labels.append(args.eq)
    curve = zeta.CurveSpec(args.genus, germs)
    num = QPoly.one(Ring.LEFSCHETZ)
    for f in factors:
        num = num * f
    verdict = zeta.check_functional_equation(num, curve.cogenus)
    lz = zeta.RationalZeta(num)
    payload = {
        "curve": {
            "normalization_genus": curve.normalization_genus,
            "germs": labels,
            "cogenus": curve.cogenus,
            "arithmetic_genus": curve.arithmetic_genus,
        },
        "zeta": lz.to_json(),
        "functional_equation": verdict.to_json(),
    }
    if curve.normalization_genus == 0:
        payload["series"] = str(lz.expand(cfg.truncation))
    # genus-r normalizations only have a weight-ring series
    wz = zeta.RationalZeta(
        QPoly(Ring.WEIGHT, [1, zeta.WPoly([0, 1])]) ** (2 * curve.normalization_genus)
        * zeta.specialize(num, zeta.WEIGHT)
    )
    payload["weight_zeta"] = wz.to_json()
    payload["weight_series"] = str(wz.expand(cfg.truncation))
    if curve.normalization_genus:
        # the Lefschetz denominator only describes a rational normalization
        del payload["zeta"]["denominator"]
        denom = "none in L for a non-rational normalization; see the weight ring"
    else:
        denom = lz.denominator_str()
    lines = [
        f"curve: normalization genus {curve.normalization_genus}, germs [{', '.join(labels)}], "
        f"cogenus {curve.cogenus}, arithmetic genus {curve.arithmetic_genus}",
        f"numerator: {num}",
        f"denominator: {denom}",
        f"degree: {num.degree}",
    ]
    if "series" in payload:
        lines.append(f"series: {payload['series']}")
    lines += [
        f"weight numerator: {wz.numerator}",
        f"weight denominator: {wz.denominator_str()}",
        f"functional equation: {verdict.status}" + (f" ({verdict.message})" if verdict.message else ""),
    ]
    return Output(payload, lines, [], EXIT_OK if verdict else EXIT_FAIL)


def cmd_strata(args, cfg: RunConfig) -> Output:
    if args.genus < 0 or args.genus > args.max_genus:
        raise UsageError(f"genus must be in 0..{args.max_genus}")
    rows, verdicts = [], []
    for h in jacstrata.enumerate_admissible(args.genus):
        minus, plus = jacstrata.phi_sets(h)
        v = jacstrata.check_zh_duality(h)
        verdicts.append(v)
        rows.append(
            {
                "h": str(h),
                "phi_minus": " ".join(map(str, sorted(minus))),
                "phi_plus": " ".join(map(str, sorted(plus))),
                "z_h": str(jacstrata.z_h(h)),
                "dual": str(jacstrata.dual(h)),
                "duality": v.status,
            }
        )
    ok = all(verdicts)
    payload = {"genus": args.genus, "rows": rows, "all_pass": ok}
    lines = [f"genus {args.genus}: {len(rows)} admissible Hilbert functions, duality {'PASS' if ok else 'FAIL'}"]
    if args.solve:
        num = QPoly.one(Ring.LEFSCHETZ)
        for flag in args.solve:
            label, count = _parse_germ_flag(flag)
            num = num * zeta.local_factor(zeta.builtin_germ(label)) ** count
        try:
            sol = jacstrata.solve_strata(num, args.genus)
        except jacstrata.NoDecompositionError as exc:
            payload["solve"] = {"numerator": str(num), "error": str(exc)}
            lines.append(f"solve {num}: no decomposition ({exc})")
            return Output(payload, lines, rows, EXIT_FAIL)
        part = sol.particular
        classes = {str(h): [str(c) for c in cs] for h, cs in sol._classes(part).items() if any(cs)}
        payload["solve"] = {
            "numerator": str(num),
            "unique": sol.unique,
            "particular": classes,
            "kernel_dim": len(sol.kernel),
        }
        lines.append(f"solve {num}: unique={sol.unique}, kernel dim {len(sol.kernel)}")
        try:
            decomp = sol.particular_decomp()
            lines += [f"  [{h}] = {c}" for h, c in decomp.entries]
            lines.append(f"  total class = {decomp.total_class()}")
            payload["solve"]["total_class"] = str(decomp.total_class())
        except jacstrata.NoDecompositionError as exc:
            lines.append(f"  {exc}")
    return Output(payload, lines, rows, EXIT_OK if ok else EXIT_FAIL)


def _oracle_reports(args, cfg: RunConfig):
    try:
        germ = oracle.GermEq.parse(args.eq, args.cogenus, args.branches, args.label or "")
    except oracle.GermParseError as exc:
        raise UsageError(f"cannot parse equation: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        reports = oracle.fit(germ, args.n, cfg.primes, degree_cap=args.degree_cap, jobs=cfg.jobs)
    except oracle.DegenerateReductionError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return germ, reports


def cmd_oracle(args, cfg: RunConfig) -> Output:
    germ, reports = _oracle_reports(args, cfg)
    failed = [r for r in reports if r.fitted is None]
    payload = {
        "equation": germ.equation,
        "label": germ.label,
        "primes": list(cfg.primes),
        "reports": [r.to_json() for r in reports],
    }
    code = EXIT_ORACLE if failed else EXIT_OK
    rows = [
        {
            "n": r.n,
            "counts": " ".join(str(c) for _, c in r.samples),
            "fitted": str(r.fitted) if r.fitted is not None else "not polynomial-count",
            "surplus": "checked" if r.surplus_checked else "none",
        }
        for r in reports
    ]
    lines = [f"germ {germ.equation} over primes {', '.join(map(str, cfg.primes))}"]
    if not failed and germ.branches is not None:
        series = oracle.normalized_series(reports, germ.branches)
        payload["normalized_series"] = str(series)
        lines.append(f"(1 - q)^{germ.branches} * punctual series: {series}")
        if germ.cogenus is not None and args.n >= germ.cogenus:
            try:
                factor, _ = oracle.oracle_local_factor(
                    germ, cfg.primes, n_max=args.n, degree_cap=args.degree_cap, jobs=cfg.jobs
                )
            except (oracle.OracleMismatchError, NotPolynomialCountError) as exc:
                payload["local_factor_error"] = str(exc)
                lines.append(f"local factor: FAIL ({exc})")
                code = EXIT_ORACLE
            else:
                fe = zeta.check_functional_equation(factor, germ.cogenus)
                payload["local_factor"] = {"factor": str(factor), "terms": factor.terms()}
                payload["functional_equation"] = fe.to_json()
                lines.append(f"local factor: {factor}")
                lines.append(f"functional equation: {fe.status}")
                if args.save:
                    save_registry(
                        args.save,
                        {
                            "label": germ.label,
                            "equation": germ.equation,
                            "branches": germ.branches,
                            "cogenus": germ.cogenus,
                            "factor": factor.terms(),
                            "primes": list(cfg.primes),
                        },
                    )
                    lines.append(f"saved {germ.label!r} to {args.save}")
                if not fe:
                    code = EXIT_FAIL
    for r in failed:
        hint = f"; suspect primes {r.suspect_primes}" if r.suspect_primes else ""
        print(f"colength {r.n}: {r.diagnostic}{hint}", file=sys.stderr)
    return Output(payload, lines, rows, code)


def cmd_macdonald(args, cfg: RunConfig) -> Output:
    if args.g < 0 or args.d < 0:
        raise UsageError("--g and --d must be non-negative")
    mac = perv.macdonald_ranks(args.g, args.d)
    via_jac = perv.hilb_from_jac(args.g, args.d)
    series = perv.series_identity_check(args.g, cfg.truncation)
    agree = mac == via_jac
    ok = agree and mac.is_palindromic() and bool(series)
    payload = {
        "g": args.g,
        "d": args.d,
        "ranks": list(mac.ranks),
        "jacobian_ranks": list(perv.jacobian_ranks(args.g).ranks),
        "hilb_from_jac_agrees": agree,
        "palindromic": mac.is_palindromic(),
        "series_identity": series.to_json(),
    }
    lines = [
        str(mac),
        f"via Jacobian: {via_jac} ({'PASS' if agree else 'FAIL'})",
        f"palindromic: {'PASS' if mac.is_palindromic() else 'FAIL'}",
        str(series),
    ]
    rows = [{"i": i, "rank": r} for i, r in enumerate(mac.ranks)]
    return Output(payload, lines, rows, EXIT_OK if ok else EXIT_FAIL)


def cmd_perverse(args, cfg: RunConfig) -> Output:
    if args.g < 0 or args.d < 0:
        raise UsageError("--g and --d must be non-negative")
    if args.jac:
        try:
            jac = [int(x) for x in args.jac.split(",")]
        except ValueError:
            raise UsageError("--jac takes comma-separated integers") from None
    else:
        jac = list(perv.jacobian_ranks(args.g).ranks)
    try:
        out = perv.perverse_relation(jac, args.g, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"g": args.g, "d": args.d, "jacobian_perverse": jac, "hilbert_perverse": list(out)}
    lines = [" ".join(map(str, out))]
    code = EXIT_OK
    if args.d > 2 * args.g - 2 and args.d >= args.g:
        bundle = perv.projective_bundle_ranks(jac, args.g, args.d)
        ok = bundle == out
        payload["projective_bundle_check"] = "PASS" if ok else "FAIL"
        lines.append(f"P^{args.d - args.g}-bundle check: {'PASS' if ok else 'FAIL'}")
        code = EXIT_OK if ok else EXIT_FAIL
    rows = [{"j": j - args.d, "rank": v} for j, v in enumerate(out)]
    return Output(payload, lines, rows, code)


def cmd_weights(args, cfg: RunConfig) -> Output:
    if args.delta < 0 or args.r < 0:
        raise UsageError("--delta and --r must be non-negative")
    upto = cfg.truncation if args.upto is None else args.upto
    if upto < 0:
        raise UsageError("--upto must be non-negative")
    series = zeta.nodal_weight_series(args.delta, args.r, upto)
    rows = [{"d": d, "weight": str(c)} for d, c in enumerate(series.coeffs)]
    payload = {"delta": args.delta, "r": args.r, "upto": upto, "coefficients": [r["weight"] for r in rows]}
    lines = [f"q^{d}: {c}" for d, c in enumerate(series.coeffs)]
    ok = True
    if args.crosscheck:
        v = zeta.weight_crosscheck(args.delta, args.r, upto)
        payload["crosscheck"] = v.to_json()
        lines.append(str(v))
        ok = ok and bool(v)
    if args.monodromy:
        mono = []
        for d in range(upto + 1):
            w = perv.nodal_weight_polynomial(args.delta, args.r, d)
            match = w == series.coeffs[d]
            mono.append({"d": d, "weight": str(w), "status": "PASS" if match else "FAIL"})
            ok = ok and match
        payload["monodromy"] = mono
        lines.append(
            "monodromy weight filtration: " + ("PASS" if all(m["status"] == "PASS" for m in mono) else "FAIL")
        )
    return Output(payload, lines, rows, EXIT_OK if ok else EXIT_FAIL)


# --- rendering ---------------------------------------------------------------


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if out.rows:
            w = csv.DictWriter(buf, fieldnames=list(out.rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(out.rows)
        return buf.getvalue()
    text = "\n".join(out.lines)
    if out.rows:
        cols = list(out.rows[0])
        widths = {c: max(len(c), *(len(str(r[c])) for r in out.rows)) for c in cols}
        table = ["  ".join(c.ljust(widths[c]) for c in cols).rstrip()]
        table += ["  ".join(str(r[c]).ljust(widths[c]) for c in cols).rstrip() for r in out.rows]
        text = (text + "\n" if text else "") + "\n".join(table)
    return text + "\n"


def _primes(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--truncation", type=int, default=8, help="q-adic truncation order (default 8)")
    common.add_argument("--primes", type=_primes, default=oracle.DEFAULT_PRIMES, help="comma-separated primes")
    common.add_argument("--format", choices=("table", "json", "csv"), help="default: json for oracle, else table")
    common.add_argument("--registry", help="JSON file of user germs")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for point counting")

    parser = argparse.ArgumentParser(prog="hilbzeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", parents=[common], help="zeta numerator and functional equation")
    p.add_argument("--genus", type=int, default=0, help="genus r of the normalization")
    p.add_argument("--germ", action="append", help="LABEL[:COUNT]; built-in or registry germ")
    p.add_argument("--eq", help="equation of an oracle-backed germ")
    p.add_argument("--branches", type=int)
    p.add_argument("--cogenus", type=int)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("strata", parents=[common], help="Hilbert-function strata and Z_h duality")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--max-genus", type=int, default=6)
    p.add_argument("--solve", action="append", help="decompose the numerator of these germs (LABEL[:COUNT])")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("oracle", parents=[common], help="count punctual ideals over F_p and fit")
    p.add_argument("--eq", required=True)
    p.add_argument("--n", type=int, required=True, help="largest colength")
    p.add_argument("--branches", type=int)
    p.add_argument("--cogenus", type=int)
    p.add_argument("--label")
    p.add_argument("--degree-cap", type=int)
    p.add_argument("--save", help="write the fitted local factor into this registry file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("macdonald", parents=[common], help="rank tables of symmetric products")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_macdonald)

    p = sub.add_parser("perverse", parents=[common], help="perverse ranks from the Jacobian")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--jac", help="Jacobian perverse ranks at degrees -g..g (default: binomials)")
    p.set_defaults(func=cmd_perverse)

    p = sub.add_parser("weights", parents=[common], help="weight series of nodal families")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--upto", type=int)
    p.add_argument("--crosscheck", action="store_true")
    p.add_argument("--monodromy", action="store_true", help="recompute from the monodromy weight filtration")
    p.set_defaults(func=cmd_weights)
    return parser


def run(argv=None) -> tuple[int, str]:
    """Parse and execute; returns ``(exit_code, stdout_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        fmt = args.format or ("json" if args.command == "oracle" else "table")
        cfg = RunConfig(args.truncation, tuple(args.primes), fmt, args.registry, args.jobs)
        out = args.func(args, cfg)
    except (UsageError, zeta.NeedsOracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""
    except (NotPolynomialCountError, oracle.OracleMismatchError) as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return EXIT_ORACLE, ""
    return out.code, render(out, cfg.fmt)


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
