"""Command-line front end.

    autoshift analyze SUB [--coding FILE] [--no-decompose]
    autoshift minimize SUB CODING [--replay FILE]
    autoshift verify-rule SUB RULE [--p P --k K] [--coding FILE] [--target SUB]
    autoshift decompose SUB
    autoshift compress SUB K
    autoshift twist SUB PERM

Exit codes: 0 success, 1 mathematical rejection, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .automatic import (AutomaticPair, FiniteImage, bijective_presentation, fiber_sizes, mef_descriptor,
                        periodic_pair_report, replay, verify_factor_map, verify_factor_automorphism)
from .automorphisms import (RuleNotTotal, check_rule_kappa, essential_centralizer_roots, kappa_of,
                            radius_zero_automorphisms, rule_order, search_automorphisms)
from .compression import compress, kappa_denominator, roots_decomposition, root_relation, twist
from .groups import cycle_string
from .kappa import KappaValue
from .pairs import minimal_sets
from .rules import materialize, parse_rule, rule_to_text
from .substitution import (ParseError, SubstitutionError, height, is_injective, is_primitive,
                           is_strongly_injective, parse_coding, parse_substitution, show)

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMAS = Path(__file__).parent / "schemas"
DEFAULT_P_MAX = 3


class Rejected(Exception):
    """A well-formed input that fails a mathematical check (exit code 1)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def schema_path(command: str) -> Path:
    """The JSON schema published for a command's --json report."""
    return SCHEMAS / f"{command}.schema.json"


def _read(path: str) -> str:
    p = Path(path)
    if not p.exists() and (FIXTURES / path).exists():
        p = FIXTURES / path
    try:
        return p.read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def load_substitution(path: str):
    return parse_substitution(_read(path))


def load_coding(path: str, alphabet=None):
    return parse_coding(_read(path), alphabet)


def load_rule(path: str):
    return parse_rule(_read(path))


def _sub_dict(theta) -> dict:
    return {a: show(w) for a, w in theta.images.items()}


def _perm(theta, tau: dict) -> str:
    A = list(theta.alphabet)
    return cycle_string(tuple(A.index(tau[a]) for a in A), A)


def _kappa(kv: KappaValue) -> dict:
    return kv.as_dict()


# -- analyze -----------------------------------------------------------------------

def cmd_analyze(sub_path: str, coding_path: str | None = None, p_max: int = DEFAULT_P_MAX,
                window: int | None = None, decompose: bool = True) -> dict:
    """The invariant battery; sections that do not apply say why."""
    theta = load_substitution(sub_path)
    prim, exp = is_primitive(theta)
    report = {
        "input": {"file": sub_path, "substitution": _sub_dict(theta)},
        "bounds": {"p_max": p_max, "window": window},
        "invariants": {"r": theta.r, "letters": theta.n, "primitive": prim, "primitivity_exponent": exp},
    }
    if not prim:
        report["note"] = "not primitive: partial analysis only"
        return report
    inv = report["invariants"]
    si, violation = is_strongly_injective(theta)
    ms = minimal_sets(theta)
    inv.update({
        "injective": is_injective(theta),
        "strongly_injective": si,
        "strong_injectivity_violation": None if violation is None else [str(x) for x in violation],
        "height": height(theta),
        "column_number": ms.c,
        "minimal_sets": ["".join(s) if all(len(a) == 1 for a in s) else list(s) for s in ms.as_letters()],
        "periodic_pairs": periodic_pair_report(theta),
    })
    report["automorphisms"] = _automorphism_section(theta, p_max)
    if coding_path is not None:
        report["factor"] = _factor_section(theta, load_coding(coding_path, theta.alphabet), window)
    if decompose:
        report["decomposition"] = _decomposition_section(theta, p_max, window)
    return report


def _automorphism_section(theta, p_max: int) -> dict:
    try:
        ess = essential_centralizer_roots(theta)
        topo = radius_zero_automorphisms(theta)
        found = search_automorphisms(theta, p_max)
    except SubstitutionError as e:
        return {"skipped": str(e)}
    G, C = ess["G"], ess["centralizer"]
    classes = sorted({kv.residue() for _, kv in found})
    k = kappa_denominator(found)
    return {
        "G": G.element_strings(),
        "centralizer": C.element_strings(),
        "measurable_only": [cycle_string(p) for p in ess["measurable_only"]],
        "reduced": ess["reduced"],
        "radius_zero": [_perm(theta, t) for t in topo],
        "found_modulo_shift": len(found),
        "kernel_size": sum(1 for _, kv in found if kv.is_integer()),
        "kappa_classes": [str(x) for x in classes],
        "roots_of_shift_k": k,
        "rules": [{"kappa": _kappa(kv), "rule": rule_to_text(rule, theta)} for rule, kv in found],
        "bound": f"kappa period <= {p_max}",
    }


def _factor_section(theta, coding, window) -> dict:
    pair = AutomaticPair(theta, coding)
    try:
        pres = bijective_presentation(pair, window)
        mef = mef_descriptor(pair)
    except FiniteImage as e:
        return {"rejected": str(e)}
    return {"presentation": pres.as_dict(), "mef": {"r": mef[0], "h": mef[1]}}


def _decomposition_section(theta, p_max, window) -> list | dict:
    try:
        ds = roots_decomposition(theta, p_max, window)
    except SubstitutionError as e:
        return {"skipped": str(e)}
    return [d.as_dict() for d in ds]


# -- minimize ----------------------------------------------------------------------

def cmd_minimize(sub_path: str, coding_path: str, window: int | None = None,
                 replay_path: str | None = None) -> dict:
    theta = load_substitution(sub_path)
    coding = load_coding(coding_path, theta.alphabet)
    pair = AutomaticPair(theta, coding)
    if replay_path is not None:
        try:
            record = json.loads(_read(replay_path))
        except json.JSONDecodeError as e:
            raise ParseError(f"replay file is not JSON: {e.msg}", e.lineno, e.colno) from None
        pres = replay(pair, record.get("presentation", record))
        return {"replayed": True, "presentation": pres.as_dict(), "bounds": {"window": window}}
    try:
        pres = bijective_presentation(pair, window)
    except FiniteImage as e:
        raise Rejected(f"finite image: {e}") from None
    return {"presentation": pres.as_dict(), "bounds": {"window": pres.window}}


# -- verify-rule -------------------------------------------------------------------

def cmd_verify_rule(sub_path: str, rule_path: str, p: int | None = None, k: int | None = None,
                    coding_path: str | None = None, target_path: str | None = None,
                    p_max: int = DEFAULT_P_MAX, window: int | None = None) -> dict:
    theta = load_substitution(sub_path)
    rule = load_rule(rule_path)
    if coding_path is not None:
        return _verify_factor_automorphism(theta, rule, load_coding(coding_path, theta.alphabet), window)
    if target_path is not None:
        return _verify_factor_map(theta, rule, load_substitution(target_path), window)
    rule = materialize(rule, theta)
    missing = rule.missing(theta)
    report = {"bounds": {"p_max": p_max}}
    if missing:
        report.update(verdict="rejected", reason="rule is not total on the language",
                      missing=[show(w) for w in missing])
        raise Rejected("rule is not total", report)
    if p is not None:
        try:
            chk = check_rule_kappa(theta, rule.shrink(theta), p, k)
        except RuleNotTotal as e:
            report.update(verdict="rejected", missing=[show(w) for w in e.missing])
            raise Rejected("rule is not total", report) from None
        if not chk.ok:
            report.update(verdict="rejected", condition=chk.condition,
                          witness=None if chk.witness is None else show(chk.witness))
            raise Rejected(f"condition {chk.condition} fails at {report['witness']}", report)
        kv = KappaValue.from_fraction(theta.r, Fraction(k, 1 - theta.r ** p))
    else:
        try:
            kv = kappa_of(theta, rule, p_max)
        except SubstitutionError as e:
            report.update(verdict="rejected", reason=str(e))
            raise Rejected(str(e), report) from None
    report.update(verdict="accepted", kappa=_kappa(kv))
    den = kv.residue().denominator
    if kv.is_integer():
        n = rule_order(theta, rule.shifted(-kv.m))
        report["order"] = n
        report["relation"] = f"(sigma^-{kv.m} Phi)^{n} = id" if n else "order exceeds the cap"
    else:
        N = int(kv.value * den)
        tau = root_relation(theta, rule, den, N)
        if tau is None:
            report["relation"] = f"Phi^{den} is not sigma^{N} composed with a letter map"
        elif all(a == b for a, b in tau.items()):
            report["relation"] = f"Phi^{den} = sigma^{N}"
        else:
            report["relation"] = f"Phi^{den} = sigma^{N} o tau, tau = {_perm(theta, tau)}"
    return report


def _verify_factor_automorphism(theta, rule, coding, window) -> dict:
    pair = AutomaticPair(theta, coding)
    rep = verify_factor_automorphism(pair, rule, window=window)
    out = {
        "kind": "factor automorphism",
        "verdict": "accepted" if rep["ok"] else "rejected",
        "missing": [show(w) for w in rep["missing"]],
        "radius": list(rep["radius"]),
        "lift": None if rep.get("lift") is None else rule_to_text(rep["lift"], theta),
        "shift": rep.get("shift"),
        "bounds": {"injectivity_window": rep.get("injectivity_window")},
        "injective_witness": rep.get("injective_witness"),
    }
    if not rep["ok"]:
        raise Rejected("rule is not a factor automorphism", out)
    return out


def _verify_factor_map(theta, rule, target, window) -> dict:
    L = window or 12
    rule = materialize(rule, theta)
    ok = verify_factor_map(theta, rule, target, L)
    sizes = {}
    for W in range(4, L + 1, 4):
        for s, n in fiber_sizes(theta, rule, target, W).items():
            sizes[s] = sizes.get(s, 0) + n
    out = {"kind": "factor map", "verdict": "accepted" if ok else "rejected",
           "fiber_sizes": {str(s): n for s, n in sorted(sizes.items())}, "bounds": {"window": L}}
    if not ok:
        raise Rejected("rule is not a factor map onto the target", out)
    return out


# -- decompose, compress, twist ----------------------------------------------------------

def cmd_decompose(sub_path: str, p_max: int = DEFAULT_P_MAX, window: int | None = None) -> dict:
    theta = load_substitution(sub_path)
    ds = roots_decomposition(theta, p_max, window)
    return {"bounds": {"p_max": p_max, "window": window}, "roots": [d.as_dict() for d in ds]}


def cmd_compress(sub_path: str, k: int) -> dict:
    theta = load_substitution(sub_path)
    sub, decoding = compress(theta, k)
    return {"k": k, "substitution": _sub_dict(sub),
            "decoding": {a: show(w) for a, w in decoding.items()}}


def parse_letter_perm(text: str, alphabet) -> dict:
    """Cycle notation on letters, e.g. '(ae)(bf)'; multi-character letters are space separated."""
    tau = {a: a for a in alphabet}
    text = text.strip()
    if text in ("", "id"):
        return tau
    for part in text.replace(")", ")|").split("|"):
        part = part.strip()
        if not part:
            continue
        if not (part.startswith("(") and part.endswith(")")):
            raise ParseError(f"bad cycle {part!r}")
        body = part[1:-1].strip()
        letters = body.split() if " " in body else list(body)
        for a in letters:
            if a not in tau:
                raise ParseError(f"unknown letter {a!r} in cycle {part!r}")
        for a, b in zip(letters, letters[1:] + letters[:1]):
            tau[a] = b
    if len(set(tau.values())) != len(tau):
        raise ParseError(f"{text!r} is not a permutation")
    return tau


def cmd_twist(sub_path: str, perm: str) -> dict:
    theta = load_substitution(sub_path)
    tau = parse_letter_perm(perm, theta.alphabet)
    return {"tau": _perm(theta, tau), "substitution": _sub_dict(twist(theta, tau))}


# -- output ------------------------------------------------------------------------------

def _flat(x) -> bool:
    if isinstance(x, list):
        return all(_flat(y) and not isinstance(y, list) for y in x)
    return not isinstance(x, dict) and not (isinstance(x, str) and "\n" in x)


def _inline(x) -> str:
    return "[" + ", ".join(str(y) for y in x) + "]" if isinstance(x, list) else str(x)


def _plain(obj, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, v in obj.items():
            if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{key}: [{', '.join(str(x) for x in v)}]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{key}:")
                lines.extend(_plain(v, indent + 1))
            elif isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{key}:")
                lines.extend(pad + "  " + ln for ln in v.rstrip("\n").split("\n"))
            else:
                lines.append(f"{pad}{key}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict) and len(v) <= 3 and all(_flat(x) for x in v.values()):
                lines.append(f"{pad}- " + ", ".join(f"{a}: {_inline(b)}" for a, b in v.items()))
            elif isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_plain(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, indent=2, default=str) + "\n"
    return "\n".join(_plain(report)) + "\n"


def write_atomic(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".autoshift-")
    with os.fdopen(fd, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="autoshift", description="Constant-length substitution shifts and their codings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--p-max", type=int, default=DEFAULT_P_MAX, help="largest kappa period searched")
    common.add_argument("--window", type=int, default=None, help="language window for finite checks")
    common.add_argument("-o", "--output", default=None, help="write the report to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="invariants, automorphisms, factors, roots")
    a.add_argument("substitution")
    a.add_argument("--coding", default=None)
    a.add_argument("--no-decompose", action="store_true")

    m = sub.add_parser("minimize", parents=[common], help="bijective presentation of a coded shift")
    m.add_argument("substitution")
    m.add_argument("coding")
    m.add_argument("--replay", default=None, help="re-run a saved presentation")

    v = sub.add_parser("verify-rule", parents=[common], help="check a local rule")
    v.add_argument("substitution")
    v.add_argument("rule")
    v.add_argument("--p", type=int, default=None)
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--coding", default=None, help="check as an automorphism of the coded shift")
    v.add_argument("--target", default=None, help="check as a factor map onto this substitution shift")

    d = sub.add_parser("decompose", parents=[common], help="roots of the shift and twisted compressions")
    d.add_argument("substitution")

    c = sub.add_parser("compress", parents=[common], help="k-compression")
    c.add_argument("substitution")
    c.add_argument("k", type=int)

    t = sub.add_parser("twist", parents=[common], help="twist by a letter automorphism")
    t.add_argument("substitution")
    t.add_argument("perm", help="cycle notation, e.g. '(ae)(bf)'")
    return ap


def run(args) -> dict:
    """The report for one command, with the command name as its first field."""
    return {"command": args.command, **_dispatch(args)}


def _dispatch(args) -> dict:
    if args.command == "analyze":
        return cmd_analyze(args.substitution, args.coding, args.p_max, args.window, not args.no_decompose)
    if args.command == "minimize":
        return cmd_minimize(args.substitution, args.coding, args.window, args.replay)
    if args.command == "verify-rule":
        if (args.p is None) != (args.k is None):
            raise ParseError("--p and --k go together")
        return cmd_verify_rule(args.substitution, args.rule, args.p, args.k, args.coding, args.target,
                               args.p_max, args.window)
    if args.command == "decompose":
        return cmd_decompose(args.substitution, args.p_max, args.window)
    if args.command == "compress":
        return cmd_compress(args.substitution, args.k)
    return cmd_twist(args.substitution, args.perm)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except ParseError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except Rejected as e:
        if e.report is not None:
            write_atomic(render({"command": args.command, **e.report}, args.json), args.output)
        print(f"rejected: {e}", file=sys.stderr)
        return 1
    except SubstitutionError as e:
        print(f"rejected: {e}", file=sys.stderr)
        return 1
    write_atomic(render(report, args.json), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
