"""Command-line front end.

Exit codes: 0 success or property holds, 1 property violated (with a
machine-checkable counterexample embedded in the report), 2 input or
usage error, 3 unsupported construction or numeric obstruction.

Structured output is a single JSON object with a stable schema tag;
reports are deterministic for a fixed seed.  The environment variable
LOCSYM_SEED overrides the default seed when --seed is not given.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .acceptance import CRITERIA, run_suite
from .algebra import (
    Algebra,
    characteristic_sequence,
    get_algebra,
    is_associative,
    multiplicativity_residual,
    power_filtration,
)
from .automorphisms import (
    automorphism_family,
    group_closure_report,
    is_automorphism,
    verify_family,
)
from .derivations import derivation_algebra, is_derivation
from .errors import (
    InputError,
    InternalCheckError,
    NumericsError,
    UnsupportedError,
)
from .expbridge import (
    bridge_check,
    matrix_exp,
    matrix_log,
    structured_log_pi3,
)
from .geometry import geometry_report
from .inference import infer_shape, validate_prediction
from .linalg import (
    Matrix,
    Subspace,
    is_invertible,
    load_operator,
    operator_from_payload,
    operator_to_payload,
    save_operator,
)
from .local_automorphisms import (
    find_witness,
    locaut_feasible_at,
    locaut_pattern,
    pattern_check,
    pattern_residual,
    verify_pattern,
)
from .local_derivations import (
    local_derivation_space,
    pointwise_membership,
    strict_inclusion_witness,
    structured_probe_points,
)
from .rationals import format_rational
from .templates import builtin_form, template_match, template_space_equals

SCHEMA = "locsym-report/1"


# -- shared formatting helpers ------------------------------------------------


def _format_matrix_lines(m: Matrix) -> list[str]:
    widths = [
        max(len(format_rational(m.rows[i][j])) for i in range(m.shape[0]))
        for j in range(m.shape[1])
    ]
    return [
        "  [" + ", ".join(
            format_rational(v).rjust(w) for v, w in zip(row, widths)
        ) + "]"
        for row in m.rows
    ]


def _format_complex_lines(rows) -> list[str]:
    return [
        "  [" + ", ".join(f"{complex(v):.6g}" for v in row) + "]"
        for row in rows
    ]


def _vector_payload(x) -> list[str]:
    return [format_rational(Fraction(v)) for v in x]


def _vector_from_payload(raw) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in raw)


def _require_rational(m) -> Matrix:
    if not isinstance(m, Matrix):
        raise InputError(
            "this exact check needs an operator file with rational backend"
        )
    return m


# -- counterexample construction and re-verification --------------------------


def _leibniz_counterexample(algebra: Algebra, op: Matrix) -> dict | None:
    n = algebra.dim
    basis = [tuple(1 if t == s else 0 for t in range(n)) for s in range(n)]
    images = [op.apply(e) for e in basis]
    for i in range(n):
        for j in range(n):
            lhs = op.apply(algebra.product_of_basis(i, j))
            rhs_1 = algebra.multiply(images[i], basis[j])
            rhs_2 = algebra.multiply(basis[i], images[j])
            if lhs != tuple(a + b for a, b in zip(rhs_1, rhs_2)):
                return {
                    "kind": "leibniz_pair",
                    "algebra": algebra.name,
                    "matrix": operator_to_payload(op),
                    "pair": [i + 1, j + 1],
                }
    return None


def _multiplicativity_counterexample(algebra: Algebra, phi: Matrix) -> dict | None:
    n = algebra.dim
    basis = [tuple(1 if t == s else 0 for t in range(n)) for s in range(n)]
    images = [phi.apply(e) for e in basis]
    for i in range(n):
        for j in range(n):
            lhs = phi.apply(algebra.product_of_basis(i, j))
            if lhs != algebra.multiply(images[i], images[j]):
                return {
                    "kind": "multiplicativity_pair",
                    "algebra": algebra.name,
                    "matrix": operator_to_payload(phi),
                    "pair": [i + 1, j + 1],
                }
    if not is_invertible(phi):
        return {"kind": "not_invertible", "matrix": operator_to_payload(phi)}
    return None


def _locder_counterexample(
    algebra: Algebra, op: Matrix, trials: int, seed: int
) -> dict:
    """A concrete point refuting membership, or the span-level fact."""
    import random

    ders = derivation_algebra(algebra)
    space = local_derivation_space(algebra, seed=seed)
    points = structured_probe_points(algebra, space.case_tree, seed=seed)
    rng = random.Random(seed + 1)
    for _ in range(max(trials, 100)):
        points.append([rng.randint(-99, 99) for _ in range(algebra.dim)])
    for x in points:
        if pointwise_membership(ders, op, x) is None:
            return {
                "kind": "pointwise",
                "algebra": algebra.name,
                "matrix": operator_to_payload(op),
                "point": _vector_payload(x),
            }
    return {
        "kind": "span_membership",
        "algebra": algebra.name,
        "space": "locder",
        "matrix": operator_to_payload(op),
    }


def _verify_counterexample(obj: dict, tol: float) -> tuple[bool, str]:
    """Re-run an emitted counterexample; True when it still violates."""
    kind = obj.get("kind")
    if kind == "associativity_triple":
        algebra = get_algebra(obj["algebra"])
        i, j, k = (t - 1 for t in obj["triple"])
        n = algebra.dim
        e = [tuple(1 if t == s else 0 for t in range(n)) for s in range(n)]
        lhs = algebra.multiply(algebra.multiply(e[i], e[j]), e[k])
        rhs = algebra.multiply(e[i], algebra.multiply(e[j], e[k]))
        return lhs != rhs, "associativity fails at the recorded triple"
    if kind == "leibniz_pair":
        algebra = get_algebra(obj["algebra"])
        op = operator_from_payload(obj["matrix"])
        again = _leibniz_counterexample(algebra, _require_rational(op))
        return again is not None, "the Leibniz identity fails"
    if kind == "multiplicativity_pair" or kind == "not_invertible":
        algebra = get_algebra(obj["algebra"]) if "algebra" in obj else None
        phi = _require_rational(operator_from_payload(obj["matrix"]))
        if kind == "not_invertible":
            return not is_invertible(phi), "the matrix is singular"
        again = _multiplicativity_counterexample(algebra, phi)
        return again is not None, "multiplicativity fails"
    if kind == "pointwise":
        algebra = get_algebra(obj["algebra"])
        op = _require_rational(operator_from_payload(obj["matrix"]))
        ders = derivation_algebra(algebra)
        x = _vector_from_payload(obj["point"])
        return (
            pointwise_membership(ders, op, x) is None,
            "no derivation matches the operator at the recorded point",
        )
    if kind == "span_membership":
        algebra = get_algebra(obj["algebra"])
        op = _require_rational(operator_from_payload(obj["matrix"]))
        if obj["space"] == "der":
            basis = derivation_algebra(algebra).basis
        else:
            basis = local_derivation_space(algebra).basis
        n = algebra.dim
        span = Subspace(n * n, [b.vec() for b in basis])
        return not span.contains(op.vec()), "the operator is outside the space"
    if kind == "locaut_witness":
        algebra = get_algebra(obj["algebra"])
        b = _require_rational(operator_from_payload(obj["matrix"]))
        x = _vector_from_payload(obj["point"])
        report = locaut_feasible_at(algebra, b, x)
        return not report.feasible, "no automorphism matches at the point"
    if kind == "pattern_member":
        algebra = get_algebra(obj["algebra"])
        b = _require_rational(operator_from_payload(obj["matrix"]))
        check = pattern_check(locaut_pattern(algebra), b)
        return not check.ok, "the matrix violates the pattern"
    if kind == "pattern_residual":
        algebra = get_algebra(obj["algebra"])
        rows = operator_from_payload(obj["matrix"])
        check = pattern_residual(algebra, rows)
        return check.residual > tol, "the numeric pattern residual exceeds tol"
    if kind == "family_escape":
        algebra = get_algebra(obj["algebra"])
        phi = _require_rational(operator_from_payload(obj["matrix"]))
        family = automorphism_family(algebra)
        escaped = is_automorphism(algebra, phi) and family.match(phi) is None
        return escaped, "an automorphism escapes the family template"
    if kind == "bridge_sample":
        algebra = get_algebra(obj["algebra"])
        rows = operator_from_payload(obj["matrix"])
        if obj["direction"] == "exp":
            image = matrix_exp(rows)
            check = pattern_residual(algebra, image)
            return check.residual > 1e-9, "the exponential leaves the pattern"
        recovered = structured_log_pi3(rows)
        back = matrix_exp(recovered)
        scale = max(1.0, max(abs(v) for row in rows for v in row))
        residual = max(
            abs(back[i][j] - rows[i][j])
            for i in range(len(rows))
            for j in range(len(rows))
        ) / scale
        return residual > 1e-8, "the log/exp round trip misses"
    if kind == "inference_violation":
        algebra = get_algebra(obj["algebra"])
        prediction = infer_shape(builtin_form("derivation", algebra.name))
        space = local_derivation_space(algebra)
        report = validate_prediction(prediction, space)
        return not report.ok, "the shape prediction fails validation"
    if kind == "criterion":
        failed = []
        for number in obj["numbers"]:
            result = CRITERIA[number - 1](obj.get("seed", 0))
            if not result.passed:
                failed.append(number)
        return bool(failed), f"criteria still failing: {failed}"
    raise InputError(f"unknown counterexample kind {obj.get('kind')!r}")


# -- command handlers ---------------------------------------------------------


def _cmd_algebra_check(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.target or args.algebra)
    problems = []
    counterexample = None
    n = algebra.dim
    e = [tuple(1 if t == s else 0 for t in range(n)) for s in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = algebra.multiply(algebra.multiply(e[i], e[j]), e[k])
                rhs = algebra.multiply(e[i], algebra.multiply(e[j], e[k]))
                if lhs != rhs and counterexample is None:
                    counterexample = {
                        "kind": "associativity_triple",
                        "algebra": algebra.name,
                        "triple": [i + 1, j + 1, k + 1],
                    }
    if counterexample:
        problems.append("not associative")
    filtration = power_filtration(algebra)
    payload = {
        "algebra": algebra.name,
        "dim": algebra.dim,
        "associative": not problems,
        "filtration_dims": list(filtration.dims),
        "nilpotent": filtration.nilpotent,
        "nilindex": filtration.nilindex,
    }
    lines = [
        f"algebra {algebra.name}: dim {algebra.dim}",
        f"associative: {payload['associative']}",
        f"power filtration dims: {tuple(filtration.dims)}",
        f"nilpotent: {filtration.nilpotent} (nilindex {filtration.nilindex})",
    ]
    if filtration.nilpotent:
        sequence = characteristic_sequence(
            algebra, trials=max(args.trials or 25, 1), seed=args.seed
        )
        payload["characteristic_sequence"] = list(sequence)
        lines.append(f"characteristic sequence: {sequence}")
    if counterexample:
        payload["counterexample"] = counterexample
        lines.append("counterexample: " + json.dumps(counterexample))
        return 1, payload, lines
    return 0, payload, lines


def _der_space(args):
    algebra = get_algebra(args.algebra)
    return algebra, derivation_algebra(algebra)


def _cmd_der_basis(args) -> tuple[int, dict, list[str]]:
    algebra, ders = _der_space(args)
    payload = {
        "algebra": algebra.name,
        "dim": ders.dim,
        "basis": [operator_to_payload(op) for op in ders.basis],
    }
    lines = [f"dim Der({algebra.name}) = {ders.dim}"]
    for idx, op in enumerate(ders.basis, 1):
        lines.append(f"basis operator {idx}:")
        lines.extend(_format_matrix_lines(op))
    return 0, payload, lines


def _cmd_der_check(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    op = _require_rational(load_operator(args.matrix))
    ok = is_derivation(algebra, op)
    payload = {"algebra": algebra.name, "is_derivation": ok}
    lines = [f"is_derivation: {ok}"]
    if not ok:
        counterexample = _leibniz_counterexample(algebra, op)
        payload["counterexample"] = counterexample
        lines.append(
            f"Leibniz fails at basis pair {tuple(counterexample['pair'])}"
        )
        lines.append("counterexample: " + json.dumps(counterexample))
        return 1, payload, lines
    return 0, payload, lines


def _cmd_locder_basis(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    space = local_derivation_space(algebra, seed=args.seed)
    payload = {
        "algebra": algebra.name,
        "dim": len(space.basis),
        "provenance": space.provenance,
        "basis": [operator_to_payload(op) for op in space.basis],
    }
    lines = [
        f"dim LocDer({algebra.name}) = {len(space.basis)} "
        f"({space.provenance} solve)"
    ]
    for idx, op in enumerate(space.basis, 1):
        lines.append(f"basis operator {idx}:")
        lines.extend(_format_matrix_lines(op))
    return 0, payload, lines


def _cmd_locder_check(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    op = _require_rational(load_operator(args.matrix))
    space = local_derivation_space(algebra, seed=args.seed)
    n = algebra.dim
    span = Subspace(n * n, [b.vec() for b in space.basis])
    ok = span.contains(op.vec())
    payload = {"algebra": algebra.name, "is_local_derivation": ok}
    lines = [f"is_local_derivation: {ok}"]
    if not ok:
        counterexample = _locder_counterexample(
            algebra, op, trials=args.trials or 1000, seed=args.seed
        )
        payload["counterexample"] = counterexample
        if counterexample["kind"] == "pointwise":
            lines.append(
                "no derivation matches at point "
                f"({', '.join(counterexample['point'])})"
            )
        lines.append("counterexample: " + json.dumps(counterexample))
        return 1, payload, lines
    return 0, payload, lines


def _cmd_locder_witness(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    witness = strict_inclusion_witness(
        algebra, checks=max(args.trials or 10000, 100), seed=args.seed
    )
    if witness is None:
        payload = {"algebra": algebra.name, "witness": None}
        return 0, payload, [
            "no witness: every local derivation is a derivation"
        ]
    payload = {
        "algebra": algebra.name,
        "witness": operator_to_payload(witness),
        "checks": max(args.trials or 10000, 100),
    }
    lines = [
        f"strict inclusion witness for {algebra.name} "
        "(local derivation, not a derivation):"
    ]
    lines.extend(_format_matrix_lines(witness))
    return 0, payload, lines


def _cmd_aut_check(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    phi = load_operator(args.matrix)
    if isinstance(phi, Matrix):
        ok = is_automorphism(algebra, phi)
        payload = {"algebra": algebra.name, "is_automorphism": ok}
        lines = [f"is_automorphism: {ok}"]
        if not ok:
            counterexample = _multiplicativity_counterexample(algebra, phi)
            payload["counterexample"] = counterexample
            lines.append("counterexample: " + json.dumps(counterexample))
            return 1, payload, lines
        return 0, payload, lines
    residual = multiplicativity_residual(algebra, phi)
    ok = residual <= args.tol
    payload = {
        "algebra": algebra.name,
        "multiplicativity_residual": residual,
        "tol": args.tol,
        "ok": ok,
    }
    lines = [f"multiplicativity residual: {residual:.3e} (tol {args.tol:g})"]
    return (0 if ok else 1), payload, lines


def _cmd_aut_family_verify(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    family = automorphism_family(algebra)
    trials = args.trials or 500
    report = verify_family(family, trials=trials, seed=args.seed)
    closure = group_closure_report(
        family, trials=max(trials // 5, 20), seed=args.seed + 1
    )
    ok = report.ok and closure.ok
    payload = {
        "algebra": algebra.name,
        "trials": trials,
        "family_ok": report.ok,
        "closure_ok": closure.ok,
        "detail": report.detail if not report.ok else closure.detail,
    }
    lines = [
        f"family verification ({trials} trials): {report.ok}",
        f"group/inverse closure: {closure.ok}",
    ]
    if not ok:
        bad = report if not report.ok else closure
        if bad.counterexample is not None:
            counterexample = {
                "kind": "family_escape",
                "algebra": algebra.name,
                "matrix": operator_to_payload(bad.counterexample),
            }
            payload["counterexample"] = counterexample
            lines.append("counterexample: " + json.dumps(counterexample))
        lines.append(f"detail: {bad.detail}")
        return 1, payload, lines
    return 0, payload, lines


def _cmd_locaut_check(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    b = load_operator(args.matrix)
    pattern = locaut_pattern(algebra)
    if not isinstance(b, Matrix):
        check = pattern_residual(algebra, b)
        ok = check.residual <= args.tol
        payload = {
            "algebra": algebra.name,
            "residual": check.residual,
            "branch": check.branch,
            "tol": args.tol,
            "ok": ok,
        }
        lines = [
            f"pattern residual: {check.residual:.3e} "
            f"(branch {check.branch}, tol {args.tol:g})"
        ]
        if not ok:
            counterexample = {
                "kind": "pattern_residual",
                "algebra": algebra.name,
                "matrix": operator_to_payload(b, "complex"),
            }
            payload["counterexample"] = counterexample
            lines.append("counterexample: " + json.dumps(counterexample))
            return 1, payload, lines
        return 0, payload, lines
    check = pattern_check(pattern, b)
    payload = {
        "algebra": algebra.name,
        "ok": check.ok,
        "branch": check.branch,
        "boundary": check.boundary,
        "failures": list(check.failures),
    }
    lines = [f"pattern check: {check.ok}" + (
        f" (branch {check.branch})" if check.branch else ""
    )]
    if check.boundary:
        lines.append(
            "matrix lies on the pattern boundary (open conditions vanish)"
        )
    if not check.ok:
        for failure in check.failures:
            lines.append(f"violated: {failure}")
        counterexample = {
            "kind": "pattern_member",
            "algebra": algebra.name,
            "matrix": operator_to_payload(b),
        }
        point = find_witness(algebra, b, seed=args.seed)
        if point is not None:
            counterexample = {
                "kind": "locaut_witness",
                "algebra": algebra.name,
                "matrix": operator_to_payload(b),
                "point": _vector_payload(point),
            }
            lines.append(
                f"infeasible at point ({', '.join(_vector_payload(point))})"
            )
        payload["counterexample"] = counterexample
        lines.append("counterexample: " + json.dumps(counterexample))
        return 1, payload, lines
    return 0, payload, lines


def _cmd_locaut_verify(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    pattern = locaut_pattern(algebra)
    trials = args.trials or 200
    report = verify_pattern(pattern, trials=trials, seed=args.seed)
    payload = {
        "algebra": algebra.name,
        "trials": trials,
        "ok": report.ok,
        "detail": report.detail,
    }
    lines = [f"pattern verification ({trials} trials): {report.ok}"]
    if not report.ok:
        if report.counterexample is not None:
            matrix, point = report.counterexample
            if point is not None:
                counterexample = {
                    "kind": "locaut_witness",
                    "algebra": algebra.name,
                    "matrix": operator_to_payload(matrix),
                    "point": _vector_payload(point),
                }
            else:
                counterexample = {
                    "kind": "pattern_member",
                    "algebra": algebra.name,
                    "matrix": operator_to_payload(matrix),
                }
            payload["counterexample"] = counterexample
            lines.append("counterexample: " + json.dumps(counterexample))
        lines.append(f"detail: {report.detail}")
        return 1, payload, lines
    return 0, payload, lines


def _cmd_locaut_witness(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    b = _require_rational(load_operator(args.matrix))
    point = find_witness(
        algebra, b, seed=args.seed, random_trials=args.trials or 1000
    )
    if point is None:
        payload = {"algebra": algebra.name, "witness": None}
        return 0, payload, [
            "feasible at every probe point: no witness against the matrix"
        ]
    counterexample = {
        "kind": "locaut_witness",
        "algebra": algebra.name,
        "matrix": operator_to_payload(b),
        "point": _vector_payload(point),
    }
    payload = {
        "algebra": algebra.name,
        "witness": _vector_payload(point),
        "counterexample": counterexample,
    }
    lines = [
        f"witness point ({', '.join(_vector_payload(point))}): "
        "no automorphism matches the matrix there",
        "counterexample: " + json.dumps(counterexample),
    ]
    return 1, payload, lines


def _cmd_exp(args) -> tuple[int, dict, list[str]]:
    m = load_operator(args.matrix)
    image = matrix_exp(m)
    payload = {"exp": operator_to_payload(image, "complex")}
    lines = ["matrix exponential:"]
    lines.extend(_format_complex_lines(image))
    if args.out:
        save_operator(args.out, image, "complex")
        lines.append(f"saved to {args.out}")
    return 0, payload, lines


def _cmd_log(args) -> tuple[int, dict, list[str]]:
    m = load_operator(args.matrix)
    method = args.method
    result = None
    used = None
    obstruction = None
    if method in ("auto", "principal"):
        try:
            result = matrix_log(m)
            used = "principal"
        except NumericsError as exc:
            obstruction = str(exc)
            if method == "principal":
                raise
    if result is None:
        try:
            result = structured_log_pi3(m, tol=args.tol)
            used = "structured"
        except (InputError, NumericsError) as exc:
            detail = f"structured recovery unavailable: {exc}"
            if obstruction:
                detail = f"{obstruction}; {detail}"
            raise NumericsError(detail) from exc
    payload = {"log": operator_to_payload(result, "complex"), "method": used}
    lines = [f"matrix logarithm ({used}):"]
    if obstruction:
        lines.insert(
            0, f"principal branch obstructed: {obstruction}"
        )
    lines.extend(_format_complex_lines(result))
    if args.out:
        save_operator(args.out, result, "complex")
        lines.append(f"saved to {args.out}")
    return 0, payload, lines


def _cmd_bridge(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    trials = args.trials or 100
    report = bridge_check(
        algebra, args.direction, trials=trials, seed=args.seed
    )
    payload = {
        "algebra": algebra.name,
        "direction": args.direction,
        "trials": trials,
        "ok": report.ok,
        "max_residual": report.max_residual,
        "detail": report.detail,
    }
    lines = [
        f"bridge {args.direction} ({algebra.name}, {trials} trials): "
        f"{report.ok}",
        f"worst residual: {report.max_residual:.3e}",
    ]
    if not report.ok:
        if report.sample is not None:
            counterexample = {
                "kind": "bridge_sample",
                "algebra": algebra.name,
                "direction": args.direction,
                "matrix": operator_to_payload(report.sample, "complex"),
            }
            payload["counterexample"] = counterexample
            lines.append("counterexample: " + json.dumps(counterexample))
        lines.append(f"detail: {report.detail}")
        return 1, payload, lines
    return 0, payload, lines


def _cmd_infer(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    prediction = infer_shape(builtin_form("derivation", algebra.name))
    space = local_derivation_space(algebra, seed=args.seed)
    report = validate_prediction(prediction, space)
    payload = {
        "algebra": algebra.name,
        "prediction": prediction.to_dict(),
        "validated": report.ok,
        "violations": list(report.violations),
    }
    lines = [
        f"shape prediction for {algebra.name}:",
        f"  forced zeros: {len(prediction.zero_set)}",
        "  equal pairs: " + (
            ", ".join(
                f"b{i}{j}=b{k}{m}" for (i, j), (k, m) in prediction.equal_pairs
            ) or "none"
        ),
        f"  generally-distinct pairs: {len(prediction.independent_pairs)}",
        f"  undetermined pairs: {len(prediction.undetermined)}",
        f"validated against the computed space: {report.ok}",
    ]
    if not report.ok:
        counterexample = {
            "kind": "inference_violation",
            "algebra": algebra.name,
            "violations": list(report.violations),
        }
        payload["counterexample"] = counterexample
        for violation in report.violations:
            lines.append(f"violation: {violation}")
        lines.append("counterexample: " + json.dumps(counterexample))
        return 1, payload, lines
    return 0, payload, lines


def _cmd_report_geometry(args) -> tuple[int, dict, list[str]]:
    algebra = get_algebra(args.algebra)
    report = geometry_report(algebra)
    payload = report.to_dict()
    lines = [
        f"geometry of LocAut({algebra.name}):",
        f"  dimension: {report.dim}",
        f"  components: {report.components}",
        f"  Lie group: {report.lie_group}",
        f"  rationale: {report.rationale}",
    ]
    return 0, payload, lines


def _cmd_suite(args) -> tuple[int, dict, list[str]]:
    result = run_suite(seed=args.seed)
    payload = result.to_dict()
    lines = result.lines()
    if not result.ok:
        counterexample = {
            "kind": "criterion",
            "numbers": [r.number for r in result.results if not r.passed],
            "seed": args.seed,
        }
        payload["counterexample"] = counterexample
        lines.append("counterexample: " + json.dumps(counterexample))
        return 1, payload, lines
    return 0, payload, lines


def _cmd_verify_counterexample(args) -> tuple[int, dict, list[str]]:
    with open(args.file, encoding="utf-8") as fh:
        raw = json.load(fh)
    obj = raw.get("counterexample", raw) if isinstance(raw, dict) else raw
    if not isinstance(obj, dict):
        raise InputError("no counterexample object found in the file")
    reproduced, description = _verify_counterexample(obj, tol=args.tol)
    payload = {
        "kind": obj.get("kind"),
        "reproduced": reproduced,
        "description": description,
    }
    if reproduced:
        return 0, payload, [f"counterexample reproduced: {description}"]
    return 1, payload, [
        "counterexample did NOT reproduce: the recorded violation no "
        "longer occurs"
    ]


# -- argument parsing ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--algebra", default="pi2", help="builtin name (pi2, pi3) or file path"
    )
    shared.add_argument("--seed", type=int, default=None, help="RNG seed (u64)")
    shared.add_argument(
        "--trials", type=int, default=None, help="randomized trial count"
    )
    shared.add_argument(
        "--tol", type=float, default=1e-9, help="numeric tolerance"
    )
    shared.add_argument(
        "--format", choices=("text", "structured"), default="text",
        dest="fmt", help="report format",
    )
    shared.add_argument("--out", default=None, help="write the report here")

    parser = argparse.ArgumentParser(
        prog="locsym",
        description="exact and numeric verification of derivation and "
        "automorphism structure for the builtin algebras",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    algebra_cmd = commands.add_parser("algebra", help="algebra diagnostics")
    algebra_sub = algebra_cmd.add_subparsers(dest="action", required=True)
    check = algebra_sub.add_parser("check", parents=[shared])
    check.add_argument("target", nargs="?", help="builtin name or file")
    check.set_defaults(handler=_cmd_algebra_check)

    der_cmd = commands.add_parser("der", help="derivation space")
    der_sub = der_cmd.add_subparsers(dest="action", required=True)
    der_sub.add_parser("basis", parents=[shared]).set_defaults(
        handler=_cmd_der_basis
    )
    der_check = der_sub.add_parser("check", parents=[shared])
    der_check.add_argument("--matrix", required=True, help="operator file")
    der_check.set_defaults(handler=_cmd_der_check)

    locder_cmd = commands.add_parser("locder", help="local-derivation space")
    locder_sub = locder_cmd.add_subparsers(dest="action", required=True)
    locder_sub.add_parser("basis", parents=[shared]).set_defaults(
        handler=_cmd_locder_basis
    )
    locder_check = locder_sub.add_parser("check", parents=[shared])
    locder_check.add_argument("--matrix", required=True, help="operator file")
    locder_check.set_defaults(handler=_cmd_locder_check)
    locder_sub.add_parser("witness", parents=[shared]).set_defaults(
        handler=_cmd_locder_witness
    )

    aut_cmd = commands.add_parser("aut", help="automorphism group")
    aut_sub = aut_cmd.add_subparsers(dest="action", required=True)
    aut_check = aut_sub.add_parser("check", parents=[shared])
    aut_check.add_argument("--matrix", required=True, help="operator file")
    aut_check.set_defaults(handler=_cmd_aut_check)
    aut_sub.add_parser("family-verify", parents=[shared]).set_defaults(
        handler=_cmd_aut_family_verify
    )

    locaut_cmd = commands.add_parser("locaut", help="local-automorphism group")
    locaut_sub = locaut_cmd.add_subparsers(dest="action", required=True)
    locaut_check = locaut_sub.add_parser("check", parents=[shared])
    locaut_check.add_argument("--matrix", required=True, help="operator file")
    locaut_check.set_defaults(handler=_cmd_locaut_check)
    locaut_sub.add_parser("verify", parents=[shared]).set_defaults(
        handler=_cmd_locaut_verify
    )
    locaut_witness = locaut_sub.add_parser("witness", parents=[shared])
    locaut_witness.add_argument("--matrix", required=True, help="operator file")
    locaut_witness.set_defaults(handler=_cmd_locaut_witness)

    exp_cmd = commands.add_parser("exp", parents=[shared])
    exp_cmd.add_argument("--matrix", required=True, help="operator file")
    exp_cmd.set_defaults(handler=_cmd_exp)

    log_cmd = commands.add_parser("log", parents=[shared])
    log_cmd.add_argument("--matrix", required=True, help="operator file")
    log_cmd.add_argument(
        "--method", choices=("auto", "principal", "structured"),
        default="auto",
    )
    log_cmd.set_defaults(handler=_cmd_log)

    bridge_cmd = commands.add_parser("bridge", parents=[shared])
    bridge_cmd.add_argument(
        "--direction", choices=("exp", "log"), default="exp"
    )
    bridge_cmd.set_defaults(handler=_cmd_bridge)

    infer_cmd = commands.add_parser("infer", parents=[shared])
    infer_cmd.set_defaults(handler=_cmd_infer)

    report_cmd = commands.add_parser("report", help="analysis reports")
    report_sub = report_cmd.add_subparsers(dest="action", required=True)
    report_sub.add_parser("geometry", parents=[shared]).set_defaults(
        handler=_cmd_report_geometry
    )

    suite_cmd = commands.add_parser("suite", parents=[shared])
    suite_cmd.set_defaults(handler=_cmd_suite)

    verify_cmd = commands.add_parser("verify-counterexample", parents=[shared])
    verify_cmd.add_argument("file", help="report or counterexample JSON file")
    verify_cmd.set_defaults(handler=_cmd_verify_counterexample)
    return parser


def _resolve_seed(args) -> None:
    if args.seed is None:
        raw = os.environ.get("LOCSYM_SEED", "0")
        try:
            args.seed = int(raw)
        except ValueError as exc:
            raise InputError(f"LOCSYM_SEED is not an integer: {raw!r}") from exc
    if not 0 <= args.seed < 2 ** 64:
        raise InputError("seed must fit in an unsigned 64-bit integer")


def _emit(args, code: int, payload: dict, lines: list[str]) -> None:
    if args.fmt == "structured":
        document = {
            "schema": SCHEMA,
            "command": args.command,
            "ok": code == 0,
            "exit_code": code,
        }
        document.update(payload)
        text = json.dumps(document, indent=1, sort_keys=True)
    else:
        text = "\n".join(lines)
    if args.out and args.command not in ("exp", "log"):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"report written to {args.out}")
    else:
        print(text)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        _resolve_seed(args)
        code, payload, lines = args.handler(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 3
    except NumericsError as exc:
        print(f"numeric obstruction: {exc}", file=sys.stderr)
        return 3
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1
    _emit(args, code, payload, lines)
    return code


if __name__ == "__main__":
    sys.exit(main())
