"""Acceptance battery: the eleven checks behind the `suite` command.

Each criterion returns a CriterionResult; run_suite evaluates all
eleven with sub-seeds derived deterministically from one suite seed.
Records carry no wall times or other ambient state, so a fixed seed
reproduces byte-identical output.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    builtin,
    characteristic_sequence,
    is_associative,
    power_filtration,
)
from .derivations import bracket, bracket_closed, derivation_algebra, is_derivation
from .expbridge import bridge_check, eval_series, closed_form, series_coefficients
from .geometry import branch_disjointness, geometry_report
from .inference import infer_shape, validate_prediction
from .linalg import Matrix
from .local_automorphisms import (
    find_witness,
    group_closure_check,
    locaut_pattern,
    verify_pattern,
)
from .local_derivations import (
    local_derivation_space,
    pointwise_membership,
    strict_inclusion_witness,
)
from .automorphisms import automorphism_family, group_closure_report, verify_family
from .templates import builtin_form, template_space_equals

BOTH = ("pi2", "pi3")


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  criterion {self.number:2d}  {self.title}: {self.detail}"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "detail": self.detail,
        }


def _result(number: int, title: str, problems: list[str], detail: str) -> CriterionResult:
    if problems:
        return CriterionResult(number, title, False, "; ".join(problems))
    return CriterionResult(number, title, True, detail)


def _subseed(seed: int, k: int) -> int:
    return seed * 1009 + k


def criterion_1(seed: int = 0) -> CriterionResult:
    """Associativity, power filtration, characteristic sequence."""
    problems = []
    for name in BOTH:
        algebra = builtin(name)
        if not is_associative(algebra):
            problems.append(f"{name} is not associative")
        filtration = power_filtration(algebra)
        if filtration.dims != (5, 3, 1, 0):
            problems.append(f"{name} filtration dims {filtration.dims}")
        if filtration.nilindex != 4:
            problems.append(f"{name} nilindex {filtration.nilindex}")
        sequence = characteristic_sequence(algebra, trials=25, seed=_subseed(seed, 1))
        if sequence != (3, 2):
            problems.append(f"{name} characteristic sequence {sequence}")
    return _result(
        1,
        "structure diagnostics",
        problems,
        "both builtins associative, filtration (5,3,1,0), nilindex 4, "
        "characteristic sequence (3,2)",
    )


def criterion_2(seed: int = 0) -> CriterionResult:
    """Derivation dimensions and template equality."""
    problems = []
    dims = {}
    for name, expected in (("pi2", 7), ("pi3", 6)):
        algebra = builtin(name)
        ders = derivation_algebra(algebra)
        dims[name] = ders.dim
        if ders.dim != expected:
            problems.append(f"dim Der({name}) = {ders.dim}, expected {expected}")
        if not template_space_equals(builtin_form("derivation", name), ders.basis):
            problems.append(f"Der({name}) differs from its closed-form template")
    return _result(
        2,
        "derivation spaces",
        problems,
        f"dim Der(pi2) = {dims['pi2']}, dim Der(pi3) = {dims['pi3']}, "
        "both equal to their template spans",
    )


_RELATIONS = {
    # entry positions are 0-based (row, col): value must equal the sum
    "pi2": (
        ((3, 3), ((3, 0), (0, 0))),  # b44 = b41 + b11
        ((4, 4), ((1, 1), (4, 1))),  # b55 = b22 + b52
    ),
    "pi3": (),
}

_PROPORTIONS_PI3 = (
    ((1, 1), 2),  # b22 = 2 b11
    ((2, 2), 3),  # b33 = 3 b11
    ((3, 3), 1),  # b44 = b11
    ((4, 4), 2),  # b55 = 2 b11
)


def criterion_3(seed: int = 0) -> CriterionResult:
    """Local-derivation dimensions, template equality, relations."""
    problems = []
    dims = {}
    for name, expected in (("pi2", 11), ("pi3", 7)):
        algebra = builtin(name)
        space = local_derivation_space(algebra, mode="exact", seed=_subseed(seed, 3))
        dims[name] = len(space.basis)
        if len(space.basis) != expected:
            problems.append(
                f"dim LocDer({name}) = {len(space.basis)}, expected {expected}"
            )
        template = builtin_form("local_derivation", name)
        if not template_space_equals(template, space.basis):
            problems.append(f"LocDer({name}) differs from its closed-form template")
        for (i, j), addends in _RELATIONS[name]:
            for op in space.basis:
                if op.rows[i][j] != sum(op.rows[a][b] for a, b in addends):
                    problems.append(
                        f"relation at entry ({i + 1},{j + 1}) fails on LocDer({name})"
                    )
                    break
        if name == "pi3":
            for (i, j), factor in _PROPORTIONS_PI3:
                for op in space.basis:
                    if op.rows[i][j] != factor * op.rows[0][0]:
                        problems.append(
                            f"relation b{i + 1}{j + 1} = {factor} b11 fails"
                        )
                        break
    return _result(
        3,
        "local-derivation spaces",
        problems,
        f"dim LocDer(pi2) = {dims['pi2']}, dim LocDer(pi3) = {dims['pi3']}, "
        "template spans and entry relations verified exactly",
    )


_STRATA = ((1, 0, 0, -1, 0), (0, 1, 0, 0, -1))  # nu1+nu4 = 0, nu2+nu5 = 0


def criterion_4(seed: int = 0) -> CriterionResult:
    """Strict inclusions Der in LocDer with verified witnesses."""
    problems = []
    details = []
    for name in BOTH:
        algebra = builtin(name)
        ders = derivation_algebra(algebra)
        locders = local_derivation_space(algebra, seed=_subseed(seed, 4))
        witness = strict_inclusion_witness(
            algebra, ders, locders, checks=10000, seed=_subseed(seed, 5)
        )
        if witness is None:
            problems.append(f"no strict inclusion witness for {name}")
            continue
        if is_derivation(algebra, witness):
            problems.append(f"witness for {name} satisfies the Leibniz identity")
        for x in _STRATA:
            if pointwise_membership(ders, witness, x) is None:
                problems.append(f"witness for {name} fails membership at {x}")
        entries = ", ".join(
            f"({i + 1},{j + 1})={value}"
            for i, row in enumerate(witness.rows)
            for j, value in enumerate(row)
            if value
        )
        details.append(f"{name}: witness [{entries}]")
    return _result(
        4,
        "strict inclusions",
        problems,
        "10^4 pointwise checks incl. both strata passed, Leibniz fails; "
        + "; ".join(details),
    )


_COMMUTATOR_PI3 = {
    # 0-based positions mapped to exact bilinear forms in (x, y) params
    (1, 0): lambda x, y: x["b11"] * y["b21"] - x["b21"] * y["b11"],
    (2, 0): lambda x, y: 2 * x["b11"] * y["b31"] + x["b32"] * y["b21"]
    - x["b21"] * y["b32"] - 2 * x["b31"] * y["b11"],
    (2, 1): lambda x, y: x["b11"] * y["b32"] - x["b32"] * y["b11"],
    (2, 3): lambda x, y: 2 * x["b11"] * y["b34"] - 2 * x["b34"] * y["b11"],
    (4, 0): lambda x, y: x["b11"] * y["b51"] - x["b51"] * y["b11"],
    (4, 3): lambda x, y: x["b11"] * y["b54"] - x["b54"] * y["b11"],
}


def criterion_5(seed: int = 0) -> CriterionResult:
    """Bracket closure of both spaces plus the displayed commutator."""
    problems = []
    for name in BOTH:
        space = local_derivation_space(builtin(name), seed=_subseed(seed, 6))
        ok, pair = bracket_closed(space.basis, trials=1000, seed=_subseed(seed, 7))
        if not ok:
            problems.append(f"bracket left LocDer({name})")
    template = builtin_form("local_derivation", "pi3")
    rng = random.Random(_subseed(seed, 8))
    for _ in range(100):
        x = {p: Fraction(rng.randint(-9, 9)) for p in template.params}
        y = {p: Fraction(rng.randint(-9, 9)) for p in template.params}
        commutator = bracket(template.instantiate(x), template.instantiate(y))
        for i in range(5):
            for j in range(5):
                form = _COMMUTATOR_PI3.get((i, j))
                expected = form(x, y) if form else 0
                if commutator.rows[i][j] != expected:
                    problems.append(
                        f"commutator entry ({i + 1},{j + 1}) deviates from "
                        f"the displayed form"
                    )
    return _result(
        5,
        "Lie closure",
        problems,
        "both spaces bracket-closed at 1000 random pairs; displayed "
        "commutator entries reproduced at 100 parameter pairs",
    )


def criterion_6(seed: int = 0) -> CriterionResult:
    """Automorphism families: verification plus group closure."""
    problems = []
    for name in BOTH:
        family = automorphism_family(builtin(name))
        report = verify_family(family, trials=500, seed=_subseed(seed, 9))
        if not report.ok:
            problems.append(f"verify_family({name}): {report.detail}")
        closure = group_closure_report(family, trials=100, seed=_subseed(seed, 10))
        if not closure.ok:
            problems.append(f"group closure({name}): {closure.detail}")
    return _result(
        6,
        "automorphism families",
        problems,
        "500-trial family verification and exact group/inverse closure "
        "passed for both algebras",
    )


def criterion_7(seed: int = 0) -> CriterionResult:
    """Local-automorphism patterns plus refuted single violations."""
    problems = []
    for name in BOTH:
        algebra = builtin(name)
        pattern = locaut_pattern(algebra)
        report = verify_pattern(pattern, trials=200, seed=_subseed(seed, 11))
        if not report.ok:
            problems.append(f"verify_pattern({name}): {report.detail}")
        if not group_closure_check(pattern, trials=50, seed=_subseed(seed, 12)):
            problems.append(f"pattern closure({name}) failed")
    # single-relation violations with pinned witnesses
    b22_bump = Matrix(
        [
            [1, 0, 0, 0, 0],
            [0, 2, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ]
    )
    witness = find_witness(builtin("pi3"), b22_bump, seed=_subseed(seed, 13))
    if witness != (0, 1, 0, 1, 0):
        problems.append(f"pi3 b22 violation witness {witness}, expected e2+e4")
    b44_bump = Matrix(
        [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 3, 0],
            [0, 0, 0, 0, 1],
        ]
    )
    witness = find_witness(builtin("pi2"), b44_bump, seed=_subseed(seed, 13))
    if witness is None:
        problems.append("pi2 b44 violation not refuted")
    return _result(
        7,
        "local-automorphism patterns",
        problems,
        "200-trial pattern verification passed for both algebras; "
        "single-relation violations refuted (pi3 witness e2+e4)",
    )


def criterion_8(seed: int = 0) -> CriterionResult:
    """Exponential bridge in both directions."""
    problems = []
    residuals = []
    for name in BOTH:
        report = bridge_check(
            builtin(name), "exp", trials=100, seed=_subseed(seed, 14)
        )
        residuals.append(f"exp {name}: {report.max_residual:.2e}")
        if not report.ok:
            problems.append(f"exp bridge({name}): {report.detail}")
    report = bridge_check(builtin("pi3"), "log", trials=100, seed=_subseed(seed, 15))
    residuals.append(f"log pi3: {report.max_residual:.2e}")
    if not report.ok:
        problems.append(f"log bridge(pi3): {report.detail}")
    return _result(
        8,
        "exponential bridge",
        problems,
        "100-sample exp direction within 1e-9 for both algebras and "
        "log recovery within 1e-8 (" + ", ".join(residuals) + ")",
    )


def criterion_9(seed: int = 0) -> CriterionResult:
    """Series identities: closed forms and termwise equality."""
    problems = []
    rng = random.Random(_subseed(seed, 16))
    worst = 0.0
    for _ in range(100):
        radius = rng.uniform(0.0, 1.0)
        angle = rng.uniform(0.0, 2 * math.pi)
        x = radius * complex(math.cos(angle), math.sin(angle))
        for name in ("lambda21", "lambda31", "mu31", "lambda32", "lambda34"):
            gap = abs(eval_series(name, x, 30) - closed_form(name, x))
            worst = max(worst, gap)
            if gap > 1e-10:
                problems.append(f"{name} misses its closed form by {gap:.2e}")
    if series_coefficients("lambda34", 30) != series_coefficients("lambda31", 30):
        problems.append("lambda34 and lambda31 differ termwise")
    return _result(
        9,
        "series identities",
        problems,
        f"five series match closed forms at 100 points (worst gap "
        f"{worst:.2e}); lambda34 = lambda31 termwise through N=30",
    )


def criterion_10(seed: int = 0) -> CriterionResult:
    """Geometry reports and exact branch disjointness."""
    problems = []
    report2 = geometry_report(builtin("pi2"))
    if (report2.dim, report2.components, report2.lie_group) != (11, 1, True):
        problems.append(
            f"pi2 geometry ({report2.dim}, {report2.components}, "
            f"{report2.lie_group})"
        )
    report3 = geometry_report(builtin("pi3"))
    if (report3.dim, report3.components, report3.lie_group) != (7, 2, False):
        problems.append(
            f"pi3 geometry ({report3.dim}, {report3.components}, "
            f"{report3.lie_group})"
        )
    if not branch_disjointness(locaut_pattern(builtin("pi3"))):
        problems.append("pi3 branch disjointness probe failed")
    return _result(
        10,
        "geometry reports",
        problems,
        "pi2 (dim 11, 1 component, Lie group), pi3 (dim 7, 2 components, "
        "not a Lie group), branches exactly disjoint",
    )


def criterion_11(seed: int = 0) -> CriterionResult:
    """Shape inference validates against the computed spaces."""
    problems = []
    for name in BOTH:
        algebra = builtin(name)
        prediction = infer_shape(builtin_form("derivation", name))
        space = local_derivation_space(algebra, seed=_subseed(seed, 17))
        report = validate_prediction(prediction, space)
        if not report.ok:
            problems.append(f"{name}: " + "; ".join(report.violations))
        template_zeros = {
            (i + 1, j + 1)
            for i, j in builtin_form("local_derivation", name).zero_positions()
        }
        if set(prediction.zero_set) != template_zeros:
            problems.append(f"{name}: rule-0 zero set differs from the template")
    return _result(
        11,
        "shape inference",
        problems,
        "predictions validate on both computed spaces; rule-0 zero sets "
        "equal the closed-form matrices exactly",
    )


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
)


@dataclass(frozen=True)
class SuiteResult:
    seed: int
    results: tuple[CriterionResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        body = [r.line() for r in self.results]
        passed = sum(r.passed for r in self.results)
        body.append(f"{passed}/{len(self.results)} criteria passed (seed {self.seed})")
        return body

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ok": self.ok,
            "criteria": [r.to_dict() for r in self.results],
        }


def run_suite(seed: int = 0) -> SuiteResult:
    results = []
    for criterion in CRITERIA:
        try:
            results.append(criterion(seed))
        except Exception as exc:  # a crashed criterion is a failed criterion
            number = len(results) + 1
            results.append(
                CriterionResult(
                    number=number,
                    title=criterion.__doc__.strip().rstrip(".").lower()
                    if criterion.__doc__
                    else f"criterion {number}",
                    passed=False,
                    detail=f"raised {type(exc).__name__}: {exc}",
                )
            )
    return SuiteResult(seed=seed, results=tuple(results))
