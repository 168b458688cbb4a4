"""
The registry of checkable q-series statements and the engine that verifies them.

Series cases compare two builders coefficient by coefficient, congruence cases check that
every coefficient of a dissection vanishes modulo a fixed number, and the symbolic case
compares the machine expansion of L^4 M^4 against its printed transcription.
"""

import time
from collections.abc import Iterable
from dataclasses import dataclass, replace
from enum import StrEnum
from functools import lru_cache
from typing import Protocol

import joblib
from loguru import logger

from cubic_scan.dsl import eval_text
from cubic_scan.partitions import PartitionKind, partition_table
from cubic_scan.polyring import GradedPoly, Monomial, poly_L, poly_M, render_series, residue_extract
from cubic_scan.products import Factor, ProductSpec, eval_product_spec
from cubic_scan.reports import Mismatch, Status, VerificationReport
from cubic_scan.series import TruncatedSeries, add, dissect, equal_up_to, mul, reduce_mod

DEFAULT_TERMS = 200
DEFAULT_JOBS = -1  # all cores

LEMMA_GROUP_SIZES = {2: 3, 5: 6, 8: 9, 11: 6, 14: 3}
LEMMA_DEGREES = (8, 8)  # F + X and P + S exponents of every term of L^4 M^4


class UnknownIdentityError(KeyError):
    """Raised when an identity id is not in the registry."""


class IdentityKind(StrEnum):
    SERIES_EQUALITY = "series"
    CONGRUENCE = "congruence"
    SYMBOLIC_POLY = "symbolic"


class SeriesBuilder(Protocol):
    def build(self, order: int) -> TruncatedSeries: ...

    def describe(self) -> str: ...


@dataclass(frozen=True, slots=True)
class PartitionDissection:
    """sum over n of t(m n + r) q^n for t = p or a."""

    kind: PartitionKind
    m: int
    r: int

    def build(self, order: int) -> TruncatedSeries:
        table = partition_table(self.kind, self.m * order + self.r)
        return dissect(table.as_series(), self.m, self.r)

    def describe(self) -> str:
        return f"sum {self.kind.value}({self.m}n+{self.r}) q^n"


@dataclass(frozen=True, slots=True)
class EtaSum:
    specs: tuple[ProductSpec, ...]

    def build(self, order: int) -> TruncatedSeries:
        total = TruncatedSeries.zero(order)
        for spec in self.specs:
            total = add(total, eval_product_spec(spec, order))
        return total

    def describe(self) -> str:
        return " + ".join(spec.render() for spec in self.specs)

    def perturbed(self, spec_index: int, delta: int) -> "EtaSum":
        if not 0 <= spec_index < len(self.specs):
            raise ValueError(f"spec index {spec_index} out of range for {len(self.specs)} specs")
        specs = list(self.specs)
        specs[spec_index] = specs[spec_index].with_scalar_offset(delta)
        return EtaSum(tuple(specs))


@dataclass(frozen=True, slots=True)
class Expression:
    text: str

    def build(self, order: int) -> TruncatedSeries:
        return eval_text(self.text, order)

    def describe(self) -> str:
        return self.text


@dataclass(frozen=True, slots=True)
class LemmaPolynomial:
    """The residue-2 part of L^4 M^4 rendered as a series, or only its terms of one q-degree."""

    qdeg: int | None = None

    def build(self, order: int) -> TruncatedSeries:
        poly = lemma_polynomial()
        if self.qdeg is not None:
            poly = poly.groups().get(self.qdeg, GradedPoly())
        return render_series(poly, order)

    def describe(self) -> str:
        if self.qdeg is None:
            return "[L^4 M^4] residue 2 mod 3"
        return f"[L^4 M^4] q-degree {self.qdeg}"


@dataclass(frozen=True, slots=True)
class Product:
    factors: tuple[SeriesBuilder, ...]

    def build(self, order: int) -> TruncatedSeries:
        result = TruncatedSeries.constant(1, order)
        for factor in self.factors:
            result = mul(result, factor.build(order))
        return result

    def describe(self) -> str:
        return " * ".join(f"({factor.describe()})" for factor in self.factors)


@dataclass(frozen=True, slots=True)
class Dissected:
    """Coefficients m n + r of another builder, built at order m * order + r."""

    inner: SeriesBuilder
    m: int
    r: int

    def build(self, order: int) -> TruncatedSeries:
        return dissect(self.inner.build(self.m * order + self.r), self.m, self.r)

    def describe(self) -> str:
        return f"dissect({self.inner.describe()}, {self.m}, {self.r})"


@dataclass(frozen=True, slots=True)
class IdentityCase:
    id: str
    description: str
    kind: IdentityKind
    lhs: SeriesBuilder | None = None
    rhs: SeriesBuilder | None = None
    modulus: int | None = None  # CONGRUENCE only

    def rhs_specs(self) -> tuple[ProductSpec, ...]:
        """Eta-quotient specs on the right-hand side, empty when it is not an eta sum."""
        match self.rhs:
            case EtaSum(specs=specs) | Dissected(inner=EtaSum(specs=specs)):
                return specs
        return ()


def perturb_case(case: IdentityCase, spec_index: int, delta: int) -> IdentityCase:
    """Copy of case with the scalar of its spec_index-th right-hand spec shifted by delta."""
    match case.rhs:
        case EtaSum() as rhs:
            return replace(case, rhs=rhs.perturbed(spec_index, delta))
        case Dissected(inner=EtaSum() as inner) as rhs:
            return replace(case, rhs=replace(rhs, inner=inner.perturbed(spec_index, delta)))
    raise ValueError(f"{case.id} has no eta-quotient right-hand side to perturb")


def _eta(scalar: int, qpower: int, exponents: dict[int, int]) -> ProductSpec:
    return ProductSpec.eta(scalar, qpower, exponents)


# the residue-2 part of L^4 M^4 as printed, 27 terms in five q-degree groups
PRINTED_LEMMA_TERMS: tuple[tuple[int, Monomial], ...] = (
    (40, Monomial(f=6, x=2, p=8, qdeg=2)),
    (-32, Monomial(f=7, x=1, p=7, s=1, qdeg=2)),
    (10, Monomial(f=8, p=6, s=2, qdeg=2)),
    (512, Monomial(f=3, x=5, p=8, qdeg=5)),
    (-1216, Monomial(f=4, x=4, p=7, s=1, qdeg=5)),
    (1280, Monomial(f=5, x=3, p=6, s=2, qdeg=5)),
    (-640, Monomial(f=6, x=2, p=5, s=3, qdeg=5)),
    (152, Monomial(f=7, x=3, p=4, s=4, qdeg=5)),
    (-16, Monomial(f=8, p=3, s=5, qdeg=5)),
    (256, Monomial(x=8, p=8, qdeg=8)),
    (-2048, Monomial(f=1, x=7, p=7, s=1, qdeg=8)),
    (6400, Monomial(f=2, x=6, p=6, s=2, qdeg=8)),
    (-8192, Monomial(f=3, x=5, p=5, s=3, qdeg=8)),
    (5776, Monomial(f=4, x=4, p=4, s=4, qdeg=8)),
    (-2048, Monomial(f=5, x=3, p=3, s=5, qdeg=8)),
    (400, Monomial(f=6, x=2, p=2, s=6, qdeg=8)),
    (-32, Monomial(f=7, x=1, p=1, s=7, qdeg=8)),
    (1, Monomial(f=8, s=8, qdeg=8)),
    (-4096, Monomial(x=8, p=5, s=3, qdeg=11)),
    (9728, Monomial(f=1, x=7, p=4, s=4, qdeg=11)),
    (-10240, Monomial(f=2, x=6, p=3, s=5, qdeg=11)),
    (5120, Monomial(f=3, x=5, p=2, s=6, qdeg=11)),
    (-1216, Monomial(f=4, x=4, p=1, s=7, qdeg=11)),
    (128, Monomial(f=5, x=3, s=8, qdeg=11)),
    (2560, Monomial(x=8, p=2, s=6, qdeg=14)),
    (-2048, Monomial(f=1, x=7, p=1, s=7, qdeg=14)),
    (640, Monomial(f=2, x=6, s=8, qdeg=14)),
)

# closed eta-quotient form of each q-degree group of the residue-2 part
LEMMA_CLOSED_FORMS: dict[int, ProductSpec] = {
    2: _eta(2 * 3**2, 2, {6: 6, 9: 26, 3: -6, 18: -10}),
    5: _eta(8 * 3**2, 5, {6: 3, 9: 17, 3: -3, 18: -1}),
    8: _eta(19 * 3**3, 8, {9: 8, 18: 8}),
    11: _eta(-64 * 3**2, 11, {3: 3, 18: 17, 6: -3, 9: -1}),
    14: _eta(128 * 3**2, 14, {3: 6, 18: 26, 6: -6, 9: -10}),
}

CUBIC_NINE_SPECS = (
    _eta(2 * 3**3, 0, {3: 30, 1: -19, 2: -7, 6: -6}),
    _eta(8 * 3**3, 1, {3: 21, 6: 3, 1: -16, 2: -10}),
    _eta(19 * 3**4, 2, {3: 12, 6: 12, 1: -13, 2: -13}),
    _eta(-64 * 3**3, 3, {3: 3, 6: 21, 1: -10, 2: -16}),
    _eta(128 * 3**3, 4, {6: 30, 1: -7, 2: -19, 3: -6}),
)


def printed_lemma_table() -> GradedPoly:
    """The printed residue-2 table as a polynomial, typos included."""
    return GradedPoly({monomial: c for c, monomial in PRINTED_LEMMA_TERMS})


@lru_cache(maxsize=1)
def lemma_polynomial() -> GradedPoly:
    """Machine expansion of the terms of L^4 M^4 whose q-exponent is 2 mod 3."""
    return residue_extract(poly_L() ** 4 * poly_M() ** 4, 3, 2)


@dataclass(frozen=True, slots=True)
class Typo:
    printed: Monomial
    corrected: Monomial
    coefficient: int


@dataclass(frozen=True, slots=True)
class TermMismatch:
    monomial: Monomial
    machine: int  # 0 when the term is absent from the expansion
    printed: int  # 0 when the term is absent from the transcription


@dataclass(frozen=True, slots=True)
class TranscriptionDiff:
    typos: tuple[Typo, ...] = ()
    mismatches: tuple[TermMismatch, ...] = ()

    @property
    def clean(self) -> bool:
        """True when every difference is an explained typo."""
        return not self.mismatches


def _one_exponent_apart(a: Monomial, b: Monomial) -> bool:
    return sum(x != y for x, y in zip(a.exponents(), b.exponents(), strict=True)) == 1


def transcription_diff(machine: GradedPoly, printed: GradedPoly) -> TranscriptionDiff:
    """
    Compare a printed polynomial against its machine expansion.

    A printed term that breaks the degree bookkeeping is a typo when exactly one unmatched
    machine term of the same q-degree and coefficient sits one exponent away from it.
    Any other difference is a mismatch.
    """
    unmatched = {m: c for m, c in machine.terms.items() if printed.coefficient(m) != c}
    typos: list[Typo] = []
    mismatches: list[TermMismatch] = []
    for monomial, c in printed.sorted_terms():
        if machine.coefficient(monomial) == c:
            continue
        candidates = []
        if not monomial.degree_ok(*LEMMA_DEGREES):
            candidates = [
                m
                for m, mc in unmatched.items()
                if mc == c and m.qdeg == monomial.qdeg and _one_exponent_apart(m, monomial)
            ]
        if len(candidates) == 1:
            typos.append(Typo(monomial, candidates[0], c))
            del unmatched[candidates[0]]
        else:
            mismatches.append(TermMismatch(monomial, machine.coefficient(monomial), c))
            unmatched.pop(monomial, None)
    mismatches += [TermMismatch(m, c, 0) for m, c in unmatched.items()]
    mismatches.sort(key=lambda t: t.monomial.sort_key())
    return TranscriptionDiff(tuple(typos), tuple(mismatches))


def structural_problems(poly: GradedPoly) -> list[str]:
    """Ways the residue-2 expansion departs from its expected shape; empty when it has it."""
    problems = []
    sizes = {d: len(group) for d, group in poly.groups().items()}
    if sizes != LEMMA_GROUP_SIZES:
        problems.append(f"q-degree group sizes {sizes} != {LEMMA_GROUP_SIZES}")
    problems += [f"degree bookkeeping fails for {m.render()}" for m in poly.terms if not m.degree_ok(*LEMMA_DEGREES)]
    return problems


def _series_case(case_id: str, description: str, lhs: SeriesBuilder, rhs: SeriesBuilder) -> IdentityCase:
    return IdentityCase(case_id, description, IdentityKind.SERIES_EQUALITY, lhs, rhs)


def _congruence_case(
    case_id: str, kind: PartitionKind, m: int, r: int, modulus: int, source: str
) -> IdentityCase:
    description = f"{source}: {kind.value}({m}n+{r}) = 0 (mod {modulus})"
    return IdentityCase(
        case_id, description, IdentityKind.CONGRUENCE, PartitionDissection(kind, m, r), modulus=modulus
    )


def _lemma_group_case(label: str, qdeg: int) -> IdentityCase:
    spec = LEMMA_CLOSED_FORMS[qdeg]
    return _series_case(
        f"lemma-4.2-{label}",
        f"group {label} of the residue-2 part of L^4 M^4 equals {spec.render()}",
        Dissected(LemmaPolynomial(qdeg), 3, 2),
        Dissected(EtaSum((spec,)), 3, 2),
    )


@lru_cache(maxsize=1)
def _registry() -> tuple[IdentityCase, ...]:
    ordinary, cubic = PartitionKind.ORDINARY, PartitionKind.CUBIC
    return (
        _series_case(
            "ramanujan-5",
            "Ramanujan: sum p(5n+4) q^n = 5 (q^5;q^5)^5 / (q;q)^6",
            PartitionDissection(ordinary, 5, 4),
            EtaSum((_eta(5, 0, {5: 5, 1: -6}),)),
        ),
        _series_case(
            "ramanujan-7",
            "Ramanujan: sum p(7n+5) q^n = 7 (q^7;q^7)^3 / (q;q)^4 + 49 q (q^7;q^7)^7 / (q;q)^8",
            PartitionDissection(ordinary, 7, 5),
            EtaSum((_eta(7, 0, {7: 3, 1: -4}), _eta(49, 1, {7: 7, 1: -8}))),
        ),
        _series_case(
            "zuckerman-25",
            "Zuckerman: sum p(25n+24) q^n as five eta quotients in (q^5;q^5) and (q;q)",
            PartitionDissection(ordinary, 25, 24),
            EtaSum((
                _eta(63 * 5**2, 0, {5: 6, 1: -7}),
                _eta(52 * 5**5, 1, {5: 12, 1: -13}),
                _eta(63 * 5**7, 2, {5: 18, 1: -19}),
                _eta(6 * 5**10, 3, {5: 24, 1: -25}),
                _eta(5**12, 4, {5: 30, 1: -31}),
            )),
        ),
        _series_case(
            "chan-3",
            "H.-C. Chan: sum a(3n+2) q^n = 3 (q^3;q^3)^3 (q^6;q^6)^3 / ((q;q)^4 (q^2;q^2)^4)",
            PartitionDissection(cubic, 3, 2),
            EtaSum((_eta(3, 0, {3: 3, 6: 3, 1: -4, 2: -4}),)),
        ),
        _series_case(
            "cubic-9",
            "sum a(9n+8) q^n as five eta quotients with scalars 2*3^3, 8*3^3, 19*3^4, -64*3^3, 128*3^3;"
            " the cubic analogue of Zuckerman's identity",
            PartitionDissection(cubic, 9, 8),
            EtaSum(CUBIC_NINE_SPECS),
        ),
        _series_case(
            "lemma-2.2",
            "Hirschhorn: 3-dissection of 1/phi(-q) through phi(-q^9) and X(-q^3)",
            Expression("1 / phi(1)"),
            Expression("phi(9) / phi(3)^4 * (phi(9)^2 + 2 * q * phi(9) * X(3) + 4 * q^2 * X(3)^2)"),
        ),
        _series_case(
            "lemma-2.3",
            "Hirschhorn: 3-dissection of 1/psi(q) through P(q^3) and psi(q^9)",
            Expression("1 / psi(1)"),
            Expression("psi(9) / psi(3)^4 * (P(3)^2 - q * P(3) * psi(9) + q^2 * psi(9)^2)"),
        ),
        _series_case(
            "lemma-2.4-phi-psi",
            "phi(-q) psi(q) = (q;q) (q^2;q^2), from the product forms of the theta functions",
            Expression("phi(1) * psi(1)"),
            EtaSum((_eta(1, 0, {1: 1, 2: 1}),)),
        ),
        _series_case(
            "lemma-2.4-xp",
            "X(-q) P(q) = (q^3;q^3) (q^6;q^6), from the product forms of P and X",
            Expression("X(1) * P(1)"),
            EtaSum((_eta(1, 0, {3: 1, 6: 1}),)),
        ),
        IdentityCase(
            "lemma-4.1",
            "the 27 terms of L^4 M^4 with q-exponent 2 mod 3, against their printed transcription",
            IdentityKind.SYMBOLIC_POLY,
        ),
        _lemma_group_case("A", 2),
        _lemma_group_case("B", 5),
        _lemma_group_case("C", 8),
        _lemma_group_case("D", 11),
        _lemma_group_case("E", 14),
        _congruence_case("congruence-p5", ordinary, 5, 4, 5, "Ramanujan"),
        _congruence_case("congruence-p7", ordinary, 7, 5, 7, "Ramanujan"),
        _congruence_case("congruence-a3", cubic, 3, 2, 3, "H.-C. Chan"),
        _congruence_case("congruence-a27", cubic, 9, 8, 27, "H.-C. Chan"),
        _series_case(
            "split-6-18",
            "(q^6;q^6) = (q^6;q^18) (q^12;q^18) (q^18;q^18)",
            Expression("eta(6)"),
            EtaSum((ProductSpec(factors=(Factor(6, 18, 1), Factor(12, 18, 1), Factor(18, 18, 1))),)),
        ),
        _series_case(
            "split-9-18",
            "(q^9;q^9) = (q^9;q^18) (q^18;q^18)",
            Expression("eta(9)"),
            EtaSum((ProductSpec(factors=(Factor(9, 18, 1), Factor(18, 18, 1))),)),
        ),
        _series_case(
            "chan-3-theta",
            "sum a(3n+2) q^n in theta functions, before X(-q) P(q) and phi(-q) psi(q) are collapsed",
            PartitionDissection(cubic, 3, 2),
            Expression(
                "phi(3) * psi(3) / (phi(1)^4 * psi(1)^4)"
                " * (phi(3)^2 * psi(3)^2 + 4 * X(1)^2 * P(1)^2 - 2 * phi(3) * psi(3) * X(1) * P(1))"
            ),
        ),
        _series_case(
            "cubic-9-chain",
            "sum a(9n+8) q^n from 3 (q^9;q^9)^4 (q^18;q^18)^4 / ((q^3;q^3)^13 (q^6;q^6)^13) times [L^4 M^4] residue 2",
            PartitionDissection(cubic, 9, 8),
            Dissected(Product((EtaSum((_eta(3, 0, {9: 4, 18: 4, 3: -13, 6: -13}),)), LemmaPolynomial())), 3, 2),
        ),
        _series_case(
            "lemma-4.2-sum",
            "the residue-2 part of L^4 M^4 equals the sum of its five closed forms",
            Dissected(LemmaPolynomial(), 3, 2),
            Dissected(EtaSum(tuple(LEMMA_CLOSED_FORMS.values())), 3, 2),
        ),
    )


def registry() -> list[IdentityCase]:
    """Every identity case, in a fixed order."""
    return list(_registry())


def get_case(case_id: str) -> IdentityCase:
    """Look up a case by id."""
    for case in _registry():
        if case.id == case_id:
            return case
    raise UnknownIdentityError(f"unknown identity: {case_id}")


def _check_series(case: IdentityCase, terms: int) -> VerificationReport:
    if case.lhs is None or case.rhs is None:
        raise ValueError(f"{case.id} needs both sides")
    order = terms - 1
    comparison = equal_up_to(case.lhs.build(order), case.rhs.build(order), order)
    if comparison:
        return VerificationReport(case.id, terms, Status.VERIFIED)
    mismatch = Mismatch(comparison.index or 0, comparison.lhs or 0, comparison.rhs or 0)
    return VerificationReport(case.id, terms, Status.MISMATCH, mismatch)


def _check_congruence(case: IdentityCase, terms: int) -> VerificationReport:
    if case.lhs is None or case.modulus is None:
        raise ValueError(f"{case.id} needs a series and a modulus")
    values = case.lhs.build(terms - 1)
    residues = reduce_mod(values, case.modulus)
    for n, residue in enumerate(residues.coeffs):
        if residue:
            mismatch = Mismatch(n, values[n], f"0 (mod {case.modulus})")
            return VerificationReport(case.id, terms, Status.MISMATCH, mismatch)
    return VerificationReport(case.id, terms, Status.VERIFIED)


def check_lemma_expansion(case_id: str = "lemma-4.1", printed: GradedPoly | None = None) -> VerificationReport:
    """
    Verify the printed residue-2 terms of L^4 M^4 against the machine expansion.

    Every typo and every disagreeing monomial is listed in the notes; the first
    disagreement in machine term order is the report's mismatch.
    """
    machine = lemma_polynomial()
    diff = transcription_diff(machine, printed if printed is not None else printed_lemma_table())
    problems = structural_problems(machine)
    notes = [
        f"printed {t.coefficient} * {t.printed.render()} should read {t.coefficient} * {t.corrected.render()}"
        for t in diff.typos
    ]
    for typo in diff.typos:
        logger.warning(f"transcription typo: {typo.printed.render()} -> {typo.corrected.render()}")
    notes += [f"machine {t.machine} vs printed {t.printed} * {t.monomial.render()}" for t in diff.mismatches]
    for term in diff.mismatches:
        logger.warning(f"{term.monomial.render()}: expansion {term.machine}, printed {term.printed}")
    mismatch = None
    if diff.mismatches:
        first = diff.mismatches[0]
        positions = [m for m, _ in machine.sorted_terms()]
        index = positions.index(first.monomial) if first.monomial in positions else len(positions)
        mismatch = Mismatch(
            index, f"{first.machine} * {first.monomial.render()}", f"{first.printed} * {first.monomial.render()}"
        )
    elif problems:
        mismatch = Mismatch(0, "; ".join(problems), f"{len(PRINTED_LEMMA_TERMS)} terms in groups {LEMMA_GROUP_SIZES}")
    notes += problems
    status = Status.VERIFIED if mismatch is None else Status.MISMATCH
    return VerificationReport(case_id, len(machine), status, mismatch, notes="; ".join(notes) or None)


def verify(case: IdentityCase, terms: int = DEFAULT_TERMS) -> VerificationReport:
    """
    Check one case and report the outcome.

    Series and congruence cases compare coefficients 0 .. terms-1. Builder failures become
    an ERROR report; nothing is raised.
    """
    if terms < 1:
        raise ValueError(f"terms must be at least 1, got {terms}")
    logger.info(f"verifying {case.id} to {terms} terms")
    start = time.perf_counter()
    try:
        match case.kind:
            case IdentityKind.SERIES_EQUALITY:
                report = _check_series(case, terms)
            case IdentityKind.CONGRUENCE:
                report = _check_congruence(case, terms)
            case IdentityKind.SYMBOLIC_POLY:
                report = check_lemma_expansion(case.id)
    except Exception as e:
        logger.warning(f"{case.id} ended in error: {type(e).__name__}: {e}")
        return VerificationReport(
            case.id, 0, Status.ERROR, elapsed=time.perf_counter() - start, notes=f"{type(e).__name__}: {e}"
        )
    report = replace(report, elapsed=time.perf_counter() - start)
    if report.status is Status.MISMATCH:
        logger.warning(f"{case.id} mismatch: {report.first_mismatch}")
    return report


def verify_all(
    terms: int = DEFAULT_TERMS, n_jobs: int = DEFAULT_JOBS, cases: Iterable[IdentityCase] | None = None
) -> list[VerificationReport]:
    """Verify every case (the whole registry by default), returning reports in case order."""
    if terms < 1:
        raise ValueError(f"terms must be at least 1, got {terms}")
    if n_jobs == 0:
        raise ValueError("n_jobs must be nonzero; use -1 for all cores")
    selected = list(cases) if cases is not None else registry()
    if n_jobs == 1:
        reports = [verify(case, terms) for case in selected]
    else:
        with joblib.parallel_backend("loky", n_jobs=n_jobs):
            reports = joblib.Parallel()(joblib.delayed(verify)(case, terms) for case in selected)
    n_verified = sum(report.ok for report in reports)
    logger.info(f"{n_verified}/{len(reports)} identities verified to {terms} terms")
    return reports
