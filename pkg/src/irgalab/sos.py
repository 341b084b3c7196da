"""Symbolic entry polynomials of the inverse relative gain array and exact
verification of sum-of-squares certificates.

Writing a unit-determinant symmetric PD matrix as R = L L^T with
unit-diagonal lower-triangular L makes R^-1 = adj(R) a polynomial matrix in
the strict-lower entries of L.  With T = R o adj(R), the adjugate entry
adj(T)_(i,j) equals det(T) * S_(i,j) for S = T^-1; since T is PD at every
real parameter point, that polynomial is nonnegative exactly when the IRGA
entry is.  Sizes 2..4 are derived symbolically here; the bundled size-6
reference polynomial is far too large to expand and is checked instead by
randomized evaluation against an exact numeric oracle.

Certificates are lists of (nonnegative rational multiplier, polynomial)
pairs; verification expands sum(multiplier * body^2) exactly and demands
literal term-by-term equality with the target, with any sqrt(3) components
cancelled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Mapping, Optional

import numpy as np

from .exact import Polynomial, VariableSet
from .irga import mix64
from .linalg import Matrix, adjugate_entry, hadamard
from .polytext import ParsedExpression, parse_expression, parse_polynomial

__all__ = [
    "cholesky_variables",
    "symbolic_gram",
    "entry_polynomial",
    "SymbolicCapabilityError",
    "InvalidCertificateError",
    "SoSCertificate",
    "CertificateCheck",
    "IdentityTestReport",
    "identity_test",
    "exact_entry_oracle",
    "BUILTIN_ASSETS",
    "builtin_polynomial",
    "builtin_expression",
    "builtin_certificate",
    "data_path",
]

# Strict-lower Cholesky parameter letters in row-major order; l and o are
# skipped to avoid digit look-alikes, matching the bundled data files.
_PARAMETER_LETTERS = "abcdefghijkmnpq"

_SYMBOLIC_LIMIT = 4


class SymbolicCapabilityError(ValueError):
    """Raised for sizes whose symbolic derivation is out of reach."""


class InvalidCertificateError(ValueError):
    """Raised when a certificate is structurally invalid (not a failed check)."""


def cholesky_variables(n: int) -> VariableSet:
    """Variables of the unit-diagonal lower-triangular parameterization.

    Row-major: size 3 uses a; b, c and size 6 uses a..k, m, n, p, q.
    """
    count = n * (n - 1) // 2
    if count > len(_PARAMETER_LETTERS):
        raise ValueError(f"no parameter naming beyond size 6 (requested {n})")
    return VariableSet(_PARAMETER_LETTERS[:count])


def _symbolic_lower(n: int) -> Matrix:
    variables = cholesky_variables(n)
    one = Polynomial.constant(variables, 1)
    zero = Polynomial.zero(variables)
    rows = []
    k = 0
    for i in range(n):
        row = []
        for j in range(n):
            if j == i:
                row.append(one)
            elif j < i:
                row.append(Polynomial.variable(variables, variables.names[k]))
                k += 1
            else:
                row.append(zero)
        rows.append(row)
    return Matrix(rows)


@lru_cache(maxsize=None)
def symbolic_gram(n: int) -> Matrix:
    """R = L L^T over the symbolic unit-diagonal L; det(R) = 1 identically."""
    if not 2 <= n <= 6:
        raise ValueError("symbolic Gram matrix available for sizes 2..6")
    lower = _symbolic_lower(n)
    return lower @ lower.transpose()


def _adjugate_matrix(m: Matrix) -> Matrix:
    n = m.n_rows
    return Matrix.from_function(n, n, lambda i, j: adjugate_entry(m, i + 1, j + 1))


@lru_cache(maxsize=None)
def _hadamard_gram_adjugate(n: int) -> Matrix:
    gram = symbolic_gram(n)
    return hadamard(gram, _adjugate_matrix(gram))


@lru_cache(maxsize=None)
def entry_polynomial(n: int, i: int, j: int) -> Polynomial:
    """The (i, j) adjugate entry of T = R o adj(R), i.e. det(T) * S_(i,j).

    Only off-diagonal entries are meaningful for the nonnegativity question;
    sizes above 4 must use randomized identity testing instead.
    """
    if n > _SYMBOLIC_LIMIT:
        raise SymbolicCapabilityError(
            f"size {n} exceeds the symbolic range (2..{_SYMBOLIC_LIMIT}); "
            "use identity_test against the exact numeric oracle instead"
        )
    if n < 2:
        raise ValueError("entry polynomials start at size 2")
    if i == j:
        raise ValueError("entry polynomial is defined for off-diagonal entries")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"entry ({i}, {j}) out of range for size {n}")
    return adjugate_entry(_hadamard_gram_adjugate(n), i, j)


@dataclass(frozen=True)
class CertificateCheck:
    """Outcome of an exact certificate expansion against a target."""

    ok: bool
    rational: bool
    difference: dict  # rendered monomial -> (expansion coeff, target coeff), both str

    def __bool__(self):
        return self.ok

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "expansion_rational": self.rational,
            "difference": {k: list(v) for k, v in self.difference.items()},
        }


class SoSCertificate:
    """A sum-of-squares certificate: nonnegative multipliers on squared bodies."""

    def __init__(self, variables: VariableSet, terms):
        checked = []
        for multiplier, body in terms:
            multiplier = Fraction(multiplier)
            if multiplier < 0:
                raise InvalidCertificateError(
                    f"negative multiplier {multiplier} invalidates the certificate"
                )
            if body.variables != variables:
                raise InvalidCertificateError("certificate body over wrong variables")
            checked.append((multiplier, body))
        self.variables = variables
        self.terms = tuple(checked)

    def __len__(self):
        return len(self.terms)

    @classmethod
    def from_json_dict(cls, payload: dict) -> "SoSCertificate":
        try:
            variables = VariableSet(payload["variables"])
            raw_terms = payload["terms"]
        except (KeyError, TypeError) as exc:
            raise InvalidCertificateError(f"malformed certificate JSON: {exc}") from exc
        terms = []
        for item in raw_terms:
            multiplier = Fraction(item["multiplier"])
            body = parse_polynomial(item["body"], variables)
            terms.append((multiplier, body))
        return cls(variables, terms)

    @classmethod
    def load(cls, path) -> "SoSCertificate":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json_dict(json.load(handle))

    def expand(self) -> Polynomial:
        """Exact expansion of sum(multiplier * body^2)."""
        total = Polynomial.zero(self.variables)
        for multiplier, body in self.terms:
            total = total + (body * body) * multiplier
        return total

    def verify(self, target: Polynomial) -> CertificateCheck:
        """Exact comparison of the expansion with the target polynomial.

        On success the expansion necessarily lies in the rationals (any
        sqrt(3) components must have cancelled); on failure the monomial
        differences carry both coefficients.
        """
        expansion = self.expand()
        diff = expansion.diff_terms(target)
        rendered = {}
        names = self.variables.names
        for mono, (got, want) in sorted(diff.items()):
            key = " ".join(
                f"{name}^{e}" if e > 1 else name for name, e in zip(names, mono) if e
            ) or "1"
            rendered[key] = (str(got), str(want))
        return CertificateCheck(
            ok=not diff,
            rational=expansion.is_rational(),
            difference=rendered,
        )


def verify_certificate(certificate: SoSCertificate, target: Polynomial) -> CertificateCheck:
    """Functional spelling of SoSCertificate.verify."""
    return certificate.verify(target)


# -- randomized identity testing ------------------------------------------------


def exact_entry_oracle(n: int, i: int, j: int) -> Callable[[Mapping[str, Fraction]], Fraction]:
    """Exact numeric evaluator of the (i, j) adjugate entry of T = R o adj(R).

    Builds L from a rational assignment of the strict-lower parameters and
    evaluates entirely in rational arithmetic; this is the independent side
    of the randomized identity test and never touches the symbolic path.
    """
    variables = cholesky_variables(n)

    def oracle(point: Mapping[str, Fraction]) -> Fraction:
        values = [Fraction(point[name]) for name in variables.names]
        rows = [[Fraction(0)] * n for _ in range(n)]
        k = 0
        for r in range(n):
            rows[r][r] = Fraction(1)
            for c in range(r):
                rows[r][c] = values[k]
                k += 1
        lower = Matrix(rows)
        gram = lower @ lower.transpose()
        t = hadamard(gram, gram.inverse())
        return adjugate_entry(t, i, j)

    return oracle


@dataclass(frozen=True)
class IdentityTestReport:
    """Per-point agreement record of a randomized identity test."""

    trials: int
    points: tuple  # tuple of {name: str} assignments, in trial order
    agreements: int
    first_disagreement: Optional[dict]  # {"point", "reference", "oracle"}

    @property
    def all_agree(self) -> bool:
        return self.agreements == self.trials

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "agreements": self.agreements,
            "all_agree": self.all_agree,
            "points": [dict(p) for p in self.points],
            "first_disagreement": self.first_disagreement,
        }


def identity_test(
    reference,
    n: int,
    i: int,
    j: int,
    trials: int = 20,
    seed: int = 0,
    coordinate_range: int = 10**6,
    oracle: Callable[[Mapping[str, Fraction]], Fraction] | None = None,
) -> IdentityTestReport:
    """Compare a reference polynomial against the exact oracle at random points.

    ``reference`` is anything with an exact ``evaluate(point)`` (an expanded
    Polynomial or an unexpanded ParsedExpression).  Point t draws integer
    coordinates from the stream seeded by mix64(seed, t), keeping reports
    deterministic and order-independent.  Disagreement is a result, not an
    error.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if oracle is None:
        oracle = exact_entry_oracle(n, i, j)
    variables = cholesky_variables(n)
    points = []
    agreements = 0
    first_disagreement = None
    for t in range(trials):
        rng = np.random.default_rng(mix64(seed, t))
        coords = rng.integers(-coordinate_range, coordinate_range + 1, size=len(variables))
        point = {name: Fraction(int(c)) for name, c in zip(variables.names, coords)}
        points.append({name: str(v) for name, v in point.items()})
        expected = oracle(point)
        got = reference.evaluate(point)
        if got == expected:
            agreements += 1
        elif first_disagreement is None:
            first_disagreement = {
                "point": {name: str(v) for name, v in point.items()},
                "reference": str(got),
                "oracle": str(expected),
            }
    return IdentityTestReport(
        trials=trials,
        points=tuple(points),
        agreements=agreements,
        first_disagreement=first_disagreement,
    )


# -- bundled data assets ----------------------------------------------------------

BUILTIN_ASSETS = {
    "pn3": "pn3.poly",
    "pn4": "pn4.poly",
    "s4-entry12": "s4_entry12.poly",
    "s6-entry12": "s6_entry12.poly",
    "n3": "sos_n3.json",
    "n4": "sos_n4.json",
}


def data_path(filename: str):
    return resources.files("irgalab").joinpath("data").joinpath(filename)


def _read_asset(name: str) -> str:
    try:
        filename = BUILTIN_ASSETS[name]
    except KeyError:
        raise KeyError(
            f"unknown builtin asset {name!r}; available: {sorted(BUILTIN_ASSETS)}"
        ) from None
    return data_path(filename).read_text(encoding="utf-8")


def builtin_expression(name: str) -> ParsedExpression:
    """A builtin polynomial as an unexpanded parse tree."""
    return parse_expression(_read_asset(name))


def builtin_polynomial(name: str, variables: VariableSet | None = None) -> Polynomial:
    """A builtin polynomial, expanded (do not use for s6-entry12)."""
    return parse_polynomial(_read_asset(name), variables)


def builtin_certificate(name: str) -> SoSCertificate:
    return SoSCertificate.from_json_dict(json.loads(_read_asset(name)))
