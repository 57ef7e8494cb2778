"""Rule-based coalgebras on countable bases, with structural checks.

A `CoalgebraSpec` pairs family declarations with a comultiplication rule
and an optional coderivation rule in the DSL of `rules`.  Checks run
over explicit finite index ranges and report exact witnesses; the engine
never claims unbounded verification.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import RangeError, SpecError
from .linalg import BasisLabel, FormalTensor, FormalVector
from .rules import DeltaTerm, canonical_delta_terms, canonical_deriv_terms


@dataclass(frozen=True)
class FamilyDecl:
    """A named indexed family of basis vectors.

    Standalone basis vectors such as e or e_1 are families of range
    [0, 0]; `hi = None` means the family is infinite.
    """

    name: str
    parity: int = 0
    lo: int = 0
    hi: Optional[int] = None

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise SpecError(f"family {self.name!r}: parity must be 0 or 1")
        if self.lo < 0:
            raise SpecError(f"family {self.name!r}: lo must be nonnegative")
        if self.hi is not None and self.hi < self.lo:
            raise SpecError(f"family {self.name!r}: empty range [{self.lo}, {self.hi}]")

    @property
    def infinite(self) -> bool:
        return self.hi is None

    def contains(self, index: int) -> bool:
        return index >= self.lo and (self.hi is None or index <= self.hi)

    def range_str(self) -> str:
        return f"[{self.lo}, {'inf' if self.hi is None else self.hi}]"


@dataclass(frozen=True)
class Witness:
    """One exact counterexample: a subject and its nonzero residual."""

    subject: str
    residual: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.residual}"


@dataclass(frozen=True)
class CheckReport:
    """Verdict of a finite-range check with exact witnesses on failure."""

    name: str
    passed: bool
    checked: tuple  # ((family, lo, hi), ...) actually scanned
    witnesses: tuple = ()

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise SpecError("failing report must carry a witness")

    def __str__(self) -> str:
        rng = ", ".join(f"{f}:{lo}..{hi}" for f, lo, hi in self.checked)
        head = f"{self.name}: {'PASS' if self.passed else 'FAIL'} (checked {rng})"
        for w in self.witnesses:
            head += f"\n  witness {w}"
        return head


MAX_WITNESSES = 3


@dataclass(frozen=True)
class CoalgebraSpec:
    """Immutable description of a (differential, possibly graded) coalgebra.

    `delta` and `coderivation` map family names to rule-term tuples;
    missing entries and empty tuples both mean the zero map on that
    family.  `shift_bound` declares how far the rules move indices; see
    `validate_shift_bound`.  `coderivation_max_index` bounds where the
    coderivation is defined, for specs transposed from a finite window.
    """

    name: str
    families: tuple
    delta: Mapping[str, tuple]
    coderivation: Optional[Mapping[str, tuple]] = None
    shift_bound: int = 0
    graded: bool = False
    coderivation_max_index: Optional[int] = None
    description: str = ""

    def __post_init__(self):
        fams = tuple(self.families)
        names = [f.name for f in fams]
        if len(set(names)) != len(names):
            raise SpecError(f"duplicate family names in spec {self.name!r}")
        object.__setattr__(self, "families", fams)
        object.__setattr__(self, "_family_map", {f.name: f for f in fams})
        delta = {}
        for fam, terms in dict(self.delta).items():
            self._require_family(fam)
            terms = canonical_delta_terms(terms)
            for t in terms:
                self._require_family(t.left_family)
                self._require_family(t.right_family)
            delta[fam] = terms
        object.__setattr__(self, "delta", delta)
        if self.coderivation is not None:
            cod = {}
            for fam, terms in dict(self.coderivation).items():
                self._require_family(fam)
                terms = canonical_deriv_terms(terms)
                for t in terms:
                    self._require_family(t.family)
                cod[fam] = terms
            object.__setattr__(self, "coderivation", cod)
        if self.shift_bound < 0:
            raise SpecError("shift_bound must be nonnegative")
        object.__setattr__(self, "_delta_cache", {})
        object.__setattr__(self, "_d_cache", {})
        object.__setattr__(self, "parity_additive", self._audit_parity_additive())

    def _audit_parity_additive(self) -> bool:
        """True when every rule term respects parity additivity: the
        factor parities of a delta term sum to the input family's parity
        and the coderivation preserves parity.  This is a static rule
        property; the coidentity evaluator may then prune terms that the
        final parity projection is guaranteed to discard."""
        for fam, terms in self.delta.items():
            p = self.family(fam).parity
            for t in terms:
                q = self.family(t.left_family).parity + self.family(t.right_family).parity
                if q % 2 != p:
                    return False
        if self.coderivation is not None:
            for fam, terms in self.coderivation.items():
                p = self.family(fam).parity
                for t in terms:
                    if self.family(t.family).parity != p:
                        return False
        return True

    def _require_family(self, name: str):
        if name not in self._family_map:
            raise SpecError(f"spec {self.name!r} does not declare family {name!r}")

    @property
    def differential(self) -> bool:
        return self.coderivation is not None

    def family(self, name: str) -> FamilyDecl:
        try:
            return self._family_map[name]
        except KeyError:
            raise SpecError(f"spec {self.name!r} does not declare family {name!r}") from None

    def label(self, family: str, index: int) -> BasisLabel:
        decl = self.family(family)
        if not decl.contains(index):
            raise RangeError(
                f"index {index} outside range {decl.range_str()} of family {family!r}"
            )
        return BasisLabel(family, index, decl.parity)

    def labels_upto(self, max_index: int):
        """All labels with index <= max_index, family order then index order."""
        out = []
        for decl in self.families:
            hi = max_index if decl.hi is None else min(decl.hi, max_index)
            out.extend(
                BasisLabel(decl.name, k, decl.parity) for k in range(decl.lo, hi + 1)
            )
        return out

    def checked_ranges(self, max_index: int) -> tuple:
        out = []
        for decl in self.families:
            hi = max_index if decl.hi is None else min(decl.hi, max_index)
            if hi >= decl.lo:
                out.append((decl.name, decl.lo, hi))
        return tuple(out)

    def same_rules(self, other: "CoalgebraSpec") -> bool:
        """Structural equality of families and canonical rules.

        Shift bounds and descriptions are engine metadata and are not
        compared.
        """
        if self.families != other.families or self.graded != other.graded:
            return False
        if _nonempty(self.delta) != _nonempty(other.delta):
            return False
        if (self.coderivation is None) != (other.coderivation is None):
            return False
        if self.coderivation is not None and _nonempty(self.coderivation) != _nonempty(
            other.coderivation
        ):
            return False
        return True


def _nonempty(rule: Mapping[str, tuple]) -> dict:
    return {fam: terms for fam, terms in rule.items() if terms}


def delta(spec: CoalgebraSpec, label: BasisLabel) -> FormalTensor:
    """Evaluate the comultiplication rule on one basis label."""
    cached = spec._delta_cache.get(label)
    if cached is not None:
        return cached
    decl = spec.family(label.family)
    if not decl.contains(label.index):
        raise RangeError(f"label {label} outside declared range {decl.range_str()}")
    n = label.index
    out: dict = {}
    for term in spec.delta.get(label.family, ()):
        if term.guard is not None and not term.guard.matches(n):
            continue
        if term.sum_upper is None:
            _emit_delta(spec, out, term, n, 0)
        else:
            for i in range(0, n + term.sum_upper + 1):
                _emit_delta(spec, out, term, n, i)
    result = FormalTensor(2, out)
    spec._delta_cache[label] = result
    return result


def _emit_delta(spec, out, term: DeltaTerm, n: int, i: int):
    c = term.coeff.evaluate(n, i)
    if not c:
        return
    key = (
        spec.label(term.left_family, term.left_index.evaluate(n, i)),
        spec.label(term.right_family, term.right_index.evaluate(n, i)),
    )
    s = out.get(key, 0) + c
    if s:
        out[key] = s
    else:
        del out[key]


def delta_linear(spec: CoalgebraSpec, v: FormalVector) -> FormalTensor:
    """Linear extension of the comultiplication to formal vectors."""
    out = FormalTensor(2)
    for label, c in v.items():
        out = out + delta(spec, label).scale(c)
    return out


def d_label(spec: CoalgebraSpec, label: BasisLabel) -> FormalVector:
    """Evaluate the coderivation rule on one basis label."""
    if not spec.differential:
        raise SpecError(f"spec {spec.name!r} has no coderivation")
    cached = spec._d_cache.get(label)
    if cached is not None:
        return cached
    if (
        spec.coderivation_max_index is not None
        and label.index > spec.coderivation_max_index
    ):
        raise RangeError(
            f"coderivation of {spec.name!r} is only defined up to index "
            f"{spec.coderivation_max_index}, got {label}"
        )
    n = label.index
    out: dict = {}
    for term in spec.coderivation.get(label.family, ()):
        if term.guard is not None and not term.guard.matches(n):
            continue
        c = term.coeff.evaluate(n)
        if not c:
            continue
        key = spec.label(term.family, term.index.evaluate(n))
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            del out[key]
    result = FormalVector(out)
    spec._d_cache[label] = result
    return result


def apply_d(spec: CoalgebraSpec, v: Union[FormalVector, BasisLabel]) -> FormalVector:
    """Linear extension of the coderivation."""
    if isinstance(v, BasisLabel):
        return d_label(spec, v)
    out = FormalVector()
    for label, c in v.items():
        out = out + d_label(spec, label).scale(c)
    return out


def _collect(spec, max_index, residual_fn, name) -> CheckReport:
    witnesses = []
    for label in spec.labels_upto(max_index):
        residual = residual_fn(label)
        if residual:
            witnesses.append(Witness(str(label), str(residual)))
            if len(witnesses) >= MAX_WITNESSES:
                break
    return CheckReport(
        name=name,
        passed=not witnesses,
        checked=spec.checked_ranges(max_index),
        witnesses=tuple(witnesses),
    )


def coderivation_check(spec: CoalgebraSpec, max_index: int) -> CheckReport:
    """Verify delta(d(b)) = (d (x) id + id (x) d) delta(b) on a range."""
    if not spec.differential:
        raise SpecError(f"spec {spec.name!r} has no coderivation")

    def residual(label):
        lhs = delta_linear(spec, d_label(spec, label))
        rhs = FormalTensor(2)
        for (l, r), c in delta(spec, label).items():
            rhs = rhs + d_label(spec, l).to_tensor().tensor(
                FormalVector.unit(r).to_tensor()
            ).scale(c)
            rhs = rhs + FormalVector.unit(l).to_tensor().tensor(
                d_label(spec, r).to_tensor()
            ).scale(c)
        return lhs - rhs

    return _collect(spec, max_index, residual, "coderivation")


def cocommutativity_check(
    spec: CoalgebraSpec, max_index: int, graded: Optional[bool] = None
) -> CheckReport:
    """Verify delta = flip . delta on a range; graded flip if requested."""
    use_graded = spec.graded if graded is None else graded

    def residual(label):
        t = delta(spec, label)
        return t - t.flip(1, graded=use_graded)

    name = "cocommutativity" + (" (graded)" if use_graded else "")
    return _collect(spec, max_index, residual, name)


def validate_shift_bound(spec: CoalgebraSpec, max_index: int) -> CheckReport:
    """Check the declared shift bound on every label in range.

    For each produced tensor term l (x) r of delta(b_n):

    * any factor in an infinite family must have index <= n + s, and
    * index(l) + index(r) >= n - s.

    For each label m produced by the coderivation: m <= n + s when in an
    infinite family, and m >= n - s.  Together these guarantee that dual
    products and the transposed derivation of finitely supported
    functionals stay finitely supported, with support windows computable
    from s.
    """
    s = spec.shift_bound
    witnesses = []

    def bad(label, what):
        witnesses.append(Witness(str(label), what))

    for label in spec.labels_upto(max_index):
        n = label.index
        for (l, r), _ in delta(spec, label).items():
            for factor in (l, r):
                if spec.family(factor.family).infinite and factor.index > n + s:
                    bad(label, f"factor {factor} exceeds index {n} + {s}")
            if l.index + r.index < n - s:
                bad(label, f"term {l}(x){r} has index sum below {n} - {s}")
        if spec.differential and (
            spec.coderivation_max_index is None or n <= spec.coderivation_max_index
        ):
            for m, _ in d_label(spec, label).items():
                if spec.family(m.family).infinite and m.index > n + s:
                    bad(label, f"d image {m} exceeds index {n} + {s}")
                if m.index < n - s:
                    bad(label, f"d image {m} below index {n} - {s}")
        if len(witnesses) >= MAX_WITNESSES:
            break
    return CheckReport(
        name=f"shift-bound ({s})",
        passed=not witnesses,
        checked=spec.checked_ranges(max_index),
        witnesses=tuple(witnesses),
    )
