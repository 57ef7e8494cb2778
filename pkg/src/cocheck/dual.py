"""Exact dual-algebra computations on finitely supported functionals.

A functional sum(c_l xi_l) over coordinate functionals xi_l is stored as
a FormalVector keyed by the labels l.  The validated shift bound keeps
products and transposed derivations finitely supported, with support
windows computed from the bound; each window is spot-validated before
use.  These routines serve as an independent oracle against the
coidentity checker, and the Grassmann envelope check covers the graded
case.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional

from .coalgebra import (
    CheckReport,
    CoalgebraSpec,
    MAX_WITNESSES,
    Witness,
    d_label,
    delta,
    validate_shift_bound,
)
from .errors import ShiftBoundError, SpecError
from .identities import Leaf, NAPoly
from .linalg import FormalVector


def coordinate_functional(spec: CoalgebraSpec, family: str, index: int) -> FormalVector:
    """The coordinate functional dual to one basis label."""
    return FormalVector.unit(spec.label(family, index))


def _require_window(spec: CoalgebraSpec, max_index: int) -> None:
    report = validate_shift_bound(spec, max_index)
    if not report.passed:
        raise ShiftBoundError(
            f"shift bound {spec.shift_bound} of {spec.name!r} failed on the "
            f"window 0..{max_index}: {report.witnesses[0]}"
        )


def dual_product(
    spec: CoalgebraSpec,
    f: FormalVector,
    g: FormalVector,
    validate: bool = True,
) -> FormalVector:
    """The product (fg)(a) = sum f(a1) g(a2) over delta(a) = sum a1 (x) a2.

    The support of the result lies among labels k with
    k <= max(supp f) + max(supp g) + shift_bound, by the validated
    shift bound.
    """
    if not f or not g:
        return FormalVector()
    window = f.max_index() + g.max_index() + spec.shift_bound
    if validate:
        _require_window(spec, window)
    out = {}
    for label in spec.labels_upto(window):
        total = Fraction(0)
        for (l, r), c in delta(spec, label).items():
            cf = f.coefficient(l)
            if cf:
                cg = g.coefficient(r)
                if cg:
                    total += c * cf * cg
        if total:
            out[label] = total
    return FormalVector(out)


def dual_derivation(
    spec: CoalgebraSpec, f: FormalVector, validate: bool = True
) -> FormalVector:
    """The transposed coderivation: (d* f)(b) = f(d(b))."""
    if not spec.differential:
        raise SpecError(f"spec {spec.name!r} has no coderivation")
    if not f:
        return FormalVector()
    window = f.max_index() + spec.shift_bound
    if (
        spec.coderivation_max_index is not None
        and window > spec.coderivation_max_index
    ):
        raise SpecError(
            f"transposed derivation needs the coderivation up to index {window}, "
            f"but {spec.name!r} only defines it up to {spec.coderivation_max_index}"
        )
    if validate:
        _require_window(spec, window)
    out = {}
    for label in spec.labels_upto(window):
        total = Fraction(0)
        for m, c in d_label(spec, label).items():
            cf = f.coefficient(m)
            if cf:
                total += c * cf
        if total:
            out[label] = total
    return FormalVector(out)


class DualEvaluator:
    """Evaluates identity monomials on functionals with memoized products."""

    def __init__(self, spec: CoalgebraSpec, validated_window: int):
        self.spec = spec
        self.window = validated_window
        self._products: dict = {}
        self._derivs: dict = {}

    def product(self, f: FormalVector, g: FormalVector) -> FormalVector:
        if not f or not g:
            return FormalVector()
        key = (f, g)
        cached = self._products.get(key)
        if cached is None:
            cached = dual_product(self.spec, f, g, validate=False)
            self._products[key] = cached
        return cached

    def derivative(self, f: FormalVector, order: int) -> FormalVector:
        for _ in range(order):
            key = f
            cached = self._derivs.get(key)
            if cached is None:
                cached = dual_derivation(self.spec, f, validate=False)
                self._derivs[key] = cached
            f = cached
        return f

    def monomial(self, mono, assignment) -> FormalVector:
        """Evaluate a monomial tree on slot -> functional assignments."""
        if isinstance(mono, Leaf):
            return self.derivative(assignment[mono.var.slot], mono.var.deriv)
        left = self.monomial(mono.left, assignment)
        if not left:
            return left
        right = self.monomial(mono.right, assignment)
        if not right:
            return right
        return self.product(left, right)

    def polynomial(self, p: NAPoly, assignment) -> FormalVector:
        out = FormalVector()
        for coeff, mono in p.terms:
            value = self.monomial(mono, assignment)
            if value:
                out = out + value.scale(coeff)
        return out


def bruteforce_identity(
    spec: CoalgebraSpec, p: NAPoly, max_index: int, name: Optional[str] = None
) -> CheckReport:
    """Evaluate p on every tuple of coordinate functionals with indices
    <= max_index and assert each resulting functional vanishes exactly."""
    if not p.is_multilinear():
        raise SpecError(f"identity is not multilinear: {p}")
    arity = p.arity
    depth = max(v.deriv for _, m in p.terms for v in m.leaves()) + 1
    window = arity * (max_index + depth * spec.shift_bound) + spec.shift_bound
    _require_window(spec, window)
    evaluator = DualEvaluator(spec, window)
    labels = spec.labels_upto(max_index)
    functionals = {l: FormalVector.unit(l) for l in labels}
    witnesses = []
    for tup in itertools.product(labels, repeat=arity):
        assignment = {j + 1: functionals[tup[j]] for j in range(arity)}
        residual = evaluator.polynomial(p, assignment)
        if residual:
            subject = "(" + ", ".join(f"xi_{l}" for l in tup) + ")"
            witnesses.append(Witness(subject, str(residual)))
            if len(witnesses) >= MAX_WITNESSES:
                break
    return CheckReport(
        name=name or f"dual oracle {p}",
        passed=not witnesses,
        checked=spec.checked_ranges(max_index),
        witnesses=tuple(witnesses),
    )


class GrassmannElement:
    """An element of the Grassmann envelope of the dual superalgebra.

    Terms pair a coordinate-functional label with a squarefree monomial
    in the exterior generators, stored as a sorted tuple of generator
    indices; the parities of label and monomial always match.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for (label, mono), c in items:
            if not c:
                continue
            if label.parity != len(mono) % 2:
                raise SpecError(
                    f"term {label} (x) {mono} pairs mismatched parities"
                )
            key = (label, tuple(mono))
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                del acc[key]
        self._terms = {k: acc[k] for k in sorted(acc)}

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, GrassmannElement) and self._terms == other._terms

    def __sub__(self, other):
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) - c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        result = GrassmannElement()
        result._terms = {k: out[k] for k in sorted(out)}
        return result

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (label, mono), c in self._terms.items():
            gens = "^".join(f"g{j}" for j in mono) or "1"
            parts.append(f"{c}*{label}(x){gens}")
        return " + ".join(parts)


def _wedge(a: tuple, b: tuple):
    """Exterior product of sorted squarefree monomials: (monomial, sign)."""
    if set(a) & set(b):
        return None, 0
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] moves left past the remaining len(a) - i generators.
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


def envelope_product(
    evaluator: DualEvaluator, u: GrassmannElement, v: GrassmannElement
) -> GrassmannElement:
    """Componentwise product: dual product tensored with the exterior
    product; all signs come from exterior anticommutativity."""
    out: dict = {}
    for (l, mu), cu in u.items():
        fu = FormalVector.unit(l)
        for (r, mv), cv in v.items():
            mono, sign = _wedge(mu, mv)
            if mono is None:
                continue
            prod = evaluator.product(fu, FormalVector.unit(r))
            if not prod:
                continue
            c = cu * cv * sign
            for label, coeff in prod.items():
                key = (label, mono)
                s = out.get(key, 0) + c * coeff
                if s:
                    out[key] = s
                else:
                    del out[key]
    return GrassmannElement(out)


def grassmann_envelope_check(
    spec: CoalgebraSpec,
    generators: int = 3,
    samples: int = 50,
    seed: int = 0,
    max_index: int = 6,
) -> CheckReport:
    """Sample the Grassmann envelope of the dual superalgebra and check
    commutativity and the Jordan identity (uu v) u = uu (v u) exactly.

    Sampling is deterministic in the seed; failures reproduce bit for
    bit.  This is the oracle for Jordan super-coalgebra claims, since no
    closed coidentity characterization is available.
    """
    if generators < 3:
        raise SpecError("grassmann_envelope_check needs at least 3 generators")
    rng = random.Random(seed)
    even_labels = [l for l in spec.labels_upto(max_index) if l.parity == 0]
    odd_labels = [l for l in spec.labels_upto(max_index) if l.parity == 1]
    even_monos = [m for k in range(0, generators + 1, 2)
                  for m in itertools.combinations(range(generators), k)]
    odd_monos = [m for k in range(1, generators + 1, 2)
                 for m in itertools.combinations(range(generators), k)]
    if not even_labels and not odd_labels:
        raise SpecError("spec has no labels in the sampling window")

    window = 4 * max_index + 4 * spec.shift_bound
    _require_window(spec, window)
    evaluator = DualEvaluator(spec, window)
    coeff_pool = [Fraction(c) for c in (-3, -2, -1, 1, 2, 3)]

    def random_element() -> GrassmannElement:
        terms = {}
        for labels, monos in ((even_labels, even_monos), (odd_labels, odd_monos)):
            if not labels or not monos:
                continue
            for _ in range(rng.randint(1, 2)):
                key = (rng.choice(labels), rng.choice(monos))
                terms[key] = terms.get(key, 0) + rng.choice(coeff_pool)
        return GrassmannElement(terms)

    witnesses = []
    for k in range(samples):
        u = random_element()
        v = random_element()
        uv = envelope_product(evaluator, u, v)
        vu = envelope_product(evaluator, v, u)
        comm = uv - vu
        if comm:
            witnesses.append(
                Witness(f"sample {k}: commutativity with u={u}, v={v}", str(comm))
            )
        uu = envelope_product(evaluator, u, u)
        lhs = envelope_product(evaluator, envelope_product(evaluator, uu, v), u)
        rhs = envelope_product(evaluator, uu, envelope_product(evaluator, v, u))
        jordan = lhs - rhs
        if jordan:
            witnesses.append(
                Witness(f"sample {k}: jordan identity with u={u}, v={v}", str(jordan))
            )
        if len(witnesses) >= MAX_WITNESSES:
            break
    return CheckReport(
        name=f"grassmann-envelope (g={generators}, samples={samples}, seed={seed})",
        passed=not witnesses,
        checked=spec.checked_ranges(max_index),
        witnesses=tuple(witnesses),
    )
