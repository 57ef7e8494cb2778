"""Builders that derive new coalgebra specs from old ones.

All outputs are materialized as rules in the same DSL, so constructed
specs remain first-class inputs for every downstream check.  The DSL is
closed under these constructions because coderivation rules are affine
in the input index.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .coalgebra import CoalgebraSpec, FamilyDecl
from .errors import SpecError
from .linalg import scalar
from .rules import AffineIndex, DeltaTerm, DerivTerm, Guard, IndexPoly

BAR = "~"


def bar_family(name: str) -> str:
    return BAR + name


def _d_terms(spec: CoalgebraSpec, family: str):
    terms = spec.coderivation.get(family, ())
    for t in terms:
        if t.guard is not None:
            raise SpecError(
                "cannot compose a guarded coderivation rule into a new comultiplication"
            )
    return terms


def _compose_d(dt: DerivTerm, inner: AffineIndex):
    """Apply a coderivation term to a factor whose index is `inner`."""
    return dt.coeff.compose_n(inner), dt.family, dt.index.compose(inner)


def gelfand_dorfman(spec: CoalgebraSpec) -> CoalgebraSpec:
    """New comultiplication (id (x) d) . delta; the coderivation is dropped."""
    if not spec.differential:
        raise SpecError("gelfand_dorfman requires a differential coalgebra")
    new_delta: dict = {}
    for fam, terms in spec.delta.items():
        out = []
        for t in terms:
            for dt in _d_terms(spec, t.right_family):
                coeff, target_fam, target_idx = _compose_d(dt, t.right_index)
                out.append(
                    DeltaTerm(
                        coeff=t.coeff * coeff,
                        left_family=t.left_family,
                        left_index=t.left_index,
                        right_family=target_fam,
                        right_index=target_idx,
                        sum_upper=t.sum_upper,
                        guard=t.guard,
                    )
                )
        new_delta[fam] = tuple(out)
    return CoalgebraSpec(
        name=f"gelfand-dorfman({spec.name})",
        families=spec.families,
        delta=new_delta,
        coderivation=None,
        shift_bound=2 * spec.shift_bound,
        graded=spec.graded,
        description=f"Gelfand-Dorfman construction applied to {spec.name}",
    )


def antisymmetrize(spec: CoalgebraSpec) -> CoalgebraSpec:
    """New comultiplication (1 - flip) . delta, graded flip on graded specs."""
    new_delta: dict = {}
    for fam, terms in spec.delta.items():
        out = []
        for t in terms:
            out.append(t)
            sign = Fraction(-1)
            if spec.graded:
                pl = spec.family(t.left_family).parity
                pr = spec.family(t.right_family).parity
                if pl and pr:
                    sign = -sign
            out.append(
                DeltaTerm(
                    coeff=t.coeff.scale(sign),
                    left_family=t.right_family,
                    left_index=t.right_index,
                    right_family=t.left_family,
                    right_index=t.left_index,
                    sum_upper=t.sum_upper,
                    guard=t.guard,
                )
            )
        new_delta[fam] = tuple(out)
    return CoalgebraSpec(
        name=f"antisymmetrize({spec.name})",
        families=spec.families,
        delta=new_delta,
        coderivation=spec.coderivation,
        shift_bound=spec.shift_bound,
        graded=spec.graded,
        coderivation_max_index=spec.coderivation_max_index,
        description=f"commutator (antisymmetrized) comultiplication of {spec.name}",
    )


def kantor(spec: CoalgebraSpec) -> CoalgebraSpec:
    """Double the basis with odd bar copies and install the coproduct

        delta_J(c)    = sum c1 (x) c2 + ~c1 (x) ~d(c2) - ~d(c1) (x) ~c2
        delta_J(~c)   = sum ~c1 (x) c2 + c1 (x) ~c2

    where delta(c) = sum c1 (x) c2.  Bar families reuse the original
    name with a "~" prefix and carry parity 1.
    """
    if not spec.differential:
        raise SpecError("kantor requires a differential coalgebra")
    if spec.graded:
        raise SpecError("kantor requires an ungraded input")
    families = list(spec.families) + [
        FamilyDecl(name=bar_family(f.name), parity=1, lo=f.lo, hi=f.hi)
        for f in spec.families
    ]
    new_delta: dict = {}
    for fam, terms in spec.delta.items():
        even_terms = []
        odd_terms = []
        for t in terms:
            even_terms.append(t)
            for dt in _d_terms(spec, t.right_family):
                coeff, tf, ti = _compose_d(dt, t.right_index)
                even_terms.append(
                    DeltaTerm(
                        coeff=t.coeff * coeff,
                        left_family=bar_family(t.left_family),
                        left_index=t.left_index,
                        right_family=bar_family(tf),
                        right_index=ti,
                        sum_upper=t.sum_upper,
                        guard=t.guard,
                    )
                )
            for dt in _d_terms(spec, t.left_family):
                coeff, tf, ti = _compose_d(dt, t.left_index)
                even_terms.append(
                    DeltaTerm(
                        coeff=-(t.coeff * coeff),
                        left_family=bar_family(tf),
                        left_index=ti,
                        right_family=bar_family(t.right_family),
                        right_index=t.right_index,
                        sum_upper=t.sum_upper,
                        guard=t.guard,
                    )
                )
            odd_terms.append(
                DeltaTerm(
                    coeff=t.coeff,
                    left_family=bar_family(t.left_family),
                    left_index=t.left_index,
                    right_family=t.right_family,
                    right_index=t.right_index,
                    sum_upper=t.sum_upper,
                    guard=t.guard,
                )
            )
            odd_terms.append(
                DeltaTerm(
                    coeff=t.coeff,
                    left_family=t.left_family,
                    left_index=t.left_index,
                    right_family=bar_family(t.right_family),
                    right_index=t.right_index,
                    sum_upper=t.sum_upper,
                    guard=t.guard,
                )
            )
        new_delta[fam] = tuple(even_terms)
        new_delta[bar_family(fam)] = tuple(odd_terms)
    return CoalgebraSpec(
        name=f"kantor({spec.name})",
        families=tuple(families),
        delta=new_delta,
        coderivation=None,
        shift_bound=2 * spec.shift_bound,
        graded=True,
        description=f"Kantor double of {spec.name} with odd bar copies",
    )


@dataclass(frozen=True)
class GradedAlgebraSpec:
    """A Z-graded algebra given by explicit finite data on a degree window.

    `dims[k]` is the dimension of the degree-k component; `products`
    maps ((i, a), (j, b)) to the structure constants of the product of
    the a-th degree-i and b-th degree-j basis vectors, as a tuple of
    ((i + j, c), coefficient) pairs.  `derivation` is optional data of
    the same shape for a linear map.
    """

    name: str
    dims: Mapping[int, int]
    products: Mapping
    derivation: Optional[Mapping] = None
    dual_family: str = "x"
    description: str = ""

    def __post_init__(self):
        dims = dict(self.dims)
        for deg, dim in dims.items():
            if dim < 0:
                raise SpecError(f"negative dimension at degree {deg}")
        object.__setattr__(self, "dims", dims)
        products = {}
        for ((i, a), (j, b)), results in dict(self.products).items():
            self._check_pos(i, a)
            self._check_pos(j, b)
            clean = []
            for (k, c), coeff in results:
                if k != i + j:
                    raise SpecError(
                        f"product of degrees {i} and {j} lands outside degree {i + j}"
                    )
                self._check_pos(k, c)
                coeff = scalar(coeff)
                if coeff:
                    clean.append(((k, c), coeff))
            products[((i, a), (j, b))] = tuple(clean)
        object.__setattr__(self, "products", products)
        if self.derivation is not None:
            deriv = {}
            for (m, b), results in dict(self.derivation).items():
                self._check_pos(m, b)
                clean = []
                for (k, c), coeff in results:
                    self._check_pos(k, c)
                    coeff = scalar(coeff)
                    if coeff:
                        clean.append(((k, c), coeff))
                deriv[(m, b)] = tuple(clean)
            object.__setattr__(self, "derivation", deriv)

    def _check_pos(self, degree: int, position: int):
        dim = self.dims.get(degree, 0)
        if not 0 <= position < dim:
            raise SpecError(
                f"position {position} out of range for degree {degree} (dim {dim})"
            )

    @property
    def lowest(self) -> int:
        return min(self.dims) if self.dims else 0


def graded_dual(alg: GradedAlgebraSpec, horizon: int) -> CoalgebraSpec:
    """Transpose multiplication (and derivation) on a finite degree window.

    Dual basis labels are indexed by degree minus the lowest degree.
    The result is a verified finite window: families stop at the
    horizon, and the transposed coderivation is only defined where every
    possible contribution lies inside the window.
    """
    if not alg.dims:
        raise SpecError("graded algebra has no components")
    offset = alg.lowest
    degrees = list(range(offset, horizon + 1))
    for deg in degrees:
        if alg.dims.get(deg, 0) <= 0:
            raise SpecError(
                f"missing dimension data for degree {deg} below horizon {horizon}"
            )
    max_dim = max(alg.dims[deg] for deg in degrees)

    def fam_name(position: int) -> str:
        return alg.dual_family if max_dim == 1 else f"{alg.dual_family}{position}"

    families = []
    for pos in range(max_dim):
        covered = [deg for deg in degrees if alg.dims[deg] > pos]
        lo, hi = covered[0], covered[-1]
        if covered != list(range(lo, hi + 1)):
            raise SpecError(
                f"dual family for position {pos} would have a non-contiguous range"
            )
        families.append(
            FamilyDecl(name=fam_name(pos), parity=0, lo=lo - offset, hi=hi - offset)
        )

    delta: dict = {}
    for ((i, a), (j, b)), results in alg.products.items():
        if i < offset or j < offset or i + j > horizon:
            continue
        for (k, c), coeff in results:
            delta.setdefault(fam_name(c), []).append(
                DeltaTerm(
                    coeff=IndexPoly.const(coeff),
                    left_family=fam_name(a),
                    left_index=AffineIndex(const=i - offset),
                    right_family=fam_name(b),
                    right_index=AffineIndex(const=j - offset),
                    guard=Guard.eq(k - offset),
                )
            )

    coderivation = None
    d_max = None
    shift = 0
    if alg.derivation is not None:
        coderivation = {}
        max_drop = 0
        for (m, b), results in alg.derivation.items():
            if not offset <= m <= horizon:
                continue
            for (k, c), coeff in results:
                if not offset <= k <= horizon:
                    continue
                shift = max(shift, abs(m - k))
                max_drop = max(max_drop, m - k)
                coderivation.setdefault(fam_name(c), []).append(
                    DerivTerm(
                        coeff=IndexPoly.const(coeff),
                        family=fam_name(b),
                        index=AffineIndex(const=m - offset),
                        guard=Guard.eq(k - offset),
                    )
                )
        d_max = horizon - offset - max_drop

    return CoalgebraSpec(
        name=f"graded-dual({alg.name})",
        families=tuple(families),
        delta=delta,
        coderivation=coderivation,
        shift_bound=shift,
        graded=False,
        coderivation_max_index=d_max,
        description=(
            f"degreewise dual of {alg.name} on degrees {offset}..{horizon}"
        ),
    )
