"""Exact sparse linear and tensor algebra over countable labeled bases.

Coefficients are `fractions.Fraction` throughout; there is no floating
point anywhere in the engine.  Vectors and tensors are immutable and kept
in canonical form: zero coefficients dropped, keys sorted, duplicates
merged.  Equal values compare and hash equally, which makes golden-file
tests and memoization safe.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import ArityError

ScalarLike = Union[Fraction, int, str]


def scalar(value: ScalarLike) -> Fraction:
    """Coerce ints, Fractions, and strings like "3/2" to an exact Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True, order=True)
class BasisLabel:
    """One basis vector of a countable basis: (family, index, parity).

    The pair (family, index) identifies the vector; the parity is a
    function of the family.  Labels order lexicographically by
    (family, index).
    """

    family: str
    index: int
    parity: int = 0

    def __str__(self) -> str:
        return f"{self.family}:{self.index}"


def _format_terms(pairs) -> str:
    """Render [(coeff, "key"), ...] as "a - 2*b + 1/2*c"."""
    out = []
    for coeff, key in pairs:
        mag = -coeff if coeff < 0 else coeff
        body = key if mag == 1 else f"{mag}*{key}"
        if not out:
            out.append(f"-{body}" if coeff < 0 else body)
        else:
            out.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(out) if out else "0"


def _merge(items) -> dict:
    acc: dict = {}
    for key, c in items:
        c = scalar(c)
        if not c:
            continue
        prev = acc.get(key)
        if prev is None:
            acc[key] = c
        else:
            s = prev + c
            if s:
                acc[key] = s
            else:
                del acc[key]
    return {k: acc[k] for k in sorted(acc)}


class FormalVector:
    """A finite rational linear combination of basis labels."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping, Iterable] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        object.__setattr__(self, "_terms", _merge(items))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def unit(cls, label: BasisLabel) -> "FormalVector":
        return cls({label: Fraction(1)})

    @property
    def terms(self) -> Mapping[BasisLabel, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def labels(self):
        return self._terms.keys()

    def coefficient(self, label: BasisLabel) -> Fraction:
        return self._terms.get(label, Fraction(0))

    def leading(self) -> Optional[BasisLabel]:
        """Smallest label in the support, or None for the zero vector."""
        return next(iter(self._terms), None)

    def max_index(self) -> int:
        """Largest label index in the support; -1 for the zero vector."""
        return max((l.index for l in self._terms), default=-1)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalVector) and self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(tuple(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other: "FormalVector") -> "FormalVector":
        if not isinstance(other, FormalVector):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FormalVector(out)

    def __sub__(self, other: "FormalVector") -> "FormalVector":
        return self + (-other)

    def __neg__(self) -> "FormalVector":
        return self.scale(-1)

    def scale(self, c: ScalarLike) -> "FormalVector":
        c = scalar(c)
        if not c:
            return FormalVector()
        return FormalVector({k: v * c for k, v in self._terms.items()})

    def __mul__(self, c: ScalarLike) -> "FormalVector":
        return self.scale(c)

    __rmul__ = __mul__

    def to_tensor(self) -> "FormalTensor":
        return FormalTensor(1, {(k,): v for k, v in self._terms.items()})

    def __str__(self) -> str:
        return _format_terms((c, str(k)) for k, c in self._terms.items())

    def __repr__(self) -> str:
        return f"FormalVector({self})"


class FormalTensor:
    """A finite rational combination of k-tuples of basis labels."""

    __slots__ = ("_arity", "_terms", "_hash")

    def __init__(self, arity: int, terms: Union[Mapping, Iterable] = ()):
        if arity < 1:
            raise ArityError(f"tensor arity must be >= 1, got {arity}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged = _merge(items)
        for key in merged:
            if len(key) != arity:
                raise ArityError(f"term {key} does not have arity {arity}")
        object.__setattr__(self, "_arity", arity)
        object.__setattr__(self, "_terms", merged)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def zero(cls, arity: int) -> "FormalTensor":
        return cls(arity)

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, key: tuple) -> Fraction:
        return self._terms.get(tuple(key), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FormalTensor)
            and self._arity == other._arity
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self._arity, tuple(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other: "FormalTensor") -> "FormalTensor":
        if not isinstance(other, FormalTensor):
            return NotImplemented
        if self._arity != other._arity:
            raise ArityError(
                f"cannot add tensors of arities {self._arity} and {other._arity}"
            )
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FormalTensor(self._arity, out)

    def __sub__(self, other: "FormalTensor") -> "FormalTensor":
        return self + (-other)

    def __neg__(self) -> "FormalTensor":
        return self.scale(-1)

    def scale(self, c: ScalarLike) -> "FormalTensor":
        c = scalar(c)
        if not c:
            return FormalTensor(self._arity)
        return FormalTensor(self._arity, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, c: ScalarLike) -> "FormalTensor":
        return self.scale(c)

    __rmul__ = __mul__

    def tensor(self, other: "FormalTensor") -> "FormalTensor":
        out: dict = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                out[ka + kb] = ca * cb
        return FormalTensor(self._arity + other._arity, out)

    def flip(self, position: int, graded: bool = False) -> "FormalTensor":
        """Swap factors at `position` and `position + 1` (1-based).

        With `graded`, each swapped term gains the Koszul sign
        (-1)**(p*q) for the parities p, q of the swapped labels.
        """
        if not 1 <= position <= self._arity - 1:
            raise ArityError(
                f"flip position {position} out of range for arity {self._arity}"
            )
        i = position - 1
        out: dict = {}
        for key, c in self._terms.items():
            swapped = key[:i] + (key[i + 1], key[i]) + key[i + 2 :]
            if graded and key[i].parity and key[i + 1].parity:
                c = -c
            s = out.get(swapped, 0) + c
            if s:
                out[swapped] = s
            else:
                out.pop(swapped, None)
        return FormalTensor(self._arity, out)

    def max_index(self) -> int:
        return max((l.index for key in self._terms for l in key), default=-1)

    def to_vector(self) -> FormalVector:
        if self._arity != 1:
            raise ArityError(f"cannot view arity-{self._arity} tensor as a vector")
        return FormalVector({k[0]: c for k, c in self._terms.items()})

    def __str__(self) -> str:
        return _format_terms(
            (c, "⊗".join(str(l) for l in key)) for key, c in self._terms.items()
        )

    def __repr__(self) -> str:
        return f"FormalTensor({self._arity}, {self})"


def add(a: FormalTensor, b: FormalTensor) -> FormalTensor:
    """Canonical sum of two tensors of equal arity."""
    return a + b


def tensor(a: FormalTensor, b: FormalTensor) -> FormalTensor:
    """Tensor product; arities add, coefficients multiply."""
    return a.tensor(b)


def flip(t: FormalTensor, position: int, graded: bool = False) -> FormalTensor:
    """Swap adjacent tensor factors, with an optional Koszul sign."""
    return t.flip(position, graded)


def extract_components(t: FormalTensor, side: str = "left"):
    """Write an arity-2 tensor as sum(a_i (x) b_i) with independent factors.

    Terms are grouped by their label on the chosen side, so the
    chosen-side factors are distinct basis labels and therefore linearly
    independent.  The opposite-side components are then exactly the
    vectors that must lie in any subspace W with t in W (x) W.

    Returns a list of (left, right) FormalVector pairs, ordered by the
    grouping label; the zero tensor yields an empty list.
    """
    if t.arity != 2:
        raise ArityError(f"extract_components requires arity 2, got {t.arity}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    groups: dict = {}
    for (l, r), c in t.items():
        key, other = (l, r) if side == "left" else (r, l)
        groups.setdefault(key, {})[other] = c
    pairs = []
    for key in sorted(groups):
        grouped = FormalVector(groups[key])
        unit = FormalVector.unit(key)
        pairs.append((unit, grouped) if side == "left" else (grouped, unit))
    return pairs


def membership(v: FormalVector, basis: Sequence[FormalVector]):
    """Exact coordinates of v in the span of `basis`, or None.

    The basis vectors must be linearly independent; coordinates are
    returned in basis order.
    """
    rows = []  # (reduced vector, coordinate row)
    for j, b in enumerate(basis):
        coords = [Fraction(0)] * len(basis)
        coords[j] = Fraction(1)
        b, coords = _reduce_tracked(b, coords, rows)
        if not b:
            raise ValueError("membership basis is linearly dependent")
        lead = b.leading()
        inv = 1 / b.coefficient(lead)
        rows.append((b.scale(inv), [c * inv for c in coords]))
        rows.sort(key=lambda row: row[0].leading())
    target = [Fraction(0)] * len(basis)
    v, target = _reduce_tracked(v, target, rows)
    if v:
        return None
    return [-c for c in target]


def _reduce_tracked(v, coords, rows):
    """Reduce v against pivot rows, tracking v + sum(c_j * row_j)."""
    for row, row_coords in rows:
        c = v.coefficient(row.leading())
        if c:
            v = v - row.scale(c)
            coords = [a - c * b for a, b in zip(coords, row_coords)]
    return v, coords


class EchelonSubspace:
    """A subspace kept as a reduced-echelon set of vectors.

    Rows are normalized to leading coefficient 1, pairwise reduced, and
    keyed by their leading label.  Insertion preserves echelon form; the
    dimension is the number of rows.  Instances are working state and
    are mutated in place; rows themselves are immutable vectors.
    """

    __slots__ = ("_rows",)

    def __init__(self, vectors: Iterable[FormalVector] = ()):
        self._rows: dict = {}
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def rows(self):
        """Rows in increasing order of leading label."""
        return tuple(self._rows[p] for p in sorted(self._rows))

    def pivots(self):
        return tuple(sorted(self._rows))

    def reduce(self, v: FormalVector) -> FormalVector:
        for pivot in sorted(self._rows):
            if not v:
                break
            c = v.coefficient(pivot)
            if c:
                v = v - self._rows[pivot].scale(c)
        return v

    def __contains__(self, v: FormalVector) -> bool:
        return not self.reduce(v)

    def contains_label(self, label: BasisLabel) -> bool:
        return FormalVector.unit(label) in self

    def insert(self, v: FormalVector):
        """Insert v; returns the new reduced row, or None if v was in the span."""
        r = self.reduce(v)
        if not r:
            return None
        lead = r.leading()
        r = r.scale(1 / r.coefficient(lead))
        for pivot, row in list(self._rows.items()):
            c = row.coefficient(lead)
            if c:
                self._rows[pivot] = row - r.scale(c)
        self._rows[lead] = r
        return r

    def copy(self) -> "EchelonSubspace":
        out = EchelonSubspace()
        out._rows = dict(self._rows)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, EchelonSubspace) and self._rows == other._rows

    def __str__(self) -> str:
        return "span{" + ", ".join(str(r) for r in self.rows()) + "}"
