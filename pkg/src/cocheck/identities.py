"""Multilinear nonassociative identities and their coidentity translations.

An identity for the dual algebra is a linear combination of binary trees
over decorated variables.  `translate` turns it into a composable
operator from the coalgebra to a tensor power, built from the
comultiplication, the coderivation applied factorwise, adjacent flips,
and parity projections.  Checking the operator on basis labels checks
the identity on the whole dual exactly, which is immune to the product
distortions a truncated dual algebra would introduce.

Sign convention: the pairing of functionals against tensors carries no
sign, and Koszul signs enter only through graded flips while factors are
permuted back to slot order.  The `koszul_pairing` switch selects the
alternative convention (plain flips, permutation signs taken from the
declared slot parities); it exists so the two conventions can be
compared on concrete examples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .coalgebra import (
    CheckReport,
    CoalgebraSpec,
    MAX_WITNESSES,
    Witness,
    d_label,
    delta,
)
from .errors import SpecError
from .linalg import FormalTensor, FormalVector, scalar


@dataclass(frozen=True)
class NAVariable:
    """A decorated variable: which slot it fills and how many derivatives."""

    slot: int
    deriv: int = 0

    def __post_init__(self):
        if self.slot < 1:
            raise SpecError("variable slots are numbered from 1")
        if self.deriv < 0:
            raise SpecError("derivative order must be nonnegative")


@dataclass(frozen=True)
class Leaf:
    var: NAVariable

    def leaves(self):
        return (self.var,)

    def key(self):
        return (0, self.var.slot, self.var.deriv)

    def __str__(self):
        return f"x{self.var.slot}" + "'" * self.var.deriv


@dataclass(frozen=True)
class Node:
    left: "Monomial"
    right: "Monomial"

    def leaves(self):
        return self.left.leaves() + self.right.leaves()

    def key(self):
        return (1, self.left.key(), self.right.key())

    def __str__(self):
        return f"({self.left} {self.right})"


Monomial = Union[Leaf, Node]


def var(slot: int, deriv: int = 0) -> Leaf:
    return Leaf(NAVariable(slot, deriv))


def mul(a: Monomial, b: Monomial) -> Node:
    return Node(a, b)


def _parse_signature(sig) -> Optional[tuple]:
    if sig is None:
        return None
    if isinstance(sig, str):
        table = {"e": 0, "o": 1, "*": None}
        try:
            return tuple(table[ch] for ch in sig)
        except KeyError:
            raise SpecError(
                f"bad parity signature {sig!r}; use characters e, o, *"
            ) from None
    return tuple(sig)


class NAPoly:
    """A rational linear combination of monomials sharing one arity.

    The optional parity signature marks the identity as graded: slots
    with parity 0 or 1 get parity projections, and factor permutations
    use graded flips.  Identities without a signature are classical and
    permute with plain flips.
    """

    __slots__ = ("_terms", "_arity", "_signature")

    def __init__(self, terms, signature=None, arity: Optional[int] = None):
        merged: dict = {}
        order: dict = {}
        for coeff, mono in terms:
            coeff = scalar(coeff)
            key = mono.key()
            order.setdefault(key, mono)
            merged[key] = merged.get(key, Fraction(0)) + coeff
        cleaned = tuple(
            (merged[k], order[k]) for k in sorted(merged) if merged[k]
        )
        slots = {v.slot for _, m in cleaned for v in m.leaves()}
        inferred = max(slots, default=0)
        object.__setattr__(self, "_terms", cleaned)
        object.__setattr__(self, "_arity", inferred if arity is None else arity)
        sig = _parse_signature(signature)
        if sig is not None and len(sig) != self._arity:
            raise SpecError(
                f"signature length {len(sig)} does not match arity {self._arity}"
            )
        object.__setattr__(self, "_signature", sig)

    @property
    def terms(self):
        return self._terms

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def signature(self) -> Optional[tuple]:
        return self._signature

    def is_multilinear(self) -> bool:
        expected = list(range(1, self._arity + 1))
        return all(
            sorted(v.slot for v in mono.leaves()) == expected
            for _, mono in self._terms
        )

    def with_signature(self, sig) -> "NAPoly":
        return NAPoly(self._terms, signature=sig, arity=self._arity)

    def slot_multiplicities(self) -> dict:
        """Per-slot occurrence count, which must agree across monomials."""
        counts = None
        for _, mono in self._terms:
            c: dict = {}
            for v in mono.leaves():
                c[v.slot] = c.get(v.slot, 0) + 1
            if counts is None:
                counts = c
            elif counts != c:
                raise SpecError(
                    "monomials have different slot multiplicities; "
                    "split the identity into multihomogeneous parts first"
                )
        return counts or {}

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NAPoly)
            and self._terms == other._terms
            and self._arity == other._arity
            and self._signature == other._signature
        )

    def __hash__(self) -> int:
        return hash((self._terms, self._arity, self._signature))

    def __add__(self, other: "NAPoly") -> "NAPoly":
        return NAPoly(
            list(self._terms) + list(other._terms),
            signature=self._signature,
            arity=max(self._arity, other._arity),
        )

    def __sub__(self, other: "NAPoly") -> "NAPoly":
        return self + (-other)

    def __neg__(self) -> "NAPoly":
        return self.scale(-1)

    def scale(self, c) -> "NAPoly":
        return NAPoly(
            [(coeff * scalar(c), m) for coeff, m in self._terms],
            signature=self._signature,
            arity=self._arity,
        )

    def __mul__(self, other: "NAPoly") -> "NAPoly":
        terms = [
            (ca * cb, Node(ma, mb))
            for ca, ma in self._terms
            for cb, mb in other._terms
        ]
        return NAPoly(terms, arity=max(self._arity, other._arity))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for coeff, mono in self._terms:
            mag = -coeff if coeff < 0 else coeff
            body = str(mono) if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"NAPoly({self})"


def poly(*terms, signature=None) -> NAPoly:
    """Build an NAPoly from (coeff, monomial) pairs or bare monomials."""
    pairs = []
    for t in terms:
        if isinstance(t, (Leaf, Node)):
            pairs.append((Fraction(1), t))
        else:
            pairs.append(t)
    return NAPoly(pairs, signature=signature)


def commutator(a: NAPoly, b: NAPoly) -> NAPoly:
    return a * b - b * a


@dataclass(frozen=True)
class CoidentityMap:
    """A sum of step compositions from the coalgebra to a tensor power.

    Steps, applied left to right to an arity-1 tensor:
      ("delta", pos, lreq, rreq)  replace factor pos by its comultiplication
      ("d", pos, req)             apply the coderivation to factor pos
      ("flip", pos, graded)       swap factors pos and pos + 1
      ("project", signature)      keep terms whose parities match the signature

    The req annotations are the parities each produced block must
    eventually have to survive the final projection (None when
    unconstrained).  On specs whose rules are parity-additive they allow
    terms to be discarded as soon as they are provably dead; the final
    projection stays in place either way, so the result is identical.
    """

    arity: int
    branches: tuple  # ((coeff, (step, ...)), ...)

    def apply(self, spec: CoalgebraSpec, v) -> FormalTensor:
        if not isinstance(v, FormalVector):
            v = FormalVector.unit(v)
        prune = spec.parity_additive
        start = {(label,): c for label, c in v.items()}
        total: dict = {}
        for coeff, steps in self.branches:
            t = start
            for step in steps:
                t = _apply_step(spec, t, step, prune)
                if not t:
                    break
            for key, c in t.items():
                s = total.get(key, 0) + coeff * c
                if s:
                    total[key] = s
                else:
                    del total[key]
        return FormalTensor(self.arity, total)

    def describe(self) -> str:
        rendered = []
        for coeff, steps in self.branches:
            names = []
            for step in steps:
                if step[0] == "delta":
                    names.append(f"delta@{step[1]}")
                elif step[0] == "d":
                    names.append(f"d@{step[1]}")
                elif step[0] == "flip":
                    names.append(("gflip@" if step[2] else "flip@") + str(step[1]))
                else:
                    sig = "".join(
                        "*" if p is None else ("o" if p else "e") for p in step[1]
                    )
                    names.append(f"project[{sig}]")
            body = " . ".join(reversed(names)) if names else "id"
            mag = -coeff if coeff < 0 else coeff
            if mag != 1:
                body = f"{mag}*{body}"
            rendered.append(("-" if coeff < 0 else ("+" if rendered else "")) + body)
        return " ".join(rendered) if rendered else "0"

    def __str__(self):
        return self.describe()


def _apply_step(spec, t: dict, step, prune: bool) -> dict:
    kind = step[0]
    if kind == "flip":
        i = step[1] - 1
        graded = step[2]
        out: dict = {}
        for key, c in t.items():
            swapped = key[:i] + (key[i + 1], key[i]) + key[i + 2 :]
            if graded and key[i].parity and key[i + 1].parity:
                c = -c
            s = out.get(swapped, 0) + c
            if s:
                out[swapped] = s
            else:
                del out[swapped]
        return out
    if kind == "project":
        sig = step[1]
        return {
            key: c
            for key, c in t.items()
            if all(p is None or key[j].parity == p for j, p in enumerate(sig))
        }
    pos = step[1] - 1
    out = {}
    if kind == "delta":
        lreq, rreq = (step[2], step[3]) if prune else (None, None)
        for key, c in t.items():
            for (l, r), c2 in delta(spec, key[pos]).items():
                if lreq is not None and l.parity != lreq:
                    continue
                if rreq is not None and r.parity != rreq:
                    continue
                new = key[:pos] + (l, r) + key[pos + 1 :]
                s = out.get(new, 0) + c * c2
                if s:
                    out[new] = s
                else:
                    del out[new]
        return out
    if kind == "d":
        req = step[2] if prune else None
        for key, c in t.items():
            for m, c2 in d_label(spec, key[pos]).items():
                if req is not None and m.parity != req:
                    continue
                new = key[:pos] + (m,) + key[pos + 1 :]
                s = out.get(new, 0) + c * c2
                if s:
                    out[new] = s
                else:
                    del out[new]
        return out
    raise SpecError(f"unknown coidentity step {step!r}")


def _block_requirement(mono: Monomial, sig) -> Optional[int]:
    """Parity the whole block must carry to survive the projection, or
    None when any of its leaves is unconstrained."""
    if sig is None:
        return None
    total = 0
    for v in mono.leaves():
        p = sig[v.slot - 1]
        if p is None:
            return None
        total += p
    return total % 2


def _build_steps(mono: Monomial, pos: int, sig) -> list:
    if isinstance(mono, Leaf):
        req = None if sig is None else sig[mono.var.slot - 1]
        return [("d", pos, req)] * mono.var.deriv
    left_width = len(mono.left.leaves())
    steps = [
        (
            "delta",
            pos,
            _block_requirement(mono.left, sig),
            _block_requirement(mono.right, sig),
        )
    ]
    steps += _build_steps(mono.left, pos, sig)
    steps += _build_steps(mono.right, pos + left_width, sig)
    return steps


def translate(p: NAPoly, koszul_pairing: bool = False) -> CoidentityMap:
    """Build the coidentity operator of a multilinear identity.

    For functionals a_1..a_k (homogeneous of the signature parities when
    graded, with primes realized as the transposed coderivation) and any
    element c, pairing a_1 (x) ... (x) a_k against the returned map at c
    equals the identity evaluated on the a_i at c in the dual algebra.
    """
    if not p.is_multilinear():
        raise SpecError(
            f"identity is not multilinear: {p}; linearize it first"
        )
    sig = p.signature
    graded_flips = sig is not None and not koszul_pairing
    branches = []
    for coeff, mono in p.terms:
        steps = _build_steps(mono, 1, sig)
        order = [v.slot for v in mono.leaves()]
        arr = list(order)
        sign = Fraction(1)
        # Bubble the factors from leaf order back to slot order; each
        # adjacent swap is a flip step.
        changed = True
        while changed:
            changed = False
            for j in range(len(arr) - 1):
                if arr[j] > arr[j + 1]:
                    if koszul_pairing and sig is not None:
                        pa = sig[arr[j] - 1] or 0
                        pb = sig[arr[j + 1] - 1] or 0
                        if pa and pb:
                            sign = -sign
                    steps.append(("flip", j + 1, graded_flips))
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    changed = True
        if sig is not None and any(s is not None for s in sig):
            steps.append(("project", sig))
        branches.append((coeff * sign, tuple(steps)))
    return CoidentityMap(arity=p.arity, branches=tuple(branches))


def check_identity(
    spec: CoalgebraSpec,
    p: NAPoly,
    max_index: int,
    koszul_pairing: bool = False,
    name: Optional[str] = None,
) -> CheckReport:
    """Verify that the coidentity of p vanishes on every label in range."""
    cmap = translate(p, koszul_pairing=koszul_pairing)
    witnesses = []
    for label in spec.labels_upto(max_index):
        residual = cmap.apply(spec, label)
        if residual:
            witnesses.append(Witness(str(label), str(residual)))
            if len(witnesses) >= MAX_WITNESSES:
                break
    return CheckReport(
        name=name or f"identity {p}",
        passed=not witnesses,
        checked=spec.checked_ranges(max_index),
        witnesses=tuple(witnesses),
    )


def linearize(p: NAPoly) -> NAPoly:
    """Full multilinearization of an identity with repeated slots.

    Each slot of multiplicity m is replaced by m fresh slots and the
    multilinear component is extracted, which over the rationals is
    equivalent to the original identity.  The input must be ungraded and
    multihomogeneous (every slot has the same multiplicity in every
    monomial).
    """
    if p.signature is not None:
        raise SpecError("linearize does not support graded identities")
    mult = p.slot_multiplicities()
    blocks: dict = {}
    next_slot = 1
    for slot in sorted(mult):
        blocks[slot] = list(range(next_slot, next_slot + mult[slot]))
        next_slot += mult[slot]
    out = []
    for coeff, mono in p.terms:
        leaves = mono.leaves()
        positions: dict = {}
        for idx, v in enumerate(leaves):
            positions.setdefault(v.slot, []).append(idx)
        slot_list = sorted(positions)
        for combo in itertools.product(
            *(itertools.permutations(blocks[s]) for s in slot_list)
        ):
            assignment: dict = {}
            for s, perm in zip(slot_list, combo):
                for idx, new_slot in zip(positions[s], perm):
                    assignment[idx] = new_slot
            counter = [0]
            out.append((coeff, _renumber(mono, assignment, counter)))
    return NAPoly(out, arity=next_slot - 1)


def _renumber(mono: Monomial, assignment: dict, counter: list) -> Monomial:
    if isinstance(mono, Leaf):
        idx = counter[0]
        counter[0] += 1
        return Leaf(NAVariable(assignment[idx], mono.var.deriv))
    left = _renumber(mono.left, assignment, counter)
    right = _renumber(mono.right, assignment, counter)
    return Node(left, right)


def substitute_slots(p: NAPoly, mapping: dict) -> NAPoly:
    """Rename slots (possibly merging them); used to validate linearize."""

    def rename(m: Monomial) -> Monomial:
        if isinstance(m, Leaf):
            return Leaf(NAVariable(mapping.get(m.var.slot, m.var.slot), m.var.deriv))
        return Node(rename(m.left), rename(m.right))

    return NAPoly([(c, rename(m)) for c, m in p.terms])


def _associator(a: int, b: int, c: int) -> NAPoly:
    x, y, z = var(a), var(b), var(c)
    return poly(mul(mul(x, y), z), (-1, mul(x, mul(y, z))))


def builtin_identities() -> dict:
    """The named identity catalog, every entry multilinear with exact
    rational coefficients."""
    x1, x2, x3, x4 = var(1), var(2), var(3), var(4)
    catalog = {}
    catalog["associativity"] = _associator(1, 2, 3)
    catalog["commutativity"] = poly(mul(x1, x2), (-1, mul(x2, x1)))
    catalog["anticommutativity"] = poly(mul(x1, x2), mul(x2, x1))
    catalog["jacobi"] = poly(
        mul(mul(x1, x2), x3), mul(mul(x2, x3), x1), mul(mul(x3, x1), x2)
    )
    catalog["left-symmetry"] = _associator(1, 2, 3) - _associator(2, 1, 3)
    catalog["novikov-right-commutativity"] = poly(
        mul(mul(x1, x2), x3), (-1, mul(mul(x1, x3), x2))
    )
    # (y, x, x) = 0, fully linearized.
    catalog["right-alternativity-linearized"] = linearize(
        poly(mul(mul(x1, x2), x2), (-1, mul(x1, mul(x2, x2))))
    )
    # ((x y) z) y = x ((y z) y), linearized in y.
    catalog["moufang-linearized"] = linearize(
        poly(
            mul(mul(mul(x1, x2), x3), x2),
            (-1, mul(x1, mul(mul(x2, x3), x2))),
        )
    )
    # (x^2 y) x = x^2 (y x), linearized in x.
    catalog["jordan-linearized"] = linearize(
        poly(
            mul(mul(mul(x1, x1), x2), x1),
            (-1, mul(mul(x1, x1), mul(x2, x1))),
        )
    )
    catalog["supercommutativity"] = poly(
        mul(x1, x2), (-1, mul(x2, x1)), signature=(None, None)
    )
    catalog["(xy)z"] = poly(mul(mul(x1, x2), x3))
    catalog["((xy)z)t"] = poly(mul(mul(mul(x1, x2), x3), x4))
    catalog["(xy)(zt)"] = poly(mul(mul(x1, x2), mul(x3, x4)))
    catalog["[[x,y],[z,t]]"] = commutator(
        poly(mul(x1, x2), (-1, mul(x2, x1))),
        poly(mul(x3, x4), (-1, mul(x4, x3))),
    )
    catalog["x'y'"] = poly(mul(var(1, 1), var(2, 1)))
    return catalog


def requires_coderivation(p: NAPoly) -> bool:
    return any(v.deriv for _, m in p.terms for v in m.leaves())
