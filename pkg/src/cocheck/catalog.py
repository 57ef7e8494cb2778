"""Registry of builtin coalgebras and graded algebras.

Each entry records its construction lineage, so `list-examples` can show
where a spec comes from.  The registered rules are written out directly;
tests verify that the construction operators reproduce them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .coalgebra import CoalgebraSpec, FamilyDecl
from .constructions import GradedAlgebraSpec
from .errors import SpecError
from .rules import Guard, delta_term, deriv_term


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    kind: str  # "coalgebra" | "graded-algebra"
    factory: Callable
    description: str
    lineage: str


def _example1() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example1",
        families=(FamilyDecl("e", hi=0), FamilyDecl("f", lo=1)),
        delta={
            "e": [delta_term(1, ("e", 0), ("e", 0))],
            "f": [delta_term(1, ("f", "n"), ("e", 0)), delta_term(1, ("e", 0), ("f", "n"))],
        },
        coderivation={
            "e": [],
            "f": [deriv_term(1, ("f", "n + 1"))],
        },
        shift_bound=1,
        description=(
            "cocommutative, coassociative differential coalgebra on e, f_1, f_2, ...;"
            " d(e) = 0, d(f_n) = f_{n+1}"
        ),
    )


def _example2() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example2",
        families=(FamilyDecl("e", hi=0), FamilyDecl("f", lo=1)),
        delta={
            "e": [],
            "f": [delta_term(1, ("e", 0), ("f", "n + 1"))],
        },
        shift_bound=1,
        description="Novikov coalgebra with delta(e) = 0, delta(f_n) = e (x) f_{n+1}",
    )


def _example3() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example3",
        families=(FamilyDecl("e", hi=0), FamilyDecl("f", lo=1)),
        delta={
            "e": [],
            "f": [
                delta_term(1, ("e", 0), ("f", "n + 1")),
                delta_term(-1, ("f", "n + 1"), ("e", 0)),
            ],
        },
        shift_bound=1,
        description=(
            "Lie coalgebra with delta(e) = 0,"
            " delta(f_n) = e (x) f_{n+1} - f_{n+1} (x) e"
        ),
    )


def _example4() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example4",
        families=(FamilyDecl("x"),),
        delta={"x": [delta_term(1, ("x", "i"), ("x", "n - i"), sum_upper=0)]},
        coderivation={"x": [deriv_term("n + 1", ("x", "n + 1"))]},
        shift_bound=1,
        description=(
            "simple differential coalgebra on x_0, x_1, ...:"
            " delta(x_n) = sum_i x_i (x) x_{n-i}, d(x_n) = (n+1) x_{n+1}"
        ),
    )


def _example5() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example5",
        families=(FamilyDecl("x"),),
        delta={
            "x": [delta_term("n - i + 1", ("x", "i"), ("x", "n - i + 1"), sum_upper=0)]
        },
        shift_bound=1,
        description=(
            "simple Novikov coalgebra:"
            " delta(x_n) = sum_i (n-i+1) x_i (x) x_{n-i+1}"
        ),
    )


def _example6() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example6",
        families=(FamilyDecl("x"),),
        delta={
            "x": [
                delta_term(
                    "n + 1 - 2*i", ("x", "i"), ("x", "n + 1 - i"), sum_upper=1
                )
            ]
        },
        shift_bound=1,
        description=(
            "simple Lie coalgebra:"
            " delta(x_n) = sum_{i<=n+1} (n+1-2i) x_i (x) x_{n+1-i}"
        ),
    )


def _example7() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example7",
        families=(
            FamilyDecl("e", hi=0),
            FamilyDecl("f", lo=1),
            FamilyDecl("~e", parity=1, hi=0),
            FamilyDecl("~f", parity=1, lo=1),
        ),
        delta={
            "e": [delta_term(1, ("e", 0), ("e", 0))],
            "f": [
                delta_term(1, ("e", 0), ("f", "n")),
                delta_term(1, ("f", "n"), ("e", 0)),
                delta_term(1, ("~e", 0), ("~f", "n + 1")),
                delta_term(-1, ("~f", "n + 1"), ("~e", 0)),
            ],
            "~e": [delta_term(1, ("e", 0), ("~e", 0)), delta_term(1, ("~e", 0), ("e", 0))],
            "~f": [
                delta_term(1, ("e", 0), ("~f", "n")),
                delta_term(1, ("~f", "n"), ("e", 0)),
                delta_term(1, ("~e", 0), ("f", "n")),
                delta_term(1, ("f", "n"), ("~e", 0)),
            ],
        },
        shift_bound=2,
        graded=True,
        description=(
            "Jordan super-coalgebra doubling e, f_1, ... with odd copies ~e, ~f_1, ..."
        ),
    )


def _example8() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example8",
        families=(FamilyDecl("x"), FamilyDecl("~x", parity=1)),
        delta={
            "x": [
                delta_term(1, ("x", "i"), ("x", "n - i"), sum_upper=0),
                delta_term(
                    "n + 1 - 2*i", ("~x", "i"), ("~x", "n - i + 1"), sum_upper=1
                ),
            ],
            "~x": [
                delta_term(1, ("~x", "i"), ("x", "n - i"), sum_upper=0),
                delta_term(1, ("x", "i"), ("~x", "n - i"), sum_upper=0),
            ],
        },
        shift_bound=2,
        graded=True,
        description=(
            "simple Jordan super-coalgebra on x_0, x_1, ... and odd ~x_0, ~x_1, ..."
        ),
    )


def _example9() -> CoalgebraSpec:
    return CoalgebraSpec(
        name="example9",
        families=(
            FamilyDecl("e1", hi=0),
            FamilyDecl("e2", hi=0),
            FamilyDecl("f", lo=1),
        ),
        delta={
            "e1": [],
            "e2": [],
            "f": [
                delta_term(1, ("e1", 0), ("f", "n + 2"), guard=Guard.mod(3, 1)),
                delta_term(1, ("e2", 0), ("f", "n + 1"), guard=Guard.mod(3, 2)),
                delta_term(1, ("e2", 0), ("f", "n + 1"), guard=Guard.mod(3, 0)),
                delta_term(-1, ("f", "n + 1"), ("e2", 0), guard=Guard.mod(3, 0)),
                delta_term(-1, ("e1", 0), ("f", "n + 2"), guard=Guard.mod(3, 0)),
                delta_term(1, ("f", "n + 2"), ("e1", 0), guard=Guard.mod(3, 0)),
            ],
        },
        shift_bound=2,
        description=(
            "right-alternative coalgebra on e_1, e_2, f_1, f_2, ... whose rule"
            " follows the index class of n mod 3"
        ),
    )


def _fx_diff_algebra(horizon: int = 64) -> GradedAlgebraSpec:
    if horizon < 1:
        raise SpecError("fx-diff-algebra horizon must be at least 1")
    dims = {k: 1 for k in range(horizon + 1)}
    products = {
        ((i, 0), (j, 0)): (((i + j, 0), 1),)
        for i in range(horizon + 1)
        for j in range(horizon + 1)
        if i + j <= horizon
    }
    derivation = {(m, 0): (((m - 1, 0), m),) for m in range(1, horizon + 1)}
    derivation[(0, 0)] = ()
    return GradedAlgebraSpec(
        name="fx-diff-algebra",
        dims=dims,
        products=products,
        derivation=derivation,
        dual_family="x",
        description=(
            f"one-variable polynomial differential algebra, degrees 0..{horizon},"
            " with the degree-lowering derivation"
        ),
    )


_REGISTRY = {
    "example1": RegistryEntry(
        "example1", "coalgebra", _example1, _example1().description, "registered directly"
    ),
    "example2": RegistryEntry(
        "example2", "coalgebra", _example2, _example2().description,
        "gelfand-dorfman(example1)",
    ),
    "example3": RegistryEntry(
        "example3", "coalgebra", _example3, _example3().description,
        "antisymmetrize(example2)",
    ),
    "example4": RegistryEntry(
        "example4", "coalgebra", _example4, _example4().description,
        "graded-dual(fx-diff-algebra)",
    ),
    "example5": RegistryEntry(
        "example5", "coalgebra", _example5, _example5().description,
        "gelfand-dorfman(example4)",
    ),
    "example6": RegistryEntry(
        "example6", "coalgebra", _example6, _example6().description,
        "antisymmetrize(example5)",
    ),
    "example7": RegistryEntry(
        "example7", "coalgebra", _example7, _example7().description, "kantor(example1)"
    ),
    "example8": RegistryEntry(
        "example8", "coalgebra", _example8, _example8().description, "kantor(example4)"
    ),
    "example9": RegistryEntry(
        "example9", "coalgebra", _example9, _example9().description, "registered directly"
    ),
    "fx-diff-algebra": RegistryEntry(
        "fx-diff-algebra", "graded-algebra", _fx_diff_algebra,
        _fx_diff_algebra(2).description.replace("0..2", "0..horizon"),
        "registered directly",
    ),
}


def builtin(name: str, **params) -> Union[CoalgebraSpec, GradedAlgebraSpec]:
    """Instantiate a registered example by name."""
    try:
        entry = _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise SpecError(f"unknown builtin {name!r}; known names: {known}") from None
    return entry.factory(**params)


def list_examples() -> tuple:
    return tuple(_REGISTRY[name] for name in sorted(_REGISTRY))
