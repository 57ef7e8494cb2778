from fractions import Fraction

import dataclasses
import pytest
from hypothesis import given, strategies as st

from cocheck import (
    CoalgebraSpec,
    FamilyDecl,
    FormalTensor,
    FormalVector,
    RangeError,
    SpecError,
    apply_d,
    builtin,
    cocommutativity_check,
    coderivation_check,
    delta,
    delta_linear,
    validate_shift_bound,
)
from cocheck.rules import deriv_term
from conftest import vec


@pytest.fixture(scope="module")
def specs():
    return {name: builtin(name) for name in
            ["example1", "example2", "example3", "example4", "example5",
             "example6", "example7", "example8", "example9"]}


def T(spec, pairs):
    """Expected arity-2 tensor from ((family, idx, family, idx), coeff)."""
    return FormalTensor(
        2,
        {
            (spec.label(lf, li), spec.label(rf, ri)): Fraction(c)
            for (lf, li, rf, ri), c in pairs.items()
        },
    )


# Closed formulas written out independently of the rule DSL, used as
# oracles for every builtin example on indices 0..30.
def expected_delta(name, spec, fam, n):
    if name == "example1":
        if fam == "e":
            return T(spec, {("e", 0, "e", 0): 1})
        return T(spec, {("f", n, "e", 0): 1, ("e", 0, "f", n): 1})
    if name == "example2":
        if fam == "e":
            return FormalTensor(2)
        return T(spec, {("e", 0, "f", n + 1): 1})
    if name == "example3":
        if fam == "e":
            return FormalTensor(2)
        return T(spec, {("e", 0, "f", n + 1): 1, ("f", n + 1, "e", 0): -1})
    if name == "example4":
        return T(spec, {("x", i, "x", n - i): 1 for i in range(n + 1)})
    if name == "example5":
        return T(spec, {("x", i, "x", n - i + 1): n - i + 1 for i in range(n + 1)})
    if name == "example6":
        return T(
            spec,
            {
                ("x", i, "x", n + 1 - i): n + 1 - 2 * i
                for i in range(n + 2)
                if n + 1 - 2 * i
            },
        )
    if name == "example7":
        if fam == "e":
            return T(spec, {("e", 0, "e", 0): 1})
        if fam == "~e":
            return T(spec, {("e", 0, "~e", 0): 1, ("~e", 0, "e", 0): 1})
        if fam == "f":
            return T(
                spec,
                {
                    ("e", 0, "f", n): 1,
                    ("f", n, "e", 0): 1,
                    ("~e", 0, "~f", n + 1): 1,
                    ("~f", n + 1, "~e", 0): -1,
                },
            )
        return T(
            spec,
            {
                ("e", 0, "~f", n): 1,
                ("~f", n, "e", 0): 1,
                ("~e", 0, "f", n): 1,
                ("f", n, "~e", 0): 1,
            },
        )
    if name == "example8":
        if fam == "x":
            even = {("x", i, "x", n - i): 1 for i in range(n + 1)}
            odd = {
                ("~x", i, "~x", n - i + 1): n + 1 - 2 * i
                for i in range(n + 2)
                if n + 1 - 2 * i
            }
            return T(spec, {**even, **odd})
        return T(
            spec,
            {
                **{("~x", i, "x", n - i): 1 for i in range(n + 1)},
                **{("x", i, "~x", n - i): 1 for i in range(n + 1)},
            },
        )
    if name == "example9":
        if fam in ("e1", "e2"):
            return FormalTensor(2)
        if n % 3 == 1:
            return T(spec, {("e1", 0, "f", n + 2): 1})
        if n % 3 == 2:
            return T(spec, {("e2", 0, "f", n + 1): 1})
        return T(
            spec,
            {
                ("e2", 0, "f", n + 1): 1,
                ("f", n + 1, "e2", 0): -1,
                ("e1", 0, "f", n + 2): -1,
                ("f", n + 2, "e1", 0): 1,
            },
        )
    raise AssertionError(name)


class TestDeltaExamples:
    def test_example1_values(self, specs):
        ex1 = specs["example1"]
        assert str(delta(ex1, ex1.label("e", 0))) == "e:0⊗e:0"
        assert str(delta(ex1, ex1.label("f", 3))) == "e:0⊗f:3 + f:3⊗e:0"

    def test_example4_value(self, specs):
        ex4 = specs["example4"]
        assert delta(ex4, ex4.label("x", 3)) == T(
            ex4, {("x", 0, "x", 3): 1, ("x", 1, "x", 2): 1,
                  ("x", 2, "x", 1): 1, ("x", 3, "x", 0): 1}
        )

    def test_example9_values(self, specs):
        ex9 = specs["example9"]
        assert delta(ex9, ex9.label("f", 1)) == T(ex9, {("e1", 0, "f", 3): 1})
        assert delta(ex9, ex9.label("f", 3)) == T(
            ex9,
            {
                ("e2", 0, "f", 4): 1,
                ("f", 4, "e2", 0): -1,
                ("e1", 0, "f", 5): -1,
                ("f", 5, "e1", 0): 1,
            },
        )

    def test_example6_value_at_zero(self, specs):
        ex6 = specs["example6"]
        assert delta(ex6, ex6.label("x", 0)) == T(
            ex6, {("x", 0, "x", 1): 1, ("x", 1, "x", 0): -1}
        )

    @pytest.mark.parametrize("name", [f"example{k}" for k in range(1, 10)])
    def test_matches_closed_formulas_to_30(self, specs, name):
        spec = specs[name]
        for decl in spec.families:
            hi = 30 if decl.hi is None else min(decl.hi, 30)
            for n in range(decl.lo, hi + 1):
                label = spec.label(decl.name, n)
                assert delta(spec, label) == expected_delta(
                    name, spec, decl.name, n
                ), f"{name} delta({label})"

    def test_rule_evaluation_pure(self, specs):
        ex5 = specs["example5"]
        l = ex5.label("x", 7)
        assert delta(ex5, l) == delta(ex5, l)

    def test_out_of_range_label(self, specs):
        with pytest.raises(RangeError):
            delta(specs["example1"], specs["example1"].label("f", 1).__class__("f", 0, 0))


class TestLinearity:
    def test_delta_linear_zero(self, specs):
        assert not delta_linear(specs["example1"], FormalVector())

    def test_delta_linear_difference(self, specs):
        ex2 = specs["example2"]
        v = vec((ex2.label("f", 1), 1), (ex2.label("f", 2), -1))
        assert delta_linear(ex2, v) == T(
            ex2, {("e", 0, "f", 2): 1, ("e", 0, "f", 3): -1}
        )

    def test_delta_linear_scaling(self, specs):
        ex1 = specs["example1"]
        v = vec((ex1.label("e", 0), 2))
        assert delta_linear(ex1, v) == T(ex1, {("e", 0, "e", 0): 2})

    @given(
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        st.integers(1, 8),
        st.integers(1, 8),
    )
    def test_delta_linearity_random(self, a, b, i, j):
        ex4 = builtin("example4")
        u = vec((ex4.label("x", i), 1))
        v = vec((ex4.label("x", j), 1))
        lhs = delta_linear(ex4, u.scale(a) + v.scale(b))
        rhs = delta_linear(ex4, u).scale(a) + delta_linear(ex4, v).scale(b)
        assert lhs == rhs


class TestCoderivation:
    def test_apply_d_values(self, specs):
        ex1, ex4 = specs["example1"], specs["example4"]
        assert apply_d(ex1, ex1.label("f", 5)) == vec((ex1.label("f", 6), 1))
        assert apply_d(ex1, ex1.label("e", 0)) == FormalVector()
        assert apply_d(ex4, ex4.label("x", 2)) == vec((ex4.label("x", 3), 3))

    def test_apply_d_requires_coderivation(self, specs):
        with pytest.raises(SpecError):
            apply_d(specs["example2"], specs["example2"].label("f", 1))

    def test_coderivation_check_passes(self, specs):
        assert coderivation_check(specs["example1"], 50).passed
        assert coderivation_check(specs["example4"], 50).passed

    def test_coderivation_check_to_100(self, specs):
        assert coderivation_check(specs["example1"], 100).passed
        assert coderivation_check(specs["example4"], 100).passed

    def test_mutated_d_fails_with_witness(self, specs):
        ex1 = specs["example1"]
        broken = dataclasses.replace(
            ex1,
            name="example1-broken-d",
            coderivation={
                "e": [deriv_term(1, ("e", 0))],
                "f": [deriv_term(1, ("f", "n + 1"))],
            },
        )
        report = coderivation_check(broken, 10)
        assert not report.passed
        assert report.witnesses[0].subject == "e:0"
        # delta(d(e)) - (d(x)id + id(x)d) delta(e) = e(x)e - 2 e(x)e
        assert report.witnesses[0].residual == "-e:0⊗e:0"


class TestCocommutativity:
    def test_example1_passes(self, specs):
        assert cocommutativity_check(specs["example1"], 50).passed

    def test_example2_fails_with_witness(self, specs):
        report = cocommutativity_check(specs["example2"], 20)
        assert not report.passed
        w = report.witnesses[0]
        assert w.subject == "f:1"
        assert w.residual == "e:0⊗f:2 - f:2⊗e:0"

    def test_example7_graded_passes_plain_fails(self, specs):
        ex7 = specs["example7"]
        assert cocommutativity_check(ex7, 20, graded=True).passed
        assert not cocommutativity_check(ex7, 20, graded=False).passed

    def test_example4_passes(self, specs):
        assert cocommutativity_check(specs["example4"], 50).passed


class TestShiftBound:
    def test_example1_bound_one(self, specs):
        assert validate_shift_bound(specs["example1"], 40).passed

    def test_example9_bound_two(self, specs):
        assert validate_shift_bound(specs["example9"], 40).passed

    def test_example9_bound_one_fails(self, specs):
        tight = dataclasses.replace(specs["example9"], shift_bound=1)
        assert not validate_shift_bound(tight, 20).passed

    def test_example4_zero_declared_fails(self, specs):
        bad = dataclasses.replace(specs["example4"], shift_bound=0)
        report = validate_shift_bound(bad, 20)
        assert not report.passed
        assert "d image" in report.witnesses[0].residual

    @pytest.mark.parametrize("name", [f"example{k}" for k in range(1, 10)])
    def test_all_builtins_validate(self, specs, name):
        assert validate_shift_bound(specs[name], 40).passed


class TestSpecValidation:
    def test_duplicate_family_names(self):
        with pytest.raises(SpecError):
            CoalgebraSpec(
                name="dup",
                families=(FamilyDecl("a"), FamilyDecl("a")),
                delta={},
            )

    def test_rule_must_target_declared_family(self):
        from cocheck.rules import delta_term

        with pytest.raises(SpecError):
            CoalgebraSpec(
                name="bad",
                families=(FamilyDecl("a"),),
                delta={"a": [delta_term(1, ("a", "n"), ("b", "n"))]},
            )

    def test_labels_upto_order(self, specs):
        ex9 = specs["example9"]
        labels = ex9.labels_upto(2)
        assert [str(l) for l in labels] == ["e1:0", "e2:0", "f:1", "f:2"]
