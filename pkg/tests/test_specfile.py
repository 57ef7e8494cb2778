import json

import pytest

from cocheck import (
    SpecFileError,
    builtin,
    delta,
    dumps_spec,
    load_spec,
    loads_spec,
    save_spec,
)

NAMES = [f"example{k}" for k in range(1, 10)]


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_preserves_rules(name):
    spec = builtin(name)
    reparsed = loads_spec(dumps_spec(spec))
    assert reparsed.same_rules(spec)
    assert reparsed.shift_bound == spec.shift_bound


@pytest.mark.parametrize("name", ["example1", "example6", "example9"])
def test_round_trip_evaluates_identically(name, tmp_path):
    spec = builtin(name)
    path = tmp_path / f"{name}.json"
    save_spec(spec, path)
    reparsed = load_spec(path)
    for label in spec.labels_upto(30):
        assert delta(reparsed, label) == delta(spec, label)


def test_minimal_spec_parses():
    text = json.dumps(
        {
            "field": "Q",
            "families": [{"name": "u", "range": [0, 0]}],
            "delta": [
                {
                    "family": "u",
                    "terms": [
                        {"coeff": "1", "left": ["u", "0"], "right": ["u", "0"]}
                    ],
                }
            ],
        }
    )
    spec = loads_spec(text)
    label = spec.label("u", 0)
    assert str(delta(spec, label)) == "u:0⊗u:0"


def test_syntax_error_cites_line_and_column():
    with pytest.raises(SpecFileError) as err:
        loads_spec('{\n  "field": "Q",\n  "families": [}\n}')
    assert err.value.line == 3
    assert err.value.column is not None


def test_missing_key_cites_path():
    with pytest.raises(SpecFileError) as err:
        loads_spec('{"field": "Q", "families": []}')
    assert err.value.key == "$"
    assert "delta" in str(err.value)


def test_wrong_field_rejected():
    with pytest.raises(SpecFileError) as err:
        loads_spec('{"field": "R", "families": [], "delta": []}')
    assert err.value.key == "$.field"


def test_bad_term_key_cited():
    text = json.dumps(
        {
            "field": "Q",
            "families": [{"name": "u", "range": [0, None]}],
            "delta": [
                {
                    "family": "u",
                    "terms": [
                        {
                            "coeff": "1",
                            "left": ["u", "n"],
                            "right": ["u", "n"],
                            "bogus": 1,
                        }
                    ],
                }
            ],
        }
    )
    with pytest.raises(SpecFileError) as err:
        loads_spec(text)
    assert "bogus" in str(err.value)


def test_bad_expression_cited():
    text = json.dumps(
        {
            "field": "Q",
            "families": [{"name": "u", "range": [0, None]}],
            "delta": [
                {
                    "family": "u",
                    "terms": [
                        {"coeff": "1", "left": ["u", "n*n"], "right": ["u", "n"]}
                    ],
                }
            ],
        }
    )
    with pytest.raises(SpecFileError) as err:
        loads_spec(text)
    assert "left" in err.value.key


def test_sum_upper_must_be_affine_in_n():
    text = json.dumps(
        {
            "field": "Q",
            "families": [{"name": "u", "range": [0, None]}],
            "delta": [
                {
                    "family": "u",
                    "terms": [
                        {
                            "coeff": "1",
                            "left": ["u", "i"],
                            "right": ["u", "n - i"],
                            "sum_to": "2*n",
                        }
                    ],
                }
            ],
        }
    )
    with pytest.raises(SpecFileError) as err:
        loads_spec(text)
    assert "sum_to" in err.value.key


def test_undeclared_family_in_rule():
    text = json.dumps(
        {
            "field": "Q",
            "families": [{"name": "u", "range": [0, None]}],
            "delta": [
                {
                    "family": "u",
                    "terms": [
                        {"coeff": "1", "left": ["w", "n"], "right": ["u", "n"]}
                    ],
                }
            ],
        }
    )
    with pytest.raises(SpecFileError):
        loads_spec(text)


def test_guard_round_trip():
    spec = builtin("example9")
    data = json.loads(dumps_spec(spec))
    f_entry = next(e for e in data["delta"] if e["family"] == "f")
    guards = [t.get("when") for t in f_entry["terms"]]
    assert {"mod": 3, "rem": 1} in guards
