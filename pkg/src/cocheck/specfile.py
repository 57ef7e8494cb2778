"""Reading and writing coalgebra specs as JSON files.

Top-level keys: `field` (must be "Q"), `families`, `delta`, optional
`coderivation`, `shift_bound`, and optional `name`, `graded`,
`coderivation_max_index`, `description`.  Index expressions and
coefficients are strings in the rule DSL ("n - i + 1"); summation terms
carry "sum_to" with the upper bound "n + c"; guards are written
{"mod": m, "rem": r} or {"eq": k}.  Syntax errors report line and
column; schema errors report the offending key path.
"""
from __future__ import annotations

import json
from typing import Optional

from .coalgebra import CoalgebraSpec, FamilyDecl
from .errors import EngineError, SpecFileError
from .rules import (
    AffineIndex,
    DeltaTerm,
    DerivTerm,
    Guard,
    IndexPoly,
)

FORMAT_FIELD = "Q"


def loads_spec(text: str, source: str = "<string>") -> CoalgebraSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(
            f"invalid JSON in {source}: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from None
    return spec_from_dict(data, source=source)


def load_spec(path) -> CoalgebraSpec:
    with open(path, "r", encoding="utf-8") as handle:
        return loads_spec(handle.read(), source=str(path))


def dumps_spec(spec: CoalgebraSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_spec(spec: CoalgebraSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_spec(spec))


class _Reader:
    """Walks parsed JSON tracking the key path for error messages."""

    def __init__(self, data, path):
        self.data = data
        self.path = path

    def fail(self, message):
        raise SpecFileError(message, key=self.path)

    def require(self, key):
        if not isinstance(self.data, dict) or key not in self.data:
            self.fail(f"missing required key {key!r}")
        return _Reader(self.data[key], f"{self.path}.{key}")

    def optional(self, key, default=None):
        if isinstance(self.data, dict) and key in self.data:
            return _Reader(self.data[key], f"{self.path}.{key}")
        return _Reader(default, f"{self.path}.{key}")

    def as_str(self):
        if not isinstance(self.data, str):
            self.fail("expected a string")
        return self.data

    def as_int(self):
        if not isinstance(self.data, int) or isinstance(self.data, bool):
            self.fail("expected an integer")
        return self.data

    def as_bool(self):
        if not isinstance(self.data, bool):
            self.fail("expected a boolean")
        return self.data

    def as_list(self):
        if not isinstance(self.data, list):
            self.fail("expected a list")
        return [
            _Reader(item, f"{self.path}[{idx}]") for idx, item in enumerate(self.data)
        ]

    def as_dict(self):
        if not isinstance(self.data, dict):
            self.fail("expected an object")
        return self.data


def spec_from_dict(data, source: str = "<dict>") -> CoalgebraSpec:
    root = _Reader(data, "$")
    root.as_dict()
    field = root.require("field").as_str()
    if field != FORMAT_FIELD:
        root.require("field").fail(f'field must be "{FORMAT_FIELD}"')

    families = []
    for fam in root.require("families").as_list():
        fam.as_dict()
        name = fam.require("name").as_str()
        parity = fam.optional("parity", 0).as_int()
        rng = fam.require("range").as_list()
        if len(rng) != 2:
            fam.require("range").fail("range must be [lo, hi] with hi null for infinite")
        lo = rng[0].as_int()
        hi = None if rng[1].data is None else rng[1].as_int()
        try:
            families.append(FamilyDecl(name=name, parity=parity, lo=lo, hi=hi))
        except EngineError as exc:
            fam.fail(str(exc))

    delta = {}
    for entry in root.require("delta").as_list():
        entry.as_dict()
        fam = entry.require("family").as_str()
        terms = [_read_delta_term(t) for t in entry.require("terms").as_list()]
        delta.setdefault(fam, []).extend(terms)

    coderivation = None
    if isinstance(root.data, dict) and "coderivation" in root.data:
        coderivation = {}
        for entry in root.require("coderivation").as_list():
            entry.as_dict()
            fam = entry.require("family").as_str()
            terms = [_read_deriv_term(t) for t in entry.require("terms").as_list()]
            coderivation.setdefault(fam, []).extend(terms)

    shift = root.optional("shift_bound", 0)
    shift_bound = shift.as_int() if shift.data is not None else 0
    graded = root.optional("graded", False)
    graded_flag = graded.as_bool() if graded.data is not None else False
    d_max = root.optional("coderivation_max_index", None)
    d_max_val = d_max.as_int() if d_max.data is not None else None
    name = root.optional("name", None)
    name_val = name.as_str() if name.data is not None else source
    desc = root.optional("description", None)
    desc_val = desc.as_str() if desc.data is not None else ""

    try:
        return CoalgebraSpec(
            name=name_val,
            families=tuple(families),
            delta=delta,
            coderivation=coderivation,
            shift_bound=shift_bound,
            graded=graded_flag,
            coderivation_max_index=d_max_val,
            description=desc_val,
        )
    except EngineError as exc:
        raise SpecFileError(str(exc), key="$") from None


def _read_guard(reader) -> Optional[Guard]:
    if reader.data is None:
        return None
    reader.as_dict()
    if "eq" in reader.data:
        return Guard.eq(reader.require("eq").as_int())
    if "mod" in reader.data:
        return Guard.mod(reader.require("mod").as_int(), reader.require("rem").as_int())
    reader.fail('guard must carry "eq" or "mod"/"rem"')


def _read_poly(reader) -> IndexPoly:
    text = reader.as_str()
    try:
        return IndexPoly.parse(text)
    except EngineError as exc:
        reader.fail(str(exc))


def _read_affine(reader) -> AffineIndex:
    text = reader.as_str()
    try:
        return AffineIndex.parse(text)
    except EngineError as exc:
        reader.fail(str(exc))


def _read_pair(reader):
    items = reader.as_list()
    if len(items) != 2:
        reader.fail("expected [family, index-expression]")
    return items[0].as_str(), _read_affine(items[1])


def _read_sum_to(reader) -> Optional[int]:
    if reader.data is None:
        return None
    affine = _read_affine(reader)
    if affine.n != 1 or affine.i != 0:
        reader.fail('summation upper bound must have the form "n + c"')
    return affine.const


def _read_delta_term(reader) -> DeltaTerm:
    reader.as_dict()
    for key in reader.data:
        if key not in ("coeff", "left", "right", "sum_to", "when"):
            _Reader(None, f"{reader.path}.{key}").fail("unknown key in delta term")
    lf, li = _read_pair(reader.require("left"))
    rf, ri = _read_pair(reader.require("right"))
    return DeltaTerm(
        coeff=_read_poly(reader.require("coeff")),
        left_family=lf,
        left_index=li,
        right_family=rf,
        right_index=ri,
        sum_upper=_read_sum_to(reader.optional("sum_to")),
        guard=_read_guard(reader.optional("when")),
    )


def _read_deriv_term(reader) -> DerivTerm:
    reader.as_dict()
    for key in reader.data:
        if key not in ("coeff", "target", "when"):
            _Reader(None, f"{reader.path}.{key}").fail("unknown key in coderivation term")
    fam, idx = _read_pair(reader.require("target"))
    try:
        return DerivTerm(
            coeff=_read_poly(reader.require("coeff")),
            family=fam,
            index=idx,
            guard=_read_guard(reader.optional("when")),
        )
    except EngineError as exc:
        reader.fail(str(exc))


def _guard_to_json(guard: Optional[Guard]):
    if guard is None:
        return None
    if guard.exact is not None:
        return {"eq": guard.exact}
    return {"mod": guard.modulus, "rem": guard.residue}


def spec_to_dict(spec: CoalgebraSpec) -> dict:
    out = {
        "field": FORMAT_FIELD,
        "name": spec.name,
        "families": [
            {
                "name": f.name,
                "parity": f.parity,
                "range": [f.lo, f.hi],
            }
            for f in spec.families
        ],
        "shift_bound": spec.shift_bound,
        "delta": [
            {
                "family": fam,
                "terms": [_delta_term_to_json(t) for t in terms],
            }
            for fam, terms in sorted(spec.delta.items())
        ],
    }
    if spec.graded:
        out["graded"] = True
    if spec.description:
        out["description"] = spec.description
    if spec.coderivation is not None:
        out["coderivation"] = [
            {
                "family": fam,
                "terms": [_deriv_term_to_json(t) for t in terms],
            }
            for fam, terms in sorted(spec.coderivation.items())
        ]
    if spec.coderivation_max_index is not None:
        out["coderivation_max_index"] = spec.coderivation_max_index
    return out


def _delta_term_to_json(t: DeltaTerm) -> dict:
    out = {
        "coeff": str(t.coeff),
        "left": [t.left_family, str(t.left_index)],
        "right": [t.right_family, str(t.right_index)],
    }
    if t.sum_upper is not None:
        out["sum_to"] = str(AffineIndex(n=1, const=t.sum_upper))
    if t.guard is not None:
        out["when"] = _guard_to_json(t.guard)
    return out


def _deriv_term_to_json(t: DerivTerm) -> dict:
    out = {
        "coeff": str(t.coeff),
        "target": [t.family, str(t.index)],
    }
    if t.guard is not None:
        out["when"] = _guard_to_json(t.guard)
    return out
