import copy
import json

import pytest

from rwmb import io
from rwmb.base import compute_base
from rwmb.core import check_rwmb, dualize
from rwmb.linalg import FieldSpec
from rwmb.modules import module_tensor, regular_module
from rwmb.report import Report

NAMES = ["z2", "arrow", "exterior", "qline", "weak"]


@pytest.fixture
def structures(request):
    return {k: request.getfixturevalue(k) for k in NAMES}


def round_trip(d):
    return io.bundle_from_json(json.loads(io.dumps(d)))


@pytest.mark.parametrize("name", NAMES)
def test_structure_round_trip(structures, name):
    s = structures[name]
    back = io.structure_from_bundle(round_trip(io.structure_to_json(s)))
    assert back == s
    assert back.context == s.context


def test_variant_survives(arrow):
    d = dualize(arrow, "coopposite")
    assert io.structure_from_bundle(round_trip(io.structure_to_json(d))) == d


def test_output_is_deterministic(arrow):
    assert io.dumps(io.structure_to_json(arrow)) == io.dumps(io.structure_to_json(arrow))
    text = io.dumps(io.structure_to_json(arrow))
    assert '"1/1"' not in text


def test_base_and_module_round_trip(arrow):
    b = compute_base(arrow)
    b2 = io.base_from_bundle(round_trip(io.base_to_json(b)), arrow)
    assert (b2.L, b2.p, b2.mu, b2.delta, b2.eps) == (b.L, b.p, b.mu, b.delta, b.eps)
    assert b2.report.passed
    M = regular_module(b)
    T = module_tensor(b, M, M)
    M2 = io.module_from_bundle(round_trip(io.bundle_to_json(io.module_bundle(T.module, arrow))), b)
    assert (M2.V, M2.v) == (T.module.V, T.module.v)


def test_field_override(z2):
    d = io.structure_to_json(z2)
    s7 = io.structure_from_bundle(io.bundle_from_json(d, field_override=FieldSpec.prime(7)))
    assert s7.field == FieldSpec.prime(7)
    assert check_rwmb(s7).passed


def _mutate(d, fn):
    d = copy.deepcopy(d)
    fn(d)
    return d


@pytest.mark.parametrize("mutation,where", [
    (lambda d: d["morphisms"][0]["entries"].append([99, 0, "1"]), "morphisms"),
    (lambda d: d.pop("objects"), "objects"),
    (lambda d: d.update(field="R"), "field"),
    (lambda d: d["morphisms"].append(copy.deepcopy(d["morphisms"][0])), "morphisms"),
    (lambda d: (d["roles"].pop("t1"), d["morphisms"][[m["name"] for m in d["morphisms"]].index("t1")]
                .update(name="x")), "t1"),
])
def test_invalid_bundles(z2, mutation, where):
    d = _mutate(io.structure_to_json(z2), mutation)
    with pytest.raises(io.InputError) as exc:
        io.structure_from_bundle(io.bundle_from_json(d))
    assert where in str(exc.value) or where in (exc.value.where or "")


def test_grade_violation_is_an_input_error(exterior):
    d = io.structure_to_json(exterior)
    t1 = next(m for m in d["morphisms"] if m["name"] == "t1")
    t1["entries"].append([1, 0, "1"])   # theta (x) 1 <- 1 (x) 1 changes degree
    with pytest.raises(io.InputError):
        io.structure_from_bundle(io.bundle_from_json(d))


def test_json_errors_have_positions():
    with pytest.raises(io.InputError, match="empty"):
        io.parse_json("   ", "x.json")
    with pytest.raises(io.InputError, match="line 2"):
        io.parse_json('{\n  "a": ,\n}', "x.json")


def test_report_json():
    rep = Report()
    rep.flag("b_second", True)
    rep.flag("a_first", False)
    d = io.report_to_json(rep, FieldSpec.prime(7), "check", "demo", timing=False)
    assert [c["name"] for c in d["checks"]] == ["a_first", "b_second"]
    assert d["aggregate"] == {"pass": False, "total": 2, "failed": 1, "first_failure": "a_first"}
    assert "timing" not in d["checks"][0]
    assert "FAIL a_first" in io.report_to_text(d)
