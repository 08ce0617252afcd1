from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localsys import fixtures
from localsys.cli import ConfigError, RunConfig, main, parse_monodromy
from localsys.dgmod import hopf_module, monodromy_module
from localsys.linalg import RATIONALS, Field
from localsys.oracle import SingularMonodromy, group_homology_oracle_Z
from localsys.serialize import (
    SchemaViolation,
    emit_module,
    emit_simplicial,
    load,
    parse_module,
    parse_simplicial,
    simplicial_to_json,
)
from localsys.simplicial import circle

# oracle ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "u, f, want",
    [
        (1, RATIONALS, [1, 1]),
        (2, RATIONALS, [0, 0]),
        (2, Field(3), [0, 0]),
        (4, Field(3), [1, 1]),
        ([[1, 1], [0, 1]], RATIONALS, [1, 1]),
        ([[0, 1], [1, 0]], RATIONALS, [1, 1]),
    ],
)
def test_oracle_values(u, f, want):
    assert group_homology_oracle_Z(u, f) == want


def test_oracle_rejects_singular():
    with pytest.raises(SingularMonodromy):
        group_homology_oracle_Z(5, Field(5))
    with pytest.raises(SingularMonodromy):
        group_homology_oracle_Z([[1, 2]])


# serialization ---------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(fixtures.SPACES))
def test_simplicial_round_trip_is_byte_stable(name):
    text = emit_simplicial(fixtures.space(name))
    assert emit_simplicial(parse_simplicial(text)) == text


@pytest.mark.parametrize("m", [hopf_module(), monodromy_module(circle(), [[2, 1], [0, 3]])])
def test_module_round_trip_is_byte_stable(m):
    text = emit_module(m)
    assert emit_module(parse_module(text)) == text


def test_fractions_survive_round_trip():
    m = monodromy_module(circle(), "1/2")
    doc = json.loads(emit_module(m))
    assert doc["action"][circle().generators(1)[0]] == [["1", "1", "-1/2"]]
    assert emit_module(parse_module(emit_module(m))) == emit_module(m)


def test_schema_errors_carry_pointers():
    doc = simplicial_to_json(circle())
    doc["generators"][1]["dim"] = -1
    with pytest.raises(SchemaViolation) as e:
        parse_simplicial(json.dumps(doc))
    assert e.value.pointer == "/generators/1/dim"
    doc = simplicial_to_json(circle())
    edge = circle().generators(1)[0]
    doc["faces"][edge][0]["base"] = "nope"
    with pytest.raises(SchemaViolation) as e:
        parse_simplicial(json.dumps(doc))
    assert e.value.pointer == f"/faces/{edge}/0/base"
    with pytest.raises(SchemaViolation) as e:
        parse_simplicial("{")
    assert e.value.pointer == "/"


def test_module_differential_must_lower_degree():
    doc = {"name": "m", "generators": [{"id": "a", "degree": 0}, {"id": "b", "degree": 0}], "differential": [["a", "b", 1]]}
    with pytest.raises(SchemaViolation) as e:
        parse_module(json.dumps(doc))
    assert e.value.pointer == "/differential/0"


def test_load_dispatches(tmp_path):
    p = tmp_path / "k.json"
    p.write_text(emit_simplicial(circle()))
    assert load(p).counts() == [1, 1]
    q = tmp_path / "m.json"
    q.write_text(emit_module(hopf_module()))
    assert load(q).name == "hopf"


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2))
def test_module_round_trip_random_monodromy(u):
    m = monodromy_module(circle(), u)
    assert emit_module(parse_module(emit_module(m))) == emit_module(m)


# cli -------------------------------------------------------------------------


def test_parse_monodromy_forms():
    assert parse_monodromy("2") == 2
    assert parse_monodromy("[[0,1],[1,0]]") == [[0, 1], [1, 0]]
    assert parse_monodromy("a=2,b=3") == {"a": 2, "b": 3}


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(RATIONALS, max_degree=0)
    with pytest.raises(ConfigError):
        RunConfig(RATIONALS, fixture="circle", file="x.json")


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_cli_colimit_with_oracle(capsys):
    assert main(["colimit", "--fixture", "circle", "--monodromy", "2", "--format", "json"]) == 0
    doc = _json(capsys)
    assert any(c["name"] == "oracle" and c["status"] == "pass" for c in doc["checks"])


def test_cli_exit_codes(capsys, tmp_path):
    assert main(["homology", "--fixture", "sphere_min2"]) == 0
    assert main(["colimit", "--fixture", "nowhere"]) == 2
    assert main(["colimit", "--fixture", "circle", "--monodromy", "5", "--field", "fp:5"]) == 2
    assert main(["colimit", "--fixture", "delta1"]) == 2
    assert main(["cobar-homology", "--fixture", "pinched", "--strict"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [{"id": "x", "dim": "one"}], "faces": {}}')
    assert main(["describe", "--file", str(bad)]) == 2
    assert "/generators/0/dim" in capsys.readouterr().err


def test_cli_export_round_trip(tmp_path, capsys):
    out = tmp_path / "s2.json"
    assert main(["export", "--fixture", "sphere_min2", "-o", str(out)]) == 0
    assert main(["export", "--file", str(out)]) == 0
    assert capsys.readouterr().out == out.read_text()


def test_cli_verify_subset(capsys):
    assert main(["verify", "--select", "app.", "--field", "fp:7", "--format", "json"]) == 0
    doc = _json(capsys)
    assert doc["checks"] and all(c["status"] == "pass" for c in doc["checks"])


def test_cli_csv_output(capsys):
    assert main(["twisted-homology", "--fixture", "sphere_min2", "--module", "hopf", "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[0].count(",") >= 1
