import json

import pytest
from hypothesis import given, strategies as st

from shiftlab import config
from shiftlab.errors import ConfigError
from shiftlab.shifts import (ForbiddenPatterns, GroupRule, Language1D, LinearRule, PeriodicComponent,
                             ProductSpec, RecodedSpec, count_colorings, rectangle)
from shiftlab.spacetime import Spacetime, widths


def roundtrip(spec):
    text = config.serialize(spec)
    back = config.parse_obj(json.loads(text))
    assert back == spec
    assert config.serialize(back) == text
    return back


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


LED_DOC = {"name": "ledrappier", "alphabet": {"modulus": 2},
           "rule": {"type": "linear", "terms": [{"offset": [0, 0], "coeff": 1},
                                                {"offset": [1, 0], "coeff": 1},
                                                {"offset": [0, 1], "coeff": 1}]}}


# --- examples


def test_ledrappier_file(tmp_path):
    spec = config.parse_file(write(tmp_path, "ledrappier.json", LED_DOC))
    assert isinstance(spec, LinearRule) and len(spec.equations[0].terms) == 3
    assert spec == config.builtin("ledrappier")


def test_composite_modulus(tmp_path):
    doc = dict(LED_DOC, alphabet={"modulus": 4})
    with pytest.raises(ConfigError, match="modulus must be prime") as info:
        config.parse_file(write(tmp_path, "bad.json", doc))
    assert info.value.location == "/alphabet/modulus"


def test_product_of_two_files(tmp_path):
    write(tmp_path, "a.json", LED_DOC)
    write(tmp_path, "b.json", {"alphabet": {"size": 2}, "rule": {"type": "forbidden_patterns",
                                                                   "window": [[0, 0], [1, 0]],
                                                                   "patterns": [[1, 1]]}})
    path = write(tmp_path, "p.json", {"rule": {"type": "product", "left": "a.json", "right": "b.json"}})
    spec = config.parse_file(path)
    assert isinstance(spec, ProductSpec) and spec.alphabet_size == 4
    assert count_colorings(spec, rectangle(2, 1)) == 4 * 3
    roundtrip(spec)


@pytest.mark.parametrize("name", sorted(config.BUILTINS))
def test_builtins_roundtrip(name):
    roundtrip(config.builtin(name))


def test_unknown_builtin():
    with pytest.raises(ConfigError, match="unknown builtin"):
        config.builtin("nope")


@pytest.mark.parametrize("doc, pointer", [
    (dict(LED_DOC, extra=1), "/extra"),
    ({"alphabet": {"modulus": 2}}, "/rule"),
    ({"alphabet": {"modulus": 2}, "rule": {"type": "linear", "terms": [{"offset": [0], "coeff": 1}]}},
     "/rule/terms/0/offset"),
    ({"alphabet": {"modulus": 2}, "rule": {"type": "linear", "terms": [{"offset": [0, 0], "coeff": "1"}]}},
     "/rule/terms/0/coeff"),
    ({"alphabet": {"size": 2}, "rule": {"type": "forbidden_patterns", "window": [[0, 0]], "patterns": [[2]]}},
     "/rule/patterns/0"),
    ({"alphabet": {"size": 2}, "rule": {"type": "wang"}}, "/rule/type"),
    ({"type": "spacetime", "alphabet": {"size": 2}, "rule": {"left_radius": 0, "right_radius": 1,
                                                               "table": [0, 1]}}, "/rule/table"),
    ({"type": "language", "alphabet": {"size": 2},
      "components": [{"period": 2, "constraints": [{"offsets": [0], "allowed": [[0, 1]]}]}]},
     "/components/0/constraints/0/allowed/0"),
])
def test_schema_errors_carry_pointers(doc, pointer):
    with pytest.raises(ConfigError) as info:
        config.parse_obj(doc)
    assert info.value.location == pointer


def test_invalid_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        config.parse_file(path)


def test_spacetime_forms_agree():
    table = {"type": "spacetime", "alphabet": {"size": 2},
             "rule": {"left_radius": 0, "right_radius": 1, "table": [0, 1, 1, 0]}}
    linear = {"type": "spacetime", "alphabet": {"size": 2},
              "rule": {"left_radius": 0, "right_radius": 1, "linear": [1, 1]}}
    a, b = config.parse_obj(table), config.parse_obj(linear)
    assert isinstance(a, Spacetime) and a.rule.table == b.rule.table
    assert widths(a, 3) == widths(b, 3) == (0, -3)
    roundtrip(a)
    roundtrip(b)


def test_recoded_and_group_roundtrip():
    g = GroupRule(((0, 1, 2), (1, 2, 0), (2, 0, 1)), ((0, 0), (1, 0)), 1, "z3")
    roundtrip(g)
    roundtrip(RecodedSpec(config.builtin("ledrappier"), ((0, 0), (1, 0)), "dominoes"))


# --- round trips of random specs

offsets = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4, unique=True)


@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.tuples(offsets, st.integers(-10, 10)), min_size=1, max_size=3),
       st.data())
def test_linear_roundtrip(p, eqs, data):
    equations = tuple((tuple((o, data.draw(st.integers(0, p - 1))) for o in offs), c)
                      for offs, c in eqs)
    roundtrip(LinearRule(p, equations, "random"))


@given(st.integers(1, 3), offsets, st.data())
def test_forbidden_roundtrip(q, window, data):
    pats = data.draw(st.lists(st.tuples(*[st.integers(0, q - 1)] * len(window)), max_size=5))
    roundtrip(ForbiddenPatterns(q, tuple(window), frozenset(pats), "random"))


@given(st.integers(1, 3), st.data())
def test_language_roundtrip(period, data):
    offs = tuple(sorted(data.draw(st.sets(st.integers(0, 2), min_size=1, max_size=2))))
    allowed = data.draw(st.sets(st.tuples(*[st.integers(0, 1)] * len(offs)), max_size=4))
    comp = PeriodicComponent(period, ((data.draw(st.integers(0, period - 1)), offs, allowed),))
    roundtrip(Language1D(2, (comp,), "random"))
