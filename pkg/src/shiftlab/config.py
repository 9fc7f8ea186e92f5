"""JSON configuration for shift specs, spacetimes and 1-D languages.

Parsing validates every field and reports problems as ConfigError with a
JSON pointer. ``serialize`` produces a canonical document, so
``parse(serialize(parse(doc)))`` equals ``parse(doc)``.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .linalg import is_prime
from .shifts import (ForbiddenPatterns, GroupRule, Language1D, LinearRule, PeriodicComponent,
                     ProductSpec, RecodedSpec, ShiftSpec)
from .spacetime import STANDARD_BASIS, LocalRule, Spacetime, linear_rule

BUILTINS = {
    "ledrappier": "ledrappier.json",
    "einsiedler-restriction": "einsiedler_restriction.json",
    "ledrappier-spacetime": "ledrappier_spacetime.json",
    "delayed-ledrappier": "delayed_ledrappier.json",
    "full-shift-2": "full_shift_2.json",
    "one-letter": "one_letter.json",
    "horizontal-stripes": "horizontal_stripes.json",
    "constant-shift": "constant_shift.json",
}


def _ptr(base, key):
    return f"{base}/{key}"


def _expect_keys(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise ConfigError("expected an object", where)
    for k in obj:
        if k not in allowed:
            raise ConfigError(f"unknown key {k!r}", _ptr(where, k))
    for k in required:
        if k not in obj:
            raise ConfigError(f"missing key {k!r}", _ptr(where, k))


def _int(v, where, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError("expected an integer", where)
    if lo is not None and v < lo:
        raise ConfigError(f"must be at least {lo}", where)
    return v


def _list(v, where):
    if not isinstance(v, list):
        raise ConfigError("expected an array", where)
    return v


def _point(v, where):
    v = _list(v, where)
    if len(v) != 2:
        raise ConfigError("expected a pair [x, y]", where)
    return (_int(v[0], f"{where}/0"), _int(v[1], f"{where}/1"))


def _points(v, where):
    return tuple(_point(p, f"{where}/{i}") for i, p in enumerate(_list(v, where)))


def _alphabet(obj, where, linear=False):
    _expect_keys(obj, ("modulus", "size"), where)
    if linear:
        if "modulus" not in obj:
            raise ConfigError("linear rules need an alphabet modulus", _ptr(where, "modulus"))
        p = _int(obj["modulus"], _ptr(where, "modulus"), 2)
        if not is_prime(p):
            raise ConfigError("modulus must be prime", _ptr(where, "modulus"))
        return p
    if "size" in obj:
        return _int(obj["size"], _ptr(where, "size"), 1)
    if "modulus" in obj:
        return _int(obj["modulus"], _ptr(where, "modulus"), 1)
    raise ConfigError("alphabet needs a size", where)


def _terms(v, where):
    out = []
    for i, t in enumerate(_list(v, where)):
        w = f"{where}/{i}"
        _expect_keys(t, ("offset", "coeff"), w, ("offset", "coeff"))
        out.append((_point(t["offset"], _ptr(w, "offset")), _int(t["coeff"], _ptr(w, "coeff"))))
    if not out:
        raise ConfigError("a linear equation needs terms", where)
    return tuple(out)


def _load_ref(v, where, base_dir):
    if isinstance(v, str):
        path = (Path(base_dir) / v) if base_dir else Path(v)
        return parse_file(path)
    return parse_obj(v, where, base_dir)


def parse_obj(doc, where="", base_dir=None):
    """Build a spec, spacetime or language from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("expected an object", where or "/")
    kind = doc.get("type", "shift")
    if kind == "spacetime":
        return _parse_spacetime(doc, where)
    if kind == "language":
        return _parse_language(doc, where)
    if kind != "shift":
        raise ConfigError(f"unknown document type {kind!r}", _ptr(where, "type"))
    _expect_keys(doc, ("type", "name", "alphabet", "rule"), where, ("rule",))
    name = doc.get("name", "shift")
    if not isinstance(name, str):
        raise ConfigError("name must be a string", _ptr(where, "name"))
    rule = doc["rule"]
    rw = _ptr(where, "rule")
    if not isinstance(rule, dict) or "type" not in rule:
        raise ConfigError("rule needs a type", rw)
    rt = rule["type"]
    aw = _ptr(where, "alphabet")
    if rt == "linear":
        if "alphabet" not in doc:
            raise ConfigError("missing key 'alphabet'", aw)
        p = _alphabet(doc["alphabet"], aw, linear=True)
        if "equations" in rule:
            _expect_keys(rule, ("type", "equations"), rw)
            eqs = []
            for i, e in enumerate(_list(rule["equations"], _ptr(rw, "equations"))):
                ew = f"{rw}/equations/{i}"
                _expect_keys(e, ("terms", "constant"), ew, ("terms",))
                eqs.append((_terms(e["terms"], _ptr(ew, "terms")),
                            _int(e.get("constant", 0), _ptr(ew, "constant"))))
            if not eqs:
                raise ConfigError("need at least one equation", _ptr(rw, "equations"))
            try:
                return LinearRule(p, tuple(eqs), name)
            except ConfigError as exc:
                raise ConfigError(exc.message, _ptr(rw, "equations")) from None
        _expect_keys(rule, ("type", "terms", "constant"), rw, ("terms",))
        terms = _terms(rule["terms"], _ptr(rw, "terms"))
        try:
            return LinearRule.single(p, terms, _int(rule.get("constant", 0), _ptr(rw, "constant")), name)
        except ConfigError as exc:
            raise ConfigError(exc.message, rw) from None
    if rt == "forbidden_patterns":
        if "alphabet" not in doc:
            raise ConfigError("missing key 'alphabet'", aw)
        q = _alphabet(doc["alphabet"], aw)
        _expect_keys(rule, ("type", "window", "patterns"), rw, ("window", "patterns"))
        window = _points(rule["window"], _ptr(rw, "window"))
        if len(set(window)) != len(window):
            raise ConfigError("window offsets must be distinct", _ptr(rw, "window"))
        pats = []
        for i, pat in enumerate(_list(rule["patterns"], _ptr(rw, "patterns"))):
            pw = f"{rw}/patterns/{i}"
            vals = tuple(_int(v, f"{pw}/{j}") for j, v in enumerate(_list(pat, pw)))
            if len(vals) != len(window) or any(not 0 <= v < q for v in vals):
                raise ConfigError("pattern does not fit window/alphabet", pw)
            pats.append(vals)
        return ForbiddenPatterns(q, window, frozenset(pats), name)
    if rt == "group":
        _expect_keys(rule, ("type", "table", "shape", "target"), rw, ("table", "shape"))
        table = []
        for i, row in enumerate(_list(rule["table"], _ptr(rw, "table"))):
            table.append(tuple(_int(v, f"{rw}/table/{i}/{j}") for j, v in enumerate(_list(row, f"{rw}/table/{i}"))))
        shape = _points(rule["shape"], _ptr(rw, "shape"))
        spec = GroupRule(tuple(table), shape, _int(rule.get("target", 0), _ptr(rw, "target")), name)
        if "alphabet" in doc and _alphabet(doc["alphabet"], aw) != spec.alphabet_size:
            raise ConfigError("alphabet size disagrees with the group table", aw)
        return spec
    if rt == "product":
        _expect_keys(rule, ("type", "left", "right"), rw, ("left", "right"))
        left = _load_ref(rule["left"], _ptr(rw, "left"), base_dir)
        right = _load_ref(rule["right"], _ptr(rw, "right"), base_dir)
        for side, s in (("left", left), ("right", right)):
            if not isinstance(s, ShiftSpec):
                raise ConfigError("product factors must be shift specs", _ptr(rw, side))
        spec = ProductSpec(left, right, name)
        if "alphabet" in doc and _alphabet(doc["alphabet"], aw) != spec.alphabet_size:
            raise ConfigError("alphabet size disagrees with the factors", aw)
        return spec
    if rt == "recoded":
        _expect_keys(rule, ("type", "source", "window"), rw, ("source", "window"))
        source = _load_ref(rule["source"], _ptr(rw, "source"), base_dir)
        if not isinstance(source, ShiftSpec):
            raise ConfigError("recoding source must be a shift spec", _ptr(rw, "source"))
        window = _points(rule["window"], _ptr(rw, "window"))
        if not window:
            raise ConfigError("recoding window must be nonempty", _ptr(rw, "window"))
        return RecodedSpec(source, window, name)
    raise ConfigError(f"unknown rule type {rt!r}", _ptr(rw, "type"))


def _parse_language(doc, where):
    _expect_keys(doc, ("type", "name", "alphabet", "components"), where, ("alphabet",))
    q = _alphabet(doc["alphabet"], _ptr(where, "alphabet"))
    comps = []
    for i, c in enumerate(_list(doc.get("components", []), _ptr(where, "components"))):
        cw = f"{where}/components/{i}"
        _expect_keys(c, ("period", "constraints"), cw, ("period",))
        period = _int(c["period"], _ptr(cw, "period"), 1)
        cons = []
        for j, k in enumerate(_list(c.get("constraints", []), _ptr(cw, "constraints"))):
            kw = f"{cw}/constraints/{j}"
            _expect_keys(k, ("phase", "offsets", "allowed"), kw, ("offsets", "allowed"))
            offs = tuple(_int(o, f"{kw}/offsets/{m}") for m, o in enumerate(_list(k["offsets"], _ptr(kw, "offsets"))))
            if not offs:
                raise ConfigError("offsets must be nonempty", _ptr(kw, "offsets"))
            allowed = []
            for m, a in enumerate(_list(k["allowed"], _ptr(kw, "allowed"))):
                aw = f"{kw}/allowed/{m}"
                vals = tuple(_int(v, f"{aw}/{n}") for n, v in enumerate(_list(a, aw)))
                if len(vals) != len(offs) or any(not 0 <= v < q for v in vals):
                    raise ConfigError("allowed word does not fit offsets/alphabet", aw)
                allowed.append(vals)
            cons.append((_int(k.get("phase", 0), _ptr(kw, "phase")), offs, allowed))
        comps.append(PeriodicComponent(period, tuple(cons)))
    name = doc.get("name", "language")
    return Language1D(q, tuple(comps), name)


def _parse_spacetime(doc, where):
    _expect_keys(doc, ("type", "name", "alphabet", "rule", "base", "basis"), where, ("alphabet", "rule"))
    aw = _ptr(where, "alphabet")
    q = _alphabet(doc["alphabet"], aw)
    rule = doc["rule"]
    rw = _ptr(where, "rule")
    _expect_keys(rule, ("left_radius", "right_radius", "table", "linear"), rw, ("left_radius", "right_radius"))
    a = _int(rule["left_radius"], _ptr(rw, "left_radius"))
    b = _int(rule["right_radius"], _ptr(rw, "right_radius"))
    if b < -a:
        raise ConfigError("rule window is empty", rw)
    width = a + b + 1
    if ("table" in rule) == ("linear" in rule):
        raise ConfigError("give exactly one of 'table' or 'linear'", rw)
    if "linear" in rule:
        if not is_prime(q):
            raise ConfigError("modulus must be prime", aw)
        cs = [_int(c, f"{rw}/linear/{i}") for i, c in enumerate(_list(rule["linear"], _ptr(rw, "linear")))]
        if len(cs) != width:
            raise ConfigError(f"need {width} coefficients", _ptr(rw, "linear"))
        lr = linear_rule({t: c for t, c in zip(range(-a, b + 1), cs)}, q, lo=-a)
    else:
        tab = [_int(v, f"{rw}/table/{i}", 0) for i, v in enumerate(_list(rule["table"], _ptr(rw, "table")))]
        if len(tab) != q ** width:
            raise ConfigError(f"table needs {q ** width} entries", _ptr(rw, "table"))
        if any(v >= q for v in tab):
            raise ConfigError("table entry outside the alphabet", _ptr(rw, "table"))
        lr = LocalRule(q, -a, b, tuple(tab))
    base = None
    if "base" in doc:
        bw = _ptr(where, "base")
        bdoc = doc["base"]
        if isinstance(bdoc, dict) and bdoc.get("type") == "full":
            _expect_keys(bdoc, ("type",), bw)
        else:
            base = _parse_language(bdoc, bw)
            if base.size != q:
                raise ConfigError("base alphabet disagrees with the rule", bw)
    basis = STANDARD_BASIS
    if "basis" in doc:
        basis = _points(doc["basis"], _ptr(where, "basis"))
        if len(basis) != 2 or abs(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]) != 1:
            raise ConfigError("basis must be two unimodular vectors", _ptr(where, "basis"))
    return Spacetime(lr, base, tuple(basis), doc.get("name", "spacetime"))


def parse_file(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}", "/") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", "/") from None
    return parse_obj(doc, "", path.parent)


parse_config = parse_file


def builtin(name):
    if name not in BUILTINS:
        raise ConfigError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}", "/")
    text = resources.files("shiftlab").joinpath("data", BUILTINS[name]).read_text(encoding="utf-8")
    return parse_obj(json.loads(text))


# ---------------------------------------------------------------------------
# serialization


def _terms_json(terms):
    return [{"offset": list(o), "coeff": c} for o, c in terms]


def to_obj(spec):
    if isinstance(spec, LinearRule):
        doc = {"name": spec.name, "alphabet": {"modulus": spec.modulus}}
        if len(spec.equations) == 1:
            eq = spec.equations[0]
            doc["rule"] = {"type": "linear", "terms": _terms_json(eq.terms), "constant": eq.constant}
        else:
            doc["rule"] = {"type": "linear", "equations": [
                {"terms": _terms_json(eq.terms), "constant": eq.constant} for eq in spec.equations]}
        return doc
    if isinstance(spec, ForbiddenPatterns):
        return {"name": spec.name, "alphabet": {"size": spec.size},
                "rule": {"type": "forbidden_patterns", "window": [list(o) for o in spec.window],
                         "patterns": [list(p) for p in sorted(spec.patterns)]}}
    if isinstance(spec, GroupRule):
        return {"name": spec.name, "alphabet": {"size": spec.alphabet_size},
                "rule": {"type": "group", "table": [list(r) for r in spec.table],
                         "shape": [list(o) for o in spec.shape], "target": spec.target}}
    if isinstance(spec, ProductSpec):
        return {"name": spec.name, "rule": {"type": "product", "left": to_obj(spec.left),
                                            "right": to_obj(spec.right)}}
    if isinstance(spec, RecodedSpec):
        return {"name": spec.name, "rule": {"type": "recoded", "source": to_obj(spec.source),
                                            "window": [list(o) for o in spec.window]}}
    if isinstance(spec, Language1D):
        return {"type": "language", "name": spec.name, "alphabet": {"size": spec.size},
                "components": [{"period": c.period, "constraints": [
                    {"phase": ph, "offsets": list(offs), "allowed": [list(a) for a in sorted(allowed)]}
                    for ph, offs, allowed in c.constraints]} for c in spec.components]}
    if isinstance(spec, Spacetime):
        r = spec.rule
        if r.sparse:
            raise ConfigError("recoded spacetimes with partial rule tables are not serializable", "/rule")
        rule = {"left_radius": -r.lo, "right_radius": r.hi}
        if r.linear is not None:
            rule["linear"] = list(r.linear)
        else:
            rule["table"] = list(r.table)
        base = spec.base
        doc = {"type": "spacetime", "name": spec.name, "alphabet": {"size": r.size}, "rule": rule,
               "base": {"type": "full"} if base.is_full else to_obj(base)}
        if tuple(spec.basis) != STANDARD_BASIS:
            doc["basis"] = [list(v) for v in spec.basis]
        return doc
    raise TypeError(f"cannot serialize {type(spec).__name__}")


def serialize(spec):
    return json.dumps(to_obj(spec), indent=2, sort_keys=True) + "\n"
