"""Parsing of the JSON input documents used by the command line.

Every parse error carries a location: ``file:line:col`` for malformed JSON
and ``file:$.path.to[field]`` for documents that do not fit the schema.

Schema summary::

    group     {"invariant_factors": [d1, ...]}  or the string "2,2"
    subgroup  {"generators": [[...], ...]}
    family    [subgroup, ...]            (a subgroup may carry a "label")
    tower     {"group": group, "n1": subgroup, "n2": subgroup, "family": family}
    field     {"conductor": n, "fixing_subgroup": [residues]}
              | {"quadratic": d} | {"compositum": [field, ...]} | "sqrt:d"
    pair      {"fields": [field, field]}  or a tower
    cayley    {"permutation_generators": [[...], ...]} | {"table": [[...], ...]}
    cayley pair {"group": cayley, "n1": normal, "n2": normal} | {"preset": "example3"}
              where normal is a list of element indices,
              {"elements": [...]} or {"permutation_generators": [...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .abgroup import FinAbGroup, group_from_string, normalize, subgroup_structure
from .cyclotomic import field_from_json, realizable_family, tower_from_fields
from .errors import InputError, StructureError
from .grouptable import CayleyGroup, biquadratic_quartic_group, from_generators
from .obstruction import LocalFamily, make_tower


def load(path):
    """Read a JSON document; ``-`` reads standard input."""
    import sys
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


class _Cursor:
    """A value together with its JSON path, for error messages."""

    def __init__(self, value, where):
        self.value = value
        self.where = where

    def fail(self, message):
        raise InputError(message, self.where)

    def key(self, name, required=True):
        if not isinstance(self.value, dict):
            self.fail(f"expected an object with key {name!r}")
        if name not in self.value:
            if required:
                self.fail(f"missing key {name!r}")
            return None
        return _Cursor(self.value[name], f"{self.where}.{name}")

    def items(self):
        if not isinstance(self.value, list):
            self.fail("expected a list")
        return [_Cursor(v, f"{self.where}[{i}]") for i, v in enumerate(self.value)]

    def integer(self):
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            self.fail(f"expected an integer, got {self.value!r}")
        return self.value

    def int_list(self):
        return [c.integer() for c in self.items()]


def _guard(cursor, fn, *args):
    """Run a constructor, turning structural errors into located input errors."""
    try:
        return fn(*args)
    except InputError as exc:
        if exc.location:
            raise
        raise InputError(str(exc), cursor.where) from None
    except (StructureError, ValueError) as exc:
        raise InputError(str(exc), cursor.where) from None


def parse_group(cur):
    v = cur.value
    if isinstance(v, str):
        return _guard(cur, group_from_string, v)
    if isinstance(v, list):
        return _guard(cur, lambda o: normalize(tuple(o))[0] if o else FinAbGroup(()),
                      cur.int_list())
    orders = cur.key("invariant_factors").int_list()
    if any(o < 1 for o in orders):
        cur.fail("cyclic orders must be positive")
    orders = [o for o in orders if o != 1]
    return _guard(cur, lambda: normalize(tuple(orders))[0])


def parse_subgroup(cur, G):
    gens_cur = cur.key("generators") if isinstance(cur.value, dict) else cur
    gens = []
    for g in gens_cur.items():
        vec = g.int_list()
        if len(vec) != G.ngens:
            g.fail(f"element needs {G.ngens} coordinates for {G}")
        gens.append(tuple(vec))
    return _guard(cur, subgroup_structure, G, gens)


def parse_family(cur, G):
    places, labels = [], []
    for i, c in enumerate(cur.items()):
        places.append(parse_subgroup(c, G))
        lab = c.value.get("label") if isinstance(c.value, dict) else None
        labels.append(str(lab) if lab is not None else f"v{i}")
    return LocalFamily(G, tuple(places), tuple(labels))


def _is_field(v):
    return isinstance(v, str) or (isinstance(v, dict) and (
        "conductor" in v or "quadratic" in v or "compositum" in v))


def parse_field(cur):
    return _guard(cur, field_from_json, cur.value)


@dataclass
class GroupJob:
    """An abelian group with a family of decomposition groups, maybe from a field."""
    group: FinAbGroup
    family: LocalFamily
    field: object = None


def parse_sha_input(doc, where="$"):
    """A field, ``{"field": field}`` or ``{"group": ..., "family": ...}``.

    Without a family, a group gets the family of all its cyclic subgroups.
    """
    cur = _Cursor(doc, where)
    if _is_field(doc):
        L = parse_field(cur)
        return GroupJob(L.galois_group, realizable_family(L), L)
    if isinstance(doc, dict) and "field" in doc:
        fc = cur.key("field")
        L = parse_field(fc)
        return GroupJob(L.galois_group, realizable_family(L), L)
    G = parse_group(cur.key("group"))
    fam = cur.key("family", required=False)
    if fam is None:
        F = LocalFamily.from_generators(G, [[g] for g in G.elements()])
    else:
        F = parse_family(fam, G)
    return GroupJob(G, F)


@dataclass
class PairJob:
    tower: object
    family: LocalFamily
    fields: tuple = ()


def parse_pair_input(doc, where="$"):
    """``{"fields": [L1, L2]}`` or a tower ``{"group", "n1", "n2", "family"}``."""
    cur = _Cursor(doc, where)
    if isinstance(doc, dict) and "fields" in doc:
        items = cur.key("fields").items()
        if len(items) != 2:
            cur.key("fields").fail("expected exactly two fields")
        L1, L2 = parse_field(items[0]), parse_field(items[1])
        T, F = tower_from_fields(L1, L2)
        return PairJob(T, F, (L1, L2))
    G = parse_group(cur.key("group"))
    N1 = parse_subgroup(cur.key("n1"), G)
    N2 = parse_subgroup(cur.key("n2"), G)
    fam = cur.key("family", required=False)
    if fam is None:
        F = LocalFamily.from_generators(G, [[g] for g in G.elements()])
    else:
        F = parse_family(fam, G)
    return PairJob(make_tower(G, N1, N2), F)


def parse_cayley(cur):
    if cur.key("permutation_generators", required=False) is not None:
        pc = cur.key("permutation_generators")
        gens = [c.int_list() for c in pc.items()]
        G, perms = _guard(pc, from_generators, gens)
        return G, perms
    tc = cur.key("table", required=False)
    if tc is None:
        cur.fail("a Cayley group needs 'permutation_generators' or 'table'")
    table = [c.int_list() for c in tc.items()]
    return _guard(tc, CayleyGroup, table), None


def _parse_normal(cur, G, perms):
    v = cur.value
    if isinstance(v, list):
        elems = cur.int_list()
    elif isinstance(v, dict) and "elements" in v:
        elems = cur.key("elements").int_list()
    elif isinstance(v, dict) and "permutation_generators" in v:
        if perms is None:
            cur.fail("permutation generators need a group given by permutations")
        index = {p: k for k, p in enumerate(perms)}
        elems = []
        for c in cur.key("permutation_generators").items():
            p = tuple(c.int_list())
            if p not in index:
                c.fail("permutation is not an element of the group")
            elems.append(index[p])
    else:
        cur.fail("expected a list of elements, {'elements'} or {'permutation_generators'}")
    for e in elems:
        if not 0 <= e < G.order:
            cur.fail(f"element index {e} out of range for a group of order {G.order}")
    return G.closure(elems)


@dataclass
class CayleyPairJob:
    group: CayleyGroup
    n1: tuple
    n2: tuple
    names: dict | None = None


def parse_cayley_pair(doc, where="$"):
    cur = _Cursor(doc, where)
    preset = cur.key("preset", required=False) if isinstance(doc, dict) else None
    if preset is not None:
        if preset.value != "example3":
            preset.fail(f"unknown preset {preset.value!r}")
        G, info = biquadratic_quartic_group()
        return CayleyPairJob(G, info["N1"], info["N2"],
                             {"sigma": info["sigma"], "tau": info["tau"]})
    G, perms = parse_cayley(cur.key("group"))
    n1 = _parse_normal(cur.key("n1"), G, perms)
    n2 = _parse_normal(cur.key("n2"), G, perms)
    return CayleyPairJob(G, tuple(sorted(n1)), tuple(sorted(n2)))


__all__ = [
    "load", "parse_group", "parse_subgroup", "parse_family", "parse_sha_input",
    "parse_pair_input", "parse_cayley_pair",
]
