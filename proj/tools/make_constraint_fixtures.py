#!/usr/bin/env python3
"""Writes fixtures/constraints: for each constraint a pattern that violates it
(<ID>.fail.dqp.json) and the valid pattern it was derived from
(<ID>.pass.dqp.json).

usage: make_constraint_fixtures.py DQP_BINARY [OUT_DIR]
"""
import copy
import json
import os
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def dqp(binary, *args):
    return subprocess.run([binary, *args], check=True, capture_output=True, text=True).stdout


def export(binary, name, level):
    return json.loads(dqp(binary, "catalog", "export", name, "--level", level))


def concrete(binary, name, bindings):
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "p.json")
        with open(path, "w") as f:
            f.write(dqp(binary, "catalog", "export", name, "--level", "x"))
        bind = os.path.join(tmp, "p.bind")
        with open(bind, "w") as f:
            f.write(bindings)
        return json.loads(dqp(binary, "concretize", path, bind))


def graph(p, gid):
    return next(g for g in p["graphs"] if g["id"] == gid)


def element(p, eid):
    return next(e for g in p["graphs"] for e in g["elements"] if e["id"] == eid)


def relation(p, rid):
    return next(r for g in p["graphs"] for r in g["relations"] if r["id"] == rid)


def operator(p, oid):
    return next(o for g in p["graphs"] for o in g["operators"] if o["id"] == oid)


def param(p, name):
    return next(x for x in p["parameters"] if x["name"] == name)


# CARD1 (abstract): g0 = {e1 record, e19 root; r22 root->e1; op5 pr2 = Value0}
#                   g6 = {e7 <- e1, e8 field, e20 <- e19; r13 e7->e8, r23 <- r22; op12}
# REFINT (abstract): g14 holds reference r23 e16 -> e18 over pr31 / pr34.


def ps03(p):
    p["mappings"][0]["elements"][0] = ["e20", "e7"]


def ps05(p):
    p["mappings"][0]["elements"].append(["e1", "e8"])


def ps06(p):
    # the counted field becomes a copy of the record
    g = graph(p, "g6")
    g["operators"] = []
    g["relations"] = [r for r in g["relations"] if r["id"] != "r13"]
    g["elements"] = [e for e in g["elements"] if e["id"] != "e8"]
    p["parameters"] = [x for x in p["parameters"] if x["name"] not in ("COMP1", "Value1", "Property1",
                                                                      "Property1.attributeName", "Nav1")]


def gs01(p):
    graph(p, "g0")["return_elements"] = []


def gs02(p):
    graph(p, "g0")["return_elements"] = ["e8"]


def gs04(p):
    element(p, "e1")["kind"] = "XML_ELEMENT"


def gs05(p):
    g = graph(p, "g6")
    g["elements"].append({"id": "e99", "name": "root2", "kind": "XML_ROOT", "properties": []})


def gs06(p):
    relation(p, "r13")["kind"] = "GENERIC"
    del relation(p, "r13")["axis_param"]
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Nav1"]


def gs07(p):
    p["mappings"][0]["elements"][1] = ["e19", "e7"]


def gs08(p):
    p["mappings"][0]["elements"] = [m for m in p["mappings"][0]["elements"] if m[0] != "e19"]


def gs09(p):
    relation(p, "r13")["source"] = "e1"


def gs11(p):
    element(p, "e8")["properties"][0]["id"] = "e8"
    operator(p, "op12")["left"] = {"property": "e8"}


def op01(p):
    operator(p, "op5")["left"] = {"property": "pr9"}


def op02(p):
    operator(p, "op5")["left"] = {"parameter": "par11"}


def op03(p):
    operator(p, "op5")["value_type"] = "NUMBER"


def op04(p):
    operator(p, "op5")["value_type"] = "UNSPECIFIED"


def op05(p):
    op = operator(p, "op5")
    op["left"] = {"element": "e1"}
    op["right"] = {"element": "e1"}
    comp = next(x for x in p["parameters"] if x["id"] == op["op_param"])
    comp["options"] = ["LESS"]
    comp["value"] = "LESS"
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Value0"]


def op06(p):
    operator(p, "op5")["right"] = {"operator": "op5"}
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Value0"]


def op07(p):
    operator(p, "op5")["right"] = {"operator": "op12"}
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Value0"]


def op08(p):
    operator(p, "op5")["left"] = {"property": "pr404"}


def op09(p):
    op = operator(p, "op5")
    op["op_param"] = op["right"]["parameter"]
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "COMP0"]


def op10(p):
    param(p, "ValueA")["value"] = "([a-z"


def par01(p):
    operator(p, "op5")["right"] = {"parameter": "par404"}
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Value0"]


def par02(p):
    p["parameters"].append({"id": "par99", "name": "Stray", "kind": "TextLiteral", "predefined": False,
                            "value": None})


def par03(p):
    v = param(p, "Value1")
    v.clear()
    v.update({"id": "par11", "name": "Value1", "kind": "Unknown", "predefined": False})


def par04(p):
    param(p, "Value1")["value"] = None


def par05(p):
    v = param(p, "Value1")
    v["kind"] = "Date"
    v["value"] = "15.10.2026"
    operator(p, "op12")["value_type"] = "DATE"


def par06(p):
    nav = param(p, "Nav1")
    nav["options"] = []
    nav["value"] = None


def par07(p):
    param(p, "COMP0")["value"] = "LESS"


def par08(p):
    param(p, "COMP0")["value"] = None


def par09(p):
    param(p, "Value1")["name"] = "Value0"


def ax01(p):
    g = graph(p, "g6")
    g["relations"].append({"id": "r98", "name": "", "kind": "XML_NAVIGATION", "source": "e20", "target": "e8",
                           "axis_param": "par98"})
    p["parameters"].append({"id": "par98", "name": "NavX", "kind": "AxisOptions", "predefined": True,
                            "options": ["descendant"], "value": "descendant", "depth": 1})


def ax02(p):
    g = graph(p, "g0")
    g["relations"].append({"id": "r98", "name": "", "kind": "XML_NAVIGATION", "source": "e1", "target": "e19",
                           "axis_param": "par98"})
    p["parameters"].append({"id": "par98", "name": "NavX", "kind": "AxisOptions", "predefined": True,
                            "options": ["child"], "value": "child", "depth": 1})


def ax03(p):
    g = graph(p, "g14")
    root = next(e for e in g["elements"] if e["kind"] == "XML_ROOT")
    ref = next(r for r in g["relations"] if r["kind"] == "XML_REFERENCE")
    ref["source"] = root["id"]


def ax04(p):
    operator(p, "op5")["left"] = {"element": "e19"}
    operator(p, "op5")["right"] = {"element": "e1"}
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Value0"]


def ax05(p):
    del relation(p, "r13")["axis_param"]
    p["parameters"] = [x for x in p["parameters"] if x["name"] != "Nav1"]


def ax06(p):
    element(p, "e20")["kind"] = "XML_ELEMENT"


def ax07(p):
    ref = next(r for g in p["graphs"] for r in g["relations"] if r["kind"] == "XML_REFERENCE")
    ref["source_property"], ref["target_property"] = ref["target_property"], ref["source_property"]


def ax08(p):
    prop = param(p, "PropertyA1")
    prop["value"] = "ATTRIBUTE"
    param(p, "PropertyA1.attributeName")["value"] = None


def ax09(p):
    nav = param(p, "Nav1")
    nav["options"] = ["descendant"]
    nav["value"] = "descendant"
    nav["predefined"] = True
    nav["depth"] = 2


def ax10(p):
    # the mapped root's navigation to the mapped record is no longer a mapping target
    p["mappings"][0]["relations"] = []
    relation(p, "r23")["axis_param"] = "par98"
    p["parameters"].append({"id": "par98", "name": "NavX", "kind": "AxisOptions", "predefined": True,
                            "options": ["child"], "value": "child", "depth": 1})


def ax11(p):
    # a second incoming navigation that closes a cycle instead of reaching the record
    g = graph(p, "g0")
    nav = relation(p, "r22")
    nav["source"] = "e1"


def listing(name):
    with open(os.path.join(ROOT, "fixtures", "bindings", name)) as f:
        return f.read()


MATCH1_BIND = ('Nav0 = child2, Property0 = name, Value0 = "a", Nav1 = child, Property1 = name, Value1 = "b", '
               'PropertyA = data, ValueA = "x"\n')

CASES = [
    ("PS-03", "card", ps03), ("PS-05", "card", ps05), ("PS-06", "card", ps06),
    ("GS-01", "card", gs01), ("GS-02", "card", gs02), ("GS-04", "card_g", gs04), ("GS-05", "card", gs05),
    ("GS-06", "card", gs06), ("GS-07", "card", gs07), ("GS-08", "card", gs08), ("GS-09", "card", gs09),
    ("GS-11", "card", gs11),
    ("OP-01", "card", op01), ("OP-02", "card", op02), ("OP-03", "card", op03), ("OP-04", "card_c", op04),
    ("OP-05", "card", op05), ("OP-06", "card", op06), ("OP-07", "card", op07), ("OP-08", "card", op08),
    ("OP-09", "card", op09), ("OP-10", "match_c", op10),
    ("PAR-01", "card", par01), ("PAR-02", "card", par02), ("PAR-03", "card_c", par03), ("PAR-04", "card_c", par04),
    ("PAR-05", "card", par05), ("PAR-06", "card", par06), ("PAR-07", "card", par07), ("PAR-08", "card", par08),
    ("PAR-09", "card", par09),
    ("AX-01", "card", ax01), ("AX-02", "card", ax02), ("AX-03", "refint", ax03), ("AX-04", "card", ax04),
    ("AX-05", "card", ax05), ("AX-06", "card", ax06), ("AX-07", "refint", ax07), ("AX-08", "refint_c", ax08),
    ("AX-09", "card", ax09), ("AX-10", "card", ax10), ("AX-11", "card", ax11),
]


def main(argv):
    if len(argv) < 2:
        print(__doc__, file=sys.stderr)
        return 2
    binary = argv[1]
    out = argv[2] if len(argv) > 2 else os.path.join(ROOT, "fixtures", "constraints")
    os.makedirs(out, exist_ok=True)
    bases = {
        "card": export(binary, "CARD1", "x"),
        "card_g": export(binary, "CARD1", "g"),
        "card_c": concrete(binary, "CARD1", listing("card1_listing.bind")),
        "match_c": concrete(binary, "MATCH1", MATCH1_BIND),
        "refint": export(binary, "REFINT", "x"),
        "refint_c": concrete(binary, "REFINT", listing("refint_listing.bind")),
    }
    for cid, base, mutate in CASES:
        bad = copy.deepcopy(bases[base])
        mutate(bad)
        for suffix, doc in (("pass", bases[base]), ("fail", bad)):
            with open(os.path.join(out, f"{cid}.{suffix}.dqp.json"), "w") as f:
                json.dump(doc, f, indent=2)
                f.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
