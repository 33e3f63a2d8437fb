"""Validate the CLI's --json output against docs/schema.json.

usage: check_schema.py BANGLAB_BIN SCHEMA"""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, SCHEMA = sys.argv[1], sys.argv[2]
schema = json.load(open(SCHEMA))


def output(args):
    r = subprocess.run([BIN, "--json"] + args, capture_output=True, text=True)
    return r.stdout


def check(name, args):
    sub = dict(schema["commands"][name])
    sub["$defs"] = schema["$defs"]
    sub["commands"] = schema["commands"]
    jsonschema.validate(json.loads(output(args)), sub)


def check_lines(args):
    for line in output(args).splitlines():
        jsonschema.validate(json.loads(line), {"$defs": schema["$defs"], "$ref": "#/$defs/trace_step"})


check("parse", ["parse", "x[x<-!y] (\\z.der z)"])
check("reduce", ["reduce", "--strategy", "full", "(\\x.!der !x) !y"])
check_lines(["reduce", "--trace", "(\\x.x x) !y"])
check("normalize", ["normalize", "(\\x.x x) !y"])
check("classify", ["classify", "!x y"])
check("measure", ["measure", "(x x)[x<-!y]"])
check("typings", ["typings", "--system", "V", "x"])
inh = json.loads(output(["inhabit", "--system", "B", "--type", "[a]->[a]"]))
check("inhabit", ["inhabit", "--system", "B", "--type", "[a]->[a]"])
check("testable", ["testable", "--system", "B", "--type", "[]", "--env", "x:[[]]"])
check("meaningful", ["meaningful", "x !y"])
check("meaningful", ["meaningful", "!x y"])
check("embed", ["embed", "--from", "cbv", "x y"])
check("simulate", ["simulate", "--from", "cbv", "(\\x.x) y"])
check("transfer", ["transfer", "--from", "cbn", "\\z.z"])
check("prop-test", ["prop-test", "--suite", "typability", "--size", "3"])
check("corpus", ["corpus", "--check"])
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
    json.dump(inh["derivations"][0], f)
try:
    check("check-derivation", ["check-derivation", f.name])
finally:
    os.unlink(f.name)
print("schema ok")
