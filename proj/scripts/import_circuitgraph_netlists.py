#!/usr/bin/env python3
"""Convert the ISCAS gate-level Verilog netlists shipped with the `circuitgraph`
wheel (MIT licensed) into bench format for the test corpus.

The circuitgraph copies are Genus re-syntheses of the ISCAS designs, so gate
counts differ from the original distributions even though the functions match.

usage: import_circuitgraph_netlists.py <circuitgraph wheel or netlists dir> <out dir>
"""
import pathlib
import re
import sys
import zipfile

ISCAS85 = ["c432", "c499", "c880", "c1355", "c1908", "c2670", "c3540", "c5315", "c6288", "c7552"]
ISCAS89 = ["s13207", "s38417", "s38584"]
PRIMS = {"and": "AND", "nand": "NAND", "or": "OR", "nor": "NOR", "xor": "XOR",
         "xnor": "XNOR", "not": "NOT", "buf": "BUFF"}
CLOCKS = {"clk", "clock", "CK"}


def statements(text):
    text = re.sub(r"//[^\n]*", "", text)
    text = text.split("endmodule", 1)[0]
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        if stmt:
            yield stmt


def names(lst):
    return [n.strip() for n in lst.split(",") if n.strip()]


def convert(name, text):
    inputs, outputs, body = [], [], []
    consts = []
    for stmt in statements(text):
        head = stmt.split(" ", 1)[0]
        if head == "module" or head == "wire":
            continue
        if head == "input":
            inputs += [n for n in names(stmt[len("input"):]) if n not in CLOCKS]
        elif head == "output":
            outputs += names(stmt[len("output"):])
        elif head == "assign":
            lhs, rhs = [s.strip() for s in stmt[len("assign"):].split("=")]
            if rhs in ("1'b0", "1'b1"):
                consts.append((lhs, rhs == "1'b1"))
            else:
                body.append(f"{lhs} = BUFF({rhs})")
        elif head in PRIMS:
            pins = names(stmt[stmt.index("(") + 1:stmt.rindex(")")])
            body.append(f"{pins[0]} = {PRIMS[head]}({', '.join(pins[1:])})")
        elif head in ("ff", "fflopd"):
            d = re.search(r"\.D\s*\(\s*([^) ]+)\s*\)", stmt).group(1)
            q = re.search(r"\.Q\s*\(\s*([^) ]+)\s*\)", stmt).group(1)
            body.append(f"{q} = DFF({d})")
        else:
            raise ValueError(f"{name}: unsupported statement: {stmt[:60]}")
    for wire, value in consts:
        anchor = inputs[0]
        body.append(f"{wire}_tie = NOT({anchor})")
        body.append(f"{wire} = {'OR' if value else 'AND'}({anchor}, {wire}_tie)")
    lines = [f"# {name}", "# converted from circuitgraph (MIT); Genus re-synthesis of the ISCAS design"]
    lines += [f"INPUT({n})" for n in inputs]
    lines += [f"OUTPUT({n})" for n in outputs]
    lines += body
    return "\n".join(lines) + "\n"


def main():
    src = pathlib.Path(sys.argv[1])
    out = pathlib.Path(sys.argv[2])
    if src.suffix == ".whl":
        zf = zipfile.ZipFile(src)
        read = lambda n: zf.read(f"circuitgraph/netlists/{n}.v").decode()
    else:
        read = lambda n: (src / f"{n}.v").read_text()
    for suite, group in (("iscas85", ISCAS85), ("iscas89", ISCAS89)):
        (out / suite).mkdir(parents=True, exist_ok=True)
        for n in group:
            (out / suite / f"{n}.bench").write_text(convert(n, read(n)))
            print(f"wrote {suite}/{n}.bench")


if __name__ == "__main__":
    main()
