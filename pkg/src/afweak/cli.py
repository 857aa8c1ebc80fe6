"""Command-line interface: construction, classification, joins, export.

JSON is the single interchange format; every JSON the tool emits is
accepted back by the matching --in flag.  DOT output is write-only.
Exit codes: 0 success, 1 domain errors (the error name and witness go to
stderr), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import closure as _closure
from . import fan as _fan
from . import lattice as _lattice
from . import orders as _orders
from . import perms as _perms
from . import roots as _roots
from .errors import AfweakError

# ---------------------------------------------------------------------------
# serialization


def type_from_json(d) -> _roots.AffineType:
    return _roots.AffineType(d["family"], int(d["n"]))


def type_to_json(typ: _roots.AffineType) -> dict:
    return {"family": typ.family, "n": typ.n}


def root_to_json(r: _roots.Root) -> dict:
    return {**type_to_json(r.type), "i": r.i, "j": r.j}


def root_from_json(d) -> _roots.Root:
    return _roots.canonical_root(type_from_json(d), int(d["i"]), int(d["j"]))


def windowset_to_json(s: _closure.WindowSet) -> dict:
    return {
        **type_to_json(s.type),
        "H": s.H,
        "roots": [[r.i, r.j] for r in s.sorted_members()],
    }


def windowset_from_json(d) -> _closure.WindowSet:
    typ = type_from_json(d)
    roots = frozenset(
        _roots.canonical_root(typ, int(i), int(j)) for i, j in d["roots"]
    )
    return _closure.WindowSet(typ, int(d["H"]), roots)


def perm_to_json(w: _perms.AffinePermutation) -> dict:
    return {**type_to_json(w.type), "window": list(w.window)}


def perm_from_json(d) -> _perms.AffinePermutation:
    typ = type_from_json(d)
    if "word" in d:
        return word_element(typ, d["word"])
    return _perms.from_window(typ, d["window"])


def word_element(typ, text: str) -> _perms.AffinePermutation:
    """Parse a word in simple generators, written like "s0 s1 s2"."""
    gens = _perms.simple_reflections(typ)
    w = _perms.identity(typ)
    for tok in text.split():
        if not tok.startswith("s") or not tok[1:].isdigit():
            raise AfweakError(f"bad generator token {tok!r}")
        k = int(tok[1:])
        if k >= len(gens):
            raise AfweakError(f"no generator {tok} in this type")
        w = _perms.multiply(w, gens[k])
    return w


def face_to_json_blocks(face: _fan.FanFace) -> list:
    return [sorted(b) for b in face.blocks]


def face_from_json(typ, blocks) -> _fan.FanFace:
    return _fan.face_from_blocks(typ, [frozenset(b) for b in blocks])


def triple_to_json(t: _fan.BiclosedTriple) -> dict:
    return {
        **type_to_json(t.type),
        "face": face_to_json_blocks(t.face),
        "phi_prime": sorted(t.phi_prime),
        "w": {cid: list(u.window) for cid, u in t.w},
    }


def triple_from_json(d) -> _fan.BiclosedTriple:
    typ = type_from_json(d)
    face = face_from_json(typ, d["face"])
    decomp = _fan.parahoric(face)
    wmap = {}
    for cid, win in dict(d.get("w", {})).items():
        comp = decomp.by_id(cid)
        wmap[cid] = _perms.from_window(comp.ctype, win)
    return _fan.build_biclosed(face, frozenset(d.get("phi_prime", ())), wmap)


def order_to_json(o: _orders.PeriodicOrder) -> dict:
    orient = []
    perms = {}
    for k in range(len(o.face.blocks)):
        d = o.block_data[k]
        orient.append(bool(d.reversed) if d is not None else None)
        if d is not None and d.perm is not None:
            perms[str(k)] = list(d.perm.window)
    return {
        **type_to_json(o.type),
        "blocks": face_to_json_blocks(o.face),
        "orient": orient,
        "perms": perms,
    }


def order_from_json(d) -> _orders.PeriodicOrder:
    typ = type_from_json(d)
    face = face_from_json(typ, d["blocks"])
    reversed_blocks = [k for k, flag in enumerate(d.get("orient", [])) if flag]
    perms = {}
    for k, win in dict(d.get("perms", {})).items():
        ptype = _orders._block_perm_type(face, int(k))
        if ptype is None:
            raise AfweakError(f"block {k} takes no permutation")
        perms[int(k)] = _perms.from_window(ptype, win)
    return _orders.periodic_order(face, reversed_blocks, perms)


def load_any_triple(d) -> _fan.BiclosedTriple:
    """Accept a triple, a permutation (as N(w)), an order or a window set."""
    if "face" in d:
        return triple_from_json(d)
    if "window" in d or "word" in d:
        return _fan.triple_of_element(perm_from_json(d))
    if "blocks" in d:
        return _orders.inversion_set(order_from_json(d))
    if "roots" in d:
        return _fan.classify(windowset_from_json(d))
    raise AfweakError("unrecognized input object")


def _load(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def export_dot(labels, covers, name="poset") -> str:
    """A DOT digraph with cover relations as edges (lower -> upper)."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for k, label in enumerate(labels):
        lines.append(f'  n{k} [label="{label}"];')
    for a, b in covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_close(args):
    s = windowset_from_json(_load(args.infile))
    _emit(windowset_to_json(_closure.close(s)), args.out)
    return 0


def _cmd_interior(args):
    s = windowset_from_json(_load(args.infile))
    _emit(windowset_to_json(_closure.interior(s)), args.out)
    return 0


def _cmd_check(args):
    s = windowset_from_json(_load(args.infile))
    cert = _closure.is_biclosed(s)
    result = {
        "biclosed": cert.ok,
        "doubling": _closure.doubling_check(s),
    }
    if not cert.ok:
        result["violated"] = cert.violated
        result["witness"] = [[r.i, r.j] for r in cert.witness]
    _emit(result, args.out)
    return 0 if cert.ok else 1


def _cmd_classify(args):
    t = load_any_triple(_load(args.infile))
    out = triple_to_json(t)
    if t.type.family == "A":
        out["one_indexed_face"] = [list(b) for b in t.face.one_indexed_blocks()]
    _emit(out, args.out)
    return 0


def _cmd_build(args):
    typ = _roots.AffineType(args.family, args.n)
    face = face_from_json(typ, json.loads(args.face))
    if args.phi_blocks is not None:
        phi = _fan.phi_prime_from_blocks(face, json.loads(args.phi_blocks))
    else:
        phi = frozenset(args.phi or ())
    wmap = {}
    if args.w:
        decomp = _fan.parahoric(face)
        for item in args.w:
            cid, _, spec_ = item.partition("=")
            comp = decomp.by_id(cid)
            if spec_.lstrip().startswith("["):
                wmap[cid] = _perms.from_window(comp.ctype, json.loads(spec_))
            else:
                wmap[cid] = word_element(comp.ctype, spec_.replace(",", " "))
    t = _fan.build_biclosed(face, phi, wmap)
    out = triple_to_json(t)
    if args.height is not None:
        out["window"] = windowset_to_json(t.window(args.height))
    _emit(out, args.out)
    return 0


def _cmd_order(args):
    o = order_from_json(_load(args.infile))
    if args.normalize:
        o = _orders.normalize(o)
    out = order_to_json(o)
    if args.render:
        width = args.width
        pts = _orders.render(o, -width, width)
        out["render"] = " \u227a ".join(str(x) for x in pts)
    _emit(out, args.out)
    return 0


def _cmd_join(args, mode: str):
    ts = [load_any_triple(_load(p)) for p in args.infile]
    family = args.family or args.type
    if family and args.n:
        typ = _roots.AffineType(family, args.n)
    else:
        typ = ts[0].type
        if family and typ.family != family:
            raise AfweakError(f"inputs are type {typ.family}, not {family}")
    if typ.family == "A":
        t = (_lattice.join_A if mode == "join" else _lattice.meet_A)(ts, typ)
    elif typ.family == "C":
        t = (_lattice.join_C if mode == "join" else _lattice.meet_C)(ts, typ)
    else:
        raise AfweakError("exact join/meet serve families A and C; "
                          "use try-join for B and D")
    _emit(triple_to_json(t), args.out)
    return 0


def _cmd_try_join(args):
    ts = [load_any_triple(_load(p)) for p in args.infile]
    if args.type and ts[0].type.family != args.type:
        raise AfweakError(f"inputs are type {ts[0].type.family}, not {args.type}")
    res = _lattice.try_join(ts, args.height)
    if res.ok:
        _emit({"ok": True, "join": triple_to_json(res.triple)}, args.out)
        return 0
    wit = res.witness
    _emit(
        {
            "ok": False,
            "violated": wit.violated,
            "witness": [[r.i, r.j] for r in wit.witness],
        },
        args.out,
    )
    return 1


def _cmd_join_finite(args):
    u = tuple(int(c) for c in args.u)
    w = tuple(int(c) for c in args.w)
    out = _lattice.join_finite(args.family, args.rank, u, w)
    _emit({"join": "".join(map(str, out)), "one_line": list(out)}, args.out)
    return 0


def _cmd_faces(args):
    typ = _roots.AffineType(args.family, args.n)
    faces = _fan.enumerate_faces(typ)
    if args.dot:
        _, leq = _fan.face_poset(typ)
        labels = [
            "(" + "|".join(",".join(map(str, b)) for b in f.one_indexed_blocks()) + ")"
            for f in faces
        ]
        strict = {
            (a, b)
            for a in range(len(faces))
            for b in range(len(faces))
            if a != b and leq(a, b)
        }
        covers = sorted(
            (a, b)
            for (a, b) in strict
            if not any((a, c) in strict and (c, b) in strict for c in range(len(faces)))
        )
        with open(args.dot, "w") as fh:
            fh.write(export_dot(labels, covers, "faces"))
    _emit(
        {
            **type_to_json(typ),
            "count": len(faces),
            "faces": [face_to_json_blocks(f) for f in faces],
        },
        args.out,
    )
    return 0


def _cmd_hasse(args):
    typ = _roots.AffineType(args.family, args.n)
    face = face_from_json(typ, json.loads(args.face))
    if args.phi_blocks is not None:
        phi = _fan.phi_prime_from_blocks(face, json.loads(args.phi_blocks))
    else:
        phi = frozenset(args.phi or ())
    frag = _fan.path_component_poset(face, phi, args.bound)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(export_dot(frag.labels, frag.covers, "hasse"))
    _emit(
        {
            "nodes": list(frag.labels),
            "covers": [list(c) for c in frag.covers],
        },
        args.out,
    )
    return 0


def _cmd_verify(args):
    from . import verify as _verify

    seed = int(os.environ.get("AFWEAK_SEED", "0"))
    rng = random.Random(seed)
    names = _verify.SUITES.keys() if args.suite == "all" else [args.suite]
    failures = 0
    for name in names:
        for case, ok in _verify.SUITES[name](rng):
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {case}")
            failures += 0 if ok else 1
    print(f"{'OK' if not failures else 'FAILED'} ({failures} failures)")
    return 0 if not failures else 1


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="afweak",
        description="biclosed root sets and the extended weak order "
        "for the classical affine types",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_io(sp, many=False):
        if many:
            sp.add_argument("--in", dest="infile", nargs="+", required=True)
        else:
            sp.add_argument("--in", dest="infile", required=True)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("close", help="windowed closure of a root set")
    add_io(sp)
    sp = sub.add_parser("interior", help="windowed interior of a root set")
    add_io(sp)
    sp = sub.add_parser("check", help="biclosedness certificate + doubling")
    add_io(sp)
    sp = sub.add_parser("classify", help="triple of a window set or order")
    add_io(sp)

    sp = sub.add_parser("build", help="assemble a triple (F, Phi', w)")
    sp.add_argument("--family", required=True, choices="ABCD")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--face", required=True, help="JSON list of blocks")
    sp.add_argument("--phi", nargs="*", help="component ids")
    sp.add_argument("--phi-blocks", dest="phi_blocks",
                    help="JSON list of block positions")
    sp.add_argument("--w", nargs="*",
                    help="component assignments id=[window] or id=s0,s1")
    sp.add_argument("--height", type=int, default=None,
                    help="also print the windowed set at this height")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("order", help="normalize/render a periodic order")
    add_io(sp)
    sp.add_argument("--render", action="store_true")
    sp.add_argument("--normalize", action="store_true")
    sp.add_argument("--width", type=int, default=8)

    for name in ("join", "meet"):
        sp = sub.add_parser(name, help=f"exact {name} (families A and C)")
        add_io(sp, many=True)
        sp.add_argument("--family", choices="AC", default=None)
        sp.add_argument("--type", choices="AC", default=None)
        sp.add_argument("--n", type=int, default=None)

    sp = sub.add_parser("try-join", help="windowed join attempt (B and D)")
    add_io(sp, many=True)
    sp.add_argument("--type", choices="BD", default=None)
    sp.add_argument("--height", type=int, required=True)

    sp = sub.add_parser("join-finite", help="join in a finite Weyl group")
    sp.add_argument("--family", required=True, choices="ABCD")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--u", required=True, help="one-line notation, e.g. 624351")
    sp.add_argument("--w", required=True)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("faces", help="enumerate Coxeter-fan faces")
    sp.add_argument("--family", required=True, choices="ABCD")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dot", default=None, help="write the face poset as DOT")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("hasse", help="poset fragment of a path component")
    sp.add_argument("--family", required=True, choices="ABCD")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--face", required=True)
    sp.add_argument("--phi", nargs="*")
    sp.add_argument("--phi-blocks", dest="phi_blocks")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--dot", default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument(
        "suite",
        choices=["paper-examples", "lattice-axioms", "roundtrip",
                 "oracle-equivalence", "finite-enumeration", "all"],
    )
    return p


def run(argv) -> int:
    args = _parser().parse_args(argv)
    handlers = {
        "close": _cmd_close,
        "interior": _cmd_interior,
        "check": _cmd_check,
        "classify": _cmd_classify,
        "build": _cmd_build,
        "order": _cmd_order,
        "join": lambda a: _cmd_join(a, "join"),
        "meet": lambda a: _cmd_join(a, "meet"),
        "try-join": _cmd_try_join,
        "join-finite": _cmd_join_finite,
        "faces": _cmd_faces,
        "hasse": _cmd_hasse,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.cmd](args)
    except AfweakError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
