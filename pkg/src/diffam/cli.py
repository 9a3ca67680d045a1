"""Command-line front end.

Exit codes: 0 success or pass, 1 mathematical failure (verification failed,
construction rejected), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import catalog, construct, intersect
from .errors import ConstructionRejected, DiffamError, InputError, VerificationFailed
from .group import Group, canonical_halving
from .verify import (
    verify_ads,
    verify_bibd,
    verify_ddf,
    verify_difference_family,
    verify_difference_set,
    verify_nrb,
)

SCHEMA_VERSION = 1
KINDS = ("df", "ds", "ads", "ddf", "bibd", "nrb")
METHODS = {"c1": "c1", "c2": "c2", "c3plus": "c3plus", "c3+": "c3plus", "c3minus": "c3minus",
           "c3-": "c3minus", "c4": "c4", "c5": "c5", "c6": "c6"}


# -- documents ------------------------------------------------------------------------


def design_document(kind: str, group: Group | None, blocks, claimed: dict, provenance: dict, **extra) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind}
    if group is not None:
        doc["group"] = group.descriptor()
    doc["blocks"] = [[int(x) for x in b] for b in blocks]
    doc["claimed"] = claimed
    doc["provenance"] = provenance
    doc.update(extra)
    return doc


def family_document(fam: construct.DesignFamily, inputs: dict) -> dict:
    K = fam.K
    claimed = {"v": fam.v, "K": K[0] if len(K) == 1 else K, "gamma": fam.gamma, "u": fam.u}
    params = {k: v for k, v in fam.params.items() if k != "source"}
    return design_document("df", fam.group, fam.block_lists(), claimed,
                           {"method": fam.method, "inputs": inputs, "details": params})


def source_document(obj, inputs: dict) -> dict:
    if isinstance(obj, catalog.DifferenceSet):
        return design_document("ds", obj.group, [obj.elements], {"v": obj.v, "k": obj.k, "lambda": obj.lam},
                               {"method": "catalog", "inputs": inputs})
    if isinstance(obj, catalog.AlmostDifferenceSet):
        return design_document("ads", obj.group, [obj.elements],
                               {"v": obj.v, "k": obj.k, "lambda": obj.lam, "t": obj.t},
                               {"method": "catalog", "inputs": inputs})
    return design_document("ddf", obj.group, obj.blocks, {"v": obj.v, "k": obj.k, "lambda": obj.lam, "u": len(obj.blocks)},
                           {"method": "catalog", "inputs": inputs})


def load_document(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read document {path}: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"{path}: expected a schema_version {SCHEMA_VERSION} document")
    if not isinstance(doc.get("blocks"), list) or not all(isinstance(b, list) for b in doc["blocks"]):
        raise InputError(f"{path}: blocks must be a list of lists of element codes")
    return doc


def document_group(doc: dict) -> Group:
    if "group" not in doc:
        raise InputError("document has no group descriptor")
    return Group.from_descriptor(doc["group"])


def verify_document(doc: dict, kind: str | None = None):
    kind = kind or doc.get("kind", "df")
    blocks = doc["blocks"]
    if kind in ("bibd", "nrb"):
        points = doc.get("points")
        if points is None and "group" in doc:
            points = document_group(doc).order
        if points is None:
            raise InputError("a block-design document needs 'points' or a group")
        if kind == "bibd":
            return verify_bibd(points, blocks)
        if "classes" not in doc:
            raise InputError("an nrb document needs 'classes'")
        return verify_nrb(points, blocks, doc["classes"])
    G = document_group(doc)
    if kind == "df":
        return verify_difference_family(G, blocks, doc.get("claimed", {}).get("gamma"))
    if kind == "ddf":
        return verify_ddf(G, blocks)
    if len(blocks) != 1:
        raise InputError(f"a {kind} document holds exactly one block")
    return verify_difference_set(G, blocks[0]) if kind == "ds" else verify_ads(G, blocks[0])


# -- sources ----------------------------------------------------------------------------


def _source(args):
    """The catalog object named by --ds, or the object stored in --in."""
    if getattr(args, "input", None):
        doc = load_document(args.input)
        G = document_group(doc)
        kind = doc.get("kind")
        if kind == "ds":
            return catalog.certify_ds(G, doc["blocks"][0], Path(args.input).stem), {"in": args.input}
        if kind == "ads":
            return catalog.certify_ads(G, doc["blocks"][0], Path(args.input).stem), {"in": args.input}
        if kind == "ddf":
            return catalog.certify_ddf(G, doc["blocks"], Path(args.input).stem), {"in": args.input}
        raise InputError(f"cannot construct from a {kind!r} document")
    if not args.ds:
        raise InputError("name a source with --ds or --in")
    inputs = {"ds": args.ds, **{f: getattr(args, f) for f in ("q", "m", "e") if getattr(args, f) is not None}}
    if args.ds == "qr_ads":
        return catalog.qr_ads(_need(args, "q")), inputs
    if args.ds == "cyclotomic_ddf":
        return catalog.cyclotomic_ddf(_need(args, "q"), _need(args, "e")), inputs
    return catalog.build_ds(args.ds, q=args.q, m=args.m), inputs


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required here")
    return value


def _expect(obj, cls, method):
    if not isinstance(obj, cls):
        raise InputError(f"{method} needs a {cls.__name__} source")
    return obj


# -- commands ------------------------------------------------------------------------------


def cmd_construct(args) -> int:
    method = METHODS[args.method]
    src, inputs = _source(args)
    inputs = {**inputs, "method": method}
    for f in ("s", "ell", "halving", "drop_trivial", "search_delta"):
        val = getattr(args, f)
        if val not in (None, False):
            inputs[f] = val
    if method == "c1":
        fam = construct.c1_intersection_family(_expect(src, catalog.DifferenceSet, method))
    elif method == "c2":
        ds = _expect(src, catalog.DifferenceSet, method)
        construct.c2_check(ds)
        halving = construct.skew_halving(ds) if args.halving == "skew" else canonical_halving(ds.group)
        fam = construct.c2_half_family(ds, halving)
    elif method == "c3plus":
        fam = construct.c3_augment(_expect(src, catalog.DifferenceSet, method), _need(args, "s"), args.budget)
    elif method == "c3minus":
        fam = construct.c3_reduce(_expect(src, catalog.DifferenceSet, method), _need(args, "s"), args.budget)
    elif method == "c4":
        fam = construct.c4_subgroup_partition(_expect(src, catalog.DifferenceSet, method), _need(args, "ell"),
                                              drop_trivial=args.drop_trivial)
    elif method == "c5":
        fam = construct.c5_nrb_union(_expect(src, catalog.DisjointDifferenceFamily, method), _need(args, "s"),
                                     args.budget)
    else:
        ads = _expect(src, catalog.AlmostDifferenceSet, method)
        if args.search_delta:
            delta = construct.search_delta(ads, args.budget)
        else:
            delta = {t: 0 for t in ads.T}
        fam = construct.c6_ads_family(construct.AdsProfile(ads, delta))
    _emit(family_document(fam, inputs), args.out)
    return 0


def cmd_export(args) -> int:
    src, inputs = _source(args)
    _emit(source_document(src, inputs), args.out)
    return 0


def cmd_verify(args) -> int:
    doc = load_document(args.file)
    report = verify_document(doc, args.kind)
    if args.embed:
        doc["verification"] = report.to_dict()
        Path(args.file).write_text(json.dumps(doc, indent=2) + "\n")
    _emit(report.to_dict(), None)
    return 0 if report.passed else 1


def cmd_intersect(args) -> int:
    rows = []
    if args.solver:
        if args.solver == "l2":
            rows = [{"source": "closed_form", "ks": list(p)} for p in intersect.solve_l2(_need(args, "k"), _need(args, "lam"))]
            out = rows
        elif args.solver == "l3":
            v, k, lam = _need(args, "v"), _need(args, "k"), _need(args, "lam")
            if v % 3:
                raise InputError(f"v = {v} is not divisible by 3")
            rows = [{"source": "enumerated", "ks": list(p)} for p in intersect.solve_l3(v, k, lam, v // 3)]
            out = rows
        else:
            res = intersect.solve_l4_hadamard(_need(args, "u"))
            rows = [{"source": "enumerated", "ks": list(p)} for p in res.profiles]
            out = {"profiles": rows, "closed_form": res.closed_form, "discrepancies": res.discrepancies}
    else:
        ell = _need(args, "ell")
        if args.ds == "singer":
            res = intersect.singer_ki(_need(args, "q"), _need(args, "m"), ell)
        elif args.ds == "twinprime":
            q = _need(args, "q")
            res = intersect.twin_ki(q, (ell, q * (q + 2) // ell))
        else:
            ds, _ = _source(args)
            prof = intersect.direct_profile(ds, ell)
            res = intersect.KiResult(None, prof, False, {"fallback": "direct_count_only"})
        out = res.to_dict()
        if res.closed_form:
            rows.append({"source": "closed_form", "ks": list(res.closed_form.ks)})
        rows.append({"source": "direct_count", "ks": list(res.direct_count.ks)})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        width = max((len(r["ks"]) for r in rows), default=0)
        w.writerow(["source"] + [f"k{i}" for i in range(width)])
        for r in rows:
            w.writerow([r["source"]] + r["ks"])
        sys.stdout.write(buf.getvalue())
    else:
        _emit(out, None)
    return 0


def cmd_solve(args) -> int:
    if args.problem == "two-squares":
        res = intersect.two_squares(args.target)
        _emit(res.to_dict() if args.full else [list(p) for p in res.pairs], None)
    else:
        res = intersect.norm_form_solve(args.target)
        out = {"solvable": res.solvable, "pairs": [list(p) for p in res.pairs]}
        _emit(res.to_dict() if args.full else out, None)
    return 0


def cmd_catalog(args) -> int:
    rows = [{"name": f.name, "params": f.params, "requires": f.requires, "flags": list(f.flags)}
            for f in catalog.FAMILIES.values()]
    if args.format == "json":
        _emit(rows, None)
    else:
        for r in rows:
            print(f"{r['name']:<18} {r['params']}\n{'':<18} requires: {r['requires']}")
    return 0


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- parser -------------------------------------------------------------------------------


def _source_flags(p):
    p.add_argument("--ds", help="catalog family (see `catalog list`)")
    p.add_argument("--in", dest="input", metavar="FILE", help="source document instead of --ds")
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--e", type=int, help="class count for cyclotomic_ddf")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diffam", description="Difference families from difference sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a difference family")
    p.add_argument("--method", required=True, choices=sorted(METHODS))
    _source_flags(p)
    p.add_argument("--s", type=int, help="subset size for c3+/c3-/c5")
    p.add_argument("--ell", type=int, help="subgroup index for c4")
    p.add_argument("--halving", choices=["canonical", "skew"], default="canonical")
    p.add_argument("--drop-trivial", action="store_true")
    p.add_argument("--search-delta", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("export", help="write a catalog object as a document")
    _source_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="certify a document by brute force")
    p.add_argument("file")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--embed", action="store_true", help="write the report back into the document")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("intersect", help="intersection numbers")
    _source_flags(p)
    p.add_argument("--ell", type=int)
    p.add_argument("--solver", choices=["l2", "l3", "l4"])
    p.add_argument("--v", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--lam", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("solve", help="diophantine helpers")
    p.add_argument("problem", choices=["two-squares", "norm-form"])
    p.add_argument("target", type=int)
    p.add_argument("--full", action="store_true", help="include criterion flags")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("catalog", help="list catalog families")
    p.add_argument("action", choices=["list"])
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConstructionRejected as exc:
        _emit({"rejected": True, "reason": exc.reason, "details": exc.details}, None)
        return 1
    except VerificationFailed as exc:
        _emit({"verification_failed": True, "report": exc.report.to_dict()}, None)
        return 1
    except (DiffamError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
