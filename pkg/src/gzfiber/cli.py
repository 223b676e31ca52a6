"""Command-line front end.

Subcommands: validate, pattern, fiber, cohomology, homotopy, oracle, faces,
report.  Staircase documents are read from a path or stdin in the canonical
JSON interchange form; outputs are JSON (default) or a human-readable text
layer over the same data.  Exit codes: 0 ok, 1 validation/oracle failure,
2 usage or schema error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import gzfiber
from gzfiber.staircase import (
    SchemaError,
    Staircase,
    StaircaseError,
    StructureError,
    parse_rational,
    validate,
)
from gzfiber.pattern import build_pattern, pattern_from_merges
from gzfiber.groupexpr import factorize, to_biquotient
from gzfiber.invariants import invariants_report
from gzfiber.oracle import build_xi, conjugator_a, eigencheck
from gzfiber.degeneration import (
    DegenerationError,
    check_coherence,
    enumerate_faces,
    hasse_dot,
    torus_map,
    x0_skeleton,
)
from gzfiber.render import RenderError, render, render_figure

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _read_document(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON input: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("input must be a JSON object")
    return doc


def _parse_staircase_doc(doc: dict) -> Staircase:
    rows = doc.get("rows")
    flavor = doc.get("flavor")
    # parse without the validity requirement; validation is a subcommand concern
    if flavor not in ("unitary", "orthogonal"):
        raise SchemaError(f"flavor must be 'unitary' or 'orthogonal', got {flavor!r}")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError("'rows' must be a non-empty list of lists")
    parsed = tuple(tuple(parse_rational(x) for x in row) for row in rows)
    return Staircase(flavor, parsed)


def _emit(doc, as_json: bool, text: str | None = None) -> None:
    if as_json or text is None:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# -- per-staircase payload builders (shared by single and batch modes) ------


def _payload_validate(s: Staircase) -> tuple[dict, int]:
    report = validate(s)
    return report.to_json(), EXIT_OK if report.ok else EXIT_FAIL


def _payload_fiber(s: Staircase) -> tuple[dict, int]:
    pres = factorize(build_pattern(s))
    return pres.to_json(), EXIT_OK


def _payload_cohomology(s: Staircase) -> tuple[dict, int]:
    return invariants_report(build_pattern(s))["cohomology"], EXIT_OK


def _payload_homotopy(s: Staircase) -> tuple[dict, int]:
    return invariants_report(build_pattern(s))["pi"], EXIT_OK


def _payload_oracle(s: Staircase, tol: float) -> tuple[dict, int]:
    rep = eigencheck(s, tol)
    payload = rep.to_json()
    for row in payload["per_k"]:
        xi = build_xi(s, row["k"])
        conj = conjugator_a(xi, s.row(row["k"] + 1))
        row["conjugator_residual"] = conj["residual"]
        row["orthogonality"] = conj["orthogonality"]
    return payload, EXIT_OK if rep.ok else EXIT_FAIL


def _payload_report(s: Staircase, tol: float) -> tuple[dict, int]:
    vrep = validate(s)
    out: dict = {"version": gzfiber.__version__, "input": s.to_json(), "validation": vrep.to_json()}
    status = EXIT_OK
    if vrep.ok:
        p = build_pattern(s)
        pres = factorize(p)
        out["pattern"] = p.to_json()
        out["fiber"] = pres.to_json()
        inv = invariants_report(p)
        out["homotopy"] = inv["pi"]
        out["cohomology"] = inv["cohomology"]
        orep = eigencheck(s, tol)
        out["oracle"] = orep.to_json()
        bq = to_biquotient(p)
        out["biquotient"] = {"global": str(bq["global"]), "factors": [str(b) for b in bq["factors"]]}
        if not orep.ok:
            status = EXIT_FAIL
    else:
        status = EXIT_FAIL
    return out, status


def _run_batch(path: str, worker) -> tuple[list, int]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    text = text.strip()
    if text.startswith("["):
        docs = json.loads(text)
    else:
        docs = [json.loads(line) for line in text.splitlines() if line.strip()]

    def safe(doc) -> tuple[dict | None, str | None, int]:
        try:
            payload, st = worker(_parse_staircase_doc(doc))
            return payload, None, st
        except SchemaError as exc:
            return None, str(exc), EXIT_USAGE
        except StaircaseError as exc:
            return None, str(exc), EXIT_FAIL

    threads = int(os.environ.get("GZ_FIBER_THREADS", "0")) or min(8, len(docs) or 1)
    status = EXIT_OK
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(safe, docs))
    out = []
    for i, (payload, error, st) in enumerate(results):
        entry: dict = {"index": i}
        if error is None:
            entry["result"] = payload
        else:
            entry["error"] = error
        out.append(entry)
        status = max(status, st)
    return out, status


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="gzfiber", description="Topology of Gelfand-Zeitlin fibers")
    ap.add_argument("--version", action="version", version=gzfiber.__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, tol=False):
        p.add_argument("input", nargs="?", default="-", help="staircase JSON path or - for stdin")
        p.add_argument("--format", default="json", help="output format")
        p.add_argument("--batch", default=None, help="file of staircases (JSON array or JSON lines)")
        p.add_argument("--flavor", default=None, choices=["unitary", "orthogonal"], help="require this flavor")
        if tol:
            p.add_argument("--tol", type=float, default=1e-9, help="eigenvalue tolerance")

    add_common(sub.add_parser("validate", help="check interlacing inequalities"))
    pp = sub.add_parser("pattern", help="build and render the GZ pattern")
    add_common(pp)
    pp.add_argument("--out", default=None, help="write a figure (png/svg) to this path")
    add_common(sub.add_parser("fiber", help="direct-factor presentation of the fiber"))
    add_common(sub.add_parser("cohomology", help="cohomology model"))
    add_common(sub.add_parser("homotopy", help="pi_1..pi_3 profile"))
    add_common(sub.add_parser("oracle", help="xi-matrix eigenvalue oracle"), tol=True)
    fp = sub.add_parser("faces", help="enumerate polytope faces and torus maps")
    fp.add_argument("input", nargs="?", default="-", help="JSON with flavor and top_row (or a staircase)")
    fp.add_argument("--format", default="json", help="json or dot (Hasse diagram)")
    fp.add_argument("--n-bound", type=int, default=4, help="largest n to enumerate")
    rp = sub.add_parser("report", help="combined JSON report")
    add_common(rp, tol=True)
    rp.add_argument("--out-dir", default=None, help="also write report.json, pattern.png, cohomology.csv")

    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except (SchemaError, StructureError, DegenerationError, RenderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StaircaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _require_flavor(s: Staircase, flavor: str | None) -> None:
    if flavor and s.flavor != flavor:
        raise SchemaError(f"expected a {flavor} staircase, got {s.flavor}")


def _dispatch(args) -> int:
    cmd = args.command
    as_json = getattr(args, "format", "json") == "json"

    if cmd == "faces":
        doc = _read_document(args.input)
        if "top_row" in doc and "merges" not in doc:
            top = [parse_rational(x) for x in doc["top_row"]]
        elif "rows" in doc:
            top = list(_parse_staircase_doc(doc).rows[-1])
        else:
            raise SchemaError("faces input needs 'top_row' or a staircase document")
        lattice = enumerate_faces(top, n_bound=args.n_bound)
        if args.format == "dot":
            _emit(None, False, hasse_dot(lattice))
            return EXIT_OK
        payload = lattice.to_json()
        coh = check_coherence(lattice)
        payload["coherence"] = coh
        payload["x0"] = x0_skeleton(lattice)
        payload["torus_maps"] = {
            f"{e}->{f}": torus_map(lattice.faces[e], lattice.faces[f]).to_json()
            for e, f in lattice.covers
        }
        _emit(payload, True)
        return EXIT_OK if coh["ok"] else EXIT_FAIL

    if cmd == "pattern":
        doc = _read_document(args.input)
        if "merges" in doc or "top_row" in doc:
            pat, _ = pattern_from_merges(doc)
        else:
            s = _parse_staircase_doc(doc)
            _require_flavor(s, args.flavor)
            pat = build_pattern(s)
        if args.out:
            render_figure(pat, args.out)
        if args.format == "json":
            _emit(pat.to_json(), True)
        else:
            _emit(None, False, render(pat, args.format))
        return EXIT_OK

    # staircase-input commands with batch support
    workers = {
        "validate": _payload_validate,
        "fiber": _payload_fiber,
        "cohomology": _payload_cohomology,
        "homotopy": _payload_homotopy,
        "oracle": lambda s: _payload_oracle(s, args.tol),
        "report": lambda s: _payload_report(s, args.tol),
    }
    worker = workers[cmd]
    if getattr(args, "batch", None):
        payload, status = _run_batch(args.batch, worker)
        _emit(payload, True)
        return status

    doc = _read_document(args.input)
    s = _parse_staircase_doc(doc)
    _require_flavor(s, getattr(args, "flavor", None))
    payload, status = worker(s)

    text = None
    if not as_json:
        text = _text_view(cmd, s, payload)
    _emit(payload, as_json, text)

    if cmd == "report" and args.out_dir and status != EXIT_USAGE:
        _write_report_dir(args.out_dir, s, payload)
    return status


def _text_view(cmd: str, s: Staircase, payload) -> str:
    if cmd == "validate":
        if payload["ok"]:
            return "ok"
        lines = ["INVALID"] + [
            f"  (k={v['k']}, j={v['j']}, {v['kind']}): {v['detail']}" for v in payload["violations"]
        ]
        return "\n".join(lines)
    if cmd == "fiber":
        return payload["expression"]
    if cmd == "homotopy":
        return (
            f"pi_1 = Z^{payload['pi1_free_rank']}"
            + (f" + (Z/2)^{payload['pi1_two_torsion_rank']}" if payload["pi1_two_torsion_rank"] else "")
            + f", pi_2 = Z^{payload['pi2_rank']}, pi_3 = Z^{payload['pi3_rank']}"
        )
    if cmd == "cohomology":
        gens = payload["generators"] if "generators" in payload else payload["fu"]["generators"]
        degs = ", ".join(str(g["degree"]) for g in gens)
        return f"generator degrees: [{degs}]"
    if cmd == "oracle":
        lines = [f"tol = {payload['tol']:g}"]
        for row in payload["per_k"]:
            mark = "ok" if row["pass"] else "FAIL"
            lines.append(
                f"  k={row['k']:>2} size={row['size']:>3} max_dev={row['max_eig_dev']:.3e}"
                f" conj_res={row['conjugator_residual']:.3e} orth={row['orthogonality']:.3e} {mark}"
            )
        lines.append("PASS" if payload["ok"] else "FAIL")
        return "\n".join(lines)
    if cmd == "report":
        return json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, indent=2, sort_keys=True)


def _write_report_dir(out_dir: str, s: Staircase, payload: dict) -> None:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if "pattern" in payload:
        render_figure(build_pattern(s), str(path / "pattern.png"))
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["degree", "source"])
        cohom = payload["cohomology"]
        gens = cohom["generators"] if "generators" in cohom else cohom["fu"]["generators"]
        for g in gens:
            writer.writerow([g["degree"], g["source"]])
        if "fso" in cohom:
            for g in cohom["fso"]["free_generators"]:
                writer.writerow([g["degree"], g["source"]])
        (path / "cohomology.csv").write_text(buf.getvalue(), encoding="utf-8")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
