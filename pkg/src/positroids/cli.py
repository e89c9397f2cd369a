"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import click

from .core import (
    EMPTY,
    InputError,
    PluckerIndex,
    chi,
    chi_inverse,
    decperm_to_necklace,
    lpm_bounds,
    necklace_to_decperm,
    plucker_resolve,
    positroid_of_necklace,
)
from .formats import (
    format_bases,
    format_decperm,
    format_diagram,
    format_necklace,
    parse_bases,
    parse_decperm,
    parse_diagram,
    parse_necklace,
)

KINDS = ("le", "perm", "necklace", "bases")


class Failure(Exception):
    """Verification failed; maps to exit code 1."""


def _read_source(literal: str | None, path: str | None) -> str:
    if (literal is None) == (path is None):
        raise InputError("give exactly one input: a literal argument or --file")
    if path is not None:
        try:
            return Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return literal.replace("\\n", "\n")


def _diagram(literal, path, n=None, k=None):
    return parse_diagram(_read_source(literal, path), n=n, k=k)


def _emit(obj, fmt: str, text: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(obj, indent=2))
    else:
        click.echo(text)


def _run(fn):
    """Translate library errors into exit codes."""
    try:
        fn()
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except Failure as exc:
        click.echo(f"verification failed: {exc}", err=True)
        sys.exit(1)


input_file = click.option("--file", "path", type=click.Path(dir_okay=False), help="Read the input from a file.")
fmt_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Positroid cells: Le-diagrams, Plucker polynomials, TP-bases and plabic graphs.

    Diagrams are given as rows of 'D' and '.', separated by newlines or '/',
    or as '@name' for a built-in fixture (example1, example2, round, weird,
    top24, a7, d7).
    """


# ---------------------------------------------------------------------------
# convert
# ---------------------------------------------------------------------------


@main.command()
@click.argument("source", required=False)
@input_file
@click.option("--from", "src", type=click.Choice(KINDS), default="le", show_default=True)
@click.option("--to", "dst", type=click.Choice(KINDS), default="perm", show_default=True)
@click.option("--n", type=int, help="Ground set size when the input does not determine it.")
@click.option("--k", type=int, help="Number of rows for diagrams with trailing empty rows.")
@fmt_option
def convert(source, path, src, dst, n, k, fmt):
    """Convert among Le-diagrams, decorated permutations, necklaces and positroid bases."""

    def go():
        text = _read_source(source, path)
        if src == "le":
            dp = chi(parse_diagram(text, n=n, k=k))
        elif src == "perm":
            dp = parse_decperm(text)
        elif src == "necklace":
            dp = necklace_to_decperm(parse_necklace(text))
        else:
            from .core import necklace_of_matroid

            dp = necklace_to_decperm(necklace_of_matroid(parse_bases(text, n)))
        neck = decperm_to_necklace(dp)
        if dst == "le":
            out = format_diagram(chi_inverse(dp))
        elif dst == "perm":
            out = format_decperm(dp)
        elif dst == "necklace":
            out = format_necklace(neck)
        else:
            out = format_bases(positroid_of_necklace(neck))
        _emit({"from": src, "to": dst, "value": out}, fmt, out)

    _run(go)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


@main.command()
@click.argument("source", required=False)
@input_file
@click.option("--n", type=int)
@click.option("--k", type=int)
@fmt_option
def check(source, path, n, k, fmt):
    """Validate a diagram and report its cell data, connectivity and the positroid cross-check."""
    from .oracle import cross_check_positroid
    from .tpdiagram import connectivity_failure

    def go():
        d = _diagram(source, path, n, k)
        dp = chi(d)
        strong = connectivity_failure(d, weak=False)
        weak = connectivity_failure(d, weak=True)
        rep = cross_check_positroid(d)
        info = {
            "n": d.n,
            "k": d.k,
            "shape": list(d.shape),
            "dots": len(d.dots),
            "permutation": format_decperm(dp),
            "necklace": format_necklace(decperm_to_necklace(dp)),
            "connected": strong is None,
            "weakly_connected": weak is None,
            "lattice_path_matroid": lpm_bounds(d) is not None,
            "positroid_cross_check": rep.ok,
        }
        if weak is not None:
            info["weak_connectivity_failure"] = weak
        text = "\n".join(f"{key}: {v}" for key, v in info.items())
        _emit(info, fmt, text)
        if not rep.ok:
            raise Failure(rep.failures[0].detail)

    _run(go)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


@main.command("eval")
@click.argument("source", required=False)
@click.argument("index", required=False)
@input_file
@click.option("--all", "every", is_flag=True, help="Print every nonzero Plucker coordinate.")
@fmt_option
def eval_(source, index, path, every, fmt):
    """Plucker polynomial of INDEX (like '1|1', '13|12' or '|') on the diagram's network."""
    from .core import fmt_subset
    from .network import all_indices, build_network, plucker_poly

    def go():
        if path is not None and index is None:
            idx_text, src = source, None
        else:
            idx_text, src = index, source
        d = _diagram(src, path)
        net = build_network(d)
        if every:
            rows = []
            for idx in all_indices(d):
                p = plucker_poly(idx, net)
                if not p.is_zero():
                    rows.append((str(idx), fmt_subset(plucker_resolve(idx, d)), str(p)))
            _emit([{"index": a, "subset": b, "value": c} for a, b, c in rows], fmt,
                  "\n".join(f"{a}\t{b}\t{c}" for a, b, c in rows))
            return
        if idx_text is None:
            raise InputError("missing Plucker index")
        idx = PluckerIndex.parse(idx_text)
        plucker_resolve(idx, d)
        p = plucker_poly(idx, net)
        _emit({"index": str(idx), "symbols": list(net.symbols), "value": str(p)}, fmt, str(p))

    _run(go)


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


@main.command()
@click.argument("source", required=False)
@input_file
@click.option("--which", type=click.Choice(["canonical", "target"]), default="canonical", show_default=True)
@click.option("--render/--no-render", default=True, help="Print the TP-diagram grid.")
@click.option("--verify", is_flag=True, help="Run the basis checks on the printed basis.")
@fmt_option
def bases(source, path, which, render, verify, fmt):
    """Print the canonical TP-basis or the unique-path target basis of a cell."""
    from .oracle import verify_basis
    from .pipeline import direct_target_basis
    from .tpdiagram import TPDiagram, canonical_tp_diagram

    def go():
        d = _diagram(source, path)
        if which == "canonical":
            state = canonical_tp_diagram(d)
            basis = state.members | {EMPTY}
        else:
            basis = direct_target_basis(d)
            state = TPDiagram(d, frozenset(basis - {EMPTY}))
        names = [str(b) for b in sorted(basis)]
        lines = [" ".join(names)]
        if render:
            lines.append(state.render())
        payload = {"which": which, "basis": names}
        if verify:
            rep = verify_basis(basis, d)
            payload["checks"] = rep.to_json()["entries"]
            lines.extend(f"{e.check}: {'ok' if e.ok else 'FAIL'} {e.detail}".rstrip() for e in rep.entries)
        _emit(payload, fmt, "\n".join(lines))
        if verify and not rep.ok and which == "target":
            raise Failure(rep.failures[0].detail)

    _run(go)


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def _write_reproducer(out: Path | None, rep: dict) -> Path:
    target = (out or Path(".")) / "reproducer.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(rep, indent=2) + "\n")
    return target


@main.command()
@click.argument("source", required=False)
@input_file
@click.option("--out", type=click.Path(file_okay=False), help="Directory for trace.jsonl, basis.txt and summary.json.")
@click.option("--verify", is_flag=True, help="Re-check the trace and final basis with the oracle.")
@click.option("--direct", is_flag=True, help="Also compute the target basis directly and require agreement.")
@click.option("--assert-symbolic", is_flag=True, help="Verify every relation symbolically while mutating.")
@click.option("--replay", type=click.Path(dir_okay=False, exists=True),
              help="Verify an existing trace.jsonl against the diagram instead of transforming.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random specializations.")
def transform(source, path, out, verify, direct, assert_symbolic, replay, seed):
    """Mutate the canonical TP-basis of a weakly connected cell into unique-path variables."""
    from .oracle import diagram_to_json, verify_basis, verify_trace
    from .pipeline import direct_target_basis, full_transform
    from .tpdiagram import MutationStep, MutationTrace, canonical_tp_diagram

    def go():
        d = _diagram(source, path)
        out_dir = Path(out) if out else None
        if replay:
            trace = MutationTrace(canonical_tp_diagram(d).members)
            for lineno, line in enumerate(Path(replay).read_text().splitlines(), start=1):
                if not line.strip():
                    continue
                try:
                    trace.steps.append(MutationStep.from_json(json.loads(line)))
                except (ValueError, KeyError, TypeError) as exc:
                    raise InputError(f"{replay}, line {lineno}: {exc}") from None
            rep = verify_trace(trace, d, seed=seed)
            if not rep.ok:
                f = rep.failures[0]
                where = _write_reproducer(out_dir, f.reproducer)
                click.echo(f"reproducer: {where}")
                raise Failure(f.detail)
            click.echo(f"trace ok: {len(trace.steps)} steps")
            return
        result = full_transform(d, verify=assert_symbolic)
        names = [str(b) for b in sorted(result.basis)]
        summary = {
            "diagram": diagram_to_json(d),
            "steps": len(result.trace.steps),
            "rounds": [{"anchor": str(r.anchor), "extra": str(r.beta), "parity": r.parity, "notes": r.notes}
                       for r in result.rounds],
            "basis": names,
        }
        problems = []
        if direct:
            other = direct_target_basis(d)
            summary["direct_agrees"] = other == result.basis
            if other != result.basis:
                problems.append(("direct", {"op": "transform", "diagram": diagram_to_json(d)},
                                 "direct target basis differs from the transformed basis"))
        if verify:
            rt = verify_trace(result.trace, d, seed=seed)
            rb = verify_basis(result.basis, d, seed=seed)
            summary["verified"] = rt.ok and rb.ok
            for e in rt.failures + rb.failures:
                problems.append((e.check, e.reproducer, e.detail))
        if out_dir is not None:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / "trace.jsonl").write_text(result.trace.to_jsonl() + ("\n" if result.trace.steps else ""))
            (out_dir / "basis.txt").write_text("\n".join(names) + "\n")
            (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
        else:
            for step in result.trace.steps:
                click.echo(f"{step.kind:8s} {str(step.removed):>12s} -> {str(step.added):<12s} {step.relation.render()}")
        click.echo("basis: " + " ".join(names))
        if problems:
            check_name, rep, detail = problems[0]
            where = _write_reproducer(out_dir, rep)
            click.echo(f"reproducer: {where}")
            raise Failure(f"{check_name}: {detail}")

    _run(go)


# ---------------------------------------------------------------------------
# plabic
# ---------------------------------------------------------------------------


@main.command()
@click.argument("source", required=False)
@input_file
@click.option("--export-dot", type=click.Path(dir_okay=False), help="Write the dual quiver in DOT format.")
@click.option("--graph-dot", type=click.Path(dir_okay=False), help="Write the plabic graph in DOT format.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write the plabic graph as JSON.")
@click.option("--moves", type=int, default=0, show_default=True, help="Apply this many random moves first.")
@click.option("--moves-out", type=click.Path(dir_okay=False), help="Write the applied moves as JSON lines.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--sweep", is_flag=True, help="Run the square-move sweep (lattice path matroid cells only).")
@fmt_option
def plabic(source, path, export_dot, graph_dot, json_path, moves, moves_out, seed, sweep, fmt):
    """Canonical plabic graph: trip permutation, face labels and dual quiver."""
    from .cluster import lpm_square_sweep
    from .core import fmt_subset, plucker_index_of
    from .plabic import canonical_plabic, random_move

    def go():
        d = _diagram(source, path)
        g = canonical_plabic(d)
        applied = []
        rng = random.Random(seed)
        for _ in range(moves):
            r = random_move(g, rng)
            if r is None:
                break
            g, mv = r
            applied.append(mv)
        dp = g.trip_permutation()
        if dp != chi(d):
            raise Failure("trip permutation differs from the diagram's permutation")
        q = g.dual_quiver()
        names = {v: str(plucker_index_of(v, d)) for v in q.vertices}
        mutable = q.mutable_graph()
        degrees = sorted(deg for _, deg in mutable.degree())
        info = {
            "trip_permutation": format_decperm(dp),
            "faces": len(g.faces),
            "face_labels": sorted(fmt_subset(s) for s in g.face_labels()),
            "frozen": len(q.frozen),
            "mutable": len(q.mutable),
            "mutable_edges": mutable.number_of_edges(),
            "mutable_degrees": degrees,
            "moves_applied": len(applied),
        }
        if sweep:
            seed_, steps = lpm_square_sweep(d)
            info["sweep"] = [f"{s.removed} -> {s.added}" for s in steps]
            info["sweep_cluster"] = sorted(str(t) for t in seed_.cluster())
        if export_dot:
            Path(export_dot).write_text(q.to_dot(names) + "\n")
        if graph_dot:
            Path(graph_dot).write_text(g.to_dot() + "\n")
        if json_path:
            Path(json_path).write_text(json.dumps(g.to_json(), indent=2) + "\n")
        if moves_out:
            Path(moves_out).write_text("".join(json.dumps(m.to_json()) + "\n" for m in applied))
        text = "\n".join(f"{key}: {' '.join(map(str, v)) if isinstance(v, list) else v}" for key, v in info.items())
        _emit(info, fmt, text)

    _run(go)


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


@main.command()
@click.argument("n_max", type=int)
@click.option("--n-min", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes for cell verification.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random specializations.")
@click.option("--traces", is_flag=True, help="Also re-verify every mutation trace.")
@click.option("--out", type=click.Path(file_okay=False), help="Write report.json, census.csv and census.png here.")
@click.option("--large", is_flag=True, help="Allow n_max up to 8 (slow).")
@click.option("--timing", is_flag=True, help="Include wall-clock time in the report.")
def scan(n_max, n_min, jobs, seed, traces, out, large, timing):
    """Transform and verify every weakly connected cell with n <= N_MAX."""
    from .oracle import conjecture_scan
    from .report import census_rows, write_scan_outputs

    def go():
        report = conjecture_scan(n_max, seed=seed, jobs=jobs, traces=traces, bound=8 if large else 6, n_min=n_min)
        rows = census_rows(report)
        click.echo("n,cells,weakly_connected,passed,out_of_scope,failed")
        for r in rows:
            click.echo(",".join(str(r[c]) for c in ("n", "cells", "weakly_connected", "passed", "out_of_scope", "failed")))
        c = report.counts
        click.echo(f"total: {c['cells']} cells, {c['weakly_connected']} weakly connected, {c['passed']} passed, "
                   f"{c['out_of_scope']} out of scope")
        if timing and report.elapsed is not None:
            click.echo(f"elapsed: {report.elapsed:.1f}s")
        if out:
            for p in write_scan_outputs(report, Path(out), timing):
                click.echo(f"wrote {p}")
        if not report.ok:
            first = report.failures[0]
            click.echo(json.dumps(first.to_json()), err=True)
            raise Failure(f"{len(report.failures)} failing checks")

    _run(go)


if __name__ == "__main__":
    main()
