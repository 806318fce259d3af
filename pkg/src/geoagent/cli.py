"""Command-line entry point.

Human mode prints readable lines; ``--machine`` emits exactly one JSON
record per invocation on stdout with diagnostics on stderr. Domain errors
exit 1, usage errors exit 2. Every subcommand runs offline with the
scripted backend and local fixtures.
"""

from __future__ import annotations

import json
import sys
from dataclasses import asdict
from pathlib import Path

import click

from . import agent as agent_mod
from . import diggs as diggs_mod
from . import geotech, retrieval, uscs
from .backends import (
    BackendConfig,
    HashingEmbedder,
    HttpBackend,
    ScriptedBackend,
)
from .errors import GeoAgentError
from .kernels import active_kernel
from .memory import MemoryStore
from .soil import Foundation, SoilSample, load_samples
from .tools import build_default_registry

DEFAULTS = {
    "k": retrieval.DEFAULT_TOP_K,
    "token_budget": retrieval.DEFAULT_TOKEN_BUDGET,
    "required_fos": geotech.DEFAULT_REQUIRED_FOS,
    "temperature": 0.0,
    "max_steps": agent_mod.DEFAULT_MAX_STEPS,
    "audit_tolerance": geotech.AUDIT_TOLERANCE,
}


def _emit(machine: bool, record: dict, human_lines: list[str]):
    if machine:
        click.echo(json.dumps(record, sort_keys=True))
    else:
        for line in human_lines:
            click.echo(line)


def _make_backend(spec: str, endpoint: str, model: str):
    if spec.startswith("scripted:"):
        return ScriptedBackend.from_file(spec.split(":", 1)[1])
    if spec == "http":
        return HttpBackend(BackendConfig(endpoint=endpoint, model=model))
    raise click.UsageError(f"unknown backend {spec!r}; use scripted:<file> or http")


@click.group()
@click.option("--machine", is_flag=True, help="Emit one JSON record on stdout.")
@click.pass_context
def main(ctx, machine):
    """Deterministic geotechnical reasoning engine."""
    ctx.ensure_object(dict)
    ctx.obj["machine"] = machine


def _run(ctx, fn):
    try:
        fn(ctx.obj["machine"])
    except GeoAgentError as err:
        raise click.ClickException(str(err)) from err


# --- classification ---------------------------------------------------------

@main.command()
@click.option("--pass4", type=float, default=100.0, show_default=True)
@click.option("--pass200", type=float, default=None)
@click.option("--d10", type=float, default=None)
@click.option("--d30", type=float, default=None)
@click.option("--d60", type=float, default=None)
@click.option("--ll", type=float, default=None, help="Liquid limit (%)")
@click.option("--pl", type=float, default=None, help="Plastic limit (%)")
@click.option("--batch", type=click.Path(exists=True), default=None,
              help="Classify every sample in a file instead of flags.")
@click.pass_context
def classify(ctx, pass4, pass200, d10, d30, d60, ll, pl, batch):
    """USCS classification of one sample or a batch file."""
    def go(machine):
        if batch:
            results = uscs.classify_batch(load_samples(batch))
            records, lines = [], []
            for i, result in enumerate(results):
                if isinstance(result, uscs.ClassificationCode):
                    records.append({"symbol": result.symbol, "rationale": list(result.rationale)})
                    lines.append(f"{i}: {result.symbol}")
                else:
                    records.append({"error": str(result)})
                    lines.append(f"{i}: error: {result}")
            _emit(machine, {"results": records}, lines)
            return
        if pass200 is None:
            raise click.UsageError("--pass200 is required without --batch")
        sample = SoilSample(
            pass_sieve4=pass4, pass_sieve200=pass200,
            d10=d10, d30=d30, d60=d60, liquid_limit=ll, plastic_limit=pl,
        )
        code = uscs.classify(sample)
        _emit(
            machine,
            {"symbol": code.symbol, "rationale": list(code.rationale)},
            [code.symbol, *(f"  {r}" for r in code.rationale)],
        )
    _run(ctx, go)


# --- calculations -----------------------------------------------------------

@main.group()
def calc():
    """Verified geotechnical calculations."""


@calc.command()
@click.option("--su", type=float, default=None, help="Undrained strength (kPa)")
@click.option("--sc", type=float, default=1.0, show_default=True, help="Shape factor")
@click.option("--shape", type=click.Choice(["circular", "strip", "rectangular"]),
              default=None, help="Look up the shape factor instead of --sc.")
@click.option("--c", "cohesion", type=float, default=None, help="Cohesion (kPa)")
@click.option("--phi", type=float, default=0.0, help="Friction angle (deg)")
@click.option("--gamma", type=float, default=0.0, help="Unit weight (kN/m3)")
@click.option("--width", type=float, default=0.0, help="Footing width B (m)")
@click.option("--surcharge", type=float, default=0.0, help="Vertical stress at base (kPa)")
@click.pass_context
def bearing(ctx, su, sc, shape, cohesion, phi, gamma, width, surcharge):
    """Bearing capacity (undrained with --su, general with --c)."""
    def go(machine):
        if su is not None:
            factor = geotech.shape_factor(shape) if shape else sc
            result = geotech.bearing_capacity_undrained(su, factor)
        elif cohesion is not None:
            result = geotech.bearing_capacity_general(cohesion, phi, gamma, width, surcharge)
        else:
            raise click.UsageError("give --su (undrained) or --c (general)")
        _emit(
            machine,
            {"q_f": result.q_f, "method": result.method,
             "inputs": result.inputs, "factors": result.factors},
            [f"q_f = {result.q_f:.6g} kPa ({result.method})",
             f"  factors: {result.factors}"],
        )
    _run(ctx, go)


@calc.command()
@click.option("--qf", type=float, required=True, help="Bearing capacity (kPa)")
@click.option("--diameter", type=float, default=None)
@click.option("--width", type=float, default=None)
@click.option("--length", type=float, default=None)
@click.option("--depth", type=float, default=0.0, show_default=True,
              help="2:1 transfer depth (m)")
@click.pass_context
def maxload(ctx, qf, diameter, width, length, depth):
    """Maximum load through the 2:1 stress spread."""
    def go(machine):
        if diameter is not None:
            foundation = Foundation("circular", diameter=diameter)
        elif width is not None and length is not None:
            foundation = Foundation("rectangular", width=width, length=length)
        else:
            raise click.UsageError("give --diameter or --width and --length")
        load = geotech.max_load(qf, foundation, depth)
        _emit(machine, {"max_load_kn": load},
              [f"Max. Load = {load:.6g} kN"])
    _run(ctx, go)


@calc.command()
@click.option("--gamma", type=float, required=True, help="Backfill unit weight (kN/m3)")
@click.option("--height", type=float, required=True, help="Wall height (m)")
@click.option("--phi", type=float, required=True, help="Backfill friction angle (deg)")
@click.option("--mu", type=float, required=True, help="Base friction coefficient")
@click.option("--vertical", type=float, required=True, help="Vertical load (kN/m)")
@click.option("--base", type=float, required=True, help="Base width B (m)")
@click.option("--moment", type=float, default=0.0, help="Net moment about base center (kN*m/m)")
@click.option("--qult", type=float, required=True, help="Ultimate bearing capacity (kPa)")
@click.option("--fos", type=float, default=geotech.DEFAULT_REQUIRED_FOS, show_default=True)
@click.pass_context
def wall(ctx, gamma, height, phi, mu, vertical, base, moment, qult, fos):
    """Gravity-wall sliding, middle-third, and Meyerhof bearing checks."""
    def go(machine):
        report = geotech.check_wall(gamma, height, phi, mu, vertical, base, moment, qult, fos)
        record = asdict(report)
        _emit(machine, record, [
            f"sliding: FoS = {report.sliding_fos:.4g} "
            f"({'ok' if report.sliding_ok else 'FAIL'}, required {fos})",
            f"overturning: e = {report.eccentricity:.4g} m "
            f"({'within' if report.middle_third_ok else 'OUTSIDE'} middle third, B/6 = {base / 6:.4g})",
            f"bearing: q = {report.bearing_demand:.4g} kPa "
            f"({'ok' if report.bearing_ok else 'FAIL'}, allowable {qult / fos:.4g})",
        ])
    _run(ctx, go)


@calc.command()
@click.option("--volume", type=float, required=True, help="Earthwork volume (m3)")
@click.option("--capacity", type=float, required=True, help="Truck capacity (m3)")
@click.option("--loss", type=float, default=0.0, show_default=True,
              help="Compaction loss fraction")
@click.pass_context
def trucks(ctx, volume, capacity, loss):
    """Number of trucks for an earthwork volume."""
    def go(machine):
        count = geotech.truck_count(volume, capacity, loss)
        _emit(machine, {"trucks": count}, [f"{count} trucks"])
    _run(ctx, go)


@calc.command()
@click.option("--terms", required=True,
              help="Comma-separated coefficient x factor pairs, e.g. '15x1,100x5,18.92x3'")
@click.option("--claimed", type=float, required=True)
@click.option("--tolerance", type=float, default=geotech.AUDIT_TOLERANCE, show_default=True)
@click.pass_context
def audit(ctx, terms, claimed, tolerance):
    """Recompute a linear claim and flag mismatches."""
    def go(machine):
        pairs = []
        for item in terms.split(","):
            if not item.strip():
                continue
            coeff, _, factor = item.partition("x")
            pairs.append((float(coeff), float(factor)))
        recomputed, matches = geotech.audit_linear_claim(pairs, claimed, tolerance)
        _emit(machine,
              {"recomputed": recomputed, "claimed": claimed, "matches": matches},
              [f"recomputed = {recomputed:.6g}, claimed = {claimed:.6g}: "
               f"{'match' if matches else 'MISMATCH'}"])
    _run(ctx, go)


# --- retrieval --------------------------------------------------------------

def _embedder(dimension: int) -> HashingEmbedder:
    return HashingEmbedder(dimension)


@main.command()
@click.argument("docs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(), help="Index directory")
@click.option("--max-tokens", type=int, default=200, show_default=True)
@click.option("--overlap", type=int, default=20, show_default=True)
@click.option("--dimension", type=int, default=256, show_default=True)
@click.pass_context
def index(ctx, docs, out, max_tokens, overlap, dimension):
    """Chunk and embed documents into a persisted vector index."""
    def go(machine):
        chunks = []
        for doc in docs:
            path = Path(doc)
            chunks.extend(
                retrieval.chunk_document(path.read_text(), max_tokens, overlap, source=path.name)
            )
        idx = retrieval.VectorIndex(_embedder(dimension)).build(chunks)
        idx.save(out)
        _emit(machine,
              {"chunks": len(idx), "dimension": idx.dimension, "out": str(out)},
              [f"indexed {len(idx)} chunks (dim {idx.dimension}) -> {out}"])
    _run(ctx, go)


@main.command()
@click.argument("query")
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True))
@click.option("-k", type=int, default=retrieval.DEFAULT_TOP_K, show_default=True)
@click.option("--dimension", type=int, default=256, show_default=True)
@click.pass_context
def search(ctx, query, index_dir, k, dimension):
    """Rank indexed chunks against a query by cosine similarity."""
    def go(machine):
        idx = retrieval.VectorIndex.load(index_dir, _embedder(dimension))
        hits = idx.search(query, k)
        _emit(machine,
              {"hits": [{"chunk_id": h.chunk_id, "score": h.score} for h in hits]},
              [f"{h.score:+.4f}  {h.chunk_id}" for h in hits] or ["no hits (empty index)"])
    _run(ctx, go)


@main.command()
@click.argument("query")
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True))
@click.option("--backend", "backend_spec", default="http", show_default=True,
              help="scripted:<file> or http")
@click.option("--endpoint", default="https://api.openai.com/v1", show_default=True)
@click.option("--model", default="gpt-3.5-turbo", show_default=True)
@click.option("-k", type=int, default=retrieval.DEFAULT_TOP_K, show_default=True)
@click.option("--budget", type=int, default=retrieval.DEFAULT_TOKEN_BUDGET, show_default=True)
@click.option("--dimension", type=int, default=256, show_default=True)
@click.pass_context
def ask(ctx, query, index_dir, backend_spec, endpoint, model, k, budget, dimension):
    """Grounded question answering over an index."""
    def go(machine):
        idx = retrieval.VectorIndex.load(index_dir, _embedder(dimension))
        backend = _make_backend(backend_spec, endpoint, model)
        answer = idx.answer(query, backend, k=k, token_budget=budget)
        _emit(machine,
              {"status": answer.status, "answer": answer.text,
               "chunk_ids": list(answer.chunk_ids)},
              [answer.text, f"  [context: {', '.join(answer.chunk_ids) or 'none'}]"])
    _run(ctx, go)


# --- DIGGS ------------------------------------------------------------------

@main.group(name="diggs")
def diggs_group():
    """DIGGS plastic-limit XML generation and parsing."""


@diggs_group.command()
@click.option("--values", required=True, help="Comma-separated water contents, e.g. 11.9,11.7,11.4")
@click.option("--manual/--no-manual", default=True, show_default=True)
@click.pass_context
def emit(ctx, values, manual):
    """Emit the plastic-limit trial document on stdout."""
    def go(machine):
        trials = diggs_mod.PlasticLimitTrialSet(
            tuple(float(v) for v in values.split(",")), is_manual=manual
        )
        document = diggs_mod.emit_plastic_limit_xml(trials)
        if machine:
            click.echo(json.dumps({"document": document}))
        else:
            click.echo(document, nl=False)
    _run(ctx, go)


@diggs_group.command()
@click.argument("file", type=click.Path(exists=True))
@click.pass_context
def parse(ctx, file):
    """Parse a plastic-limit trial document back to its values."""
    def go(machine):
        trials = diggs_mod.parse_plastic_limit_xml(Path(file).read_text())
        _emit(machine,
              {"trials": list(trials.trials), "is_manual": trials.is_manual},
              [f"trials: {', '.join(str(v) for v in trials.trials)} "
               f"(manual: {trials.is_manual})"])
    _run(ctx, go)


# --- agent ------------------------------------------------------------------

@main.group(name="agent")
def agent_group():
    """Action-Observation-Thought agent sessions."""


def _run_agent(task, report, backend_spec, endpoint, model, memory_path, max_steps):
    backend = _make_backend(backend_spec, endpoint, model)
    base_dir = Path(report).parent if report else None
    registry = build_default_registry(base_dir)
    memory = MemoryStore(memory_path)
    return agent_mod.run(task, registry, memory, backend, max_steps)


@agent_group.command(name="run")
@click.option("--task", required=True)
@click.option("--report", type=click.Path(), default=None,
              help="Soil report file the SoilReport tool may read.")
@click.option("--backend", "backend_spec", required=True, help="scripted:<file> or http")
@click.option("--endpoint", default="https://api.openai.com/v1", show_default=True)
@click.option("--model", default="gpt-3.5-turbo", show_default=True)
@click.option("--memory", "memory_path", type=click.Path(), default=None,
              help="Long-term memory store file (JSON).")
@click.option("--max-steps", type=int, default=agent_mod.DEFAULT_MAX_STEPS, show_default=True)
@click.pass_context
def agent_run(ctx, task, report, backend_spec, endpoint, model, memory_path, max_steps):
    """Run one agent session to a final answer."""
    def go(machine):
        trace = _run_agent(task, report, backend_spec, endpoint, model, memory_path, max_steps)
        record = {
            "succeeded": trace.succeeded,
            "final_answer": trace.final_answer,
            "steps": [asdict(s) for s in trace.steps],
            "tool_calls": [list(c) for c in trace.tool_calls],
        }
        _emit(machine, record, [trace.render()])
        if not trace.succeeded:
            raise click.ClickException(f"no final answer within {max_steps} steps")
    _run(ctx, go)


@agent_group.command()
@click.option("--report", type=click.Path(), default=None)
@click.option("--backend", "backend_spec", required=True, help="scripted:<file> or http")
@click.option("--endpoint", default="https://api.openai.com/v1", show_default=True)
@click.option("--model", default="gpt-3.5-turbo", show_default=True)
@click.option("--memory", "memory_path", type=click.Path(), default=None)
@click.option("--max-steps", type=int, default=agent_mod.DEFAULT_MAX_STEPS, show_default=True)
@click.pass_context
def repl(ctx, report, backend_spec, endpoint, model, memory_path, max_steps):
    """Interactive loop: one agent session per input line."""
    def go(machine):
        click.echo("geoagent repl; empty line quits", err=True)
        for line in sys.stdin:
            task = line.strip()
            if not task:
                break
            trace = _run_agent(task, report, backend_spec, endpoint, model, memory_path, max_steps)
            if machine:
                click.echo(json.dumps({"final_answer": trace.final_answer,
                                       "succeeded": trace.succeeded}))
            else:
                click.echo(trace.render())
    _run(ctx, go)


# --- config -----------------------------------------------------------------

@main.group()
def config():
    """Configuration inspection."""


@config.command()
@click.pass_context
def show(ctx):
    """Print every default the engine applies."""
    def go(machine):
        record = dict(DEFAULTS, kernel=active_kernel())
        _emit(machine, record, [f"{k} = {v}" for k, v in sorted(record.items())])
    _run(ctx, go)


if __name__ == "__main__":
    main()
