"""Command-line client for the crossover service.

Every subcommand talks to the HTTP API.  By default an in-process
application instance serves the request (no server needed); ``--server``
points the client at a running instance instead.  File parsing and CSV
writing happen client-side.

Exit codes: 0 success, 2 parse error, 3 trial/candidate budget exhausted,
4 size or configuration error.
"""
from __future__ import annotations

import secrets
import sys
from pathlib import Path

import click
import httpx

from .bench import CUMULATIVE_COLUMNS, RANDOM_PARENTS, STATS_COLUMNS, cell_seed
from .core import Permutation
from .errors import ParseError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_CONFIG = 4

# Service error codes that indicate a bad size or configuration.
_CONFIG_CODES = {
    "size_mismatch",
    "invalid_permutation",
    "invalid_instance",
    "invalid_request",
    "invalid_config",
    "missing_instance",
    "oracle_refused",
}


class ServiceError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code

    @property
    def exit_code(self) -> int:
        return EXIT_CONFIG if self.code in _CONFIG_CODES else 1


class ServiceClient:
    """Minimal JSON-over-HTTP client; in-process unless a server is given."""

    def __init__(self, server: str | None = None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DeprecationWarning)
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            detail = {}
            try:
                detail = response.json().get("detail", {})
            except ValueError:
                pass
            if isinstance(detail, dict) and "code" in detail:
                raise ServiceError(detail["code"], detail.get("message", ""))
            raise ServiceError("http_error", f"HTTP {response.status_code}: {response.text}")
        return response.json()

    def close(self) -> None:
        self._client.close()


def parse_permutation_file(path) -> list[Permutation]:
    """Read permutations, one per line, whitespace-separated 1-based
    symbols; '#' starts a comment.  All permutations must have the same
    size and every error carries its line number."""
    perms: list[Permutation] = []
    expected = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            stripped = raw.split("#", 1)[0].strip()
            if not stripped:
                continue
            tokens = stripped.split()
            values = []
            for tok in tokens:
                try:
                    values.append(int(tok))
                except ValueError:
                    raise ParseError(str(path), line_no, f"not an integer: {tok!r}") from None
            n = len(values)
            if expected is not None and n != expected:
                raise ParseError(
                    str(path), line_no, f"ragged sizes: expected {expected} symbols, got {n}"
                )
            seen = set()
            for v in values:
                if not 1 <= v <= n:
                    raise ParseError(str(path), line_no, f"symbol {v} out of range 1..{n}")
                if v in seen:
                    raise ParseError(str(path), line_no, f"duplicate symbol {v}")
                seen.add(v)
            perms.append(Permutation.from_one_based(values))
            expected = n
    return perms


def _instance_payload(path) -> dict:
    from .tsp import load_instance

    inst = load_instance(path)
    if inst.coords is not None:
        return {"coords": [[float(x), float(y)] for x, y in inst.coords]}
    return {"matrix": [[float(v) for v in row] for row in inst.matrix]}


def _emit(text: str, out_path) -> None:
    click.echo(text, nl=False)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")


def _parse_int_list(raw: str, name: str) -> list[int]:
    try:
        values = [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError:
        raise click.UsageError(f"--{name} expects a comma-separated integer list")
    if not values:
        raise click.UsageError(f"--{name} is empty")
    return values


@click.group()
def main():
    """Edge-transmitting crossover of cyclic permutations."""


@main.command()
@click.option("--mode", type=click.Choice(["directed", "undirected", "optimal"]),
              default="directed", show_default=True)
@click.option("--parents", "parents_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="File with at least two permutations (first two are used).")
@click.option("--seed", type=int, default=None,
              help="RNG seed; drawn fresh and echoed when omitted.")
@click.option("--avoid-trivial", type=bool, default=True, show_default=True,
              help="Exclude parent-equal candidates where possible.")
@click.option("--respectful", type=bool, default=True, show_default=True,
              help="Undirected mode: force shared edges into the offspring.")
@click.option("--max-trials", type=int, default=None)
@click.option("--max-candidates", type=int, default=None,
              help="Optimal mode: candidate budget.")
@click.option("--instance", "instance_path",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="Edge-cost instance file (required for optimal mode).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--server", default=None, help="Base URL of a running service.")
def xover(mode, parents_path, seed, avoid_trivial, respectful, max_trials,
          max_candidates, instance_path, out_path, server):
    """Cross the first two permutations of a file."""
    try:
        parents = parse_permutation_file(parents_path)
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    if len(parents) < 2:
        click.echo("error: parent file must contain at least two permutations", err=True)
        sys.exit(EXIT_PARSE)
    if mode == "optimal" and instance_path is None:
        click.echo("error: optimal mode needs --instance", err=True)
        sys.exit(EXIT_CONFIG)
    seed = secrets.randbits(63) if seed is None else seed
    payload = {
        "mode": mode,
        "parent_a": parents[0].to_one_based(),
        "parent_b": parents[1].to_one_based(),
        "seed": seed,
        "avoid_trivial": avoid_trivial,
        "respectful": respectful,
        "max_trials": max_trials,
        "max_candidates": max_candidates,
    }
    if instance_path is not None:
        try:
            payload["instance"] = _instance_payload(instance_path)
        except ParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
    client = ServiceClient(server)
    try:
        result = client.post("/xover", payload)
    except ServiceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    finally:
        client.close()
    lines = [
        f"seed: {seed}",
        f"mode: {mode}",
        "offspring: " + " ".join(str(v) for v in result["offspring"]),
        f"trials: {result['trials']}",
        f"trivial: {'true' if result['trivial'] else 'false'}",
    ]
    if result.get("cost") is not None:
        lines.append(f"cost: {result['cost']!r}")
    _emit("\n".join(lines) + "\n", out_path)
    if result.get("exhausted"):
        sys.exit(EXIT_BUDGET)


@main.command()
@click.option("--mode", type=click.Choice(["directed", "undirected"]),
              default="directed", show_default=True)
@click.option("--parents", "parents_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--respectful", type=bool, default=True, show_default=True)
@click.option("--instance", "instance_path",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="Also report the cheapest directed offspring for this instance.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--server", default=None)
def oracle(mode, parents_path, respectful, instance_path, out_path, server):
    """Exhaustively list valid offspring of two small parents."""
    try:
        parents = parse_permutation_file(parents_path)
    except ParseError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    if len(parents) < 2:
        click.echo("error: parent file must contain at least two permutations", err=True)
        sys.exit(EXIT_PARSE)
    payload = {
        "mode": mode,
        "parent_a": parents[0].to_one_based(),
        "parent_b": parents[1].to_one_based(),
        "respectful": respectful,
    }
    if instance_path is not None:
        try:
            payload["instance"] = _instance_payload(instance_path)
        except ParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
    client = ServiceClient(server)
    try:
        result = client.post("/oracle", payload)
    except ServiceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    finally:
        client.close()
    lines = [
        " ".join(str(v) for v in path) + f"  count={count}"
        for path, count in zip(result["offspring"], result["counts"])
    ]
    if result.get("optimal"):
        tour = " ".join(str(v) for v in result["optimal"]["tour"])
        lines.append(f"optimal: {tour}  cost={result['optimal']['cost']!r}")
    _emit("\n".join(lines) + "\n", out_path)


@main.command()
@click.option("--mode", type=click.Choice(["directed", "undirected", "optimal"]),
              default="directed", show_default=True)
@click.option("--n", "n_raw", required=True, help="Comma-separated sizes.")
@click.option("--swaps", "swaps_raw", required=True,
              help="Comma-separated swap counts, or 'random'.")
@click.option("--batch", type=int, default=5000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--max-trials", type=int, default=None)
@click.option("--instance", "instance_path",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="Fixed instance for optimal mode (sizes must match --n).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default="bench.csv", show_default=True)
@click.option("--server", default=None)
def bench(mode, n_raw, swaps_raw, batch, seed, max_trials, instance_path,
          out_path, server):
    """Run a grid of crossover batches; write stats and cumulative CSVs."""
    import csv

    n_values = _parse_int_list(n_raw, "n")
    if swaps_raw.strip().lower() == RANDOM_PARENTS:
        swap_values: list[int | None] = [None]
    else:
        swap_values = list(_parse_int_list(swaps_raw, "swaps"))
    seed = secrets.randbits(63) if seed is None else seed
    instance_payload = None
    if instance_path is not None:
        try:
            instance_payload = _instance_payload(instance_path)
        except ParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
    client = ServiceClient(server)
    results = []
    try:
        for n in n_values:
            for swaps in swap_values:
                payload = {
                    "mode": mode,
                    "n": n,
                    "swaps": RANDOM_PARENTS if swaps is None else swaps,
                    "batch": batch,
                    "seed": cell_seed(seed, n, swaps),
                    "max_trials": max_trials,
                }
                if instance_payload is not None:
                    payload["instance"] = instance_payload
                results.append(client.post("/bench/run", payload))
    except ServiceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    finally:
        client.close()
    comments = [
        f"mode={mode} n={n_raw} swaps={swaps_raw} batch={batch} seed={seed}"
        + (f" max_trials={max_trials}" if max_trials else "")
        + (f" instance={instance_path}" if instance_path else "")
    ]
    out_file = Path(out_path)
    curve_file = out_file.with_name(out_file.stem + "_cumulative" + out_file.suffix)
    with open(out_file, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(STATS_COLUMNS)
        for rec in results:
            writer.writerow([
                rec["mode"], rec["n"], rec["swaps"], rec["batch"], rec["seed"],
                repr(rec["mean_trials"]), repr(rec["fraction_nontrivial"]),
            ])
    with open(curve_file, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(CUMULATIVE_COLUMNS)
        for rec in results:
            for point in rec["cumulative"]:
                writer.writerow([
                    rec["mode"], rec["n"], rec["swaps"],
                    point["trials"], repr(point["fraction"]),
                ])
    click.echo(f"seed: {seed}")
    click.echo(f"wrote: {out_file}")
    click.echo(f"wrote: {curve_file}")


@main.command()
@click.option("--mode", type=click.Choice(["directed", "undirected", "optimal"]),
              default="directed", show_default=True)
@click.option("--n", "n_raw", required=True, help="Comma-separated sizes.")
@click.option("--swaps", "swaps_raw", required=True,
              help="Comma-separated swap counts to scan for the worst case.")
@click.option("--batch", type=int, default=5000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--max-trials", type=int, default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Optional CSV of per-size worst-case rows.")
@click.option("--server", default=None)
def fit(mode, n_raw, swaps_raw, batch, seed, max_trials, out_path, server):
    """Sweep dissimilarity per size and fit worst-case lines through zero."""
    import csv

    payload = {
        "mode": mode,
        "n_values": _parse_int_list(n_raw, "n"),
        "swap_values": _parse_int_list(swaps_raw, "swaps"),
        "batch": batch,
        "seed": secrets.randbits(63) if seed is None else seed,
        "max_trials": max_trials,
    }
    client = ServiceClient(server)
    try:
        result = client.post("/bench/sweep", payload)
    except ServiceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    finally:
        client.close()
    click.echo(f"seed: {payload['seed']}")
    for row in result["rows"]:
        click.echo(
            f"n={row['n']} best_swaps={row['best_swaps']} "
            f"max_mean_trials={row['max_mean_trials']!r}"
        )
    click.echo(
        f"argmax-swaps: slope={result['argmax_swaps_slope']:.6g} "
        f"r2={result['argmax_swaps_r2']:.6g}"
    )
    click.echo(
        f"peak-trials: slope={result['peak_trials_slope']:.6g} "
        f"r2={result['peak_trials_r2']:.6g}"
    )
    if out_path:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "best_swaps", "max_mean_trials"])
            for row in result["rows"]:
                writer.writerow([
                    row["n"], row["best_swaps"], repr(row["max_mean_trials"]),
                ])
        click.echo(f"wrote: {out_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
