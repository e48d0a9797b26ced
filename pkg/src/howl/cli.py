"""Command line: a thin client over the service layer.

`play` serves the live API (plus the web console when built); `sim`, `replay`,
and `voices` drive the same service-layer entry points headless, or a running
server when `--server` is given.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import replace
from pathlib import Path

import click

from .config import load_app_config
from .events import (
    ActionRequest,
    Degradation,
    Fallback,
    NightResult,
    Outcome,
    PhaseChange,
    RoleAssignment,
    StatementChunk,
    StatementDone,
    VoteResult,
)
from .session import read_jsonl, run_batch, verify_replay
from .speech import MockTtsBackend, SentenceChunk, synthesize


@click.group()
def main() -> None:
    """Werewolf games with talking AI players."""


@main.command()
@click.option("--config", "-c", "config_path", type=click.Path(exists=True),
              default=None, help="JSON config file")
@click.option("--host", default=None, help="bind host (overrides config)")
@click.option("--port", type=int, default=None, help="bind port (overrides config)")
def play(config_path, host, port):
    """Serve a live session; humans join seats through the web console."""
    import uvicorn

    from .service import create_app

    cfg = load_app_config(config_path)
    app = create_app(cfg, bootstrap_session=True)
    uvicorn.run(app, host=host or cfg.service.host, port=port or cfg.service.port)


@main.command()
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), default=None)
@click.option("--repeats", "-n", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=None, help="base seed (overrides config)")
@click.option("--policy", default="random-seeded", show_default=True)
@click.option("--speech/--no-speech", default=False, show_default=True,
              help="run the mock speech pipeline during sims")
@click.option("--server", default=None, help="POST /sim on a running server instead")
@click.option("--output", "-o", type=click.Path(), default=None,
              help="write the stats JSON here as well")
def sim(config_path, repeats, seed, policy, speech, server, output):
    """Headless scripted games; prints outcome statistics as JSON."""
    cfg = load_app_config(config_path)
    game = cfg.game if seed is None else replace(cfg.game, rng_seed=seed)
    if server:
        import httpx

        body = {"repeats": repeats, "policy": policy, "speech": speech}
        response = httpx.post(server.rstrip("/") + "/sim", json=body, timeout=600)
        response.raise_for_status()
        stats = response.json()
    else:
        stats = asyncio.run(run_batch(game, repeats, policy=policy, speech=speech))
    blob = json.dumps(stats, indent=2, sort_keys=True)
    click.echo(blob)
    if output:
        Path(output).write_text(blob + "\n")


def _describe(payload, names) -> str | None:
    def name(pid):
        return names.get(pid, f"#{pid}")

    if isinstance(payload, PhaseChange):
        p = payload.phase
        stage = f" ({p.stage.value})" if p.stage else ""
        return f"--- {p.kind.value}{stage} round {p.round} ---"
    if isinstance(payload, RoleAssignment):
        return f"[role] {name(payload.player)} is the {payload.role.display}"
    if isinstance(payload, StatementDone):
        return f'{name(payload.player)}: "{payload.text}"'
    if isinstance(payload, NightResult):
        if payload.night_record is not None:
            return None
        if payload.reveal is not None:
            return (
                f"[seer] {name(payload.reveal.target)} is "
                f"the {payload.reveal.role.display}"
            )
        if payload.deaths:
            dead = ", ".join(name(d) for d in payload.deaths)
            return f"[night {payload.round}] {dead} died at night"
        return f"[night {payload.round}] nobody died"
    if isinstance(payload, VoteResult):
        votes = ", ".join(f"{name(v)}->{name(t)}" for v, t in sorted(payload.votes.items()))
        verdict = (
            f"{name(payload.eliminated)} voted out"
            if payload.eliminated is not None
            else "tie, nobody out"
        )
        return f"[vote {payload.round}] {votes} => {verdict}"
    if isinstance(payload, Fallback):
        return f"[fallback] {name(payload.player)} ({payload.task}): {payload.reason}"
    if isinstance(payload, Degradation):
        return f"[audio degraded] utterance {payload.utterance}#{payload.index}: {payload.reason}"
    if isinstance(payload, Outcome):
        o = payload.outcome
        return f"=== {o.winner.value} win ({o.reason.value}) in round {o.final_round} ==="
    return None


@main.command()
@click.argument("record_path", type=click.Path(exists=True))
@click.option("--audio-dir", type=click.Path(), default=None,
              help="re-synthesize statement chunks into WAV files here")
@click.option("--quiet", is_flag=True, help="verify the digest only")
def replay(record_path, audio_dir, quiet):
    """Re-render a recorded session and verify its final state digest."""
    record = read_jsonl(record_path)
    names = dict(enumerate(record.config.player_names))
    if not quiet:
        for event in record.events:
            line = _describe(event.payload, names)
            if line:
                click.echo(line)
    ok, digest = verify_replay(record)
    if ok:
        click.echo(f"digest OK: {digest}")
    else:
        click.echo(f"digest MISMATCH: recomputed {digest}, recorded {record.final_digest}")
        raise SystemExit(1)
    if audio_dir:
        out = Path(audio_dir)
        out.mkdir(parents=True, exist_ok=True)
        count = asyncio.run(_resynthesize(record, out))
        click.echo(f"wrote {count} clips to {out}")


async def _resynthesize(record, out_dir: Path) -> int:
    from .speech import default_registry, encode_wav

    backend = MockTtsBackend()
    registry = default_registry()
    count = 0
    for event in record.events:
        payload = event.payload
        if isinstance(payload, StatementChunk):
            chunk = SentenceChunk(payload.utterance, payload.index, payload.text, False)
            clip = await synthesize(chunk, registry.default(), backend)
            path = out_dir / f"u{payload.utterance:03d}-c{payload.index:02d}.wav"
            path.write_bytes(encode_wav(clip.pcm, clip.sample_rate))
            count += 1
    return count


@main.command()
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), default=None)
@click.option("--server", default=None, help="query a running server's /voices")
def voices(config_path, server):
    """List voice profiles and probe the TTS backend."""
    if server:
        import httpx

        response = httpx.get(server.rstrip("/") + "/voices", timeout=30)
        response.raise_for_status()
        click.echo(json.dumps(response.json(), indent=2, sort_keys=True))
        return
    cfg = load_app_config(config_path)
    registry = cfg.voice_registry()
    backend = cfg.tts_backend()
    healthy = asyncio.run(backend.probe())
    for profile in registry.all():
        click.echo(f"{profile.voice_id:>4}  {profile.persona:<10} ref={profile.reference_id}")
    click.echo(f"tts backend: {cfg.tts.endpoint or 'mock'} healthy={healthy}")


if __name__ == "__main__":
    main()
