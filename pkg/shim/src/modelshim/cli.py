"""Command line for the shim: load the models, serve the protocol."""

from __future__ import annotations

import sys

import click
import uvicorn

from .config import ShimConfigError, load_shim_config
from .hf_models import ModelLoadError
from .server import create_app


@click.group()
def main() -> None:
    """Model-serving shim for the retrieval pipeline's gateway protocol."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="YAML or JSON config file.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--device", default=None, help="cpu, cuda, cuda:0, ...")
@click.option("--max-batch-size", type=int, default=None)
@click.option("--embed", default=None, help="Embedding model identifier.")
@click.option("--score-cheap", default=None, help="Cheap scorer identifier.")
@click.option("--score-expensive", default=None, help="Expensive scorer identifier.")
@click.option("--spans", default=None, help="Span-extraction model identifier.")
@click.option("--generate", default=None, help="Generator identifier ('none' disables).")
@click.option("--models", type=click.Choice(["reference", "local"]),
              default="reference", show_default=True,
              help="'local' swaps every capability to the built-in deterministic models.")
def serve(config_path, host, port, device, max_batch_size, embed, score_cheap,
          score_expensive, spans, generate, models):
    """Load every configured model, then serve the HTTP protocol."""
    overrides = {
        "host": host, "port": port, "device": device,
        "max_batch_size": max_batch_size, "embed": embed,
        "score_cheap": score_cheap, "score_expensive": score_expensive,
        "spans": spans,
        "generate": None if generate == "none" else generate,
    }
    if generate == "none":
        overrides["generate"] = None
    try:
        config = load_shim_config(config_path, overrides,
                                  use_local=(models == "local"))
        if generate == "none":
            from dataclasses import replace
            config = replace(config, generate=None)
        app = create_app(config)
    except (ShimConfigError, ModelLoadError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"serving on http://{config.host}:{config.port} "
               f"with models {app.state.registry.model_names()}", err=True)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
