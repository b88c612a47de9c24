"""Server entry point: config, migrations, uvicorn."""

from __future__ import annotations

import click
import uvicorn

from zenith.api import create_app
from zenith.config import load_config
from zenith.runtime import make_runtime


@click.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="INI config file")
@click.option("--port", type=int, default=None, help="overrides server.port")
@click.option("--migrate", is_flag=True, default=False, help="apply migrations and exit")
def main(config_path: str | None, port: int | None, migrate: bool):
    config = load_config(config_path)
    rt = make_runtime(config)
    version = rt.store.apply_migrations()
    if migrate:
        click.echo(f"schema at version {version.version}")
        return
    app = create_app(rt)
    uvicorn.run(app, host="0.0.0.0", port=port or config.server.port)


if __name__ == "__main__":
    main()
