"""Machine-readable route description, snapshot-tested so any change to the
HTTP contract is a deliberate, reviewed diff."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.routing import APIRoute


def describe_routes(app: FastAPI) -> list[dict]:
    out = []
    for route in app.routes:
        if not isinstance(route, APIRoute) or not route.include_in_schema:
            continue
        for method in sorted(route.methods - {"HEAD", "OPTIONS"}):
            out.append(
                {
                    "method": method,
                    "path": route.path,
                    "status": route.status_code or 200,
                }
            )
    return sorted(out, key=lambda r: (r["path"], r["method"]))
