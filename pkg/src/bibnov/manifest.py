"""Run manifests: enough provenance to regenerate any output from its inputs.

Two runs with equal manifests (ignoring wall-clock) produce byte-identical
score payloads; each output file gets a ``<name>.manifest.json`` sidecar.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from ._util import params_fingerprint, sha256_file


@dataclass
class RunManifest:
    command: str
    params: dict
    fingerprint: str
    inputs: dict[str, str]
    outputs: dict[str, str]
    seed: int | None
    engine_version: str
    phases: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "fingerprint": self.fingerprint,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "seed": self.seed,
            "engine_version": self.engine_version,
            "phases": self.phases,
        }
        return json.dumps(payload, ensure_ascii=True, indent=1)


class PhaseTimer:
    """Monotonic wall-clock per named phase."""

    def __init__(self) -> None:
        self.phases: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        start = time.monotonic()
        try:
            yield
        finally:
            self.phases[name] = self.phases.get(name, 0.0) + (time.monotonic() - start)


def build_manifest(
    command: str,
    params: dict,
    input_paths: dict[str, Path | str],
    output_paths: list[Path | str],
    seed: int | None,
    phases: dict[str, float],
) -> RunManifest:
    inputs = {str(p): sha256_file(p) for p in input_paths.values()}
    outputs = {str(p): sha256_file(p) for p in output_paths}
    return RunManifest(
        command=command,
        params=params,
        fingerprint=params_fingerprint({"command": command, **params}),
        inputs=inputs,
        outputs=outputs,
        seed=seed,
        engine_version=__version__,
        phases=phases,
    )


def write_manifest(manifest: RunManifest, for_output) -> Path:
    path = Path(str(for_output) + ".manifest.json")
    path.write_text(manifest.to_json() + "\n", encoding="utf-8")
    return path
