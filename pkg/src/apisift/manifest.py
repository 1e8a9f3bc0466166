"""Run manifests: one JSON record written next to each artifact.

Artifacts themselves carry no timestamps or environment data, so equal
seeds give byte-identical outputs; the manifest is where command, config
snapshot, seeds, input digests, and wall-clock times live.
"""

from __future__ import annotations

import datetime
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .fileio import file_digest, write_json_atomic


def manifest_path(artifact: str | os.PathLike) -> Path:
    artifact = Path(artifact)
    return artifact.with_name(artifact.name + ".manifest.json")


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None = None
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    started_at: str = field(default_factory=_now)
    finished_at: str = ""

    def record_input(self, path: str | os.PathLike) -> None:
        self.inputs[str(path)] = file_digest(path)

    def to_doc(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": list(self.outputs),
            "startedAt": self.started_at,
            "finishedAt": self.finished_at,
            "toolVersion": __version__,
        }

    def write_next_to(self, artifact: str | os.PathLike) -> Path:
        """Finalize timestamps and write <artifact>.manifest.json."""
        self.finished_at = _now()
        if str(artifact) not in self.outputs:
            self.outputs.append(str(artifact))
        path = manifest_path(artifact)
        write_json_atomic(path, self.to_doc())
        return path
