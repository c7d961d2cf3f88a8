"""Run manifests: what was run, on which input, with which parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from plbench.workbench import __version__
from plbench.workbench.utils.digests import compute_sha256

TOOL_NAME = "plbench"


@dataclass(frozen=True, slots=True)
class RunManifest:
    subcommand: str
    input_sha256: str
    parameters: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    verdict: str = "ok"
    tool_version: str = __version__
    wall_time_seconds: float | None = None

    @classmethod
    def for_input(cls, subcommand: str, data: bytes, **kwargs: Any) -> "RunManifest":
        return cls(subcommand=subcommand, input_sha256=compute_sha256(data), **kwargs)

    def as_dict(self, *, include_wall_time: bool = True) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "tool": TOOL_NAME,
            "tool_version": self.tool_version,
            "subcommand": self.subcommand,
            "input_sha256": self.input_sha256,
            "parameters": dict(self.parameters),
            "seed": self.seed,
            "verdict": self.verdict,
        }
        if include_wall_time:
            payload["wall_time_seconds"] = self.wall_time_seconds
        return payload
