from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class RunReport:
    problem: str
    answer: int | str | None
    witness: list[int] | None = None
    width_used: int | None = None
    node_counts: dict[str, int] = field(default_factory=dict)
    wall_time: dict[str, float] = field(default_factory=dict)
    seed: int | None = None
    repetitions: int | None = None
    oracle: str | None = None

    def to_json(self, timings: bool = False) -> str:
        """Stable machine-readable form. Wall-clock times are left out
        unless asked for, so equal inputs give byte-identical output."""
        data = asdict(self)
        if not timings:
            data.pop("wall_time")
        return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"

    def to_text(self) -> str:
        lines = [f"problem {self.problem}", f"answer {self.answer}"]
        if self.witness is not None:
            lines.append("witness " + " ".join(map(str, self.witness)))
        if self.width_used is not None:
            lines.append(f"width {self.width_used}")
        if self.node_counts:
            lines.append("nodes " + " ".join(f"{k}={v}" for k, v in self.node_counts.items()))
        if self.seed is not None:
            lines.append(f"seed {self.seed} repetitions {self.repetitions}")
        if self.oracle is not None:
            lines.append(f"oracle-check {self.oracle}")
        for phase, secs in self.wall_time.items():
            lines.append(f"time {phase} {secs:.6f}")
        return "\n".join(lines) + "\n"
