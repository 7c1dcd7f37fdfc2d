"""Evaluation reports: mean metrics plus per-repetition values."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class EvalReport:
    task: str
    split_ratio: float | None
    repetitions: int
    seed: int
    per_repetition: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @property
    def metrics(self) -> dict[str, float]:
        return {name: sum(vals) / len(vals) for name, vals in self.per_repetition.items()}

    def __getitem__(self, name: str) -> float:
        return self.metrics[name]

    def to_lines(self) -> list[str]:
        lines = [f"task={self.task}", f"split_ratio={self.split_ratio}",
                 f"repetitions={self.repetitions}", f"seed={self.seed}"]
        lines += [f"{k}={v}" for k, v in sorted(self.params.items())]
        for name, value in sorted(self.metrics.items()):
            lines.append(f"{name}={value!r}")
            lines.append(f"{name}.per_repetition=" + ",".join(map(repr, self.per_repetition[name])))
        return lines

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.to_lines()) + "\n")

    def format_table(self) -> str:
        rows = [("metric", "mean", "min", "max")]
        for name, vals in sorted(self.per_repetition.items()):
            rows.append((name, f"{sum(vals) / len(vals):.4f}", f"{min(vals):.4f}", f"{max(vals):.4f}"))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        head = f"{self.task} (split={self.split_ratio}, reps={self.repetitions}, seed={self.seed})"
        body = ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        return "\n".join([head, *body])


def read_report(path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if "=" in line:
                k, v = line.rstrip("\n").split("=", 1)
                out[k] = v
    return out
