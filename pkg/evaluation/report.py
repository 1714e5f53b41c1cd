"""
Evaluation report: human-readable table and flat `key = value` file.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple


@dataclass
class EvalReport:
    """Metrics from one evaluation run; unset metrics are omitted from output."""
    nmi: Optional[float] = None
    macro_f1: Optional[float] = None
    micro_f1: Optional[float] = None
    map_k: Optional[int] = None
    map_at_k: Optional[float] = None
    map_at_k_dot: Optional[float] = None
    map_queries: Optional[int] = None
    map_skipped: Optional[int] = None
    link_auc: Optional[float] = None
    per_class: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    extras: Dict[str, float] = field(default_factory=dict)

    def items(self) -> List[Tuple[str, object]]:
        """Flat (key, value) pairs in a fixed order."""
        pairs: List[Tuple[str, object]] = []
        if self.nmi is not None:
            pairs.append(('nmi', self.nmi))
        if self.macro_f1 is not None:
            pairs.append(('macro_f1', self.macro_f1))
        if self.micro_f1 is not None:
            pairs.append(('micro_f1', self.micro_f1))
        if self.map_at_k is not None:
            k = self.map_k
            pairs.append((f"map_at_{k}", self.map_at_k))
            pairs.append((f"map_at_{k}_cosine", self.map_at_k))
            if self.map_at_k_dot is not None:
                pairs.append((f"map_at_{k}_dot", self.map_at_k_dot))
            if self.map_queries is not None:
                pairs.append(('map_queries', self.map_queries))
            if self.map_skipped is not None:
                pairs.append(('map_skipped_queries', self.map_skipped))
        if self.link_auc is not None:
            pairs.append(('link_auc', self.link_auc))
        for name, (precision, recall) in self.per_class.items():
            pairs.append((f"precision[{name}]", precision))
            pairs.append((f"recall[{name}]", recall))
        pairs.extend(sorted(self.extras.items()))
        return pairs


def _format(value: object) -> str:
    return f"{value:.6f}" if isinstance(value, float) else str(value)


def render_table(report: EvalReport) -> str:
    """Two-column text table."""
    rows = [(key, _format(value)) for key, value in report.items()]
    if not rows:
        return "(no metrics)\n"
    width = max(len(key) for key, _ in rows)
    lines = [f"{'metric'.ljust(width)}  value", f"{'-' * width}  {'-' * 8}"]
    lines.extend(f"{key.ljust(width)}  {value}" for key, value in rows)
    return '\n'.join(lines) + '\n'


def render_key_values(report: EvalReport) -> str:
    return ''.join(f"{key} = {_format(value)}\n" for key, value in report.items())


def write_report(report: EvalReport, path: Path | str) -> Path:
    """Write the flat key-value form."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_key_values(report), encoding='utf-8')
    return path
