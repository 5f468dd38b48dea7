"""
Check reports shared by every singularity checker and experiment
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from field import ProjValue, format_value


@dataclass
class CheckReport:
    """
    Outcome of one theorem check or experiment.

    ``passed`` is the asserted verdict; experiments set ``report_only`` and
    never gate a run.
    """

    name: str
    passed: bool
    steps: Optional[int] = None
    predicted_step: Optional[int] = None
    observed_step: Optional[int] = None
    value: Optional[ProjValue] = None
    violations: List[Any] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    report_only: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'steps': self.steps,
            'predicted_step': self.predicted_step,
            'observed_step': self.observed_step,
            'value': format_value(self.value) if self.value is not None else None,
            'pass': self.passed,
            'report_only': self.report_only,
            'violations': [_plain(v) for v in self.violations[:20]],
            'details': {key: _plain(v) for key, v in sorted(self.details.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _plain(value: Any) -> Any:
    if isinstance(value, ProjValue):
        return format_value(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)
