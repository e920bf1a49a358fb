"""
JSON run reports. A report is the only thing a subcommand writes to stdout.
"""
import json
import math
import time
from typing import Any
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field

SCHEMA = "neutral-geom/1"

Value = float | int | str | bool | None


def jsonable(value: Any) -> Any:
    """numpy scalars, arrays and complex numbers to plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


class Check(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    expected: Value
    actual: Value
    tolerance: float = Field(default=0.0, ge=0)

    @computed_field(alias="pass")
    @property
    def passed(self) -> bool:
        # recomputed on every access so a serialized report can never disagree with its numbers
        numeric = (int, float)
        if (isinstance(self.expected, numeric) and isinstance(self.actual, numeric)
                and not isinstance(self.expected, bool) and not isinstance(self.actual, bool)):
            return math.isfinite(self.actual) and abs(self.expected - self.actual) <= self.tolerance
        return self.expected == self.actual


def check(name: str, expected, actual, tolerance: float = 0.0) -> Check:
    return Check(name=name, expected=jsonable(expected), actual=jsonable(actual), tolerance=tolerance)


class RunReport(BaseModel):
    schema_id: str = Field(default=SCHEMA, alias="schema")
    command: str
    inputs: dict[str, Any] = Field(default_factory=dict)
    checks: list[Check] = Field(default_factory=list)
    results: dict[str, Any] = Field(default_factory=dict)
    artifacts: list[str] = Field(default_factory=list)
    generated_at: str | None = None

    model_config = ConfigDict(populate_by_name=True)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def stamp(self) -> None:
        self.generated_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())

    def to_json(self) -> str:
        data = self.model_dump(by_alias=True)
        data["inputs"] = jsonable(self.inputs)
        data["results"] = jsonable(self.results)
        if self.generated_at is None:
            data.pop("generated_at")
        return json.dumps(data, indent=2)
