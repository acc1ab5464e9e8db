# Shared carriers and I/O helpers used by every groupalg module.

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from error_handling import FixtureError, SchemaError
from src.utils.json_validator import validate_json_data
from utils.logging_utils import log_error


# --- Verdict carriers ---
@dataclass
class Violation:
    code: str
    message: str
    witness: Any = None


@dataclass
class ValidationReport:
    """Every violated invariant with a witness; empty iff valid."""

    subject: str
    violations: List[Violation] = field(default_factory=list)

    def add(self, code: str, message: str, witness: Any = None) -> None:
        self.violations.append(Violation(code, message, witness))

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [
                {"code": v.code, "message": v.message, "witness": jsonable(v.witness)}
                for v in self.violations
            ],
        }


@dataclass
class Verdict:
    """Boolean answer with the evidence that produced it."""

    holds: bool
    witness: Any = None
    certificate: Dict[str, Any] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "witness": jsonable(self.witness),
            "certificate": jsonable(self.certificate),
            "reason": self.reason,
        }


VerdictWithWitness = Verdict
VerdictWithCertificate = Verdict


class TriState(str, Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass
class SemiDecision:
    """Outcome of a bounded search: proven, refuted or unknown at a depth."""

    status: TriState
    value: Any = None
    witness: Any = None
    depth: Optional[int] = None
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "value": jsonable(self.value),
            "witness": jsonable(self.witness),
            "depth": self.depth,
            "reason": self.reason,
        }


# --- Scalars ---
def parse_scalar(raw) -> Any:
    """[re, im] or a number -> Fraction when real and finite, else complex."""
    if isinstance(raw, (list, tuple)):
        re_part = raw[0]
        im_part = raw[1] if len(raw) > 1 else 0
    else:
        re_part, im_part = raw, 0
    if im_part == 0:
        return Fraction(re_part).limit_denominator(10**12) if isinstance(re_part, float) else Fraction(re_part)
    return complex(re_part, im_part)


def scalar_close(a, b, tol: float) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(complex(a) - complex(b)) <= tol


def jsonable(obj: Any) -> Any:
    """Convert verdict payloads (sets, Fractions, numpy values, tuples) to JSON data."""
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    if hasattr(obj, "item"):
        return jsonable(obj.item())
    return str(obj)


# --- File I/O ---
def read_json_file(file_path: str) -> Any:
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        log_error(f"Cannot read {file_path}: {e}")
        raise FixtureError(f"cannot read {file_path}: {e}") from e
    except UnicodeDecodeError as e:
        log_error(f"{file_path} is not UTF-8: {e}")
        raise FixtureError(f"{file_path} is not UTF-8 text: {e}") from e
    except json.JSONDecodeError as e:
        log_error(f"Invalid JSON in {file_path}: {e}")
        raise FixtureError(f"invalid JSON in {file_path}: {e}") from e


def write_json_file(file_path: str, data: Any) -> None:
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(jsonable(data), f, indent=2, sort_keys=True)


def read_text_file(file_path: str) -> str:
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        log_error(f"Cannot read {file_path}: {e}")
        raise FixtureError(f"cannot read {file_path}: {e}") from e
    except UnicodeDecodeError as e:
        log_error(f"{file_path} is not UTF-8: {e}")
        raise FixtureError(f"{file_path} is not UTF-8 text: {e}") from e


def file_digest(file_path: str) -> str:
    try:
        with open(file_path, "rb") as f:
            return hashlib.sha256(f.read()).hexdigest()
    except OSError as e:
        raise FixtureError(f"cannot read {file_path}: {e}") from e


def load_validated(file_path: str, schema: Dict[str, Any]) -> Any:
    """Read a JSON fixture and check it against its schema."""
    data = read_json_file(file_path)
    return check_schema(data, schema, file_path)


def check_schema(data: Any, schema: Dict[str, Any], subject: str = "input") -> Any:
    ok, message = validate_json_data(data, schema)
    if not ok:
        log_error(f"{subject}: {message}")
        raise SchemaError(f"{subject}: {message}")
    return data
