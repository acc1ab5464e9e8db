"""
JSON schema validation for fixture files
"""
import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import jsonschema

from config import Config

_LABEL = {"type": "string", "minLength": 1}
_LABELS = {"type": "array", "items": _LABEL}
_SCALAR = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 2},
    ]
}
_LABEL_MAP = {"type": "object", "additionalProperties": _LABEL}

# Schema definitions
GROUPOID_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "arrows": _LABELS,
        "units": _LABELS,
        "r": _LABEL_MAP,
        "d": _LABEL_MAP,
        "compose": {
            "type": "array",
            "items": {"type": "array", "items": _LABEL, "minItems": 3, "maxItems": 3},
        },
        "inverse": _LABEL_MAP,
        "basis": {"type": "array", "items": _LABELS},
    },
    "required": ["arrows", "units", "r", "d", "compose", "inverse"],
}

COCYCLE_SCHEMA = {
    "type": "object",
    "properties": {
        "field": {"enum": ["R", "C"]},
        # [a, b, re] or [a, b, re, im]
        "values": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 4,
                "prefixItems": [_LABEL, _LABEL, {"type": "number"}, {"type": "number"}],
            },
        },
    },
    "required": ["values"],
}

CONV_ELEMENT_SCHEMA = {
    "type": "object",
    "properties": {
        "groupoid": {"type": "string"},
        "coeffs": {"type": "object", "additionalProperties": _SCALAR},
    },
    "required": ["coeffs"],
}

SEMIGROUP_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "elements": _LABELS,
        "zero": _LABEL,
        "table": {"type": "array", "items": _LABELS},
    },
    "required": ["elements", "zero", "table"],
}

PACTION_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "group": {
            "type": "object",
            "properties": {
                "elements": _LABELS,
                "table": {"type": "array", "items": _LABELS},
                "identity": _LABEL,
            },
            "required": ["elements", "table"],
        },
        "space": _LABELS,
        "theta": {"type": "object", "additionalProperties": _LABEL_MAP},
        # [s, t, x, re] or [s, t, x, re, im]
        "u": {
            "type": "array",
            "items": {"type": "array", "minItems": 4, "maxItems": 5},
        },
    },
    "required": ["group", "space", "theta"],
}

GRAPH_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "vertices": _LABELS,
        # [edge, source, range]
        "edges": {
            "type": "array",
            "items": {"type": "array", "items": _LABEL, "minItems": 3, "maxItems": 3},
        },
    },
    "required": ["vertices", "edges"],
}

SELFSIM_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "graph": GRAPH_SCHEMA,
        "states": _LABELS,
        "identity": _LABEL,
        "sigma": {"type": "object", "additionalProperties": _LABEL_MAP},
        "restrict": {"type": "object", "additionalProperties": _LABEL_MAP},
        "product": {
            "type": "array",
            "items": {"type": "array", "items": _LABEL, "minItems": 3, "maxItems": 3},
        },
    },
    "required": ["graph", "states", "sigma", "restrict"],
}

COARSE_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "points": _LABELS,
        "generators": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "array", "items": _LABEL, "minItems": 2, "maxItems": 2},
            },
        },
        "blockdim": {"type": "integer", "minimum": 1},
        # [x, y, k-by-k real block]
        "matrix": {
            "type": "array",
            "items": {"type": "array", "minItems": 3, "maxItems": 3},
        },
    },
    "required": ["points", "generators"],
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": Config.REPORT_SCHEMA},
        "input_digest": {"type": "string"},
        "command": {"type": "string"},
        "checks": {"type": "array", "items": {"type": "string"}},
        "verdicts": {"type": "object"},
        "timing": {"type": "object"},
    },
    "required": ["schema", "input_digest", "command", "checks", "verdicts"],
}

# Fixture filename prefix -> schema, for validate_all_json_files
FIXTURE_SCHEMAS = {
    "groupoid_": GROUPOID_SCHEMA,
    "cocycle_": COCYCLE_SCHEMA,
    "element_": CONV_ELEMENT_SCHEMA,
    "semigroup_": SEMIGROUP_SCHEMA,
    "paction_": PACTION_SCHEMA,
    "graph_": GRAPH_SCHEMA,
    "selfsim_": SELFSIM_SCHEMA,
    "coarse_": COARSE_SCHEMA,
}


def validate_json_data(data: Any, schema: Dict[str, Any]) -> tuple[bool, Optional[str]]:
    try:
        jsonschema.validate(instance=data, schema=schema)
        return True, None
    except jsonschema.exceptions.ValidationError as e:
        return False, f"Schema validation error: {e.message}"


def validate_json_file(file_path: str, schema: Dict[str, Any]) -> tuple[bool, Optional[str]]:
    """
    Validates a JSON file against a schema
    Returns (is_valid, error_message)
    """
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        return validate_json_data(data, schema)
    except json.JSONDecodeError as e:
        return False, f"Invalid JSON format: {str(e)}"
    except UnicodeDecodeError as e:
        return False, f"Not UTF-8 text: {str(e)}"
    except OSError as e:
        return False, f"Error validating {file_path}: {str(e)}"


def schema_for(file_path: str) -> Optional[Dict[str, Any]]:
    name = os.path.basename(file_path)
    for prefix, schema in FIXTURE_SCHEMAS.items():
        if name.startswith(prefix):
            return schema
    return None


def validate_all_json_files(data_dir: Optional[str] = None) -> Dict[str, tuple[bool, Optional[str]]]:
    """
    Validates every fixture in the data directory whose name has a known prefix
    Returns a dictionary of results
    """
    data_dir = Path(data_dir or Config.DATA_DIR)
    results = {}
    for path in sorted(data_dir.glob("*.json")):
        schema = schema_for(str(path))
        if schema is not None:
            results[path.name] = validate_json_file(str(path), schema)
    return results


if __name__ == "__main__":
    # When run directly, validate all files and print results
    results = validate_all_json_files()
    for name, (ok, message) in results.items():
        print(f"{'OK  ' if ok else 'FAIL'} {name}" + (f": {message}" if message else ""))
