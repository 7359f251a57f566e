"""Flat `key = value` experiment configuration with per-command schemas.

Values are typed by the schema; unknown keys are errors so misspellings never
silently fall back to defaults.  Lists are comma separated.
"""

from dataclasses import dataclass


class ConfigError(ValueError):
    """Malformed configuration: unknown key, bad type, or missing requirement."""


_MISSING = object()


@dataclass(frozen=True)
class Field:
    """One config key: its type tag and default (required when no default)."""

    type: str  # "int" | "float" | "str" | "bool" | "ints" | "floats" | "strs"
    default: object = _MISSING

    @property
    def required(self) -> bool:
        return self.default is _MISSING


def _convert(key: str, raw: str, type_tag: str):
    try:
        if type_tag == "int":
            return int(raw)
        if type_tag == "float":
            return float(raw)
        if type_tag == "str":
            return raw
        if type_tag == "bool":
            lowered = raw.lower()
            if lowered in ("true", "yes", "1"):
                return True
            if lowered in ("false", "no", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        items = [part.strip() for part in raw.split(",") if part.strip()]
        if type_tag == "ints":
            return [int(item) for item in items]
        if type_tag == "floats":
            return [float(item) for item in items]
        if type_tag == "strs":
            return items
    except ValueError as exc:
        raise ConfigError(f"parameter {key!r}: {exc}") from None
    raise ConfigError(f"parameter {key!r} has unknown type tag {type_tag!r}")


def parse_config_text(text: str, schema: dict, source: str = "<config>") -> dict:
    """Parse `key = value` lines against the schema; returns a plain dict."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.split("#", 1)[0].strip()
        if key not in schema:
            known = ", ".join(sorted(schema))
            raise ConfigError(f"{source}:{lineno}: unknown parameter {key!r} (known: {known})")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate parameter {key!r}")
        values[key] = _convert(key, raw, schema[key].type)
    return values


def resolve(schema: dict, file_values: dict, overrides: dict) -> dict:
    """Apply defaults, then file values, then overrides; check required keys."""
    resolved = {}
    for key, field in schema.items():
        if key in overrides and overrides[key] is not None:
            resolved[key] = overrides[key]
        elif key in file_values:
            resolved[key] = file_values[key]
        elif field.required:
            raise ConfigError(f"missing required parameter {key!r}")
        else:
            resolved[key] = field.default
    for key in overrides:
        if key not in schema and overrides[key] is not None:
            raise ConfigError(f"unknown override parameter {key!r}")
    return resolved


def load_config(path, schema: dict) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, schema, source=str(path))
