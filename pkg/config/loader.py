"""Flat key=value configuration files."""

from pathlib import Path
from typing import Dict, List, Union

from utils.errors import ConfigError, InputFileError


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    """
    Parse 'key = value' lines.

    Blank lines and lines starting with '#' are ignored; keys are
    lowercased with '-' folded to '_'. A repeated key is an error.
    """
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{source}:{number}", f"expected key=value, got {raw!r}")
        if key in values:
            raise ConfigError(key, f"set twice ({source}:{number})")
        values[key] = value.strip()
    return values


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Read and parse a key=value file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read config {path}: {e}") from e
    return parse_config_text(text, str(path))


def parse_int_list(field: str, value: Union[str, List[int]]) -> List[int]:
    """
    Parse '6,10,14' or a 'start:stop:step' range (stop inclusive).
    """
    if isinstance(value, list):
        return [int(v) for v in value]

    text = str(value).strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step <= 0:
                raise ConfigError(field, f"range step must be positive, got {step}")
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(field, f"expected integers, got {text!r}") from None


def parse_float(field: str, value: Union[str, float]) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {value!r}") from None


def parse_int(field: str, value: Union[str, int]) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected an integer, got {value!r}") from None
