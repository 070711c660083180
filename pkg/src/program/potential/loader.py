"""Read potential files (JSON or TOML)."""
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from pydantic import ValidationError

from program.potential.models import PotentialSpec
from program.utils.logging import logger


class ConfigParseError(Exception):
    """A configuration file could not be parsed or does not match the schema."""


def parse_potential(text: str, fmt: str = "json", source: str = "<string>") -> PotentialSpec:
    """Parse potential text in the given format ("json" or "toml")."""
    try:
        if fmt == "toml":
            data = tomllib.loads(text)
        elif fmt == "json":
            data = json.loads(text)
        else:
            raise ConfigParseError(f"{source}: unsupported format '{fmt}'")
    except json.JSONDecodeError as e:
        raise ConfigParseError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigParseError(f"{source}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigParseError(f"{source}: top level must be a table/object")

    try:
        return PotentialSpec.model_validate(data)
    except ValidationError as e:
        problems = [
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in e.errors()
        ]
        raise ConfigParseError(f"{source}: " + "; ".join(problems)) from e


def load_potential(path: str | Path) -> PotentialSpec:
    """Load a potential file, picking the format from the suffix."""
    path = Path(path)
    if not path.exists():
        raise ConfigParseError(f"{path}: file not found")
    fmt = "toml" if path.suffix.lower() == ".toml" else "json"
    spec = parse_potential(path.read_text(encoding="utf-8"), fmt, str(path))
    logger.log("POTENTIAL", f"Loaded {len(spec.deltas)} deltas and a '{spec.regular.kind}' regular part from {path}")
    return spec
