"""CSV tables, JSON reports and the manifest that lists them."""
import csv
import hashlib
import json
import os
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from program.settings.manager import settings_manager
from program.utils.logging import logger


def split_complex(columns: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Replace each complex column `name` by `Re name` and `Im name`."""
    out = {}
    for name, values in columns.items():
        values = np.asarray(values)
        if np.iscomplexobj(values):
            out[f"Re {name}"] = values.real
            out[f"Im {name}"] = values.imag
        else:
            out[name] = values
    return out


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as file:
        for block in iter(lambda: file.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


class ArtifactWriter:
    """Writes files under one directory and remembers them for the manifest."""

    def __init__(self, directory: str | Path | None = None, float_format: str | None = None):
        settings = settings_manager.settings.output
        self.directory = Path(settings.directory if directory is None else directory)
        self.float_format = settings.float_format if float_format is None else float_format
        self.files: list[str] = []
        os.makedirs(self.directory, exist_ok=True)

    def _register(self, name: str) -> Path:
        if name not in self.files:
            self.files.append(name)
        return self.directory / name

    def table(self, name: str, columns: dict[str, np.ndarray]) -> Path:
        """One CSV with a header row; complex columns are split into real and imaginary parts."""
        columns = split_complex(columns)
        lengths = {np.asarray(values).size for values in columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"columns of {name} differ in length: {sorted(lengths)}")
        path = self._register(name)
        data = np.column_stack([np.asarray(values, dtype=float).ravel() for values in columns.values()]) if columns else np.zeros((0, 0))
        np.savetxt(path, data, delimiter=",", header=",".join(columns), comments="", fmt=self.float_format)
        logger.debug(f"Wrote {path} ({data.shape[0]} rows)")
        return path

    def rows(self, name: str, header: list[str], rows: list[list]) -> Path:
        """A CSV of mixed text and number cells, written as given."""
        path = self._register(name)
        with open(path, "w", newline="", encoding="utf-8") as file:
            writer = csv.writer(file)
            writer.writerow(header)
            writer.writerows(rows)
        return path

    def report(self, name: str, report: BaseModel | dict) -> Path:
        path = self._register(name)
        text = report.model_dump_json(indent=4) if isinstance(report, BaseModel) else json.dumps(report, indent=4, sort_keys=True, default=float)
        path.write_text(text + "\n", encoding="utf-8")
        return path

    def manifest(self, config: dict) -> Path:
        """manifest.json with every file's SHA-256 and the SHA-256 of the effective configuration."""
        config_text = json.dumps(config, sort_keys=True, default=str)
        entries = [{"file": name, "sha256": sha256_of(self.directory / name)} for name in sorted(self.files)]
        manifest = {
            "config_sha256": hashlib.sha256(config_text.encode("utf-8")).hexdigest(),
            "files": entries,
        }
        path = self.directory / "manifest.json"
        path.write_text(json.dumps(manifest, indent=4) + "\n", encoding="utf-8")
        logger.log("PROGRAM", f"Manifest lists {len(entries)} files in {self.directory}")
        return path
