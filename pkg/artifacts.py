"""
Artifact Writer
Persists run outputs as byte-stable JSON/CSV files plus a provenance manifest.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import pandas as pd

from models import ComparisonRow, ComplexityReport, Manifest
from exceptions import MikadoError

logger = logging.getLogger("MikadoArtifacts")

MANIFEST_NAME = "manifest.json"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: Union[str, Path]) -> str:
    return sha256_bytes(Path(path).read_bytes())


def dumps_json(data: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def complexity_frame(report: ComplexityReport) -> pd.DataFrame:
    """Per-functionality table: name, traces, mean local transactions, complexity."""
    rows = [
        (d.name, d.traces, d.mean_local_transactions, d.complexity)
        for d in sorted(report.details, key=lambda d: d.name)
    ]
    return pd.DataFrame(rows, columns=["functionality", "traces", "meanLocalTransactions", "complexity"])


def comparison_frame(rows: Sequence[ComparisonRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.n_clusters, r.source, r.mno, r.max_mno, r.mojo_fm) for r in rows],
        columns=["nClusters", "source", "mno", "maxMno", "mojoFM"],
    )


class ArtifactWriter:
    """
    Writes the artifacts of one command into an output directory.

    Every file is hashed as it is written; write_manifest records those
    hashes with the input hashes and the configuration, without timestamps,
    so identical runs produce identical manifests.
    """

    def __init__(self, output_dir: Union[str, Path], decimals: int = 6):
        """
        Initialize writer.

        Raises:
            MikadoError: If the directory cannot be created
        """
        self.output_dir = Path(output_dir)
        self.decimals = decimals
        self.artifacts: Dict[str, str] = {}
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise MikadoError(
                f"Cannot create output directory {self.output_dir}: {e}",
                component="ArtifactWriter",
                code="IO"
            ) from e

    def _write(self, name: str, data: bytes) -> Path:
        path = self.output_dir / name
        try:
            path.write_bytes(data)
        except OSError as e:
            raise MikadoError(
                f"Cannot write artifact {path}: {e}",
                component="ArtifactWriter",
                code="IO"
            ) from e
        self.artifacts[name] = sha256_bytes(data)
        logger.debug(f"Wrote {path}")
        return path

    def write_text(self, name: str, text: str) -> Path:
        return self._write(name, text.encode("utf-8"))

    def write_json(self, name: str, data: Any) -> Path:
        return self.write_text(name, dumps_json(data))

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        text = frame.to_csv(index=False, float_format=f"%.{self.decimals}f", lineterminator="\n")
        return self.write_text(name, text)

    def write_manifest(
        self,
        command: str,
        config: Dict[str, Any],
        inputs: Iterable[Union[str, Path]],
        tool_version: str,
        extra_inputs: Optional[Dict[str, str]] = None
    ) -> Manifest:
        """
        Write manifest.json for the artifacts written so far.

        Args:
            command: Subcommand name
            config: Effective configuration (config.to_dict())
            inputs: Input files, hashed by content and keyed by file name
            tool_version: Package version
            extra_inputs: Already-hashed inputs (e.g. generator parameters)
        """
        hashed = {Path(p).name: sha256_file(p) for p in inputs}
        hashed.update(extra_inputs or {})
        manifest = Manifest(
            tool_version=tool_version,
            command=command,
            config=config,
            inputs=dict(sorted(hashed.items())),
            artifacts=dict(sorted(self.artifacts.items())),
        )
        self.write_json(MANIFEST_NAME, manifest.model_dump(mode="json"))
        return manifest

    @property
    def manifest_digest(self) -> str:
        return self.artifacts[MANIFEST_NAME]
