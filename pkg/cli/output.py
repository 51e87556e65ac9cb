"""
Data files and run manifests.

Every data file X is written next to X.manifest.json. Data files carry no
timestamps or host details, so identical options and seed give identical
bytes; wall time and paths live only in the manifest.
"""

from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
import logging

from pydantic import BaseModel

from cli.serializers import HistogramSchema, OutputFile, PmfSchema, RunManifest, TableSchema
from core.config import Config
from core.exceptions import ValidationFailure
from core.utils import config_hash, sha256_file, to_float, write_csv

logger = logging.getLogger(__name__)

# Options that change where or how fast a run happens, never what it produces
VOLATILE_OPTIONS = frozenset(
    {
        "verbosity",
        "settings",
        "pythonpath",
        "traceback",
        "no_color",
        "force_color",
        "skip_checks",
        "workers",
        "out",
        "stdout",
        "stderr",
    }
)


@dataclass
class Table:
    header: Tuple[str, ...]
    rows: List[Sequence]


@dataclass
class LabResult:
    """
    What an action produced. CSV output writes the table (or the report
    flattened to field/value rows); JSON output writes the report (or the
    table). With companion set, CSV output also writes the report as
    <stem>.json.
    """

    table: Optional[Table] = None
    report: Optional[BaseModel] = None
    stream_ids: Tuple[int, ...] = ()
    notes: dict = field(default_factory=dict)
    companion: bool = False


def pmf_result(pmf) -> LabResult:
    rows = [
        (k, p.numerator, p.denominator, to_float(p))
        for k, p in zip(range(pmf.support_min, pmf.support_max + 1), pmf.probabilities)
    ]
    return LabResult(
        table=Table(("k", "prob_num", "prob_den", "prob_float"), rows),
        report=PmfSchema.from_pmf(pmf),
    )


def histogram_table(hist, prefix: Tuple = ()) -> List[Sequence]:
    frequencies = hist.frequencies
    rows = []
    for index, (value, count) in enumerate(zip(hist.support.tolist(), hist.counts.tolist())):
        if hist.binned:
            rows.append((*prefix, value, value * hist.bin_width, count, float(frequencies[index])))
        else:
            rows.append((*prefix, value, count, float(frequencies[index])))
    return rows


def histogram_result(hist) -> LabResult:
    header = ("bin", "left_edge", "count", "frequency") if hist.binned else ("value", "count", "frequency")
    return LabResult(
        table=Table(header, histogram_table(hist)),
        report=HistogramSchema.from_histogram(hist),
        stream_ids=hist.provenance.stream_ids,
    )


def report_table(report: BaseModel) -> Table:
    """Flatten a report into (field, value) rows; rationals print as num/den."""
    rows = []

    def walk(prefix, value):
        if isinstance(value, dict) and set(value) == {"num", "den"}:
            rows.append((prefix, f"{value['num']}/{value['den']}"))
        elif isinstance(value, dict):
            for key, item in value.items():
                walk(f"{prefix}.{key}" if prefix else str(key), item)
        elif isinstance(value, list):
            for index, item in enumerate(value):
                walk(f"{prefix}.{index}", item)
        else:
            rows.append((prefix, value))

    walk("", report.model_dump(mode="json"))
    return Table(("field", "value"), rows)


def default_path(command: str, action: Optional[str], fmt: str) -> Path:
    stem = f"{command}_{action}" if action else command
    return Path(Config.OUTPUT_DIR) / f"{stem}.{fmt}"


def manifest_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def _write_json(path: Path, model: BaseModel) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(model.model_dump_json(indent=2))
        f.write("\n")
    return path


def write_data_files(result: LabResult, path, fmt: str) -> List[Tuple[Path, str]]:
    """Write the data file(s) of result; returns (path, format) pairs."""
    path = Path(path)
    written = []
    if fmt == "csv":
        table = result.table or report_table(result.report)
        written.append((write_csv(path, table.header, table.rows), "csv"))
        if result.companion and result.report is not None:
            written.append((_write_json(path.with_suffix(".json"), result.report), "json"))
    elif fmt == "json":
        model = result.report if result.report is not None else TableSchema.from_table(result.table)
        written.append((_write_json(path, model), "json"))
    else:
        raise ValidationFailure(f"Unknown output format '{fmt}'")
    return written


def run_config_hash(options: dict) -> str:
    """Hash of the options that determine a run's output."""
    return config_hash({key: value for key, value in options.items() if key not in VOLATILE_OPTIONS})


def write_manifests(
    written: Sequence[Tuple[Path, str]],
    command_line: str,
    command: str,
    action: Optional[str],
    options: dict,
    result: LabResult,
    wall_time: float,
) -> List[Path]:
    """One manifest per data file, each listing every file of the run."""
    outputs = [OutputFile(path=str(p), sha256=sha256_file(p), format=fmt) for p, fmt in written]
    manifest = RunManifest(
        command_line=command_line,
        command=command,
        action=action,
        seed=int(options.get("seed", Config.SEED)),
        stream_ids=[int(s) for s in result.stream_ids],
        config_hash=run_config_hash(options),
        artifact_version=Config.ARTIFACT_VERSION,
        wall_time=timedelta(seconds=wall_time),
        outputs=outputs,
        notes=result.notes,
    )
    paths = [_write_json(manifest_path(p), manifest) for p, _ in written]
    logger.info(f"Wrote {len(written)} data file(s) for '{command_line}'")
    return paths


def load_manifest(path) -> RunManifest:
    with open(path, encoding="utf-8") as f:
        return RunManifest.model_validate_json(f.read())


def verify_manifest(path) -> bool:
    """True when every listed data file still matches its recorded sha256."""
    manifest = load_manifest(path)
    for output in manifest.outputs:
        if not Path(output.path).exists() or sha256_file(output.path) != output.sha256:
            logger.warning(f"Manifest {path}: {output.path} does not match its checksum")
            return False
    return True
