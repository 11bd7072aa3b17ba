"""CSV ingestion and the TSV / JSON files every command writes."""
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from vcdim.core.dataset import Dataset, validate_dataset
from vcdim.core.errors import MissingColumnError, ParseError
from vcdim.core.utils import write_json, write_tsv
from vcdim.schemas.manifest import RunManifest
from vcdim.schemas.selection import CRITERIA, SelectionReport, StudyReport
from vcdim.schemas.vc import VcEstimate
from vcdim.schemas.xi import XiCurve, XiEntry

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _parse_reals(cells: pd.Series) -> pd.Series:
    """Cells as float64, NaN where not a number; parsed exactly (shortest repr round-trips)"""
    text = cells.str.strip()
    valid = pd.to_numeric(text, errors="coerce").notna()
    values = pd.Series(np.nan, index=cells.index, dtype=np.float64)
    values[valid] = text[valid].astype(np.float64)
    return values


def load_csv(
    path: PathLike,
    response: str,
    block_column: Optional[str] = None,
    columns: Optional[Sequence[str]] = None,
) -> Dataset:
    """Read a headed CSV into a Dataset.

    Covariates are ``columns`` when given, otherwise every column other
    than the response and block column; non-numeric columns are skipped
    in that case. Rows with a missing or non-numeric value in any used
    column are dropped and counted in the log.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError(f"Could not parse {path}: {str(e)}")

    frame.columns = [c.strip() for c in frame.columns]
    for name in [response] + ([block_column] if block_column else []) + list(columns or []):
        if name not in frame.columns:
            raise MissingColumnError(name)

    explicit = columns is not None
    if not explicit:
        columns = [c for c in frame.columns if c not in (response, block_column)]

    numeric = {}
    for name in [response] + list(columns):
        values = _parse_reals(frame[name])
        present = frame[name].notna()
        if present.any() and values[present].isna().all():
            if explicit or name == response:
                row = int(np.flatnonzero(present.to_numpy())[0])
                raise ParseError(f"Column '{name}' is not numeric", row=row, column=name)
            logger.warning(f"Skipping non-numeric column '{name}'")
            continue
        numeric[name] = values
    covariates = [c for c in columns if c in numeric]

    table = pd.DataFrame(numeric)
    keep = pd.Series(np.isfinite(table.to_numpy(dtype=np.float64)).all(axis=1), index=table.index)
    blocks = None
    if block_column:
        block_values = frame[block_column].str.strip()
        keep &= block_values.notna() & (block_values != "")
        blocks = block_values[keep].to_numpy(dtype=object)

    dropped = int((~keep).sum())
    if dropped:
        logger.info(f"Dropped {dropped} row(s) of {len(frame)} with missing or non-numeric values")
    if not keep.any():
        raise ParseError(f"No complete rows in {path}")

    table = table[keep]
    d = Dataset(
        y=table[response].to_numpy(dtype=np.float64),
        X=table[covariates].to_numpy(dtype=np.float64),
        columns=covariates,
        blocks=blocks,
    )
    return validate_dataset(d)


def write_dataset_csv(d: Dataset, path: PathLike, response: str = "y", block_column: str = "block") -> Path:
    frame = pd.DataFrame(d.X, columns=list(d.columns))
    frame.insert(0, response, d.y)
    if d.blocks is not None:
        frame[block_column] = d.blocks
    frame.to_csv(path, index=False, float_format="%.17g")
    return Path(path)


def read_order_file(path: PathLike) -> List[str]:
    """One column name per line; blank lines and '#' comments ignored"""
    names = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            names.append(line)
    return names


def write_xi_curve(curve: XiCurve, out_dir: PathLike, stem: str = "xi") -> List[Path]:
    out_dir = Path(out_dir)
    b2 = max((len(e.replicates) for e in curve.entries), default=0)
    header = ["n_l", "xi_hat"] + [f"r_{i}" for i in range(1, b2 + 1)]
    rows = [[e.n_l, e.xi_hat] + list(e.replicates) for e in curve.entries]
    tsv = write_tsv(out_dir / f"{stem}.tsv", header, rows)
    js = out_dir / f"{stem}.json"
    js.write_text(curve.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return [tsv, js]


def read_xi_curve(path: PathLike) -> XiCurve:
    """Load a curve written by ``write_xi_curve`` (JSON) or any TSV with n_l and xi_hat columns"""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return XiCurve.model_validate_json(path.read_text(encoding="utf-8"))

    try:
        frame = pd.read_csv(path, sep="\t")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ParseError(f"Could not parse {path}: {str(e)}")
    for name in ("n_l", "xi_hat"):
        if name not in frame.columns:
            raise MissingColumnError(name)
    replicate_columns = [c for c in frame.columns if c.startswith("r_")]
    entries = [
        XiEntry(
            n_l=int(row["n_l"]),
            xi_hat=float(row["xi_hat"]),
            replicates=[float(row[c]) for c in replicate_columns],
        )
        for _, row in frame.iterrows()
    ]
    return XiCurve(entries=entries)


def write_vc_estimate(estimate: VcEstimate, out_dir: PathLike, stem: str = "vc") -> List[Path]:
    out_dir = Path(out_dir)
    js = out_dir / f"{stem}.json"
    js.write_text(estimate.model_dump_json(indent=2, exclude={"trace"}) + "\n", encoding="utf-8")
    paths = [js]
    if estimate.trace:
        paths.append(write_tsv(out_dir / f"{stem}_trace.tsv", ["c", "d", "f"], [[t.c, t.d, t.f] for t in estimate.trace]))
    return paths


def write_report(report: SelectionReport, out_dir: PathLike, stem: str = "report") -> List[Path]:
    """Comparison table in the layout of one row per model size, plus full JSON"""
    out_dir = Path(out_dir)
    header = ["q", "size", "added", "d_hat", "c_hat", "gap", "erm1", "erm2", "aic", "bic", "cv"]
    rows = [
        [r.q, r.size, r.added, r.d_hat, r.c_hat, r.gap, r.erm1, r.erm2, r.aic, r.bic, r.cv]
        for r in report.records
    ]
    tsv = write_tsv(out_dir / f"{stem}.tsv", header, rows)
    selected = write_tsv(
        out_dir / f"{stem}_selected.tsv",
        ["criterion", "q"],
        [[name, getattr(report.selected, name)] for name in CRITERIA],
    )
    js = out_dir / f"{stem}.json"
    js.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return [tsv, selected, js]


def write_study(study: StudyReport, out_dir: PathLike, stem: str = "study") -> List[Path]:
    out_dir = Path(out_dir)
    header = ["seed"] + list(CRITERIA) + ["d_hat_at_p"]
    rows = [[s.seed] + [getattr(s.selected, c) for c in CRITERIA] + [s.d_hat_at_p] for s in study.seeds]
    per_seed = write_tsv(out_dir / f"{stem}.tsv", header, rows)
    hits = write_tsv(out_dir / f"{stem}_hits.tsv", ["criterion", "hits", "seeds"],
                     [[c, study.hits[c], len(study.seeds)] for c in CRITERIA])
    js = out_dir / f"{stem}.json"
    js.write_text(study.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return [per_seed, hits, js]


def write_manifest(manifest: RunManifest, out_dir: PathLike) -> Path:
    return write_json(Path(out_dir) / "manifest.json", manifest.model_dump(mode="json"))
