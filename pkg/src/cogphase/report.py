"""Text tables and JSON output for evaluation reports."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from cogphase.core import ClassLabel, LabeledDataset
from cogphase.experiment import ConfigId, ConfigReport, EvalReport

logger = logging.getLogger(__name__)


def format_summary_table(report: EvalReport, title: Optional[str] = None) -> str:
    """Average accuracy per configuration, one row each.

    Returns:
        Table with columns ``Config | Mean % | Std``
    """
    lines = [
        title or f"AVERAGE CLASSIFIER PERFORMANCE (subject {report.subject_id})",
        "=" * 32,
        f"{'Config':<8} | {'Mean %':>8} | {'Std':>6}",
        "-" * 32,
    ]
    for config, mean, std in report.rows():
        lines.append(f"{config:<8} | {mean:>8.1f} | {std:>6.2f}")
    lines.append("-" * 32)
    return "\n".join(lines)


def format_confusion(config_report: ConfigReport) -> str:
    """Mean confusion matrix of one configuration (rows: true class)."""
    mean = config_report.mean_confusion
    header = f"{'Class labels':<14} {'Class-1':>9} {'Class-2':>9}"
    lines = [
        f"Confusion matrix ({config_report.config_id.value}, "
        f"mean of {len(config_report.repetitions)} repetition(s))",
        header,
        "-" * len(header),
    ]
    for c in ClassLabel:
        row = mean[c.index]
        lines.append(f"{'Class-' + str(c.value):<14} {row[0]:>9.2f} {row[1]:>9.2f}")
    return "\n".join(lines)


def write_report_json(report: EvalReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(report.to_json(), encoding="utf-8")
    logger.info("Report written: %s", path)
    return path


def format_dataset_summary(ds: LabeledDataset) -> str:
    """Human-readable dataset overview for ``cogphase inspect``."""
    meta = ds.metadata
    counts = ds.class_counts()
    lines = [
        f"Subject:        {meta.subject_id}",
        f"Samples:        {ds.n_samples}",
        f"Feature dim:    {ds.feature_dim}",
    ]
    for c in ClassLabel:
        lines.append(f"  class {c.value} ({c.display_name}): {counts[c]}")
    if meta.roi_names:
        lines.append(f"ROIs:           {', '.join(meta.roi_names)}")
    if meta.sampling_period_s is not None:
        lines.append(f"Sampling:       {meta.sampling_period_s:g} s")
    lines.append(f"Normalization:  {meta.normalization}")
    if meta.provenance:
        lines.append(f"Provenance:     {meta.provenance}")
    if ds.n_samples:
        x = ds.feature_matrix
        lines.append(
            f"Value range:    [{x.min():.6g}, {x.max():.6g}], mean {x.mean():.6g}, "
            f"std {x.std():.6g}"
        )
    return "\n".join(lines)


# =============================================================================
# Multi-subject summary
# =============================================================================

def summarize_subjects(reports: Sequence[EvalReport]) -> List[Tuple[str, float, int]]:
    """Unweighted mean over subjects of each configuration's mean accuracy.

    Only configurations present in every report are summarized.

    Returns:
        (config, mean %, number of subjects) rows in C1..C8 order
    """
    per_config: Dict[ConfigId, List[float]] = {}
    for report in reports:
        for c in report.configs:
            per_config.setdefault(c.config_id, []).append(c.mean_accuracy)
    return [
        (cid.value, float(np.mean(per_config[cid])), len(per_config[cid]))
        for cid in ConfigId
        if cid in per_config and len(per_config[cid]) == len(reports)
    ]


def format_subject_summary(reports: Sequence[EvalReport]) -> str:
    lines = [
        f"SUBJECT MEAN ({len(reports)} subjects, unweighted)",
        "=" * 32,
        f"{'Config':<8} | {'Mean %':>8} | {'N':>6}",
        "-" * 32,
    ]
    for config, mean, count in summarize_subjects(reports):
        lines.append(f"{config:<8} | {mean:>8.1f} | {count:>6d}")
    lines.append("-" * 32)
    return "\n".join(lines)
