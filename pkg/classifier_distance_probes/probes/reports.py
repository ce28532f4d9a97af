"""Report emission: ``report.json``, ``curve.csv`` and ``effective-config.txt``."""
import csv
import json
import logging
import os
from typing import Dict, List, Mapping

from classifier_distance_probes.probes.data import ReportBundle

logger = logging.getLogger(__name__)

BASE_COLUMNS = ['abscissa', 'label', 'trial', 'seed', 'accuracy', 'cross_entropy_nats', 'tv_lower', 'jsd_estimate']
WALL_CLOCK_FIELD = 'wall_clock_seconds'


def _blank(value):
    return '' if value is None else value


def curve_rows(bundle: ReportBundle) -> List[Dict[str, object]]:
    """One row per point; extra metrics become sorted trailing columns."""
    rows = []
    for point in bundle.points:
        report = point.report
        divergence = None if report is None else report.divergence
        row = {
            'abscissa': point.abscissa,
            'label': point.label,
            'trial': point.trial,
            'seed': point.seed,
            'accuracy': _blank(None if report is None else report.accuracy),
            'cross_entropy_nats': _blank(None if report is None else report.cross_entropy_nats),
            'tv_lower': _blank(None if divergence is None else divergence.tv_lower),
            'jsd_estimate': _blank(None if divergence is None else divergence.jsd_estimate),
        }
        row.update({key: _blank(value) for key, value in point.extras.items()})
        rows.append(row)
    return rows


def write_curve_csv(bundle: ReportBundle, path: str):
    rows = curve_rows(bundle)
    extras = sorted({key for point in bundle.points for key in point.extras})
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.DictWriter(handle, fieldnames=BASE_COLUMNS + extras, restval='', lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)


def write_effective_config(effective: Mapping[str, str], path: str):
    with open(path, 'w', encoding='utf-8') as handle:
        for key in sorted(effective):
            handle.write(f'{key}={effective[key]}\n')


def strip_wall_clock(document):
    """Drop every wall-clock field from a decoded report, for byte-level reproducibility checks."""
    if isinstance(document, dict):
        return {key: strip_wall_clock(value) for key, value in document.items() if key != WALL_CLOCK_FIELD}
    if isinstance(document, list):
        return [strip_wall_clock(value) for value in document]
    return document


def load_report(path: str, with_wall_clock: bool = False) -> dict:
    with open(path, encoding='utf-8') as handle:
        document = json.load(handle)
    return document if with_wall_clock else strip_wall_clock(document)


def write_bundle(bundle: ReportBundle, directory: str, with_curve: bool = True) -> str:
    """Write a bundle into ``directory`` (created if needed).

    Args:
        bundle: The experiment result
        directory: Output directory; its name carries no timestamp
        with_curve: Also write ``curve.csv``

    Returns:
        str: Path of the written ``report.json``

    Raises:
        OSError: If the directory cannot be created or written
    """
    os.makedirs(directory, exist_ok=True)
    report_path = os.path.join(directory, 'report.json')
    with open(report_path, 'w', encoding='utf-8') as handle:
        handle.write(bundle.to_json(indent=2))
        handle.write('\n')
    if with_curve and bundle.points:
        write_curve_csv(bundle, os.path.join(directory, 'curve.csv'))
    write_effective_config(bundle.effective_config, os.path.join(directory, 'effective-config.txt'))
    logger.info(f'Wrote {len(bundle.points)} points to {directory}')
    return report_path
