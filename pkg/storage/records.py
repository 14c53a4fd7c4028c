"""
CSV and JSON files produced by a grid run.
"""

import json
import logging
import os

import pandas as pd

from explorer.grid import GridRecord, LinkEstimates

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ['e00', 'e01', 'e10', 'e11', 'link', 'unadjusted', 'adjusted', 'converged']
COUNT_COLUMNS = RECORD_COLUMNS[:4]
FLOAT_FORMAT = '%.17g'


class RecordsFormatError(ValueError):
    """Grid-record file is not in the expected layout."""


def records_frame(records):
    rows = []
    for record in records:
        for link, estimates in record.estimates:
            rows.append({
                'e00': record.e00, 'e01': record.e01, 'e10': record.e10, 'e11': record.e11,
                'link': link,
                'unadjusted': estimates.unadjusted,
                'adjusted': estimates.adjusted,
                'converged': estimates.converged,
            })
    frame = pd.DataFrame(rows, columns=RECORD_COLUMNS)
    frame[['unadjusted', 'adjusted']] = frame[['unadjusted', 'adjusted']].astype(float)
    return frame


def write_records_csv(records, path):
    records_frame(records).to_csv(path, index=False, float_format=FLOAT_FORMAT,
                                  na_rep='', lineterminator='\n')
    logger.info(f"✓ Grid records saved to: {path}")


def _optional(value):
    return None if pd.isna(value) else float(value)


def read_records_csv(path):
    """Parse a records file written by write_records_csv."""
    try:
        frame = pd.read_csv(path, dtype={'link': str}, float_precision='round_trip')
    except pd.errors.EmptyDataError:
        raise RecordsFormatError(f"{path}: empty records file")
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise RecordsFormatError(f"{path}: {e}")

    if list(frame.columns) != RECORD_COLUMNS:
        raise RecordsFormatError(f"{path}: header must be {','.join(RECORD_COLUMNS)}")

    try:
        counts = frame[COUNT_COLUMNS].astype(int)
        values = frame[['unadjusted', 'adjusted']].astype(float)
    except (ValueError, TypeError) as e:
        raise RecordsFormatError(f"{path}: {e}")

    grouped = {}
    for i in range(len(frame)):
        key = tuple(int(v) for v in counts.iloc[i])
        estimates = LinkEstimates(_optional(values.iloc[i, 0]), _optional(values.iloc[i, 1]))
        grouped.setdefault(key, []).append((str(frame['link'].iloc[i]), estimates))

    return [GridRecord(*key, estimates=tuple(pairs)) for key, pairs in grouped.items()]


def write_ba_csv(points, path):
    frame = pd.DataFrame([(p.mean, p.diff) for p in points], columns=['mean', 'diff'])
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info(f"✓ Bland-Altman points saved to: {path}")


def write_pattern_report(report, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"✓ Pattern report saved to: {path}")


def write_grid_outputs(records, report, points_by_link, out_dir):
    """records.csv, ba_<link>.csv and pattern_report.json in one directory."""
    os.makedirs(out_dir, exist_ok=True)
    write_records_csv(records, os.path.join(out_dir, 'records.csv'))
    for link, points in points_by_link.items():
        write_ba_csv(points, os.path.join(out_dir, f"ba_{link}.csv"))
    write_pattern_report(report, os.path.join(out_dir, 'pattern_report.json'))
