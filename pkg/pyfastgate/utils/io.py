"""Reading input documents and writing CSV/JSON artifacts stamped with a run manifest hash."""
import csv
import dataclasses
import json
import logging
import pathlib
import typing

import numpy as np

from pyfastgate.core.errors import SchemeParseError
from pyfastgate.core.kick_scheme import KickScheme, SymmetricScheme, scheme_from_dict
from pyfastgate.core.trap import LaserParams, TrapParams
from pyfastgate.optics.splitter import SplitterNetwork
from pyfastgate.schemes.families import SchemeFamily

logger = logging.getLogger(__name__)


def read_json(path: str or pathlib.Path) -> typing.Any:
    """Parses a JSON file, raising `SchemeParseError` with the line and column of a syntax error."""
    path = pathlib.Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SchemeParseError(f'Cannot read {path}: {e.strerror}')
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemeParseError(f'{path}: {e.msg}', e.lineno, e.colno)


def _document(path) -> typing.Any:
    data = read_json(path)
    if isinstance(data, dict):
        data.pop('manifest', None)
    return data


def load_scheme(path: str or pathlib.Path) -> KickScheme or SymmetricScheme:
    """Loads a scheme document. A `"manifest"` field left by `write_json` is ignored."""
    return scheme_from_dict(_document(path))


def load_network(path: str or pathlib.Path) -> SplitterNetwork:
    return SplitterNetwork.from_dict(_document(path))


def load_family(path: str or pathlib.Path, trap: TrapParams = TrapParams()) -> SchemeFamily:
    return SchemeFamily.from_dict(_document(path), trap=trap)


def _load_params(cls, path):
    data = read_json(path)
    if not isinstance(data, dict):
        raise SchemeParseError(f'{path}: a parameter file must hold a JSON object')
    unknown = set(data) - {f.name for f in dataclasses.fields(cls)}
    if unknown:
        raise SchemeParseError(f'{path}: unknown field(s) {sorted(unknown)}')
    return cls.from_dict(data)


def load_trap_params(path: str or pathlib.Path) -> TrapParams:
    return _load_params(TrapParams, path)


def load_laser_params(path: str or pathlib.Path) -> LaserParams:
    return _load_params(LaserParams, path)


def json_default(value):
    """`default` hook of `json.dumps` for numpy scalars, arrays and complex numbers."""
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f'{type(value)} is not JSON serializable')


def write_json(path: str or pathlib.Path, data: dict, manifest_hash: str):
    """Writes `data` with an added `"manifest"` field, keys sorted so equal inputs give equal bytes."""
    document = {**data, 'manifest': manifest_hash}
    pathlib.Path(path).write_text(json.dumps(document, indent=2, sort_keys=True, default=json_default) + '\n')
    logger.info(f'Wrote {path}')


def write_csv(path: str or pathlib.Path, columns: typing.Sequence[str], rows: typing.Iterable[typing.Sequence],
              manifest_hash: str):
    """Writes a CSV table whose first line is `# manifest: <hash>`."""
    with open(path, 'w', newline='') as f:
        f.write(f'# manifest: {manifest_hash}\n')
        writer = csv.writer(f)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    logger.info(f'Wrote {path}')


def read_csv(path: str or pathlib.Path) -> typing.Tuple[str, typing.List[str], typing.List[typing.List[str]]]:
    """Reads a table written by `write_csv`; returns the manifest hash, the header and the rows as strings."""
    with open(path, newline='') as f:
        first = f.readline().strip()
        if not first.startswith('# manifest: '):
            raise SchemeParseError(f'{path} does not start with a manifest line', 1, 1)
        reader = csv.reader(f)
        header = next(reader)
        return first[len('# manifest: '):], header, [row for row in reader]
