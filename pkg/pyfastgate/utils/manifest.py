"""Run manifests: what a command was run with, hashed so that every artifact can name the run that produced it."""
import dataclasses
import hashlib
import json
import logging
import pathlib
import typing

logger = logging.getLogger(__name__)

UNHASHED_FIELDS = ('output_dir', 'duration_s', 'argv')


def file_digest(path: str or pathlib.Path) -> str:
    return hashlib.sha256(pathlib.Path(path).read_bytes()).hexdigest()


@dataclasses.dataclass
class RunManifest:
    """
    ### Description:

    Record of one command-line run. The hash covers the command, the contents of the input files, the seed, the
    parameter overrides and the tool version; `output_dir`, `argv` and the wall-clock `duration_s` are kept for
    replay and bookkeeping only.
    """
    command: str
    argv: typing.List[str]
    inputs: typing.Dict[str, str]
    seed: int or None
    overrides: typing.Dict[str, typing.Any]
    output_dir: str
    version: str
    duration_s: float = 0.0

    @classmethod
    def for_run(cls, command: str, argv: typing.Sequence[str], input_paths: typing.Sequence[str],
                seed: int or None, overrides: dict, output_dir: str, version: str) -> 'RunManifest':
        inputs = {str(p): file_digest(p) for p in input_paths if p is not None and pathlib.Path(p).is_file()}
        return cls(command=command, argv=list(argv), inputs=inputs, seed=seed, overrides=dict(overrides),
                   output_dir=str(output_dir), version=version)

    def digest(self) -> str:
        hashed = {k: v for k, v in dataclasses.asdict(self).items() if k not in UNHASHED_FIELDS}
        hashed['inputs'] = sorted(hashed['inputs'].values())
        return hashlib.sha256(json.dumps(hashed, sort_keys=True, default=str).encode()).hexdigest()

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), 'hash': self.digest()}

    @classmethod
    def from_dict(cls, d: dict) -> 'RunManifest':
        fields = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in fields})

    def write(self, path: str or pathlib.Path):
        pathlib.Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str) + '\n')
        logger.debug(f'Wrote manifest {self.digest()[:12]} to {path}')
