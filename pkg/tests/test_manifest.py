import dataclasses
import json

from pyfastgate.utils.manifest import RunManifest, file_digest


def make_manifest(tmp_path, **changes):
    path = tmp_path / 'scheme.json'
    if not path.exists():
        path.write_text('{"groups": [{"z": 1, "t": 0.0}]}')
    manifest = RunManifest.for_run('evaluate', ['evaluate', str(path)], [str(path), None], 7, {'eta': 0.2},
                                   str(tmp_path / 'out'), '1.0.0')
    return dataclasses.replace(manifest, **changes)


def test_bookkeeping_fields_are_not_hashed(tmp_path):
    manifest = make_manifest(tmp_path)
    moved = make_manifest(tmp_path, output_dir='elsewhere', duration_s=12.5, argv=['evaluate', '--quiet'])
    assert manifest.digest() == moved.digest()


def test_hash_follows_seed_and_inputs(tmp_path):
    manifest = make_manifest(tmp_path)
    assert make_manifest(tmp_path, seed=8).digest() != manifest.digest()
    assert make_manifest(tmp_path, overrides={'eta': 0.1}).digest() != manifest.digest()
    (tmp_path / 'scheme.json').write_text('{"groups": [{"z": 2, "t": 0.0}]}')
    assert make_manifest(tmp_path).digest() != manifest.digest()


def test_missing_inputs_are_skipped(tmp_path):
    manifest = make_manifest(tmp_path)
    assert list(manifest.inputs.values()) == [file_digest(tmp_path / 'scheme.json')]


def test_manifest_file_round_trip(tmp_path):
    manifest = make_manifest(tmp_path, duration_s=1.5)
    manifest.write(tmp_path / 'manifest.json')
    loaded = RunManifest.from_dict(json.loads((tmp_path / 'manifest.json').read_text()))
    assert loaded == manifest
    assert loaded.to_dict()['hash'] == manifest.digest()
