import json

import numpy as np
import pytest

from pyfastgate.core.errors import (DomainError, SchemeCancellationError, SchemeInvariantError, SchemeOrderingError,
                                    SchemeParseError)
from pyfastgate.core.kick_scheme import (KickGroup, KickScheme, SymmetricScheme, as_kick_scheme, cancelled_pairs,
                                         coincidence_clusters, expand_symmetric, scheme_from_dict, scheme_from_json)


@pytest.mark.parametrize('z', [0, 1.5, 'one'])
def test_group_needs_nonzero_integer_count(z):
    with pytest.raises(SchemeInvariantError):
        KickGroup(z, 0.0)


def test_integral_float_count_is_accepted():
    assert KickGroup(2.0, 0.1).z == 2


def test_empty_scheme_is_rejected():
    with pytest.raises(SchemeInvariantError):
        KickScheme(())


def test_times_must_increase():
    with pytest.raises(SchemeOrderingError):
        KickScheme.from_arrays([1, 1], [0.5, 0.5])
    with pytest.raises(SchemeOrderingError):
        KickScheme.from_arrays([1, -1, 1], [0.0, 0.4, 0.2])


def test_merged_sums_coincident_pairs_and_drops_cancelled_ones():
    scheme = KickScheme.merged([1, 1, -1, 1, -1], [0.3, 0.0, 0.6, 0.3 + 1e-12, 0.0 + 5e-10])
    np.testing.assert_array_equal(scheme.z, [2, -1])
    np.testing.assert_allclose(scheme.t, [0.3, 0.6])


def test_fully_cancelled_pairs_leave_no_scheme():
    with pytest.raises(SchemeCancellationError):
        KickScheme.merged([1, -1, -2, 1, 1], [0.2, 0.2, 0.7, 0.7, 0.7 + 1e-12])
    with pytest.raises(DomainError):
        KickScheme.merged([1, -1], [0.0, 0.0])
    with pytest.raises(SchemeInvariantError):
        KickScheme.merged([], [])


def test_coincidence_clusters():
    clusters = coincidence_clusters(np.array([0.0, 5e-10, 0.3, 0.3 + 2e-9, 0.6]))
    assert [list(c) for c in clusters] == [[0, 1], [2], [3], [4]]
    assert coincidence_clusters(np.array([])) == []


@pytest.mark.parametrize('z, t, cancelled', [
    ([1, 1, 1], [0.0, 0.0, 0.4], 0),
    ([1, -1, 1], [0.0, 0.0, 0.4], 2),
    ([2, -1, -1, 1], [0.5, 0.5, 0.1, 0.1], 4),
    ([3, -1], [0.2, 0.2], 2),
])
def test_cancelled_pairs(z, t, cancelled):
    assert cancelled_pairs(z, t) == cancelled


def test_scheme_properties():
    scheme = KickScheme.from_arrays([2, -3, 1], [0.0, 0.25, 1.0])
    assert scheme.n_groups == 3
    assert scheme.n_pairs == 6
    assert scheme.time_differences()[2, 0] == pytest.approx(1.0)
    np.testing.assert_allclose(scheme.shifted(1.0).t, [1.0, 1.25, 2.0])
    np.testing.assert_array_equal(scheme.scaled_z(-1).z, [-2, 3, -1])


def test_symmetric_expansion_pattern():
    s = SymmetricScheme(1, 2, 2, 3, 0.9, 0.6, 0.2)
    scheme = expand_symmetric(s)
    np.testing.assert_array_equal(scheme.z, [3, -6, 6, -6, 6, -3])
    np.testing.assert_allclose(scheme.t, [-0.9, -0.6, -0.2, 0.2, 0.6, 0.9])
    assert scheme.n_pairs == s.n_pairs == 2 * 3 * 5
    assert scheme.z.sum() == 0


def test_gzc_expansion():
    scheme = expand_symmetric(SymmetricScheme(2, 3, 2, 1, 0.5, 0.3, 0.1, negate=True))
    np.testing.assert_array_equal(scheme.z, [-2, 3, -2, 2, -3, 2])
    assert scheme.n_pairs == 14


@pytest.mark.parametrize('taus', [(0.3, 0.5, 0.1), (0.5, 0.3, 0.3), (0.5, 0.3, 0.0)])
def test_symmetric_ordering(taus):
    with pytest.raises(SchemeOrderingError):
        SymmetricScheme(1, 2, 2, 1, *taus)


def test_scheme_documents():
    scheme = KickScheme.from_arrays([1, -2], [0.0, 0.75])
    assert scheme_from_dict(scheme.to_dict()) == scheme
    symmetric = scheme_from_dict({'abc': [1, 2, 2], 'n': 1, 'tau': [0.5, 0.3, 0.1]})
    assert isinstance(symmetric, SymmetricScheme)
    assert as_kick_scheme(symmetric).n_pairs == 10


@pytest.mark.parametrize('document', [
    {'groups': [{'z': 1, 't': 0.0}], 'units': 'trap_periods', 'comment': 'x'},
    {'groups': [{'z': 1, 't': 0.0}], 'units': 'seconds'},
    {'groups': [{'z': 1}]},
    {'groups': [{'z': 1, 't': '0.0'}]},
    {'abc': [1, 2], 'n': 1, 'tau': [0.5, 0.3, 0.1]},
    {'z': [1], 't': [0.0]},
    [1, 2],
])
def test_malformed_documents(document):
    with pytest.raises(SchemeParseError):
        scheme_from_dict(document)


def test_malformed_json_reports_position():
    with pytest.raises(SchemeParseError) as info:
        scheme_from_json('{"groups": [\n  {"z": 1, "t": }]}')
    assert info.value.line == 2
    assert info.value.column is not None


def test_json_invariant_violation_is_not_a_parse_error():
    text = json.dumps({'groups': [{'z': 0, 't': 0.0}]})
    with pytest.raises(SchemeInvariantError) as info:
        scheme_from_json(text)
    assert not isinstance(info.value, SchemeParseError)
