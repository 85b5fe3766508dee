import numpy as np
import pytest

from pyfastgate.core.errors import DomainError, SchemeParseError
from pyfastgate.core.kick_scheme import expand_symmetric
from pyfastgate.core.trap import LaserParams
from pyfastgate.optics.splitter import (SplitterNetwork, SplitterStage, check_realizability, compile_network,
                                        direct_network, equal_split, network_of, propagate, pulse_area_for_pi_pairs,
                                        symmetric_network, train_to_scheme)
from pyfastgate.schemes.families import SchemeFamily


def leaf_fractions(stages):
    return sorted(f for _, _, f in propagate(stages, [(0.0, 1, 1.0)]))


def test_lossless_compilation_conserves_energy():
    network = SplitterNetwork((SplitterStage(1e-9, 0.3), SplitterStage(2e-9, 0.5, True)))
    train = compile_network(network, LaserParams(), n_laser_pulses=3, area=5.0)
    assert train.n_entries == 12
    assert train.energy == pytest.approx(3 * 5.0 ** 2)
    assert np.all(np.diff(train.times_s) >= 0)
    assert set(train.source_pulse) == {0, 1, 2}
    assert set(train.directions) == {1, -1}


def test_equal_split_thirds():
    np.testing.assert_allclose(leaf_fractions(equal_split(3)), [1 / 3] * 3)
    np.testing.assert_allclose(leaf_fractions(equal_split(5)), [1 / 5] * 5)
    assert equal_split(1) == ()


def test_direct_network_delivers_the_exact_scheme(exact_direct_scheme, exact_direct_delays, trap):
    network = direct_network(exact_direct_delays, trap)
    assert network.n_components == 8
    area = pulse_area_for_pi_pairs(network)
    assert area == pytest.approx(4 * np.pi)
    train = compile_network(network, LaserParams(), area=area)
    np.testing.assert_allclose(train.areas, np.sqrt(2) * np.pi)
    report = check_realizability(exact_direct_scheme, train, trap)
    assert report.ok
    assert report.n_matched == exact_direct_scheme.n_groups
    delivered = train_to_scheme(train, trap)
    np.testing.assert_array_equal(delivered.z, exact_direct_scheme.z)
    np.testing.assert_allclose(delivered.t, exact_direct_scheme.t, atol=1e-12)


def test_full_pulse_area_fails_the_pi_pulse_check(exact_direct_scheme, exact_direct_delays, trap):
    network = direct_network(exact_direct_delays, trap)
    report = check_realizability(exact_direct_scheme, compile_network(network, LaserParams()), trap)
    assert not report.ok
    assert len(report.area_failures) == 8
    assert not report.mismatched


@pytest.mark.parametrize('kind, kwargs, taus, components', [
    ('symmetric_abc', {'abc': (1, 2, 2), 'n': 2}, (0.3, 0.2, 0.1), 20),
    ('gzc', {}, (0.9, 0.5, 0.2), 14),
])
def test_symmetric_networks(trap, kind, kwargs, taus, components):
    family = SchemeFamily(kind, trap=trap, **kwargs)
    network = network_of(family, taus)
    assert network.n_components == components
    assert leaf_fractions(network.stages) == pytest.approx([1 / components] * components)
    train = compile_network(network, LaserParams(), area=pulse_area_for_pi_pairs(network))
    report = check_realizability(expand_symmetric(family.symmetric_scheme(taus)), train, trap)
    assert report.ok
    assert report.n_matched == 6


def test_symmetric_network_with_grouping_delay(trap):
    network = symmetric_network((1, 1, 1), 2, (0.9, 0.5, 0.2), trap, grouping_delay_s=1e-12)
    train = compile_network(network, LaserParams(), area=pulse_area_for_pi_pairs(network))
    scheme = expand_symmetric(SchemeFamily('symmetric_abc', abc=(1, 1, 1), n=2).symmetric_scheme([0.9, 0.5, 0.2]))
    assert not check_realizability(scheme, train, trap).ok
    assert train_to_scheme(train, trap, tol=1e-4).n_pairs == scheme.n_pairs


def test_alternating_network(trap):
    family = SchemeFamily('alternating_split', n_delays=3, n_laser_pulses=2, trap=trap)
    values = [0.3, 0.1, 0.7]
    network = network_of(family, values)
    assert network.stages[-1].flip
    train = compile_network(network, LaserParams(rep_rate=family.rep_rate), family.n_laser_pulses,
                            pulse_area_for_pi_pairs(network))
    assert train.n_entries == 16
    assert check_realizability(family.generate(values), train, trap).ok


def test_cancelled_components_need_no_group(trap):
    family = SchemeFamily('alternating_split', n_delays=3, trap=trap)
    values = [0.3, 0.1, 0.4]
    network = network_of(family, values)
    train = compile_network(network, LaserParams(rep_rate=family.rep_rate), family.n_laser_pulses,
                            pulse_area_for_pi_pairs(network))
    assert train.n_entries == 8
    report = check_realizability(family.generate(values), train, trap)
    assert report.ok
    assert report.n_matched == 6
    assert report.n_cancelled == 2
    assert report.unmatched_entries == ()
    assert report.to_dict()['n_cancelled'] == 2


def test_wrong_scheme_is_reported(exact_direct_delays, trap):
    network = direct_network(exact_direct_delays, trap)
    train = compile_network(network, LaserParams(), area=pulse_area_for_pi_pairs(network))
    other = SchemeFamily('direct', trap=trap).generate([0.5, 0.3, 0.6])
    report = check_realizability(other, train, trap)
    assert not report.ok
    assert report.unmatched_groups and report.unmatched_entries


def test_shifted_network():
    network = SplitterNetwork((SplitterStage(0.0, 0.5, long_path=(SplitterStage(1e-9),)), SplitterStage(2e-9)))
    shifted = network.shifted(1e-11)
    assert shifted.stages[0].delay_s == 0.0
    assert shifted.stages[0].long_path[0].delay_s == pytest.approx(1.01e-9)
    assert shifted.stages[1].delay_s == pytest.approx(2.01e-9)
    assert network.shifted(1e-11, include_zero_delay=True).stages[0].delay_s == pytest.approx(1e-11)
    assert network.shifted(-5e-9).stages[1].delay_s == 0.0


def test_network_documents(trap):
    network = network_of(SchemeFamily('gzc', trap=trap), (0.9, 0.5, 0.2))
    assert SplitterNetwork.from_dict(network.to_dict()) == network
    with pytest.raises(SchemeParseError):
        SplitterNetwork.from_dict({'stages': [{'delay_s': 0.0, 'length': 1}]})
    with pytest.raises(SchemeParseError):
        SplitterNetwork.from_dict({'loops': []})


@pytest.mark.parametrize('kwargs', [{'delay_s': -1e-9}, {'delay_s': 0.0, 'ratio': 1.0},
                                    {'delay_s': 0.0, 'ratio': 0.0}])
def test_invalid_stages(kwargs):
    with pytest.raises(DomainError):
        SplitterStage(**kwargs)


def test_invalid_networks():
    with pytest.raises(DomainError):
        SplitterNetwork(())
    with pytest.raises(DomainError):
        SplitterNetwork((SplitterStage(0.0),), overhead_factor=0.5)
    with pytest.raises(DomainError):
        compile_network(SplitterNetwork((SplitterStage(0.0),)), LaserParams(), n_laser_pulses=0)


def test_no_network_for_free_times_or_serial_schemes(trap):
    with pytest.raises(DomainError):
        network_of(SchemeFamily('free_times', n_free=2, trap=trap), (0.2, 0.4))
    with pytest.raises(DomainError):
        network_of(SchemeFamily('gzc', serial_pulses=True, trap=trap), (0.9, 0.5, 0.2))
