import pytest

import passivenet as pn


TABLE1_HUB = pn.ContinuousTF((1.0, 0.0), (0.5, 15.0, 1.0))
TABLE1_NODES = (
    pn.ImpedanceTriple(10.0, 5.0, 400.0),
    pn.ImpedanceTriple(-10.0, -5.0, -400.0),
    pn.ImpedanceTriple(-20.0, -10.0, -800.0),
)
TABLE1_DELAYS = (
    pn.DelayProfile(0.05, 0.0125, 20.0),
    pn.DelayProfile(0.1, 0.025, 20.0),
    pn.DelayProfile(0.15, 0.0375, 20.0),
)


def table1_topology(**overrides) -> pn.Topology:
    kwargs = dict(
        hub=TABLE1_HUB,
        nodes=TABLE1_NODES,
        delays=TABLE1_DELAYS,
        weights=pn.WeightMatrix((1.0, 1.0, 1.0)),
        stabilizer_enabled=True,
        xi=12.0,
        inertia_filter_cutoff=20.0,
        command_filter_cutoff=15.0,
    )
    kwargs.update(overrides)
    return pn.Topology(**kwargs)


def passive_topology(**overrides) -> pn.Topology:
    kwargs = dict(
        hub=TABLE1_HUB,
        nodes=(
            pn.ImpedanceTriple(10.0, 5.0, 400.0),
            pn.ImpedanceTriple(10.0, 5.0, 400.0),
            pn.ImpedanceTriple(20.0, 10.0, 800.0),
        ),
        delays=(
            pn.DelayProfile(0.0, 0.0, 0.0),
            pn.DelayProfile(0.0, 0.0, 0.0),
            pn.DelayProfile(0.0, 0.0, 0.0),
        ),
        weights=pn.WeightMatrix((1.0, 1.0, 1.0)),
        command_filter_cutoff=None,
    )
    kwargs.update(overrides)
    return pn.Topology(**kwargs)


@pytest.fixture(scope="session")
def bundled_runs():
    """Every bundled scenario, run once per test session."""
    runs = {}
    for name in pn.bundled_config_names():
        cfg = pn.parse_config_file(pn.bundled_config_path(name))
        trace, metrics = pn.build(cfg.topology, cfg.scenario).run()
        runs[name] = (cfg, trace, metrics)
    return runs
