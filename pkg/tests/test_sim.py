import math

import numpy as np
import pytest

import passivenet as pn

from conftest import TABLE1_DELAYS, passive_topology, table1_topology


def test_build_estimates_hub_index():
    topo = table1_topology(xi=None)
    sim = pn.build(topo, pn.Scenario(kind="impulse", duration=1.0, dt=0.001))
    assert sim.xi == pytest.approx(15.0, abs=1e-6)


def test_build_uses_supplied_index():
    sim = pn.build(table1_topology(), pn.Scenario(kind="impulse", duration=1.0, dt=0.001))
    assert sim.xi == 12.0


def test_mismatched_weight_length_rejected():
    with pytest.raises(pn.ConfigurationError):
        table1_topology(weights=pn.WeightMatrix((1.0, 1.0)))


def test_mismatched_delay_count_rejected():
    with pytest.raises(pn.ConfigurationError):
        table1_topology(delays=TABLE1_DELAYS[:2])


def test_all_quiet_run_is_identically_zero():
    topo = passive_topology()
    scen = pn.Scenario(kind="external", duration=0.5, dt=0.001, samples=())
    trace, metrics = pn.build(topo, scen).run()
    assert metrics.steps == 500
    for rec in trace.records:
        assert rec.y == 0.0 and rec.x == 0.0 and rec.e_obs == 0.0 and rec.e_hat == 0.0
        assert all(v == 0.0 for v in rec.u + rec.u_hat + rec.alpha + rec.dissipated)


def test_stabilizer_off_equivalence():
    topo = table1_topology(stabilizer_enabled=False)
    scen = pn.Scenario(kind="impulse", duration=0.3, dt=0.001)
    trace, _ = pn.build(topo, scen).run()
    assert len(trace.records) > 0
    for rec in trace.records:
        assert rec.u_hat == rec.u
        assert all(a == 0.0 for a in rec.alpha)
        assert all(d == 0.0 for d in rec.dissipated)


def test_determinism_bitwise():
    scen = pn.Scenario(kind="dual-sine", duration=1.0, dt=0.001, amplitude=20.0)
    t1, m1 = pn.build(table1_topology(), scen).run()
    t2, m2 = pn.build(table1_topology(), scen).run()
    assert t1.records == t2.records
    assert m1 == m2


def test_system_level_share_law():
    # broadcast output makes every S_i equal, so D_i * q_i agree cumulatively
    q = (1.0, 1e-4, 1.0)
    topo = table1_topology(weights=pn.WeightMatrix(q))
    scen = pn.Scenario(kind="dual-sine", duration=3.0, dt=0.001, amplitude=20.0)
    trace, metrics = pn.build(topo, scen).run()
    assert metrics.total_injected > 0.0
    for rec in trace.records:
        prods = [d * qi for d, qi in zip(rec.dissipated, q)]
        ref = max(abs(p) for p in prods)
        if ref == 0.0:
            continue
        assert max(prods) - min(prods) <= 1e-9 * ref


def _resummed_e_hat(trace):
    total = 0.0
    out = []
    m = trace.num_nodes
    for rec in trace.records:
        y_vec = np.full(m, rec.y)
        total += trace.dt * (
            trace.xi * rec.y * rec.y + float(np.dot(np.asarray(rec.u_hat), y_vec))
        )
        out.append(total)
    return out


@pytest.mark.parametrize("stabilizer", [True, False])
def test_energy_audit_resummation(stabilizer):
    topo = table1_topology(stabilizer_enabled=stabilizer)
    scen = pn.Scenario(kind="impulse", duration=2.0, dt=0.001)
    trace, _ = pn.build(topo, scen).run()
    resummed = _resummed_e_hat(trace)
    for rec, want in zip(trace.records, resummed):
        assert rec.e_hat == pytest.approx(want, abs=1e-9)


def test_passive_baseline_never_fires():
    scen = pn.Scenario(kind="dual-sine", duration=2.0, dt=0.001, amplitude=20.0)
    trace, metrics = pn.build(passive_topology(), scen).run()
    assert not metrics.diverged
    assert metrics.total_injected == 0.0
    assert all(rec.e_obs >= 0.0 for rec in trace.records)
    assert all(all(a == 0.0 for a in rec.alpha) for rec in trace.records)


def test_unstabilized_run_diverges_and_stops_early():
    topo = table1_topology(stabilizer_enabled=False)
    scen = pn.Scenario(kind="impulse", duration=20.0, dt=0.001)
    trace, metrics = pn.build(topo, scen).run()
    assert metrics.diverged
    assert metrics.steps < scen.num_steps
    last = trace.records[-1]
    assert abs(last.y) > 1e6 or last.e_obs < -1e6


def test_step_past_duration_faults():
    sim = pn.build(table1_topology(), pn.Scenario(kind="impulse", duration=0.01, dt=0.001))
    for _ in range(10):
        sim.step()
    with pytest.raises(pn.SimulationFault):
        sim.step()


def test_dissipated_is_nondecreasing_and_sums_to_ledger():
    scen = pn.Scenario(kind="dual-sine", duration=2.0, dt=0.001, amplitude=20.0)
    sim = pn.build(table1_topology(), scen)
    trace, metrics = sim.run()
    prev = (0.0,) * 3
    for rec in trace.records:
        assert all(d >= p for d, p in zip(rec.dissipated, prev))
        prev = rec.dissipated
    assert sum(prev) == pytest.approx(sim.ledger.injected_energy, rel=1e-12, abs=1e-300)


def test_scenario_validation():
    with pytest.raises(pn.ConfigurationError):
        pn.Scenario(kind="square", duration=1.0, dt=0.001)
    with pytest.raises(pn.ConfigurationError):
        pn.Scenario(kind="impulse", duration=0.0, dt=0.001)
    with pytest.raises(pn.ConfigurationError):
        pn.Scenario(kind="external", duration=1.0, dt=0.001)  # samples required
    with pytest.raises(pn.ConfigurationError):
        pn.Scenario(kind="impulse", duration=1.0, dt=0.001, samples=(1.0,))


def test_impulse_realization():
    scen = pn.Scenario(kind="impulse", duration=1.0, dt=0.001, amplitude=2.0)
    assert scen.input_at(0) == 2000.0
    assert scen.input_at(1) == 0.0


def test_dual_sine_realization():
    scen = pn.Scenario(kind="dual-sine", duration=1.0, dt=0.001, amplitude=20.0)
    t = 0.25
    want = 20.0 * (math.sin(math.pi * t) + math.sin(0.5 * math.pi * t))
    assert scen.input_at(250) == pytest.approx(want, rel=1e-12)


def test_external_stream_pads_with_zeros():
    scen = pn.Scenario(kind="external", duration=0.01, dt=0.001, samples=(1.0, 2.0))
    assert [scen.input_at(n) for n in range(4)] == [1.0, 2.0, 0.0, 0.0]
