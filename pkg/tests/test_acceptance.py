"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from qmdiqkd import attacks, bound, channel, cli, tables
from qmdiqkd.bound import BoundConfig
from qmdiqkd.channel import DetectorParams
from qmdiqkd.qstate import BellLabel, bell_overlap_nonzero


@pytest.fixture
def verdict(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail

    return emit


def test_1_table_reproduction(verdict):
    start = time.perf_counter()
    # Rows z = 0, 1, 2 over columns (0,0) (0,1) (1,0) (1,1) (2,2) (2,3) (3,2) (3,3).
    printed = np.array(
        [
            [1 / 2, 1 / 2, 1 / 2, 1 / 2, 0, 1, 1, 0],
            [1 / 2, 0, 0, 1 / 2, 1 / 2, 0, 0, 1 / 2],
            [0, 1 / 2, 1 / 2, 0, 1 / 2, 0, 0, 1 / 2],
        ]
    ).T
    ideal = tables.ideal_bb84_table()
    joint = tables.joint_sender_table()
    ok_i = np.array_equal(ideal.array, printed)
    ok_j = np.array_equal(joint.array, printed)
    elapsed = time.perf_counter() - start
    ok = ok_i and ok_j and ideal == joint and elapsed < 1.0
    verdict(1, ok, f"ideal exact={ok_i}, joint exact={ok_j}, equal={ideal == joint}, {elapsed:.3f}s")


def test_2_bell_structure(verdict):
    start = time.perf_counter()
    cols = [BellLabel.PHI_PLUS, BellLabel.PSI_MINUS, BellLabel.PSI_PLUS, BellLabel.PHI_MINUS]
    grid = {
        (0, 0): "1001",
        (1, 1): "1001",
        (0, 1): "0110",
        (1, 0): "0110",
        (2, 2): "1010",
        (3, 3): "1010",
        (2, 3): "0101",
        (3, 2): "0101",
    }
    mismatches = sum(
        bell_overlap_nonzero(x, y, b) != (marks[k] == "1")
        for (x, y), marks in grid.items()
        for k, b in enumerate(cols)
    )
    elapsed = time.perf_counter() - start
    verdict(2, mismatches == 0 and elapsed < 1.0, f"{mismatches} mismatches of 32, {elapsed:.3f}s")


def test_3_ideal_case_security(verdict):
    start = time.perf_counter()
    res = bound.key_rate(tables.ideal_bb84_table())
    elapsed = time.perf_counter() - start
    c = res.argmax
    ok = (
        res.epsilon <= 1e-6
        and res.e_p <= 1e-6
        and res.rate >= 1 - 1e-4
        and abs(c.c30 - c.c31) <= 0.02
        and abs(c.cp20 - c.cp21) <= 0.02
        and elapsed < 120
    )
    verdict(
        3,
        ok,
        f"eps={res.epsilon:.2e} e_p={res.e_p:.2e} R={res.rate:.6f} "
        f"|c30-c31|={abs(c.c30 - c.c31):.2e} |cp20-cp21|={abs(c.cp20 - c.cp21):.2e}, {elapsed:.1f}s",
    )


def _sweep(eta, steps, cfg):
    rng = cli.SweepRange(0.0, 100.0, steps)
    return cli.sweep_rows(DetectorParams(0.0, eta, 1e-5), rng, cfg)


def test_4_distance_sweep(verdict):
    start = time.perf_counter()
    rows = _sweep(0.1, 21, BoundConfig())
    elapsed = time.perf_counter() - start
    by_l = {round(r["l_km"]): r for r in rows}
    q = [r["rate_qmdi"] for r in rows]
    b = [r["rate_baseline"] for r in rows]
    a_ok = by_l[70]["rate_qmdi"] > 0 and by_l[90]["rate_qmdi"] == 0
    b_ok = all(bb >= qq for bb, qq in zip(b, q))
    c_ok = all(x >= y for x, y in zip(q, q[1:])) and all(x >= y for x, y in zip(b, b[1:]))
    d_ok = by_l[0]["rate_baseline"] - by_l[0]["rate_qmdi"] > 1e-3
    cutoff = next(r["l_km"] for r in rows if r["rate_qmdi"] == 0)
    lossless = channel.closed_form_table(DetectorParams(0.0, 1.0, 1e-5))
    gap = abs(bound.key_rate(lossless).rate - bound.baseline_key_rate(lossless))
    e_ok = gap <= 1e-3

    smoke_start = time.perf_counter()
    smoke = _sweep(0.1, 5, BoundConfig(grid_u=61, grid_r=11, refine_rounds=1))
    smoke_elapsed = time.perf_counter() - smoke_start
    smoke_ok = smoke[-1]["rate_qmdi"] == 0 and smoke[0]["rate_qmdi"] > 0

    ok = a_ok and b_ok and c_ok and d_ok and e_ok and elapsed < 1800 and smoke_ok and smoke_elapsed < 180
    verdict(
        4,
        ok,
        f"(a) R(70)={by_l[70]['rate_qmdi']:.4f} R(90)={by_l[90]['rate_qmdi']:.1f} first zero at L={cutoff:g} km "
        f"(b)={b_ok} (c)={c_ok} (d) gap(0)={by_l[0]['rate_baseline'] - by_l[0]['rate_qmdi']:.4f} "
        f"(e) eta=1 gap={gap:.1e}; sweep {elapsed:.0f}s, smoke {smoke_elapsed:.1f}s",
    )


def test_5_channel_oracle(verdict):
    start = time.perf_counter()
    points = [
        (0.0, 1.0, 0.0),
        (10.0, 0.1, 1e-5),
        (50.0, 0.1, 1e-5),
        (25.0, 0.6, 1e-3),
        (5.0, 0.9, 0.05),
    ]
    n = 10**6
    outside = 0
    for seed, (l_km, eta, d) in enumerate(points):
        p = DetectorParams(l_km, eta, d)
        est = channel.monte_carlo_table(p, n, seed)
        outside += int((~channel.within_sigma(est, channel.closed_form_table(p), n)).sum())
    elapsed = time.perf_counter() - start
    verdict(5, outside == 0 and elapsed < 60, f"{outside} of 120 entries outside 4 sigma, {elapsed:.1f}s")


def test_6_attack_suite(verdict):
    start = time.perf_counter()
    joint, strategy = attacks.four_dim_counterexample()
    diff = float(np.max(np.abs(strategy.induced_table().array - tables.joint_sender_table().array)))
    overlap = attacks.key_overlap(strategy)
    report = attacks.verify_strategy(strategy, joint.states, target=tables.joint_sender_table())
    single = attacks.run_single_bell()
    elapsed = time.perf_counter() - start
    ok = (
        diff <= 1e-9
        and overlap <= 1e-9
        and report.ok
        and single["indistinguishable"]
        and single["rate"] == 0.0
        and elapsed < 60
    )
    verdict(
        6,
        ok,
        f"four-dim table diff={diff:.1e} |<G001|G111>|={overlap:.1e} unitarity ok={report.ok}; "
        f"single-bell indistinguishable={single['indistinguishable']} R={single['rate']}, {elapsed:.1f}s",
    )


def _noisy(w):
    uniform = tables.OutcomeTable(np.full((8, 3), 1 / 3))
    return tables.mix([tables.ideal_bb84_table(), uniform], [1 - w, w])


def test_7_bound_soundness(verdict):
    start = time.perf_counter()
    cfg = BoundConfig()
    test_tables = {
        "closed form L=10": channel.closed_form_table(DetectorParams(10, 0.1, 1e-5)),
        "noise 0.05": _noisy(0.05),
        "noise 0.1": _noisy(0.1),
    }
    ratios = {}
    sound = True
    for seed, (name, t) in enumerate(test_tables.items()):
        res = bound.key_rate(t, cfg)
        worst = bound.adversary_sampling(t, 10**4, seed, cfg)
        ratios[name] = worst / res.epsilon_safe
        sound &= worst <= res.epsilon_safe

    rng = np.random.default_rng(11)
    monotone = True
    for _ in range(5):
        base = channel.closed_form_table(
            DetectorParams(rng.uniform(0, 80), rng.uniform(0.05, 1), 10 ** rng.uniform(-6, -3))
        )
        t = tables.mix([base, _noisy(rng.uniform(0, 0.2))], [0.5, 0.5])
        coarse = bound.epsilon_search(t, BoundConfig(grid_u=61, grid_r=11, refine_rounds=0))[0]
        fine = bound.epsilon_search(t, BoundConfig(grid_u=61, grid_r=11, refine_rounds=2))[0]
        monotone &= fine >= coarse - cfg.feas_tol
    elapsed = time.perf_counter() - start
    detail = ", ".join(f"{k}: {v:.3f}" for k, v in ratios.items())
    verdict(7, sound and monotone and elapsed < 600, f"sampled/eps_safe {detail}; refinement monotone={monotone}, {elapsed:.1f}s")


def test_8_mixed_state_properties(verdict):
    rng = np.random.default_rng(8)
    pairs = rng.uniform(0, 0.5, size=(1000, 2))
    concave = all(
        bound.binary_entropy((a + b) / 2) >= (bound.binary_entropy(a) + bound.binary_entropy(b)) / 2 - 1e-15
        for a, b in pairs
    )
    p1 = DetectorParams(5, 0.8, 1e-3)
    p2 = DetectorParams(30, 0.3, 1e-2)
    n = 10**6
    est = channel.monte_carlo_mixture_table([(0.3, p1), (0.7, p2)], n, seed=21)
    expected = tables.mix([channel.closed_form_table(p1), channel.closed_form_table(p2)], [0.3, 0.7])
    outside = int((~channel.within_sigma(est, expected, n)).sum())
    verdict(8, concave and outside == 0, f"H concave on 1000 pairs={concave}; mixture entries outside 4 sigma: {outside}")
