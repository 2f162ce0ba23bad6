"""Exit criteria for the driven-qubit reproduction.

Each test is one criterion; a PASS/FAIL line per criterion is printed in
the terminal summary. Tolerances are fixed here and are not tuned.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qthermo.drive import DriveProtocol, propagator, time_ordered_product
from qthermo.linalg import unitarity_error
from qthermo.metrics import thermo_record
from qthermo.sweep import SweepConfig, run_sweep
from qthermo.thermal import ThermalSpec

LAB_T_HZ = 1580.2
LAB_NU_I = 2000.0
N_RANDOM = 100


def _log_uniform(rng, lo, hi):
    return float(np.exp(rng.uniform(math.log(lo), math.log(hi))))


def random_protocols(n=N_RANDOM, seed=7):
    """Protocols with temperature, gaps and driving time each within x5 of the experiment.

    Draws are kept when the thermal ratios nu / T also stay within x5 of
    the experiment's range (2000/1580.2 to 5000/1580.2); beyond that the
    Gibbs populations leave double precision.
    """
    rng = np.random.default_rng(seed)
    lo_ratio, hi_ratio = LAB_NU_I / LAB_T_HZ / 5, 5000.0 / LAB_T_HZ * 5
    out = []
    while len(out) < n:
        t_hz = _log_uniform(rng, LAB_T_HZ / 5, LAB_T_HZ * 5)
        nu_i = _log_uniform(rng, LAB_NU_I / 5, LAB_NU_I * 5)
        nu_f = _log_uniform(rng, 3600.0 / 5, 5000.0 * 5)
        tau = _log_uniform(rng, 100e-6 / 5, 800e-6 * 5)
        if lo_ratio <= min(nu_i, nu_f) / t_hz and max(nu_i, nu_f) / t_hz <= hi_ratio:
            out.append((t_hz, DriveProtocol(nu_i, nu_f, tau)))
    return out


@pytest.fixture(scope="module")
def evaluated():
    start = time.perf_counter()
    rows = run_sweep(SweepConfig())
    records = [r.record for r in rows]
    for t_hz, p in random_protocols():
        U = propagator(p)
        records.append(
            thermo_record(p.initial_hamiltonian(), p.final_hamiltonian(), U, ThermalSpec.from_temperature_hz(t_hz))
        )
    return rows, records, time.perf_counter() - start


def _by_gap(rows):
    out = {}
    for r in rows:
        out.setdefault(r.nu_f, []).append(r)
    return out


def test_c1_dual_route_entropy_identity(evaluated):
    """Both routes to the irreversible entropy agree within 1e-8 nats; runtime < 10 s."""
    rows, records, elapsed = evaluated
    assert len(records) == 16 + N_RANDOM
    worst = max(abs(r.s_irr_work_route - r.s_irr_relent_route) for r in records)
    print(f"C1 worst |work route - relent route| = {worst:.2e}, runtime {elapsed:.2f} s")
    assert worst < 1e-8
    assert elapsed < 10.0


def test_c2_coherence_population_decomposition(evaluated):
    """Coherence plus population terms reproduce the entropy within 1e-8; both >= -1e-12."""
    _, records, _ = evaluated
    worst = max(abs(r.coherence_term + r.population_term - r.s_irr_relent_route) for r in records)
    print(f"C2 worst decomposition gap = {worst:.2e}")
    assert worst < 1e-8
    assert min(r.coherence_term for r in records) >= -1e-12
    assert min(r.population_term for r in records) >= -1e-12


def test_c3_generalized_clausius_bound(evaluated):
    """Entropy production never falls below 8 L^2 / pi^2 (margin >= -1e-10)."""
    _, records, _ = evaluated
    margin = min(r.s_irr_relent_route - r.bound_value for r in records)
    print(f"C3 smallest margin = {margin:.4e}")
    assert margin >= -1e-10


def test_c4_jarzynski_equality(evaluated):
    """Two-point-measurement work obeys Jarzynski within 1e-10 and <w> >= dF - 1e-10."""
    _, records, _ = evaluated
    worst = max(abs(r.jarzynski_lhs - r.jarzynski_rhs) for r in records)
    slack = min(r.avg_work - r.delta_F for r in records)
    print(f"C4 worst Jarzynski gap = {worst:.2e}, min <w> - dF = {slack:.3e} Hz")
    assert worst < 1e-10
    assert slack >= -1e-10


def test_c5a_entropy_falls_from_shortest_to_longest_drive(evaluated):
    """Entropy at tau = 100 us exceeds entropy at tau = 800 us for both final gaps."""
    rows, _, _ = evaluated
    for nu_f, group in _by_gap(rows).items():
        first, last = group[0], group[-1]
        print(f"C5a nu_f={nu_f:g}: S(100us)={first.s_irr_relent_route:.4f} S(800us)={last.s_irr_relent_route:.4f}")
        assert first.tau == pytest.approx(100e-6) and last.tau == pytest.approx(800e-6)
        assert first.s_irr_relent_route > last.s_irr_relent_route


def test_c5b_larger_final_gap_produces_more_entropy(evaluated):
    """At every common tau, entropy for nu_f = 5000 Hz exceeds that for 3600 Hz."""
    rows, _, _ = evaluated
    g = _by_gap(rows)
    for low, high in zip(g[3600.0], g[5000.0]):
        assert low.tau == high.tau
        assert high.s_irr_relent_route > low.s_irr_relent_route


def test_c5c_coherence_fraction_larger_for_smaller_gap(evaluated):
    """At every matched tau, C / S_irr is larger for nu_f = 3600 Hz than for 5000 Hz."""
    rows, _, _ = evaluated
    g = _by_gap(rows)
    failures = []
    for low, high in zip(g[3600.0], g[5000.0]):
        f_low = low.coherence_term / low.s_irr_relent_route
        f_high = high.coherence_term / high.s_irr_relent_route
        print(f"C5c tau={low.tau * 1e6:.0f} us: fraction 3600 Hz {f_low:.4f}, 5000 Hz {f_high:.4f}")
        if not f_low > f_high:
            failures.append(f"tau={low.tau * 1e6:.0f} us ({f_low:.4f} <= {f_high:.4f})")
    assert not failures, "coherence fraction ordering broken at " + ", ".join(failures)


def test_c6_propagator_convergence(evaluated):
    """Doubling the converged slice count moves U by < 1e-9; U^H U = I within 1e-10."""
    rows, _, _ = evaluated
    worst_delta = worst_unit = 0.0
    for r in rows:
        p = DriveProtocol(LAB_NU_I, r.nu_f, r.tau)
        U = propagator(p)
        doubled = time_ordered_product(p, 2 * U.slices)
        worst_delta = max(worst_delta, float(np.max(np.abs(doubled - U.matrix))))
        worst_unit = max(worst_unit, unitarity_error(U.matrix))
    print(f"C6 worst doubling change {worst_delta:.2e}, worst unitarity error {worst_unit:.2e}")
    assert worst_delta < 1e-9
    assert worst_unit < 1e-10


def test_c7_adiabatic_suppression(evaluated):
    """For nu_f = 3600 Hz, entropy at tau = 10 ms is below 10% of its tau = 100 us value."""
    rows, _, _ = evaluated
    fast = next(r for r in rows if r.nu_f == 3600.0 and r.tau == pytest.approx(100e-6))
    p = DriveProtocol(LAB_NU_I, 3600.0, 10e-3)
    slow = thermo_record(
        p.initial_hamiltonian(), p.final_hamiltonian(), propagator(p), ThermalSpec.from_temperature_hz(LAB_T_HZ)
    )
    ratio = slow.s_irr_relent_route / fast.s_irr_relent_route
    print(
        f"C7 S(10 ms)={slow.s_irr_relent_route:.5f} S(100 us)={fast.s_irr_relent_route:.5f} "
        f"ratio={ratio:.4f} (population term {slow.population_term:.5f})"
    )
    assert ratio < 0.10


def test_c8_unit_suite_green_and_fast():
    """Every operation example passes and the unit suite finishes within 60 s."""
    tests_dir = Path(__file__).parent
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(tests_dir),
         "--ignore", str(Path(__file__))],
        capture_output=True,
        text=True,
        cwd=tests_dir.parent,
    )
    elapsed = time.perf_counter() - start
    print(f"C8 unit suite exit {proc.returncode} in {elapsed:.1f} s: {proc.stdout.strip().splitlines()[-1]}")
    assert proc.returncode == 0, proc.stdout[-2000:]
    assert elapsed < 60.0
