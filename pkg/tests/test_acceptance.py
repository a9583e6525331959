"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import time
from functools import lru_cache

import numpy as np
import pytest
from reference_data import (
    GHZ3,
    SWAP,
    SWAP_PRINT_TOL,
    ghz_full_witness,
    ghz_multi_witness,
    swap_pattern,
    ww_witness,
)

from cvwitness.product import detects_product, product_value, scale_xp
from cvwitness.states import (
    entangled_pair,
    ghz_covariance,
    random_covariance,
    random_xp_diagonal,
    swap_state,
    two_mode_squeezed,
    ww_state,
)
from cvwitness.symplectic import (
    gaussian_entropy,
    is_valid_covariance,
    partial_transpose,
    pinch_xp,
    symplectic_eigenvalues,
    symplectic_trace,
)
from cvwitness.witness import (
    ENTANGLED,
    SEPARABLE,
    decide_separability,
    duan_witness,
    fully_wit,
    multi_wit,
    validate_multipartite_witness,
    validate_witness,
    xp_cross_constraints,
)

PRINT_TOL = 5e-4
R_SWAP = 2 * np.log(2) / 3
LN2_2 = np.log(2) / 2
RESULTS = {}


def record(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def soft(label, Z, reference):
    """Entrywise agreement with a printed witness; informational only."""
    return f"[soft: {label} max entry diff {np.max(np.abs(Z - reference)):.1e}]"


@lru_cache(maxsize=None)
def timed(name):
    ghz = ghz_covariance(3, LN2_2, LN2_2)
    runs = {
        "ww_full": (fully_wit, ww_state()),
        "ghz_full": (fully_wit, ghz),
        "ghz_multi": (multi_wit, ghz),
        "swap_multi": (multi_wit, swap_state()),
        "swap_full": (fully_wit, swap_state()),
    }
    fn, gamma = runs[name]
    t0 = time.perf_counter()
    res = fn(gamma)
    return res, time.perf_counter() - t0


HEADLINE = [
    (1, "ww_full", -0.1034),
    (2, "ghz_full", -0.500),
    (3, "ghz_multi", -0.3056),
    (4, "swap_multi", -0.2305),
    (5, "swap_full", -0.6031),
]


def _headline(number):
    _, name, expected = HEADLINE[number - 1]
    res, seconds = timed(name)
    ok = abs(res.c - expected) <= PRINT_TOL
    return res, seconds, ok, f"{name}: c = {res.c:.6f} (expected {expected} +- {PRINT_TOL}), {seconds:.2f} s"


def test_criterion_01():
    res, seconds, ok, detail = _headline(1)
    record(1, ok and seconds < 5.0, detail + " " + soft("Z_WW", res.Z, ww_witness()))


def test_criterion_02():
    res, _, ok, detail = _headline(2)
    x = res.Z[0, 0] / 2
    record(2, ok, detail + f" [soft: diagonal scale x = {x:.4f} vs 1/12] " + soft("Z_fw", res.Z, ghz_full_witness()))


def test_criterion_03():
    res, _, ok, detail = _headline(3)
    record(3, ok, detail + " " + soft("Z_mw", res.Z, ghz_multi_witness()))


def test_criterion_04():
    res, _, ok, detail = _headline(4)
    record(4, ok, detail + " " + soft("swap mw", res.Z, swap_pattern(0.2352, 0.1660)))


def test_criterion_05():
    res, _, ok, detail = _headline(5)
    record(5, ok, detail + " " + soft("swap fw", res.Z, swap_pattern(0.125, 0.0884)))


def test_criterion_06():
    g = swap_state(R_SWAP, 5.0).entries
    entry_err = np.max(np.abs(g - SWAP))
    pair_err, entropy_err = 0.0, 0.0
    for orientation in (-1, 1):
        pair = entangled_pair(R_SWAP, 5.0, orientation)
        pair_err = max(pair_err, np.max(np.abs(symplectic_eigenvalues(pair) - np.sqrt(5))))
        entropy_err = max(entropy_err, abs(gaussian_entropy(pair) - 2.152))
    ok = entry_err <= SWAP_PRINT_TOL and pair_err <= 1e-9 and entropy_err <= 1e-3
    record(6, ok, f"entry diff {entry_err:.2e}, pair symplectic diff {pair_err:.1e}, entropy diff {entropy_err:.1e}")


def test_criterion_07():
    g = ghz_covariance(3, LN2_2, LN2_2).entries
    err = np.max(np.abs(g - GHZ3))
    sp = np.max(np.abs(symplectic_eigenvalues(g) - 1.0))
    record(7, err <= 1e-12 and sp <= 1e-9, f"entry diff {err:.1e}, symplectic eigenvalue diff {sp:.1e}")


def test_criterion_08():
    lines, ok = [], True
    for number, name, _ in HEADLINE:
        res, _ = timed(name)
        multi = name.endswith("multi")
        rep = (validate_multipartite_witness if multi else validate_witness)(res.Z, res.partition)
        # recompute the three conditions from scratch as well
        emin = np.linalg.eigvalsh(res.Z)[0]
        total = symplectic_trace(res.Z, tol=1e-6)
        good = rep.is_witness and emin >= -1e-8 and rep.block_str_sum >= 0.5 - 1e-6 and total < 0.5
        ok &= bool(good)
        lines.append(f"{number}:{'ok' if good else 'bad'}(min eig {emin:.1e}, str sum {rep.block_str_sum:.4f}, str {total:.4f})")
    record(8, ok, " ".join(lines))


def ppt_margin(gamma):
    return symplectic_eigenvalues(partial_transpose(gamma, [0]))[-1] - 1.0


def test_criterion_09():
    kept, agree, seed = 0, 0, 0
    counts = {ENTANGLED: 0, SEPARABLE: 0}
    while kept < 100:
        sizes = [1, 1] if seed % 2 == 0 else [1, 2]
        g = random_covariance(sum(sizes), mix=0.15 * (seed % 7), seed=seed, max_squeeze=0.5).entries
        seed += 1
        margin = ppt_margin(g)
        if abs(margin) < 1e-4:
            continue
        # oracle: the partial transpose is itself Heisenberg-valid exactly when separable
        oracle = SEPARABLE if is_valid_covariance(partial_transpose(g, [0]), tol=0.0) else ENTANGLED
        assert (oracle == SEPARABLE) == (margin > 0)
        agree += decide_separability(g, sizes) == oracle
        counts[oracle] += 1
        kept += 1
    record(9, agree == 100, f"{agree}/100 agree ({counts[ENTANGLED]} entangled, {counts[SEPARABLE]} separable, {seed} seeds drawn)")


def test_criterion_10():
    solves = [timed(name)[0] for _, name, _ in HEADLINE]
    solves += [fully_wit(random_xp_diagonal(3, mix=0.2, seed=s, partition=[1, 2])) for s in range(5)]
    solves += [fully_wit(ww_state(), constraints=xp_cross_constraints(4))]
    worst_dual = max(abs(r.c - r.x_e) for r in solves if r.status == "optimal")
    worst_gap = max(r.gap for r in solves if r.status == "optimal")
    ok = all(r.status == "optimal" for r in solves) and worst_dual <= 1e-6 and worst_gap <= 1e-8
    record(10, ok, f"{len(solves)} solves, max |c - x_e| = {worst_dual:.1e}, max gap = {worst_gap:.1e}")


def test_criterion_11():
    worst, valid, tried, seed = 0.0, 0, 0, 0
    while tried < 20:
        g = random_xp_diagonal(3, mix=0.2, seed=seed, partition=[1, 2])
        seed += 1
        res = fully_wit(g)
        if not res.entangled:
            continue
        tried += 1
        Zp = pinch_xp(res.Z)
        worst = max(worst, abs(np.sum(Zp * g.entries) - np.sum(res.Z * g.entries)))
        valid += validate_witness(Zp, g.partition).is_witness
    record(11, worst <= 1e-8 and valid == 20, f"max |Tr[Z'g] - Tr[Zg]| = {worst:.1e}, {valid}/20 pinched witnesses valid")


def test_criterion_12():
    Z = duan_witness(1.0)
    g = two_mode_squeezed(0.5).entries
    err = abs(product_value(Z, g) - np.exp(-2) / 4)
    hits = [
        k for k in range(-10, 11)
        if np.sum(Z * scale_xp(g, 2.0**k)) >= 1 and detects_product(Z, scale_xp(g, 2.0**k), [1, 1])
    ]
    record(12, err <= 1e-10 and bool(hits), f"product diff {err:.1e}; linear >= 1 but product detects at a = 2^k, k in {hits}")


def test_criterion_13():
    base = timed("ww_full")[0].c
    constrained = fully_wit(ww_state(), constraints=xp_cross_constraints(4)).c
    worst = 0.0
    for seed in range(5):
        g = random_xp_diagonal(4, mix=0.1, seed=seed, partition=[2, 2])
        worst = max(worst, abs(fully_wit(g, constraints=xp_cross_constraints(4)).c - fully_wit(g).c))
    ok = constrained >= base - 1e-8 and worst <= 1e-6
    record(13, ok, f"WW: {constrained:.6f} >= {base:.6f}; x/p-diagonal max change {worst:.1e}")


if __name__ == "__main__":
    failed = 0
    for number in range(1, 14):
        try:
            globals()[f"test_criterion_{number:02d}"]()
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
