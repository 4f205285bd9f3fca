"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured numbers."""

import time

import numpy as np
import pytest

from resteg.codec import (
    StegoConfig,
    decode,
    demodulate_one,
    encode,
    encode_register,
    modulate_one,
    scale_down,
)
from resteg.codec import capacity_walk
from resteg.lattice import split
from resteg.metrics import precision_recall_at_match, psnr, rd_sweep, roc_auc
from resteg.predictor import predict_interp, residuals
from tests.test_metrics import mann_whitney_auc


def _report(name, ok, detail=""):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def _blur(img):
    padded = np.pad(img.astype(np.float64), 1, mode="edge")
    out = (padded[:-2, 1:-1] + padded[2:, 1:-1] + padded[1:-1, :-2]
           + padded[1:-1, 2:] + padded[1:-1, 1:-1]) / 5.0
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def _trial_image(rng, kind, h, w):
    if kind == "all0":
        return np.zeros((h, w), dtype=np.uint8)
    if kind == "all255":
        return np.full((h, w), 255, dtype=np.uint8)
    if kind == "random":
        return rng.integers(0, 256, (h, w)).astype(np.uint8)
    if kind == "nearsat":
        base = 252 if rng.integers(2) else 3
        return np.clip(np.rint(base + rng.normal(0, 3, (h, w))), 0, 255).astype(np.uint8)
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    smooth = 128 + 80 * np.sin(xx / (3 + rng.integers(9))) * np.cos(yy / (3 + rng.integers(9)))
    return np.clip(np.rint(smooth + rng.normal(0, 2, (h, w))), 0, 255).astype(np.uint8)


def test_reversibility_1000_trials():
    rng = np.random.default_rng(20240815)
    kinds = ["smooth", "random", "nearsat", "all0", "all255"]
    start = time.monotonic()
    failures = 0
    for trial in range(1000):
        kind = kinds[trial % len(kinds)]
        h, w = int(rng.integers(16, 41)), int(rng.integers(16, 41))
        alpha = int(rng.integers(1, 5))
        img = _trial_image(rng, kind, h, w)
        cfg = StegoConfig(alpha=alpha, analyzer="lv" if trial % 2 else "raster")
        # worst-case feasible budget: every carrier holds at least one bit
        for attempt in range(21):
            min_bits, _, _ = capacity_walk(img, cfg)
            _, reg = scale_down(img, alpha)
            budget = min_bits - 33 - len(encode_register(reg))
            if budget >= 0:
                break
            img = _blur(img) if attempt < 20 else np.full((h, w), 128, dtype=np.uint8)
        else:
            min_bits, _, _ = capacity_walk(img, cfg)
            _, reg = scale_down(img, alpha)
            budget = min_bits - 33 - len(encode_register(reg))
        msg = rng.integers(0, 2, int(rng.integers(0, budget + 1))).astype(np.uint8)
        restored, got = decode(encode(img, msg, cfg), cfg)
        if not (np.array_equal(restored, img) and np.array_equal(got, msg)):
            failures += 1
    elapsed = time.monotonic() - start
    ok = failures == 0 and elapsed < 60.0
    assert _report("reversibility", ok, f"failures={failures}/1000 elapsed={elapsed:.1f}s")


def test_modulation_bijectivity_and_disjoint_ranges():
    bad = 0
    for alpha in range(1, 9):
        images = {"eq2": set(), "eq3b0": set(), "eq3b1": set(), "eq4": set()}
        for eps in range(-255, 256):
            for bits in ([0, 0], [0, 1], [1, 0], [1, 1]):
                e_mod, used = modulate_one(eps, alpha, bits)
                back, got = demodulate_one(e_mod, alpha)
                if back != eps or got != bits[:used]:
                    bad += 1
                if eps == 0:
                    images["eq2"].add(e_mod)
                elif abs(eps) < alpha:
                    images["eq3b0" if bits[0] == 0 else "eq3b1"].add(e_mod)
                else:
                    images["eq4"].add(e_mod)
        keys = list(images)
        for i, a in enumerate(keys):
            for b in keys[i + 1 :]:
                bad += len(images[a] & images[b])
    assert _report("modulation-bijectivity", bad == 0, f"failures={bad}")


def test_distortion_bound(standard_images):
    rng = np.random.default_rng(7)
    worst = []
    ok = True
    for name, img in standard_images.items():
        for alpha in (1, 2, 4):
            cfg = StegoConfig(alpha=alpha, analyzer="lv")
            min_bits, _, _ = capacity_walk(img, cfg)
            msg = rng.integers(0, 2, min_bits // 2).astype(np.uint8)
            stego = encode(img, msg, cfg)
            xbar, _ = scale_down(img, alpha)
            peak = int(np.abs(stego.astype(int) - xbar.astype(int)).max())
            bound_db = 20 * np.log10(255 / alpha)
            ok &= peak <= alpha and psnr(xbar, stego) >= bound_db - 1e-9
            worst.append(f"{name}/a{alpha}:peak={peak}")
    assert _report("distortion-bound", ok, " ".join(worst))


def test_route_adaptivity(standard_images):
    rates = [0.05, 0.1, 0.2]
    lv_wins = 0
    oracle_wins = 0
    details = []
    for name, img in standard_images.items():
        psnrs = {}
        for analyzer in ("raster", "lv", "oracle"):
            pts = rd_sweep(img, StegoConfig(alpha=2, analyzer=analyzer), rates, seed=2024)
            psnrs[analyzer] = [p.psnr_db for p in pts]
            assert all(v is not None for v in psnrs[analyzer])
        for i, rate in enumerate(rates):
            if psnrs["lv"][i] >= psnrs["raster"][i]:
                lv_wins += 1
            if psnrs["oracle"][i] >= max(psnrs["lv"][i], psnrs["raster"][i]):
                oracle_wins += 1
            details.append(f"{name}@{rate}: r={psnrs['raster'][i]:.2f} "
                           f"lv={psnrs['lv'][i]:.2f} o={psnrs['oracle'][i]:.2f}")
    ok = lv_wins >= 8 and oracle_wins == 9
    assert _report("route-adaptivity", ok,
                   f"lv_wins={lv_wins}/9 oracle_wins={oracle_wins}/9")


def test_residual_concentration(standard_images):
    ok = True
    details = []
    for name, img in standard_images.items():
        _, qry, lat = split(img)
        res = residuals(qry, predict_interp(img, lat))
        full = float(np.var(res))
        carrier = float(np.var(res[np.abs(res) < 2]))
        ok &= carrier < full
        details.append(f"{name}: carriers={carrier:.3f} all={full:.3f}")
    assert _report("residual-concentration", ok, " ".join(details))


def test_metric_oracles():
    rng = np.random.default_rng(77)
    max_err = 0.0
    pr_ok = True
    for _ in range(100):
        n = int(rng.integers(4, 201))
        truth = rng.integers(0, 2, n)
        truth[:2] = [0, 1]
        scores = rng.normal(size=n).round(1)
        max_err = max(max_err, abs(roc_auc(scores, truth).auc
                                   - mann_whitney_auc(scores, truth)))
        p, r = precision_recall_at_match(scores, truth)
        pr_ok &= p == r
    ok = max_err <= 1e-9 and pr_ok
    assert _report("metric-oracles", ok, f"max_auc_err={max_err:.2e} precision==recall={pr_ok}")


def test_laplacian_shape_soft(standard_images):
    # soft criterion: logged, not asserted
    all_mode_zero = True
    details = []
    for name, img in standard_images.items():
        _, qry, lat = split(img)
        res = residuals(qry, predict_interp(img, lat))
        values, counts = np.unique(res, return_counts=True)
        mode = int(values[np.argmax(counts)])
        all_mode_zero &= mode == 0
        details.append(f"{name}: mode={mode}")
    tag = "PASS" if all_mode_zero else "SOFT-FAIL"
    print(f"ACCEPTANCE laplacian-shape: {tag} {' '.join(details)}")
