import * as tf from "@tensorflow/tfjs";
import { describe, expect, it } from "vitest";

import {
  SIGMA2_FLOOR,
  crossEntropyLoss,
  dualHeadLoss,
  phiFromSigma2,
  sigma2FromRaw,
  uncertaintyCost,
  uncertaintyRegulariser,
} from "../src/losses.js";
import { buildManifest } from "../src/manifest.js";
import { Rng } from "../src/rng.js";
import { defaultConfig } from "../src/train.js";

function fixedBatch(seed: number, n: number) {
  const rng = new Rng(seed);
  const phi = Array.from({ length: n }, () => 0.02 + 0.96 * rng.next());
  const target = Array.from({ length: n }, () => (rng.next() < 0.5 ? 0 : 1));
  const x = Array.from({ length: n }, () => rng.next());
  const y = Array.from({ length: n }, () => rng.next());
  const raw = Array.from({ length: n }, () => 4 * rng.next() - 2);
  const mask = Array.from({ length: n }, () => (rng.next() < 0.5 ? 0 : 1));
  return { phi, target, x, y, raw, mask };
}

const relErr = (a: number, b: number) => Math.abs(a - b) / Math.max(Math.abs(b), 1e-12);

describe("cross-entropy loss", () => {
  it("matches an independent scalar computation within 1e-5 relative", () => {
    const { phi, target, mask } = fixedBatch(3, 64);
    let expected = 0;
    for (let i = 0; i < phi.length; i++) {
      expected -= mask[i] * (target[i] * Math.log(phi[i]) + (1 - target[i]) * Math.log(1 - phi[i]));
    }
    const got = crossEntropyLoss(tf.tensor(phi), tf.tensor(target), tf.tensor(mask)).dataSync()[0];
    expect(relErr(got, expected)).toBeLessThan(1e-5);
  });

  it("is zero for confident correct predictions", () => {
    const got = crossEntropyLoss(tf.tensor([1e-7, 1 - 1e-7]), tf.tensor([0, 1])).dataSync()[0];
    expect(got).toBeLessThan(1e-5);
  });
});

describe("dual-head loss", () => {
  it("cost, regulariser, and total match scalar oracles within 1e-5 relative", () => {
    const { x, y, raw, mask } = fixedBatch(11, 64);
    const lambda = 0.7;
    const sigma2 = raw.map((r) => Math.exp(r) + SIGMA2_FLOOR);
    let cost = 0;
    let reg = 0;
    for (let i = 0; i < x.length; i++) {
      cost += (mask[i] * Math.abs(x[i] - y[i])) / sigma2[i];
      reg += mask[i] * Math.log(sigma2[i]);
    }
    const s2 = sigma2FromRaw(tf.tensor(raw));
    const gotCost = uncertaintyCost(tf.tensor(x), tf.tensor(y), s2, tf.tensor(mask)).dataSync()[0];
    const gotReg = uncertaintyRegulariser(s2, tf.tensor(mask)).dataSync()[0];
    const gotTotal = dualHeadLoss(
      tf.tensor(x), tf.tensor(y), s2, lambda, tf.tensor(mask),
    ).dataSync()[0];
    expect(relErr(gotCost, cost)).toBeLessThan(1e-5);
    expect(relErr(gotReg, reg)).toBeLessThan(1e-5);
    expect(relErr(gotTotal, cost + lambda * reg)).toBeLessThan(1e-5);
  });

  it("keeps sigma^2 strictly positive", () => {
    const s2 = sigma2FromRaw(tf.tensor([-50, 0, 50])).dataSync();
    // float32 storage rounds the floor constant slightly down
    for (const v of s2) expect(v).toBeGreaterThanOrEqual(SIGMA2_FLOOR * 0.999);
  });
});

describe("predictability normalisation", () => {
  it("maps min variance to 1 and max to 0", () => {
    const phi = phiFromSigma2(Float64Array.from([4, 1, 2.5]));
    expect(phi[1]).toBe(1);
    expect(phi[0]).toBe(0);
    expect(phi[2]).toBeCloseTo(0.5, 12);
  });

  it("treats a constant plane as uniformly predictable", () => {
    expect(Array.from(phiFromSigma2(Float64Array.from([3, 3, 3])))).toEqual([1, 1, 1]);
  });
});

describe("manifest", () => {
  it("is deterministic for identical seed and config", () => {
    const a = buildManifest(defaultConfig, "supervised");
    const b = buildManifest({ ...defaultConfig }, "supervised");
    expect(a).toBe(b);
    expect(a).toMatch(/config_hash=[0-9a-f]{64}/);
  });

  it("hash changes when config changes", () => {
    const a = buildManifest(defaultConfig, "supervised");
    const b = buildManifest({ ...defaultConfig, seed: defaultConfig.seed + 1 }, "supervised");
    expect(a).not.toBe(b);
  });
});
