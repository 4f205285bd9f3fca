import { describe, expect, it } from "vitest";

import { makeCorpus } from "../src/data.js";
import { interpPredict, isContext } from "../src/lattice.js";
import { phiFromSigma2, SIGMA2_FLOOR } from "../src/losses.js";
import { buildPredictor } from "../src/models.js";
import type { GreyImage } from "../src/pgm.js";
import {
  defaultConfig,
  interpL1,
  predictImage,
  sigma2Image,
  trainPredictor,
  trainUnsupervisedAnalyzer,
  validateConfig,
  validationL1,
  type TrainConfig,
} from "../src/train.js";

const quick: TrainConfig = {
  ...defaultConfig,
  epochs: 12,
  batchSize: 8,
  learningRate: 0.05,
  patchSize: 8,
};

function constantImage(value: number, size: number): GreyImage {
  return { width: size, height: size, pixels: new Uint8Array(size * size).fill(value) };
}

describe("config validation", () => {
  it("rejects non-positive lambda and bad alpha", () => {
    expect(() => validateConfig({ ...defaultConfig, lambda: 0 })).toThrow(/lambda/);
    expect(() => validateConfig({ ...defaultConfig, alpha: 0 })).toThrow(/alpha/);
    expect(() => validateConfig({ ...defaultConfig, alpha: 2.5 })).toThrow(/alpha/);
  });
});

describe("trainPredictor", () => {
  it("rejects an empty corpus", () => {
    expect(() => trainPredictor(quick, [])).toThrow(/CorpusEmpty/);
  });

  it("learns a constant corpus to near-zero validation error", () => {
    const corpus = Array.from({ length: 8 }, () => constantImage(128, 8));
    const net = trainPredictor({ ...quick, epochs: 40 }, corpus);
    const pred = predictImage(net.model, constantImage(128, 8));
    expect(validationL1(pred, constantImage(128, 8))).toBeLessThan(3);
  });

  it("raises NonConvergence when the loss explodes", () => {
    const corpus = makeCorpus("analyzer", 1, 4, 8);
    expect(() => trainPredictor({ ...quick, epochs: 40, learningRate: 1e9 }, corpus)).toThrow(
      /NonConvergence/,
    );
  });
});

describe("trainUnsupervisedAnalyzer", () => {
  it("drives sigma^2 toward its floor under a very large lambda", () => {
    const corpus = makeCorpus("analyzer", 5, 6, 8);
    const probe = corpus[0];
    const meanSigma2 = (lambda: number) => {
      const net = buildPredictor(quick.seed);
      const dual = trainUnsupervisedAnalyzer(
        { ...quick, epochs: 80, learningRate: 0.3, lambda }, net, corpus,
      );
      const s2 = sigma2Image(dual, probe);
      let total = 0;
      for (const v of s2) total += v;
      return total / s2.length;
    };
    const small = meanSigma2(1.0);
    const large = meanSigma2(1e4);
    expect(large).toBeLessThan(small);
    expect(large).toBeLessThan(1e-3);
    expect(large).toBeGreaterThanOrEqual(SIGMA2_FLOOR * 0.999);
  });
});

describe("validation metrics", () => {
  it("interp baseline is exact on a constant plane and inside a linear ramp", () => {
    const size = 8;
    expect(interpL1(constantImage(77, size))).toBe(0);
    // on a ramp the 4-neighbour mean is exact wherever all four neighbours
    // exist; border cells see a biased 3-neighbour mean
    const pixels = new Uint8Array(size * size);
    for (let r = 0; r < size; r++) for (let c = 0; c < size; c++) pixels[r * size + c] = 10 + 5 * r;
    const ramp: GreyImage = { width: size, height: size, pixels };
    for (let r = 1; r < size - 1; r++) {
      for (let c = 1; c < size - 1; c++) {
        if (!isContext(r, c)) expect(interpPredict(ramp, r, c)).toBe(pixels[r * size + c]);
      }
    }
  });

  it("phiFromSigma2 orders inversely to variance", () => {
    const phi = phiFromSigma2(Float64Array.from([5, 1, 3]));
    expect(phi[1]).toBeGreaterThan(phi[2]);
    expect(phi[2]).toBeGreaterThan(phi[0]);
  });
});
