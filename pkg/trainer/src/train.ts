/** Training loops for the three learning setups: a learned predictor, a
 * supervised predictability analyzer, and an unsupervised dual-head
 * uncertainty analyzer on top of a frozen predictor. */

import * as tf from "@tensorflow/tfjs";

import { interpPredict, isContext, maskedContextImage } from "./lattice.js";
import { crossEntropyLoss, dualHeadLoss, sigma2FromRaw } from "./losses.js";
import {
  buildDualHead,
  buildPredictor,
  buildSupervisedAnalyzer,
  type DualHeadNet,
  type PredictorNet,
} from "./models.js";
import type { GreyImage } from "./pgm.js";
import { Rng } from "./rng.js";

export interface TrainConfig {
  alpha: number;
  lambda: number;
  epochs: number;
  batchSize: number;
  learningRate: number;
  seed: number;
  patchSize: number;
}

export const defaultConfig: TrainConfig = {
  alpha: 2,
  lambda: 1.0,
  epochs: 40,
  batchSize: 8,
  learningRate: 0.01,
  seed: 7,
  patchSize: 24,
};

export function validateConfig(cfg: TrainConfig): void {
  if (!(cfg.lambda > 0)) throw new Error(`lambda must be positive, got ${cfg.lambda}`);
  if (!Number.isInteger(cfg.alpha) || cfg.alpha < 1) {
    throw new Error(`alpha must be a positive integer, got ${cfg.alpha}`);
  }
  if (cfg.epochs < 1 || cfg.batchSize < 1) throw new Error("epochs/batchSize must be >= 1");
}

function imageToFloats(img: GreyImage): Float32Array {
  const out = new Float32Array(img.pixels.length);
  for (let i = 0; i < img.pixels.length; i++) out[i] = img.pixels[i] / 255;
  return out;
}

/** Stacked two-channel context inputs, [n, h, w, 2] scaled to [0,1]:
 * channel 0 the masked context image, channel 1 the interpolation baseline
 * (the pixel itself at context cells). Both depend only on context pixels,
 * which is what keeps exported maps decodable. */
export function inputTensor(images: GreyImage[]): tf.Tensor4D {
  const { width, height } = images[0];
  const plane = height * width;
  const data = new Float32Array(images.length * plane * 2);
  images.forEach((img, n) => {
    const masked = imageToFloats(maskedContextImage(img));
    const offset = n * plane * 2;
    for (let r = 0; r < height; r++) {
      for (let c = 0; c < width; c++) {
        const i = r * width + c;
        const baseline = isContext(r, c) ? img.pixels[i] : interpPredict(img, r, c);
        data[offset + i * 2] = masked[i];
        data[offset + i * 2 + 1] = baseline / 255;
      }
    }
  });
  return tf.tensor4d(data, [images.length, height, width, 2]);
}

/** Stacked full images, [n, h, w, 1] scaled to [0,1]. */
export function targetTensor(images: GreyImage[]): tf.Tensor4D {
  const { width, height } = images[0];
  const data = new Float32Array(images.length * height * width);
  images.forEach((img, i) => data.set(imageToFloats(img), i * height * width));
  return tf.tensor4d(data, [images.length, height, width, 1]);
}

/** Stacked per-pixel planes (e.g. ground-truth maps), [n, h, w, 1]. */
export function planeTensor(planes: Float64Array[], height: number, width: number): tf.Tensor4D {
  const data = new Float32Array(planes.length * height * width);
  planes.forEach((p, i) => data.set(Float32Array.from(p), i * height * width));
  return tf.tensor4d(data, [planes.length, height, width, 1]);
}

/** Query-cell mask, [1, h, w, 1]: losses only count cells the codec modifies. */
export function queryMask(height: number, width: number): tf.Tensor4D {
  const data = new Float32Array(height * width);
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      if (!isContext(r, c)) data[r * width + c] = 1;
    }
  }
  return tf.tensor4d(data, [1, height, width, 1]);
}

interface EpochCallback {
  (epoch: number, loss: number): void;
}

function runEpochs(
  cfg: TrainConfig,
  nSamples: number,
  step: (indices: number[]) => number,
  onEpoch?: EpochCallback,
): void {
  const rng = new Rng(cfg.seed ^ 0x5eed);
  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    const order = rng.shuffled(nSamples);
    let total = 0;
    let batches = 0;
    for (let i = 0; i < nSamples; i += cfg.batchSize) {
      const loss = step(order.slice(i, i + cfg.batchSize));
      if (!Number.isFinite(loss)) {
        throw new Error(`NonConvergence: loss ${loss} at epoch ${epoch}`);
      }
      total += loss;
      batches++;
    }
    onEpoch?.(epoch, total / batches);
  }
}

function requireCorpus(images: GreyImage[]): void {
  if (images.length === 0) throw new Error("CorpusEmpty: no training images");
}

/** Train the learned predictor with a masked mean-|error| objective. */
export function trainPredictor(
  cfg: TrainConfig,
  images: GreyImage[],
  onEpoch?: EpochCallback,
): PredictorNet {
  validateConfig(cfg);
  requireCorpus(images);
  const net = buildPredictor(cfg.seed);
  const { width, height } = images[0];
  const xs = inputTensor(images);
  const ys = targetTensor(images);
  const mask = queryMask(height, width);
  const maskCount = height * width * 0.5;
  const optimizer = tf.train.adam(cfg.learningRate);
  try {
    runEpochs(cfg, images.length, (indices) => {
      const idx = tf.tensor1d(indices, "int32");
      const loss = optimizer.minimize(
        () =>
          tf.tidy(() => {
            const pred = net.model.apply(tf.gather(xs, idx)) as tf.Tensor;
            // deadband below float noise: cells the model already predicts
            // exactly must contribute zero gradient, otherwise the adaptive
            // optimizer scales numerical dust into full-size steps
            const err = tf.relu(tf.sub(tf.abs(tf.sub(pred, tf.gather(ys, idx))), 1e-6));
            return tf.div(tf.sum(tf.mul(err, mask)), indices.length * maskCount) as tf.Scalar;
          }),
        true,
      )!;
      const value = loss.dataSync()[0];
      loss.dispose();
      idx.dispose();
      return value;
    }, onEpoch);
  } finally {
    xs.dispose();
    ys.dispose();
    mask.dispose();
    optimizer.dispose();
  }
  return net;
}

/** Train the supervised analyzer against 0/1 ground-truth carrier maps. */
export function trainSupervisedAnalyzer(
  cfg: TrainConfig,
  images: GreyImage[],
  truths: Float64Array[],
  onEpoch?: EpochCallback,
): tf.LayersModel {
  validateConfig(cfg);
  requireCorpus(images);
  if (truths.length !== images.length) {
    throw new Error(`truth count mismatch: ${truths.length} vs ${images.length}`);
  }
  const model = buildSupervisedAnalyzer(cfg.seed + 100);
  const { width, height } = images[0];
  const xs = inputTensor(images);
  const ys = planeTensor(truths, height, width);
  const mask = queryMask(height, width);
  const maskCount = height * width * 0.5;
  const optimizer = tf.train.adam(cfg.learningRate);
  try {
    runEpochs(cfg, images.length, (indices) => {
      const idx = tf.tensor1d(indices, "int32");
      const loss = optimizer.minimize(
        () =>
          tf.tidy(() => {
            const phi = model.apply(tf.gather(xs, idx)) as tf.Tensor;
            const ce = crossEntropyLoss(phi, tf.gather(ys, idx), mask);
            return tf.div(ce, indices.length * maskCount) as tf.Scalar;
          }),
        true,
      )!;
      const value = loss.dataSync()[0];
      loss.dispose();
      idx.dispose();
      return value;
    }, onEpoch);
  } finally {
    xs.dispose();
    ys.dispose();
    mask.dispose();
    optimizer.dispose();
  }
  return model;
}

/** Train only the uncertainty branch appended to a frozen predictor. */
export function trainUnsupervisedAnalyzer(
  cfg: TrainConfig,
  predictor: PredictorNet,
  images: GreyImage[],
  onEpoch?: EpochCallback,
): DualHeadNet {
  validateConfig(cfg);
  requireCorpus(images);
  const dual = buildDualHead(predictor, cfg.seed + 500);
  const { width, height } = images[0];
  const xs = inputTensor(images);
  const ys = targetTensor(images);
  const mask = queryMask(height, width);
  const maskCount = height * width * 0.5;
  const optimizer = tf.train.adam(cfg.learningRate);
  try {
    runEpochs(cfg, images.length, (indices) => {
      const idx = tf.tensor1d(indices, "int32");
      const loss = optimizer.minimize(
        () =>
          tf.tidy(() => {
            const [pred, raw] = dual.model.apply(tf.gather(xs, idx)) as tf.Tensor[];
            const sigma2 = sigma2FromRaw(raw);
            const total = dualHeadLoss(tf.gather(ys, idx), pred, sigma2, cfg.lambda, mask);
            return tf.div(total, indices.length * maskCount) as tf.Scalar;
          }),
        true,
        dual.trainableWeights,
      )!;
      const value = loss.dataSync()[0];
      loss.dispose();
      idx.dispose();
      return value;
    }, onEpoch);
  } finally {
    xs.dispose();
    ys.dispose();
    mask.dispose();
    optimizer.dispose();
  }
  return dual;
}

/** Raw full-image model prediction in [0,255] floats (unquantised). */
export function predictImage(model: tf.LayersModel, img: GreyImage): Float64Array {
  const data = tf.tidy(
    () => (model.apply(inputTensor([img])) as tf.Tensor).dataSync() as Float32Array,
  );
  const scaled = new Float64Array(data.length);
  for (let i = 0; i < data.length; i++) scaled[i] = data[i] * 255;
  return scaled;
}

/** Full-image predictability scores from the supervised analyzer. */
export function scoreImage(model: tf.LayersModel, img: GreyImage): Float64Array {
  const data = tf.tidy(
    () => (model.apply(inputTensor([img])) as tf.Tensor).dataSync() as Float32Array,
  );
  return Float64Array.from(data);
}

/** Full-image sigma^2 plane from the dual head. */
export function sigma2Image(dual: DualHeadNet, img: GreyImage): Float64Array {
  const data = tf.tidy(() => {
    const [, raw] = dual.model.apply(inputTensor([img])) as tf.Tensor[];
    return sigma2FromRaw(raw).dataSync() as Float32Array;
  });
  return Float64Array.from(data);
}

/** Mean |prediction - actual| at query cells, in [0,255] units. */
export function validationL1(pred: Float64Array, img: GreyImage): number {
  let total = 0;
  let n = 0;
  for (let r = 0; r < img.height; r++) {
    for (let c = 0; c < img.width; c++) {
      if (isContext(r, c)) continue;
      total += Math.abs(pred[r * img.width + c] - img.pixels[r * img.width + c]);
      n++;
    }
  }
  return total / n;
}

/** The codec's interpolation baseline, same metric. */
export function interpL1(img: GreyImage): number {
  let total = 0;
  let n = 0;
  for (let r = 0; r < img.height; r++) {
    for (let c = 0; c < img.width; c++) {
      if (isContext(r, c)) continue;
      total += Math.abs(interpPredict(img, r, c) - img.pixels[r * img.width + c]);
      n++;
    }
  }
  return total / n;
}
