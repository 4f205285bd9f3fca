/** Reduced-scale model architectures: a narrow residual-dense predictor, a
 * small three-scale U-Net analyzer, and the dual-head uncertainty wrapper
 * around a frozen predictor. Small on purpose: these train on a desk in
 * minutes while exercising the same interfaces as their full-size
 * counterparts. */

import * as tf from "@tensorflow/tfjs";

export interface PredictorNet {
  model: tf.LayersModel;
  /** Penultimate feature plane, the attachment point for the uncertainty head. */
  featureLayerName: string;
}

export interface DualHeadNet {
  /** Outputs [prediction, rawSigma]; only the uncertainty branch is trainable. */
  model: tf.LayersModel;
  trainableWeights: tf.Variable[];
}

function conv(
  filters: number,
  kernel: number,
  activation: "relu" | "sigmoid" | "linear",
  seed: number,
  name?: string,
) {
  return tf.layers.conv2d({
    filters,
    kernelSize: kernel,
    padding: "same",
    activation,
    kernelInitializer: tf.initializers.glorotUniform({ seed }),
    name,
  });
}

/** Residual dense block: dense 3x3 convolutions with channel concatenation,
 * a 1x1 local fusion back to the trunk width, and a residual connection. */
function residualDenseBlock(
  x: tf.SymbolicTensor,
  width: number,
  growth: number,
  convsPerBlock: number,
  seed: () => number,
): tf.SymbolicTensor {
  let features = x;
  for (let i = 0; i < convsPerBlock - 1; i++) {
    const grown = conv(growth, 3, "relu", seed()).apply(features) as tf.SymbolicTensor;
    features = tf.layers.concatenate().apply([features, grown]) as tf.SymbolicTensor;
  }
  const fused = conv(width, 1, "linear", seed()).apply(features) as tf.SymbolicTensor;
  return tf.layers.add().apply([fused, x]) as tf.SymbolicTensor;
}

/** Extract the interpolation-baseline channel with a frozen 1x1 conv. */
function baselineExtractLayer() {
  return tf.layers.conv2d({
    filters: 1,
    kernelSize: 1,
    useBias: false,
    trainable: false,
    name: "baseline_extract",
    weights: [tf.tensor4d([0, 1], [1, 1, 2, 1])],
  });
}

/** Narrow residual-dense predictor over the two-channel context input
 * (masked image + interpolation baseline, both scaled to [0,1]). The network
 * learns a correction added to the baseline channel, so an untrained model
 * already matches the hand-crafted interpolation predictor. 3 blocks of 5
 * convolutions each. */
export function buildPredictor(seedBase = 1, width = 6, growth = 3): PredictorNet {
  let s = seedBase;
  const seed = () => s++;
  const input = tf.input({ shape: [null, null, 2] });
  const shallow = conv(width, 3, "relu", seed()).apply(input) as tf.SymbolicTensor;
  const blockOutputs: tf.SymbolicTensor[] = [];
  let x = shallow;
  for (let b = 0; b < 3; b++) {
    x = residualDenseBlock(x, width, growth, 5, seed);
    blockOutputs.push(x);
  }
  const gathered = tf.layers.concatenate().apply(blockOutputs) as tf.SymbolicTensor;
  const fused = conv(width, 1, "linear", seed()).apply(gathered) as tf.SymbolicTensor;
  const trunk = tf.layers.add().apply([fused, shallow]) as tf.SymbolicTensor;
  const featureLayerName = "predictor_features";
  const features = conv(width, 3, "relu", seed(), featureLayerName).apply(
    trunk,
  ) as tf.SymbolicTensor;
  // zero-initialised so the untrained correction is exactly zero
  const correction = tf.layers
    .conv2d({
      filters: 1,
      kernelSize: 3,
      padding: "same",
      kernelInitializer: "zeros",
      name: "predictor_out",
    })
    .apply(features) as tf.SymbolicTensor;
  const baseline = baselineExtractLayer().apply(input) as tf.SymbolicTensor;
  const out = tf.layers.add().apply([baseline, correction]) as tf.SymbolicTensor;
  return { model: tf.model({ inputs: input, outputs: out }), featureLayerName };
}

/** Three-scale U-Net analyzer: two-channel context input in, per-pixel
 * predictability in [0,1] out. Input dims must be divisible by 4. */
export function buildSupervisedAnalyzer(seedBase = 101, width = 6): tf.LayersModel {
  let s = seedBase;
  const seed = () => s++;
  const input = tf.input({ shape: [null, null, 2] });
  const enc1 = conv(width, 3, "relu", seed()).apply(input) as tf.SymbolicTensor;
  const down1 = tf.layers.maxPooling2d({ poolSize: 2 }).apply(enc1) as tf.SymbolicTensor;
  const enc2 = conv(width * 2, 3, "relu", seed()).apply(down1) as tf.SymbolicTensor;
  const down2 = tf.layers.maxPooling2d({ poolSize: 2 }).apply(enc2) as tf.SymbolicTensor;
  const bottleneck = conv(width * 4, 3, "relu", seed()).apply(down2) as tf.SymbolicTensor;
  const up2 = tf.layers.upSampling2d({ size: [2, 2] }).apply(bottleneck) as tf.SymbolicTensor;
  const dec2 = conv(width * 2, 3, "relu", seed()).apply(
    tf.layers.concatenate().apply([up2, enc2]) as tf.SymbolicTensor,
  ) as tf.SymbolicTensor;
  const up1 = tf.layers.upSampling2d({ size: [2, 2] }).apply(dec2) as tf.SymbolicTensor;
  const dec1 = conv(width, 3, "relu", seed()).apply(
    tf.layers.concatenate().apply([up1, enc1]) as tf.SymbolicTensor,
  ) as tf.SymbolicTensor;
  const out = conv(1, 3, "sigmoid", seed()).apply(dec1) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: out });
}

/** Append a trainable convolutional uncertainty branch to a frozen predictor.
 * The branch taps the predictor's penultimate features together with a skip
 * connection to the network input (so it can measure local roughness
 * directly) and emits a raw activation through a small hidden convolution;
 * variance is exp(raw) + floor, applied by the caller. Only the branch
 * trains — the pre-trained prediction path stays frozen. */
export function buildDualHead(predictor: PredictorNet, seedBase = 501): DualHeadNet {
  const base = predictor.model;
  base.trainable = false;
  const features = base.getLayer(predictor.featureLayerName).output as tf.SymbolicTensor;
  const tap = tf.layers
    .concatenate()
    .apply([base.inputs[0] as tf.SymbolicTensor, features]) as tf.SymbolicTensor;
  const hidden = tf.layers.conv2d({
    filters: 8,
    kernelSize: 3,
    padding: "same",
    activation: "relu",
    kernelInitializer: tf.initializers.glorotUniform({ seed: seedBase }),
    name: "uncertainty_hidden",
  });
  const readout = tf.layers.conv2d({
    filters: 1,
    kernelSize: 3,
    padding: "same",
    kernelInitializer: tf.initializers.glorotUniform({ seed: seedBase + 1 }),
    // start near the variance scale of [0,1]-ranged residuals
    biasInitializer: tf.initializers.constant({ value: -3 }),
    name: "uncertainty_raw",
  });
  const rawSigma = readout.apply(hidden.apply(tap)) as tf.SymbolicTensor;
  const model = tf.model({
    inputs: base.inputs,
    outputs: [base.outputs[0], rawSigma],
  });
  // LayerVariable wraps the backing tf.Variable in .val
  const vars = [...hidden.trainableWeights, ...readout.trainableWeights].map(
    (w) => (w as unknown as { val: tf.Variable }).val,
  );
  return { model, trainableWeights: vars };
}
