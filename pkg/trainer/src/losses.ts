/** Training losses: per-pixel cross-entropy for the supervised analyzer, and
 * the dual-head uncertainty loss (weighted-distance cost plus a log-variance
 * regulariser) for the unsupervised analyzer. */

import * as tf from "@tensorflow/tfjs";

export const SIGMA2_FLOOR = 1e-6;
const PROB_EPS = 1e-7;

/** Summed binary cross-entropy, optionally restricted by a 0/1 mask. */
export function crossEntropyLoss(
  phi: tf.Tensor,
  target: tf.Tensor,
  mask?: tf.Tensor,
): tf.Tensor {
  return tf.tidy(() => {
    const p = tf.clipByValue(phi, PROB_EPS, 1 - PROB_EPS);
    let perPixel = tf.neg(
      tf.add(
        tf.mul(target, tf.log(p)),
        tf.mul(tf.sub(1, target), tf.log(tf.sub(1, p))),
      ),
    );
    if (mask) perPixel = tf.mul(perPixel, mask);
    return tf.sum(perPixel);
  });
}

/** Strictly positive variance from a raw activation. */
export function sigma2FromRaw(raw: tf.Tensor): tf.Tensor {
  return tf.tidy(() => tf.add(tf.exp(raw), SIGMA2_FLOOR));
}

/** Weighted-distance cost: sum of |x - y| / sigma^2. */
export function uncertaintyCost(
  x: tf.Tensor,
  y: tf.Tensor,
  sigma2: tf.Tensor,
  mask?: tf.Tensor,
): tf.Tensor {
  return tf.tidy(() => {
    let perPixel = tf.div(tf.abs(tf.sub(x, y)), sigma2);
    if (mask) perPixel = tf.mul(perPixel, mask);
    return tf.sum(perPixel);
  });
}

/** Regulariser: sum of ln(sigma^2), penalising blanket uncertainty. */
export function uncertaintyRegulariser(sigma2: tf.Tensor, mask?: tf.Tensor): tf.Tensor {
  return tf.tidy(() => {
    let perPixel = tf.log(sigma2);
    if (mask) perPixel = tf.mul(perPixel, mask);
    return tf.sum(perPixel);
  });
}

/** Full dual-head loss: cost + lambda * regulariser. */
export function dualHeadLoss(
  x: tf.Tensor,
  y: tf.Tensor,
  sigma2: tf.Tensor,
  lambda: number,
  mask?: tf.Tensor,
): tf.Tensor {
  return tf.tidy(() =>
    tf.add(
      uncertaintyCost(x, y, sigma2, mask),
      tf.mul(lambda, uncertaintyRegulariser(sigma2, mask)),
    ),
  );
}

/** Per-image predictability from variance: min sigma^2 maps to 1, max to 0.
 * A constant plane maps to all ones (everything equally predictable). */
export function phiFromSigma2(sigma2: Float64Array): Float64Array {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of sigma2) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const out = new Float64Array(sigma2.length);
  if (hi === lo) {
    out.fill(1);
    return out;
  }
  for (let i = 0; i < sigma2.length; i++) out[i] = 1 - (sigma2[i] - lo) / (hi - lo);
  return out;
}
