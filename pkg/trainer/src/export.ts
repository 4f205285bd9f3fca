/** Export trained models as QMAP artifacts for the codec.
 *
 * The model input is strictly the masked context image, and every export
 * runs a perturbation gate: query pixels are randomised and the map is
 * recomputed — any byte difference proves the output leaked query-pixel
 * information (which would break decoding) and aborts the export.
 */

import { writeFileAtomic } from "./manifest.js";
import type { GreyImage } from "./pgm.js";
import { MapKind, writeQmap, type QMap } from "./qmap.js";
import { Rng } from "./rng.js";

export class ContextDependenceViolation extends Error {}

/** Round half up to an integer sample, clipped to [0, 255]. */
export function quantisePrediction(v: number): number {
  return Math.max(0, Math.min(255, Math.floor(v + 0.5)));
}

function perturbQueryPixels(img: GreyImage, seed: number): GreyImage {
  const rng = new Rng(seed);
  const pixels = new Uint8Array(img.pixels);
  for (let r = 0; r < img.height; r++) {
    for (let c = 0; c < img.width; c++) {
      if ((r + c) % 2 === 1) pixels[r * img.width + c] = rng.int(0, 256);
    }
  }
  return { width: img.width, height: img.height, pixels };
}

function assertContextOnly(
  infer: (img: GreyImage) => Float64Array,
  img: GreyImage,
  reference: Float64Array,
): void {
  const perturbed = infer(perturbQueryPixels(img, 0xc0ffee));
  for (let i = 0; i < reference.length; i++) {
    if (perturbed[i] !== reference[i]) {
      throw new ContextDependenceViolation(
        `exported map depends on query pixels (index ${i})`,
      );
    }
  }
}

/** Build a Prediction QMAP from raw [0,255] model output, gated and quantised.
 * `infer` owns the masking discipline — the gate exists to catch an `infer`
 * that (wrongly) lets query pixels reach the model. */
export function predictionQmap(
  infer: (img: GreyImage) => Float64Array,
  img: GreyImage,
): QMap {
  const raw = infer(img);
  assertContextOnly(infer, img, raw);
  const values = new Float64Array(raw.length);
  for (let i = 0; i < raw.length; i++) values[i] = quantisePrediction(raw[i]);
  return { kind: MapKind.Prediction, width: img.width, height: img.height, values };
}

/** Build a Score QMAP from per-pixel predictability scores, gated. */
export function scoreQmap(
  infer: (img: GreyImage) => Float64Array,
  img: GreyImage,
): QMap {
  const values = infer(img);
  assertContextOnly(infer, img, values);
  for (const v of values) {
    if (!Number.isFinite(v)) throw new Error("non-finite score in exported map");
  }
  return { kind: MapKind.Score, width: img.width, height: img.height, values };
}

/** Atomically write a QMAP so the codec never reads a partial file. */
export function exportQmap(qmap: QMap, file: string): void {
  writeFileAtomic(file, writeQmap(qmap));
}
