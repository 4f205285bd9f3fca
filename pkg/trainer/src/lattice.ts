/** Chequerboard lattice conventions shared with the codec: context cells at
 * even r+c (the model's only input), query cells at odd r+c. */

import type { GreyImage } from "./pgm.js";

export function isContext(r: number, c: number): boolean {
  return (r + c) % 2 === 0;
}

/** Image with every query cell zeroed — the canonical model input. */
export function maskedContextImage(img: GreyImage): GreyImage {
  const pixels = new Uint8Array(img.pixels);
  for (let r = 0; r < img.height; r++) {
    for (let c = 0; c < img.width; c++) {
      if (!isContext(r, c)) pixels[r * img.width + c] = 0;
    }
  }
  return { width: img.width, height: img.height, pixels };
}

/** Row-major indices of query cells. */
export function queryIndices(height: number, width: number): Int32Array {
  const out = new Int32Array(Math.floor((height * width) / 2));
  let k = 0;
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      if (!isContext(r, c)) out[k++] = r * width + c;
    }
  }
  return out.subarray(0, k);
}

/** Integer round-half-up mean of in-bounds 4-neighbours at a query cell —
 * the codec's interpolation predictor, used as the learned model's baseline. */
export function interpPredict(img: GreyImage, r: number, c: number): number {
  let s = 0;
  let n = 0;
  const { width, height, pixels } = img;
  if (r > 0) { s += pixels[(r - 1) * width + c]; n++; }
  if (r + 1 < height) { s += pixels[(r + 1) * width + c]; n++; }
  if (c > 0) { s += pixels[r * width + c - 1]; n++; }
  if (c + 1 < width) { s += pixels[r * width + c + 1]; n++; }
  return Math.floor((2 * s + n) / (2 * n));
}

/** Negated population variance of in-bounds 4-neighbours at each query cell —
 * the codec's hand-crafted local-variance predictability score. */
export function localVarianceScores(img: GreyImage): Float64Array {
  const idx = queryIndices(img.height, img.width);
  const out = new Float64Array(idx.length);
  const { width, height, pixels } = img;
  for (let k = 0; k < idx.length; k++) {
    const r = Math.floor(idx[k] / width);
    const c = idx[k] % width;
    let s = 0;
    let sq = 0;
    let n = 0;
    const take = (v: number) => { s += v; sq += v * v; n++; };
    if (r > 0) take(pixels[(r - 1) * width + c]);
    if (r + 1 < height) take(pixels[(r + 1) * width + c]);
    if (c > 0) take(pixels[r * width + c - 1]);
    if (c + 1 < width) take(pixels[r * width + c + 1]);
    const mean = s / n;
    out[k] = -(sq / n - mean * mean);
  }
  return out;
}
