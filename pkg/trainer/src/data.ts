/** Synthetic training corpora. Patches are designed so hand-crafted local
 * variance is a beatable baseline: steep smooth gradients have high
 * neighbour variance but near-zero interpolation residuals, which only a
 * learned analyzer can rank correctly. */

import * as fs from "node:fs";
import * as path from "node:path";

import type { GreyImage } from "./pgm.js";
import { writePgm } from "./pgm.js";
import { Rng } from "./rng.js";

function clip(v: number): number {
  return Math.max(0, Math.min(255, Math.round(v)));
}

/** Analyzer corpus patch: a steep-but-smooth gradient half (predictable,
 * high local variance), a flat quarter (predictable, low variance), and a
 * noisy quarter (unpredictable, high variance). */
export function makeAnalyzerPatch(rng: Rng, size: number): GreyImage {
  const pixels = new Uint8Array(size * size);
  const slope = 7 + 2 * rng.next();
  const vertical = rng.next() < 0.5;
  const base = 30 + rng.int(0, 40);
  const flat = 60 + rng.int(0, 120);
  const noisy = 60 + rng.int(0, 120);
  for (let r = 0; r < size; r++) {
    for (let c = 0; c < size; c++) {
      let v: number;
      if (c < size / 2) {
        v = base + slope * (vertical ? r : c) + 0.2 * rng.gauss();
      } else if (r < size / 2) {
        v = flat + 0.3 * rng.gauss();
      } else {
        v = noisy + 4 * rng.gauss();
      }
      pixels[r * size + c] = clip(v);
    }
  }
  return { width: size, height: size, pixels };
}

/** Predictor corpus patch: a vertical sinusoid family. The interpolation
 * baseline systematically under-corrects its curvature, so a learned
 * predictor with a wider receptive field can do better. */
export function makePredictorPatch(rng: Rng, size: number): GreyImage {
  const pixels = new Uint8Array(size * size);
  const phase = rng.next() * 2 * Math.PI;
  const amplitude = 75 + 10 * rng.next();
  for (let r = 0; r < size; r++) {
    for (let c = 0; c < size; c++) {
      const v = 128 + amplitude * Math.sin((2 * Math.PI * c) / 6 + phase);
      pixels[r * size + c] = clip(v + 0.2 * rng.gauss());
    }
  }
  return { width: size, height: size, pixels };
}

export function makeCorpus(
  kind: "analyzer" | "predictor",
  seed: number,
  count: number,
  size: number,
): GreyImage[] {
  const rng = new Rng(seed);
  const make = kind === "analyzer" ? makeAnalyzerPatch : makePredictorPatch;
  return Array.from({ length: count }, () => make(rng, size));
}

/** Write a corpus as numbered PGM files; returns the file paths. */
export function writeCorpus(images: GreyImage[], dir: string): string[] {
  fs.mkdirSync(dir, { recursive: true });
  return images.map((img, i) => {
    const file = path.join(dir, `patch_${String(i).padStart(3, "0")}.pgm`);
    fs.writeFileSync(file, writePgm(img));
    return file;
  });
}

export function readCorpusDir(dir: string): string[] {
  const files = fs
    .readdirSync(dir)
    .filter((f) => f.endsWith(".pgm"))
    .sort()
    .map((f) => path.join(dir, f));
  if (files.length === 0) throw new Error(`CorpusEmpty: no .pgm files in ${dir}`);
  return files;
}
