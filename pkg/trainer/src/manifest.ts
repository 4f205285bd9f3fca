/** Plain-text key=value training manifests with a deterministic config hash. */

import { createHash } from "node:crypto";
import * as fs from "node:fs";

import type { TrainConfig } from "./train.js";

export function buildManifest(cfg: TrainConfig, kind: string): string {
  const lines = [
    `kind=${kind}`,
    `seed=${cfg.seed}`,
    `alpha=${cfg.alpha}`,
    `lambda=${cfg.lambda}`,
    `epochs=${cfg.epochs}`,
    `batch_size=${cfg.batchSize}`,
    `learning_rate=${cfg.learningRate}`,
    `patch_size=${cfg.patchSize}`,
  ];
  const hash = createHash("sha256").update(lines.join("\n")).digest("hex");
  return [...lines, `config_hash=${hash}`].join("\n") + "\n";
}

/** Atomic write (temp file + rename) so readers never see partial artifacts. */
export function writeFileAtomic(file: string, data: Uint8Array | string): void {
  const tmp = `${file}.tmp-${process.pid}`;
  fs.writeFileSync(tmp, data);
  fs.renameSync(tmp, file);
}
