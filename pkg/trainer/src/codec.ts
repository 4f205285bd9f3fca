/** Thin wrapper over the codec's command-line interface — the only channel
 * between the trainer and the codec, alongside the PGM/QMAP files. */

import { spawnSync } from "node:child_process";

export interface CodecResult {
  status: number;
  stdout: Record<string, string>;
  stderr: string;
}

export function runCodec(args: string[]): CodecResult {
  const proc = spawnSync("resteg", args, { encoding: "utf-8" });
  if (proc.error) throw proc.error;
  const stdout: Record<string, string> = {};
  for (const line of (proc.stdout ?? "").split("\n")) {
    const eq = line.indexOf("=");
    if (eq > 0) stdout[line.slice(0, eq)] = line.slice(eq + 1);
  }
  return { status: proc.status ?? -1, stdout, stderr: proc.stderr ?? "" };
}

/** Generate a ground-truth carrier map for an image, returning the QMAP path. */
export function genTruth(coverFile: string, alpha: number, outFile: string): void {
  const res = runCodec(["gen-truth", "--cover", coverFile, "--alpha", String(alpha),
    "--out", outFile]);
  if (res.status !== 0) {
    throw new Error(`gen-truth failed (${res.status}): ${res.stderr}`);
  }
}
