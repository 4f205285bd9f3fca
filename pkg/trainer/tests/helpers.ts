import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { genTruth } from "../src/codec.js";
import { queryIndices } from "../src/lattice.js";
import { writePgm, type GreyImage } from "../src/pgm.js";
import { readQmap } from "../src/qmap.js";

export function tmpDir(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}

export function writeTempPgm(dir: string, name: string, img: GreyImage): string {
  const file = path.join(dir, name);
  fs.writeFileSync(file, writePgm(img));
  return file;
}

/** Ground-truth carrier map for an image via the codec's gen-truth command. */
export function truthViaCodec(img: GreyImage, alpha: number, dir: string): Float64Array {
  const cover = writeTempPgm(dir, `truth_in_${Math.random().toString(36).slice(2)}.pgm`, img);
  const out = `${cover}.qmap`;
  genTruth(cover, alpha, out);
  const qmap = readQmap(fs.readFileSync(out));
  fs.rmSync(cover);
  fs.rmSync(out);
  return qmap.values;
}

/** Values of a full-image plane at query cells, in raster order. */
export function gatherQuery(plane: ArrayLike<number>, img: GreyImage): number[] {
  return Array.from(queryIndices(img.height, img.width), (i) => plane[i]);
}
