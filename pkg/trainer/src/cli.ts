/** Command-line trainer: trains one of the three setups on a PGM corpus and
 * exports per-image QMAP artifacts plus a manifest.
 *
 *   trainer train --mode predictor|supervised|unsupervised \
 *       --corpus DIR --out DIR [--alpha 2] [--lambda 1] [--epochs 40] \
 *       [--batch-size 8] [--learning-rate 0.01] [--seed 7]
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { parseArgs } from "node:util";

import { genTruth } from "./codec.js";
import { readCorpusDir } from "./data.js";
import { exportQmap, predictionQmap, scoreQmap } from "./export.js";
import { phiFromSigma2 } from "./losses.js";
import { buildManifest, writeFileAtomic } from "./manifest.js";
import { readPgm, type GreyImage } from "./pgm.js";
import { readQmap } from "./qmap.js";
import {
  defaultConfig,
  predictImage,
  scoreImage,
  sigma2Image,
  trainPredictor,
  trainSupervisedAnalyzer,
  trainUnsupervisedAnalyzer,
  type TrainConfig,
} from "./train.js";

function loadCorpus(dir: string): { files: string[]; images: GreyImage[] } {
  const files = readCorpusDir(dir);
  return { files, images: files.map((f) => readPgm(fs.readFileSync(f))) };
}

function mapPath(outDir: string, src: string, suffix: string): string {
  return path.join(outDir, `${path.basename(src, ".pgm")}.${suffix}.qmap`);
}

export function main(argv: string[]): number {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      mode: { type: "string" },
      corpus: { type: "string" },
      out: { type: "string" },
      alpha: { type: "string" },
      lambda: { type: "string" },
      epochs: { type: "string" },
      "batch-size": { type: "string" },
      "learning-rate": { type: "string" },
      seed: { type: "string" },
    },
  });
  if (positionals[0] !== "train" || !values.mode || !values.corpus || !values.out) {
    console.error("usage: trainer train --mode MODE --corpus DIR --out DIR [options]");
    return 1;
  }
  const cfg: TrainConfig = {
    ...defaultConfig,
    alpha: values.alpha ? parseInt(values.alpha, 10) : defaultConfig.alpha,
    lambda: values.lambda ? parseFloat(values.lambda) : defaultConfig.lambda,
    epochs: values.epochs ? parseInt(values.epochs, 10) : defaultConfig.epochs,
    batchSize: values["batch-size"]
      ? parseInt(values["batch-size"], 10)
      : defaultConfig.batchSize,
    learningRate: values["learning-rate"]
      ? parseFloat(values["learning-rate"])
      : defaultConfig.learningRate,
    seed: values.seed ? parseInt(values.seed, 10) : defaultConfig.seed,
  };
  const { files, images } = loadCorpus(values.corpus);
  cfg.patchSize = images[0].width;
  fs.mkdirSync(values.out, { recursive: true });
  const log = (epoch: number, loss: number) =>
    console.error(`epoch=${epoch} loss=${loss.toFixed(6)}`);

  if (values.mode === "predictor") {
    const net = trainPredictor(cfg, images, log);
    files.forEach((f, i) =>
      exportQmap(predictionQmap((img) => predictImage(net.model, img), images[i]),
        mapPath(values.out!, f, "pred")),
    );
  } else if (values.mode === "supervised") {
    const truths = files.map((f) => {
      const truthFile = path.join(values.out!, `${path.basename(f, ".pgm")}.truth.qmap`);
      genTruth(f, cfg.alpha, truthFile);
      return readQmap(fs.readFileSync(truthFile)).values;
    });
    const model = trainSupervisedAnalyzer(cfg, images, truths, log);
    files.forEach((f, i) =>
      exportQmap(scoreQmap((img) => scoreImage(model, img), images[i]),
        mapPath(values.out!, f, "score")),
    );
  } else if (values.mode === "unsupervised") {
    const net = trainPredictor(cfg, images, log);
    const dual = trainUnsupervisedAnalyzer(cfg, net, images, log);
    files.forEach((f, i) =>
      exportQmap(
        scoreQmap((img) => phiFromSigma2(sigma2Image(dual, img)), images[i]),
        mapPath(values.out!, f, "score")),
    );
  } else {
    console.error(`unknown mode: ${values.mode}`);
    return 1;
  }
  writeFileAtomic(path.join(values.out, "manifest.txt"), buildManifest(cfg, values.mode));
  console.log(`trained=${values.mode} images=${images.length} out=${values.out}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
