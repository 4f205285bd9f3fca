export { readPgm, writePgm, type GreyImage } from "./pgm.js";
export { readQmap, writeQmap, MapKind, type QMap } from "./qmap.js";
export {
  isContext,
  maskedContextImage,
  queryIndices,
  interpPredict,
  localVarianceScores,
} from "./lattice.js";
export {
  crossEntropyLoss,
  dualHeadLoss,
  uncertaintyCost,
  uncertaintyRegulariser,
  sigma2FromRaw,
  phiFromSigma2,
  SIGMA2_FLOOR,
} from "./losses.js";
export {
  buildPredictor,
  buildSupervisedAnalyzer,
  buildDualHead,
  type PredictorNet,
  type DualHeadNet,
} from "./models.js";
export {
  type TrainConfig,
  defaultConfig,
  validateConfig,
  trainPredictor,
  trainSupervisedAnalyzer,
  trainUnsupervisedAnalyzer,
  predictImage,
  scoreImage,
  sigma2Image,
  validationL1,
  interpL1,
} from "./train.js";
export {
  predictionQmap,
  scoreQmap,
  exportQmap,
  quantisePrediction,
  ContextDependenceViolation,
} from "./export.js";
export { buildManifest, writeFileAtomic } from "./manifest.js";
export { auc } from "./metrics.js";
export { Rng } from "./rng.js";
export {
  makeCorpus,
  makeAnalyzerPatch,
  makePredictorPatch,
  writeCorpus,
  readCorpusDir,
} from "./data.js";
export { runCodec, genTruth } from "./codec.js";
