/** Evaluation helpers for analyzer quality. */

/** Tie-aware AUC via the normalised Mann-Whitney rank statistic. */
export function auc(scores: ArrayLike<number>, truth: ArrayLike<number>): number {
  const n = scores.length;
  if (truth.length !== n) throw new Error(`length mismatch: ${n} vs ${truth.length}`);
  const order = Array.from({ length: n }, (_, i) => i).sort(
    (a, b) => scores[a] - scores[b],
  );
  const ranks = new Float64Array(n);
  for (let i = 0; i < n; ) {
    let j = i;
    while (j + 1 < n && scores[order[j + 1]] === scores[order[i]]) j++;
    const avgRank = (i + j) / 2 + 1;
    for (let k = i; k <= j; k++) ranks[order[k]] = avgRank;
    i = j + 1;
  }
  let nPos = 0;
  let rankSum = 0;
  for (let i = 0; i < n; i++) {
    if (truth[i]) {
      nPos++;
      rankSum += ranks[i];
    }
  }
  const nNeg = n - nPos;
  if (nPos === 0 || nNeg === 0) throw new Error("need both classes for AUC");
  return (rankSum - (nPos * (nPos + 1)) / 2) / (nPos * nNeg);
}
