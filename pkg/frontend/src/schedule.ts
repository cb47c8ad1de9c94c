/**
 * Multi-step schedule: the base rate drops by x0.1 at each listed epoch.
 * Epochs are 1-based; the drop applies from the listed epoch onward.
 */
export function learningRateAt(
  epoch: number,
  baseLr: number,
  dropEpochs: number[]
): number {
  if (epoch < 1 || !Number.isInteger(epoch)) {
    throw new Error(`epoch must be a positive integer, got ${epoch}`);
  }
  const drops = dropEpochs.filter((d) => epoch >= d).length;
  return baseLr * Math.pow(0.1, drops);
}
