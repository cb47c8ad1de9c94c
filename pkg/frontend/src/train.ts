import * as tf from '@tensorflow/tfjs';
import { mkdirSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';
import { type TrainConfig } from './config.js';
import { reconstructionLoss } from './loss.js';
import { HdrNet } from './model.js';
import {
  buildExample,
  makeRng,
  readPair,
  scanPairDirs,
  type ExampleArrays,
  type Pair
} from './pairs.js';
import { learningRateAt } from './schedule.js';

export interface StepRecord {
  step: number;
  epoch: number;
  lr: number;
  loss: number;
}

export interface TrainResult {
  net: HdrNet;
  log: StepRecord[];
  checkpointPath: string;
  logPath: string;
}

function batchTensors(examples: ExampleArrays[]) {
  const size = examples[0].size;
  const stack = (key: 'unetIn' | 'attnIn' | 'refLinear' | 'label', ch: number) => {
    const flat = new Float32Array(examples.length * size * size * ch);
    examples.forEach((e, i) => flat.set(e[key], i * size * size * ch));
    return tf.tensor4d(flat, [examples.length, size, size, ch]);
  };
  return {
    unetIn: stack('unetIn', 18),
    attnIn: stack('attnIn', 4),
    refLinear: stack('refLinear', 3),
    label: stack('label', 3)
  };
}

function sampleBatch(pairs: Pair[], cfg: TrainConfig, rng: () => number) {
  const examples: ExampleArrays[] = [];
  for (let i = 0; i < cfg.batchSize; i++) {
    const pair = pairs[Math.floor(rng() * pairs.length)];
    const maxX = pair.label.width - cfg.cropSize;
    const maxY = pair.label.height - cfg.cropSize;
    if (maxX < 0 || maxY < 0) {
      throw new Error(`pair ${pair.dir} smaller than cropSize ${cfg.cropSize}`);
    }
    const x0 = Math.floor(rng() * (maxX + 1));
    const y0 = Math.floor(rng() * (maxY + 1));
    examples.push(buildExample(pair, x0, y0, cfg.cropSize, cfg));
  }
  return batchTensors(examples);
}

export function loadPairs(root: string): Pair[] {
  const dirs = scanPairDirs(root);
  if (dirs.length === 0) throw new Error(`no pairs under ${root}`);
  return dirs.map(readPair);
}

/**
 * Overfit-style training loop over a pair directory. One epoch visits
 * ceil(n / batchSize) random batches; the learning rate follows the
 * multi-step schedule. Returns the trained network and the loss log.
 */
export function train(
  root: string,
  cfg: TrainConfig,
  outDir: string,
  initial?: HdrNet
): TrainResult {
  const pairs = loadPairs(root);
  mkdirSync(outDir, { recursive: true });
  const net = initial ?? new HdrNet(cfg.widths, cfg.seed);
  const rng = makeRng(cfg.seed + 1);
  const varList = net.variables();
  const stepsPerEpoch = Math.max(1, Math.ceil(pairs.length / cfg.batchSize));

  const log: StepRecord[] = [];
  const optimizer = tf.train.adam(cfg.lr);
  let step = 0;
  outer: for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    const lr = learningRateAt(epoch, cfg.lr, cfg.lrDropEpochs);
    // adjust the step size in place so the Adam moments survive the drop
    (optimizer as unknown as { learningRate: number }).learningRate = lr;
    for (let i = 0; i < stepsPerEpoch; i++) {
      const batch = sampleBatch(pairs, cfg, rng);
      const cost = optimizer.minimize(
        () =>
          reconstructionLoss(
            net.forward(batch.unetIn, batch.attnIn, batch.refLinear),
            batch.label,
            cfg.alpha,
            cfg.mu
          ),
        true,
        varList
      )!;
      const loss = cost.dataSync()[0];
      cost.dispose();
      Object.values(batch).forEach((t) => t.dispose());
      step += 1;
      log.push({ step, epoch, lr, loss });
      if (cfg.maxSteps > 0 && step >= cfg.maxSteps) break outer;
    }
  }
  optimizer.dispose();

  const checkpointPath = join(outDir, 'checkpoint.bin');
  net.save(checkpointPath);
  const logPath = join(outDir, 'loss_log.csv');
  const csv = ['step,epoch,lr,loss']
    .concat(log.map((r) => `${r.step},${r.epoch},${r.lr},${r.loss}`))
    .join('\n');
  writeFileSync(logPath, csv + '\n');
  return { net, log, checkpointPath, logPath };
}
