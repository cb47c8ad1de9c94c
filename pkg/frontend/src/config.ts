import { readFileSync } from 'node:fs';

export interface TrainConfig {
  /** Weight of the mu-law term in the loss. */
  alpha: number;
  mu: number;
  lr: number;
  epochs: number;
  /** Epochs at which the learning rate drops by x0.1. */
  lrDropEpochs: number[];
  batchSize: number;
  /** Square crop fed to the network; pairs larger than this are cropped. */
  cropSize: number;
  /** Channel widths of the four UNet stages. */
  widths: number[];
  gamma: number;
  tLow: number;
  tHigh: number;
  seed: number;
  /** Hard cap on optimization steps (0 = run all epochs). */
  maxSteps: number;
}

export const DEFAULT_CONFIG: TrainConfig = {
  alpha: 0.2,
  mu: 5000,
  lr: 1e-4,
  epochs: 300,
  lrDropEpochs: [210, 285],
  batchSize: 8,
  cropSize: 128,
  widths: [64, 128, 256, 512],
  gamma: 2.2,
  tLow: 0.125,
  tHigh: 0.75,
  seed: 0,
  maxSteps: 0
};

const INT_KEYS = new Set(['epochs', 'batchSize', 'cropSize', 'seed', 'maxSteps']);
const LIST_KEYS = new Set(['lrDropEpochs', 'widths']);

export function validateConfig(cfg: TrainConfig): TrainConfig {
  if (cfg.alpha < 0) throw new Error('alpha must be >= 0');
  if (cfg.epochs <= 0) throw new Error('epochs must be positive');
  if (cfg.mu <= 0 || cfg.lr <= 0) throw new Error('mu and lr must be positive');
  if (cfg.batchSize <= 0 || cfg.cropSize <= 0) {
    throw new Error('batchSize and cropSize must be positive');
  }
  if (cfg.widths.length !== 4) throw new Error('widths must list 4 stages');
  if (cfg.cropSize % 8 !== 0) {
    throw new Error('cropSize must be divisible by 8 (three 2x poolings)');
  }
  return cfg;
}

/**
 * Load a flat key=value config ('#' starts a comment). List values are
 * comma-separated. Unknown keys are rejected.
 */
export function loadConfig(path?: string, overrides: Partial<TrainConfig> = {}): TrainConfig {
  const cfg: Record<string, unknown> = { ...DEFAULT_CONFIG };
  if (path) {
    const lines = readFileSync(path, 'utf8').split('\n');
    lines.forEach((raw, i) => {
      const line = raw.split('#', 1)[0].trim();
      if (!line) return;
      const eq = line.indexOf('=');
      if (eq < 0) throw new Error(`${path}:${i + 1}: expected key = value`);
      const key = line.slice(0, eq).trim();
      const val = line.slice(eq + 1).trim();
      if (!(key in DEFAULT_CONFIG)) {
        throw new Error(`${path}:${i + 1}: unknown key '${key}'`);
      }
      if (LIST_KEYS.has(key)) {
        cfg[key] = val.split(',').map((v) => {
          const n = Number(v.trim());
          if (!Number.isFinite(n)) throw new Error(`${path}:${i + 1}: bad value '${val}'`);
          return n;
        });
      } else {
        const n = Number(val);
        if (!Number.isFinite(n) || (INT_KEYS.has(key) && !Number.isInteger(n))) {
          throw new Error(`${path}:${i + 1}: bad value for ${key}: '${val}'`);
        }
        cfg[key] = n;
      }
    });
  }
  return validateConfig({ ...(cfg as unknown as TrainConfig), ...overrides });
}
