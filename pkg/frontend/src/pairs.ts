import { readdirSync, readFileSync, statSync } from 'node:fs';
import { join } from 'node:path';
import { readPfm, type FloatImage } from './pfm.js';
import { readLdrPng } from './png16.js';

export interface PairMeta {
  tag: string;
  scene_id: string;
  origin: [number, number];
  evs: [number, number, number];
  [key: string]: unknown;
}

export interface Pair {
  dir: string;
  /** short, medium, long gamma-encoded LDR patches. */
  patches: [FloatImage, FloatImage, FloatImage];
  label: FloatImage;
  meta: PairMeta;
}

/** Find every pair directory (root/scene/tag/index) under a dataset root. */
export function scanPairDirs(root: string): string[] {
  const dirs: string[] = [];
  const walk = (dir: string, depth: number) => {
    for (const name of readdirSync(dir).sort()) {
      const p = join(dir, name);
      if (!statSync(p).isDirectory()) continue;
      if (depth === 2) {
        try {
          statSync(join(p, 'meta.json'));
          dirs.push(p);
        } catch {
          /* not a pair directory */
        }
      } else {
        walk(p, depth + 1);
      }
    }
  };
  walk(root, 0);
  return dirs;
}

export function readPair(dir: string): Pair {
  const meta = JSON.parse(readFileSync(join(dir, 'meta.json'), 'utf8')) as PairMeta;
  const patches: [FloatImage, FloatImage, FloatImage] = [
    readLdrPng(join(dir, 'short.png')),
    readLdrPng(join(dir, 'medium.png')),
    readLdrPng(join(dir, 'long.png'))
  ];
  const label = readPfm(join(dir, 'label.pfm'));
  for (const img of [...patches, label]) {
    if (img.width !== label.width || img.height !== label.height) {
      throw new Error(`pair images disagree in size: ${dir}`);
    }
  }
  return { dir, patches, label, meta };
}

export interface ExampleArrays {
  size: number;
  /**
   * 18-channel triplet, HWC: per frame, 3 gamma-domain LDR channels then 3
   * exposure-normalized linear channels (linearized value scaled to the
   * reference exposure). The normalized channels make the radiance estimate
   * of every frame directly comparable to the reference regardless of the
   * pair's exposure spacing.
   */
  unetIn: Float32Array;
  /** 4-channel attention input: mask + linear reference, HWC. */
  attnIn: Float32Array;
  /** Linearized reference, HWC RGB. */
  refLinear: Float32Array;
  /** Linear HDR label, HWC RGB. */
  label: Float32Array;
}

export interface ExampleOptions {
  gamma: number;
  tLow: number;
  tHigh: number;
}

/**
 * Crop one training example out of a pair and assemble the network inputs.
 */
export function buildExample(
  pair: Pair,
  x0: number,
  y0: number,
  size: number,
  opts: ExampleOptions
): ExampleArrays {
  const { width, height } = pair.label;
  if (x0 < 0 || y0 < 0 || x0 + size > width || y0 + size > height) {
    throw new Error(`crop ${size}@(${x0},${y0}) outside ${width}x${height}`);
  }
  const n = size * size;
  const unetIn = new Float32Array(n * 18);
  const attnIn = new Float32Array(n * 4);
  const refLinear = new Float32Array(n * 3);
  const label = new Float32Array(n * 3);
  const evs = pair.meta.evs;
  // 2^(ev_ref - ev_f): rescales each frame's linearized values to the
  // reference exposure
  const gain = [0, 1, 2].map((f) => Math.pow(2, evs[1] - evs[f]));
  for (let y = 0; y < size; y++) {
    for (let x = 0; x < size; x++) {
      const src = ((y0 + y) * width + (x0 + x)) * 3;
      const dst = (y * size + x) * 3;
      let maxRef = 0;
      for (let c = 0; c < 3; c++) {
        for (let f = 0; f < 3; f++) {
          const v = pair.patches[f].data[src + c];
          const u = (y * size + x) * 18 + f * 6;
          unetIn[u + c] = v;
          unetIn[u + 3 + c] = Math.pow(v, opts.gamma) * gain[f];
        }
        const ref = pair.patches[1].data[src + c];
        if (ref > maxRef) maxRef = ref;
        refLinear[dst + c] = Math.pow(ref, opts.gamma);
        label[dst + c] = pair.label.data[src + c];
      }
      const well = maxRef >= opts.tLow && maxRef <= opts.tHigh ? 1 : 0;
      const a = (y * size + x) * 4;
      attnIn[a] = well;
      // unmasked reference: the attention branch needs signal inside the
      // poorly-exposed region, where the mask channel is zero
      for (let c = 0; c < 3; c++) {
        attnIn[a + 1 + c] = refLinear[dst + c];
      }
    }
  }
  return { size, unetIn, attnIn, refLinear, label };
}

/** Small deterministic RNG (mulberry32) for shuffling and crop sampling. */
export function makeRng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
