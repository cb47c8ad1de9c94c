import { readFileSync } from 'node:fs';
import { decode } from 'fast-png';
import type { FloatImage } from './pfm.js';

/**
 * Read an 8/16-bit RGB PNG and normalize it to float32 in [0, 1].
 */
export function readLdrPng(path: string): FloatImage {
  const png = decode(readFileSync(path));
  const { width, height, channels, depth } = png;
  if (depth !== 8 && depth !== 16) {
    throw new Error(`unsupported PNG bit depth ${depth}: ${path}`);
  }
  const scale = depth === 16 ? 65535 : 255;
  const n = width * height;
  const data = new Float32Array(n * 3);
  const src = png.data;
  if (channels === 3 || channels === 4) {
    for (let i = 0; i < n; i++) {
      for (let c = 0; c < 3; c++) {
        data[i * 3 + c] = src[i * channels + c] / scale;
      }
    }
  } else if (channels === 1) {
    for (let i = 0; i < n; i++) {
      const v = src[i] / scale;
      data[i * 3] = v;
      data[i * 3 + 1] = v;
      data[i * 3 + 2] = v;
    }
  } else {
    throw new Error(`unsupported PNG channel count ${channels}: ${path}`);
  }
  return { width, height, data };
}
