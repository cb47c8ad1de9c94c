import { readFileSync } from 'node:fs';

export interface FloatImage {
  width: number;
  height: number;
  /** Row-major RGB, top row first. */
  data: Float32Array;
}

/**
 * Read a 3-channel portable float map ('PF'). Rows are stored bottom-up;
 * the returned buffer is flipped back to top-down order.
 */
export function readPfm(path: string): FloatImage {
  const buf = readFileSync(path);
  let off = 0;
  const line = () => {
    const end = buf.indexOf(0x0a, off);
    if (end < 0) throw new Error(`truncated PFM header: ${path}`);
    const s = buf.subarray(off, end).toString('ascii').trim();
    off = end + 1;
    return s;
  };
  if (line() !== 'PF') throw new Error(`not a color PFM: ${path}`);
  const dims = line().split(/\s+/).map(Number);
  if (dims.length !== 2 || dims.some((d) => !Number.isInteger(d) || d <= 0)) {
    throw new Error(`bad PFM dimensions in ${path}`);
  }
  const [width, height] = dims;
  const scale = Number(line());
  const count = width * height * 3;
  if (buf.length - off < count * 4) {
    throw new Error(`truncated PFM payload: ${path}`);
  }
  const littleEndian = scale < 0;
  const view = new DataView(buf.buffer, buf.byteOffset + off, count * 4);
  const data = new Float32Array(count);
  const rowLen = width * 3;
  for (let y = 0; y < height; y++) {
    const srcRow = height - 1 - y; // bottom-up storage
    for (let i = 0; i < rowLen; i++) {
      data[y * rowLen + i] = view.getFloat32(
        (srcRow * rowLen + i) * 4,
        littleEndian
      );
    }
  }
  return { width, height, data };
}
