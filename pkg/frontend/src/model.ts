import * as tf from '@tensorflow/tfjs';
import { readFileSync, writeFileSync } from 'node:fs';

const UNET_IN_CHANNELS = 18; // triplet: gamma LDR + exposure-normalized linear
const ATTN_IN_CHANNELS = 4; // well-exposed mask + masked linear reference

interface ConvSpec {
  name: string;
  kh: number;
  inC: number;
  outC: number;
  /** Damped He init for the residual head, see specs(). */
  smallInit?: boolean;
}

/**
 * Residual UNet with a shallow attention branch.
 *
 * The UNet (4 stages, 3 poolings) maps the 18-channel triplet (per frame:
 * gamma-domain LDR plus exposure-normalized linear channels) to a
 * 3-channel residual over the linearized reference. The attention branch
 * (two 3x3 convolutions) maps the mask + masked reference to per-pixel
 * weights that gate the decoder features feeding the residual head, so the
 * correction concentrates where the reference is unreliable. The residual
 * is additionally masked to the poorly-exposed region of the reference:
 * where the reference is well exposed it already matches the fused target,
 * so the output passes it through exactly and no conflicting gradients
 * reach the shared residual head. Gating features instead of blending at
 * the output also matters: an output-level blend can collapse to "always
 * pass the reference through" via a single bias and never recovers,
 * because the collapsed gate zeroes every residual gradient.
 */
export class HdrNet {
  readonly widths: number[];
  private vars = new Map<string, tf.Variable>();
  private seedCounter: number;

  constructor(widths: number[], seed = 0) {
    if (widths.length !== 4) throw new Error('widths must list 4 stages');
    this.widths = widths.slice();
    this.seedCounter = seed * 7919 + 1;
    for (const spec of this.specs()) this.addConv(spec);
  }

  private specs(): ConvSpec[] {
    const [w0, w1, w2, w3] = this.widths;
    const out: ConvSpec[] = [];
    const block = (name: string, inC: number, outC: number) => {
      out.push({ name: `${name}_a`, kh: 3, inC, outC });
      out.push({ name: `${name}_b`, kh: 3, inC: outC, outC });
    };
    block('enc0', UNET_IN_CHANNELS, w0);
    block('enc1', w0, w1);
    block('enc2', w1, w2);
    block('bottom', w2, w3);
    block('dec2', w3 + w2, w2);
    block('dec1', w2 + w1, w1);
    block('dec0', w1 + w0, w0);
    // the head sees the decoder features plus a global skip from the raw
    // input channels, so exposure-normalized frame values can reach the
    // output directly. It starts small so the initial output stays near the
    // reference, but NOT at zero: backpropagation multiplies every upstream
    // gradient by this kernel, so a zero head freezes the network behind it
    out.push({
      name: 'residual', kh: 1, inC: w0 + UNET_IN_CHANNELS, outC: 3,
      smallInit: true
    });
    out.push({ name: 'attn_a', kh: 3, inC: ATTN_IN_CHANNELS, outC: w0 });
    out.push({ name: 'attn_b', kh: 3, inC: w0, outC: 1 });
    return out;
  }

  private addConv(spec: ConvSpec): void {
    const { name, kh, inC, outC, smallInit } = spec;
    const shape: [number, number, number, number] = [kh, kh, inC, outC];
    const scale = (smallInit ? 0.05 : 1) * Math.sqrt(2 / (kh * kh * inC));
    const kernel =
      tf.randomNormal(shape, 0, scale, 'float32', this.seedCounter++);
    // leave tf's auto-generated global names alone; the map below is the
    // authoritative logical naming used by save/load
    this.vars.set(`${name}_k`, tf.variable(kernel, true));
    this.vars.set(`${name}_bias`, tf.variable(tf.zeros([outC]), true));
  }

  variables(): tf.Variable[] {
    return [...this.vars.values()];
  }

  /** Look up a variable by its logical (unprefixed) name. */
  variable(name: string): tf.Variable {
    const v = this.vars.get(name);
    if (!v) throw new Error(`unknown variable ${name}`);
    return v;
  }

  private conv(x: tf.Tensor4D, name: string, relu = true): tf.Tensor4D {
    const k = this.vars.get(`${name}_k`) as tf.Tensor4D;
    const b = this.vars.get(`${name}_bias`)!;
    let y = tf.conv2d(x, k, 1, 'same').add(b) as tf.Tensor4D;
    if (relu) y = tf.relu(y);
    return y;
  }

  private block(x: tf.Tensor4D, name: string): tf.Tensor4D {
    return this.conv(this.conv(x, `${name}_a`), `${name}_b`);
  }

  /** Full-resolution decoder features for the residual head. */
  private features(unetIn: tf.Tensor4D): tf.Tensor4D {
    const e0 = this.block(unetIn, 'enc0');
    const e1 = this.block(tf.maxPool(e0, 2, 2, 'same'), 'enc1');
    const e2 = this.block(tf.maxPool(e1, 2, 2, 'same'), 'enc2');
    const bottom = this.block(tf.maxPool(e2, 2, 2, 'same'), 'bottom');
    const up = (x: tf.Tensor4D, skip: tf.Tensor4D, name: string) => {
      const r = tf.image.resizeNearestNeighbor(
        x, [skip.shape[1]!, skip.shape[2]!]) as tf.Tensor4D;
      return this.block(tf.concat([r, skip], 3) as tf.Tensor4D, name);
    };
    const d2 = up(bottom, e2, 'dec2');
    const d1 = up(d2, e1, 'dec1');
    return up(d1, e0, 'dec0');
  }

  /** Per-pixel feature gate in (0.5, 1.5), single channel. */
  blendWeights(attnIn: tf.Tensor4D): tf.Tensor4D {
    return tf.tidy(() =>
      // the 0.5 floor keeps the residual gradient path alive for any gate
      // setting; a plain sigmoid can drive its input region to zero and
      // permanently cut the head off from its gradients
      tf.sigmoid(this.conv(this.conv(attnIn, 'attn_a'), 'attn_b', false))
        .add(0.5) as tf.Tensor4D
    );
  }

  /** Residual predicted by the UNet, same spatial size as the input. */
  residual(unetIn: tf.Tensor4D, attnIn: tf.Tensor4D): tf.Tensor4D {
    return tf.tidy(() => {
      const gated = this.features(unetIn).mul(this.blendWeights(attnIn));
      const headIn = tf.concat([gated as tf.Tensor4D, unetIn], 3);
      const raw = this.conv(headIn as tf.Tensor4D, 'residual', false);
      // channel 0 of attnIn is the well-exposedness mask; restrict the
      // correction to pixels where the reference is unreliable
      const bad = tf.scalar(1).sub(
        tf.slice(attnIn, [0, 0, 0, 0], [-1, -1, -1, 1]));
      return raw.mul(bad) as tf.Tensor4D;
    });
  }

  forward(unetIn: tf.Tensor4D, attnIn: tf.Tensor4D, refLinear: tf.Tensor4D): tf.Tensor4D {
    return tf.tidy(() =>
      refLinear.add(this.residual(unetIn, attnIn)) as tf.Tensor4D
    );
  }

  save(path: string): void {
    const names: string[] = [];
    const shapes: number[][] = [];
    const chunks: Float32Array[] = [];
    let total = 0;
    for (const [name, v] of this.vars) {
      names.push(name);
      shapes.push(v.shape.slice());
      const data = v.dataSync() as Float32Array;
      chunks.push(data);
      total += data.length;
    }
    const payload = new Float32Array(total);
    let off = 0;
    for (const c of chunks) {
      payload.set(c, off);
      off += c.length;
    }
    const header = Buffer.from(
      JSON.stringify({ widths: this.widths, names, shapes }), 'utf8');
    const head = Buffer.alloc(4);
    head.writeUInt32LE(header.length, 0);
    writeFileSync(path, Buffer.concat([head, header, Buffer.from(payload.buffer)]));
  }

  static load(path: string): HdrNet {
    const buf = readFileSync(path);
    const headerLen = buf.readUInt32LE(0);
    const meta = JSON.parse(buf.subarray(4, 4 + headerLen).toString('utf8'));
    const net = new HdrNet(meta.widths);
    const raw = buf.subarray(4 + headerLen);
    // copy: the payload is generally not 4-byte aligned inside the file
    const payload = new Float32Array(raw.byteLength / 4);
    new Uint8Array(payload.buffer).set(raw);
    let off = 0;
    meta.names.forEach((name: string, i: number) => {
      const shape = meta.shapes[i] as number[];
      const size = shape.reduce((a, b) => a * b, 1);
      const v = net.vars.get(name);
      if (!v) throw new Error(`checkpoint variable ${name} unknown`);
      v.assign(tf.tensor(payload.slice(off, off + size), shape));
      off += size;
    });
    return net;
  }
}
