/** QMAP binary map format shared with the codec.
 *
 * Layout: "QMAP" | version u8 (1) | kind u8 | reserved u16 (0) |
 * width u32 LE | height u32 LE | payload. Prediction payload is uint8
 * samples; Score payload is float32 little-endian. Trailing bytes are an
 * error.
 */

export enum MapKind {
  Prediction = 0,
  Score = 1,
}

export interface QMap {
  kind: MapKind;
  width: number;
  height: number;
  /** Row-major values: integers 0..255 for Prediction, finite floats for Score. */
  values: Float64Array;
}

const MAGIC = "QMAP";
const HEADER_BYTES = 16;

export function readQmap(data: Uint8Array): QMap {
  if (data.length < HEADER_BYTES) throw new Error("truncated QMAP header");
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  const magic = new TextDecoder().decode(data.subarray(0, 4));
  if (magic !== MAGIC) throw new Error(`bad QMAP magic: ${magic}`);
  if (view.getUint8(4) !== 1) throw new Error(`unsupported QMAP version: ${view.getUint8(4)}`);
  const kind = view.getUint8(5);
  if (kind !== MapKind.Prediction && kind !== MapKind.Score) {
    throw new Error(`bad QMAP kind: ${kind}`);
  }
  if (view.getUint16(6, true) !== 0) throw new Error("bad QMAP reserved field");
  const width = view.getUint32(8, true);
  const height = view.getUint32(12, true);
  if (width < 1 || height < 1) throw new Error(`bad QMAP dimensions: ${width}x${height}`);
  const n = width * height;
  const sampleBytes = kind === MapKind.Prediction ? 1 : 4;
  if (data.length !== HEADER_BYTES + n * sampleBytes) {
    throw new Error(`QMAP payload size mismatch: ${data.length}`);
  }
  const values = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    values[i] =
      kind === MapKind.Prediction
        ? view.getUint8(HEADER_BYTES + i)
        : view.getFloat32(HEADER_BYTES + i * 4, true);
    if (!Number.isFinite(values[i])) throw new Error("non-finite QMAP value");
  }
  return { kind, width, height, values };
}

export function writeQmap(qmap: QMap): Uint8Array {
  const n = qmap.width * qmap.height;
  if (qmap.values.length !== n) {
    throw new Error(`QMAP value count mismatch: ${qmap.values.length} != ${n}`);
  }
  const sampleBytes = qmap.kind === MapKind.Prediction ? 1 : 4;
  const out = new Uint8Array(HEADER_BYTES + n * sampleBytes);
  const view = new DataView(out.buffer);
  out.set(new TextEncoder().encode(MAGIC));
  view.setUint8(4, 1);
  view.setUint8(5, qmap.kind);
  view.setUint16(6, 0, true);
  view.setUint32(8, qmap.width, true);
  view.setUint32(12, qmap.height, true);
  for (let i = 0; i < n; i++) {
    const v = qmap.values[i];
    if (!Number.isFinite(v)) throw new Error("non-finite QMAP value");
    if (qmap.kind === MapKind.Prediction) {
      if (!Number.isInteger(v) || v < 0 || v > 255) {
        throw new Error(`prediction value out of range: ${v}`);
      }
      view.setUint8(HEADER_BYTES + i, v);
    } else {
      view.setFloat32(HEADER_BYTES + i * 4, v, true);
    }
  }
  return out;
}
