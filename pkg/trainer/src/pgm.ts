/** Minimal 8-bit PGM reader/writer, interoperable with the codec's files. */

export interface GreyImage {
  width: number;
  height: number;
  /** Row-major uint8 samples, length width*height. */
  pixels: Uint8Array;
}

class TokenReader {
  private pos = 0;
  constructor(private readonly data: Uint8Array) {}

  /** Next whitespace-delimited token, skipping '#' comments to end of line. */
  nextToken(): string {
    const d = this.data;
    for (;;) {
      while (this.pos < d.length && isSpace(d[this.pos])) this.pos++;
      if (this.pos < d.length && d[this.pos] === 0x23 /* # */) {
        while (this.pos < d.length && d[this.pos] !== 0x0a) this.pos++;
        continue;
      }
      break;
    }
    const start = this.pos;
    while (this.pos < d.length && !isSpace(d[this.pos])) this.pos++;
    if (this.pos === start) throw new Error("truncated PGM header");
    return new TextDecoder().decode(d.subarray(start, this.pos));
  }

  /** Consume exactly one whitespace byte (the separator before raster data). */
  skipOne(): number {
    if (this.pos >= this.data.length || !isSpace(this.data[this.pos])) {
      throw new Error("malformed PGM header: missing raster separator");
    }
    return ++this.pos;
  }
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d || b === 0x0b || b === 0x0c;
}

function headerInt(tok: string, what: string): number {
  if (!/^\d+$/.test(tok)) throw new Error(`malformed PGM ${what}: ${tok}`);
  return parseInt(tok, 10);
}

export function readPgm(data: Uint8Array): GreyImage {
  const r = new TokenReader(data);
  const magic = r.nextToken();
  if (magic !== "P5" && magic !== "P2") throw new Error(`bad PGM magic: ${magic}`);
  const width = headerInt(r.nextToken(), "width");
  const height = headerInt(r.nextToken(), "height");
  const maxval = headerInt(r.nextToken(), "maxval");
  if (maxval !== 255) throw new Error(`unsupported maxval: ${maxval}`);
  if (width < 1 || height < 1) throw new Error(`bad PGM dimensions: ${width}x${height}`);
  const n = width * height;
  const pixels = new Uint8Array(n);
  if (magic === "P5") {
    const start = r.skipOne();
    if (data.length - start < n) throw new Error("truncated PGM raster");
    pixels.set(data.subarray(start, start + n));
  } else {
    for (let i = 0; i < n; i++) {
      const v = headerInt(r.nextToken(), "sample");
      if (v > 255) throw new Error(`sample out of range: ${v}`);
      pixels[i] = v;
    }
  }
  return { width, height, pixels };
}

export function writePgm(img: GreyImage): Uint8Array {
  const header = new TextEncoder().encode(`P5\n${img.width} ${img.height}\n255\n`);
  const out = new Uint8Array(header.length + img.pixels.length);
  out.set(header);
  out.set(img.pixels, header.length);
  return out;
}
