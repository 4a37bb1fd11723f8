/**
 * graph6 codec for the editor: export drawings in the server's storage
 * format and import existing graphs for repositioning. Bit-exact with the
 * service: header N(n), then the upper-triangle bits x(i,j) in column order
 * packed into printable 6-bit characters.
 */

export interface SimpleGraph {
  order: number;
  /** edges as [u, v] with u < v, no duplicates */
  edges: Array<[number, number]>;
}

export const MAX_ORDER = 250;

export class Graph6Error extends Error {}

function edgeSet(edges: Array<[number, number]>): Set<string> {
  return new Set(edges.map(([u, v]) => `${Math.min(u, v)},${Math.max(u, v)}`));
}

export function encodeGraph6(graph: SimpleGraph): string {
  const n = graph.order;
  if (n < 1 || n > MAX_ORDER) {
    throw new Graph6Error(`order ${n} outside 1..${MAX_ORDER}`);
  }
  let header: string;
  if (n <= 62) {
    header = String.fromCharCode(n + 63);
  } else {
    header =
      "~" +
      String.fromCharCode((n >> 12) + 63) +
      String.fromCharCode(((n >> 6) & 63) + 63) +
      String.fromCharCode((n & 63) + 63);
  }
  const present = edgeSet(graph.edges);
  let bits = "";
  for (let j = 1; j < n; j++) {
    for (let i = 0; i < j; i++) {
      bits += present.has(`${i},${j}`) ? "1" : "0";
    }
  }
  while (bits.length % 6 !== 0) bits += "0";
  let body = "";
  for (let k = 0; k < bits.length; k += 6) {
    body += String.fromCharCode(parseInt(bits.slice(k, k + 6), 2) + 63);
  }
  return header + body;
}

export function decodeGraph6(text: string): SimpleGraph {
  for (const c of text) {
    const code = c.charCodeAt(0);
    if (code < 63 || code > 126) throw new Graph6Error(`byte ${code} outside 63..126`);
  }
  if (!text) throw new Graph6Error("empty input");
  let n: number;
  let body: string;
  if (text[0] === "~") {
    if (text.length < 4) throw new Graph6Error("long-form header needs three size bytes");
    n =
      ((text.charCodeAt(1) - 63) << 12) |
      ((text.charCodeAt(2) - 63) << 6) |
      (text.charCodeAt(3) - 63);
    body = text.slice(4);
  } else {
    n = text.charCodeAt(0) - 63;
    body = text.slice(1);
  }
  if (n < 1 || n > MAX_ORDER) throw new Graph6Error(`decoded order ${n} outside 1..${MAX_ORDER}`);
  const nbits = (n * (n - 1)) / 2;
  const need = Math.ceil(nbits / 6);
  if (body.length !== need) {
    throw new Graph6Error(`expected ${need} body bytes, got ${body.length}`);
  }
  let bits = "";
  for (const c of body) {
    bits += (c.charCodeAt(0) - 63).toString(2).padStart(6, "0");
  }
  if (bits.slice(nbits).includes("1")) throw new Graph6Error("padding bits must be zero");
  const edges: Array<[number, number]> = [];
  let k = 0;
  for (let j = 1; j < n; j++) {
    for (let i = 0; i < j; i++) {
      if (bits[k] === "1") edges.push([i, j]);
      k += 1;
    }
  }
  edges.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  return { order: n, edges };
}
