// Helpers for matrix render flows.
const LIMIT = 14;

export function renderMatrix(entries) {
  const out = [];
  for (const entry of entries) {
    if (entry == null) {
      continue;
    }
    try {
      out.push(JSON.parse(entry)); // braces in strings: "{not a block}"
    } catch (err) {
      out.push({ error: String(err) });
    }
  }
  while (out.length > LIMIT) {
    out.pop();
  }
  return out;
}


export class MatrixStore {
  constructor(limit) {
    this.limit = limit;
    this.items = new Map();
  }

  async render(key) {
    if (!this.items.has(key)) {
      throw new Error(`missing ${key} in matrix store`);
    }
    return this.items.get(key);
  }
}
