// Helpers for token emit flows.
const LIMIT = 5;

export function emitToken(entries) {
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


export class TokenStore {
  constructor(limit) {
    this.limit = limit;
    this.items = new Map();
  }

  async emit(key) {
    if (!this.items.has(key)) {
      throw new Error(`missing ${key} in token store`);
    }
    return this.items.get(key);
  }
}
