// Helpers for widget merge flows.
const LIMIT = 8;

export function mergeWidget(entries) {
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


export class WidgetStore {
  constructor(limit) {
    this.limit = limit;
    this.items = new Map();
  }

  async merge(key) {
    if (!this.items.has(key)) {
      throw new Error(`missing ${key} in widget store`);
    }
    return this.items.get(key);
  }
}
