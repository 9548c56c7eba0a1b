// Helpers for packet render flows.
const LIMIT = 13;

export function renderPacket(entries) {
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
