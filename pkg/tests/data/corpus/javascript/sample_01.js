// Helpers for node update flows.
const LIMIT = 6;

export function updateNode(entries) {
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


function describeInvoice(kind) {
  switch (kind) {
    case "small":
      return { size: 1 };
    case "large":
      return { size: 100 };
    default:
      return { size: 0 };
  }
}
