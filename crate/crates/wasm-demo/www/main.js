import init, { extractDates, mineRules, similarNodes } from "./pkg/metakg_wasm.js";

const $ = (id) => document.getElementById(id);

const SAMPLE = (() => {
  const ex = "http://example.org/";
  const people = ["ann", "bob", "cas", "dee", "eli", "fay", "gus", "hal"];
  const lines = [];
  people.forEach((p, i) => {
    const next = people[(i + 1) % people.length];
    lines.push(`<${ex}person/${p}> <${ex}parentOf> <${ex}person/${next}> .`);
    lines.push(`<${ex}person/${next}> <${ex}childOf> <${ex}person/${p}> .`);
    lines.push(`<${ex}person/${p}> <${ex}livesIn> <${ex}city/${i % 3}> .`);
  });
  return lines.join("\n") + "\n";
})();

function table(rows, columns) {
  if (rows.length === 0) return "<p>No results.</p>";
  const head = columns.map((c) => `<th>${c}</th>`).join("");
  const body = rows
    .map((r) => "<tr>" + columns.map((c) => `<td>${escape(format(r[c]))}</td>`).join("") + "</tr>")
    .join("");
  return `<table><tr>${head}</tr>${body}</table>`;
}

function format(v) {
  return typeof v === "number" && !Number.isInteger(v) ? v.toFixed(4) : String(v);
}

function escape(s) {
  return s.replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c]);
}

function run(out, f) {
  try {
    out.innerHTML = f();
  } catch (e) {
    out.innerHTML = `<p class="error">${escape(String(e.message ?? e))}</p>`;
  }
}

function showDates() {
  const text = $("dates-in").value;
  const hits = JSON.parse(extractDates(text));
  // offsets count code points, so slice on an array of them
  const chars = [...text];
  let marked = "";
  let at = 0;
  for (const h of hits) {
    marked += escape(chars.slice(at, h.start).join("")) + `<mark>${escape(chars.slice(h.start, h.end).join(""))}</mark>`;
    at = h.end;
  }
  $("dates-marked").innerHTML = marked + escape(chars.slice(at).join(""));
  return table(hits, ["surface", "normalized", "start", "end"]);
}

await init();
$("graph").value = SAMPLE;
$("status").textContent = "Ready.";
for (const b of document.querySelectorAll("button")) b.disabled = false;

$("dates-run").onclick = () => run($("dates-out"), showDates);
$("rules-run").onclick = () =>
  run($("rules-out"), () => {
    const rules = JSON.parse(mineRules($("graph").value, Number($("max-len").value), Number($("min-support").value)));
    return table(rules, ["rule", "support", "head_coverage", "std_confidence", "pca_confidence"]);
  });
$("similar-run").onclick = () =>
  run($("similar-out"), () => table(JSON.parse(similarNodes($("graph").value, $("node").value, Number($("k").value), 7)), ["node", "score"]));
