import init, { accessible_set, access_graph, simulate_chain } from "./pkg/pauli_access_wasm.js";

const $ = (id) => document.getElementById(id);

function inputs() {
  return {
    n: Number($("n").value),
    couplings: $("couplings").value,
    meas: $("meas").value,
  };
}

function status(text, isError = false) {
  $("status").textContent = text;
  $("status").className = isError ? "error" : "";
}

function clear() {
  $("blocks").innerHTML = "";
  $("out").textContent = "";
  $("plot").hidden = true;
}

function run(label, f) {
  clear();
  const start = performance.now();
  try {
    f();
    status(`${label}: ${(performance.now() - start).toFixed(1)} ms`);
  } catch (e) {
    status(String(e), true);
  }
}

function showSet() {
  const { n, couplings, meas } = inputs();
  const set = JSON.parse(accessible_set(n, couplings, meas));
  const rows = set.blocks
    .map((b) => `<tr><td>${b.k}</td><td>${b.size}</td><td style="text-align:left">${b.core}</td></tr>`)
    .join("");
  $("blocks").innerHTML =
    `<p>${set.members.length} members, ${set.edges} edges</p>` +
    `<table><tr><th>k</th><th>size</th><th>core</th></tr>${rows}</table>`;
  const warnings = set.warnings.map((w) => `warning: ${w}\n`).join("");
  $("out").textContent = warnings + set.members.join("\n");
}

function showGraph() {
  const { n, couplings, meas } = inputs();
  $("out").textContent = access_graph(n, couplings, meas);
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function plot(series) {
  const canvas = $("plot");
  canvas.hidden = false;
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, width, height);
  const tMax = series.times[series.times.length - 1] || 1;
  let lo = -1, hi = 1;
  for (const ys of series.outputs) for (const y of ys) { lo = Math.min(lo, y); hi = Math.max(hi, y); }
  const sx = (t) => pad + (t / tMax) * (width - 2 * pad);
  const sy = (y) => height - pad - ((y - lo) / (hi - lo)) * (height - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0));
  ctx.lineTo(width - pad, sy(0));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(hi.toFixed(2), 2, sy(hi) + 4);
  ctx.fillText(lo.toFixed(2), 2, sy(lo));
  ctx.fillText(`t = ${tMax}`, width - pad - 30, height - 8);
  series.outputs.forEach((ys, r) => {
    ctx.strokeStyle = COLORS[r % COLORS.length];
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, sx(series.times[i]), sy(y)));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(series.labels[r], width - pad - 120, pad + 14 * r);
  });
}

function showSimulation() {
  const { n, couplings, meas } = inputs();
  const series = JSON.parse(
    simulate_chain(n, couplings, meas, $("rho0").value, Number($("tmax").value), Number($("dt").value)),
  );
  plot(series);
  const header = ["t", ...series.labels].join(",");
  const lines = series.times.map((t, i) => [t, ...series.outputs.map((ys) => ys[i])].join(","));
  $("out").textContent = `${series.dim} states\n${header}\n${lines.join("\n")}`;
}

await init();
$("run-set").onclick = () => run("accessible set", showSet);
$("run-graph").onclick = () => run("access graph", showGraph);
$("run-sim").onclick = () => run("simulation", showSimulation);
status("ready");
