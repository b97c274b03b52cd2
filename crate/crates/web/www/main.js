import init, { point_curves, footing_curves, tangent_gap } from "./pkg/hyperrate_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function rows(flat, width) {
  const out = [];
  for (let i = 0; i < flat.length; i += width) out.push(Array.from(flat.slice(i, i + width)));
  return out;
}

function plot(canvas, data, xlabel, ylabel) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 50;
  ctx.clearRect(0, 0, w, h);
  const xs = data.map((r) => r[0]);
  const ys = data.flatMap((r) => r.slice(1));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(0, ...ys), Math.max(0, ...ys)];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) y1 = y0 + 1;
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 1.5 * pad);
  const sy = (y) => h - pad + ((y0 - y) / (y1 - y0)) * (h - 1.5 * pad);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, sy(y0)); ctx.lineTo(pad, sy(y1));
  ctx.moveTo(pad, sy(0)); ctx.lineTo(sx(x1), sy(0));
  ctx.stroke();
  ctx.fillText(xlabel, w - 1.5 * pad, h - pad / 3);
  ctx.fillText(ylabel, 4, pad / 2);
  for (const y of [y0, y1]) ctx.fillText(y.toPrecision(4), 2, sy(y) + 4);
  for (const x of [x0, x1]) ctx.fillText(x.toPrecision(4), sx(x) - 12, h - pad + 16);

  for (let c = 1; c <= 3; c++) {
    ctx.strokeStyle = COLORS[c - 1];
    ctx.lineWidth = c === 3 ? 1.5 : 2.5;
    ctx.setLineDash(c === 3 ? [6, 4] : []);
    ctx.beginPath();
    data.forEach((r, i) => (i ? ctx.lineTo(sx(r[0]), sy(r[c])) : ctx.moveTo(sx(r[0]), sy(r[c]))));
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function report(el, text, isError) {
  el.textContent = text;
  el.className = isError ? "err" : "";
}

function updatePoint() {
  const kind = $("p-kind").value;
  try {
    const data = rows(point_curves(kind, num("p-target"), num("p-steps"), num("p-mu"), num("p-kappa")), 4);
    const last = data[data.length - 1];
    const err = (v) => (last[1] === 0 ? 0 : Math.abs(v - last[1]) / Math.abs(last[1]));
    report($("p-msg"),
      `endpoint: total ${last[1].toPrecision(6)} MPa, unmodified error ${(100 * err(last[2])).toFixed(3)} %, ` +
      `modified error ${(100 * err(last[3])).toFixed(4)} %`, false);
    plot($("p-plot"), data, kind === "shear" ? "gamma" : kind === "rotation" ? "angle (rad)" : "stretch",
      kind === "shear" ? "sigma12 (MPa)" : "sigma11 (MPa)");
  } catch (e) {
    report($("p-msg"), String(e.message ?? e), true);
  }
}

function runFooting() {
  report($("f-msg"), "running...", false);
  setTimeout(() => {
    const t0 = performance.now();
    try {
      const data = rows(footing_curves(num("f-n"), num("f-steps"), num("f-kappa")), 4);
      const last = data[data.length - 1];
      report($("f-msg"),
        `final reaction: total ${last[1].toFixed(3)} N, unmodified ${last[2].toFixed(3)} N, ` +
        `modified ${last[3].toFixed(3)} N (${((performance.now() - t0) / 1000).toFixed(1)} s)`, false);
      plot($("f-plot"), data, "punch (mm)", "reaction (N)");
    } catch (e) {
      report($("f-msg"), String(e.message ?? e), true);
    }
  }, 10);
}

function updateTangent() {
  $("t-jv").textContent = num("t-j").toFixed(2);
  $("t-gv").textContent = num("t-g").toFixed(2);
  try {
    const [fd, corr] = tangent_gap(num("t-j"), num("t-g"), 1.0, num("t-kappa"));
    report($("t-out"),
      `analytic vs finite-difference tangent: ${fd.toExponential(2)} relative; ` +
      `|C_mod - C| / |C| = ${corr.toExponential(3)}`, false);
  } catch (e) {
    report($("t-out"), String(e.message ?? e), true);
  }
}

await init();
for (const id of ["p-kind", "p-target", "p-steps", "p-mu", "p-kappa"]) $(id).addEventListener("input", updatePoint);
$("p-kind").addEventListener("change", () => {
  $("p-target").value = { dilation: 1.2, shear: 1.0, uniaxial: 1.5, rotation: 3.14 }[$("p-kind").value];
  updatePoint();
});
for (const id of ["t-j", "t-g", "t-kappa"]) $(id).addEventListener("input", updateTangent);
$("f-run").addEventListener("click", runFooting);
updatePoint();
updateTangent();
