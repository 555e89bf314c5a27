import init, { half_circle_weights, flux_curve, polygon_windings } from "./pkg/pathoid_wasm.js";

const $ = (id) => document.getElementById(id);
const TAU = 2 * Math.PI;

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#eee";
  ctx.beginPath();
  ctx.moveTo(0, h / 2); ctx.lineTo(w, h / 2);
  ctx.moveTo(w / 2, 0); ctx.lineTo(w / 2, h);
  ctx.stroke();
}

function dot(ctx, x, y, color, r = 4) {
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(x, y, r, 0, TAU);
  ctx.fill();
}

// half circles

function drawHalfCircle() {
  const phi = +$("hc-phi").value, r = +$("hc-r").value, omega = +$("hc-omega").value;
  const sym = $("hc-sym").checked;
  $("hc-phi-v").textContent = phi.toFixed(2);
  $("hc-r-v").textContent = r.toFixed(2);
  $("hc-omega-v").textContent = omega.toFixed(2);

  const plane = $("hc-plane").getContext("2d");
  axes(plane, 300, 300);
  const s = 40;
  for (const [sign, color] of [[1, "#1f6fd1"], [-1, "#d1561f"]]) {
    plane.strokeStyle = color;
    plane.lineWidth = 2;
    plane.beginPath();
    for (let k = 0; k <= 64; k++) {
      const t = omega + Math.PI * k / 64;
      const x = 150 + sign * s * r * Math.cos(t), y = 150 - sign * s * r * Math.sin(t);
      k ? plane.lineTo(x, y) : plane.moveTo(x, y);
    }
    plane.stroke();
  }
  dot(plane, 150, 150, "#000", 3);

  const out = $("hc-out");
  try {
    const [re, im, reInv, imInv] = half_circle_weights(phi, r, omega, sym);
    const phase = $("hc-phase").getContext("2d");
    axes(phase, 300, 300);
    phase.strokeStyle = "#999";
    phase.beginPath();
    phase.arc(150, 150, 120, 0, TAU);
    phase.stroke();
    dot(phase, 150 + 120 * re, 150 - 120 * im, "#1f6fd1", 6);
    dot(phase, 150 + 120 * reInv, 150 - 120 * imInv, "#d1561f", 4);
    out.className = "out";
    out.textContent =
      `χ(q)    = ${re.toFixed(6)} ${im < 0 ? "-" : "+"} ${Math.abs(im).toFixed(6)}i\n` +
      `χ(−q)   = ${reInv.toFixed(6)} ${imInv < 0 ? "-" : "+"} ${Math.abs(imInv).toFixed(6)}i\n` +
      `e^{iφ/2} = ${Math.cos(phi / 2).toFixed(6)} ${Math.sin(phi / 2) < 0 ? "-" : "+"} ${Math.abs(Math.sin(phi / 2)).toFixed(6)}i\n` +
      `|χ(q) − χ(−q)| = ${Math.hypot(re - reInv, im - imInv).toExponential(3)}`;
  } catch (e) {
    out.className = "out err";
    out.textContent = String(e);
  }
}

// flux sweep

function site(text) {
  const [i, j] = text.split(",").map((v) => parseInt(v, 10));
  return [i, j];
}

function runSweep() {
  const [ai, aj] = site($("fx-a").value), [bi, bj] = site($("fx-b").value);
  const n = +$("fx-n").value;
  const out = $("fx-out");
  const ctx = $("fx-plot").getContext("2d");
  const w = 620, h = 260, pad = 30;
  ctx.clearRect(0, 0, w, h);
  let res;
  try {
    res = flux_curve(ai, aj, bi, bj, n, 161);
  } catch (e) {
    out.className = "out err";
    out.textContent = String(e);
    return;
  }
  const [walks, sectors, ...abs] = res;
  if (walks === 0) {
    out.className = "out err";
    out.textContent = "no walks of that length join these sites";
    return;
  }
  const lo = Math.min(...abs), hi = Math.max(...abs);
  const y = (v) => h - pad - (hi > lo ? (v - lo) / (hi - lo) : 0.5) * (h - 2 * pad);
  const x = (k) => pad + k * (w - 2 * pad) / (abs.length - 1);
  ctx.strokeStyle = "#ddd";
  ctx.fillStyle = "#666";
  for (const k of [0, 1, 2, 3, 4]) {
    const xx = pad + k * (w - 2 * pad) / 4;
    ctx.beginPath(); ctx.moveTo(xx, pad); ctx.lineTo(xx, h - pad); ctx.stroke();
    ctx.fillText(`${k}π`, xx - 6, h - 10);
  }
  ctx.strokeStyle = "#1f6fd1";
  ctx.lineWidth = 2;
  ctx.beginPath();
  abs.forEach((v, k) => (k ? ctx.lineTo(x(k), y(v)) : ctx.moveTo(x(k), y(v))));
  ctx.stroke();
  ctx.lineWidth = 1;
  out.className = "out";
  out.textContent = `walks    ${walks}\nsectors  ${sectors}\nmax |K|  ${hi.toFixed(9)}\nmin |K|  ${lo.toFixed(9)}`;
}

// winding

const wd = { vertices: [], punctures: [[0, 0]] };
const SCALE = 40;

function toWorld(ev) {
  const rect = $("wd-canvas").getBoundingClientRect();
  return [(ev.clientX - rect.left - 200) / SCALE, -(ev.clientY - rect.top - 200) / SCALE];
}

function drawWinding() {
  const ctx = $("wd-canvas").getContext("2d");
  axes(ctx, 400, 400);
  const px = ([x, y]) => [200 + x * SCALE, 200 - y * SCALE];
  if (wd.vertices.length) {
    ctx.strokeStyle = "#1f6fd1";
    ctx.lineWidth = 2;
    ctx.beginPath();
    wd.vertices.forEach((v, k) => (k ? ctx.lineTo(...px(v)) : ctx.moveTo(...px(v))));
    ctx.closePath();
    ctx.stroke();
    ctx.lineWidth = 1;
    wd.vertices.forEach((v) => dot(ctx, ...px(v), "#1f6fd1", 3));
  }
  wd.punctures.forEach((p) => dot(ctx, ...px(p), "#d1561f", 5));

  const out = $("wd-out");
  if (wd.vertices.length < 2) {
    out.className = "out";
    out.textContent = "add at least two vertices";
    return;
  }
  try {
    const w = polygon_windings(new Float64Array(wd.vertices.flat()), new Float64Array(wd.punctures.flat()));
    out.className = "out";
    out.textContent = wd.punctures
      .map((p, k) => `(${p[0].toFixed(2)}, ${p[1].toFixed(2)})  winding ${w[k]}`)
      .join("\n");
  } catch (e) {
    out.className = "out err";
    out.textContent = String(e);
  }
}

await init();

for (const id of ["hc-phi", "hc-r", "hc-omega", "hc-sym"]) $(id).addEventListener("input", drawHalfCircle);
$("fx-run").addEventListener("click", runSweep);
$("wd-canvas").addEventListener("click", (ev) => {
  (ev.shiftKey ? wd.punctures : wd.vertices).push(toWorld(ev));
  drawWinding();
});
$("wd-clear").addEventListener("click", () => {
  wd.vertices = [];
  wd.punctures = [[0, 0]];
  drawWinding();
});

drawHalfCircle();
runSweep();
drawWinding();
