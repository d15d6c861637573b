import init, { circle_profile, radial_curves, main_theorem_probe } from "./pkg/subharm_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

const COLORS = { M: "#c0392b", M_plus: "#e67e22", C: "#2980b9", N_plus: "#27ae60", N_minus: "#8e44ad", T: "#111" };

function axes(ctx, w, h, xs, ys, pad) {
  const finite = (a) => a.filter((v) => v !== null && Number.isFinite(v));
  const xv = finite(xs);
  const yv = finite(ys.flat());
  let [x0, x1] = [Math.min(...xv), Math.max(...xv)];
  let [y0, y1] = [Math.min(...yv), Math.max(...yv)];
  if (y1 - y0 < 1e-12) { y0 -= 1; y1 += 1; }
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "11px monospace";
  ctx.fillText(y1.toPrecision(4), 2, pad + 4);
  ctx.fillText(y0.toPrecision(4), 2, h - pad);
  ctx.fillText(x0.toPrecision(3), pad, h - 4);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - 4);
  if (y0 < 0 && y1 > 0) {
    ctx.strokeStyle = "#ddd";
    ctx.beginPath();
    ctx.moveTo(pad, sy(0));
    ctx.lineTo(w - pad, sy(0));
    ctx.stroke();
  }
  return { sx, sy };
}

function polyline(ctx, xs, ys, sx, sy, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  let pen = false;
  xs.forEach((x, i) => {
    const y = ys[i];
    if (y === null || !Number.isFinite(y)) { pen = false; return; }
    if (pen) ctx.lineTo(sx(x), sy(y)); else ctx.moveTo(sx(x), sy(y));
    pen = true;
  });
  ctx.stroke();
}

function guarded(errId, f) {
  try {
    $(errId).textContent = "";
    f();
  } catch (e) {
    $(errId).textContent = String(e.message ?? e);
  }
}

function drawProfile() {
  guarded("fn-err", () => {
    const out = JSON.parse(circle_profile($("fn").value, num("cp-r"), 1024));
    const canvas = $("cp");
    const ctx = canvas.getContext("2d");
    const { sx, sy } = axes(ctx, canvas.width, canvas.height, out.theta, [out.values, [out.max ?? 0, out.mean ?? 0]], 40);
    polyline(ctx, out.theta, out.values, sx, sy, "#2c3e50");
    for (const [y, color] of [[out.max, COLORS.M], [out.mean, COLORS.C]]) {
      if (y === null) continue;
      polyline(ctx, [out.theta[0], out.theta[out.theta.length - 1]], [y, y], sx, sy, color);
    }
    const fmt = (v) => (v === null ? "∞" : v.toFixed(6));
    $("cp-info").textContent = `M = ${fmt(out.max)}  C = ${fmt(out.mean)}  (θ from 0 to 2π)`;
  });
}

function drawCurves() {
  guarded("fn-err", () => {
    const out = JSON.parse(radial_curves($("fn").value, num("rc-r0"), num("rc-rmax"), 120));
    const keys = Object.keys(COLORS);
    const canvas = $("rc");
    const ctx = canvas.getContext("2d");
    const { sx, sy } = axes(ctx, canvas.width, canvas.height, out.r, keys.map((k) => out[k]), 40);
    keys.forEach((k) => polyline(ctx, out.r, out[k], sx, sy, COLORS[k]));
    $("rc-legend").innerHTML = keys
      .map((k) => `<span style="color:${COLORS[k]}">${k.replace("_plus", "⁺").replace("_minus", "⁻")}</span>`)
      .join(" ");
  });
}

function probe() {
  guarded("fn-err", () => {
    const p = $("mt-p").value.trim();
    const pv = p === "inf" ? Infinity : parseFloat(p);
    const out = JSON.parse(main_theorem_probe($("fn").value, $("mt-e").value, num("mt-r"), num("mt-r0"), num("mt-k"), pv));
    if (out.ratio_infinite) out.ratio = "inf";
    $("mt-out").textContent = JSON.stringify(out, null, 2);
  });
}

await init();
$("reciprocal").onclick = () => {
  $("fn").value = '{"zeros": [], "poles": [{"re": 0, "im": 0, "mass": 1}], "scale": 1}';
  drawProfile();
  drawCurves();
};
$("cp-go").onclick = drawProfile;
$("rc-go").onclick = drawCurves;
$("mt-go").onclick = probe;
drawProfile();
drawCurves();
