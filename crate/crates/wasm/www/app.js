import init, { curve, run_algorithm, lower_bound_surface } from "./pkg/testsched_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function show(id, text, isError = false) {
  const el = $(id);
  el.textContent = text;
  el.className = isError ? "out err" : "out";
}

function guarded(outId, fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      show(outId, String(e.message || e), true);
    }
  };
}

function axes(ctx, w, h, pad, xs, ys, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  const X = (x) => pad + ((x - xs[0]) / (xs[1] - xs[0])) * (w - 2 * pad);
  const Y = (y) => h - pad - ((y - ys[0]) / (ys[1] - ys[0])) * (h - 2 * pad);
  for (let i = 0; i <= 5; i++) {
    const x = xs[0] + ((xs[1] - xs[0]) * i) / 5;
    const y = ys[0] + ((ys[1] - ys[0]) * i) / 5;
    ctx.fillText(x.toFixed(2), X(x) - 12, h - pad + 16);
    ctx.fillText(y.toFixed(2), 4, Y(y) + 4);
  }
  ctx.fillText(xlabel, w - pad - 20, h - 6);
  ctx.fillText(ylabel, pad + 4, pad - 8);
  return { X, Y };
}

function plotCurve() {
  const data = JSON.parse(curve(num("c-from"), num("c-to"), 400));
  const c = $("c-canvas");
  const ctx = c.getContext("2d");
  const ys = [1, Math.max(...data.points.map((p) => p.ratio)) + 0.05];
  const { X, Y } = axes(ctx, c.width, c.height, 40, [data.points[0].p_bar, data.points.at(-1).p_bar], ys, "p̄", "ratio");
  ctx.strokeStyle = "#2b6cb0";
  ctx.lineWidth = 2;
  ctx.beginPath();
  data.points.forEach((p, i) => (i ? ctx.lineTo(X(p.p_bar), Y(p.ratio)) : ctx.moveTo(X(p.p_bar), Y(p.ratio))));
  ctx.stroke();
  ctx.lineWidth = 1;
  ctx.setLineDash([4, 4]);
  ctx.strokeStyle = "#999";
  for (const t of [data.t1, data.t2]) {
    ctx.beginPath();
    ctx.moveTo(X(t), Y(ys[0]));
    ctx.lineTo(X(t), Y(ys[1]));
    ctx.stroke();
  }
  ctx.setLineDash([]);
  show("c-out", `T1 = ${data.t1.toFixed(6)}  T2 = ${data.t2.toFixed(6)}  max ratio ${data.max_ratio.toFixed(6)} at p̄ = ${data.max_p_bar.toFixed(4)}`);
}

function parseJobs(text) {
  return text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l)
    .map((l) => {
      const [upper, proc] = l.split(/[\s,]+/).map(Number);
      if (!Number.isFinite(upper) || !Number.isFinite(proc)) throw new Error(`bad line: ${l}`);
      return { upper, proc };
    });
}

const COLORS = { test: "#f0b429", exec_tested: "#2b6cb0", exec_untested: "#9b2c2c" };

function gantt(ctx, steps, y, scale, pad) {
  for (const s of steps) {
    const x = pad + s.t * scale;
    const w = Math.max(s.dur * scale, 2);
    ctx.fillStyle = COLORS[s.kind];
    ctx.fillRect(x, y, w, 40);
    ctx.strokeStyle = "#fff";
    ctx.strokeRect(x, y, w, 40);
    if (w > 14) {
      ctx.fillStyle = "#fff";
      ctx.fillText(String(s.job), x + 3, y + 24);
    }
  }
}

function runSchedule() {
  const jobs = parseJobs($("s-jobs").value);
  const r = JSON.parse(run_algorithm($("s-alg").value, JSON.stringify(jobs), Number($("s-seed").value) >>> 0));
  const c = $("s-canvas");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  ctx.font = "12px system-ui";
  const end = (steps) => steps.reduce((m, s) => Math.max(m, s.t + s.dur), 0);
  const pad = 50;
  const scale = (c.width - pad - 10) / Math.max(end(r.steps), end(r.opt_steps), 1e-9);
  ctx.fillStyle = "#222";
  ctx.fillText("ALG", 8, 44);
  ctx.fillText("OPT", 8, 114);
  gantt(ctx, r.steps, 20, scale, pad);
  gantt(ctx, r.opt_steps, 90, scale, pad);
  show("s-out", `${r.algorithm}  objective ${r.objective}\nALG ${r.alg_cost.toFixed(4)}  OPT ${r.opt_cost.toFixed(4)}  ratio ${r.ratio.toFixed(4)}`);
}

function randomJobs() {
  const pBar = (1.5 + Math.random() * 2).toFixed(2);
  const lines = [];
  for (let i = 0; i < 8; i++) {
    const p = Math.random() < 0.4 ? 0 : (Math.random() * pBar).toFixed(2);
    lines.push(`${pBar} ${p}`);
  }
  $("s-jobs").value = lines.join("\n");
  runSchedule();
}

function heat(t) {
  const r = Math.round(255 * Math.min(1, 2 * t));
  const b = Math.round(255 * Math.min(1, 2 * (1 - t)));
  return `rgb(${r},${Math.round(80 + 100 * (1 - Math.abs(2 * t - 1)))},${b})`;
}

function plotSurface() {
  const nx = 60;
  const ny = 40;
  const s = JSON.parse(lower_bound_surface(num("l-d0"), num("l-d1"), num("l-p0"), num("l-p1"), nx, ny));
  const c = $("l-canvas");
  const ctx = c.getContext("2d");
  const pad = 40;
  const { X, Y } = axes(ctx, c.width, c.height, pad, [s.deltas[0], s.deltas.at(-1)], [s.p_bars[0], s.p_bars.at(-1)], "δ", "p̄");
  const all = s.values.flat();
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const cw = (c.width - 2 * pad) / nx;
  const ch = (c.height - 2 * pad) / ny;
  s.values.forEach((row, i) =>
    row.forEach((v, j) => {
      ctx.fillStyle = heat((v - lo) / (hi - lo || 1));
      ctx.fillRect(X(s.deltas[j]) - cw / 2, Y(s.p_bars[i]) - ch / 2, cw + 1, ch + 1);
    }),
  );
  ctx.strokeStyle = "#000";
  ctx.beginPath();
  ctx.arc(X(s.best_delta), Y(s.best_p_bar), 5, 0, 2 * Math.PI);
  ctx.stroke();
  show("l-out", `range ${lo.toFixed(5)} to ${hi.toFixed(5)}\nmaximum ${s.best_value.toFixed(6)} at δ = ${s.best_delta.toFixed(4)}, p̄ = ${s.best_p_bar.toFixed(4)}`);
}

await init();
$("c-run").onclick = guarded("c-out", plotCurve);
$("s-run").onclick = guarded("s-out", runSchedule);
$("s-random").onclick = guarded("s-out", randomJobs);
$("l-run").onclick = guarded("l-out", plotSurface);
guarded("c-out", plotCurve)();
guarded("s-out", runSchedule)();
guarded("l-out", plotSurface)();
