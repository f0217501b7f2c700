import init, { Demo } from "./pkg/nodeclass_web.js";

const plot = document.getElementById("plot");
const ctx = plot.getContext("2d");
const traceCanvas = document.getElementById("trace");
const log = document.getElementById("log");

await init();
const demo = new Demo(80, 0.15, 6, 7n);
const xy = demo.coordinates();
const edges = demo.edge_list();
let scores = null;

const bounds = (() => {
  let [x0, x1, y0, y1] = [Infinity, -Infinity, Infinity, -Infinity];
  for (let i = 0; i < xy.length; i += 2) {
    x0 = Math.min(x0, xy[i]); x1 = Math.max(x1, xy[i]);
    y0 = Math.min(y0, xy[i + 1]); y1 = Math.max(y1, xy[i + 1]);
  }
  return { x0, x1, y0, y1 };
})();
const pad = 30;
const sx = (x) => pad + ((x - bounds.x0) / (bounds.x1 - bounds.x0)) * (plot.width - 2 * pad);
const sy = (y) => plot.height - pad - ((y - bounds.y0) / (bounds.y1 - bounds.y0)) * (plot.height - 2 * pad);
const ux = (px) => bounds.x0 + ((px - pad) / (plot.width - 2 * pad)) * (bounds.x1 - bounds.x0);
const uy = (py) => bounds.y0 + ((plot.height - pad - py) / (plot.height - 2 * pad)) * (bounds.y1 - bounds.y0);

function color(p) {
  if (p === null || Number.isNaN(p)) return "#bbb";
  const r = Math.round(220 * (1 - p) + 30 * p);
  const b = Math.round(30 * (1 - p) + 220 * p);
  return `rgb(${r},60,${b})`;
}

function draw() {
  ctx.clearRect(0, 0, plot.width, plot.height);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  for (let e = 0; e < edges.length; e += 2) {
    const a = edges[e], b = edges[e + 1];
    ctx.moveTo(sx(xy[2 * a]), sy(xy[2 * a + 1]));
    ctx.lineTo(sx(xy[2 * b]), sy(xy[2 * b + 1]));
  }
  ctx.stroke();
  const seeds = demo.seed_labels();
  for (let i = 0; i < demo.len(); i++) {
    const seeded = seeds[i] >= 0;
    ctx.fillStyle = seeded ? color(seeds[i]) : color(scores ? scores[i] : null);
    ctx.beginPath();
    ctx.arc(sx(xy[2 * i]), sy(xy[2 * i + 1]), seeded ? 7 : 4, 0, 2 * Math.PI);
    ctx.fill();
    if (seeded) {
      ctx.strokeStyle = "#000";
      ctx.stroke();
    }
  }
}

function report(f) {
  try {
    f();
  } catch (e) {
    log.textContent = String(e.message ?? e);
  }
}

function propagate() {
  report(() => {
    const method = document.getElementById("method").value;
    const t0 = performance.now();
    scores = demo.propagate(method);
    log.textContent = `${method}: ${(performance.now() - t0).toFixed(1)} ms`;
  });
  draw();
}

function drawTraces() {
  report(() => {
    const first = demo.trace("iterative");
    const second = demo.trace("second-order");
    const g = traceCanvas.getContext("2d");
    g.clearRect(0, 0, traceCanvas.width, traceCanvas.height);
    const all = [...first, ...second].filter((r) => r > 0);
    const lo = Math.log10(Math.min(...all)), hi = Math.log10(Math.max(...all));
    const len = Math.max(first.length, second.length);
    const line = (rs, stroke) => {
      g.strokeStyle = stroke;
      g.beginPath();
      rs.forEach((r, k) => {
        const x = (k / Math.max(1, len - 1)) * traceCanvas.width;
        const y = traceCanvas.height * (hi - Math.log10(Math.max(r, 1e-300))) / Math.max(1e-9, hi - lo);
        k === 0 ? g.moveTo(x, y) : g.lineTo(x, y);
      });
      g.stroke();
    };
    line(first, "#c33");
    line(second, "#33c");
    log.textContent = `iterations to tolerance\niterative (red): ${first.length}\nsecond-order (blue): ${second.length}`;
  });
}

function compareWalks() {
  report(() => {
    const walks = Math.max(1, parseInt(document.getElementById("walks").value, 10) || 1);
    const t0 = performance.now();
    const gap = demo.monte_carlo_gap(walks, 1n);
    log.textContent = `${walks} walks per node\nmax |simulated - exact| = ${gap.toFixed(4)}\n${(performance.now() - t0).toFixed(0)} ms`;
  });
}

plot.addEventListener("click", (ev) => {
  const rect = plot.getBoundingClientRect();
  const i = demo.nearest(ux(ev.clientX - rect.left), uy(ev.clientY - rect.top));
  demo.toggle_seed(i);
  propagate();
});
document.getElementById("propagate").addEventListener("click", propagate);
document.getElementById("method").addEventListener("change", propagate);
document.getElementById("traces").addEventListener("click", drawTraces);
document.getElementById("gap").addEventListener("click", compareWalks);

propagate();
