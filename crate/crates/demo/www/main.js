import init, { dgauss_histogram, lattice_scatter, mod_switch_residuals } from "./pkg/lwe_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function fail(out, e) {
  out.textContent = String(e);
  out.className = "out err";
}

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(0, h - 20);
  ctx.lineTo(w, h - 20);
  ctx.stroke();
}

function drawHistogram() {
  const out = $("h-out");
  try {
    const v = dgauss_histogram(num("h-c"), num("h-r"), num("h-n"), BigInt(num("h-seed")));
    const rows = (v.length - 1) / 3;
    const canvas = $("h-canvas");
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    axes(ctx, w, h);
    let top = 0;
    for (let i = 0; i < rows; i++) top = Math.max(top, v[3 * i + 1], v[3 * i + 2]);
    const bw = w / rows;
    const y = (p) => h - 20 - (p / top) * (h - 30);
    let tv = 0;
    for (let i = 0; i < rows; i++) {
      const [x, seen, exact] = [v[3 * i], v[3 * i + 1], v[3 * i + 2]];
      tv += Math.abs(seen - exact) / 2;
      ctx.fillStyle = "#7aa6d6";
      ctx.fillRect(i * bw + 1, y(seen), bw - 2, h - 20 - y(seen));
      ctx.fillStyle = "#c33";
      ctx.fillRect(i * bw + 1, y(exact) - 1, bw - 2, 2);
      if (rows <= 40 || i % Math.ceil(rows / 40) === 0) {
        ctx.fillStyle = "#333";
        ctx.fillText(x.toFixed(2), i * bw + 2, h - 5);
      }
    }
    out.className = "out";
    out.textContent = `support ${rows} points, distance to exact pmf ${tv.toFixed(5)}, mean iterations ${v[v.length - 1].toFixed(4)}`;
  } catch (e) {
    fail(out, e);
  }
}

function drawScatter() {
  const out = $("l-out");
  try {
    const v = lattice_scatter(
      num("l-b11"), num("l-b12"), num("l-b21"), num("l-b22"),
      num("l-r"), num("l-c1"), num("l-c2"), num("l-n"), BigInt(num("l-seed")),
    );
    const n = (v.length - 1) / 2;
    const canvas = $("l-canvas");
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    ctx.clearRect(0, 0, w, h);
    let span = 1;
    for (let i = 0; i < 2 * n; i++) span = Math.max(span, Math.abs(v[i]));
    const s = (w / 2 - 10) / span;
    const counts = new Map();
    for (let i = 0; i < n; i++) {
      const key = `${v[2 * i]},${v[2 * i + 1]}`;
      counts.set(key, (counts.get(key) || 0) + 1);
    }
    let most = 1;
    for (const c of counts.values()) most = Math.max(most, c);
    for (const [key, c] of counts) {
      const [x, y] = key.split(",").map(Number);
      ctx.fillStyle = `rgba(40, 80, 160, ${0.15 + 0.85 * c / most})`;
      ctx.beginPath();
      ctx.arc(w / 2 + x * s, h / 2 - y * s, 2 + 4 * Math.sqrt(c / most), 0, 2 * Math.PI);
      ctx.fill();
    }
    out.className = "out";
    out.textContent = `${n} points on ${counts.size} distinct lattice points, acceptance rate ${v[v.length - 1].toFixed(4)}`;
  } catch (e) {
    fail(out, e);
  }
}

function drawResiduals() {
  const out = $("s-out");
  try {
    const v = mod_switch_residuals(num("s-n"), num("s-q"), num("s-qt"), num("s-a"), num("s-m"), BigInt(num("s-seed")));
    const [predicted, measured, r] = [v[0], v[1], v[2]];
    const res = v.subarray(3);
    const canvas = $("s-canvas");
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    axes(ctx, w, h);
    const lim = Math.min(0.5, 5 * Math.max(predicted, measured));
    const bins = 80;
    const counts = new Array(bins).fill(0);
    for (const x of res) {
      const b = Math.floor(((x + lim) / (2 * lim)) * bins);
      if (b >= 0 && b < bins) counts[b]++;
    }
    const width = (2 * lim) / bins;
    const density = counts.map((c) => c / (res.length * width));
    const gauss = (x) => Math.exp(-x * x / (2 * predicted * predicted)) / (predicted * Math.sqrt(2 * Math.PI));
    const top = Math.max(...density, gauss(0));
    const bw = w / bins;
    const y = (d) => h - 20 - (d / top) * (h - 30);
    ctx.fillStyle = "#7aa6d6";
    density.forEach((d, i) => ctx.fillRect(i * bw + 1, y(d), bw - 2, h - 20 - y(d)));
    ctx.strokeStyle = "#c33";
    ctx.beginPath();
    for (let px = 0; px <= w; px++) {
      const x = -lim + (2 * lim * px) / w;
      if (px === 0) ctx.moveTo(px, y(gauss(x)));
      else ctx.lineTo(px, y(gauss(x)));
    }
    ctx.stroke();
    out.className = "out";
    out.textContent =
      `r = ${r.toPrecision(6)}\npredicted sd ${predicted.toPrecision(6)}, measured sd ${measured.toPrecision(6)} ` +
      `(ratio ${(measured / predicted).toFixed(4)})`;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("h-go").addEventListener("click", drawHistogram);
$("l-go").addEventListener("click", drawScatter);
$("s-go").addEventListener("click", drawResiduals);
drawHistogram();
drawScatter();
drawResiduals();
