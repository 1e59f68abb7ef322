import init, { heatmap, pie_curve, optimum, count_distributions } from "./pkg/pll_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const M = { l: 60, r: 20, t: 15, b: 40 };

function guard(msg, fn) {
  return () => {
    $(msg).textContent = "";
    $(msg).className = "";
    try {
      fn();
    } catch (e) {
      $(msg).textContent = String(e.message ?? e);
      $(msg).className = "err";
    }
  };
}

// Maps [0, 1] to a blue-to-yellow ramp.
function color(t) {
  const r = Math.round(255 * Math.min(1, Math.max(0, 1.6 * t - 0.4)));
  const g = Math.round(255 * Math.min(1, t * 1.2));
  const b = Math.round(255 * Math.max(0, 0.8 - t));
  return `rgb(${r},${g},${b})`;
}

function axes(ctx, w, h, xlabel, ylabel, xr, yr, logx, logy) {
  ctx.strokeStyle = "#000";
  ctx.fillStyle = "#000";
  ctx.strokeRect(M.l, M.t, w - M.l - M.r, h - M.t - M.b);
  ctx.font = "12px sans-serif";
  ctx.fillText(xlabel, w / 2 - 20, h - 8);
  ctx.save();
  ctx.translate(14, h / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, -20, 0);
  ctx.restore();
  const fmt = (v, log) => (log ? `1e${Math.round(v)}` : v.toPrecision(3));
  ctx.fillText(fmt(xr[0], logx), M.l - 10, h - M.b + 14);
  ctx.fillText(fmt(xr[1], logx), w - M.r - 30, h - M.b + 14);
  ctx.fillText(fmt(yr[0], logy), 18, h - M.b);
  ctx.fillText(fmt(yr[1], logy), 18, M.t + 10);
}

function drawHeatmap() {
  const n = Math.round(num("hm-n"));
  const ns = [num("hm-ns-min"), num("hm-ns-max")];
  const nz = [num("hm-nz-min"), num("hm-nz-max")];
  const t0 = performance.now();
  const v = heatmap($("hm-model").value, ns[0], ns[1], n, nz[0], nz[1], n);
  const finite = Array.from(v).filter(Number.isFinite).map(Math.log10);
  const lo = Math.min(...finite), hi = Math.max(...finite);
  const c = $("hm"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const pw = (c.width - M.l - M.r) / n, ph = (c.height - M.t - M.b) / n;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const x = v[i * n + j];
      ctx.fillStyle = Number.isFinite(x) ? color((Math.log10(x) - lo) / (hi - lo || 1)) : "#888";
      ctx.fillRect(M.l + j * pw, c.height - M.b - (i + 1) * ph, pw + 0.5, ph + 0.5);
    }
  }
  axes(ctx, c.width, c.height, "n_s", "noise", ns.map(Math.log10), nz.map(Math.log10), true, true);
  $("hm-msg").textContent =
    `PIE ${(10 ** lo).toPrecision(3)} to ${(10 ** hi).toPrecision(3)} bits/photon, ` +
    `${Math.round(performance.now() - t0)} ms`;
}

function drawCurve() {
  const model = $("cv-model").value;
  const n_s = num("cv-ns"), noise = num("cv-nz"), top = num("cv-max");
  const points = 300;
  const v = pie_curve(model, n_s, noise, 1e-6, top, points);
  const nf = v.slice(0, points), pie = v.slice(points);
  const [nfStar, mStar, pieStar] = optimum(model, n_s, noise, top);
  const c = $("cv"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const xr = [Math.log10(nf[0]), Math.log10(nf[points - 1])];
  const ymax = Math.max(...pie, pieStar) * 1.05;
  const X = (x) => M.l + ((Math.log10(x) - xr[0]) / (xr[1] - xr[0])) * (c.width - M.l - M.r);
  const Y = (y) => c.height - M.b - (y / ymax) * (c.height - M.t - M.b);
  ctx.strokeStyle = "#1f5fbf";
  ctx.beginPath();
  nf.forEach((x, i) => (i ? ctx.lineTo(X(x), Y(pie[i])) : ctx.moveTo(X(x), Y(pie[i]))));
  ctx.stroke();
  ctx.fillStyle = "#c33";
  ctx.beginPath();
  ctx.arc(X(nfStar), Y(pieStar), 4, 0, 2 * Math.PI);
  ctx.fill();
  axes(ctx, c.width, c.height, "n_f", "PIE [bits/photon]", xr, [0, ymax], true, false);
  $("cv-msg").textContent =
    `optimum n_f = ${nfStar.toPrecision(4)}, M = ${mStar.toPrecision(4)}, PIE = ${pieStar.toPrecision(5)}`;
}

function drawCounts() {
  const v = count_distributions(num("pk-nf"), num("pk-nn"));
  const len = v.length / 2;
  const p = v.slice(0, len), q = v.slice(len);
  const shown = Math.min(len, 60);
  const c = $("pk"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const ymax = Math.max(...p.slice(0, shown), ...q.slice(0, shown)) * 1.05;
  const bw = (c.width - M.l - M.r) / shown;
  const Y = (y) => (y / ymax) * (c.height - M.t - M.b);
  for (let k = 0; k < shown; k++) {
    const x = M.l + k * bw;
    ctx.fillStyle = "#1f5fbf";
    ctx.fillRect(x, c.height - M.b - Y(p[k]), bw * 0.45, Y(p[k]));
    ctx.fillStyle = "#d08a1a";
    ctx.fillRect(x + bw * 0.45, c.height - M.b - Y(q[k]), bw * 0.45, Y(q[k]));
  }
  axes(ctx, c.width, c.height, "k", "probability", [0, shown - 1], [0, ymax], false, false);
  $("pk-msg").textContent = `blue: pulse p_k, orange: empty q_k, ${len} counts kept`;
}

await init();
$("hm-go").onclick = guard("hm-msg", drawHeatmap);
$("cv-go").onclick = guard("cv-msg", drawCurve);
$("pk-go").onclick = guard("pk-msg", drawCounts);
guard("cv-msg", drawCurve)();
guard("pk-msg", drawCounts)();
