import init, { fan_chart, qlr_scan, acf_explorer } from "./pkg/econokit_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const PAD = { l: 70, r: 15, t: 15, b: 30 };

function frame(canvas, xs, ymin, ymax) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width - PAD.l - PAD.r;
  const h = canvas.height - PAD.t - PAD.b;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const x = (i) => PAD.l + (xs <= 1 ? 0 : (i / (xs - 1)) * w);
  const y = (v) => PAD.t + (1 - (v - ymin) / (ymax - ymin || 1)) * h;
  ctx.strokeStyle = "#999";
  ctx.strokeRect(PAD.l, PAD.t, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  for (let k = 0; k <= 4; k++) {
    const v = ymin + (k / 4) * (ymax - ymin);
    ctx.fillText(v.toPrecision(3), 4, y(v) + 4);
  }
  return { ctx, x, y };
}

function line(ctx, pts, color, width = 1.5) {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  pts.forEach(([px, py], i) => (i ? ctx.lineTo(px, py) : ctx.moveTo(px, py)));
  ctx.stroke();
}

function labels(ctx, x, names, every) {
  ctx.fillStyle = "#555";
  names.forEach((n, i) => {
    if (i % every === 0) ctx.fillText(n, x(i) - 14, ctx.canvas.height - 10);
  });
}

function show(id, f) {
  try {
    $(id + "-out").classList.remove("err");
    f();
  } catch (e) {
    $(id + "-out").textContent = String(e);
    $(id + "-out").classList.add("err");
  }
}

function drawFan() {
  show("fc", () => {
    const d = JSON.parse(fan_chart(num("fc-seed"), num("fc-lags"), num("fc-h")));
    const n = d.actual.length, H = d.forecast.length;
    const all = d.actual.concat(d.lo95, d.hi95);
    const { ctx, x, y } = frame($("fc"), n + H, Math.min(...all), Math.max(...all));
    ctx.fillStyle = "rgba(40, 110, 200, 0.18)";
    ctx.beginPath();
    ctx.moveTo(x(n - 1), y(d.actual[n - 1]));
    d.hi95.forEach((v, h) => ctx.lineTo(x(n + h), y(v)));
    for (let h = H - 1; h >= 0; h--) ctx.lineTo(x(n + h), y(d.lo95[h]));
    ctx.closePath();
    ctx.fill();
    line(ctx, d.actual.map((v, i) => [x(i), y(v)]), "#222");
    line(ctx, [[x(n - 1), y(d.actual[n - 1])]].concat(d.forecast.map((v, h) => [x(n + h), y(v)])), "#1c5fb0", 2);
    labels(ctx, x, d.dates.concat(d.forecast_dates), 16);
    $("fc-out").textContent = d.forecast_dates
      .map((q, h) => `${q.padEnd(9)} ${d.forecast[h].toExponential(5)}  ± ${(d.hi95[h] - d.forecast[h]).toExponential(3)}`)
      .join("\n");
  });
}

function drawQlr() {
  $("q-size-val").textContent = $("q-size").value;
  show("q", () => {
    const d = JSON.parse(qlr_scan(num("q-seed"), num("q-lags"), num("q-size")));
    const top = Math.max(d.qlr, d.critical ? d.critical[2] : 0) * 1.1;
    const { ctx, x, y } = frame($("q"), d.f.length, 0, top);
    if (d.critical) {
      ["#c9a400", "#d57500", "#c00"].forEach((c, k) => {
        ctx.setLineDash([4, 4]);
        line(ctx, [[x(0), y(d.critical[k])], [x(d.f.length - 1), y(d.critical[k])]], c, 1);
      });
      ctx.setLineDash([]);
    }
    line(ctx, d.f.map((v, i) => [x(i), y(v)]), "#1c5fb0", 2);
    labels(ctx, x, d.dates, 8);
    const crit = d.critical ? `10%/5%/1% critical ${d.critical.join(" / ")}` : `no tabulated critical values for q = ${d.q}`;
    $("q-out").textContent = `QLR = ${d.qlr.toFixed(4)} at ${d.break_at} (q = ${d.q}); ${crit}`;
  });
}

function drawAcf() {
  $("a-phi-val").textContent = $("a-phi").value;
  show("a", () => {
    const d = JSON.parse(acf_explorer(num("a-seed"), num("a-phi"), num("a-len"), 20));
    const { ctx, x, y } = frame($("a"), d.rho.length + 1, -1, 1);
    ctx.setLineDash([4, 4]);
    line(ctx, [[x(0), y(d.band)], [x(d.rho.length), y(d.band)]], "#c00", 1);
    line(ctx, [[x(0), y(-d.band)], [x(d.rho.length), y(-d.band)]], "#c00", 1);
    ctx.setLineDash([]);
    line(ctx, [[x(0), y(0)], [x(d.rho.length), y(0)]], "#999", 1);
    d.rho.forEach((r, i) => line(ctx, [[x(i + 1), y(0)], [x(i + 1), y(r)]], "#1c5fb0", 4));
    labels(ctx, x, ["0"].concat(d.lags.map(String)), 2);
    const phi = num("a-phi");
    $("a-out").textContent = `rho_1 = ${d.rho[0].toFixed(4)} (population ${phi.toFixed(2)}); band ±${d.band.toFixed(4)}`;
  });
}

await init();
for (const id of ["fc-seed", "fc-lags", "fc-h"]) $(id).addEventListener("input", drawFan);
for (const id of ["q-seed", "q-lags", "q-size"]) $(id).addEventListener("input", drawQlr);
for (const id of ["a-seed", "a-phi", "a-len"]) $(id).addEventListener("input", drawAcf);
drawFan();
drawQlr();
drawAcf();
