// Demo page logic: wires the sliders to the wasm exports and draws the
// returned curves on plain canvases. No framework, no dependencies.

import init, {
  dispersion_json,
  pattern_json,
  design_json,
  example_code_list,
} from "../pkg/dma_wasm.js";

const $ = (id) => document.getElementById(id);

// ---- tiny canvas line-plot helper -----------------------------------------

function plot(canvas, series, opts) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  const m = { l: 56, r: 12, t: 18, b: 30 };
  ctx.clearRect(0, 0, W, H);

  const xs = series[0].x;
  const xmin = opts.xmin ?? Math.min(...xs);
  const xmax = opts.xmax ?? Math.max(...xs);
  let ymin = opts.ymin ?? Infinity;
  let ymax = opts.ymax ?? -Infinity;
  if (opts.ymin === undefined || opts.ymax === undefined) {
    for (const s of series) {
      for (const v of s.y) {
        if (Number.isFinite(v)) {
          if (v < ymin) ymin = v;
          if (v > ymax) ymax = v;
        }
      }
    }
    const pad = 0.06 * (ymax - ymin || 1);
    ymin -= pad; ymax += pad;
  }
  const px = (x) => m.l + ((x - xmin) / (xmax - xmin)) * (W - m.l - m.r);
  const py = (y) => H - m.b - ((y - ymin) / (ymax - ymin)) * (H - m.t - m.b);

  // shaded bands (e.g. anomalous-dispersion region)
  for (const [lo, hi] of opts.bands ?? []) {
    ctx.fillStyle = "rgba(11, 114, 133, 0.10)";
    ctx.fillRect(px(lo), m.t, px(hi) - px(lo), H - m.t - m.b);
  }

  // axes + grid
  ctx.strokeStyle = "#dee2e6";
  ctx.fillStyle = "#495057";
  ctx.font = "11px system-ui";
  ctx.textAlign = "center";
  const xticks = opts.xticks ?? 5;
  for (let i = 0; i <= xticks; i++) {
    const x = xmin + (i / xticks) * (xmax - xmin);
    ctx.beginPath(); ctx.moveTo(px(x), m.t); ctx.lineTo(px(x), H - m.b); ctx.stroke();
    ctx.fillText(x.toFixed(opts.xdp ?? 1), px(x), H - m.b + 14);
  }
  ctx.textAlign = "right";
  for (let i = 0; i <= 4; i++) {
    const y = ymin + (i / 4) * (ymax - ymin);
    ctx.beginPath(); ctx.moveTo(m.l, py(y)); ctx.lineTo(W - m.r, py(y)); ctx.stroke();
    ctx.fillText(y.toFixed(opts.ydp ?? 1), m.l - 6, py(y) + 4);
  }
  if (opts.zeroLine && ymin < 0 && ymax > 0) {
    ctx.strokeStyle = "#adb5bd";
    ctx.beginPath(); ctx.moveTo(m.l, py(0)); ctx.lineTo(W - m.r, py(0)); ctx.stroke();
  }

  // curves
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i < s.x.length; i++) {
      if (!Number.isFinite(s.y[i])) { pen = false; continue; }
      const X = px(s.x[i]), Y = py(s.y[i]);
      if (pen) ctx.lineTo(X, Y); else { ctx.moveTo(X, Y); pen = true; }
    }
    ctx.stroke();
  }

  // labels and legend
  ctx.fillStyle = "#212529";
  ctx.font = "12px system-ui";
  ctx.textAlign = "left";
  ctx.fillText(opts.xlabel ?? "", m.l, H - 6);
  ctx.fillText(opts.title ?? "", m.l, 12);
  let lx = W - m.r - 10;
  ctx.textAlign = "right";
  for (const s of [...series].reverse()) {
    if (!s.label) continue;
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, lx, 12);
    lx -= ctx.measureText(s.label).width + 18;
  }
}

function markers(canvas, angles, color) {
  // small vertical ticks at given x positions, drawn over the last plot
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  const m = { l: 56, r: 12, t: 18, b: 30 };
  ctx.strokeStyle = color;
  ctx.setLineDash([4, 3]);
  for (const a of angles) {
    const x = m.l + ((a + 90) / 180) * (W - m.l - m.r);
    ctx.beginPath(); ctx.moveTo(x, m.t); ctx.lineTo(x, H - m.b); ctx.stroke();
  }
  ctx.setLineDash([]);
}

const fmt = (v, dp = 2) => (v === null || v === undefined ? "–" : v.toFixed(dp));

// ---- panel 1: dispersion ---------------------------------------------------

function refreshDispersion() {
  $("f0v").textContent = $("f0").value;
  $("gammav").textContent = $("gamma").value;
  $("couplingv").textContent = $("coupling").value;
  try {
    const d = JSON.parse(dispersion_json(+$("f0").value, +$("gamma").value,
                                         +$("coupling").value, 801));
    plot($("dispS21"), [{ x: d.f_ghz, y: d.s21_db, color: "#0b7285", label: "|S21| dB" }],
         { title: "transmission magnitude", xlabel: "frequency / GHz", bands: d.bands_ghz,
           zeroLine: false, ydp: 1 });
    plot($("dispTau"), [{ x: d.f_ghz, y: d.tau_g_ps, color: "#e8590c", label: "group delay ps" }],
         { title: "group delay", xlabel: "frequency / GHz", bands: d.bands_ghz,
           zeroLine: true, ydp: 0 });
    plot($("dispIndex"), [
      { x: d.f_ghz, y: d.n, color: "#0b7285", label: "n" },
      { x: d.f_ghz, y: d.n_g.map((v) => v / 100), color: "#862e9c", label: "n_g / 100" },
    ], { title: "retrieved index and group index", xlabel: "frequency / GHz",
         bands: d.bands_ghz, zeroLine: true, ydp: 2 });
    const band = d.bands_ghz.length
      ? `anomalous band ${fmt(d.bands_ghz[0][0], 3)} – ${fmt(d.bands_ghz[0][1], 3)} GHz`
      : "no anomalous band on this grid";
    $("dispInfo").textContent =
      `transmission dip at ${fmt(d.dip_ghz, 3)} GHz · ${band} · ` +
      `min group delay ${fmt(Math.min(...d.tau_g_ps), 1)} ps`;
    $("dispInfo").classList.remove("error");
  } catch (e) {
    $("dispInfo").textContent = String(e);
    $("dispInfo").classList.add("error");
  }
}

// ---- panel 2: beam patterns ------------------------------------------------

function refreshPattern() {
  $("pfreqv").textContent = (+$("pfreq").value).toFixed(1);
  try {
    const p = JSON.parse(pattern_json($("code").value, +$("pfreq").value));
    plot($("patternPlot"),
         [{ x: p.theta_deg, y: p.mag_db, color: "#0b7285", label: "normalized |E| dB" }],
         { title: `pattern, code ${$("code").value} at ${(+$("pfreq").value).toFixed(1)} GHz`,
           xlabel: "observation angle / deg", xmin: -90, xmax: 90, ymin: -42, ymax: 2,
           xticks: 6, xdp: 0, ydp: 0 });
    markers($("patternPlot"), [p.peak_angle_deg], "#e8590c");
    $("patternInfo").textContent =
      `peak ${fmt(p.peak_angle_deg)}° · beamwidth ${fmt(p.hpbw_deg)}° · ` +
      `sidelobe ${fmt(p.sll_db)} dB · directivity ${fmt(p.directivity_db, 1)} dB`;
    $("patternInfo").classList.remove("error");
  } catch (e) {
    $("patternInfo").textContent = String(e);
    $("patternInfo").classList.add("error");
  }
}

// ---- panel 3: holographic steering ------------------------------------------

function refreshDesign() {
  $("thetav").textContent = $("theta").value;
  $("dfreqv").textContent = (+$("dfreq").value).toFixed(1);
  try {
    const theta = +$("theta").value;
    const freq = +$("dfreq").value;
    const d = JSON.parse(design_json(theta, freq, $("oracle").checked));
    const p = JSON.parse(pattern_json(d.code, freq));
    const series = [{ x: p.theta_deg, y: p.mag_db, color: "#0b7285",
                      label: "synthesized code" }];
    if (d.oracle_code && d.oracle_code !== d.code) {
      const po = JSON.parse(pattern_json(d.oracle_code, freq));
      series.push({ x: po.theta_deg, y: po.mag_db, color: "#862e9c", label: "oracle code" });
    }
    plot($("designPlot"), series,
         { title: `steered pattern, target ${theta}°`, xlabel: "observation angle / deg",
           xmin: -90, xmax: 90, ymin: -42, ymax: 2, xticks: 6, xdp: 0, ydp: 0 });
    markers($("designPlot"), [theta], "#e8590c");
    let text = `code ${d.code} · gain ${fmt(d.gain_db, 2)} dB · beam at ${fmt(p.peak_angle_deg)}°`;
    if (d.oracle_code) {
      text += `\noracle ${d.oracle_code} · gain ${fmt(d.oracle_gain_db, 2)} dB · ` +
              `gap ${fmt(d.gap_db, 2)} dB`;
    }
    $("designInfo").textContent = text;
    $("designInfo").classList.remove("error");
  } catch (e) {
    $("designInfo").textContent = String(e);
    $("designInfo").classList.add("error");
  }
}

// ---- wiring ------------------------------------------------------------------

async function main() {
  await init();
  for (const id of ["f0", "gamma", "coupling"]) $(id).addEventListener("input", refreshDispersion);
  for (const id of ["code", "pfreq"]) $(id).addEventListener("input", refreshPattern);
  for (const id of ["theta", "dfreq", "oracle"]) $(id).addEventListener("input", refreshDesign);

  const presets = $("presets");
  for (const code of example_code_list().split("\n")) {
    const b = document.createElement("button");
    b.textContent = code;
    b.addEventListener("click", () => { $("code").value = code; refreshPattern(); });
    presets.appendChild(b);
  }

  refreshDispersion();
  refreshPattern();
  refreshDesign();
}

main();
