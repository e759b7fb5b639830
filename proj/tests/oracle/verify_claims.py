# Copyright 2026 The CARFAC Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Sanity-checks the reference model against the documented behaviors.

Run before regenerating golden data; everything printed here should PASS.
"""

import math
import sys
import time

import numpy as np

import carfac_ref as cr

FS = 22050.0
PASSES = []


def check(name, ok, detail=""):
    PASSES.append(ok)
    print("[%s] %s %s" % ("PASS" if ok else "FAIL", name, detail))


def nearest_channel(pole_freqs, freq):
    return int(np.argmin(np.abs(pole_freqs - freq)))


def main():
    t0 = time.time()
    params = cr.default_design(FS)
    model = cr.design_and_init(params)
    n_ch = model.n_ch
    pf = model.pole_freqs

    # 1. channel count
    check("channel count 71", n_ch == 71, "n_ch=%d" % n_ch)
    ch3k = nearest_channel(pf, 3000.0)
    ch300 = nearest_channel(pf, 300.0)
    print("   CF[%d]=%.1f (3k probe), CF[%d]=%.1f (300 probe)" % (ch3k, pf[ch3k], ch300, pf[ch300]))

    # 2. parabola accuracy
    cc = model.car_coeffs
    u = np.linspace(0, 1, 1001)
    worst = 0.0
    for ch in range(n_ch):
        exact = cr.stage_dc_gain(cc.r1[ch], cc.zr[ch], cc.a0[ch], cc.c0[ch], cc.h[ch], u)
        fit = cc.gp0[ch] + cc.gp1[ch] * u + cc.gp2[ch] * u * u
        err_db = np.max(np.abs(20 * np.log10(fit / exact)))
        worst = max(worst, err_db)
    check("parabola <= 0.01 dB", worst <= 0.01, "worst=%.5f dB" % worst)

    # 3. AC coupler half-power frequency (single-channel filter probe)
    def coupler_gain(freq):
        n = int(FS)  # 1 s
        x = np.sin(2 * math.pi * freq * np.arange(n) / FS)
        s = 0.0
        y = np.zeros(n)
        for i in range(n):
            d = x[i] - s
            s += cc.ac_coeff * d
            y[i] = d
        tail = slice(n // 2, n)
        return cr.goertzel_amplitude(y[tail], freq, FS) / cr.goertzel_amplitude(
            x[tail], freq, FS
        )

    lo, hi = 5.0, 60.0
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if coupler_gain(mid) < 1 / math.sqrt(2):
            lo = mid
        else:
            hi = mid
    f_half = 0.5 * (lo + hi)
    check("AC corner 20 +- 1 Hz", abs(f_half - 20) <= 1, "f_half=%.3f" % f_half)
    g20 = coupler_gain(20.0)
    check("AC 20 Hz gain 0.707 +- 1%", abs(g20 - 1 / math.sqrt(2)) <= 0.0071, "g=%.5f" % g20)

    # 4. synchrony two_cap vs one_cap
    def synchrony_ratio(freq, burst, total, ch):
        amps = {}
        for variant in (cr.TWO_CAP, cr.ONE_CAP):
            p = cr.default_design(FS)
            p.ihc.variant = variant
            m = cr.design_and_init(p)
            x = cr.toneburst(freq, burst, -40.0, FS, total)
            out = cr.run_segment(m, x[np.newaxis, :])
            nap = out.nap[0][:, ch]
            w0 = int(round(burst * FS * 0.5))
            w1 = int(round(burst * FS))
            ac, _ = cr.ac_dc_components(nap[w0:w1], freq, FS)
            amps[variant] = ac
        return amps[cr.TWO_CAP] / amps[cr.ONE_CAP]

    r3k = synchrony_ratio(3000.0, 0.010, 0.025, ch3k)
    r300 = synchrony_ratio(300.0, 0.050, 0.080, ch300)
    check("synchrony ratio 3k in [0.35,0.65]", 0.35 <= r3k <= 0.65, "r=%.3f" % r3k)
    check("synchrony ratio 300 > 0.8", r300 > 0.8, "r=%.3f" % r300)

    # 5. compression: peak BM response to a CF tone, -60 -> -20 dBFS,
    # grows < 20 dB (peak = max over channels of steady-state RMS)
    probe = pf[ch3k]

    def steady_bm_rms(level, ch, freq, health=None, dur=0.3, win=0.1):
        p = cr.default_design(FS)
        m = cr.design_and_init(p)
        if health is not None:
            m.ohc_health = health
        x = cr.tone(freq, level, dur, FS, ramp=0.005)
        out = cr.run_segment(m, x[np.newaxis, :])
        seg = out.bm[0][int((dur - win) * FS):, :]
        rms = np.sqrt(np.mean(seg**2, axis=0))
        return float(rms[ch]) if ch is not None else float(rms.max())

    lo_rms = steady_bm_rms(-60.0, None, probe, dur=0.7, win=0.2)
    hi_rms = steady_bm_rms(-20.0, None, probe, dur=0.7, win=0.2)
    growth = 20 * math.log10(hi_rms / lo_rms)
    check("compression growth < 20 dB", growth < 20, "growth=%.2f dB over 40 dB input" % growth)

    # 6. impairment: basal-half health=0
    health0 = np.ones(n_ch)
    health0[: n_ch // 2] = 0.0
    ch_hi = 12
    ch_lo = 60
    d_hi = 20 * math.log10(
        steady_bm_rms(-50.0, ch_hi, pf[ch_hi], health0)
        / steady_bm_rms(-50.0, ch_hi, pf[ch_hi])
    )
    d_lo = 20 * math.log10(
        steady_bm_rms(-50.0, ch_lo, pf[ch_lo], health0)
        / steady_bm_rms(-50.0, ch_lo, pf[ch_lo])
    )
    check("impairment high-CF drop >= 30 dB", d_hi <= -30, "delta=%.1f dB at %.0f Hz" % (d_hi, pf[ch_hi]))
    check("impairment apical |change| < 3 dB", abs(d_lo) < 3, "delta=%.2f dB at %.0f Hz" % (d_lo, pf[ch_lo]))

    # 7. four-tone distortion analysis
    freqs = [1600.0, 1800.0, 2000.0, 2200.0]
    x = cr.multitone(freqs, -30.0, 1.0, FS)
    m = cr.design_and_init(cr.default_design(FS))
    out = cr.run_segment(m, x[np.newaxis, :])
    n_fft = 8820  # 0.4 s, 2.5 Hz bins
    bm = out.bm[0][-n_fft:, :]
    spec = np.abs(np.fft.rfft(bm, axis=0)) / n_fft
    def bin_of(f):
        b = f * n_fft / FS
        assert abs(b - round(b)) < 1e-9, f
        return int(round(b))

    lines = [200, 400, 600, 1000, 1200, 1400, 2400]
    line_mag = {f: float(np.max(spec[bin_of(f), :])) for f in lines}
    strongest = max(line_mag.values())
    dc = float(np.max(spec[0, :]))
    check(
        "DC bin < -60 dB re strongest line",
        dc < strongest * 10 ** (-60 / 20),
        "dc=%.3e strongest=%.3e (%.1f dB down)" % (dc, strongest, 20 * math.log10(dc / strongest)),
    )
    # detection: line >= 20 dB above median of neighborhood bins in its best channel
    detected = {}
    for f in lines:
        b = bin_of(f)
        ch = int(np.argmax(spec[b, :]))
        nb = [b + d for d in range(-20, 21) if abs(d) > 2]
        floor = float(np.median(spec[nb, ch]))
        detected[f] = line_mag[f] >= 10 * floor
        print("   line %4d Hz: mag=%.3e floor=%.3e ch=%d %s" % (f, line_mag[f], floor, ch, "ok" if detected[f] else "WEAK"))
    check("distortion lines detected", all(detected.values()))

    # 8. delay-buffer equivalence
    p = cr.default_design(FS)
    m_r = cr.design_and_init(p)
    p2 = cr.default_design(FS)
    p2.car.use_delay_buffer = True
    m_d = cr.design_and_init(p2)
    imp = np.zeros(256)
    imp[0] = 1.0
    o_r = cr.run_segment(m_r, imp[np.newaxis, :], open_loop=True, linear=True)
    o_d = cr.run_segment(m_d, imp[np.newaxis, :], open_loop=True, linear=True)
    ok = True
    for ch in range(n_ch):
        a = o_r.bm[0][: 256 - ch, ch]
        b = o_d.bm[0][ch:, ch]
        if not np.array_equal(a, b):
            ok = False
            break
    check("delay-buffer stagger bit-exact", ok)

    gen = cr.NoiseGen(123)
    noise = gen.samples(int(0.3 * FS), cr.dbfs_amplitude(-30))
    cr.reset_state(m_r)
    cr.reset_state(m_d)
    o_r = cr.run_segment(m_r, noise[np.newaxis, :])
    o_d = cr.run_segment(m_d, noise[np.newaxis, :])

    def smooth(plane):
        eps = 1 - math.exp(-1 / (0.005 * FS))
        out = np.zeros_like(plane)
        acc = np.zeros(plane.shape[1])
        for i in range(plane.shape[0]):
            acc += eps * (plane[i] - acc)
            out[i] = acc
        return out

    s_r = smooth(o_r.nap[0])
    s_d = smooth(o_d.nap[0])
    skip = int(0.1 * FS)
    num = 0.0
    den = 0.0
    for ch in range(n_ch):
        a = s_r[skip : s_r.shape[0] - n_ch, ch]
        b = s_d[skip + ch : skip + ch + len(a), ch]
        num += float(np.sum((a - b) ** 2))
        den += float(np.sum(a**2))
    rel = math.sqrt(num / den)
    check("delay-buffer closed-loop smoothed diff < 1%", rel < 0.01, "rel=%.4f" % rel)

    # 9. quiescence
    m = cr.design_and_init(cr.default_design(FS))
    sil = np.zeros(int(0.06 * FS))
    out = cr.run_segment(m, sil[np.newaxis, :])
    tail = np.abs(out.nap[0][int(0.05 * FS):, :])
    check("silence NAP < 1e-9 after 50 ms", float(tail.max()) < 1e-9, "max=%.2e" % tail.max())

    # 10. capacitor bounds under +-1 fuzz
    rng = np.random.default_rng(7)
    ih = cr.init_ihc_state(model.ihc_coeffs, n_ch)
    ok = True
    for _ in range(20000):
        bm = rng.uniform(-1, 1, n_ch)
        cr.ihc_step(bm, model.ihc_coeffs, ih)
        if not (np.all(ih.cap1 >= 0) and np.all(ih.cap1 <= 1) and np.all(ih.cap2 >= 0) and np.all(ih.cap2 <= 1)):
            ok = False
            break
    check("capacitor voltages stay in [0,1]", ok)

    # extra diagnostics
    g1 = cr.stage_gain_parabola(cc, np.ones(n_ch))
    print("   g(u=1) range: %.4f..%.4f; r1+zr max=%.6f" % (g1.min(), g1.max(), (cc.r1 + cc.zr).max()))
    print("   quiescent rest_output=%.6f rest_cap1=%.6f rest_cap2=%.6f" % (
        model.ihc_coeffs.rest_output, model.ihc_coeffs.rest_cap1, model.ihc_coeffs.rest_cap2))
    print("total %.1f s" % (time.time() - t0))
    sys.exit(0 if all(PASSES) else 1)


if __name__ == "__main__":
    main()
