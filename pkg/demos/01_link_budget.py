"""Link budget walkthrough: geometry, path loss, received power, Shannon rate.

Sweeps the elevation angle of a 600 km link at 30 GHz and prints the full
budget chain, then renders the rate-vs-elevation curve as an SVG.
"""
import math
from pathlib import Path

import numpy as np

from satloop import Geometry, LinkParams, fspl_db, received_power_w, shannon_rate_bps, slant_range_m
from satloop import svgplot

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

print("=" * 70)
print("Downlink budget: 20 W, 38.5 dBi satellite antenna, 14 dBi terminal")
print("=" * 70)

elevations = np.linspace(30.0, 90.0, 13)
rates = []
print(f"{'elev':>5} {'slant km':>9} {'FSPL dB':>8} {'P_rx dBW':>9} {'rate @40kHz':>12}")
for elev in elevations:
    geom = Geometry(satellite_altitude_m=600e3, elevation_deg=float(elev))
    link = LinkParams(tx_power_w=20.0, tx_gain_dbi=38.5, rx_gain_dbi=14.0,
                      carrier_freq_hz=30e9, bandwidth_hz=40e3,
                      noise_temperature_k=290.0, geometry=geom)
    d = slant_range_m(geom)
    loss = fspl_db(d, 30e9)
    p_rx = received_power_w(link)
    rate = shannon_rate_bps(link)
    rates.append(rate)
    print(f"{elev:5.1f} {d / 1e3:9.1f} {loss:8.2f} {10 * math.log10(p_rx):9.2f} "
          f"{rate / 1e3:9.1f} kbps")

print()
print("Doubling the distance always costs 20*log10(2) = 6.02 dB:")
print(f"  fspl(1200 km) - fspl(600 km) = "
      f"{fspl_db(1200e3, 30e9) - fspl_db(600e3, 30e9):.4f} dB")

svg = svgplot.line_chart(
    list(elevations), [("downlink", rates)],
    "Shannon rate vs elevation (600 km, 30 GHz, 40 kHz)",
    "elevation (deg)", "rate (bit/s)")
(OUT / "link_budget.svg").write_text(svg)
print(f"\nwrote {OUT / 'link_budget.svg'}")
