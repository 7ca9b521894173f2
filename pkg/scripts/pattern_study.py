#!/usr/bin/env python3
"""Chamber-style pattern study of the 16x16 panel.

Synthesizes the feed-collimated broadside beam and a steered set, then
reports sidelobe level, beamwidth, directivity, gain after the element and
quantization loss budget, aperture efficiency, pointing accuracy, and scan
loss. Writes CSV cuts next to the printed summary.

Usage: python scripts/pattern_study.py [outdir]
"""

import math
import sys
from pathlib import Path

import numpy as np

from rissim import (
    ArrayGeometry,
    BeamSpec,
    Pose,
    aperture_efficiency,
    default_element_table,
    directivity_and_gain,
    hemisphere_grid,
    pattern_metrics,
    pattern_to_csv,
    principal_cut,
    quantization_loss,
    radiation_pattern,
    scan_loss,
    synthesize_codebook,
)

CARRIER_HZ = 27.0e9
BITS = 2
PANEL = ArrayGeometry(16, 16)
FEED = Pose.from_spherical(0.05, 0.0, 0.0)
FEED_EXPONENT = 8.31  # 12.7 dBi feed horn via G = 2(q+1)
FAR_RANGE = 100.0


def target(theta_deg: float, plane: str) -> Pose:
    base = 0.0 if plane == "E" else math.pi / 2
    azimuth = base if theta_deg >= 0 else base + math.pi
    return Pose.from_spherical(FAR_RANGE, math.radians(abs(theta_deg)), azimuth)


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("pattern_study_out")
    outdir.mkdir(parents=True, exist_ok=True)

    broadside = synthesize_codebook(BeamSpec(tx=FEED, rx=target(0, "E")),
                                    PANEL, CARRIER_HZ, BITS)
    cut = principal_cut(broadside, PANEL, CARRIER_HZ, plane="E", step_deg=0.25,
                        feed=FEED, feed_exponent=FEED_EXPONENT)
    pattern_to_csv(cut, outdir / "broadside_e_cut.csv")
    m = pattern_metrics(cut)
    print(f"broadside: SLL {m.sidelobe_level_db:.2f} dB, HPBW {m.hpbw_deg:.2f} deg")

    theta, phi = hemisphere_grid(1.0)
    full = radiation_pattern(broadside, PANEL, CARRIER_HZ, feed=FEED,
                             feed_exponent=FEED_EXPONENT, theta=theta, phi=phi)
    budget = (default_element_table().mean_insertion_loss_db()
              + quantization_loss(PANEL, BeamSpec(tx=FEED, rx=target(0, "E")),
                                  CARRIER_HZ, BITS))
    directivity_dbi, gain_dbi = directivity_and_gain(full, budget)
    efficiency = aperture_efficiency(gain_dbi, PANEL.aperture_area, CARRIER_HZ)
    print(f"directivity {directivity_dbi:.2f} dBi, gain {gain_dbi:.2f} dBi "
          f"(budget {budget:.2f} dB), aperture efficiency {100 * efficiency:.1f}%")

    for plane in ("E", "H"):
        reference = principal_cut(broadside, PANEL, CARRIER_HZ, plane=plane, step_deg=0.25,
                                  feed=FEED, feed_exponent=FEED_EXPONENT)
        for angle in (-10.0, -20.0, -30.0, -40.0, -50.0, -60.0):
            config = synthesize_codebook(BeamSpec(tx=FEED, rx=target(angle, plane)),
                                         PANEL, CARRIER_HZ, BITS)
            steered = principal_cut(config, PANEL, CARRIER_HZ, plane=plane, step_deg=0.25,
                                    feed=FEED, feed_exponent=FEED_EXPONENT)
            af = principal_cut(config, PANEL, CARRIER_HZ, plane=plane, step_deg=0.25,
                               feed=FEED, feed_exponent=FEED_EXPONENT, element_exponent=0.0)
            peak = math.degrees(af.theta[int(np.argmax(af.power[:, 0]))])
            loss = scan_loss(reference, steered)
            print(f"{plane}-plane steer {angle:+.0f} deg: peak {peak:+.2f} deg, "
                  f"scan loss {loss:.2f} dB")
            pattern_to_csv(steered, outdir / f"steer_{plane.lower()}_{int(-angle)}deg.csv")
    print(f"cuts written to {outdir}")


if __name__ == "__main__":
    main()
