"""Map how well mic-1 would hear each signal from anywhere on the floor.

Sweeps a grid of hypothetical source positions, applies the inverse-square
law plus wall attenuation along each path, and renders the sensor's detection
probability as a heatmap with the floor plan overlaid.

Run:  python demos/05_detection_heatmap.py   (writes detection_heatmap.png)
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import signalkg as sk
from signalkg.propagation import Point2D

kb = sk.load_demo_kb("building")
mic = kb.sensors["mic-1"]
law = kb.attenuation_laws["inverse-square"]
barriers = list(kb.barriers.values())

xs = np.linspace(-1.0, 19.0, 240)
ys = np.linspace(-1.0, 13.0, 168)

fig, axes = plt.subplots(1, 2, figsize=(13, 5), sharey=True)
for ax, signal_id in zip(axes, ("breaking-glass", "dropped-glass")):
    signal = kb.signals[signal_id]
    grid = np.empty((len(ys), len(xs)))
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            src = Point2D(float(x), float(y))
            d = sk.distance(src, mic.position)
            _, crossed = sk.crossings(src, mic.position, barriers)
            level = sk.received_level(signal.source_level, law, d, [kb.barriers[b] for b in crossed])
            grid[i, j] = sk.detection_prob(level, mic)

    im = ax.imshow(
        grid, origin="lower", extent=(xs[0], xs[-1], ys[0], ys[-1]),
        vmin=0.0, vmax=1.0, cmap="viridis", aspect="equal",
    )
    for b in barriers:
        (a, c) = b.segment
        ax.plot([a.x, c.x], [a.y, c.y], color="white", lw=2)
    for room in kb.rooms.values():
        ax.annotate(room.label, (room.centroid.x, room.centroid.y),
                    color="white", ha="center", fontsize=9)
    ax.plot(mic.position.x, mic.position.y, "r^", markersize=10, label="mic-1")
    ax.set_title(f"P(receive {signal_id}) at {signal.source_level:.0f} dB source")
    ax.legend(loc="lower right")

fig.colorbar(im, ax=axes, label="detection probability", shrink=0.85)
fig.savefig("detection_heatmap.png", dpi=130, bbox_inches="tight")
print("wrote detection_heatmap.png")
print(f"note the shadow behind the {kb.barriers['wall-interior'].attenuation:.0f} dB interior wall")
