"""Train a small adversarial operator pair on synthetic field data.

A desk-scale run: the generator is the 5-layer reduced preset, the data is
a tau=1 random field at 32^2. A few hundred iterations are enough to watch
the generated statistics move toward the data statistics. Expect a few
minutes on a laptop CPU; bump ITERATIONS for a cleaner match.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import torch

from gano.data import DatasetSpec, realize_dataset
from gano.grf import GRFSpec, sample_grf
from gano.grid import Grid2D
from gano.models import field_function
from gano.rng import SeededRng
from gano.stats import histogram_w1, pointwise_histogram, radial_autocorrelation
from gano.training import TrainConfig, train

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)
torch.set_num_threads(1)

ITERATIONS = int(os.environ.get("DEMO_ITERATIONS", "300"))
GRID = Grid2D(32, 32)
INPUT_GRF = GRFSpec(tau=1.0)

config = TrainConfig(
    data=DatasetSpec(kind="grf", grid=GRID, count=2048, seed=100, grf=GRFSpec(tau=1.0)),
    input_grf=INPUT_GRF,
    grid=GRID,
    iterations=ITERATIONS,
    preset="small",
    n_d=3,
    n_g=1,
    batch_size=16,
    lambda_gp=100.0,
    lr=2e-4,
    betas=(0.0, 0.9),
    seed=1,
    dtype="float32",
    out_dir=os.path.join(OUT, "03_run"),
    checkpoint_every=max(100, ITERATIONS // 4),
)
print(f"training {ITERATIONS} iterations ...")
state = train(config)

# losses
w = [(r[0], r[2]) for r in state.history if r[1] == "d"]
g = [(r[0], r[4]) for r in state.history if r[1] == "g"]
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(*zip(*w), label="w_term", alpha=0.7)
ax.plot(*zip(*g), label="generator loss", alpha=0.7)
ax.set_xlabel("iteration")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "03_losses.png"), dpi=120)
plt.close(fig)

# generated vs held-out statistics
holdout = realize_dataset(DatasetSpec(kind="grf", grid=GRID, count=512, seed=200, grf=GRFSpec(tau=1.0)))
generated = field_function(state.generator)(sample_grf(INPUT_GRF, GRID, 512, SeededRng(999)))
lo = min(holdout.values.min(), generated.values.min())
hi = max(holdout.values.max(), generated.values.max())
h_data = pointwise_histogram(holdout, 64, (lo, hi))
h_gen = pointwise_histogram(generated, 64, (lo, hi))
print(f"histogram W1 distance: {histogram_w1(h_gen, h_data):.4f} (data std {holdout.values.std():.3f})")

fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
centers = 0.5 * (h_data.edges[:-1] + h_data.edges[1:])
axes[0].step(centers, h_data.masses, where="mid", label="data")
axes[0].step(centers, h_gen.masses, where="mid", label="generated")
axes[0].set_title("pointwise histogram")
axes[0].legend()
c_data = radial_autocorrelation(holdout, 16)
c_gen = radial_autocorrelation(generated, 16)
axes[1].plot(c_data.r, c_data.rho, label="data")
axes[1].plot(c_gen.r, c_gen.rho, label="generated")
axes[1].set_title("radial autocorrelation")
axes[1].legend()
axes[2].imshow(generated.values[0, :, :, 0], cmap="RdBu_r")
axes[2].set_title("a generated sample")
axes[2].axis("off")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "03_generated_stats.png"), dpi=120)
plt.close(fig)
print(f"wrote figures to {OUT}; checkpoints in {config.out_dir}")
