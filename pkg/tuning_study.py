"""Scratch study: tune desk-scale training hyperparameters (not part of the package)."""
import os, sys, time, json
import numpy as np, torch
from gano.grid import Grid2D, FieldBatch
from gano.grf import GRFSpec, sample_grf
from gano.rng import SeededRng
from gano.data import DatasetSpec, realize_dataset
from gano.training import TrainConfig, train
from gano.models import field_function
from gano.stats import pointwise_histogram, histogram_w1, radial_autocorrelation

torch.set_num_threads(1)
GRID = Grid2D(32, 32)
INPUT = GRFSpec(tau=1.0)

def metrics(state, holdout, n_gen=512, eval_seed=999, mixture=False):
    gen_fn = field_function(state.generator)
    inputs = sample_grf(INPUT, GRID, n_gen, SeededRng(eval_seed).child("eval"))
    gen_b = gen_fn(inputs)
    gv, hv = gen_b.values, holdout.values
    lo = min(gv.min(), hv.min()); hi = max(gv.max(), hv.max())
    hg = pointwise_histogram(gen_b, 64, (lo, hi)); hh = pointwise_histogram(holdout, 64, (lo, hi))
    w1 = histogram_w1(hg, hh)
    thr = 0.15 * hv.std()
    ag = radial_autocorrelation(gen_b, 16); ah = radial_autocorrelation(holdout, 16)
    mask = (ag.r > 0) & (ag.r <= 0.25)
    dev = np.max(np.abs(ag.rho[mask] - ah.rho[mask]))
    out = dict(w1=float(w1), w1_thr=float(thr), ac_dev=float(dev),
               gen_std=float(gv.std()), data_std=float(hv.std()),
               gen_mean=float(gv.mean()), data_mean=float(hv.mean()))
    if mixture:
        frac = float(np.mean(gen_b.values.mean(axis=(1,2,3)) > 0))
        out["frac_pos"] = frac
        # bimodality: peaks of pooled histogram
        masses = hg.masses
        centers = 0.5*(hg.edges[:-1]+hg.edges[1:])
        loc = [i for i in range(1,63) if masses[i] >= masses[i-1] and masses[i] >= masses[i+1] and masses[i] > 0.005]
        out["peaks"] = [float(centers[i]) for i in loc]
    return out

def run(tag, kind, lam, n_d, lr, total, chunk, seed, betas=(0.5,0.9), n_g=1):
    if kind == "grf":
        data = DatasetSpec(kind="grf", grid=GRID, count=2048, seed=100, grf=GRFSpec(tau=1.0))
        holdout = realize_dataset(DatasetSpec(kind="grf", grid=GRID, count=512, seed=200, grf=GRFSpec(tau=1.0)))
        mix = False
    else:
        data = DatasetSpec(kind="mixture", grid=GRID, count=2048, seed=100, grf=GRFSpec(tau=1.0))
        holdout = realize_dataset(DatasetSpec(kind="mixture", grid=GRID, count=512, seed=200, grf=GRFSpec(tau=1.0)))
        mix = True
    out_dir = f"/tmp/study/{tag}"
    os.makedirs(out_dir, exist_ok=True)
    resume = None
    done = 0
    while done < total:
        done = min(done + chunk, total)
        cfg = TrainConfig(data=data, input_grf=INPUT, grid=GRID, iterations=done,
                          preset="small", n_d=n_d, n_g=n_g, batch_size=16, lambda_gp=lam,
                          lr=lr, betas=betas, seed=seed, dtype="float32",
                          checkpoint_every=10**9, out_dir=out_dir)
        t0 = time.time()
        state = train(cfg, resume=resume)
        resume = os.path.join(out_dir, f"checkpoint_{done:06d}.pt")
        m = metrics(state, holdout, mixture=mix)
        d_rows = [r for r in state.history if r[1]=="d"][-50:]
        m["w_term_recent"] = float(np.mean([r[2] for r in d_rows]))
        m["pen_recent"] = float(np.mean([r[3] for r in d_rows]))
        print(f"[{tag}] iter={done} dt={time.time()-t0:.0f}s " + json.dumps(m), flush=True)

if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which in ("all", "K"):
        run("K_grf_nd8_lam100_lr2e4_b0", "grf", 100.0, 8, 2e-4, 900, 300, seed=1, betas=(0.0, 0.9))
    if which in ("all", "M"):
        run("M5_mix_nd8_lam100_lr2e4_b0", "mixture", 100.0, 8, 2e-4, 900, 300, seed=1, betas=(0.0, 0.9))
