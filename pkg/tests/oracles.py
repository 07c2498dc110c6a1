"""Independent reference implementations used to pin expected test values.

Everything here is deliberately written the slow, direct way (explicit
sums, dense matrices, scalar loops) so it shares no code path with the
package implementations it checks.
"""

import numpy as np
import torch


def _axis_band_map(k: int, m_src: int, m_dst: int):
    """Target (frequency, weight) pairs for one source frequency.

    Upsampling splits an even source grid's Nyquist frequency -m/2 in half
    across +-m/2; downsampling drops frequencies beyond the target band and
    folds +-(m_dst/2) onto the target Nyquist.
    """
    if m_dst > m_src and m_src % 2 == 0 and k == -m_src // 2:
        candidates = [(m_src // 2, 0.5), (-m_src // 2, 0.5)]
    else:
        candidates = [(k, 1.0)]
    out = []
    for kk, w in candidates:
        if m_dst % 2 == 0:
            if abs(kk) > m_dst // 2:
                continue
            if kk == m_dst // 2:
                kk = -m_dst // 2
        elif abs(kk) > (m_dst - 1) // 2:
            continue
        out.append((kk, w))
    return out


def direct_dft_resample(values: np.ndarray, m_dst: int) -> np.ndarray:
    """O(n^4)-style direct-DFT band move (square grids, single channel).

    Forward coefficients by explicit sums, per-axis band mapping with
    Nyquist split/fold, direct inverse evaluation on the target nodes.
    """
    v = values
    m_src = v.shape[0]
    src_freqs = (np.fft.fftfreq(m_src) * m_src).astype(int)
    j = np.arange(m_src) / m_src
    coeff = np.zeros((m_src, m_src), complex)
    for a, ka in enumerate(src_freqs):
        for b, kb in enumerate(src_freqs):
            phase = np.exp(-2j * np.pi * (ka * j[:, None] + kb * j[None, :]))
            coeff[a, b] = np.sum(v * phase) / m_src**2
    dst = np.zeros((m_dst, m_dst), complex)
    for a, ka in enumerate(src_freqs):
        for b, kb in enumerate(src_freqs):
            for ka2, wa in _axis_band_map(int(ka), m_src, m_dst):
                for kb2, wb in _axis_band_map(int(kb), m_src, m_dst):
                    dst[ka2 % m_dst, kb2 % m_dst] += wa * wb * coeff[a, b]
    jd = np.arange(m_dst) / m_dst
    out = np.zeros((m_dst, m_dst), complex)
    dst_freqs = (np.fft.fftfreq(m_dst) * m_dst).astype(int)
    for a, ka in enumerate(dst_freqs):
        for b, kb in enumerate(dst_freqs):
            out += dst[a, b] * np.exp(2j * np.pi * (ka * jd[:, None] + kb * jd[None, :]))
    return out.real


def direct_circular_convolution(v: torch.Tensor, kernel: torch.Tensor) -> torch.Tensor:
    """sum_x kernel(y - x) v(x) / (m1*m2), node by node.

    v: (b, m1, m2, c_in); kernel: (m1, m2, c_in, c_out).
    """
    b, m1, m2, c_in = v.shape
    c_out = kernel.shape[-1]
    out = torch.zeros((b, m1, m2, c_out), dtype=v.dtype)
    for bi in range(b):
        for y1 in range(m1):
            for y2 in range(m2):
                acc = torch.zeros(c_out, dtype=v.dtype)
                for x1 in range(m1):
                    for x2 in range(m2):
                        acc += v[bi, x1, x2] @ kernel[(y1 - x1) % m1, (y2 - x2) % m2]
                out[bi, y1, y2] = acc / (m1 * m2)
    return out


def dense_covariance_from_eigenvalues(lam: np.ndarray) -> np.ndarray:
    """Dense stationary covariance matrix from the spectral eigenvalue grid."""
    m1, m2 = lam.shape
    c = np.fft.ifft2(lam).real * (m1 * m2)  # C(d) = sum_k lam_k exp(2 pi i k . d)
    i1 = np.arange(m1)
    i2 = np.arange(m2)
    d1 = (i1[:, None, None, None] - i1[None, None, :, None]) % m1
    d2 = (i2[None, :, None, None] - i2[None, None, None, :]) % m2
    return c[d1, d2].reshape(m1 * m2, m1 * m2)


def covariance_sqrt_samples(cov: np.ndarray, n: int, seed: int) -> np.ndarray:
    """Draw n samples via the dense matrix square root of cov."""
    w, v = np.linalg.eigh(cov)
    root = v @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ v.T
    gen = np.random.default_rng(seed)
    return gen.standard_normal((n, cov.shape[0])) @ root.T


def pair_sum_autocorrelation(v: np.ndarray, n_bins: int):
    """Direct O(n^4) periodic autocorrelation of one field, radially binned.

    Matches the package's binning convention: lag zero alone, then n_bins
    right-closed bins over (0, 1/2]; bins beyond 1/2 discarded.
    """
    m1, m2 = v.shape
    e = v - v.mean()
    var = np.mean(e**2)
    rho = np.zeros((m1, m2))
    for d1 in range(m1):
        for d2 in range(m2):
            s = 0.0
            for x1 in range(m1):
                for x2 in range(m2):
                    s += e[x1, x2] * e[(x1 + d1) % m1, (x2 + d2) % m2]
            rho[d1, d2] = s / (m1 * m2) / var
    dd1 = np.minimum(np.arange(m1), m1 - np.arange(m1)) / m1
    dd2 = np.minimum(np.arange(m2), m2 - np.arange(m2)) / m2
    dist = np.hypot(dd1[:, None], dd2[None, :])
    width = 0.5 / n_bins
    rs, rhos = [0.0], [rho[0, 0]]
    flat_d, flat_r = dist.ravel(), rho.ravel()
    keep = (flat_d > 0) & (flat_d <= 0.5 + 1e-12)
    bins = np.minimum(np.ceil(flat_d[keep] / width).astype(int) - 1, n_bins - 1)
    for q in range(n_bins):
        sel = bins == q
        if sel.any():
            rs.append((q + 0.5) * width)
            rhos.append(flat_r[keep][sel].mean())
    return np.asarray(rs), np.asarray(rhos)


def circular_stats_reference(angles):
    """Circular R_p, phi_p, variance and skewness by direct complex arithmetic."""
    theta = np.asarray(angles, dtype=np.float64)
    n = theta.size
    z1 = complex(sum(complex(np.cos(t), np.sin(t)) for t in theta))
    z2 = complex(sum(complex(np.cos(2 * t), np.sin(2 * t)) for t in theta))
    r1, p1 = abs(z1) / n, np.angle(z1)
    r2, p2 = abs(z2) / n, np.angle(z2)
    var = 1.0 - r1
    skew = r2 * np.sin(p2 - 2.0 * p1) / (1.0 - r1) ** 1.5 if (1 - r1) > 1e-9 else None
    return dict(r1=r1, phi1=p1, r2=r2, phi2=p2, variance=var, skewness=skew)


def adam_single_step(theta0: float, grad: float, lr: float, betas, eps: float = 1e-8) -> float:
    """Closed-form first Adam update for a single scalar parameter."""
    b1, b2 = betas
    m = (1 - b1) * grad
    v = (1 - b2) * grad**2
    m_hat = m / (1 - b1)
    v_hat = v / (1 - b2)
    return theta0 - lr * m_hat / (np.sqrt(v_hat) + eps)


def central_difference_grad(f, x: torch.Tensor, eps: float = 1e-4) -> torch.Tensor:
    """Elementwise central finite differences of a scalar function of x."""
    g = torch.zeros_like(x)
    flat = x.reshape(-1)
    gf = g.reshape(-1)
    for i in range(flat.numel()):
        orig = flat[i].item()
        flat[i] = orig + eps
        fp = float(f(x))
        flat[i] = orig - eps
        fm = float(f(x))
        flat[i] = orig
        gf[i] = (fp - fm) / (2 * eps)
    return g


def directional_derivative(f, params: list[torch.Tensor], direction: list[torch.Tensor], eps: float = 1e-4) -> float:
    """Central-difference directional derivative of scalar f along `direction`."""

    def shift(sign):
        with torch.no_grad():
            for p, d in zip(params, direction):
                p.add_(sign * eps * d)

    def value():
        out = f()
        return float(out.detach()) if torch.is_tensor(out) else float(out)

    shift(+1.0)
    fp = value()
    shift(-2.0)
    fm = value()
    shift(+1.0)
    return (fp - fm) / (2 * eps)
