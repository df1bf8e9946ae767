import numpy as np, time
import psdsketch as ps
from psdsketch.exact import exact_ridge_scores, exact_sqrt_ridge_scores
from psdsketch.pcp import column_pcp, row_pcp, verify_pcp

t0 = time.time()
cfg = ps.AlgoConfig()

# C5: exact lemmas, zero violations over 100 matrices x k
viol = 0
for i in range(100):
    n = 48 + (i % 5) * 16
    kind = i % 4
    gen = ps.substream(i, "c5")
    if kind == 0:
        mat = ps.gen_powerlaw_psd(n, seed=i)
    elif kind == 1:
        g = gen.standard_normal((n, n // 2)); mat = ps.PsdMatrix.from_dense(g @ g.T / n)
    elif kind == 2:
        lam = np.exp(-np.arange(n) / 3.0); mat = ps.gen_spectrum_psd(n, lam, seed=i)
    else:
        lam = np.ones(n); lam[: 3] = n; mat = ps.gen_spectrum_psd(n, lam, seed=i)
    for k in (1, 2, 5, 10):
        ts = exact_ridge_scores(mat.values, k)
        if ts.sum() > 2 * k + 1e-6: viol += 1
        tsq = exact_sqrt_ridge_scores(mat, k)
        if not (ts <= 2 * np.sqrt(n / k) * tsq + 1e-8).all(): viol += 1
print(f"C5: violations {viol} (need 0)")

# C6: approx scores within [tau, 3tau] entrywise, >= 18/20
good, diag_always = 0, True
for i in range(20):
    n = 256
    k = 2 + (i % 5) * 2
    kind = i % 3
    if kind == 0: mat = ps.gen_powerlaw_psd(n, seed=50 + i)
    elif kind == 1:
        lam = np.exp(-np.arange(n) / 10.0); mat = ps.gen_spectrum_psd(n, lam, seed=50 + i)
    else:
        lam = np.arange(1, n + 1, dtype=float) ** -2.0; mat = ps.gen_spectrum_psd(n, lam, seed=50 + i)
    o = mat.oracle()
    est = ps.approx_sqrt_ridge_scores(o, k, cfg, seed=900 + i)
    ex = exact_sqrt_ridge_scores(mat, k)
    ratio = est.values / ex
    ok = (ratio.min() >= 1.0) and (ratio.max() <= 3.0)
    good += ok
    diag_always &= np.all(np.diag(o._seen))
print(f"C6: in-window {good}/20, diag always read {diag_always}")
print("time", time.time() - t0)
