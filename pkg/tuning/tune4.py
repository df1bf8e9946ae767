import numpy as np, time
import psdsketch as ps
from psdsketch.exact import frob_sq, spec_norm_sq, best_rank_k, exact_statistical_dimension, exact_ridge_regression, ridge_objective
from psdsketch.regression import RidgeProblem, sublinear_ridge

cfg = ps.AlgoConfig()
t0 = time.time()

# C2 spectral: n=1024, k=8, eps=.5
m = ps.gen_powerlaw_psd(1024, seed=7)
_, tail_f, tail_s = best_rank_k(m, 8)
ok = 0
for s in range(20):
    o = m.oracle()
    f, rep = ps.algorithm2_spectral(o, 8, 0.5, cfg, seed=s)
    se = spec_norm_sq(m.values - f.apply())
    ok += se <= 1.5 * tail_s + 0.5 / 8 * tail_f
print(f"C2 spectral(1024,8,.5): pass {ok}/20 acc {rep.accesses}")

# C2b: lam1=sqrt(n) spike, n=400, k=1
lam = np.ones(400); lam[0] = 20.0
m2 = ps.gen_spectrum_psd(400, lam, seed=3)
res = []
for s in range(5):
    o = m2.oracle()
    f, rep = ps.algorithm2_spectral(o, 1, 0.5, cfg, seed=s)
    res.append(np.sqrt(spec_norm_sq(m2.values - f.apply())))
print(f"C2b spike(400,1,.5): residual spectral norms {[f'{x:.2f}' for x in res]} (need <= 2)")

# C3 psd: n=512, k=6, eps=.5
m3 = ps.gen_powerlaw_psd(512, seed=11)
_, tf3, _ = best_rank_k(m3, 6)
ok3, psd_ok = 0, True
for s in range(20):
    o = m3.oracle()
    f, rep = ps.psd_output(o, 6, 0.5, cfg, seed=s)
    err = frob_sq(m3.values - f.apply())
    ok3 += err <= 1.5 * tf3
    ev = np.linalg.eigvalsh(f.apply())
    psd_ok &= ev.min() >= -1e-9 and np.linalg.matrix_rank(f.left, tol=1e-9) <= 6
print(f"C3 psd(512,6,.5): pass {ok3}/20 psd_always {psd_ok} acc {rep.accesses}")

# C4 ridge: fast decay n=1024
lam_spec = 2.0 ** (-np.arange(1, 1025, dtype=np.float64))
m4 = ps.gen_spectrum_psd(1024, lam_spec, seed=13)
lam_reg = 0.5
s_exact = exact_statistical_dimension(m4, lam_reg)
print(f"  s_lambda exact = {s_exact:.3f}")
ok4, accs4 = 0, []
for s in range(20):
    o = m4.oracle()
    y = ps.substream(s, "y").standard_normal(1024)
    prob = RidgeProblem(oracle=o, y=y, lam=lam_reg, s_lambda_hint=s_exact)
    x, rep = sublinear_ridge(prob, 0.5, cfg, seed=s)
    _, opt = exact_ridge_regression(m4, y, lam_reg)
    att = ridge_objective(m4, y, lam_reg, x)
    ok4 += att <= 1.5 * opt
    accs4.append(rep.accesses)
print(f"C4 ridge(1024): pass {ok4}/20 acc mean {np.mean(accs4):.0f} (cap {1024*1024//10})")
print("time", time.time() - t0)
