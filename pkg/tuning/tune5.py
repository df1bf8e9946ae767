import numpy as np, time
import psdsketch as ps
from psdsketch.exact import frob_sq, best_rank_k

cfg = ps.AlgoConfig()
t0 = time.time()

# C10: baseline quality at (1024, 8, .5), 10 runs; access ratio growth over n
m = ps.gen_powerlaw_psd(1024, seed=9)
_, tf, _ = best_rank_k(m, 8)
ok = 0
for s in range(10):
    o = m.oracle()
    f, rep = ps.sqrt_route_baseline(o, 8, 0.5, seed=s, config=cfg)
    ok += frob_sq(m.values - f.apply()) <= (1 + 3 * 0.5) * tf
print(f"C10 quality: {ok}/10 pass (<= 1+3eps), acc {rep.accesses}")

ratios = []
for n in (512, 1024, 2048):
    mm = ps.gen_powerlaw_psd(n, seed=21)
    o1 = mm.oracle()
    _, r1 = ps.sqrt_route_baseline(o1, 5, 0.5, seed=1, config=cfg)
    o2 = mm.oracle()
    _, r2 = ps.algorithm1_frobenius(o2, 5, 0.5, cfg, seed=1)
    ratios.append(r1.accesses / r2.accesses)
    print(f"  n={n}: baseline {r1.accesses} alg1 {r2.accesses} ratio {ratios[-1]:.2f}")
print("C10 monotone:", ratios[0] < ratios[1] < ratios[2])

# C11 scaling: k=5, eps=1.0
accs = []
for n in (512, 1024, 2048, 4096):
    mm = ps.gen_powerlaw_psd(n, seed=31)
    o = mm.oracle()
    _, rep = ps.algorithm1_frobenius(o, 5, 1.0, cfg, seed=2)
    accs.append(rep.accesses)
    print(f"  n={n}: acc {rep.accesses} frac {rep.accesses/n**2:.4f}")
ls = np.polyfit(np.log([512,1024,2048,4096]), np.log(accs), 1)
fr = [a/n**2 for a, n in zip(accs, (512,1024,2048,4096))]
print(f"C11 slope {ls[0]:.3f} (need <=1.5), decreasing {all(fr[i]>fr[i+1] for i in range(3))}")
print("time", time.time() - t0)
