import numpy as np, time
import psdsketch as ps
from psdsketch.exact import frob_sq, spec_norm_sq, best_rank_k
from psdsketch.core import HardInstanceSpec, gen_hard_instance, hard_instance_best_rank_k_tail

cfg = ps.AlgoConfig()

def powerlaw_trial(n, k, eps, seeds, decay=1.0):
    m = ps.gen_powerlaw_psd(n, seed=5, decay=decay)
    _, tail_f, _ = best_rank_k(m, k)
    ratios, accs = [], []
    for s in seeds:
        o = m.oracle()
        f, rep = ps.algorithm1_frobenius(o, k, eps, cfg, seed=s)
        err = frob_sq(m.values - f.apply())
        ratios.append(err / tail_f); accs.append(rep.accesses)
    return np.array(ratios), np.array(accs)

def hard_trial(n, k, eps, seeds):
    succ, accs = [], []
    for s in seeds:
        spec = HardInstanceSpec(n, k, eps, "gamma_b", s)
        m, blocks = gen_hard_instance(spec)
        opt = hard_instance_best_rank_k_tail(spec, blocks)
        o = m.oracle()
        f, rep = ps.algorithm1_frobenius(o, k, eps, cfg, seed=s)
        err = frob_sq(m.values - f.apply())
        succ.append(err / opt <= 1 + eps); accs.append(rep.accesses)
    return np.array(succ), np.array(accs)

t0 = time.time()
r, a = powerlaw_trial(1024, 10, 0.5, range(20))
print(f"C1 powerlaw(1024,10,.5): ratios med {np.median(r):.3f} max {r.max():.3f} pass {np.sum(r<=1.5)}/20 acc {a.mean():.0f}")
r2, a2 = powerlaw_trial(1024, 4, 0.5, range(10))
print(f"   powerlaw(1024,4,.5): med {np.median(r2):.3f} max {r2.max():.3f} pass {np.sum(r2<=1.5)}/10 acc {a2.mean():.0f} (n2/10={1024*1024//10})")
s3, a3 = hard_trial(1024, 4, 0.5, range(12))
print(f"C12 hard(1024,4,.5): success {s3.sum()}/12 acc mean {a3.mean():.0f} max {a3.max()}")
print("time", time.time()-t0)
